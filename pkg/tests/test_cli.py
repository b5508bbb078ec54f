import csv
import io
import json
import subprocess
import sys

import pytest

from fockfit.analysis import AnalysisConfig, run_analysis
from fockfit.cli import main
from fockfit.combination import FitStrategy
from fockfit.dataset import Dataset, MembershipRecord
from fockfit.oracles import sample_classical_records
from fockfit.report import PLOT_FIELDS, REPORT_SCHEMA, emit_report


def run_cli(capsysbinary, *argv):
    code = main(list(argv))
    out, err = capsysbinary.readouterr()
    return code, out, err.decode()


class TestRunAnalysis:
    def test_paper_dataset_labels(self, paper_dataset):
        report = run_analysis(paper_dataset)
        by_item = {}
        for res in report.records:
            by_item.setdefault(res.record.item, []).append(res)
        assert by_item["Mint"][0].pairs[0].deviation.kind.value == "DOUBLE_OVEREXTENDED"
        assert by_item["Sunglasses"][0].pairs[0].deviation.kind.value == "DOUBLE_UNDEREXTENDED"
        gold = by_item["Goldfish"][0].negation
        assert not gold.classicality.classical and gold.kolmogorov is False
        assert gold.construct_error is not None
        assert len(report.records) == len(paper_dataset)

    def test_olive_or_infeasible_is_embedded(self, paper_dataset):
        report = run_analysis(paper_dataset)
        olive_or = [p for r in report.records for p in r.pairs
                    if r.record.item == "Olive" and p.weights.connective.value == "OR"]
        (pair,) = olive_or
        assert pair.params is None and "outside reachable range" in pair.error
        assert report.summary["pair_infeasible"] == 1

    def test_synthetic_classical(self):
        records = []
        for i, neg in enumerate(sample_classical_records(20, 2)):
            records.append(MembershipRecord(
                f"s{i}", "A", "B", neg.mu_a, neg.mu_b, neg.mu_a_neg, neg.mu_b_neg,
                neg.mu_ab, None, neg.mu_ab_neg, neg.mu_aneg_b, neg.mu_aneg_bneg))
        report = run_analysis(Dataset(tuple(records)))
        assert report.summary["classical"] == 20 and report.summary["nonclassical"] == 0
        for res in report.records:
            assert max(abs(r) for r in res.negation.fit.residuals.values()) <= 1e-6
            for pair in res.pairs:
                if pair.params is not None:
                    assert abs(pair.residual) <= 1e-6
                else:
                    # anticorrelated joints fall below the two-sector pair model's range
                    assert pair.weights.mu_combined < pair.feasible[0]

    def test_single_record(self):
        rec = MembershipRecord("Mint", "Food", "Plant", 0.87, 0.81, mu_and=0.9)
        report = run_analysis(Dataset((rec,)), AnalysisConfig(strategy=FitStrategy.fix_m2(0.3)))
        (res,) = report.records
        assert report.summary["sector1_weight"]["mean"] == pytest.approx(res.pairs[0].params.n_sq)
        assert report.summary["deviations"] == {"DOUBLE_OVEREXTENDED": 1}

    def test_verify_mode(self, paper_dataset):
        report = run_analysis(paper_dataset, AnalysisConfig(verify=True))
        for res in report.records:
            for pair in res.pairs:
                if pair.params is not None:
                    assert pair.verify["agrees"]
            if res.negation is not None:
                assert res.negation.verify["oracle_agrees"]
                assert res.negation.verify["grid_ok"]

    def test_check_mode_skips_fits(self, paper_dataset):
        report = run_analysis(paper_dataset, AnalysisConfig(mode="check"))
        assert all(p.params is None for r in report.records for p in r.pairs)
        assert "pair_fits" not in report.summary

    def test_bad_config(self):
        with pytest.raises(ValueError):
            AnalysisConfig(mode="plot")
        with pytest.raises(ValueError):
            AnalysisConfig(tolerance=0.0)


class TestReports:
    def test_goldfish_json_has_five_residuals(self, paper_dataset):
        report = run_analysis(paper_dataset)
        doc = json.loads(emit_report(report, "json"))
        assert doc["schema"] == REPORT_SCHEMA
        gold = next(r for r in doc["records"] if r["item"] == "Goldfish")
        residuals = gold["negation"]["classicality"]["residuals"]
        assert len(residuals) == 5
        assert residuals[0] == pytest.approx(-0.41)
        assert residuals[4] == pytest.approx(0.95)

    @pytest.mark.parametrize("fmt", ["json", "csv", "plotdata"])
    def test_empty_report(self, fmt):
        payload = emit_report(run_analysis(Dataset()), fmt).decode()
        if fmt == "json":
            doc = json.loads(payload)
            assert doc["records"] == [] and doc["summary"]["records"] == 0
        else:
            assert len(payload.strip().splitlines()) == 1

    def test_plotdata_rows(self, paper_dataset):
        text = emit_report(run_analysis(paper_dataset), "plotdata").decode()
        rows = list(csv.DictReader(io.StringIO(text), delimiter="\t"))
        assert tuple(rows[0].keys()) == PLOT_FIELDS
        assert [r["item"] for r in rows] == [r.item for r in paper_dataset]
        gold = next(r for r in rows if r["item"] == "Goldfish")
        assert gold["unit"] == "NEG" and float(gold["margin"]) == pytest.approx(0.95)
        olive_or = next(r for r in rows if r["item"] == "Olive" and r["unit"] == "OR")
        assert olive_or["n_sq"] == "" and float(olive_or["margin"]) == pytest.approx(0.2)

    def test_csv_has_quadrant_rows(self, paper_dataset):
        text = emit_report(run_analysis(paper_dataset), "csv").decode()
        units = [r["unit"] for r in csv.DictReader(io.StringIO(text))]
        assert units.count("NEG:AB") == 1 and units.count("NEG:A'B'") == 1


class TestCommandLine:
    def test_analyze_deterministic(self, capsysbinary):
        a = run_cli(capsysbinary, "analyze", "paper.csv", "--seed", "7")
        b = run_cli(capsysbinary, "analyze", "paper.csv", "--seed", "7")
        assert a[0] == 0 and a[1] == b[1]

    def test_fit_strategy(self, capsysbinary):
        code, out, _ = run_cli(capsysbinary, "fit", "mint.csv", "--strategy", "fix-m2=0.3")
        assert code == 0
        pair = json.loads(out)["records"][0]["pairs"][0]
        assert pair["fit"]["theta_deg"] == pytest.approx(23.8876580824, abs=1e-9)

    def test_check_and_construct(self, capsysbinary, tmp_path):
        out_file = tmp_path / "c.json"
        assert run_cli(capsysbinary, "check", "goldfish.csv", "-o", str(out_file))[0] == 0
        doc = json.loads(out_file.read_text())
        assert doc["summary"]["nonclassical"] == 1
        code, out, _ = run_cli(capsysbinary, "construct", "goldfish.csv", "--format", "csv")
        assert code == 0 and b"not classical" in out

    def test_io_error(self, capsysbinary):
        code, _, err = run_cli(capsysbinary, "analyze", "/nonexistent/x.csv")
        assert code == 1 and "cannot read" in err

    def test_parse_error(self, capsysbinary, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("item,mu_a,mu_b,mu_and\nx,abc,0.2,0.1\n")
        code, _, err = run_cli(capsysbinary, "analyze", str(bad))
        assert code == 1 and "line 2" in err

    def test_config_errors(self, capsysbinary):
        assert run_cli(capsysbinary, "fit", "mint.csv", "--strategy", "fix-m2=7")[0] == 2
        assert run_cli(capsysbinary, "check", "mint.csv", "--tolerance", "-1")[0] == 2
        assert run_cli(capsysbinary, "analyze", "mint.csv", "--input-format", "json")[0] == 1

    def test_rejected_rows_reported(self, capsysbinary, tmp_path):
        f = tmp_path / "r.csv"
        f.write_text("item,mu_a,mu_b,mu_and\nx,1.5,0.2,0.1\ny,0.5,0.2,0.1\n")
        code, out, err = run_cli(capsysbinary, "check", str(f))
        assert code == 0 and "rejected line 2" in err
        assert json.loads(out)["summary"]["records"] == 1

    def test_empty_dataset(self, capsysbinary, tmp_path):
        f = tmp_path / "e.csv"
        f.write_text("")
        code, out, _ = run_cli(capsysbinary, "analyze", str(f))
        assert code == 0 and json.loads(out)["records"] == []

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "fockfit", "check", "mint.csv",
                               "--format", "plotdata"], capture_output=True, text=True)
        assert proc.returncode == 0
        assert proc.stdout.splitlines()[0].split("\t") == list(PLOT_FIELDS)
