import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fockfit.combination import Connective
from fockfit.dataset import (
    CSV_COLUMNS,
    Dataset,
    DatasetError,
    MembershipRecord,
    data_dir,
    dump_dataset,
    load_dataset,
    resolve_path,
)

HEADER = ",".join(CSV_COLUMNS)


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestBundled:
    def test_mint(self):
        ds = load_dataset(data_dir() / "mint.csv")
        (rec,) = ds.records
        (pair,) = rec.pair_weights()
        assert (pair.mu_a, pair.mu_b, pair.mu_combined) == (0.87, 0.81, 0.9)
        assert pair.connective is Connective.AND
        assert "Hampton" in ds.provenance

    def test_goldfish(self):
        (rec,) = load_dataset(data_dir() / "goldfish.csv").records
        neg = rec.negation_record()
        assert neg.weights == (0.93, 0.17, 0.12, 0.81, 0.43, 0.91, 0.18, 0.43)

    def test_paper_dataset(self, paper_dataset):
        assert [r.item for r in paper_dataset] == ["Mint", "Sunglasses", "John", "Goldfish",
                                                   "Olive", "Olive"]

    def test_every_fixture_loads(self):
        for path in sorted(data_dir().glob("*.csv")):
            ds = load_dataset(path)
            assert len(ds) >= 1 and not ds.rejected


class TestParsing:
    def test_empty_file(self, tmp_path, caplog):
        ds = load_dataset(write(tmp_path, "e.csv", ""))
        assert len(ds) == 0
        assert "empty" in caplog.text

    def test_empty_json(self, tmp_path):
        assert len(load_dataset(write(tmp_path, "e.json", '{"records": []}'))) == 0

    def test_missing_optional_columns(self, tmp_path):
        path = write(tmp_path, "p.csv", "item,mu_a,mu_b,mu_or\nx,0.2,0.3,0.4\n")
        (rec,) = load_dataset(path).records
        assert rec.mu_and is None and rec.mu_a_neg is None
        assert not rec.has_negation_data

    def test_out_of_range_rejected_per_row(self, tmp_path):
        text = f"{HEADER}\na,A,B,0.2,0.3,,,0.1,,,,\nb,A,B,1.2,0.3,,,0.1,,,,\nc,A,B,0.5,0.5,,,0.7,,,,\n"
        ds = load_dataset(write(tmp_path, "r.csv", text))
        assert [r.item for r in ds] == ["a", "c"]
        (issue,) = ds.rejected
        assert issue.line == 3 and "mu_a" in issue.message

    def test_malformed_rows_report_line_numbers(self, tmp_path):
        text = f"# comment\n{HEADER}\na,A,B,0.2,0.3,,,0.1,,,,\nb,A,B,zero,0.3,,,0.1,,,,\nc,A,B\n"
        with pytest.raises(DatasetError) as info:
            load_dataset(write(tmp_path, "m.csv", text))
        assert [i.line for i in info.value.issues] == [4, 5]
        text = f"{HEADER}\nb,A,B,zero,0.3,,,0.1,,,,\n"
        with pytest.raises(DatasetError) as info:
            load_dataset(write(tmp_path, "m2.csv", text))
        assert "line 2" in str(info.value)

    def test_record_without_combination(self, tmp_path):
        with pytest.raises(DatasetError):
            load_dataset(write(tmp_path, "n.csv", "item,mu_a,mu_b\nx,0.1,0.2\n"))

    def test_unknown_column(self, tmp_path):
        with pytest.raises(DatasetError, match="unknown columns"):
            load_dataset(write(tmp_path, "u.csv", "item,mu_a,mu_b,mu_xor\nx,0.1,0.2,0.3\n"))

    def test_json_records(self, tmp_path):
        doc = {"provenance": "synthetic", "records": [
            {"item": "x", "mu_a": 0.1, "mu_b": 0.2, "mu_and": 0.05}]}
        ds = load_dataset(write(tmp_path, "d.json", json.dumps(doc)))
        assert ds.provenance == "synthetic" and ds.records[0].mu_and == 0.05

    def test_bad_json(self, tmp_path):
        with pytest.raises(DatasetError):
            load_dataset(write(tmp_path, "d.json", "{"))


class TestLocation:
    def test_env_override(self, tmp_path, monkeypatch):
        write(tmp_path, "only_here.csv", "item,mu_a,mu_b,mu_and\nx,0.1,0.2,0.05\n")
        monkeypatch.setenv("FOCKFIT_DATA_DIR", str(tmp_path))
        assert data_dir() == tmp_path
        assert resolve_path("only_here.csv") == tmp_path / "only_here.csv"

    def test_missing(self):
        with pytest.raises(FileNotFoundError):
            resolve_path("no-such-dataset.csv")


six_digits = st.integers(0, 10 ** 6).map(lambda k: float(f"{k / 10 ** 6:.6f}"))
optional = st.one_of(st.none(), six_digits)
label = st.text(st.characters(min_codepoint=33, max_codepoint=126, blacklist_characters="#"),
                min_size=1, max_size=8)
record = st.builds(MembershipRecord, item=label, concept_a=label, concept_b=label,
                   mu_a=six_digits, mu_b=six_digits, mu_a_neg=optional, mu_b_neg=optional,
                   mu_and=six_digits, mu_or=optional, mu_a_bneg=optional,
                   mu_aneg_b=optional, mu_aneg_bneg=optional)


@settings(max_examples=200, deadline=None)
@given(st.lists(record, max_size=5), st.sampled_from(["csv", "json"]))
def test_round_trip(tmp_path_factory, records, fmt):
    ds = Dataset(tuple(records), "source line")
    path = tmp_path_factory.mktemp("rt") / f"d.{fmt}"
    path.write_text(dump_dataset(ds, fmt))
    back = load_dataset(path)
    assert back.records == ds.records
    assert back.provenance == ds.provenance
