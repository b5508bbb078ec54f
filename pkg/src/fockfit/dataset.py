"""Reading and writing membership datasets (CSV and JSON)."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
from dataclasses import dataclass, fields
from importlib import resources
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Union

from .combination import Connective, PairWeights
from .negation import NegationRecord

log = logging.getLogger(__name__)

CSV_COLUMNS = (
    "item", "concept_a", "concept_b",
    "mu_a", "mu_b", "mu_a_neg", "mu_b_neg",
    "mu_and", "mu_or", "mu_a_bneg", "mu_aneg_b", "mu_aneg_bneg",
)
LABEL_COLUMNS = CSV_COLUMNS[:3]
WEIGHT_COLUMNS = CSV_COLUMNS[3:]

DATASET_SCHEMA = "fockfit.dataset/1"
DATA_DIR_ENV = "FOCKFIT_DATA_DIR"


class DatasetError(ValueError):
    """A dataset file could not be parsed; ``issues`` lists every bad row."""

    def __init__(self, path, issues: List["RowIssue"]):
        lines = "; ".join(str(i) for i in issues[:20])
        more = f" (+{len(issues) - 20} more)" if len(issues) > 20 else ""
        super().__init__(f"{path}: {lines}{more}")
        self.issues = issues


@dataclass(frozen=True)
class RowIssue:
    line: int
    message: str

    def __str__(self):
        return f"line {self.line}: {self.message}"


@dataclass(frozen=True)
class MembershipRecord:
    """One item's weights; any weight may be absent (``None``)."""

    item: str
    concept_a: str = ""
    concept_b: str = ""
    mu_a: Optional[float] = None
    mu_b: Optional[float] = None
    mu_a_neg: Optional[float] = None
    mu_b_neg: Optional[float] = None
    mu_and: Optional[float] = None
    mu_or: Optional[float] = None
    mu_a_bneg: Optional[float] = None
    mu_aneg_b: Optional[float] = None
    mu_aneg_bneg: Optional[float] = None

    def __post_init__(self):
        if not self.item:
            raise ValueError("record has no item label")
        if self.mu_a is None or self.mu_b is None:
            raise ValueError("mu_a and mu_b are required")
        combos = (self.mu_and, self.mu_or, self.mu_a_bneg, self.mu_aneg_b, self.mu_aneg_bneg)
        if all(c is None for c in combos):
            raise ValueError("record has no combination weight")
        for name in WEIGHT_COLUMNS:
            value = getattr(self, name)
            if value is not None and not (0.0 <= value <= 1.0):
                raise ValueError(f"{name}={value!r} outside [0, 1]")

    @property
    def has_negation_data(self) -> bool:
        return all(getattr(self, c) is not None for c in WEIGHT_COLUMNS if c != "mu_or")

    def pair_weights(self) -> List[PairWeights]:
        out = []
        for conn, value in ((Connective.AND, self.mu_and), (Connective.OR, self.mu_or)):
            if value is not None:
                out.append(PairWeights(self.mu_a, self.mu_b, value, conn,
                                       self.item, self.concept_a, self.concept_b))
        return out

    def negation_record(self) -> Optional[NegationRecord]:
        if not self.has_negation_data:
            return None
        return NegationRecord(
            self.mu_a, self.mu_b, self.mu_a_neg, self.mu_b_neg,
            self.mu_and, self.mu_a_bneg, self.mu_aneg_b, self.mu_aneg_bneg,
            self.item, self.concept_a, self.concept_b,
        )

    def as_row(self) -> Dict[str, Union[str, float, None]]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class Dataset:
    records: Tuple[MembershipRecord, ...] = ()
    provenance: str = ""
    rejected: Tuple[RowIssue, ...] = ()

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


# --------------------------------------------------------------------------
# locating files
# --------------------------------------------------------------------------


def data_dir() -> Path:
    """Bundled fixture directory, overridable with ``$FOCKFIT_DATA_DIR``."""
    override = os.environ.get(DATA_DIR_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("fockfit") / "data"))


def resolve_path(name: Union[str, Path]) -> Path:
    """``name`` itself if it exists, else the same name in :func:`data_dir`."""
    path = Path(name)
    if path.exists():
        return path
    candidate = data_dir() / path.name
    if candidate.exists():
        return candidate
    raise FileNotFoundError(f"no such dataset: {name} (also looked in {data_dir()})")


# --------------------------------------------------------------------------
# parsing
# --------------------------------------------------------------------------


def _parse_weight(text) -> Optional[float]:
    if text is None:
        return None
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        value = float(text)
    else:
        text = str(text).strip()
        if not text:
            return None
        value = float(text)
    if math.isnan(value):
        raise ValueError("NaN weight")
    return value


def _build_records(rows: Iterable[Tuple[int, Dict]], path,
                   malformed: List[RowIssue]) -> Tuple[List[MembershipRecord], List[RowIssue]]:
    records: List[MembershipRecord] = []
    rejected: List[RowIssue] = []
    for line, row in rows:
        try:
            weights = {c: _parse_weight(row.get(c)) for c in WEIGHT_COLUMNS}
        except (TypeError, ValueError) as exc:
            malformed.append(RowIssue(line, f"unparseable weight ({exc})"))
            continue
        out_of_range = [c for c, v in weights.items() if v is not None and not 0.0 <= v <= 1.0]
        if out_of_range:
            issue = RowIssue(line, "weights outside [0, 1]: " + ", ".join(
                f"{c}={weights[c]!r}" for c in out_of_range))
            log.warning("%s: rejected %s", path, issue)
            rejected.append(issue)
            continue
        labels = {c: str(row.get(c) or "").strip() for c in LABEL_COLUMNS}
        try:
            records.append(MembershipRecord(**labels, **weights))
        except ValueError as exc:
            malformed.append(RowIssue(line, str(exc)))
    if malformed:
        raise DatasetError(path, sorted(malformed, key=lambda i: i.line))
    return records, rejected


def _read_csv(text: str, path) -> Dataset:
    comments: List[str] = []
    body: List[Tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            comments.append(stripped.lstrip("#").strip())
            continue
        body.append((lineno, raw))
    provenance = "\n".join(comments)
    if not body:
        return Dataset((), provenance)

    header_line, header_text = body[0]
    header = [h.strip() for h in next(csv.reader([header_text]))]
    unknown = [h for h in header if h not in CSV_COLUMNS]
    if unknown or len(set(header)) != len(header):
        problem = f"unknown columns {unknown}" if unknown else "duplicate columns"
        raise DatasetError(path, [RowIssue(header_line, f"bad header: {problem}")])

    rows: List[Tuple[int, Dict]] = []
    bad: List[RowIssue] = []
    for lineno, raw in body[1:]:
        cells = next(csv.reader([raw]))
        if len(cells) != len(header):
            bad.append(RowIssue(lineno, f"expected {len(header)} cells, found {len(cells)}"))
            continue
        rows.append((lineno, dict(zip(header, cells))))
    records, rejected = _build_records(rows, path, bad)
    return Dataset(tuple(records), provenance, tuple(rejected))


def _read_json(text: str, path) -> Dataset:
    if not text.strip():
        return Dataset()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DatasetError(path, [RowIssue(exc.lineno, f"invalid JSON: {exc.msg}")]) from None
    if isinstance(doc, list):
        doc = {"records": doc}
    if not isinstance(doc, dict) or not isinstance(doc.get("records", []), list):
        raise DatasetError(path, [RowIssue(1, "expected an object with a 'records' list")])
    schema = doc.get("schema", DATASET_SCHEMA)
    if schema != DATASET_SCHEMA:
        raise DatasetError(path, [RowIssue(1, f"unsupported schema {schema!r}")])
    rows = []
    bad = []
    for index, entry in enumerate(doc.get("records", []), start=1):
        if not isinstance(entry, dict):
            bad.append(RowIssue(index, "record is not an object"))
            continue
        unknown = sorted(set(entry) - set(CSV_COLUMNS))
        if unknown:
            bad.append(RowIssue(index, f"unknown fields {unknown}"))
            continue
        rows.append((index, entry))
    records, rejected = _build_records(rows, path, bad)
    return Dataset(tuple(records), str(doc.get("provenance", "")), tuple(rejected))


def load_dataset(path: Union[str, Path], fmt: Optional[str] = None) -> Dataset:
    """Load a CSV or JSON dataset.

    ``fmt`` defaults to the file suffix. For JSON, issue "line" numbers are
    1-based record indices. Rows with weights outside [0, 1] are dropped and
    listed in ``Dataset.rejected``; any other malformed row raises
    :class:`DatasetError` naming every offending line.
    """
    path = Path(path)
    fmt = (fmt or path.suffix.lstrip(".") or "csv").lower()
    text = path.read_text(encoding="utf-8")
    if fmt == "csv":
        ds = _read_csv(text, path)
    elif fmt == "json":
        ds = _read_json(text, path)
    else:
        raise ValueError(f"unsupported dataset format {fmt!r}")
    if not ds.records:
        log.warning("%s: dataset is empty", path)
    return ds


def _fmt_weight(value: Optional[float]) -> str:
    return "" if value is None else repr(float(value))


def dump_dataset(ds: Dataset, fmt: str = "csv") -> str:
    """Serialise a dataset so that :func:`load_dataset` reads it back unchanged."""
    fmt = fmt.lower()
    if fmt == "json":
        doc = {
            "schema": DATASET_SCHEMA,
            "provenance": ds.provenance,
            "records": [r.as_row() for r in ds.records],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt != "csv":
        raise ValueError(f"unsupported dataset format {fmt!r}")
    buf = io.StringIO()
    for line in ds.provenance.splitlines():
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in ds.records:
        row = r.as_row()
        writer.writerow([row[c] for c in LABEL_COLUMNS] + [_fmt_weight(row[c]) for c in WEIGHT_COLUMNS])
    return buf.getvalue()
