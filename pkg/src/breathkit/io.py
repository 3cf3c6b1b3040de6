"""CSV and JSON serialization of sweeps and reports."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import IO, Any, Dict, Iterable, List, Optional

from .partition import Validity
from .sweep import ExtremaReport, SweepPoint

SWEEP_COLUMNS = ("xi", "n", "alpha", "u_bs", "u_vs", "chi", "a_body_tilde", "validity")
COMMANDS = ("classify", "eval", "sweep", "verify", "limits")
FORMATS = ("csv", "json")


@dataclass
class RunManifest:
    """One validated command-line invocation."""

    command: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    output_format: str = "csv"
    output_path: Optional[str] = None

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.output_format not in FORMATS:
            raise ValueError(f"unknown output format {self.output_format!r}")


def format_number(x: float) -> str:
    """17 significant digits; infinities as ``+inf``/``-inf``, NaN as empty."""
    if isinstance(x, int):
        return str(x)
    if math.isnan(x):
        return ""
    if math.isinf(x):
        return "+inf" if x > 0 else "-inf"
    return format(x, ".17g")


def parse_number(text: str) -> float:
    text = text.strip()
    if text == "":
        return math.nan
    if text in ("+inf", "inf"):
        return math.inf
    if text == "-inf":
        return -math.inf
    return float(text)


def json_number(x: float) -> Any:
    if isinstance(x, int):
        return x
    if math.isnan(x):
        return None
    if math.isinf(x):
        return "+inf" if x > 0 else "-inf"
    return x


def _from_json_number(v: Any) -> float:
    if v is None:
        return math.nan
    if isinstance(v, str):
        return parse_number(v)
    return float(v)


def point_record(p: SweepPoint) -> Dict[str, Any]:
    return {
        "xi": p.xi,
        "n": p.n,
        "alpha": p.alpha,
        "u_bs": p.u_bs,
        "u_vs": p.u_vs,
        "chi": p.chi,
        "a_body_tilde": p.a_body_tilde,
        "validity": p.validity.value,
    }


def write_sweep_csv(
    points: Iterable[SweepPoint], report: Optional[ExtremaReport], stream: IO[str]
) -> None:
    stream.write(",".join(SWEEP_COLUMNS) + "\n")
    for p in points:
        rec = point_record(p)
        cells = [
            rec[c] if c == "validity" else format_number(rec[c]) for c in SWEEP_COLUMNS
        ]
        stream.write(",".join(cells) + "\n")
    if report is None:
        return
    for x, u in report.minima:
        stream.write(f"# min xi={format_number(x)} u_bs={format_number(u)}\n")
    for x, u in report.maxima:
        stream.write(f"# max xi={format_number(x)} u_bs={format_number(u)}\n")
    for x in report.predicted_minima:
        stream.write(f"# predicted_min xi={format_number(x)}\n")
    stream.write(
        f"# max_abs_position_error={format_number(report.max_abs_position_error)}\n"
    )


def read_sweep_csv(text: str) -> List[SweepPoint]:
    rows = [line for line in text.splitlines() if line and not line.startswith("#")]
    reader = csv.DictReader(io.StringIO("\n".join(rows)))
    if tuple(reader.fieldnames or ()) != SWEEP_COLUMNS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames!r}")
    return [
        SweepPoint(
            xi=parse_number(r["xi"]),
            n=int(r["n"]),
            alpha=parse_number(r["alpha"]),
            u_bs=parse_number(r["u_bs"]),
            u_vs=parse_number(r["u_vs"]),
            chi=parse_number(r["chi"]),
            a_body_tilde=parse_number(r["a_body_tilde"]),
            validity=Validity(r["validity"]),
        )
        for r in reader
    ]


def report_record(report: Optional[ExtremaReport]) -> Dict[str, Any]:
    if report is None:
        return {"minima": [], "maxima": [], "predicted_minima": [], "max_abs_position_error": None}
    return {
        "minima": [{"xi": x, "u_bs": json_number(u)} for x, u in report.minima],
        "maxima": [{"xi": x, "u_bs": json_number(u)} for x, u in report.maxima],
        "predicted_minima": list(report.predicted_minima),
        "max_abs_position_error": json_number(report.max_abs_position_error),
    }


def sweep_document(
    config: Dict[str, Any], points: Iterable[SweepPoint], report: Optional[ExtremaReport]
) -> Dict[str, Any]:
    pts = []
    for p in points:
        rec = point_record(p)
        pts.append({k: (v if k == "validity" else json_number(v)) for k, v in rec.items()})
    return {"config": config, "points": pts, "extrema": report_record(report)}


def dumps(document: Dict[str, Any]) -> str:
    return json.dumps(document, indent=2, allow_nan=False) + "\n"


def read_sweep_json(text: str) -> List[SweepPoint]:
    doc = json.loads(text)
    return [
        SweepPoint(
            xi=_from_json_number(r["xi"]),
            n=int(r["n"]),
            alpha=_from_json_number(r["alpha"]),
            u_bs=_from_json_number(r["u_bs"]),
            u_vs=_from_json_number(r["u_vs"]),
            chi=_from_json_number(r["chi"]),
            a_body_tilde=_from_json_number(r["a_body_tilde"]),
            validity=Validity(r["validity"]),
        )
        for r in doc["points"]
    ]


def manifest_record(manifest: RunManifest) -> Dict[str, Any]:
    """Manifest as embedded in output documents.

    The output path is left out so a file's bytes do not depend on where it
    was written.
    """
    rec = asdict(manifest)
    del rec["output_path"]
    return rec
