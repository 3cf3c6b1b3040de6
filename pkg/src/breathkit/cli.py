"""``breathkit`` command line.

Exit status: 0 success, 1 usage error, 2 domain or consistency error,
3 verification failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import io
import math
import os
import sys
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import io as bio
from .errors import (
    BreathkitError,
    ClassificationError,
    ConsistencyError,
    DegeneratePointError,
    DomainError,
    InputValidationError,
    InsufficientDataError,
)
from .oracle import build_tile, oracle_check, tessellation_check, tile_for_state
from .packing import (
    CHI_MAX,
    MINIMISATION_LIMIT,
    PI_3,
    PI_6,
    PackingKind,
    PackingScenario,
    closed_form_minima,
    initial_body_area_tilde,
)
from .partition import (
    Definition,
    LimitCase,
    ValidityConfig,
    VolumeDelta,
    classify,
    coefficient,
    coefficients,
)
from .sweep import Spacing, SweepConfig, detect_extrema, evaluate_point, run_sweep

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_VERIFY = 3
EXIT_IO = 4

CONSISTENCY_RTOL = 1e-9
ORACLE_RTOL = 1e-10

LIMIT_CASE_NAMES = {
    LimitCase.VOID_BREATHING: "VoidBreathing",
    LimitCase.BALANCED_BREATHING: "BalancedBreathing",
    LimitCase.SOLID_BREATHING: "SolidBreathing",
    LimitCase.INTERNAL_TRANSFER_SOLID_DISAPPEARANCE: "InternalTransfer (solid disappearance)",
    LimitCase.INTERNAL_TRANSFER_VOID_DISAPPEARANCE: "InternalTransfer (void disappearance)",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _xi_range(text: str) -> Tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected a:b, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected numbers in a:b, got {text!r}") from None


def _xi_list(text: str) -> List[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=bio.FORMATS, default="csv")
    p.add_argument("--output", "-o", default=None, help="file path (default: stdout)")


def _add_scenario(p: argparse.ArgumentParser, required: bool = False) -> None:
    p.add_argument("--packing", choices=[k.value for k in PackingKind], default=None if not required else "hex60")
    p.add_argument("--alpha0", type=float, default=None, help="initial packing angle (radians)")
    p.add_argument("--degrees", action="store_true", help="read --alpha0 in degrees")


def _add_gate(p: argparse.ArgumentParser) -> None:
    p.add_argument("--sigma", type=float, default=0.0, help="volume uncertainty")
    p.add_argument("--k", type=float, default=10.0, help="threshold factor")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="breathkit", description="Breathing coefficients and disc-packing swelling model.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", help="coefficient and regime of one volume variation")
    p.add_argument("--db", type=float, default=None, help="body volume variation")
    p.add_argument("--ds", type=float, default=None, help="solid volume variation")
    p.add_argument("--dv", type=float, default=None, help="void volume variation")
    p.add_argument("--def", dest="definition", choices=[d.value for d in Definition], default="bs")
    p.add_argument("--eps", type=float, default=1e-9, help="relative zero tolerance for classification")
    _add_gate(p)
    _add_output(p)

    p = sub.add_parser("eval", help="evaluate the swelling model at given xi values")
    _add_scenario(p, required=True)
    p.add_argument("--xi", type=_xi_list, required=True, help="value or comma-separated values")
    _add_gate(p)
    _add_output(p)

    p = sub.add_parser("sweep", help="evaluate the swelling model over a range of xi")
    _add_scenario(p, required=True)
    p.add_argument("--xi", type=_xi_range, required=True, help="range a:b")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--spacing", choices=[s.value for s in Spacing], default="log2")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: $BREATHKIT_JOBS or 1)")
    _add_gate(p)
    _add_output(p)

    p = sub.add_parser("verify", help="cross-check model areas against tile geometry")
    _add_scenario(p)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--xi", type=float, default=None, help="fixed swelling factor (default: random in [1, 32])")
    p.add_argument("--copies", type=int, default=3, help="tile copies per lattice direction")
    _add_output(p)

    p = sub.add_parser("limits", help="limit constants and closed-form minima")
    _add_output(p)
    return parser


def _scenario(args) -> PackingScenario:
    alpha0 = args.alpha0
    if alpha0 is not None and args.degrees:
        alpha0 = math.radians(alpha0)
    return PackingScenario.create(args.packing, alpha0)


def _scenario_record(sc: PackingScenario) -> Dict[str, object]:
    return {"packing": sc.initial_kind.value, "alpha0": sc.alpha0}


def _gate(args) -> ValidityConfig:
    return ValidityConfig(sigma=args.sigma, threshold_factor=args.k)


def _kv_csv(rows: Sequence[Tuple[str, object]]) -> str:
    out = []
    for key, value in rows:
        if isinstance(value, float):
            value = bio.format_number(value)
        out.append(f"{key},{'' if value is None else value}")
    return "\n".join(out) + "\n"


# commands return (manifest, text, exit status)


def _cmd_classify(args) -> Tuple[bio.RunManifest, str, int]:
    given = {"db": args.db, "ds": args.ds, "dv": args.dv}
    provided = [k for k, v in given.items() if v is not None]
    if len(provided) < 2:
        raise UsageError("classify needs at least two of --db, --ds, --dv")
    for k in provided:
        if not math.isfinite(given[k]):
            raise UsageError(f"--{k} must be finite")
    inferred = None
    if len(provided) == 3:
        db, ds, dv = args.db, args.ds, args.dv
        scale = max(abs(db), abs(ds), abs(dv))
        if abs(db - (ds + dv)) > CONSISTENCY_RTOL * scale:
            raise ConsistencyError(f"d_body={db!r} differs from d_solid + d_void = {ds + dv!r}")
        ds, dv = args.ds, args.dv
    elif args.db is None:
        ds, dv = args.ds, args.dv
        inferred = "d_body"
    elif args.ds is None:
        dv = args.dv
        ds = args.db - dv
        inferred = "d_solid"
    else:
        ds = args.ds
        dv = args.db - ds
        inferred = "d_void"
    # rebuilt from the phases so the delta satisfies the sum exactly
    delta = VolumeDelta.from_phases(ds, dv)

    cfg = _gate(args)
    result = coefficient(delta, args.definition, cfg)
    regime = classify(delta, args.eps)
    limit = LIMIT_CASE_NAMES[regime.limit_case] if regime.limit_case else None
    table = coefficients(delta, cfg)

    manifest = bio.RunManifest(
        "classify",
        {
            "db": args.db, "ds": args.ds, "dv": args.dv, "def": args.definition,
            "sigma": args.sigma, "k": args.k, "eps": args.eps,
        },
        args.format,
        args.output,
    )
    deltas = {"d_body": delta.d_body, "d_solid": delta.d_solid, "d_void": delta.d_void}
    if args.format == "json":
        doc = {
            "config": bio.manifest_record(manifest),
            "deltas": {k: bio.json_number(v) for k, v in deltas.items()},
            "inferred": inferred,
            "definition": result.definition.value,
            "value": bio.json_number(result.value),
            "validity": result.validity.value,
            "configuration": regime.configuration.value,
            "limit_case": limit,
            "coefficients": {
                d.value: {"value": bio.json_number(r.value), "validity": r.validity.value}
                for d, r in table.items()
            },
        }
        return manifest, bio.dumps(doc), EXIT_OK
    rows: List[Tuple[str, object]] = [
        (k + (" (inferred)" if k == inferred else ""), v) for k, v in deltas.items()
    ]
    rows += [
        ("definition", result.definition.value),
        ("value", result.value),
        ("validity", result.validity.value),
        ("configuration", regime.configuration.value),
        ("limit_case", limit),
    ]
    text = _kv_csv(rows) + "\ndefinition,value,validity\n"
    for d, r in table.items():
        text += f"u_{d.value},{bio.format_number(r.value)},{r.validity.value}\n"
    return manifest, text, EXIT_OK


def _cmd_eval(args) -> Tuple[bio.RunManifest, str, int]:
    sc = _scenario(args)
    cfg = _gate(args)
    if not args.xi:
        raise UsageError("--xi needs at least one value")
    points = [evaluate_point(x, sc, cfg) for x in args.xi]
    params = {**_scenario_record(sc), "xi": list(args.xi), "sigma": args.sigma, "k": args.k}
    manifest = bio.RunManifest("eval", params, args.format, args.output)
    if args.format == "json":
        doc = bio.sweep_document(bio.manifest_record(manifest), points, None)
        del doc["extrema"]
        return manifest, bio.dumps(doc), EXIT_OK
    buf = io.StringIO()
    bio.write_sweep_csv(points, None, buf)
    return manifest, buf.getvalue(), EXIT_OK


def _cmd_sweep(args) -> Tuple[bio.RunManifest, str, int]:
    sc = _scenario(args)
    try:
        jobs = args.jobs
        if jobs is None:
            env = os.environ.get("BREATHKIT_JOBS")
            jobs = int(env) if env else 1
    except ValueError:
        raise UsageError("BREATHKIT_JOBS must be an integer") from None
    if jobs < 1:
        raise UsageError(f"--jobs must be >= 1, got {jobs}")
    cfg = SweepConfig(sc, args.xi[0], args.xi[1], args.samples, Spacing(args.spacing), _gate(args))
    points = run_sweep(cfg, jobs=jobs)
    try:
        report = detect_extrema(points, sc.alpha0)
    except InsufficientDataError:
        report = None
    params = {
        **_scenario_record(sc),
        "xi_start": cfg.xi_start,
        "xi_end": cfg.xi_end,
        "samples": cfg.samples,
        "spacing": cfg.spacing.value,
        "sigma": args.sigma,
        "k": args.k,
    }
    # worker count changes nothing in the output, so it stays out of it
    manifest = bio.RunManifest("sweep", params, args.format, args.output)
    if args.format == "json":
        return manifest, bio.dumps(bio.sweep_document(bio.manifest_record(manifest), points, report)), EXIT_OK
    buf = io.StringIO()
    bio.write_sweep_csv(points, report, buf)
    return manifest, buf.getvalue(), EXIT_OK


def _random_case(rng: np.random.Generator, args) -> PackingScenario:
    kinds = [PackingKind.SQUARE, PackingKind.HEX30, PackingKind.HEX60]
    kind = PackingKind.parse(args.packing) if args.packing else kinds[int(rng.integers(3))]
    if args.alpha0 is not None:
        alpha0 = math.radians(args.alpha0) if args.degrees else args.alpha0
    elif kind is PackingKind.HEX30:
        alpha0 = None
    elif kind is PackingKind.SQUARE:
        alpha0 = float(rng.uniform(0.0, PI_6))
    else:
        alpha0 = float(rng.uniform(0.0, PI_3))
    return PackingScenario.create(kind, alpha0)


def _cmd_verify(args) -> Tuple[bio.RunManifest, str, int]:
    if args.trials < 1:
        raise UsageError(f"--trials must be >= 1, got {args.trials}")
    if args.copies < 2:
        raise UsageError(f"--copies must be >= 2, got {args.copies}")
    if args.xi is not None and not (math.isfinite(args.xi) and args.xi >= 1.0):
        raise DomainError(f"--xi must be >= 1, got {args.xi!r}")
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    worst_case = None
    failures = []
    for trial in range(args.trials):
        sc = _random_case(rng, args)
        xi = args.xi if args.xi is not None else float(rng.uniform(1.0, 32.0))
        res = oracle_check(xi, sc)
        tess = tessellation_check(build_tile(tile_for_state(xi, sc)), copies=args.copies)
        case = {
            "trial": trial,
            "packing": sc.initial_kind.value,
            "alpha0": sc.alpha0,
            "xi": xi,
            "tile": res.kind.value,
            "alpha": res.alpha,
            "n": res.n,
            "rel_error": res.rel_error,
        }
        if res.rel_error >= worst:
            worst, worst_case = res.rel_error, case
        problems = []
        if not res.rel_error <= ORACLE_RTOL:
            problems.append("area mismatch")
        if not tess.ok:
            problems.append(tess.reason)
        if problems:
            failures.append({**case, "problems": problems})

    status = EXIT_OK if not failures else EXIT_VERIFY
    params = {
        "packing": args.packing, "alpha0": args.alpha0, "degrees": args.degrees,
        "xi": args.xi, "trials": args.trials, "seed": args.seed, "copies": args.copies,
    }
    manifest = bio.RunManifest("verify", params, args.format, args.output)
    if args.format == "json":
        doc = {
            "config": bio.manifest_record(manifest),
            "status": "pass" if status == EXIT_OK else "fail",
            "worst_rel_error": worst,
            "worst_case": worst_case,
            "failures": failures,
        }
        return manifest, bio.dumps(doc), status
    rows: List[Tuple[str, object]] = [
        ("status", "pass" if status == EXIT_OK else "fail"),
        ("trials", args.trials),
        ("failures", len(failures)),
        ("worst_rel_error", worst),
    ]
    text = _kv_csv(rows)
    cols = ("trial", "packing", "alpha0", "xi", "tile", "alpha", "n", "rel_error")
    text += "# worst " + " ".join(f"{c}={_fmt(worst_case[c])}" for c in cols) + "\n"
    for f in failures:
        text += "# FAIL " + " ".join(f"{c}={_fmt(f[c])}" for c in cols)
        text += " problems=" + ";".join(f["problems"]) + "\n"
    return manifest, text, status


def _fmt(v: object) -> str:
    return bio.format_number(v) if isinstance(v, float) else str(v)


LIMIT_ALPHA0 = (("0", 0.0), ("pi/12", math.pi / 12), ("pi/6", PI_6))


def limits_table() -> List[Dict[str, object]]:
    """Closed-form ``u_bs`` at the hexagonal points, n in 0..6."""
    rows = []
    for kind in (PackingKind.SQUARE, PackingKind.HEX60):
        for label, a0 in LIMIT_ALPHA0:
            sc = PackingScenario.create(kind, a0)
            area0 = initial_body_area_tilde(sc)
            for n in range(7):
                try:
                    h60, h30 = closed_form_minima(n, a0, area0)
                    note = ""
                except DegeneratePointError:
                    h60 = h30 = math.nan
                    note = "degenerate"
                rows.append(
                    {"kind": kind.value, "alpha0": label, "n": n,
                     "u_bs_hex60": h60, "u_bs_hex30": h30, "note": note}
                )
    return rows


def _cmd_limits(args) -> Tuple[bio.RunManifest, str, int]:
    constants = [
        ("sqrt12_over_pi", MINIMISATION_LIMIT),
        ("pi_over_sqrt12", CHI_MAX),
        ("two_over_pi", 2.0 / math.pi),
    ]
    rows = limits_table()
    manifest = bio.RunManifest("limits", {}, args.format, args.output)
    if args.format == "json":
        doc = {
            "config": bio.manifest_record(manifest),
            "constants": dict(constants),
            "minima": [
                {k: (bio.json_number(v) if isinstance(v, float) else v) for k, v in r.items()}
                for r in rows
            ],
        }
        return manifest, bio.dumps(doc), EXIT_OK
    text = _kv_csv(constants) + "\nkind,alpha0,n,u_bs_hex60,u_bs_hex30,note\n"
    for r in rows:
        text += ",".join(_fmt(r[c]) for c in ("kind", "alpha0", "n", "u_bs_hex60", "u_bs_hex30", "note")) + "\n"
    return manifest, text, EXIT_OK


_COMMANDS = {
    "classify": _cmd_classify,
    "eval": _cmd_eval,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
    "limits": _cmd_limits,
}


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        manifest, text, status = _COMMANDS[args.command](args)
    except (UsageError, InputValidationError) as exc:
        print(f"breathkit {args.command}: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, ConsistencyError, ClassificationError, DegeneratePointError) as exc:
        print(f"breathkit {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except BreathkitError as exc:
        print(f"breathkit {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    try:
        _emit(text, manifest.output_path)
    except OSError as exc:
        print(f"breathkit {args.command}: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    if status == EXIT_VERIFY:
        print("breathkit verify: verification failed", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
