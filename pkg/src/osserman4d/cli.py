"""Command-line interface.

Every subcommand prints one JSON report to stdout.  Exit codes: 0 ok,
1 internal error, 2 input error, 3 mathematical violation.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import battery, curvature, duality, metriclab, osserman, quaternion, tensorio
from .errors import BadParameters, CurvatureError, NotHalfFlat, ParseError
from .lintensor import random_orthogonal

REPORT_VERSION = 1
DEFAULT_SEED = 20061
EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_VIOLATION = 0, 1, 2, 3


class Violation(Exception):
    """A theorem-level property failed; carries the partial results."""

    def __init__(self, message: str, results: dict):
        super().__init__(message)
        self.results = results


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


def _digest(args: argparse.Namespace, files: list[str]) -> str:
    h = hashlib.sha256()
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func",)}
    h.update(json.dumps(params, sort_keys=True, default=str).encode())
    for f in files:
        try:
            h.update(Path(f).read_bytes())
        except OSError:
            h.update(b"<unreadable>")
    return "sha256:" + h.hexdigest()


def _parse_floats(text: str, n: int, flag: str) -> np.ndarray:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise ParseError(f"{flag}: expected {n} comma-separated numbers, got {text!r}") from None
    if len(vals) != n or not all(np.isfinite(vals)):
        raise ParseError(f"{flag}: expected {n} finite comma-separated numbers, got {text!r}")
    return np.array(vals)


def _load(path: str) -> np.ndarray:
    try:
        return tensorio.load(path)
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from exc


def _decisions(T, tol: float) -> dict:
    out = {}
    for key, use_weyl in (("osserman", False), ("conformally_osserman", True)):
        s = osserman.osserman_sampled(T, use_weyl=use_weyl, tol=tol)
        e = osserman.osserman_exact(T, use_weyl=use_weyl, tol=tol)
        out[key] = {
            "sampled": s.osserman,
            "exact": e.osserman,
            "spectrum": s.spectrum,
            "sampled_deviation": s.deviation,
            "exact_max_coefficient": e.max_coefficient,
            "certificate": e.certificate,
        }
    return out


def cmd_classify(args) -> dict:
    T = _load(args.tensor)
    rep = duality.classify(T, args.tol)
    dec = _decisions(T, args.tol)
    half_flat = rep.cls in duality.HALF_FLAT
    conf = dec["conformally_osserman"]
    consistent = conf["sampled"] == half_flat and conf["exact"] == half_flat
    results = {"duality": rep.as_dict(), **dec, "theorem_consistent": consistent}
    if not consistent:
        raise Violation("conformal Osserman decision disagrees with the duality class", results)
    return results


def cmd_synth(args) -> dict:
    lam = _parse_floats(args.lam, 3, "--lambda")
    notes = []
    if abs(lam.sum()) > 0:
        notes.append(f"lambdas summed to {lam.sum()!r}; subtracted the mean {lam.mean()!r}")
        lam = lam - lam.mean()
    rng = np.random.default_rng(args.seed)
    O = random_orthogonal(rng, -1 if args.reverse_orientation else 1)
    Q = quaternion.standard_structure().conjugate(O)
    W = quaternion.synthesize(Q, lam)
    desc = f"synthesized lambda={lam.tolist()} seed={args.seed}"
    try:
        tensorio.save(args.out, W, desc)
    except OSError as exc:
        raise ParseError(f"--out {args.out}: {exc.strerror or exc}") from exc
    return {
        "lambdas": lam,
        "structure": Q.as_dict(),
        "orientation": -1 if args.reverse_orientation else 1,
        "predicted_half_block_eigenvalues": np.sort(-6.0 * lam),
        "output": str(args.out),
        "notes": notes,
    }


def cmd_recover(args) -> dict:
    T = _load(args.tensor)
    try:
        dec = quaternion.recover(T, args.tol)
    except NotHalfFlat as exc:
        raise Violation(f"NotHalfFlat: {exc}", {"duality": duality.classify(T, args.tol).as_dict()}) from exc
    results = dec.as_dict()
    results["lambda_sum"] = float(np.sum(dec.lambdas))
    scale = 1.0 + curvature.norm(curvature.weyl(T))
    if dec.residual > battery.ROUND_TRIP_TOL * scale:
        raise Violation("reconstruction residual exceeds tolerance", results)
    return results


def cmd_metric(args) -> dict:
    chart = metriclab.get_chart(args.chart)
    point = _parse_floats(args.point, 4, "--point")
    tol = args.tol if args.tol is not None else metriclab.FD_TOL
    report = metriclab.classify_point(chart, point, args.step, tol)
    results = {"chart": chart.name, "report": report.as_dict()}
    ok = report.consistent
    if args.alpha:
        comp = metriclab.conformal_check(chart, metriclab.get_alpha(args.alpha), point, args.step, tol, label=args.alpha)
        results["conformal"] = comp.as_dict()
        ok = ok and comp.ok
    if not ok:
        raise Violation("pointwise theorem check failed", results)
    return results


def cmd_verify(args) -> dict:
    if args.count < 1:
        raise BadParameters(f"--count must be at least 1, got {args.count}")
    result = battery.run_battery(args.seed, args.count, flipped_phi2=args.flipped_phi2)
    results = result.as_dict()
    results["flipped_phi2_table"] = args.flipped_phi2
    if not result.ok:
        raise Violation("equivalence battery found violations", results)
    return results


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="osserman4d", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="duality class and Osserman decisions for a tensor file")
    p.add_argument("tensor")
    p.add_argument("--tol", type=float, default=duality.DEFAULT_TOL)
    p.add_argument("--out", help="also write the report here")
    p.set_defaults(func=cmd_classify, inputs=["tensor"])

    p = sub.add_parser("synth", help="write sum lambda_i R_Phi_i for a rotated standard structure")
    p.add_argument("--lambda", dest="lam", required=True, metavar="L1,L2,L3")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--reverse-orientation", action="store_true", help="use an orientation-reversing frame")
    p.add_argument("--out", required=True, help="tensor file to write")
    p.set_defaults(func=cmd_synth, inputs=[])

    p = sub.add_parser("recover", help="quaternionic decomposition of a half-flat Weyl tensor")
    p.add_argument("tensor")
    p.add_argument("--tol", type=float, default=duality.DEFAULT_TOL)
    p.add_argument("--out")
    p.set_defaults(func=cmd_recover, inputs=["tensor"])

    p = sub.add_parser("metric", help="pointwise check on a built-in metric chart")
    p.add_argument("--chart", required=True, help=", ".join(sorted(metriclab.CHARTS)))
    p.add_argument("--point", required=True, metavar="X1,X2,X3,X4")
    p.add_argument("--step", type=float, default=metriclab.DEFAULT_STEP)
    p.add_argument("--alpha", help="conformal factor: " + ", ".join(sorted(metriclab.ALPHAS)))
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_metric, inputs=[])

    p = sub.add_parser("verify", help="run the equivalence battery")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--flipped-phi2", action="store_true", help=argparse.SUPPRESS)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify, inputs=[])
    return parser


def render(report: dict) -> str:
    return json.dumps(_plain(report), indent=2) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    files = [getattr(args, name) for name in args.inputs]
    report = {
        "format_version": REPORT_VERSION,
        "command": args.command,
        "inputs_digest": _digest(args, files),
        "status": "ok",
        "results": {},
    }
    start = time.perf_counter()
    code = EXIT_OK
    try:
        report["results"] = args.func(args)
    except Violation as exc:
        report["status"] = "violation"
        report["results"] = exc.results
        report["error"] = {"type": "Violation", "message": str(exc)}
        code = EXIT_VIOLATION
    except CurvatureError as exc:
        report["status"] = "error"
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code = EXIT_INPUT
    except Exception as exc:  # noqa: BLE001 - the report must stay well-formed
        report["status"] = "error"
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code = EXIT_INTERNAL
    report["wall_time_s"] = round(time.perf_counter() - start, 6)
    text = render(report)
    sys.stdout.write(text)
    out = getattr(args, "out", None)
    if out and args.command != "synth":
        Path(out).write_text(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
