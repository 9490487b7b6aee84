"""Command-line interface: ``qchsh {bounds,game,decompose,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 precondition violation on user data.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import matrix as mc
from .chsh import TSIRELSON, ChshConfig, canonical_config, check_bound, chsh_expect, chsh_op, separable_example
from .errors import MatrixFormatError, PreconditionError, QchshError
from .game import QuantumStrategy, analytic_result, play_game
from .lhv import DeterministicStrategy, classical_max, lhv_from_separable
from .measurement import make_pm
from .spectral import HERMITIAN_ATOL, l2_op_norm, real_diag_decomp
from .states import PLUS, SeparableDecomposition, density_from_matrix, named_state, pure_density
from .verification import run_all

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PRECONDITION = 0, 1, 2, 3


class UsageError(QchshError):
    """Malformed command-line input."""


def fmt(x: float) -> str:
    return f"{x:.9g}"


# --- bounds ----------------------------------------------------------------

def bounds_rows(tol: float = 1e-9) -> list[dict]:
    cfg, singlet = canonical_config()
    rows = []

    c_max = classical_max()
    rows.append(dict(scenario="classical deterministic max", value=c_max, bound=2.0,
                     passed=c_max <= 2.0 + tol))

    plus = pure_density(PLUS)
    sep = SeparableDecomposition(((1.0, plus, plus),))
    model = lhv_from_separable(sep, cfg)
    c_lhv = model.chsh_value()
    rows.append(dict(scenario="lhv model (separable state)", value=c_lhv, bound=2.0,
                     passed=model.check() and abs(c_lhv) <= 2.0 + tol))

    rep = check_bound(cfg, separable_example(), "separable", tol=tol)
    rows.append(dict(scenario="separable example", value=rep.expectation, bound=rep.applicable_bound,
                     passed=rep.bound_satisfied))

    a0, _, b0, b1 = cfg.local
    ccfg = ChshConfig.local_tensor(a0, a0, b0, b1)
    rep = check_bound(ccfg, singlet, "commuting", tol=tol)
    rows.append(dict(scenario="commuting example (A1 = A0)", value=rep.expectation,
                     bound=rep.applicable_bound, passed=rep.bound_satisfied))

    norm_s = l2_op_norm(chsh_op(cfg))
    rows.append(dict(scenario="general bound ||S||", value=norm_s, bound=TSIRELSON,
                     passed=norm_s <= TSIRELSON + tol))

    e = abs(chsh_expect(cfg, singlet))
    rows.append(dict(scenario="canonical attained value", value=e, bound=TSIRELSON,
                     passed=abs(e - TSIRELSON) <= tol))
    return rows


def cmd_bounds(args) -> int:
    rows = bounds_rows(args.tolerance or 1e-9)
    if args.json:
        print(json.dumps({"rows": rows}, indent=2))
    else:
        width = max(len(r["scenario"]) for r in rows)
        print(f"{'scenario':<{width}}  {'value':>12}  {'bound':>12}  result")
        for r in rows:
            print(f"{r['scenario']:<{width}}  {fmt(r['value']):>12}  {fmt(r['bound']):>12}  "
                  f"{'PASS' if r['passed'] else 'FAIL'}")
    return EXIT_OK if all(r["passed"] for r in rows) else EXIT_FAIL


# --- game ------------------------------------------------------------------

def _load_state(spec) -> object:
    if isinstance(spec, str):
        return named_state(spec)
    return density_from_matrix(mc.matrix_from_json(spec))


def load_quantum_config(path: str | Path) -> QuantumStrategy:
    """Read ``{"mode", "A0", "A1", "B0", "B1", "state"}`` from a JSON file.

    Observables use the matrix format; ``state`` is a matrix document or a
    registry name such as ``"psi-"``. In ``"local"`` mode the observables are
    the local factors.
    """
    try:
        doc = json.loads(Path(path).read_text())
        mats = [mc.matrix_from_json(doc[k]) for k in ("A0", "A1", "B0", "B1")]
        state_spec = doc["state"]
        mode = doc.get("mode", "local")
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read quantum config {path}: {exc}") from exc
    cfg = ChshConfig.local_tensor(*mats) if mode == "local" else ChshConfig(*mats)
    try:
        rho = _load_state(state_spec)
    except KeyError as exc:
        raise UsageError(str(exc)) from exc
    return QuantumStrategy(cfg, rho, name=f"quantum:@{path}")


def parse_strategy(spec: str):
    kind, _, rest = spec.partition(":")
    if kind == "classical":
        parts = rest.split(",")
        if len(parts) != 4:
            raise UsageError("classical strategy needs four answers: classical:a0,a1,b0,b1")
        try:
            return DeterministicStrategy(*(int(p) for p in parts))
        except ValueError as exc:
            raise UsageError(f"bad classical strategy {spec!r}: {exc}") from exc
    if kind == "quantum":
        if rest == "canonical":
            cfg, rho = canonical_config()
            return QuantumStrategy(cfg, rho, name="quantum:canonical")
        if rest.startswith("@"):
            return load_quantum_config(rest[1:])
    raise UsageError(f"unknown strategy {spec!r}")


def cmd_game(args) -> int:
    strategy = parse_strategy(args.strategy)
    rounds = args.rounds if args.rounds is not None else 100_000
    seed = args.seed if args.seed is not None else 0
    result = play_game(strategy, rounds, seed, workers=args.workers)
    exact = analytic_result(strategy)
    if args.json:
        doc = result.to_json()
        doc["exact_c"] = exact["c"]
        doc["exact_score"] = exact["score"]
        print(json.dumps(doc, indent=2))
    else:
        print(f"strategy       {result.strategy}")
        print(f"rounds         {rounds}  seed {seed}")
        for (x, y), e in result.per_input_expectations.items():
            print(f"E[{x},{y}]         {fmt(e):>12}  (n = {result.counts[x, y]})")
        print(f"C estimate     {fmt(result.c_estimate)} +- {fmt(result.std_error)}")
        print(f"C exact        {fmt(exact['c'])}")
        print(f"score (C/4)    {fmt(result.score_estimate)} +- {fmt(result.score_std_error)}")
        print(f"points/round   {fmt(result.mean_round_score)}")
    return EXIT_OK


# --- decompose -------------------------------------------------------------

def cmd_decompose(args) -> int:
    a = mc.load_matrix(args.path)
    tol = args.tolerance or HERMITIAN_ATOL
    if a.shape[0] != a.shape[1]:
        raise PreconditionError(f"matrix must be square, got {a.shape}")
    dec = real_diag_decomp(a, tol=tol)
    err = float(np.max(np.abs(dec.reconstruct() - a)))
    pm = make_pm(a, tol=tol)
    ranks = [int(round(np.trace(o.projector).real)) for o in pm.outcomes]
    if args.json:
        print(json.dumps({
            "eigenvalues": [float(v) for v in dec.eigenvalues],
            "reconstruction_error": err,
            "outcomes": [{"value": o.value, "rank": r} for o, r in zip(pm.outcomes, ranks)],
        }, indent=2))
    else:
        print("eigenvalues          " + "  ".join(fmt(v) for v in dec.eigenvalues))
        print(f"reconstruction error {err:.3e}")
        print("measurement outcomes")
        for o, r in zip(pm.outcomes, ranks):
            print(f"  value {fmt(o.value):>12}  rank {r}")
    return EXIT_OK


# --- verify ----------------------------------------------------------------

def cmd_verify(args) -> int:
    results = run_all(
        seed=args.seed if args.seed is not None else 0,
        cases=args.cases,
        tol=args.tolerance or 1e-9,
    )
    if args.json:
        print(json.dumps({"suites": [r.to_json() for r in results]}, indent=2))
    else:
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            print(f"{r.name:<14} {r.cases:>6} cases  {r.failures:>4} failures  {status}")
            for msg in r.messages[:3]:
                print(f"    {msg}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


# --- entry point -----------------------------------------------------------

def _positive_float(text: str) -> float:
    v = float(text)
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError("must be a positive number")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=_positive_float, default=None)
    common.add_argument("--seed", type=_u64, default=None)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="qchsh", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", parents=[common], help="table of CHSH bounds")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("game", parents=[common], help="simulate the CHSH game")
    p.add_argument("--strategy", required=True,
                   help="classical:a0,a1,b0,b1 | quantum:canonical | quantum:@config.json")
    p.add_argument("--rounds", type=_positive_int, default=None)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("decompose", parents=[common], help="spectral decomposition of a matrix file")
    p.add_argument("path")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", parents=[common], help="run the property suites")
    p.add_argument("--cases", type=_positive_int, default=100)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, MatrixFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PreconditionError, QchshError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
