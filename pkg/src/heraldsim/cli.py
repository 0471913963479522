"""Command-line entry point: ``heraldsim {herald,sweep,hom-check,rate}``.

Exit codes: 0 success, 1 failed check, 2 usage error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from .errors import CheckFailed, HeraldSimError
from .fock import serialize
from .formulas import MAX_PROBABILITY, rate_estimate
from .herald import ideal_herald, lossy_herald
from .optics import SetupParams
from .spdc import PAIR_PROBABILITY_MEANINGS, psi_n
from .sweep import (
    DEFAULT_ETAS,
    DEFAULT_THETA_STEPS,
    SweepSpec,
    curve_maximum,
    gnuplot_script,
    run_sweep,
    write_csv,
)

HOM_THRESHOLD = 1e-12
HOM_GRID = 25
OPTIMAL_THETA = math.acos(math.sqrt(1 / 3))


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _fmt(x: float) -> str:
    return f"{x + 0.0:.16e}"


def cmd_herald(args) -> int:
    setup = SetupParams(args.theta_a, args.theta_b)
    state = psi_n(args.n_pairs, n_max=max(8, 2 * args.n_pairs))
    if args.eta is None:
        out = ideal_herald(state, setup)
    else:
        out = lossy_herald(state, setup, args.eta)
    print(f"probability {_fmt(out.probability)}")
    print(f"fidelity {_fmt(out.fidelity) if out.heralded else 'undefined'}")
    for k, (w, ket) in enumerate(out.conditional.branches):
        print(f"branch {k} weight {_fmt(w)}")
        sys.stdout.write(serialize(ket))
    return 0


def cmd_sweep(args) -> int:
    spec = SweepSpec(theta_steps=args.theta_steps, etas=args.eta, n_pairs=args.n_pairs, out=args.out)
    try:
        rows = run_sweep(spec, check=args.check)
    except CheckFailed as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1
    write_csv(rows, args.out)
    if args.gnuplot:
        Path(args.gnuplot).write_text(gnuplot_script(args.out, spec.etas))
    print(f"wrote {len(rows)} rows to {args.out}")
    for eta in spec.etas:
        theta, p = curve_maximum(eta, spec.n_pairs)
        print(f"eta={eta:g} max_p={_fmt(p)} at theta={_fmt(theta)} (ratio to (2/9)^3: {p / MAX_PROBABILITY:.10f})")
    return 0


def cmd_hom_check(args) -> int:
    worst = 0.0
    for theta_a in np.linspace(0, math.pi / 2, HOM_GRID + 2)[1:-1]:
        for n in (0, 1, 2):
            out = ideal_herald(psi_n(n), SetupParams(theta_a, theta_a))
            worst = max(worst, out.raw_probability)
    ok = worst < HOM_THRESHOLD
    print(f"max fourfold probability for n<=2: {_fmt(worst)} ({'ok' if ok else 'FAIL'})")
    return 0 if ok else 1


def cmd_rate(args) -> int:
    theta = math.acos(math.sqrt(args.cos2)) if args.cos2 is not None else OPTIMAL_THETA
    est = rate_estimate(args.pair_prob, args.rep_rate_hz, theta, args.eta, args.pair_prob_meaning)
    print(f"r {_fmt(est.r)}")
    print(f"coincidence_probability {_fmt(est.coincidence_probability)}")
    print(f"pairs_per_second {_fmt(est.pairs_per_second)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heraldsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("herald", help="herald a single n-pair component")
    p.add_argument("--n-pairs", type=int, required=True)
    p.add_argument("--theta-a", type=float, required=True, help="BS1 angle in radians")
    p.add_argument("--theta-b", type=float, required=True, help="BS2 angle in radians")
    p.add_argument("--eta", type=float, default=None, help="detector efficiency (default: ideal)")
    p.set_defaults(func=cmd_herald)

    p = sub.add_parser("sweep", help="F-versus-P curves over theta")
    p.add_argument("--theta-steps", type=int, default=DEFAULT_THETA_STEPS)
    p.add_argument("--eta", type=_float_list, default=list(DEFAULT_ETAS))
    p.add_argument("--n-pairs", type=int, default=3)
    p.add_argument("--check", action="store_true", help="fail unless simulation matches closed forms")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--gnuplot", type=Path, default=None, help="also write a gnuplot script")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("hom-check", help="verify that n <= 2 never heralds")
    p.set_defaults(func=cmd_hom_check)

    p = sub.add_parser("rate", help="heralded-pair rate estimate")
    p.add_argument("--pair-prob", type=float, required=True)
    p.add_argument("--rep-rate-hz", type=float, required=True)
    p.add_argument("--pair-prob-meaning", choices=PAIR_PROBABILITY_MEANINGS, default="exact-one")
    p.add_argument("--cos2", type=float, default=None, help="power transmission (default 1/3)")
    p.add_argument("--eta", type=float, default=1.0)
    p.set_defaults(func=cmd_rate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (HeraldSimError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
