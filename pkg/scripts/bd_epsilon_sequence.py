"""Tabulate the dyadic approximation slack eps(n) for a target weight."""

import argparse

from hmconcave.harmonic import GridSpec
from hmconcave.svf import parse_svf_spec
from hmconcave.verifier import CheckConfig, check_bd_approx


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--svf", default='kind=box expr="x" domain=[0.5,8]')
    p.add_argument("--t-target", type=float, default=1 / 3)
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--c", type=float, default=0.0)
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--grid", default="33,33,1")
    args = p.parse_args()

    cfg = CheckConfig(m=args.m, c=args.c, dyadic_depth=args.depth, grid=GridSpec.parse(args.grid))
    rep = check_bd_approx(parse_svf_spec(args.svf), cfg, args.t_target)
    print(f"{rep.extra['svf']}  t_target={args.t_target:.6g}  verdict={rep.verdict.value}")
    print(f"{'n':>3} {'q':>12} {'|q - t|':>10} {'eps(n)':>12} {'premise':>12} {'skipped':>8}")
    for lv in rep.extra["levels"]:
        print(f"{lv['n']:3d} {lv['q']:12.9f} {abs(lv['q'] - args.t_target):10.3e} "
              f"{lv['eps']:12.4e} {lv['premise_margin']:+12.3e} {lv['skipped']:8d}")
    print(f"non-increasing: {rep.extra['non_increasing']}  direct margin at t: "
          f"{rep.extra['direct_margin']:+.3e}")


if __name__ == "__main__":
    main()
