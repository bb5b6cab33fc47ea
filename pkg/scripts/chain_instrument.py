"""Print each link of the fixed-t to m chain for a family over a range of m."""

import argparse

from hmconcave.harmonic import GridSpec
from hmconcave.svf import parse_svf_spec
from hmconcave.verifier import CheckConfig, check_chain_t_to_m


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--svf", default='kind=box expr="x" domain=[0.5,8]')
    p.add_argument("--t", type=float, default=0.3)
    p.add_argument("--c", type=float, default=0.0)
    p.add_argument("--m", type=float, nargs="+", default=[0.25, 0.5, 0.75, 1.0])
    p.add_argument("--grid", default="33,33,1")
    args = p.parse_args()

    F = parse_svf_spec(args.svf)
    print(f"{F.label}  t={args.t}  c={args.c}")
    print(f"{'m':>6} " + " ".join(f"{n:>22}" for n in ("L1", "L2", "L3", "L3'", "E")))
    for m in args.m:
        cfg = CheckConfig(m=m, c=args.c, t_fixed=args.t, grid=GridSpec.parse(args.grid))
        rep = check_chain_t_to_m(F, cfg)
        cells = [f"{ln.verdict.value} {ln.margin:+.3e}" for ln in rep.links]
        print(f"{m:6.3g} " + " ".join(f"{c:>22}" for c in cells))


if __name__ == "__main__":
    main()
