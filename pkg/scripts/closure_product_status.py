"""Record the product-closure verdict across families, m values and seeds.

No truth value is asserted for the product; this collects what the grid sees,
together with the share of grid pairs meeting the intersection precondition.
"""

import argparse
import itertools

from hmconcave.harmonic import GridSpec
from hmconcave.svf import make_family
from hmconcave.verifier import CheckConfig, closure_suite

FAMILIES = {
    "[0,x]": ("box", "x", 0.0),
    "[0,1/x]": ("box", "1/x", 0.0),
    "[x-1,x+1]": ("shifted", "x", 1.0),
    "[1/x-0.1,1/x+0.1]": ("shifted", "1/x", 0.1),
}


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--m", type=float, nargs="+", default=[0.5, 1.0])
    p.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    p.add_argument("--grid", default="17,17,9")
    args = p.parse_args()

    grid = GridSpec.parse(args.grid)
    print(f"{'F':>18} {'G':>18} {'m':>5} {'premises':>8} {'product':>8} {'margin':>11} {'precond':>8}")
    for (nf, f), (ng, g) in itertools.combinations_with_replacement(FAMILIES.items(), 2):
        F = make_family(f[0], f[1], w=f[2])
        G = make_family(g[0], g[1], w=g[2])
        for m in args.m:
            seen = {(closure_suite(F, G, CheckConfig(m=m, seed=s, grid=grid)).link("product").verdict)
                    for s in args.seeds}
            rep = closure_suite(F, G, CheckConfig(m=m, seed=args.seeds[0], grid=grid))
            prod = rep.link("product")
            stable = "" if len(seen) == 1 else " (unstable)"
            print(f"{nf:>18} {ng:>18} {m:5.2g} {str(rep.extra['premises_hold']):>8} "
                  f"{prod.verdict.value:>8} {prod.margin:+11.3e} "
                  f"{rep.extra['precondition_fraction']:8.2f}{stable}")


if __name__ == "__main__":
    main()
