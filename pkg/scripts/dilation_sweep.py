"""Ratios of the Fourier uncertainty bound and of the base-inequality probe for dilated Gaussians.

Both ratios are dilation invariant; the sweep shows how far the grid keeps them so.
"""

import argparse

import numpy as np

from cliffwave.field import GridSpec
from cliffwave.uncertainty import dilation_table


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--grid-n", type=int, default=128)
    p.add_argument("--box", type=float, default=16.0)
    p.add_argument("--a-min", type=float, default=0.25)
    p.add_argument("--a-max", type=float, default=4.0)
    p.add_argument("--count", type=int, default=9)
    p.add_argument("--k", type=int, default=1)
    args = p.parse_args(argv)

    scales = np.geomspace(args.a_min, args.a_max, args.count)
    rows = dilation_table(args.k, GridSpec(2, args.grid_n, args.box), scales)
    print("a,probe_ratio,heisenberg_ratio")
    for r in rows:
        print(f"{r['a']:.6g},{r['probe_ratio']:.10f},{r['heisenberg_ratio']:.10f}")


if __name__ == "__main__":
    main()
