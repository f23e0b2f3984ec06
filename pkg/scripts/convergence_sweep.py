"""Isometry and reconstruction error of the discrete transform along a quadrature ladder.

Writes one CSV row per (scale range, scale count, spin count) rung.
"""

import argparse
import csv
import sys

from cliffwave.cwt import h_inner_product, haar_samples, inverse, log_scales, mexican_hat_clifford, transform_grid
from cliffwave.field import GridSpec, l2_norm, relative_l2_error
from cliffwave.testfuncs import modulated

DEFAULT_LADDER = ["0.5:2:8:2", "0.25:4:16:4", "0.125:8:24:8"]


def rung(text):
    lo, hi, count, spins = text.split(":")
    return float(lo), float(hi), int(count), int(spins)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--grid-n", type=int, default=128)
    p.add_argument("--box", type=float, default=16.0)
    p.add_argument("--sigma", type=float, default=4.0)
    p.add_argument("--omega", type=float, default=0.75)
    p.add_argument("--rung", type=rung, action="append", help="AMIN:AMAX:COUNT:SPINS (repeatable)")
    p.add_argument("--out", help="CSV path; stdout if omitted")
    args = p.parse_args(argv)

    grid = GridSpec(2, args.grid_n, args.box)
    psi = mexican_hat_clifford(grid)
    f = modulated(grid, sigma=args.sigma, omega=args.omega)
    norm_sq = l2_norm(f) ** 2
    rows = []
    for lo, hi, count, spins in args.rung or [rung(r) for r in DEFAULT_LADDER]:
        atlas = transform_grid(f, psi, log_scales(lo, hi, count, 2), haar_samples(2, spins))
        iso = h_inner_product(atlas, atlas)[0].real / norm_sq
        rec = relative_l2_error(inverse(atlas, psi, "calibrated"), f)
        rows.append({"a_min": lo, "a_max": hi, "scales": count, "spins": spins,
                     "isometry": iso, "reconstruction_error": rec})
        print(f"[{lo}, {hi}] x{count} spins={spins}: isometry {iso:.4f} reconstruction {rec:.4f}", file=sys.stderr)

    out = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.DictWriter(out, fieldnames=list(rows[0]))
    writer.writeheader()
    writer.writerows(rows)
    if args.out:
        out.close()


if __name__ == "__main__":
    main()
