"""Admissibility constants of the Mexican hat against grid resolution and box size.

Columns: the grid-quadrature constant A_psi, the radial-quadrature value, the
synthesis constant C_psi calibrated on probe fields, and their ratio.
"""

import argparse
import math

from cliffwave.cwt import mexican_hat_clifford
from cliffwave.field import GridSpec
from cliffwave.uncertainty import admissibility_polar


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--grids", default="32:8,32:10,64:8,128:8,128:16",
                   help="comma-separated N:L pairs")
    args = p.parse_args(argv)

    print("grid_n,box,A_psi,A_radial,C_psi,A_over_C,A_over_C_minus_2pi")
    for item in args.grids.split(","):
        n, box = item.split(":")
        psi = mexican_hat_clifford(GridSpec(2, int(n), float(box)))
        ratio = psi.A_psi / psi.C_psi
        print(f"{n},{box},{psi.A_psi:.8f},{admissibility_polar(psi):.8f},{psi.C_psi:.8f},"
              f"{ratio:.8f},{ratio - 2 * math.pi:.2e}")


if __name__ == "__main__":
    main()
