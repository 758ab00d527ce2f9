"""Compressed shift on K_theta: spectrum, Jordan blocks and the Parseval orbit of k_0."""
import argparse

import numpy as np

from framelab.cli import parse_zeros
from framelab.disk import FiniteBlaschke
from framelab.model import (
    jordan_structure, livsic_moeller_defect, model_basis, orbit_frame_defect, parseval_orbit_check, spectrum,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--zeros", default="0.3,0:1,0.6,0:1,0.5,0:2")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    theta = FiniteBlaschke(parse_zeros(args.zeros))
    m = model_basis(theta)
    rng = np.random.Generator(np.random.PCG64(args.seed))
    f = rng.standard_normal(m.dimension) + 1j * rng.standard_normal(m.dimension)
    print(f"cutoff            {m.cutoff}")
    print(f"membership defect {m.membership_defect:.3e}")
    print(f"spectrum          {np.round(spectrum(m), 12)}")
    print(f"matching defect   {livsic_moeller_defect(m):.3e}")
    print(f"jordan blocks     {jordan_structure(m)}")
    print(f"parseval defect   {parseval_orbit_check(m, f):.3e}")
    for n_max in (25, 50, 100, 200):
        print(f"frame op defect   n_max={n_max:4d}  {orbit_frame_defect(m, n_max):.3e}")


if __name__ == "__main__":
    main()
