"""Invertibility verdicts against finite-section orbit frame bounds for weighted composition operators."""
import argparse
import cmath

from framelab.hardy import (
    LinearFractionalMap, RationalWeight, invertibility_check, multiplication_orbit_frame, wco_matrix,
)

SYMBOLS = {
    "rotation": LinearFractionalMap.rotation(cmath.exp(0.7j)),
    "automorphism(0.5)": LinearFractionalMap.automorphism(0.5),
    "automorphism(0.3+0.4i)": LinearFractionalMap.automorphism(0.3 + 0.4j, cmath.exp(1j)),
    "z/2": LinearFractionalMap(0.5, 0, 0, 1),
    "z/2+0.3": LinearFractionalMap(0.5, 0.3, 0, 1),
}
WEIGHTS = {
    "1": RationalWeight.one(),
    "K_0.5": RationalWeight.kernel(0.5),
    "1-z": RationalWeight.polynomial([1, -1]),
    "z-0.3": RationalWeight.polynomial([-0.3, 1]),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--degrees", default="32,64,128")
    args = ap.parse_args()
    degrees = [int(d) for d in args.degrees.split(",")]
    print("symbol,weight,invertible," + ",".join(f"lower_D{D}" for D in degrees))
    for sname, phi in SYMBOLS.items():
        for wname, u in WEIGHTS.items():
            inv = invertibility_check(wco_matrix(phi, u, degrees[0])).invertible
            lows = [multiplication_orbit_frame(phi, u, D).bounds.lower for D in degrees]
            print(f"{sname},{wname},{inv}," + ",".join(f"{v:.6e}" for v in lows))


if __name__ == "__main__":
    main()
