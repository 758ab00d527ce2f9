"""Frame bounds of the orbit {D^n b} for mu_k = 1 - 2^-k as the number of atoms grows."""
import argparse
import csv
import sys

from framelab.orbits import carleson_system, check_carleson_frame, subsample_orbit, system_frame_bounds


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k-max", type=int, default=20)
    ap.add_argument("--weights", choices=("parseval", "squared"), default="parseval")
    ap.add_argument("--stride", type=int, default=1, help="keep every N-th orbit element")
    args = ap.parse_args()
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["K", "lower", "upper", "carleson_constant", "band_ok"])
    for K in range(2, args.k_max + 1):
        sys_ = carleson_system(K, args.weights)
        if args.stride > 1:
            sys_ = subsample_orbit(sys_, args.stride)
        r = system_frame_bounds(sys_)
        rep = check_carleson_frame(sys_)
        w.writerow([K, f"{r.lower:.17g}", f"{r.upper:.17g}", f"{rep.carleson_constant:.17g}", rep.weights_in_band])


if __name__ == "__main__":
    main()
