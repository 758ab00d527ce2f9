"""Pointwise frame quantity (1 - mu^2) sum mu^(2 lam) for sparse exponent sets as mu -> 1."""
import argparse
import math

import numpy as np

from framelab.exponents import make_exponent_set
from framelab.muntz import muntz_szasz_sum, pointwise_sum, s_of_x


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=10**5)
    ap.add_argument("--decades", type=int, default=6)
    args = ap.parse_args()
    xs = 10.0 ** -np.arange(1, args.decades + 1)
    print("x,naturals,ceil_n_log_n,primes,x_S_x")
    sets = [make_exponent_set("naturals"), make_exponent_set("ceil_n_log_n", args.n_max),
            make_exponent_set("primes", args.n_max)]
    for x in xs:
        vals = [pointwise_sum(math.sqrt(1 - x), ex).value for ex in sets]
        print(",".join(f"{v:.17g}" for v in [x, *vals, x * s_of_x(x).value]))
    for ex in sets[1:]:
        print(f"# Muntz-Szasz partial sum ({ex.tag}, n <= {args.n_max}): {muntz_szasz_sum(ex):.6f}")


if __name__ == "__main__":
    main()
