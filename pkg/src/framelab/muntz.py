"""Subsampling Carleson orbits along exponent sets.

For a diagonal operator with spectrum mu_k in (0, 1) and a generator
b_k ~ sqrt(1 - mu_k^2), the orbit {D**lam b : lam in Lambda} is a frame iff
the monomials {t**lam} form a frame in L2(nu), nu = sum_k (1 - mu_k^2) delta_{mu_k}.
Testing the lower frame bound on normalised atoms gives the pointwise quantity

    P(mu) = (1 - mu^2) * sum_{lam in Lambda} mu^(2 lam)

whose infimum over the spectrum must stay positive.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .exponents import ExponentSet
from .orbits import FrameBoundsReport, frame_bounds

# lazy sums over infinite exponent sets stop once a term falls below this fraction of the total
RELATIVE_CUTOFF = 1e-15


@dataclass(frozen=True, eq=False)
class AtomicMeasure:
    """nu = sum_k (1 - mu_k^2) delta_{mu_k} with atoms strictly inside (0, 1)."""

    locations: np.ndarray

    def __post_init__(self):
        mu = np.asarray(self.locations, dtype=float).ravel()
        if mu.size == 0:
            raise ValueError("measure needs at least one atom")
        if np.any(mu <= 0) or np.any(mu >= 1):
            raise ValueError("atom locations must lie in (0, 1)")
        if len(np.unique(mu)) != len(mu):
            raise ValueError("atom locations must be distinct")
        mu.setflags(write=False)
        object.__setattr__(self, "locations", mu)

    @property
    def weights(self) -> np.ndarray:
        return 1.0 - self.locations**2

    def __len__(self):
        return len(self.locations)

    @classmethod
    def geometric(cls, k_min: int, k_max: int, base: float = 2.0) -> "AtomicMeasure":
        """Atoms 1 - base**-k for k = k_min..k_max."""
        return cls(1.0 - base ** -np.arange(k_min, k_max + 1, dtype=float))


def muntz_szasz_sum(exponents: ExponentSet) -> float:
    """Finite partial sum of 1/lam over the positive exponents.

    Divergence of the full series is an asymptotic statement; this number
    only shows how far the truncation has got.
    """
    lam = exponents.values
    lam = lam[lam > 0]
    return math.fsum(1.0 / lam)


class TailedValue(NamedTuple):
    value: float
    tail_bound: float


def _ceil_tail(x: float, n_last: int) -> float:
    # sum_{n > N} exp(-x n log n) <= exp(-x N log N) / (x log N) for N >= 2
    N = max(n_last, 3)
    return math.exp(-x * N * math.log(N)) / (x * math.log(N))


def pointwise_sum(mu: float, exponents: ExponentSet) -> TailedValue:
    """(1 - mu^2) * sum_lam mu^(2 lam), with a bound on the neglected tail.

    Closed forms for infinite naturals / every-N-th sets; direct summation
    otherwise.  For truncations of infinite generators the tail bound covers
    the exponents past the truncation.
    """
    mu = float(mu)
    if not 0.0 < mu < 1.0:
        raise ValueError("pointwise condition needs mu in (0, 1)")
    w = 1.0 - mu * mu
    log_mu2 = 2.0 * math.log(mu)
    x = -log_mu2  # mu^2 = exp(-x)
    if exponents.has_closed_form:
        # (1 - mu^2) / (1 - mu^(2N)) = 1 / sum_{j<N} mu^(2j), free of cancellation near mu = 1
        N = exponents.stride
        return TailedValue(1.0 / math.fsum(mu ** (2 * j) for j in range(N)), 0.0)
    if exponents.infinite:
        return _lazy_pointwise(w, log_mu2, exponents)
    lam = exponents.values
    value = w * float(np.sum(np.exp(lam * log_mu2)))
    if exponents.tag == "explicit":
        return TailedValue(value, 0.0)
    if exponents.tag in ("naturals", "every_nth"):
        step = exponents.stride
        tail = w * math.exp((lam[-1] + step) * log_mu2) / -math.expm1(step * log_mu2)
    else:
        tail = w * _ceil_tail(x, exponents.n_max)
    return TailedValue(value, tail)


def _lazy_pointwise(w: float, log_mu2: float, exponents: ExponentSet) -> TailedValue:
    x = -log_mu2
    total = 0.0
    start, size = 0, 1024
    while True:
        lam = exponents.chunk(start, start + size)
        terms = np.exp(lam * log_mu2)
        total += float(np.sum(terms))
        start += size
        size *= 2
        if terms[-1] < RELATIVE_CUTOFF * total:
            n_last = start + 1  # generator index n = start + 1 for tags starting at n = 2
            return TailedValue(w * total, w * _ceil_tail(x, n_last))


def pointwise_condition(mu: float, exponents: ExponentSet) -> float:
    return pointwise_sum(mu, exponents).value


@dataclass(frozen=True)
class PointwiseExtremes:
    inf: float
    sup: float
    argmin: int
    argmax: int
    values: tuple


def pointwise_extremes(atoms: AtomicMeasure, exponents: ExponentSet) -> PointwiseExtremes:
    vals = np.array([pointwise_condition(m, exponents) for m in atoms.locations])
    return PointwiseExtremes(
        float(vals.min()), float(vals.max()), int(vals.argmin()), int(vals.argmax()), tuple(vals)
    )


class SeriesSum(NamedTuple):
    value: float
    n_used: int
    tail_bound: float


def s_of_x(x: float, tolerance: float = 1e-13) -> SeriesSum:
    """S(x) = sum_{n >= 2} exp(-n x log n), summed until the integral tail bound is below tolerance.

    The remainder after n = N is at most int_N^inf exp(-x t log t) dt
    <= exp(-x N log N) / (x log N).
    """
    if x <= 0:
        raise ValueError("x must be positive")
    total = 0.0
    n0, size = 2, 1024
    while True:
        n = np.arange(n0, n0 + size, dtype=float)
        total += float(np.sum(np.exp(-x * n * np.log(n))))
        N = n0 + size - 1
        tail = _ceil_tail(x, N)
        if tail < tolerance:
            return SeriesSum(total, N, tail)
        n0 += size
        size *= 2


def lemma_constant(xs) -> float:
    """Smallest C with x S(x) <= C / log(1/x) over the given points."""
    return max(x * s_of_x(x).value * math.log(1.0 / x) for x in xs)


# spectral model ------------------------------------------------------------


def spectral_model_J(x, mu, b) -> np.ndarray:
    """(Jx)(mu_k) = x_k conj(b_k) / (1 - mu_k^2)."""
    mu = np.asarray(mu, dtype=float)
    return np.asarray(x, dtype=complex) * np.conj(np.asarray(b, dtype=complex)) / (1.0 - mu**2)


def l2nu_inner(f, g, atoms: AtomicMeasure) -> complex:
    """<f, g> in L2(nu) for functions given by their values on the atoms."""
    return complex(np.sum(np.asarray(f) * np.conj(np.asarray(g)) * atoms.weights))


def l2nu_norm(f, atoms: AtomicMeasure) -> float:
    return math.sqrt(float(np.sum(np.abs(np.asarray(f)) ** 2 * atoms.weights)))


def model_unitary_U(f, atoms: AtomicMeasure) -> np.ndarray:
    """(Uf)_k = sqrt(w_k) f(mu_k): the identification of L2(nu) with l2."""
    return np.sqrt(atoms.weights) * np.asarray(f, dtype=complex)


def monomial_vector(atoms: AtomicMeasure, lam: float) -> np.ndarray:
    """b_lam = (sqrt(w_k) mu_k^lam)_k, the image of t^lam under U."""
    return np.sqrt(atoms.weights) * atoms.locations**lam


def monomial_values(atoms: AtomicMeasure, lam: float) -> np.ndarray:
    """t^lam sampled on the atoms."""
    return atoms.locations**lam


def frame_test_monomials(atoms: AtomicMeasure, exponents: ExponentSet) -> FrameBoundsReport:
    """Frame bounds of {t^lam : lam in Lambda} in L2(nu), computed in l2 coordinates."""
    mu = atoms.locations
    sw = np.sqrt(atoms.weights)
    prod = np.outer(mu, mu)
    if exponents.has_closed_form:
        S = np.outer(sw, sw) / (1.0 - prod**exponents.stride)
        return frame_bounds(S, 0.0, "closed_form")
    if exponents.infinite:
        raise ValueError("frame test needs a finite exponent set or a closed form")
    lam = exponents.values
    K = len(mu)
    S = np.zeros((K, K))
    log_prod = np.log(prod)
    step = max(1, 2**22 // (K * K))
    for start in range(0, len(lam), step):
        S += np.sum(np.exp(lam[start : start + step, None, None] * log_prod[None]), axis=0)
    S *= np.outer(sw, sw)
    tail = 0.0
    if exponents.tag != "explicit":
        tail = max(pointwise_sum(m, exponents).tail_bound for m in mu)
    return frame_bounds(S, tail, "partial_sum")
