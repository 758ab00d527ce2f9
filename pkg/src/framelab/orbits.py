"""Frame operators of orbits {D**lam b} of diagonal operators.

The frame operator of the orbit of ``b`` under ``D = diag(mu)`` has entries

    S[j, k] = b_j conj(b_k) * sum_lam (mu_j conj(mu_k))**lam

which for lam = 0, 1, 2, ... is the Cauchy-type kernel
b_j conj(b_k) / (1 - mu_j conj(mu_k)).  Its extremal eigenvalues are the
optimal frame bounds.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .disk import carleson_constant
from .errors import NonIntegerPowerOfComplex, NotHermitian, SpectrumOnBoundary
from .exponents import ExponentSet, make_exponent_set

HERMITIAN_TOL = 1e-12
MAX_DIM = 4096
DEFAULT_DELTA_MIN = 1e-3
DEFAULT_EPS_BOUNDARY = 0.05
DEFAULT_BAND_MAX = 4.0
_EPS = np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class DiagonalOperator:
    eigenvalues: np.ndarray
    diagnostic: bool = False  # admits |mu| = 1; closed forms are then refused

    def __post_init__(self):
        mu = np.asarray(self.eigenvalues, dtype=complex).ravel()
        bound = np.max(np.abs(mu)) if mu.size else 0.0
        if bound > 1.0 + 1e-15 or (bound >= 1.0 and not self.diagnostic):
            raise SpectrumOnBoundary(f"max |mu| = {bound}; use diagnostic=True to admit |mu| = 1")
        if mu.size > MAX_DIM:
            raise ValueError(f"dimension {mu.size} exceeds desk-scale cap {MAX_DIM}")
        mu.setflags(write=False)
        object.__setattr__(self, "eigenvalues", mu)

    @property
    def dimension(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True, eq=False)
class OrbitFrameSystem:
    operator: DiagonalOperator
    generator: np.ndarray
    exponents: ExponentSet = field(default_factory=lambda: make_exponent_set("naturals"))

    def __post_init__(self):
        b = np.asarray(self.generator, dtype=complex).ravel()
        if b.shape != (self.operator.dimension,):
            raise ValueError("generator length must equal the operator dimension")
        b.setflags(write=False)
        object.__setattr__(self, "generator", b)

    @classmethod
    def from_arrays(cls, mu, b, exponents: ExponentSet | None = None, diagnostic: bool = False):
        op = DiagonalOperator(mu, diagnostic=diagnostic)
        if exponents is None:
            return cls(op, b)
        return cls(op, b, exponents)

    @property
    def mu(self) -> np.ndarray:
        return self.operator.eigenvalues

    @property
    def b(self) -> np.ndarray:
        return self.generator


@dataclass(frozen=True)
class FrameBoundsReport:
    lower: float
    upper: float
    truncation_tail: float = 0.0
    method: str = "partial_sum"  # or "closed_form"

    @property
    def ratio(self) -> float:
        return self.upper / self.lower if self.lower > 0 else float("inf")


def _powers(mu: np.ndarray, b: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """Matrix with entries mu_k**lam_i (rows = exponents)."""
    lam = np.asarray(lam, dtype=float)
    fractional = lam != np.round(lam)
    if np.any(fractional):
        bad = (np.abs(np.imag(mu)) > 0) | (np.real(mu) < 0)
        bad &= b != 0
        if np.any(bad):
            raise NonIntegerPowerOfComplex(
                "fractional exponents need real non-negative eigenvalues where b_k != 0"
            )
        return np.power(np.real(mu)[None, :], lam[:, None]).astype(complex)
    return np.power(mu[None, :], np.round(lam).astype(np.int64)[:, None])


def orbit_vector(sys: OrbitFrameSystem, exponent: float) -> np.ndarray:
    if exponent < 0:
        raise ValueError("exponent must be non-negative")
    return _powers(sys.mu, sys.b, np.array([exponent]))[0] * sys.b


def frame_operator_closed(sys: OrbitFrameSystem) -> np.ndarray:
    """Frame operator of the full orbit (or of its every-N-th subsample) via geometric series."""
    ex = sys.exponents
    if not ex.has_closed_form:
        raise ValueError("closed form needs the infinite naturals or every_nth exponent set")
    mu, b = sys.mu, sys.b
    if sys.operator.diagnostic or np.max(np.abs(mu)) >= 1.0:
        raise SpectrumOnBoundary("geometric series diverge for |mu| = 1")
    prod = np.outer(mu, np.conj(mu))
    return np.outer(b, np.conj(b)) / (1.0 - prod**ex.stride)


def _tail_bound(sys: OrbitFrameSystem, exponents: ExponentSet) -> float:
    """Bound on max_jk |S_jk - S_jk(truncated)| from exponents beyond the truncation."""
    if exponents.tag == "explicit" or exponents.infinite:
        return 0.0
    r = np.abs(np.outer(sys.mu, np.conj(sys.mu)))
    if np.max(r) >= 1.0:
        return float("inf")
    bb = np.abs(np.outer(sys.b, sys.b))
    last = exponents.values[-1]
    if exponents.tag in ("naturals", "every_nth"):
        step = exponents.stride
        tail = bb * r ** (last + step) / (1.0 - r**step)
    else:
        # integer exponents strictly increasing: lam_next >= last + 1 and gaps >= 1
        tail = bb * r ** (last + 1) / (1.0 - r)
    return float(np.max(tail))


def frame_operator_partial(sys: OrbitFrameSystem, chunk: int | None = None) -> tuple[np.ndarray, float]:
    """Sum of orbit outer products over a finite exponent set, plus the dropped-tail bound.

    The sum runs in a fixed order (chunks of exponents, numpy pairwise sums
    within a chunk) so results do not depend on BLAS threading.
    """
    ex = sys.exponents
    if ex.infinite:
        raise ValueError("partial sums need a finite exponent set")
    mu, b = sys.mu, sys.b
    K = len(mu)
    chunk = chunk or max(1, 2**22 // max(K * K, 1))
    S = np.zeros((K, K), dtype=complex)
    lam = ex.values
    for start in range(0, len(lam), chunk):
        P = _powers(mu, b, lam[start : start + chunk])  # (n, K)
        S += np.sum(P[:, :, None] * np.conj(P)[:, None, :], axis=0)
    S *= np.outer(b, np.conj(b))
    return S, _tail_bound(sys, ex)


def rounding_allowance(sys: OrbitFrameSystem, n_terms: int) -> float:
    """Worst-case floating-point error of an n-term partial sum of the frame operator."""
    r = np.abs(np.outer(sys.mu, np.conj(sys.mu)))
    bb = np.abs(np.outer(sys.b, sys.b))
    return float(np.max(4 * (n_terms + 2) * _EPS * bb / (1.0 - r)))


def frame_bounds(S, tail: float = 0.0, method: str = "partial_sum") -> FrameBoundsReport:
    """Smallest and largest eigenvalue of a Hermitian frame operator."""
    S = np.asarray(S, dtype=complex)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise NotHermitian("frame operator must be square")
    if S.shape[0] > MAX_DIM:
        raise ValueError(f"dimension exceeds desk-scale cap {MAX_DIM}")
    if np.max(np.abs(S - S.conj().T), initial=0.0) > HERMITIAN_TOL:
        raise NotHermitian("matrix is not Hermitian within 1e-12")
    ev = scipy.linalg.eigvalsh(S)  # ascending
    lower = max(float(ev[0]), 0.0)
    upper = max(float(ev[-1]), lower)
    return FrameBoundsReport(lower, upper, float(tail), method)


def system_frame_bounds(sys: OrbitFrameSystem) -> FrameBoundsReport:
    if sys.exponents.has_closed_form:
        return frame_bounds(frame_operator_closed(sys), 0.0, "closed_form")
    S, tail = frame_operator_partial(sys)
    return frame_bounds(S, tail, "partial_sum")


@dataclass(frozen=True)
class CarlesonFrameReport:
    inside_disc: bool
    approaches_boundary: bool  # finite-scale proxy for |mu_k| -> 1, never a proof
    carleson: bool
    weights_in_band: bool
    max_modulus: float
    carleson_constant: float
    ratio_low: float
    ratio_high: float
    boundary_label: str = "finite-scale proxy"

    @property
    def conditions(self) -> tuple[bool, bool, bool, bool]:
        return (self.inside_disc, self.approaches_boundary, self.carleson, self.weights_in_band)

    @property
    def passed(self) -> bool:
        return all(self.conditions)


def weight_ratios(mu, b) -> np.ndarray:
    """|b_k| / sqrt(1 - |mu_k|**2)."""
    mu = np.asarray(mu, dtype=complex)
    return np.abs(np.asarray(b)) / np.sqrt(1.0 - np.abs(mu) ** 2)


def check_carleson_frame(
    sys: OrbitFrameSystem,
    delta_min: float = DEFAULT_DELTA_MIN,
    eps_boundary: float = DEFAULT_EPS_BOUNDARY,
    band_max: float = DEFAULT_BAND_MAX,
) -> CarlesonFrameReport:
    """Evaluate the four conditions characterising frames {D**n b : n >= 0}.

    Condition (4) passes when every ratio |b_k|/sqrt(1-|mu_k|^2) is positive
    and the observed band satisfies ratio_high / ratio_low <= band_max.
    """
    mu = sys.mu
    mods = np.abs(mu)
    inside = bool(np.all(mods < 1.0))
    max_mod = float(np.max(mods))
    if inside and len(np.unique(mu)) == len(mu):
        delta = carleson_constant(mu)
    else:
        delta = 0.0
    if inside:
        ratios = weight_ratios(mu, sys.b)
        lo, hi = float(np.min(ratios)), float(np.max(ratios))
    else:
        lo, hi = 0.0, float("inf")
    band = lo > 0 and hi / lo <= band_max
    return CarlesonFrameReport(
        inside_disc=inside,
        approaches_boundary=max_mod >= 1.0 - eps_boundary,
        carleson=delta >= delta_min,
        weights_in_band=bool(band),
        max_modulus=max_mod,
        carleson_constant=delta,
        ratio_low=lo,
        ratio_high=hi,
    )


def subsample_orbit(sys: OrbitFrameSystem, stride: int) -> OrbitFrameSystem:
    """Keep every ``stride``-th element of the orbit {D**n b}."""
    if stride < 1:
        raise ValueError("stride must be >= 1")
    ex = sys.exponents
    if ex.tag not in ("naturals", "every_nth"):
        raise ValueError("subsampling starts from the naturals")
    new = make_exponent_set("every_nth", ex.n_max, stride=ex.stride * stride)
    return OrbitFrameSystem(sys.operator, sys.generator, new)


def carleson_system(count: int, weights: str = "parseval", base: float = 2.0) -> OrbitFrameSystem:
    """Diagonal system with mu_k = 1 - base**-k.

    ``weights="parseval"`` gives b_k = sqrt(1 - mu_k^2); ``"squared"`` gives
    b_k = 1 - mu_k^2, which decays too fast for a frame.
    """
    mu = 1.0 - base ** -np.arange(count, dtype=float)
    w = 1.0 - mu**2
    if weights == "parseval":
        b = np.sqrt(w)
    elif weights == "squared":
        b = w
    else:
        raise ValueError(f"unknown weight scheme {weights!r}")
    return OrbitFrameSystem.from_arrays(mu, b)


def matrix_to_json(S) -> str:
    """Row-major list of [re, im] pairs."""
    S = np.asarray(S, dtype=complex)
    rows = [[[float(v.real), float(v.imag)] for v in row] for row in S]
    return json.dumps({"shape": list(S.shape), "data": rows})


def matrix_from_json(text: str) -> np.ndarray:
    obj = json.loads(text)
    return np.array([[complex(re, im) for re, im in row] for row in obj["data"]], dtype=complex)


def matrix_to_csv(S) -> str:
    S = np.asarray(S, dtype=complex)
    lines = ["row,col,re,im"]
    for (i, j), v in np.ndenumerate(S):
        lines.append(f"{i},{j},{v.real:.17g},{v.imag:.17g}")
    return "\n".join(lines) + "\n"
