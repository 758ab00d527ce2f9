"""Truncated H2(D) calculus and weighted composition operators.

Functions are coefficient vectors (a_0, ..., a_D) in the monomial basis, so
the H2 inner product is the l2 inner product of coefficients.  The weighted
composition operator W f = u * (f o phi) acts on the (D+1)-section through
the matrix whose n-th column holds the coefficients of u * phi**n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DegenerateSymbol, SymbolLeavesDisc
from .orbits import FrameBoundsReport, frame_bounds

GRID_RADII = (0.0, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99, 0.999)
GRID_ANGLES = 64
BOUNDARY_POINTS = 256
ZERO_TOL = 1e-8
ALGEBRAIC_TOL = 1e-12
FIT_TOL = 1e-10
FRAME_GATE = 1e-3


def disc_grid(include_boundary: bool = True) -> np.ndarray:
    """8 radii x 64 angles, plus 256 boundary points."""
    t = 2 * np.pi * np.arange(GRID_ANGLES) / GRID_ANGLES
    pts = [r * np.exp(1j * t) for r in GRID_RADII]
    if include_boundary:
        pts.append(np.exp(2j * np.pi * np.arange(BOUNDARY_POINTS) / BOUNDARY_POINTS))
    return np.concatenate(pts)


def boundary_grid(n: int = BOUNDARY_POINTS) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(n) / n)


@dataclass(frozen=True, eq=False)
class HardyFunction:
    """Polynomial sum a_n z^n standing for an element of H2(D)."""

    coefficients: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.coefficients, dtype=complex).ravel()
        a.setflags(write=False)
        object.__setattr__(self, "coefficients", a)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), self.coefficients)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coefficients))

    def inner(self, other: "HardyFunction") -> complex:
        n = min(len(self.coefficients), len(other.coefficients))
        return complex(np.vdot(other.coefficients[:n], self.coefficients[:n]))


def kernel(w, degree: int) -> HardyFunction:
    """Truncated reproducing kernel K_w(z) = 1/(1 - conj(w) z)."""
    w = complex(w)
    if abs(w) >= 1:
        raise ValueError("kernel point must lie in the open disc")
    return HardyFunction(np.conj(w) ** np.arange(degree + 1))


def _series_div(num: np.ndarray, den: np.ndarray, degree: int) -> np.ndarray:
    """Power-series coefficients of num/den up to the given degree."""
    out = np.zeros(degree + 1, dtype=complex)
    num = np.concatenate([num, np.zeros(max(0, degree + 1 - len(num)))])[: degree + 1]
    d0 = den[0]
    for n in range(degree + 1):
        acc = num[n]
        for j in range(1, min(n, len(den) - 1) + 1):
            acc -= den[j] * out[n - j]
        out[n] = acc / d0
    return out


@dataclass(frozen=True, eq=False)
class RationalWeight:
    """u(z) = num(z) / den(z) with low-degree polynomials (ascending coefficients)."""

    num: np.ndarray
    den: np.ndarray = None
    name: str = "rational"

    def __post_init__(self):
        num = np.atleast_1d(np.asarray(self.num, dtype=complex))
        den = np.array([1.0 + 0j]) if self.den is None else np.atleast_1d(np.asarray(self.den, dtype=complex))
        if den[0] == 0:
            raise DegenerateSymbol("denominator vanishes at the origin")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def one(cls) -> "RationalWeight":
        return cls([1.0], name="one")

    @classmethod
    def polynomial(cls, coeffs) -> "RationalWeight":
        return cls(coeffs, name="polynomial")

    @classmethod
    def kernel(cls, p) -> "RationalWeight":
        """K_p(z) = 1/(1 - conj(p) z)."""
        return cls([1.0], [1.0, -np.conj(complex(p))], name=f"kernel:{complex(p)}")

    @classmethod
    def bourdon_narayan(cls, p, c=1.0) -> "RationalWeight":
        """c K_p / ||K_p|| = c sqrt(1 - |p|^2) / (1 - conj(p) z)."""
        p, c = complex(p), complex(c)
        return cls([c * math.sqrt(1 - abs(p) ** 2)], [1.0, -np.conj(p)], name=f"bn:{p},{c}")

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        P = np.polynomial.polynomial
        return P.polyval(z, self.num) / P.polyval(z, self.den)

    def series(self, degree: int) -> np.ndarray:
        return _series_div(self.num, self.den, degree)

    def hardy(self, degree: int) -> HardyFunction:
        return HardyFunction(self.series(degree))

    def _roots(self, poly) -> np.ndarray:
        poly = np.trim_zeros(poly, "b")
        if len(poly) <= 1:
            return np.zeros(0, dtype=complex)
        return np.polynomial.polynomial.polyroots(poly)

    @property
    def bounded(self) -> bool:
        """No pole in the closed disc."""
        return bool(np.all(np.abs(self._roots(self.den)) > 1.0 + ZERO_TOL))

    @property
    def zero_free(self) -> bool:
        """No zero in the closed disc."""
        if np.all(self.num == 0):
            return False
        return bool(np.all(np.abs(self._roots(self.num)) > 1.0 + ZERO_TOL))


@dataclass(frozen=True)
class LinearFractionalMap:
    """phi(z) = (a z + b) / (c z + d), ad - bc != 0."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for k in "abcd":
            object.__setattr__(self, k, complex(getattr(self, k)))
        if abs(self.a * self.d - self.b * self.c) < ALGEBRAIC_TOL * max(
            1.0, abs(self.a * self.d), abs(self.b * self.c)
        ):
            raise DegenerateSymbol("ad - bc = 0")

    @classmethod
    def automorphism(cls, p, rotation=1.0) -> "LinearFractionalMap":
        """rotation * (p - z) / (1 - conj(p) z)."""
        p, r = complex(p), complex(rotation)
        return cls(-r, r * p, -np.conj(p), 1.0)

    @classmethod
    def rotation(cls, c) -> "LinearFractionalMap":
        return cls(c, 0.0, 0.0, 1.0)

    @classmethod
    def parse(cls, text: str) -> "LinearFractionalMap":
        parts = [complex(s.strip().replace(" ", "")) for s in text.split(",")]
        if len(parts) != 4:
            raise ValueError("phi needs four coefficients a,b,c,d")
        return cls(*parts)

    @property
    def coefficients(self) -> tuple[complex, complex, complex, complex]:
        return (self.a, self.b, self.c, self.d)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return (self.a * z + self.b) / (self.c * z + self.d)

    @property
    def pole(self) -> complex | None:
        return None if self.c == 0 else -self.d / self.c

    @property
    def maps_disc_to_disc(self) -> bool:
        pole = self.pole
        if pole is not None and abs(pole) <= 1.0 + 1e-12:
            return False
        vals = np.abs(self(boundary_grid()))
        return bool(np.all(vals <= 1.0 + 1e-10)) and abs(self(0.0)) < 1.0

    @property
    def is_automorphism(self) -> bool:
        """M^* J M = k J with k > 0, J = diag(1, -1), for M = [[a, b], [c, d]]."""
        a, b, c, d = self.coefficients
        scale = max(abs(a), abs(b), abs(c), abs(d)) ** 2
        k1 = abs(a) ** 2 - abs(c) ** 2
        k2 = abs(d) ** 2 - abs(b) ** 2
        cross = np.conj(a) * b - np.conj(c) * d
        tol = ALGEBRAIC_TOL * scale
        return bool(k1 > tol and abs(k1 - k2) <= tol and abs(cross) <= tol)

    @property
    def zero(self) -> complex | None:
        """The point p with phi(p) = 0 (if it lies in the disc)."""
        if self.a == 0:
            return None
        p = -self.b / self.a
        return p if abs(p) < 1 else None

    def inverse(self) -> "LinearFractionalMap":
        return LinearFractionalMap(self.d, -self.b, -self.c, self.a)

    def series(self, degree: int) -> np.ndarray:
        return _series_div(np.array([self.b, self.a]), np.array([self.d, self.c]), degree)

    def power_columns(self, degree: int, weight: np.ndarray | None = None, n_cols: int | None = None) -> np.ndarray:
        """Matrix with column n = coefficients of weight * phi**n, rows 0..degree."""
        n_cols = degree + 1 if n_cols is None else n_cols
        p = self.series(degree)
        col = np.zeros(degree + 1, dtype=complex)
        if weight is None:
            col[0] = 1.0
        else:
            w = np.asarray(weight, dtype=complex)[: degree + 1]
            col[: len(w)] = w
        M = np.empty((degree + 1, n_cols), dtype=complex)
        for n in range(n_cols):
            M[:, n] = col
            col = np.convolve(col, p)[: degree + 1]
        return M


@dataclass(frozen=True, eq=False)
class WeightedCompositionOp:
    symbol: LinearFractionalMap
    weight: RationalWeight
    degree: int
    matrix: np.ndarray


def composition_matrix(phi: LinearFractionalMap, degree: int) -> np.ndarray:
    return phi.power_columns(degree)


def multiplication_matrix(u, degree: int) -> np.ndarray:
    """Lower-triangular Toeplitz section of M_u."""
    s = u.series(degree) if isinstance(u, RationalWeight) else np.asarray(u, dtype=complex)
    s = np.concatenate([s, np.zeros(max(0, degree + 1 - len(s)))])[: degree + 1]
    return scipy.linalg.toeplitz(s, np.zeros(degree + 1))


def wco_matrix(phi: LinearFractionalMap, u: RationalWeight, degree: int) -> WeightedCompositionOp:
    if not phi.maps_disc_to_disc:
        raise SymbolLeavesDisc(f"{phi} does not map the disc into itself")
    M = phi.power_columns(degree, u.series(degree))
    return WeightedCompositionOp(phi, u, degree, M)


def _as_op(op_or_phi, u=None, degree: int = 64) -> WeightedCompositionOp:
    if isinstance(op_or_phi, WeightedCompositionOp):
        return op_or_phi
    return wco_matrix(op_or_phi, u if u is not None else RationalWeight.one(), degree)


@dataclass(frozen=True)
class InvertibilityReport:
    automorphism: bool
    weight_bounded: bool
    weight_bounded_below: bool
    grid_min: float
    grid_max: float
    invertible: bool
    label: str = "grid-certified"


def invertibility_check(op: WeightedCompositionOp) -> InvertibilityReport:
    """W invertible iff phi is an automorphism and u is bounded and bounded away from zero."""
    u = op.weight
    vals = np.abs(u(disc_grid()))
    gmin, gmax = float(np.min(vals)), float(np.max(vals))
    bounded = u.bounded and np.isfinite(gmax)
    below = u.zero_free and gmin > ZERO_TOL
    aut = op.symbol.is_automorphism
    return InvertibilityReport(aut, bool(bounded), bool(below), gmin, gmax, bool(aut and bounded and below))


@dataclass(frozen=True)
class UnitarityReport:
    is_bn_form: bool
    p: complex | None
    c: complex | None
    truncation_defect: float
    n_cols: int
    fit_residual: float


def bn_fit(op: WeightedCompositionOp) -> tuple[bool, complex | None, complex | None, float]:
    """Does u equal c K_p / ||K_p|| with phi(p) = 0 and |c| = 1?"""
    phi = op.symbol
    if not phi.is_automorphism:
        return False, None, None, float("inf")
    p = phi.zero
    if p is None:
        return False, None, None, float("inf")
    D = op.degree
    s = op.weight.series(D)
    ref = RationalWeight.bourdon_narayan(p, 1.0).series(D)
    c = s[0] / ref[0]
    resid = float(np.linalg.norm(s - c * ref) / max(np.linalg.norm(s), 1e-300))
    ok = resid < FIT_TOL and abs(abs(c) - 1.0) < FIT_TOL
    return bool(ok), complex(p), complex(c), resid


def unitarity_check(op: WeightedCompositionOp, n_cols: int | None = None) -> UnitarityReport:
    """Bourdon-Narayan form test plus the section defect ||W_m^* W_m - I||.

    W_m holds columns 0..m of the section (rows 0..D), m = D // 8 by
    default.  Using all D+1 columns would measure the mass of u phi**n that
    leaves the section, which stays O(1) for automorphisms; with m = D // 8
    the defect decays geometrically in D for Bourdon-Narayan pairs.
    """
    ok, p, c, resid = bn_fit(op)
    m = max(1, op.degree // 8) if n_cols is None else n_cols
    W = op.matrix[:, : m + 1]
    G = W.conj().T @ W
    defect = float(np.linalg.norm(G - np.eye(m + 1), 2))
    return UnitarityReport(ok, p, c, defect, m, resid)


def adjoint_kernel_identity(op: WeightedCompositionOp, w) -> float:
    """||W^* K_w - conj(u(w)) K_phi(w)|| / ||K_w|| on the section."""
    w = complex(w)
    D = op.degree
    kw = kernel(w, D).coefficients
    lhs = op.matrix.conj().T @ kw
    rhs = np.conj(op.weight(w)) * kernel(op.symbol(w), D).coefficients
    return float(np.linalg.norm(lhs - rhs) / np.linalg.norm(kw))


def adjoint_kernel_tail(op: WeightedCompositionOp, w) -> float:
    """Rough scale of the truncation error in adjoint_kernel_identity."""
    r = max(abs(complex(w)), abs(complex(op.symbol(w))))
    return float(r ** (op.degree + 1) / math.sqrt(max(1e-300, 1 - r * r)))


@dataclass(frozen=True, eq=False)
class CowenFactors:
    sigma: LinearFractionalMap
    g: RationalWeight
    h: RationalWeight
    degree: int
    defect: float
    tail_bound: float
    degenerate: bool
    sigma_maps_disc: bool


def cowen_adjoint_factors(phi: LinearFractionalMap, degree: int = 64) -> CowenFactors:
    """sigma, g, h with C_phi^* = M_g C_sigma M_h^*, and the defect on the (D+1)-section.

    On monomial sections the identity is exact: M_g is lower triangular and
    M_h^* is upper bidiagonal, so the section of the product is the product
    of the sections.  The only error is rounding, hence tail_bound = 0.
    """
    a, b, c, d = phi.coefficients
    sigma = LinearFractionalMap(np.conj(a), -np.conj(c), -np.conj(b), np.conj(d))
    g = RationalWeight([1.0], [np.conj(d), -np.conj(b)], name="cowen-g")
    h = RationalWeight.polynomial([d, c])
    degenerate = not g.bounded
    D = degree
    C_phi = phi.power_columns(D)
    C_sigma = sigma.power_columns(D)
    Mg = multiplication_matrix(g, D)
    Mh = multiplication_matrix(h, D)
    rhs = Mg @ C_sigma @ Mh.conj().T
    defect = float(np.linalg.norm(C_phi.conj().T - rhs, 2)) if np.all(np.isfinite(rhs)) else float("inf")
    return CowenFactors(sigma, g, h, D, defect, 0.0, bool(degenerate), sigma.maps_disc_to_disc)


@dataclass(frozen=True)
class IsometryReport:
    max_violation: float
    automorphism: bool
    bn_fit_residual: float
    is_bn_form: bool
    forces_unitary: bool


def isometry_rkh_check(op: WeightedCompositionOp, grid=None) -> IsometryReport:
    """max over the grid of | |u(w)|^2 (1 - |w|^2) - (1 - |phi(w)|^2) |.

    A weighted composition operator whose adjoint is isometric must satisfy
    this with zero violation; for an automorphism with zero p that forces
    |u(w)|^2 = (1 - |p|^2)/|1 - conj(p) w|^2, the unitary Bourdon-Narayan form.
    """
    w = disc_grid(include_boundary=False) if grid is None else np.asarray(grid, dtype=complex)
    u2 = np.abs(op.weight(w)) ** 2
    viol = float(np.max(np.abs(u2 * (1 - np.abs(w) ** 2) - (1 - np.abs(op.symbol(w)) ** 2))))
    aut = op.symbol.is_automorphism
    fit = float("inf")
    if aut and op.symbol.zero is not None:
        p = op.symbol.zero
        fit = float(np.max(np.abs(u2 - (1 - abs(p) ** 2) / np.abs(1 - np.conj(p) * w) ** 2)))
    ok, *_ = bn_fit(op)
    forces = aut and viol < FIT_TOL and fit < FIT_TOL and ok
    return IsometryReport(viol, aut, fit, ok, bool(forces))


@dataclass(frozen=True)
class OrbitFrameReport:
    bounds: FrameBoundsReport | None
    unbounded_orbit: bool
    invertible: bool
    frame_proxy: bool
    n_max: int

    @property
    def agrees(self) -> bool:
        return self.frame_proxy == self.invertible


def multiplication_orbit_frame(phi: LinearFractionalMap, u: RationalWeight, degree: int, n_max: int | None = None) -> OrbitFrameReport:
    """Frame bounds of {u phi**n : 0 <= n <= n_max} on the (D+1)-section, n_max = 4D by default.

    The finite-proxy verdict (lower bound > 1e-3) is reported next to the
    invertibility verdict for W, which decides the infinite question.
    """
    if not phi.maps_disc_to_disc:
        return OrbitFrameReport(None, True, False, False, 0)
    n_max = 4 * degree if n_max is None else n_max
    W = phi.power_columns(degree, u.series(degree), n_cols=n_max + 1)
    S = np.einsum("ik,jk->ij", W, W.conj())
    S = 0.5 * (S + S.conj().T)
    bounds = frame_bounds(S, 0.0, "partial_sum")
    inv = invertibility_check(wco_matrix(phi, u, degree)).invertible
    return OrbitFrameReport(bounds, False, inv, bounds.lower > FRAME_GATE, n_max)
