"""Hyperbolic geometry of the unit disc.

Pseudo-hyperbolic distance, Carleson's interpolation constant and finite
Blaschke products.  Everything here is a pure function of immutable inputs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DuplicatePoint, NotInDisc

# two disc points are treated as identical below this pseudo-hyperbolic distance
DUPLICATE_TOL = 1e-14
# log-products below this are reported as an exact zero
LOG_UNDERFLOW = -700.0


@dataclass(frozen=True)
class DiskPoint:
    value: complex

    def __post_init__(self):
        v = complex(self.value)
        if not abs(v) < 1.0:
            raise NotInDisc(f"|{v}| >= 1")
        object.__setattr__(self, "value", v)

    def __complex__(self):
        return self.value


def _disc_array(points) -> np.ndarray:
    z = np.array([complex(p) for p in np.ravel(np.asarray(points, dtype=object))], dtype=complex)
    if z.size and np.max(np.abs(z)) >= 1.0:
        raise NotInDisc(f"point with modulus {np.max(np.abs(z))} outside the open disc")
    return z


@dataclass(frozen=True, eq=False)
class DiskSequence:
    """Finite sequence of points in the open disc, optionally weighted."""

    points: np.ndarray
    weights: np.ndarray | None = None

    def __post_init__(self):
        z = _disc_array(self.points)
        z.setflags(write=False)
        object.__setattr__(self, "points", z)
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float).ravel()
            if w.shape != z.shape:
                raise ValueError("weights and points differ in length")
            if np.any(w <= 0):
                raise ValueError("weights must be strictly positive")
            w.setflags(write=False)
            object.__setattr__(self, "weights", w)

    def __len__(self):
        return len(self.points)

    @classmethod
    def geometric(cls, count: int, base: float = 2.0) -> "DiskSequence":
        """Points 1 - base**-k for k = 0..count-1."""
        return cls(1.0 - base ** -np.arange(count, dtype=float))

    @classmethod
    def harmonic(cls, count: int) -> "DiskSequence":
        """Points 1 - 1/(k+1) for k = 0..count-1 (not separated)."""
        return cls(1.0 - 1.0 / (np.arange(count, dtype=float) + 1.0))


def pseudo_hyperbolic(a, b) -> float:
    a, b = complex(a), complex(b)
    return abs(a - b) / abs(1.0 - b.conjugate() * a)


def pseudo_hyperbolic_matrix(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return np.abs(z[:, None] - z[None, :]) / np.abs(1.0 - np.conj(z)[None, :] * z[:, None])


def mobius(p, rotation: complex = 1.0):
    """The disc automorphism z -> rotation * (p - z) / (1 - conj(p) z)."""
    p = complex(p)
    rotation = complex(rotation)

    def phi(z):
        z = np.asarray(z, dtype=complex)
        return rotation * (p - z) / (1.0 - np.conj(p) * z)

    return phi


def _log_products(seq) -> np.ndarray:
    z = seq.points if isinstance(seq, DiskSequence) else _disc_array(seq)
    if len(z) == 0:
        raise ValueError("empty sequence")
    rho = pseudo_hyperbolic_matrix(z)
    np.fill_diagonal(rho, 1.0)
    i, j = np.unravel_index(np.argmin(rho), rho.shape)
    if len(z) > 1 and rho[i, j] < DUPLICATE_TOL:
        raise DuplicatePoint(f"points {i} and {j} coincide (rho={rho[i, j]:.3g})")
    return np.sum(np.log(rho), axis=1)


def carleson_constant(seq) -> float:
    """min_n prod_{k != n} rho(z_n, z_k), evaluated in the log domain."""
    logs = _log_products(seq)
    m = float(np.min(logs))
    return 0.0 if m < LOG_UNDERFLOW else math.exp(m)


@dataclass(frozen=True)
class InterpolationReport:
    constant: float
    passed: bool
    argmin_index: int


def is_interpolating(seq, delta_min: float) -> InterpolationReport:
    if delta_min <= 0:
        raise ValueError("delta_min must be positive")
    logs = _log_products(seq)
    k = int(np.argmin(logs))
    const = 0.0 if logs[k] < LOG_UNDERFLOW else math.exp(float(logs[k]))
    return InterpolationReport(const, bool(const >= delta_min and const > 0.0), k)


def unimodular_phase(a: complex) -> complex:
    """|a| / a, rescaled first so subnormal zeros still give a unimodular number."""
    s = max(abs(a.real), abs(a.imag))
    b = complex(a.real / s, a.imag / s)
    return abs(b) / b


@dataclass(frozen=True)
class FiniteBlaschke:
    """c * prod ((|a|/a) (a - z) / (1 - conj(a) z))**m, with factor z**m when a = 0."""

    zeros: tuple = field(default_factory=tuple)
    unimodular_constant: complex = 1.0

    def __post_init__(self):
        zs = []
        for entry in self.zeros:
            a, m = entry if isinstance(entry, tuple) else (entry, 1)
            a = complex(DiskPoint(a))
            if int(m) != m or m < 1:
                raise ValueError(f"multiplicity must be a positive integer, got {m}")
            zs.append((a, int(m)))
        c = complex(self.unimodular_constant)
        if abs(abs(c) - 1.0) > 1e-12:
            raise ValueError("unimodular_constant must have modulus one")
        object.__setattr__(self, "zeros", tuple(zs))
        object.__setattr__(self, "unimodular_constant", c)

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.zeros)

    def zero_list(self) -> list[complex]:
        """Zeros repeated according to multiplicity, in declaration order."""
        return [a for a, m in self.zeros for _ in range(m)]

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) > 1.0 + 1e-12):
            raise NotInDisc("Blaschke products are evaluated on the closed disc")
        out = np.full(z.shape, self.unimodular_constant, dtype=complex)
        for a, m in self.zeros:
            if a == 0:
                out = out * z**m
            else:
                out = out * (unimodular_phase(a) * (a - z) / (1.0 - np.conj(a) * z)) ** m
        return out if out.ndim else complex(out)

    def coefficients(self, cutoff: int) -> np.ndarray:
        """Taylor coefficients up to degree ``cutoff``."""
        out = np.zeros(cutoff + 1, dtype=complex)
        out[0] = self.unimodular_constant
        for a in self.zero_list():
            out = np.convolve(out, blaschke_factor_series(a, cutoff))[: cutoff + 1]
        return out


def blaschke_factor_series(a: complex, cutoff: int) -> np.ndarray:
    """Coefficients of (|a|/a)(a - z)/(1 - conj(a) z), or of z when a = 0."""
    out = np.zeros(cutoff + 1, dtype=complex)
    if a == 0:
        if cutoff >= 1:
            out[1] = 1.0
        return out
    geo = np.conj(a) ** np.arange(cutoff + 1)
    out += a * geo
    out[1:] -= geo[:-1]
    return unimodular_phase(complex(a)) * out
