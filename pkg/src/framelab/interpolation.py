"""Weighted interpolation on truncated Hardy spaces.

A polynomial f of degree <= D is identified with its coefficient vector, so
the H2 norm is the l2 norm of the coefficients.  Weighted interpolation
problems u_k f(z_k) = c_k (or sum_i g_{k,i} f_i(z_k) = c_k for several
unknown functions) are underdetermined linear systems, and the minimum-norm
solution is the natural finite-section interpolant.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .disk import DiskSequence, carleson_constant, is_interpolating
from .errors import DegenerateFamily, IllConditioned, RankDeficient
from .orbits import DEFAULT_BAND_MAX, DEFAULT_DELTA_MIN

COND_WARN = 1e12
RIESZ_GATE = 1e4


@dataclass(frozen=True, eq=False)
class InterpolationProblem:
    nodes: DiskSequence
    weight_vectors: np.ndarray  # (K, N)
    targets: np.ndarray  # (K,)

    def __post_init__(self):
        g = np.asarray(self.weight_vectors, dtype=complex)
        if g.ndim == 1:
            g = g[:, None]
        c = np.asarray(self.targets, dtype=complex).ravel()
        if not (g.shape[0] == c.shape[0] == len(self.nodes)):
            raise ValueError("nodes, weight vectors and targets must share one length")
        if len(self.nodes) > 1:
            carleson_constant(self.nodes)  # raises DuplicatePoint
        object.__setattr__(self, "weight_vectors", g)
        object.__setattr__(self, "targets", c)

    @property
    def n_functions(self) -> int:
        return self.weight_vectors.shape[1]

    @classmethod
    def from_dict(cls, obj: dict) -> tuple["InterpolationProblem", int]:
        """Parse {nodes, weights, targets, N, degree}; returns the problem and the degree."""
        known = {"nodes", "weights", "targets", "N", "degree"}
        extra = set(obj) - known
        if extra:
            raise ValueError(f"unknown fields in interpolation problem: {sorted(extra)}")
        nodes = DiskSequence([complex(re, im) for re, im in obj["nodes"]])
        N = int(obj.get("N", 1))
        w = np.asarray(obj["weights"], dtype=float)
        # weights are real scalars (N=1), [re, im] pairs, or per-node lists of pairs
        if N == 1 and w.ndim == 1:
            g = w.astype(complex)[:, None]
        elif N == 1 and w.ndim == 2:
            g = (w[:, 0] + 1j * w[:, 1])[:, None]
        elif w.ndim == 3:
            g = w[..., 0] + 1j * w[..., 1]
        else:
            g = w.astype(complex).reshape(len(nodes), N)
        if g.shape[1] != N:
            raise ValueError(f"weights carry {g.shape[1]} components, N = {N}")
        c = np.array([complex(re, im) for re, im in obj["targets"]])
        return cls(nodes, g, c), int(obj["degree"])

    @classmethod
    def from_json(cls, text: str):
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class McPhailReport:
    carleson_pass: bool
    carleson_constant: float
    ratio_low: float
    ratio_high: float
    band_pass: bool

    @property
    def passed(self) -> bool:
        return self.carleson_pass and self.band_pass


def mcphail_check(nodes, weights, delta_min: float = DEFAULT_DELTA_MIN, band_max: float = DEFAULT_BAND_MAX) -> McPhailReport:
    """Carleson separation plus w_k / sqrt(1 - |z_k|) confined to a band of width band_max."""
    seq = nodes if isinstance(nodes, DiskSequence) else DiskSequence(nodes)
    w = np.asarray(weights, dtype=float)
    if np.any(w <= 0):
        raise ValueError("weights must be positive")
    rep = is_interpolating(seq, delta_min)
    ratios = w / np.sqrt(1.0 - np.abs(seq.points))
    lo, hi = float(ratios.min()), float(ratios.max())
    return McPhailReport(rep.passed, rep.constant, lo, hi, hi / lo <= band_max)


def evaluation_rows(z, degree: int) -> np.ndarray:
    """Rows (1, z_k, z_k^2, ..., z_k^D)."""
    z = np.asarray(z, dtype=complex)
    return z[:, None] ** np.arange(degree + 1)[None, :]


def least_norm_solve(A, c, rank_tol: float | None = None) -> np.ndarray:
    """Minimum-norm solution of the underdetermined system A x = c.

    Uses a column-pivoted QR of A^H (ties in pivot magnitude resolved by the
    lowest index, as LAPACK does).  Raises RankDeficient when the system is
    rank deficient and inconsistent; consistent deficient rows are dropped.
    """
    A = np.asarray(A, dtype=complex)
    c = np.asarray(c, dtype=complex)
    m, n = A.shape
    Q, R, piv = scipy.linalg.qr(A.conj().T, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    if rank_tol is None:
        rank_tol = max(m, n) * np.finfo(float).eps * (diag[0] if diag.size else 0.0)
    r = int(np.sum(diag > rank_tol))
    if r == 0:
        if np.any(c != 0):
            raise RankDeficient("system matrix vanishes but targets do not")
        return np.zeros(n, dtype=complex)
    # A^H P = Q R  =>  P^T A = R^H Q^H ; solve on the leading r rows
    Rr = R[:r, :r]
    rhs = c[piv[:r]]
    y = scipy.linalg.solve_triangular(Rr.conj().T, rhs, lower=True)
    x = Q[:, :r] @ y
    if r < m:
        resid = np.linalg.norm(A @ x - c)
        if resid > 1e-8 * max(1.0, np.linalg.norm(c)):
            raise RankDeficient(f"rank {r} < {m} rows and the data are inconsistent")
    return x


def _warn_if_ill_conditioned(A):
    s = np.linalg.svd(A, compute_uv=False)
    if s[-1] == 0 or s[0] / s[-1] > COND_WARN:
        warnings.warn(f"condition number {s[0] / max(s[-1], 1e-300):.3g} exceeds 1e12", IllConditioned, stacklevel=3)


def _system(problem: InterpolationProblem, degree: int) -> np.ndarray:
    V = evaluation_rows(problem.nodes.points, degree)  # (K, D+1)
    g = problem.weight_vectors  # (K, N)
    return (g[:, :, None] * V[:, None, :]).reshape(len(V), -1)


def _check_zero_weights(problem: InterpolationProblem):
    zero = np.all(problem.weight_vectors == 0, axis=1)
    if np.any(zero & (problem.targets != 0)):
        k = int(np.flatnonzero(zero & (problem.targets != 0))[0])
        raise RankDeficient(f"node {k} has zero weight but nonzero target")
    return ~zero


def multi_weight_interpolant(problem: InterpolationProblem, degree: int) -> np.ndarray:
    """Minimum-norm (f_1..f_N), each of degree <= D, with sum_i g_{k,i} f_i(z_k) = c_k.

    Returns an (N, D+1) coefficient array.
    """
    N = problem.n_functions
    if len(problem.nodes) > N * (degree + 1):
        raise RankDeficient("more nodes than unknown coefficients")
    keep = _check_zero_weights(problem)
    A = _system(problem, degree)[keep]
    c = problem.targets[keep]
    if A.shape[0] == 0:
        return np.zeros((N, degree + 1), dtype=complex)
    _warn_if_ill_conditioned(A)
    x = least_norm_solve(A, c)
    return x.reshape(N, degree + 1)


def min_norm_interpolant(problem: InterpolationProblem, degree: int) -> np.ndarray:
    """Minimum-norm polynomial f of degree <= D with u_k f(z_k) = c_k."""
    if problem.n_functions != 1:
        raise ValueError("scalar interpolation needs N = 1; use multi_weight_interpolant")
    return multi_weight_interpolant(problem, degree)[0]


def interpolation_residual(problem: InterpolationProblem, coeffs) -> float:
    """Relative residual ||A f - c|| / max(1, ||c||)."""
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    degree = coeffs.shape[1] - 1
    A = _system(problem, degree)
    r = A @ coeffs.ravel() - problem.targets
    return float(np.linalg.norm(r) / max(1.0, np.linalg.norm(problem.targets)))


# Riesz-basic families --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class KernelFamily:
    """Members g_k (1 + z) / (1 - conj(z_k) z) in H2(D; C^N)."""

    nodes: np.ndarray
    vectors: np.ndarray  # (K, N)

    def __post_init__(self):
        z = np.asarray(self.nodes, dtype=complex).ravel()
        g = np.asarray(self.vectors, dtype=complex)
        if g.ndim == 1:
            g = g[:, None]
        if g.shape[0] != z.shape[0]:
            raise ValueError("one vector per node")
        if np.any(np.abs(z) >= 1):
            raise ValueError("nodes must lie in the open disc")
        if np.any(np.linalg.norm(g, axis=1) == 0):
            raise DegenerateFamily("family member with zero vector")
        object.__setattr__(self, "nodes", z)
        object.__setattr__(self, "vectors", g)

    @classmethod
    def scalar(cls, nodes, weights=None) -> "KernelFamily":
        z = np.asarray(nodes, dtype=complex)
        w = np.ones(len(z)) if weights is None else np.asarray(weights)
        return cls(z, np.asarray(w, dtype=complex)[:, None])

    def materialize(self, degree: int) -> np.ndarray:
        """(K, N*(D+1)) coefficient rows, component-major."""
        n = np.arange(degree + 1)
        ker = np.conj(self.nodes)[:, None] ** n[None, :]
        scalar = ker.copy()
        scalar[:, 1:] += ker[:, :-1]  # multiply by (1 + z)
        return (self.vectors[:, :, None] * scalar[:, None, :]).reshape(len(self.nodes), -1)


@dataclass(frozen=True)
class RieszReport:
    min_eig: float
    max_eig: float
    condition: float
    degenerate: bool
    gate: float
    label: str = "finite-scale proxy"

    @property
    def riesz_basic(self) -> bool:
        return not self.degenerate and self.condition < self.gate


def riesz_basic_test(family: KernelFamily, degree: int, gate: float = RIESZ_GATE) -> RieszReport:
    """Extremal eigenvalues of the Gram matrix of the normalised family members."""
    V = family.materialize(degree)
    V = V / np.linalg.norm(V, axis=1, keepdims=True)
    G = V.conj() @ V.T
    G = 0.5 * (G + G.conj().T)
    ev = scipy.linalg.eigvalsh(G)
    lo, hi = float(ev[0]), float(ev[-1])
    degenerate = lo <= len(ev) * np.finfo(float).eps * hi
    cond = hi / lo if not degenerate else float("inf")
    return RieszReport(max(lo, 0.0), hi, cond, bool(degenerate), gate)


def weight_norm_condition(family: KernelFamily) -> tuple[float, float]:
    """min and max over k of ||g_k||^2 (1 - |z_k|^2)."""
    q = np.linalg.norm(family.vectors, axis=1) ** 2 * (1.0 - np.abs(family.nodes) ** 2)
    return float(q.min()), float(q.max())


def greedy_carleson_partition(nodes, delta_min: float = DEFAULT_DELTA_MIN) -> list[list[int]]:
    """Split the nodes into Carleson subsequences by greedy extraction (a heuristic, not minimal).

    Each pass walks the remaining indices in order and keeps a node whenever
    the kept set stays above delta_min.
    """
    z = nodes.points if isinstance(nodes, DiskSequence) else np.asarray(nodes, dtype=complex)
    remaining = list(range(len(z)))
    parts = []
    while remaining:
        part, rest = [], []
        for i in remaining:
            trial = part + [i]
            if len(trial) == 1 or carleson_constant(z[trial]) >= delta_min:
                part = trial
            else:
                rest.append(i)
        parts.append(part)
        remaining = rest
    return parts
