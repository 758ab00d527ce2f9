"""Model spaces K_theta = H2 (-) theta H2 for finite Blaschke products.

The orthonormal basis is the Takenaka-Malmquist system

    phi_k(z) = sqrt(1 - |a_k|^2) / (1 - conj(a_k) z) * prod_{j<k} b_{a_j}(z),

expanded into monomial coefficients up to a cutoff.  In this basis the
compressed shift S_theta = P_K M_z is lower triangular with the zeros of
theta on its diagonal.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.optimize

from .disk import FiniteBlaschke, unimodular_phase, blaschke_factor_series
from .errors import CutoffTooSmall, IndivisibleCutoff
from .hardy import HardyFunction

MAX_MULTIPLICITY = 4
MAX_DEGREE = 24
RANK_TOL = 1e-8
CLUSTER_TOL = 1e-5


def default_cutoff(theta: FiniteBlaschke) -> int:
    """Smallest convenient cutoff at which the basis tails are below ~1e-17."""
    d = theta.degree
    r = max((abs(a) for a, _ in theta.zeros), default=0.0)
    if r == 0.0:
        return 4 * d
    m = max(mult for _, mult in theta.zeros)
    # r^L * L^(m-1) * binomial growth of the product factors < 1e-17
    L = 4 * d
    while r**L * (L + 1) ** (d - 1) > 1e-17:
        L += 8
    return max(L, 4 * d) + 4 * m


@dataclass(frozen=True, eq=False)
class FiniteBlaschkeModel:
    theta: FiniteBlaschke
    cutoff: int
    basis: np.ndarray  # (d, cutoff + 1), rows orthonormal
    shift: np.ndarray  # (d, d), shift[i, j] = <z phi_j, phi_i>
    membership_defect: float
    flagged: bool  # multiplicity or degree beyond the certified regime

    @property
    def dimension(self) -> int:
        return self.basis.shape[0]

    def coefficients(self, coords) -> np.ndarray:
        """Monomial coefficients of sum_i coords_i phi_i."""
        return np.asarray(coords, dtype=complex) @ self.basis

    def coordinates(self, coeffs) -> np.ndarray:
        """Basis coordinates <f, phi_i> of a coefficient vector."""
        coeffs = np.asarray(coeffs, dtype=complex)
        n = min(len(coeffs), self.basis.shape[1])
        return self.basis[:, :n].conj() @ coeffs[:n]


def takenaka_malmquist(zeros, cutoff: int) -> np.ndarray:
    L = cutoff
    rows = []
    prod = np.zeros(L + 1, dtype=complex)
    prod[0] = 1.0
    for a in zeros:
        ker = math.sqrt(1.0 - abs(a) ** 2) * np.conj(a) ** np.arange(L + 1)
        rows.append(np.convolve(prod, ker)[: L + 1])
        prod = np.convolve(prod, blaschke_factor_series(a, L))[: L + 1]
    return np.array(rows)


def model_basis(theta: FiniteBlaschke, cutoff: int | None = None) -> FiniteBlaschkeModel:
    d = theta.degree
    if d < 1:
        raise ValueError("theta must have at least one zero")
    if cutoff is None:
        cutoff = default_cutoff(theta)
    if cutoff < 4 * d:
        raise CutoffTooSmall(f"cutoff {cutoff} < 4 * degree = {4 * d}")
    B = takenaka_malmquist(theta.zero_list(), cutoff)
    zB = np.zeros_like(B)
    zB[:, 1:] = B[:, :-1]
    A = B.conj() @ zB.T  # A[i, j] = <z phi_j, phi_i>
    th = theta.coefficients(cutoff)
    # <phi_i, theta z^n> for n = 0..cutoff - d
    defect = 0.0
    for n in range(cutoff - d + 1):
        shifted = np.zeros(cutoff + 1, dtype=complex)
        shifted[n:] = th[: cutoff + 1 - n]
        defect = max(defect, float(np.max(np.abs(B @ shifted.conj()))))
    flagged = d > MAX_DEGREE or max(m for _, m in theta.zeros) > MAX_MULTIPLICITY
    return FiniteBlaschkeModel(theta, cutoff, B, A, defect, flagged)


def basis_gram_defect(model: FiniteBlaschkeModel) -> float:
    G = model.basis.conj() @ model.basis.T
    return float(np.max(np.abs(G - np.eye(model.dimension))))


def k0_theta(model: FiniteBlaschkeModel) -> HardyFunction:
    """1 - conj(theta(0)) theta(z), the reproducing kernel of K_theta at 0."""
    th = model.theta.coefficients(model.cutoff)
    k = -np.conj(th[0]) * th
    k[0] += 1.0
    return HardyFunction(k)


def reproducing_defect(model: FiniteBlaschkeModel) -> float:
    """max_i |phi_i(0) - <phi_i, k0>| over the basis."""
    k = k0_theta(model).coefficients
    return float(np.max(np.abs(model.basis[:, 0] - model.basis @ k.conj())))


def theta_of_matrix(theta: FiniteBlaschke, A) -> np.ndarray:
    """theta(A) for a matrix A with spectrum inside the disc."""
    A = np.asarray(A, dtype=complex)
    I = np.eye(len(A))
    out = theta.unimodular_constant * I
    for a in theta.zero_list():
        if a == 0:
            out = out @ A
        else:
            factor = unimodular_phase(a) * np.linalg.solve((I - np.conj(a) * A).T, (a * I - A).T).T
            out = out @ factor
    return out


def minimal_function_defects(model: FiniteBlaschkeModel) -> tuple[float, list[float]]:
    """||theta(S)|| and, for each distinct zero, ||theta'(S)|| with one copy of that zero removed."""
    full = float(np.linalg.norm(theta_of_matrix(model.theta, model.shift), 2))
    reduced = []
    for i, (a, m) in enumerate(model.theta.zeros):
        zeros = list(model.theta.zeros)
        if m == 1:
            zeros.pop(i)
        else:
            zeros[i] = (a, m - 1)
        sub = FiniteBlaschke(tuple(zeros), model.theta.unimodular_constant)
        reduced.append(float(np.linalg.norm(theta_of_matrix(sub, model.shift), 2)))
    return full, reduced


def spectrum(model: FiniteBlaschkeModel, cluster_tol: float = CLUSTER_TOL) -> np.ndarray:
    """Eigenvalues of S_theta with each tight cluster replaced by its mean.

    A Jordan block of size m perturbed at rounding level splits its
    eigenvalue into m values spread by ~eps**(1/m); their mean is accurate
    to rounding, so clusters are averaged.
    """
    ev = scipy.linalg.eigvals(model.shift)
    order = np.lexsort((ev.imag, ev.real))
    ev = ev[order]
    out = ev.copy()
    used = np.zeros(len(ev), dtype=bool)
    for i in range(len(ev)):
        if used[i]:
            continue
        members = np.flatnonzero((np.abs(ev - ev[i]) < cluster_tol) & ~used)
        out[members] = ev[members].mean()
        used[members] = True
    return out


def livsic_moeller_defect(model: FiniteBlaschkeModel) -> float:
    """Largest distance in an optimal matching of spectrum(S_theta) with the zero multiset."""
    ev = spectrum(model)
    zs = np.array(model.theta.zero_list())
    cost = np.abs(ev[:, None] - zs[None, :])
    r, c = scipy.optimize.linear_sum_assignment(cost)
    return float(np.max(cost[r, c]))


def _rank(M, tol: float = RANK_TOL) -> int:
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0] if s.size else 0.0)))


def jordan_structure(model: FiniteBlaschkeModel, tol: float = RANK_TOL) -> dict:
    """Jordan block sizes of S_theta at each distinct zero, from ranks of (S - lam I)^j.

    Returns {lam: sorted list of block sizes}.
    """
    A = model.shift
    d = len(A)
    I = np.eye(d)
    out = {}
    for lam, m in model.theta.zeros:
        N = A - lam * I
        ranks = [d]
        P = I.copy()
        for _ in range(m + 1):
            P = P @ N
            ranks.append(_rank(P, tol))
        # number of blocks of size >= j is ranks[j-1] - ranks[j]
        at_least = [ranks[j - 1] - ranks[j] for j in range(1, m + 2)]
        sizes = []
        for j in range(1, m + 2):
            nxt = at_least[j] if j < len(at_least) else 0
            sizes += [j] * (at_least[j - 1] - nxt)
        out[lam] = sorted(sizes)
    return out


def eigenspace_dimension(model: FiniteBlaschkeModel, lam: complex, tol: float = RANK_TOL) -> int:
    A = model.shift
    return len(A) - _rank(A - lam * np.eye(len(A)), tol)


def orbit_vectors(model: FiniteBlaschkeModel, n_terms: int) -> np.ndarray:
    """Basis coordinates of S_theta^n k0 for n < n_terms, as rows."""
    k = model.coordinates(k0_theta(model).coefficients)
    out = np.empty((n_terms, model.dimension), dtype=complex)
    for n in range(n_terms):
        out[n] = k
        k = model.shift @ k
    return out


def parseval_orbit_check(model: FiniteBlaschkeModel, f_coords, n_terms: int | None = None) -> float:
    """max_n |<f, S_theta^n k0> - (n-th Taylor coefficient of f)| for n < 4d."""
    n_terms = 4 * model.dimension if n_terms is None else n_terms
    f_coords = np.asarray(f_coords, dtype=complex)
    V = orbit_vectors(model, n_terms)
    pair = V.conj() @ f_coords
    taylor = model.coefficients(f_coords)[:n_terms]
    return float(np.max(np.abs(pair - taylor)))


def orbit_frame_operator(model: FiniteBlaschkeModel, n_max: int = 200) -> np.ndarray:
    """sum_{n <= n_max} (S^n k0)(S^n k0)^* in basis coordinates."""
    V = orbit_vectors(model, n_max + 1)
    S = np.einsum("ni,nj->ij", V, V.conj())
    return 0.5 * (S + S.conj().T)


def orbit_frame_defect(model: FiniteBlaschkeModel, n_max: int = 200) -> float:
    S = orbit_frame_operator(model, n_max)
    return float(np.linalg.norm(S - np.eye(model.dimension), 2))


# vector-valued Hardy space and the splitting J --------------------------------


@dataclass(frozen=True, eq=False)
class VectorHardyFunction:
    components: np.ndarray  # (m, n_coeffs)

    def __post_init__(self):
        c = np.atleast_2d(np.asarray(self.components, dtype=complex))
        object.__setattr__(self, "components", c)

    @property
    def m(self) -> int:
        return self.components.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.components))


def split_J(f, m: int) -> VectorHardyFunction:
    """sum_k z^(k-1) f_k(z^m) -> (f_1, ..., f_m): component j takes a_{j-1}, a_{j-1+m}, ..."""
    a = f.coefficients if isinstance(f, HardyFunction) else np.asarray(f, dtype=complex)
    if len(a) % m:
        raise IndivisibleCutoff(f"{len(a)} coefficients are not divisible by m = {m}")
    return VectorHardyFunction(a.reshape(-1, m).T)


def join_J(F: VectorHardyFunction) -> HardyFunction:
    return HardyFunction(np.asarray(F.components).T.ravel())


def shift_coefficients(a, steps: int = 1) -> np.ndarray:
    """Multiply by z**steps on a fixed section (top coefficients drop out)."""
    a = np.asarray(a, dtype=complex)
    out = np.zeros_like(a)
    if steps < a.shape[-1]:
        out[..., steps:] = a[..., : a.shape[-1] - steps]
    return out


def intertwining_defect(f, m: int) -> float:
    """|| J S^m f - S J f ||, zero on sections whose length is divisible by m."""
    a = f.coefficients if isinstance(f, HardyFunction) else np.asarray(f, dtype=complex)
    lhs = split_J(shift_coefficients(a, m), m).components
    rhs = shift_coefficients(split_J(a, m).components, 1)
    return float(np.max(np.abs(lhs - rhs)))


def vector_pairings(F: VectorHardyFunction) -> np.ndarray:
    """P[j, n] = <F, S^n e_j> with e_j the constant j-th coordinate vector."""
    m, L = F.components.shape
    P = np.empty((m, L), dtype=complex)
    for j in range(m):
        for n in range(L):
            g = np.zeros((m, L), dtype=complex)
            g[j, n] = 1.0  # S^n e_j on the section
            P[j, n] = np.vdot(g, F.components)
    return P


def multi_generator_parseval(m: int, cutoff: int, F: VectorHardyFunction | None = None, rng=None) -> float:
    """| sum_{j,n} |<F, S^n e_j>|^2 - ||F||^2 | on the section of length cutoff per component."""
    if F is None:
        rng = np.random.default_rng(0) if rng is None else rng
        F = VectorHardyFunction(rng.standard_normal((m, cutoff)) + 1j * rng.standard_normal((m, cutoff)))
    P = vector_pairings(F)
    return float(abs(np.sum(np.abs(P) ** 2) - F.norm() ** 2))
