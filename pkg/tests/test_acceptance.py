"""Acceptance suite: twelve criteria, each reported as one PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) for the bare report, or
through pytest, where the lines also appear in the terminal summary.
"""
import cmath
import math
import time

import mpmath
import numpy as np
import pytest

from framelab.disk import DiskSequence, FiniteBlaschke, carleson_constant
from framelab.exponents import make_exponent_set
from framelab.hardy import (
    LinearFractionalMap, RationalWeight, cowen_adjoint_factors, invertibility_check, isometry_rkh_check,
    multiplication_orbit_frame, unitarity_check, wco_matrix,
)
from framelab.interpolation import (
    InterpolationProblem, KernelFamily, interpolation_residual, mcphail_check, min_norm_interpolant,
    riesz_basic_test,
)
from framelab.model import (
    jordan_structure, livsic_moeller_defect, model_basis, orbit_frame_defect, parseval_orbit_check, spectrum,
)
from framelab.muntz import (
    AtomicMeasure, l2nu_inner, model_unitary_U, monomial_values, monomial_vector, muntz_szasz_sum,
    pointwise_condition, pointwise_sum, s_of_x, spectral_model_J,
)
from framelab.orbits import (
    OrbitFrameSystem, carleson_system, check_carleson_frame, frame_operator_closed,
    frame_operator_partial, rounding_allowance, subsample_orbit, system_frame_bounds,
)

RESULTS = {}
SEED = 20240611
LEMMA_C = 1.25  # frozen constant for x S(x) <= C / log(1/x)


def report(n, ok, detail):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)
    return ok


def criterion_1():
    t0 = time.perf_counter()
    r = multiplication_orbit_frame(LinearFractionalMap(1, 0, 0, 1), RationalWeight.one(), 63, n_max=63)
    dt = time.perf_counter() - t0
    err = max(abs(r.bounds.lower - 1), abs(r.bounds.upper - 1))
    return report(1, err < 1e-10 and dt < 1.0, f"shift orbit bounds off (1,1) by {err:.2e}, {dt:.3f}s")


def criterion_2():
    rep = check_carleson_frame(carleson_system(20))
    b8, b16 = system_frame_bounds(carleson_system(8)), system_frame_bounds(carleson_system(16))
    positive = b8.lower > 0 and b16.lower > 0 and math.isfinite(b16.upper)

    def digits3(v):
        return float(f"{v:.3g}")

    stable = digits3(b8.lower) == digits3(b16.lower) and digits3(b8.upper) == digits3(b16.upper)
    bad = check_carleson_frame(carleson_system(20, "squared"))
    bad16 = system_frame_bounds(carleson_system(16, "squared"))
    squared_fails = not bad.weights_in_band and bad16.lower < 1e-3
    ok = rep.passed and positive and stable and squared_fails
    return report(2, ok, f"conditions {rep.conditions}; A,B K=8 ({b8.lower:.4g},{b8.upper:.4g}) "
                         f"K=16 ({b16.lower:.4g},{b16.upper:.4g}) stable3={stable}; "
                         f"squared: band={bad.weights_in_band} A16={bad16.lower:.2e}")


def _random_carleson(rng):
    K = int(rng.integers(4, 13))
    k = np.sort(rng.choice(np.arange(1, 25), K, replace=False))
    mu = (1 - 2.0 ** -k) * np.exp(2j * np.pi * rng.random(K))
    b = (rng.standard_normal(K) + 1j * rng.standard_normal(K)) * np.sqrt(1 - np.abs(mu) ** 2)
    return OrbitFrameSystem.from_arrays(mu, b)


def criterion_3():
    rng = np.random.default_rng(SEED)
    N, worst = 200, 0.0
    for _ in range(20):
        sys = _random_carleson(rng)
        assert carleson_constant(sys.mu) > 0
        part = OrbitFrameSystem(sys.operator, sys.generator, make_exponent_set("naturals", N))
        S, tail = frame_operator_partial(part)
        diff = np.max(np.abs(frame_operator_closed(sys) - S))
        worst = max(worst, diff - tail - rounding_allowance(sys, N + 1))
    violation = max(worst, 0.0)
    return report(3, violation == 0, f"max violation of tail bound over 20 configurations: {violation:.3g}")


def criterion_4():
    t0 = time.perf_counter()
    xs = (1e-1, 1e-2, 1e-3)
    lines, ok = [], True
    for tag in ("ceil_n_log_n", "primes"):
        ex = make_exponent_set(tag, 10**5)
        vals = [pointwise_condition(math.sqrt(1 - x), ex) for x in xs]
        dec = all(b < a for a, b in zip(vals, vals[1:]))
        ms = muntz_szasz_sum(ex)
        ok &= dec and vals[-1] < 0.25 and ms > 5
        lines.append(f"{tag}: {', '.join(f'{v:.4f}' for v in vals)} MS-sum {ms:.3f}")
    nat = max(abs(pointwise_condition(math.sqrt(1 - x), make_exponent_set("naturals")) - 1) for x in xs)
    dt = time.perf_counter() - t0
    ok &= nat < 1e-12 and dt < 10
    return report(4, ok, "; ".join(lines) + f"; naturals dev {nat:.1e}; {dt:.2f}s")


def criterion_5():
    xs = (1e-1, 1e-2, 1e-3, 1e-4)
    sums = [s_of_x(x) for x in xs]
    vals = [x * s.value for x, s in zip(xs, sums)]
    dec = all(b < a for a, b in zip(vals, vals[1:]))
    bounded = all(v <= LEMMA_C / math.log(1 / x) for v, x in zip(vals, xs))
    tails = max(s.tail_bound for s in sums)
    return report(5, dec and bounded and tails < 1e-12,
                  f"x S(x) = {', '.join(f'{v:.4f}' for v in vals)}; C = {LEMMA_C}; max tail {tails:.1e}")


def criterion_6():
    rng = np.random.default_rng(SEED)
    atoms = AtomicMeasure(1 - 2.0 ** -np.arange(1, 17))
    mu = atoms.locations
    worst = 0.0
    for _ in range(100):
        b = np.sqrt(atoms.weights) * (0.5 + 1.5 * rng.random(16)) * np.exp(2j * np.pi * rng.random(16))
        x = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        lam = 50 * rng.random()
        lhs = np.vdot(b * mu**lam, x)  # <x, D^lam b>
        Jx = spectral_model_J(x, mu, b)
        mid = l2nu_inner(Jx, monomial_values(atoms, lam), atoms)
        rhs = np.vdot(monomial_vector(atoms, lam), model_unitary_U(Jx, atoms))
        scale = max(1.0, abs(lhs))
        worst = max(worst, abs(lhs - mid) / scale, abs(lhs - rhs) / scale)
    return report(6, worst < 1e-10, f"max pairing discrepancy over 100 draws: {worst:.2e}")


def criterion_7():
    symbols = {
        "rotation": LinearFractionalMap.rotation(cmath.exp(0.7j)),
        "automorphism": LinearFractionalMap.automorphism(0.5),
        "contraction z/2": LinearFractionalMap(0.5, 0, 0, 1),
        "contraction z/2+0.3": LinearFractionalMap(0.5, 0.3, 0, 1),
    }
    weights = {
        "1": RationalWeight.one(),
        "kernel 0.5": RationalWeight.kernel(0.5),
        "vanishing 1-z": RationalWeight.polynomial([1, -1]),
    }
    agree, total, bad = 0, 0, []
    for sname, phi in symbols.items():
        for wname, u in weights.items():
            inv = invertibility_check(wco_matrix(phi, u, 64)).invertible
            frame = multiplication_orbit_frame(phi, u, 64)
            total += 1
            if inv == (frame.bounds.lower > 1e-3):
                agree += 1
            else:
                bad.append(f"{sname}/{wname}")
    return report(7, agree == total == 12, f"{agree}/{total} cases agree" + (f"; disagree: {bad}" if bad else ""))


def criterion_8():
    pairs = [(0.5, 1.0), (0.3 + 0.4j, cmath.exp(1j)), (-0.6j, -1.0)]
    ok, notes = True, []
    for p, rot in pairs:
        phi = LinearFractionalMap.automorphism(p, rot)
        u = RationalWeight.bourdon_narayan(p, cmath.exp(0.3j))
        d = [unitarity_check(wco_matrix(phi, u, D)).truncation_defect for D in (16, 32, 64)]
        r = (d[1] / d[0]) ** (1 / 16)
        geometric = d[1] < d[0] and r < 1 and d[2] <= max(10 * d[1] * r**32, 1e-14)
        iso = isometry_rkh_check(wco_matrix(phi, u, 64))
        ok &= d[2] < 1e-6 and geometric and iso.forces_unitary and iso.is_bn_form
        notes.append(f"p={p}: defects {d[0]:.1e},{d[1]:.1e},{d[2]:.1e}")
    non_bn = [
        (LinearFractionalMap.automorphism(0.5), RationalWeight.one()),
        (LinearFractionalMap.automorphism(0.3 + 0.4j, cmath.exp(1j)), RationalWeight.kernel(0.2)),
        (LinearFractionalMap.automorphism(-0.6j), RationalWeight.polynomial([2 * math.sqrt(1 - 0.36)]) ),
    ]
    viol = min(isometry_rkh_check(wco_matrix(phi, u, 64)).max_violation for phi, u in non_bn)
    ok &= viol >= 1e-2
    return report(8, ok, "; ".join(notes) + f"; min non-BN violation {viol:.3f}")


def criterion_9():
    symbols = [
        LinearFractionalMap(1, 0.5, 0.5, 1),
        LinearFractionalMap.automorphism(0.3 - 0.5j, cmath.exp(2j)),
        LinearFractionalMap(0.5, 0, 0, 1),
        LinearFractionalMap(0.4, 0.2j, 0, 1),
        LinearFractionalMap(0.4, 0.1, -0.3, 1),
    ]
    auts = [phi.is_automorphism for phi in symbols]
    assert all(phi.maps_disc_to_disc for phi in symbols) and any(auts) and not all(auts)
    defects = [cowen_adjoint_factors(phi, 64).defect for phi in symbols]
    return report(9, max(defects) < 1e-8, f"Cowen defects {', '.join(f'{d:.1e}' for d in defects)}")


def criterion_10():
    theta = FiniteBlaschke(((0.3, 1), (0.6, 1), (0.5, 2)))
    m = model_basis(theta)
    ev_err = livsic_moeller_defect(m)
    js = jordan_structure(m)
    jordan_ok = js == {0.3: [1], 0.6: [1], 0.5: [2]}
    rng = np.random.default_rng(SEED)
    f = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    pd = parseval_orbit_check(m, f)
    fd = orbit_frame_defect(m, 200)
    ok = ev_err < 1e-8 and jordan_ok and pd < 1e-8 and fd < 1e-6
    return report(10, ok, f"spectrum {np.round(np.sort(spectrum(m).real), 12).tolist()} err {ev_err:.1e}; "
                          f"blocks {js}; Parseval {pd:.1e}; frame op {fd:.1e}")


def criterion_11():
    nodes = DiskSequence.geometric(10)
    w = np.sqrt(1 - np.abs(nodes.points))
    mc = mcphail_check(nodes, w)
    rng = np.random.default_rng(SEED)
    c = rng.standard_normal(10) + 1j * rng.standard_normal(10)
    p = InterpolationProblem(nodes, w, c)
    res = interpolation_residual(p, min_norm_interpolant(p, 64))
    good = riesz_basic_test(KernelFamily.scalar(nodes.points[:5]), 256)
    bad = riesz_basic_test(KernelFamily.scalar(DiskSequence.harmonic(31).points), 256)
    ok = mc.passed and res < 1e-8 and good.condition < 1e4 and bad.condition > 1e6
    return report(11, ok, f"McPhail {mc.passed}; residual {res:.1e}; Riesz cond Carleson {good.condition:.3g}, "
                          f"non-separated {bad.condition:.3g}")


def criterion_12():
    sys = carleson_system(20)
    lows = {N: system_frame_bounds(subsample_orbit(sys, N)).lower for N in (2, 3, 5)}
    mpmath.mp.dps = 40
    worst = 0.0
    for mu in 1 - 2.0 ** -np.arange(1, 20):
        for N in (2, 3, 5):
            got = pointwise_sum(mu, make_exponent_set("every_nth", stride=N)).value
            m = mpmath.mpf(float(mu))
            want = float((1 - m**2) / (1 - m ** (2 * N)))
            worst = max(worst, abs(got - want))
    ok = all(v > 0 for v in lows.values()) and worst < 1e-12
    return report(12, ok, f"A for N=2,3,5: {', '.join(f'{v:.3e}' for v in lows.values())}; "
                          f"closed form error {worst:.1e}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12]


@pytest.mark.parametrize("check", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 13)])
def test_criterion(check):
    assert check(), RESULTS.get(CRITERIA.index(check) + 1)


if __name__ == "__main__":
    for check in CRITERIA:
        check()
