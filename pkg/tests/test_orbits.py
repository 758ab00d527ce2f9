import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from framelab.errors import NonIntegerPowerOfComplex, NotHermitian, SpectrumOnBoundary
from framelab.exponents import make_exponent_set
from framelab.orbits import (
    DiagonalOperator, OrbitFrameSystem, carleson_system, check_carleson_frame, frame_bounds,
    frame_operator_closed, frame_operator_partial, matrix_from_json, matrix_to_csv, matrix_to_json,
    orbit_vector, rounding_allowance, subsample_orbit, system_frame_bounds,
)


def brute_frame_operator(mu, b, lam):
    """Sum of outer products of explicit orbit vectors."""
    S = np.zeros((len(mu), len(mu)), dtype=complex)
    for n in lam:
        v = np.array([b[k] * mu[k] ** n for k in range(len(mu))], dtype=complex)
        S += np.outer(v, v.conj())
    return S


def test_orbit_vector_examples():
    sys = OrbitFrameSystem.from_arrays([0.5], [1.0])
    assert orbit_vector(sys, 0) == pytest.approx([1.0])
    assert orbit_vector(sys, 3) == pytest.approx([0.125])
    sys = OrbitFrameSystem.from_arrays([0.9, 0.5], [1, 2])
    assert orbit_vector(sys, 2.5) == pytest.approx([0.9**2.5, 2 * 0.5**2.5], rel=1e-15)


def test_fractional_power_of_complex_rejected():
    sys = OrbitFrameSystem.from_arrays([0.5j], [1.0])
    with pytest.raises(NonIntegerPowerOfComplex):
        orbit_vector(sys, 0.5)


def test_boundary_spectrum_needs_diagnostic():
    with pytest.raises(SpectrumOnBoundary):
        DiagonalOperator([1.0])
    sys = OrbitFrameSystem.from_arrays([1.0], [1.0], diagnostic=True)
    with pytest.raises(SpectrumOnBoundary):
        frame_operator_closed(sys)


def test_closed_form_single_atom():
    S = frame_operator_closed(OrbitFrameSystem.from_arrays([0.5], [np.sqrt(0.75)]))
    assert S[0, 0] == pytest.approx(1.0, abs=1e-15)
    S = frame_operator_closed(OrbitFrameSystem.from_arrays([0.5], [1.0]))
    assert S[0, 0] == pytest.approx(4 / 3)


def test_closed_form_matches_brute_force_k8():
    sys = carleson_system(8)
    N = 200
    part = OrbitFrameSystem(sys.operator, sys.generator, make_exponent_set("naturals", N))
    oracle = brute_frame_operator(sys.mu, sys.b, range(N + 1))
    mu = np.abs(sys.mu)
    bound = np.max(np.abs(sys.b)) ** 2 * np.max(mu ** (2 * (N + 1)) / (1 - mu**2))
    assert np.max(np.abs(frame_operator_closed(sys) - oracle)) <= bound + rounding_allowance(sys, N + 1)
    S, tail = frame_operator_partial(part)
    assert np.max(np.abs(S - oracle)) < 1e-13
    assert tail <= bound * 1.0001


def test_lambda_zero_is_rank_one():
    b = np.array([1.0, 2.0 - 1j, 0.5j])
    sys = OrbitFrameSystem.from_arrays([0.1, 0.2, 0.3], b, make_exponent_set("explicit", values=[0]))
    S, tail = frame_operator_partial(sys)
    assert np.allclose(S, np.outer(b, b.conj()))
    assert tail == 0


def test_every_second_single_atom():
    sys = OrbitFrameSystem.from_arrays([0.8], [1.0], make_exponent_set("every_nth", stride=2))
    assert frame_operator_closed(sys)[0, 0] == pytest.approx(1 / (1 - 0.64**2), rel=1e-14)


complex_disc = st.builds(lambda r, t: r * np.exp(1j * t), st.floats(0.0, 0.95), st.floats(0, 2 * np.pi))


@given(st.lists(complex_disc, min_size=1, max_size=5),
       st.lists(st.floats(-2, 2), min_size=5, max_size=5))
def test_partial_sums_increase_to_closed_form(mu, bre):
    b = np.array(bre[: len(mu)]) + 0.3
    sys = OrbitFrameSystem.from_arrays(mu, b)
    closed = frame_operator_closed(sys)
    prev = None
    for N in (10, 40, 400):
        S, tail = frame_operator_partial(OrbitFrameSystem(sys.operator, sys.generator, make_exponent_set("naturals", N)))
        assert np.max(np.abs(S - closed)) <= tail + rounding_allowance(sys, N + 1) + 1e-12
        # partial frame operators are monotone in the Loewner order
        if prev is not None:
            assert np.linalg.eigvalsh(S - prev).min() > -1e-10
        prev = S


def test_frame_bounds_trivial():
    r = frame_bounds(np.eye(4))
    assert (r.lower, r.upper) == pytest.approx((1, 1))
    r = frame_bounds(np.diag([0.25, 4]))
    assert (r.lower, r.upper) == pytest.approx((0.25, 4))
    with pytest.raises(NotHermitian):
        frame_bounds(np.array([[1, 1], [0, 1]]))


@given(st.integers(1, 8), st.integers(0, 10**6))
def test_frame_bounds_bracket_rayleigh_quotients(n, seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, 2 * n)) + 1j * rng.standard_normal((n, 2 * n))
    S = X @ X.conj().T
    S = 0.5 * (S + S.conj().T)
    r = frame_bounds(S)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    q = np.real(np.vdot(v, S @ v)) / np.real(np.vdot(v, v))
    assert r.lower - 1e-9 <= q <= r.upper + 1e-9


def test_cauchy_bounds_k8():
    r = system_frame_bounds(carleson_system(8))
    ev = np.linalg.eigvalsh(brute_frame_operator(carleson_system(8).mu, carleson_system(8).b, range(3000)))
    assert r.lower > 0
    assert r.lower == pytest.approx(ev[0], rel=1e-6)
    assert r.upper == pytest.approx(ev[-1], rel=1e-12)
    # eigensolver values; the lower bound is far below 0.05
    assert r.lower == pytest.approx(2.5745e-4, rel=1e-3)
    assert r.upper == pytest.approx(5.350, rel=1e-3)


def test_carleson_conditions():
    rep = check_carleson_frame(carleson_system(20))
    assert rep.passed and rep.ratio_low == pytest.approx(1) and rep.ratio_high == pytest.approx(1)
    assert rep.boundary_label == "finite-scale proxy"
    rep = check_carleson_frame(carleson_system(20, "squared"))
    assert rep.conditions == (True, True, True, False)
    mu = 1 - 1 / (np.arange(20) + 1.0)
    rep = check_carleson_frame(OrbitFrameSystem.from_arrays(mu, np.sqrt(1 - mu**2)))
    assert not rep.carleson


def test_subsampling():
    sys = carleson_system(8)
    assert subsample_orbit(sys, 1).exponents.stride == 1
    one = OrbitFrameSystem.from_arrays([0.9], [np.sqrt(1 - 0.81)])
    S = frame_operator_closed(subsample_orbit(one, 2))
    assert S[0, 0] == pytest.approx((1 - 0.81) / (1 - 0.81**2), rel=1e-14)
    r = system_frame_bounds(subsample_orbit(sys, 3))
    oracle = np.linalg.eigvalsh(brute_frame_operator(sys.mu, sys.b, range(0, 9000, 3)))[0]
    assert r.lower > 0 and r.lower == pytest.approx(oracle, rel=1e-6)


def test_matrix_export_round_trip():
    S = frame_operator_closed(carleson_system(4))
    assert np.array_equal(matrix_from_json(matrix_to_json(S)), S)
    obj = json.loads(matrix_to_json(S))
    assert obj["shape"] == [4, 4] and len(obj["data"][0][0]) == 2
    lines = matrix_to_csv(S).splitlines()
    assert lines[0] == "row,col,re,im" and len(lines) == 17
    r, c, re, im = lines[6].split(",")
    assert complex(float(re), float(im)) == S[int(r), int(c)]
