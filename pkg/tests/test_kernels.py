"""Tests for the excitation-kernel zoo.

Closed-form families (exponential, Pareto-tail, Mittag-Leffler) are checked
against frozen decimals and independent quadrature; the mixed Mittag-Leffler
family is checked against an exact special-function identity for the
(0.5, 0.5, 1, 1) pair and against frozen high-precision convolution values
for (0.5, 0.7, 1, 1).  Structural invariants (positivity, monotone tails,
cell-mass additivity, majorant domination) are exercised on every family.
"""

from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad, simpson
from scipy.special import erfcx

from hawkes_asy.kernels import (
    InvalidKernelError,
    KernelSpec,
    Regime,
    UnsupportedRegimeError,
    build_kernel,
    classify_regime,
    exponential_spec,
    mittag_leffler_spec,
    mixed_ml_spec,
    mixed_ml_tail_asymptote,
    pareto_tail_spec,
    zero_spec,
)

# ---------------------------------------------------------------------------
# fixtures (mixed kernels build cached tables; share them across tests)


@pytest.fixture(scope="module")
def exp_half():
    return build_kernel(exponential_spec(0.5, 1.0))


@pytest.fixture(scope="module")
def ml_unit():
    return build_kernel(mittag_leffler_spec(0.5, 1.0))


@pytest.fixture(scope="module")
def pareto_weak():
    return build_kernel(pareto_tail_spec(1.5, 0.5, 1.0, m=1.0))


@pytest.fixture(scope="module")
def mixed_equal():
    return build_kernel(mixed_ml_spec(0.5, 0.5, 1.0, 1.0))


@pytest.fixture(scope="module")
def mixed_slow():
    return build_kernel(mixed_ml_spec(0.5, 0.7, 1.0, 1.0))


@pytest.fixture(scope="module")
def mixed_spread():
    return build_kernel(mixed_ml_spec(0.3, 0.6, 2.0, 5.0))


# ---------------------------------------------------------------------------
# exponential family


def test_exponential_closed_forms(exp_half):
    k = exp_half
    assert k.m == 0.5
    assert k.sigma == pytest.approx(0.5, rel=1e-14)
    assert float(k.tail_Phi(0.0)) == pytest.approx(0.5, rel=1e-14)
    assert float(k.tail_Phi(2.0)) == pytest.approx(0.5 * math.exp(-2.0), rel=1e-14)
    assert float(k.phi(1.3)) == pytest.approx(0.5 * math.exp(-1.3), rel=1e-14)
    assert float(k.cell_mass(0.2, 1.1)) == pytest.approx(
        0.5 * (math.exp(-0.2) - math.exp(-1.1)), rel=1e-13
    )
    assert float(k.laplace_phi(2.0)) == pytest.approx(0.5 / 3.0, rel=1e-14)
    assert k.psi(2.0, math.inf) == pytest.approx(1.0, rel=1e-13)


def test_exponential_partial_moment_vs_quadrature(exp_half):
    # dual route: closed-form psi against adaptive quadrature of s^q * phi(s)
    for order, t in [(1.0, 2.0), (2.0, 5.0), (0.5, 3.0)]:
        ref = quad(lambda s: s**order * 0.5 * math.exp(-s), 0.0, t)[0]
        assert exp_half.psi(order, t) == pytest.approx(ref, rel=1e-10)


def test_exponential_invalid_params():
    with pytest.raises(InvalidKernelError):
        build_kernel(exponential_spec(-0.5, 1.0))
    with pytest.raises(InvalidKernelError):
        build_kernel(exponential_spec(0.5, 0.0))


# ---------------------------------------------------------------------------
# Mittag-Leffler family


def test_ml_laplace_transform_value(ml_unit):
    # transform of the unit-mass kernel at lambda=1: beta/(beta+1) = 1/2
    assert float(ml_unit.laplace_phi(1.0)) == pytest.approx(0.5, rel=1e-12)


def test_ml_tail_frozen_value(ml_unit):
    # tail at t=4 equals the alpha=1/2 function at -2: 0.25539567631050574
    assert float(ml_unit.tail_Phi(4.0)) == pytest.approx(0.25539567631050574, rel=1e-9)


def test_ml_tail_matches_erfcx_identity(ml_unit):
    # for alpha=1/2, beta=1 the tail is exactly erfcx(sqrt(t))
    ts = np.geomspace(1e-4, 1e4, 60)
    expected = erfcx(np.sqrt(ts))
    got = ml_unit.tail_Phi(ts)
    assert np.max(np.abs(got - expected) / expected) < 1e-9


def test_ml_two_term_tail_expansion(ml_unit):
    # (1-F)(t) - t^{-1/2}/Gamma(1/2) is o(t^{-1}): the t^{-2a} coefficient
    # 1/Gamma(1-2a) vanishes at a=1/2, so the scaled remainder must -> 0
    devs = []
    for t in [1e2, 1e3, 1e4]:
        lead = t**-0.5 / math.gamma(0.5)
        devs.append(abs(float(ml_unit.tail_Phi(t)) - lead) * t)
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 0.005


def test_ml_partial_moment_closed_vs_quadrature(ml_unit):
    # psi(1, t) closed form against integration of the erfcx tail identity:
    # psi_1(t) = int_0^t Phi - t*Phi(t)
    for t in [5.0, 50.0]:
        integral = quad(lambda s: erfcx(math.sqrt(s)), 0.0, t, limit=200)[0]
        ref = integral - t * erfcx(math.sqrt(t))
        assert ml_unit.psi(1.0, t) == pytest.approx(ref, rel=1e-8)


def test_ml_scaled_mass_is_subcritical():
    k = build_kernel(mittag_leffler_spec(0.5, 1.0, m=0.5))
    assert k.m == pytest.approx(0.5, rel=1e-14)
    assert float(k.tail_Phi(0.0)) == pytest.approx(0.5, rel=1e-12)
    assert classify_regime(k) is Regime.SUBCRITICAL


def test_ml_invalid_params():
    with pytest.raises(InvalidKernelError):
        build_kernel(mittag_leffler_spec(1.2, 1.0))
    with pytest.raises(InvalidKernelError):
        build_kernel(mittag_leffler_spec(0.5, -1.0))


# ---------------------------------------------------------------------------
# Pareto-tail family


def test_pareto_piecewise_forms(pareto_weak):
    k = pareto_weak
    assert k.m == 1.0
    # constant head below the cutoff, power density beyond it
    assert float(k.phi(0.3)) == pytest.approx(0.5, rel=1e-14)
    assert float(k.phi(2.0)) == pytest.approx(0.5 * 1.5 * 2.0**-2.5, rel=1e-14)
    assert float(k.tail_Phi(1.0)) == pytest.approx(0.5, rel=1e-14)
    assert float(k.tail_Phi(4.0)) == pytest.approx(0.5 * 4.0**-1.5, rel=1e-14)
    assert k.sigma == pytest.approx(1.75, rel=1e-13)
    assert k.psi(2.0, math.inf) == math.inf
    assert k.psi(1.5, math.inf) == math.inf


def test_pareto_partial_moment_vs_quadrature(pareto_weak):
    def phi_scalar(s):
        return 0.5 if s < 1.0 else 0.75 * s**-2.5

    for order, t in [(1.0, 10.0), (1.5, 4.0), (2.0, 7.0)]:
        ref = quad(lambda s: s**order * phi_scalar(s), 0.0, t, points=[1.0])[0]
        assert pareto_weak.psi(order, t) == pytest.approx(ref, rel=1e-10)


def test_pareto_default_mass_makes_density_continuous():
    k = build_kernel(pareto_tail_spec(1.5, 0.5))
    assert k.m == pytest.approx(1.25, rel=1e-14)
    assert float(k.phi(1.0 - 1e-12)) == pytest.approx(float(k.phi(1.0)), rel=1e-9)
    with pytest.raises(UnsupportedRegimeError):
        classify_regime(k)


def test_pareto_invalid_params():
    with pytest.raises(InvalidKernelError):
        build_kernel(pareto_tail_spec(-0.5, 1.0))
    with pytest.raises(InvalidKernelError):
        build_kernel(pareto_tail_spec(1.5, 0.5, 1.0, m=0.1))  # below tail mass


# ---------------------------------------------------------------------------
# zero kernel


def test_zero_kernel_is_empty():
    k = build_kernel(zero_spec())
    assert k.m == 0.0
    ts = np.linspace(0.0, 20.0, 7)
    assert np.all(k.tail_Phi(ts) == 0.0)
    assert np.all(k.phi(ts) == 0.0)
    assert k.psi(1.0, 10.0) == 0.0
    assert classify_regime(k) is Regime.SUBCRITICAL


# ---------------------------------------------------------------------------
# regime classification


def test_classification_by_mass_and_first_moment(exp_half, ml_unit, mixed_equal, pareto_weak):
    assert classify_regime(exp_half) is Regime.SUBCRITICAL
    assert classify_regime(build_kernel(exponential_spec(1.0, 2.0))) is Regime.WEAKLY_CRITICAL
    assert classify_regime(pareto_weak) is Regime.WEAKLY_CRITICAL
    assert classify_regime(ml_unit) is Regime.STRONGLY_CRITICAL
    assert classify_regime(mixed_equal) is Regime.STRONGLY_CRITICAL


def test_supercritical_rejected():
    with pytest.raises(UnsupportedRegimeError):
        classify_regime(build_kernel(exponential_spec(1.2, 1.0)))


# ---------------------------------------------------------------------------
# mixed Mittag-Leffler family


def test_mixed_equal_pair_matches_exact_identity(mixed_equal):
    # for (0.5, 0.5, 1, 1) the convolution tail has the exact closed form
    # (1-2t) e^t erfc(sqrt(t)) + 2 sqrt(t/pi)
    ts = np.geomspace(1e-6, 1e6, 200)
    expected = (1.0 - 2.0 * ts) * erfcx(np.sqrt(ts)) + 2.0 * np.sqrt(ts / np.pi)
    got = mixed_equal.tail_Phi(ts)
    assert np.max(np.abs(got - expected) / expected) < 1e-7


def test_mixed_slow_pair_frozen_tail_values(mixed_slow):
    # frozen 30-digit quadrature values for (0.5, 0.7, 1, 1)
    frozen = [
        (0.5, 0.817439944711225),
        (1.0, 0.697928742400385),
        (10.0, 0.250419662467895),
        (100.0, 0.0704407131789378),
    ]
    for t, expected in frozen:
        assert float(mixed_slow.tail_Phi(t)) == pytest.approx(expected, rel=1e-6)
    # below the table the head continuation applies
    assert float(mixed_slow.tail_Phi(1e-6)) == pytest.approx(0.999999942777, abs=1e-9)


def test_mixed_tail_asymptote_formula():
    spec_eq = mixed_ml_spec(0.5, 0.5, 1.0, 1.0)
    spec_ne = mixed_ml_spec(0.3, 0.6, 2.0, 5.0)
    for t in [3.0, 110.0]:
        assert mixed_ml_tail_asymptote(spec_eq, t) == pytest.approx(
            2.0 * t**-0.5 / math.gamma(0.5), rel=1e-14
        )
        assert mixed_ml_tail_asymptote(spec_ne, t) == pytest.approx(
            0.5 * t**-0.3 / math.gamma(0.7), rel=1e-14
        )
    with pytest.raises(InvalidKernelError):
        mixed_ml_tail_asymptote(exponential_spec(0.5, 1.0), 1.0)


@pytest.mark.parametrize(
    "fixture_name, final_bound",
    [("mixed_equal", 1e-3), ("mixed_slow", 0.1), ("mixed_spread", 0.01)],
)
def test_mixed_tail_approaches_asymptote(request, fixture_name, final_bound):
    k = request.getfixturevalue(fixture_name)
    devs = [
        abs(float(k.tail_Phi(t)) / mixed_ml_tail_asymptote(k.spec, t) - 1.0)
        for t in [1e2, 1e3, 1e4]
    ]
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < final_bound


@pytest.mark.parametrize("fixture_name", ["mixed_equal", "mixed_slow", "mixed_spread"])
def test_mixed_density_integrates_to_one(request, fixture_name):
    k = request.getfixturevalue(fixture_name)
    grid = np.geomspace(1e-6, 1e6, 6000)
    body = simpson(k.phi(grid) * grid, x=np.log(grid))
    head = 1.0 - float(k.tail_Phi(1e-6))
    beyond = float(k.tail_Phi(1e6))  # regularly-varying continuation mass
    assert head + body + beyond == pytest.approx(1.0, abs=1e-6)


def test_mixed_laplace_transform_is_product(mixed_slow):
    lam = 2.0
    expected = (1.0 / (1.0 + lam**0.5)) * (1.0 / (1.0 + lam**0.7))
    assert float(mixed_slow.laplace_phi(lam)) == pytest.approx(expected, rel=1e-14)


def test_mixed_invalid_params():
    with pytest.raises(InvalidKernelError):
        build_kernel(mixed_ml_spec(0.5, 1.0, 1.0, 1.0))  # alpha2 at the boundary
    with pytest.raises(InvalidKernelError):
        build_kernel(mixed_ml_spec(0.7, 0.5, 1.0, 1.0))  # alpha1 > alpha2
    with pytest.raises(InvalidKernelError):
        build_kernel(mixed_ml_spec(0.5, 0.7, -1.0, 1.0))
    with pytest.raises(InvalidKernelError):
        build_kernel(mixed_ml_spec(0.5, 0.7, 1.0, 1.0), table_nodes=32)


# ---------------------------------------------------------------------------
# structural invariants across all families

ALL_FIXTURES = ["exp_half", "ml_unit", "pareto_weak", "mixed_equal", "mixed_slow"]


@pytest.mark.parametrize("fixture_name", ALL_FIXTURES)
def test_density_nonnegative_and_tail_monotone(request, fixture_name):
    k = request.getfixturevalue(fixture_name)
    ts = np.concatenate(([0.0], np.geomspace(1e-6, 1e5, 400)))
    assert np.all(k.phi(ts) >= 0.0)
    tail = k.tail_Phi(ts)
    assert np.all(np.diff(tail) <= 1e-12 * k.m)
    assert float(k.tail_Phi(0.0)) == pytest.approx(k.m, rel=1e-12)


@pytest.mark.parametrize("fixture_name", ALL_FIXTURES)
def test_tail_equals_mass_minus_cell_mass(request, fixture_name):
    k = request.getfixturevalue(fixture_name)
    for t in np.geomspace(1e-3, 1e4, 30):
        lhs = float(k.tail_Phi(t))
        rhs = k.m - float(k.cell_mass(0.0, t))
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-14 * k.m)


@pytest.mark.parametrize("fixture_name", ALL_FIXTURES)
def test_cell_masses_sum_to_mass_below_tail(request, fixture_name):
    # masses of a partition of [0, T] telescope to m - tail(T)
    k = request.getfixturevalue(fixture_name)
    edges = np.concatenate(([0.0], np.geomspace(1e-3, 37.0, 50)))
    total = float(np.sum(k.cell_mass(edges[:-1], edges[1:])))
    assert total == pytest.approx(k.m - float(k.tail_Phi(37.0)), rel=1e-10)


@pytest.mark.parametrize("fixture_name", ALL_FIXTURES)
def test_majorant_dominates_density(request, fixture_name):
    k = request.getfixturevalue(fixture_name)
    ts = np.geomspace(1e-8, 1e6, 3000)
    phi = k.phi(ts)
    maj = k.majorant(ts)
    assert np.all(maj >= phi * (1.0 - 1e-12))
    assert np.all(np.diff(maj) <= 1e-12 * np.maximum(maj[:-1], 1e-300))


@given(
    a=st.floats(min_value=0.0, max_value=30.0),
    b=st.floats(min_value=0.0, max_value=30.0),
    c=st.floats(min_value=0.0, max_value=30.0),
)
@settings(max_examples=120, deadline=None)
def test_cell_mass_additivity_property(a, b, c):
    a, b, c = sorted((a, b, c))
    for k in _ADDITIVITY_KERNELS:
        lhs = float(k.cell_mass(a, c))
        rhs = float(k.cell_mass(a, b)) + float(k.cell_mass(b, c))
        assert abs(lhs - rhs) <= 1e-12 * max(k.m, 1e-30)


_ADDITIVITY_KERNELS = [
    build_kernel(exponential_spec(0.5, 1.0)),
    build_kernel(mittag_leffler_spec(0.5, 1.0)),
    build_kernel(pareto_tail_spec(1.5, 0.5, 1.0, m=1.0)),
]


# ---------------------------------------------------------------------------
# serialization


def test_spec_json_round_trip():
    specs = [
        exponential_spec(0.5, 1.0),
        mittag_leffler_spec(0.4, 2.0, m=0.8),
        mixed_ml_spec(0.5, 0.7, 1.0, 1.0),
        pareto_tail_spec(1.5, 0.5, 2.0, m=1.0),
        zero_spec(),
    ]
    for spec in specs:
        restored = KernelSpec.from_json(json.loads(json.dumps(spec.to_json())))
        assert restored == spec


def test_spec_json_rejects_garbage():
    with pytest.raises(InvalidKernelError):
        KernelSpec.from_json({"family": "Cauchy", "params": {}})
    with pytest.raises(InvalidKernelError):
        KernelSpec.from_json(["not", "an", "object"])
    with pytest.raises(InvalidKernelError):
        KernelSpec.from_json({"family": "Exponential", "params": "nope"})
