"""Exact and asymptotic mean/variance curves for linear Hawkes processes.

The exact route turns a resolvent profile into moment curves through

    mean(t)     = mu0 * (t + IR2(t))
    variance(t) = mu0 * (t + 3*IR2(t) + 2*(IR # IR)(t) + (IR^2 # IR)(t)
                         + integral_0^t IR(s)^2 ds)

where ``#`` is the one-sided convolution on [0, t], evaluated with the same
trapezoid product-integration step as the profile itself (IR(0) = 0 makes the
discrete linear convolution coincide with the trapezoid rule exactly).

The asymptotic routes report, per criticality regime and declared tail data,
the leading power law of each moment and the next-order correction on top of
it.  Sub-case labels used throughout (``regime_case`` on curves and reports):

==========================  ====================================================
label                       selected when
==========================  ====================================================
subcritical.rv              m < 1, sigma = inf, tail exponent alpha < 1
subcritical.boundary        m < 1, sigma = inf, alpha = 1
subcritical.integrable      m < 1, sigma < inf
weakly.1                    m = 1, sigma < inf, alpha = 1
weakly.2                    m = 1, sigma < inf, 1 < alpha < 2
weakly.3                    m = 1, sigma < inf, alpha = 2, Psi_2(inf) = inf
weakly.4                    m = 1, sigma < inf, Psi_2(inf) < inf
strongly.fast               m = 1, sigma = inf, second-order data, rho < -alpha
strongly.slow               same, -alpha < rho < 0
mixed.equal                 mixed kernel, alpha1 = alpha2
mixed.slow                  mixed kernel, alpha1 < alpha2 < 2*alpha1
mixed.boundary              mixed kernel, alpha2 = 2*alpha1
mixed.fast                  mixed kernel, alpha2 > 2*alpha1
==========================  ====================================================

Here alpha is the tail-decay exponent declared by the kernel spec (never
estimated from samples), sigma = Psi_1(inf) the first tail moment, and
(rho, A, C_F) the second-order variation data of the tail supplied by the
caller for strongly critical kernels.  Case boundaries excluded by the
asymptotic theory (rho = 0, rho = -alpha, rho <= alpha - 1) are rejected with
UnmatchedCaseError rather than interpolated.  The strongly critical sub-cases
additionally assume eventual monotonicity of IR(t) - C*t^alpha, which cannot
be verified from a kernel spec alone and is taken as a hypothesis.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.signal import fftconvolve

from .kernels import (
    Kernel,
    KernelSpec,
    Regime,
    UnsupportedRegimeError,
    _validated_mixed_params,
    classify_regime,
)
from .regvar import SecondOrderParams
from .resolvent import ResolventProfile, TimeGrid
from .special_fn import DomainError, beta_fn, gamma_fn

__all__ = [
    "MomentSource",
    "MomentCurve",
    "SecondOrderReport",
    "UnmatchedCaseError",
    "exact_moments",
    "first_order_approx",
    "second_order_approx",
    "second_order_resolvent_estimates",
    "mixed_ml_second_order",
]

_TOL = 1e-12


class UnmatchedCaseError(ValueError):
    """Declared tail data falls outside every supported asymptotic sub-case."""


class MomentSource(enum.Enum):
    EXACT = "Exact"
    FIRST_ORDER = "FirstOrder"
    SECOND_ORDER = "SecondOrder"


@dataclass(frozen=True)
class MomentCurve:
    """Mean and variance sampled at grid nodes, tagged with their provenance."""

    grid: TimeGrid
    mean: np.ndarray
    variance: np.ndarray
    source: MomentSource
    regime_case: str
    mu0: float

    def __post_init__(self) -> None:
        n = self.grid.n_steps
        if len(self.mean) != n + 1 or len(self.variance) != n + 1:
            raise DomainError("moment arrays must hold one value per grid node")

    def to_csv(self, path) -> None:
        nodes = self.grid.nodes()
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "mean", "variance", "source", "regime_case"])
            for t, mu, v in zip(nodes, self.mean, self.variance):
                writer.writerow(
                    [
                        f"{t:.12g}",
                        f"{mu:.12g}",
                        f"{v:.12g}",
                        self.source.value,
                        self.regime_case,
                    ]
                )


@dataclass(frozen=True)
class SecondOrderReport:
    """Leading power law plus next-order correction for one moment curve.

    The approximation reads ``leading_coeff * t**leading_exponent +
    correction(t)`` with ``correction(t) = o(t**leading_exponent)``; sub-cases
    whose correction cancels identically carry the zero function.
    """

    leading_coeff: float
    leading_exponent: float
    correction: Callable
    regime_case: str

    def __post_init__(self) -> None:
        if not (math.isfinite(self.leading_exponent) and self.leading_exponent > 0.0):
            raise DomainError(
                f"leading exponent must be positive and finite, got {self.leading_exponent}"
            )
        if not math.isfinite(self.leading_coeff):
            raise DomainError(f"leading coefficient must be finite, got {self.leading_coeff}")

    def leading(self, t):
        return _shaped(self.leading_coeff * np.asarray(t, dtype=float) ** self.leading_exponent, t)

    def evaluate(self, t):
        return _shaped(np.asarray(self.leading(t)) + np.asarray(self.correction(t)), t)


def _shaped(values, template):
    """Return a float for scalar input, the array itself otherwise."""
    if np.ndim(template) == 0:
        return float(np.asarray(values))
    return np.asarray(values, dtype=float)


def _check_rate(mu0: float) -> None:
    if not (math.isfinite(mu0) and mu0 > 0.0):
        raise DomainError(f"base rate must be positive and finite, got {mu0}")


def _times(t, *, positive: bool = False):
    arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("times must be finite")
    if positive:
        if np.any(arr <= 0.0):
            raise DomainError("times must be strictly positive")
    elif np.any(arr < 0.0):
        raise DomainError("times must be nonnegative")
    return arr


def _declared_tail_exponent(spec: KernelSpec) -> float | None:
    """Tail-decay exponent declared by the spec, if any."""
    if spec.family == "MixedMittagLeffler":
        return float(spec.params["alpha1"])
    value = spec.params.get("alpha")
    return None if value is None else float(value)


def _psi_values(k: Kernel, order: float, arr: np.ndarray) -> np.ndarray:
    flat = np.atleast_1d(arr)
    out = np.array([k.psi(order, float(s)) for s in flat], dtype=float)
    return out.reshape(np.shape(arr))


def exact_moments(profile: ResolventProfile, mu0: float, regime_case: str = "") -> MomentCurve:
    """Mean and variance of the count process on the profile's grid."""
    _check_rate(mu0)
    grid = profile.grid
    n = grid.n_steps
    ir = np.asarray(profile.IR, dtype=float)
    ir2 = np.asarray(profile.IR2, dtype=float)
    if ir.shape != (n + 1,) or ir2.shape != (n + 1,):
        raise DomainError("profile cumulatives do not match their grid")
    if ir[0] != 0.0 or ir2[0] != 0.0:
        raise DomainError("cumulative resolvent must vanish at t = 0")
    h = grid.step
    t = grid.nodes()
    ir_sq = ir * ir
    conv_ir_ir = fftconvolve(ir, ir)[: n + 1] * h
    conv_irsq_ir = fftconvolve(ir_sq, ir)[: n + 1] * h
    int_ir_sq = np.empty(n + 1)
    int_ir_sq[0] = 0.0
    np.cumsum(0.5 * h * (ir_sq[1:] + ir_sq[:-1]), out=int_ir_sq[1:])
    mean = mu0 * (t + ir2)
    variance = mu0 * (t + 3.0 * ir2 + 2.0 * conv_ir_ir + conv_irsq_ir + int_ir_sq)
    return MomentCurve(
        grid=grid,
        mean=mean,
        variance=variance,
        source=MomentSource.EXACT,
        regime_case=regime_case,
        mu0=mu0,
    )


def first_order_approx(k: Kernel, mu0: float, t):
    """Leading-order (mean, variance) at time(s) t for the kernel's regime.

    Subcritical: ``(mu0 t/(1-m), mu0 t/(1-m)^3)``.  Weakly critical:
    ``(mu0 t^2/(2 sigma), mu0 t^4/(12 sigma^3))``.  Strongly critical with
    declared tail exponent a in [0, 1): ``mu0 t / (Gamma(1-a) Gamma(2+a)
    Phi(t))`` and ``mu0 B(2a+1, a+1) t / (Gamma(1-a) Gamma(1+a) Phi(t))^3``;
    at a = 1 the truncated tail moment Psi_1(t) replaces the scale:
    ``(mu0 t^2/(2 Psi_1(t)), mu0 t^4/(12 Psi_1(t)^3))``.
    """
    _check_rate(mu0)
    regime = classify_regime(k)
    arr = _times(t)
    if regime is Regime.SUBCRITICAL:
        mean = mu0 * arr / (1.0 - k.m)
        variance = mu0 * arr / (1.0 - k.m) ** 3
    elif regime is Regime.WEAKLY_CRITICAL:
        mean = mu0 * arr**2 / (2.0 * k.sigma)
        variance = mu0 * arr**4 / (12.0 * k.sigma**3)
    else:
        alpha = _declared_tail_exponent(k.spec)
        if alpha is None or not 0.0 <= alpha <= 1.0:
            raise UnsupportedRegimeError(
                "strongly critical first-order approximation needs a declared "
                f"tail exponent in [0, 1], got {alpha}"
            )
        if abs(alpha - 1.0) <= _TOL:
            arr = _times(t, positive=True)
            psi1 = _psi_values(k, 1.0, arr)
            mean = mu0 * arr**2 / (2.0 * psi1)
            variance = mu0 * arr**4 / (12.0 * psi1**3)
        else:
            phi_t = np.asarray(k.tail_Phi(arr), dtype=float)
            g1m = gamma_fn(1.0 - alpha)
            mean = mu0 * arr / (g1m * gamma_fn(2.0 + alpha) * phi_t)
            variance = (
                mu0
                * beta_fn(2.0 * alpha + 1.0, alpha + 1.0)
                * arr
                / (g1m * gamma_fn(1.0 + alpha) * phi_t) ** 3
            )
    return _shaped(mean, t), _shaped(variance, t)


@dataclass(frozen=True)
class _CaseData:
    label: str
    alpha: float | None = None
    rho: float | None = None
    aux: Callable | None = None
    c_phi: float | None = None


def _match_case(k: Kernel, second_order: SecondOrderParams | None) -> _CaseData:
    """Map (regime, declared tail data) to an asymptotic sub-case label."""
    regime = classify_regime(k)
    alpha = _declared_tail_exponent(k.spec)
    if second_order is not None:
        supplied = -float(second_order.alpha)
        if alpha is not None and abs(supplied - alpha) > 1e-9:
            raise DomainError(
                f"declared tail exponent {alpha} disagrees with supplied "
                f"second-order index {second_order.alpha}"
            )
        alpha = supplied

    if regime is Regime.SUBCRITICAL:
        if math.isfinite(k.sigma):
            return _CaseData("subcritical.integrable")
        if alpha is None:
            raise UnmatchedCaseError(
                "subcritical kernel with divergent first tail moment needs a "
                "declared tail exponent"
            )
        if alpha < 1.0 - _TOL:
            return _CaseData("subcritical.rv", alpha=alpha)
        if abs(alpha - 1.0) <= _TOL:
            return _CaseData("subcritical.boundary", alpha=alpha)
        raise UnmatchedCaseError(
            f"tail exponent {alpha} > 1 is inconsistent with a divergent first tail moment"
        )

    if regime is Regime.WEAKLY_CRITICAL:
        if math.isfinite(k.psi(2.0, math.inf)):
            return _CaseData("weakly.4")
        if alpha is None:
            raise UnmatchedCaseError(
                "weakly critical kernel with divergent second tail moment "
                "needs a declared tail exponent"
            )
        if abs(alpha - 1.0) <= _TOL:
            return _CaseData("weakly.1", alpha=alpha)
        if 1.0 + _TOL < alpha < 2.0 - _TOL:
            return _CaseData("weakly.2", alpha=alpha)
        if abs(alpha - 2.0) <= _TOL:
            return _CaseData("weakly.3", alpha=alpha)
        raise UnmatchedCaseError(
            f"no weakly critical sub-case for tail exponent {alpha}"
        )

    if second_order is None:
        if k.spec.family == "MixedMittagLeffler":
            raise UnmatchedCaseError(
                "mixed kernels sit on an excluded case boundary of the generic "
                "expansion; use mixed_ml_second_order, or supply explicit "
                "second-order tail data"
            )
        raise UnmatchedCaseError(
            "strongly critical expansion needs second-order tail data "
            "(index, auxiliary, tail constant)"
        )
    if alpha is None or not 0.0 < alpha < 1.0:
        raise UnmatchedCaseError(
            f"strongly critical sub-cases need a tail exponent in (0, 1), got {alpha}"
        )
    rho = float(second_order.rho)
    if rho >= -_TOL:
        raise UnmatchedCaseError("auxiliary index rho = 0 is an excluded case boundary")
    if rho <= alpha - 1.0 + _TOL:
        raise UnmatchedCaseError(
            f"auxiliary index rho = {rho} at or below alpha - 1 = {alpha - 1.0} "
            "is outside the supported window"
        )
    if abs(rho + alpha) <= _TOL:
        raise UnmatchedCaseError(
            "rho = -alpha is the excluded boundary between the fast and slow "
            "auxiliary sub-cases"
        )
    c_phi = second_order.C_F
    if c_phi is None or not (math.isfinite(c_phi) and c_phi > 0.0):
        raise DomainError(
            "strongly critical sub-cases need the positive tail constant C_F "
            "of t^alpha * Phi(t)"
        )
    label = "strongly.fast" if rho < -alpha else "strongly.slow"
    return _CaseData(label, alpha=alpha, rho=rho, aux=second_order.A, c_phi=c_phi)


def _report_pair(mean_parts, var_parts, label) -> tuple[SecondOrderReport, SecondOrderReport]:
    (mc, me, mcorr), (vc, ve, vcorr) = mean_parts, var_parts
    return (
        SecondOrderReport(mc, me, mcorr, label),
        SecondOrderReport(vc, ve, vcorr, label),
    )


def second_order_approx(
    k: Kernel, mu0: float, second_order: SecondOrderParams | None = None
) -> tuple[SecondOrderReport, SecondOrderReport]:
    """Second-order reports (mean, variance) for the kernel's sub-case.

    Every report satisfies ``moment(t) = leading + correction(t) +
    o(correction)``; for ``strongly.fast`` all sub-leading power terms cancel
    and the correction is identically zero with remainder ``o(t)`` (mean) and
    ``o(t^(2 alpha + 1))`` (variance).

    One caveat: for ``subcritical.integrable`` the *variance* correction
    captures only the tail-moment part of the O(1) offset.  The exact offset
    carries an extra kernel-dependent term ``mu0 * q / (1 - m)`` with
    ``q = integral of (m/(1-m) - I_R)**2``, which is not computable from the
    declared kernel data alone; the reported constant is therefore a biased
    (but same-order) estimate of the true limit.  The mean correction is the
    exact limit in every sub-case.
    """
    _check_rate(mu0)
    case = _match_case(k, second_order)
    label = case.label
    m, sigma = k.m, k.sigma

    if label.startswith("subcritical"):
        d2 = (1.0 - m) ** 2
        d4 = d2 * d2
        lead_mean = (mu0 / (1.0 - m), 1.0)
        lead_var = (mu0 / (1.0 - m) ** 3, 1.0)
        if label == "subcritical.rv":
            a = case.alpha
            mean_corr = lambda t: -mu0 * np.asarray(t, float) * np.asarray(k.tail_Phi(t), float) / (d2 * (1.0 - a))
            var_corr = lambda t: -3.0 * mu0 * np.asarray(t, float) * np.asarray(k.tail_Phi(t), float) / (d4 * (1.0 - a))
        elif label == "subcritical.boundary":
            mean_corr = lambda t: -mu0 * _psi_values(k, 1.0, np.asarray(t, float)) / d2
            var_corr = lambda t: -3.0 * mu0 * _psi_values(k, 1.0, np.asarray(t, float)) / d4
        else:
            mean_corr = lambda t: -mu0 * sigma / d2 + 0.0 * np.asarray(t, float)
            var_corr = lambda t: -3.0 * mu0 * sigma / d4 + 0.0 * np.asarray(t, float)
        return _report_pair((*lead_mean, mean_corr), (*lead_var, var_corr), label)

    if label.startswith("weakly"):
        s2 = sigma * sigma
        s4 = s2 * s2
        lead_mean = (mu0 / (2.0 * sigma), 2.0)
        lead_var = (mu0 / (12.0 * sigma**3), 4.0)
        if label == "weakly.1":
            def deficit(t):
                return sigma - _psi_values(k, 1.0, np.asarray(t, float))

            mean_corr = lambda t: mu0 * np.asarray(t, float) ** 2 * deficit(t) / (2.0 * s2)
            var_corr = lambda t: mu0 * np.asarray(t, float) ** 4 * deficit(t) / (4.0 * s4)
        elif label == "weakly.2":
            a = case.alpha
            g = gamma_fn(1.0 - a) / gamma_fn(4.0 - a)
            mean_corr = lambda t: -mu0 * g * np.asarray(t, float) ** 3 * np.asarray(k.tail_Phi(t), float) / s2
            var_corr = lambda t: -2.0 * mu0 * g * np.asarray(t, float) ** 5 * np.asarray(k.tail_Phi(t), float) / (s4 * (5.0 - a))
        elif label == "weakly.3":
            mean_corr = lambda t: mu0 * np.asarray(t, float) * _psi_values(k, 2.0, np.asarray(t, float)) / (2.0 * s2)
            var_corr = lambda t: mu0 * np.asarray(t, float) ** 3 * _psi_values(k, 2.0, np.asarray(t, float)) / (3.0 * s4)
        else:
            psi2_inf = k.psi(2.0, math.inf)
            mean_corr = lambda t: mu0 * psi2_inf * np.asarray(t, float) / (2.0 * s2)
            var_corr = lambda t: mu0 * psi2_inf * np.asarray(t, float) ** 3 / (3.0 * s4)
        return _report_pair((*lead_mean, mean_corr), (*lead_var, var_corr), label)

    a, rho, aux, c_phi = case.alpha, case.rho, case.aux, case.c_phi
    c_ir = 1.0 / (gamma_fn(1.0 - a) * gamma_fn(1.0 + a) * c_phi)
    c_ir2 = 1.0 / (gamma_fn(1.0 - a) * gamma_fn(2.0 + a) * c_phi)
    lead_mean = (mu0 * c_ir2, 1.0 + a)
    lead_var = (mu0 * c_ir**3 * beta_fn(2.0 * a + 1.0, a + 1.0), 1.0 + 3.0 * a)
    if label == "strongly.fast":
        zero = lambda t: 0.0 * np.asarray(t, float)
        return _report_pair((*lead_mean, zero), (*lead_var, zero), label)
    c1 = beta_fn(2.0 + a, 1.0 - a + rho) / beta_fn(2.0 + a + rho, 1.0 - a)
    c2 = (
        2.0 * beta_fn(2.0 * a + rho + 1.0, a + 1.0) + beta_fn(2.0 * a + 1.0, a + rho + 1.0)
    ) * beta_fn(a + 1.0, 1.0 - a + rho) / beta_fn(a + 1.0 + rho, 1.0 - a)
    mean_corr = lambda t: -c1 * (mu0 * c_ir2 / rho) * np.asarray(t, float) ** (a + 1.0) * np.asarray(aux(t), float)
    var_corr = lambda t: -c2 * (mu0 * c_ir**3 / rho) * np.asarray(t, float) ** (3.0 * a + 1.0) * np.asarray(aux(t), float)
    return _report_pair((*lead_mean, mean_corr), (*lead_var, var_corr), label)


def second_order_resolvent_estimates(
    k: Kernel, t, second_order: SecondOrderParams | None = None
):
    """Second-order correction terms for IR(t) and IR2(t) at time(s) t.

    Sign conventions follow each regime's natural statement:

    - subcritical (deficit):   IR(t)  ~ m/(1-m)    - ir_correction(t),
                               IR2(t) ~ m t/(1-m)  - ir2_correction(t);
    - weakly critical (additive):   IR(t)  ~ t/sigma        + ir_correction(t),
                                    IR2(t) ~ t^2/(2 sigma)  + ir2_correction(t);
    - strongly critical / mixed (additive):  IR(t)  ~ C_IR t^alpha + ir_correction(t),
                                             IR2(t) ~ C_IR2 t^(alpha+1) + ir2_correction(t).

    Mixed kernels are served from their dedicated expansion when no explicit
    second-order data is supplied.
    """
    arr = _times(t, positive=True)
    if k.spec.family == "MixedMittagLeffler" and second_order is None:
        a1, a2, b1, b2 = _validated_mixed_params(k.spec)
        if abs(a1 - a2) <= _TOL:
            q = b1 * b2 / (b1 + b2) ** 2
            return _shaped(-q + 0.0 * arr, t), _shaped(-q * arr, t)
        e = 2.0 * a1 - a2
        coeff = b1 * b1 / b2
        ir_corr = -coeff * arr**e / gamma_fn(1.0 + e)
        ir2_corr = -coeff * arr ** (1.0 + e) / gamma_fn(2.0 + e)
        return _shaped(ir_corr, t), _shaped(ir2_corr, t)

    case = _match_case(k, second_order)
    label = case.label
    m, sigma = k.m, k.sigma
    if label.startswith("subcritical"):
        d2 = (1.0 - m) ** 2
        phi_t = np.asarray(k.tail_Phi(arr), dtype=float)
        ir_corr = phi_t / d2
        if label == "subcritical.rv":
            ir2_corr = arr * phi_t / (d2 * (1.0 - case.alpha))
        else:
            ir2_corr = _psi_values(k, 1.0, arr) / d2
        return _shaped(ir_corr, t), _shaped(ir2_corr, t)
    if label.startswith("weakly"):
        s2 = sigma * sigma
        if label == "weakly.1":
            deficit = sigma - _psi_values(k, 1.0, arr)
            return _shaped(arr * deficit / s2, t), _shaped(arr**2 * deficit / (2.0 * s2), t)
        if label == "weakly.2":
            a = case.alpha
            g = gamma_fn(1.0 - a)
            phi_t = np.asarray(k.tail_Phi(arr), dtype=float)
            ir_corr = -g * arr**2 * phi_t / (gamma_fn(3.0 - a) * s2)
            ir2_corr = -g * arr**3 * phi_t / (gamma_fn(4.0 - a) * s2)
            return _shaped(ir_corr, t), _shaped(ir2_corr, t)
        if label == "weakly.3":
            psi2 = _psi_values(k, 2.0, arr)
            return _shaped(psi2 / (2.0 * s2), t), _shaped(arr * psi2 / (2.0 * s2), t)
        c = k.psi(2.0, math.inf) / (2.0 * s2) - 1.0
        return _shaped(c + 0.0 * arr, t), _shaped(c * arr, t)

    a, rho, aux, c_phi = case.alpha, case.rho, case.aux, case.c_phi
    if label == "strongly.fast":
        phi_t = np.asarray(k.tail_Phi(arr), dtype=float)
        return _shaped(-(arr**a) * phi_t / c_phi, t), _shaped(-(arr ** (a + 1.0)) * phi_t / c_phi, t)
    c_ir = 1.0 / (gamma_fn(1.0 - a) * gamma_fn(1.0 + a) * c_phi)
    c_ir2 = 1.0 / (gamma_fn(1.0 - a) * gamma_fn(2.0 + a) * c_phi)
    b_ir = beta_fn(1.0 + a, 1.0 - a + rho) / beta_fn(1.0 + a + rho, 1.0 - a)
    c1 = beta_fn(2.0 + a, 1.0 - a + rho) / beta_fn(2.0 + a + rho, 1.0 - a)
    aux_t = np.asarray(aux(arr), dtype=float)
    ir_corr = -b_ir * (c_ir / rho) * arr**a * aux_t
    ir2_corr = -c1 * (c_ir2 / rho) * arr ** (1.0 + a) * aux_t
    return _shaped(ir_corr, t), _shaped(ir2_corr, t)


def mixed_ml_second_order(
    spec: KernelSpec, mu0: float
) -> tuple[SecondOrderReport, SecondOrderReport]:
    """Second-order reports (mean, variance) for a mixed two-exponent kernel.

    The mixture's tail sits exactly on a boundary of the generic strongly
    critical expansion whenever ``alpha2 >= 2*alpha1``, so all four sub-cases
    are handled by dedicated formulas keyed on ``2*alpha1 - alpha2``:

    - ``mixed.equal``      mean corr  mu0*(1 - q)*t, q = b1 b2/(b1+b2)^2;
    - ``mixed.slow``       mean corr  -mu0*(b1^2/b2) * t^(1+2a1-a2) / Gamma(2+2a1-a2),
                           variance corr from the generic slow-auxiliary route;
    - ``mixed.boundary``   as mixed.equal with q = b1^2/b2;
    - ``mixed.fast``       mean corr  mu0*t; variance corr with q = 0.

    Equal/boundary/fast variance corrections are ``C2var*(1 - q)*t^(2a1+1)``
    with ``C2var = mu0*C_IR^2*(2B(1+a1,1+a1) + B(1+2a1,1))``.
    """
    _check_rate(mu0)
    a1, a2, b1, b2 = _validated_mixed_params(spec)
    equal = abs(a1 - a2) <= _TOL
    c_beta = 1.0 / b1 + (1.0 / b2 if equal else 0.0)
    c_ir = 1.0 / (c_beta * gamma_fn(1.0 + a1))
    c_ir2 = 1.0 / (c_beta * gamma_fn(2.0 + a1))
    lead_mean = (mu0 * c_ir2, 1.0 + a1)
    lead_var = (mu0 * c_ir**3 * beta_fn(1.0 + 2.0 * a1, 1.0 + a1), 1.0 + 3.0 * a1)
    c2var = mu0 * c_ir**2 * (2.0 * beta_fn(1.0 + a1, 1.0 + a1) + beta_fn(1.0 + 2.0 * a1, 1.0))

    if equal:
        label = "mixed.equal"
        q = b1 * b2 / (b1 + b2) ** 2
    elif a2 < 2.0 * a1 - _TOL:
        label = "mixed.slow"
        q = None
    elif abs(a2 - 2.0 * a1) <= _TOL:
        label = "mixed.boundary"
        q = b1 * b1 / b2
    else:
        label = "mixed.fast"
        q = 0.0

    if label == "mixed.slow":
        e = 1.0 + 2.0 * a1 - a2
        mean_coeff = -mu0 * b1 * b1 / (b2 * gamma_fn(1.0 + e))
        rho = a1 - a2
        c2 = (
            2.0 * beta_fn(2.0 * a1 + rho + 1.0, a1 + 1.0)
            + beta_fn(2.0 * a1 + 1.0, a1 + rho + 1.0)
        ) * beta_fn(a1 + 1.0, 1.0 - a1 + rho) / beta_fn(a1 + 1.0 + rho, 1.0 - a1)
        aux_ratio = b1 * gamma_fn(1.0 - a1) / (b2 * gamma_fn(1.0 - a2))
        var_coeff = -c2 * mu0 * c_ir**3 * aux_ratio
        var_expo = 1.0 + 4.0 * a1 - a2
        mean_corr = lambda t: mean_coeff * np.asarray(t, float) ** e
        var_corr = lambda t: var_coeff * np.asarray(t, float) ** var_expo
    else:
        mean_coeff = mu0 * (1.0 - q)
        var_coeff = c2var * (1.0 - q)
        var_expo = 2.0 * a1 + 1.0
        mean_corr = lambda t: mean_coeff * np.asarray(t, float)
        var_corr = lambda t: var_coeff * np.asarray(t, float) ** var_expo
    return _report_pair((*lead_mean, mean_corr), (*lead_var, var_corr), label)
