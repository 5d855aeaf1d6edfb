"""Second-order regular-variation calculus.

A function F is regularly varying with index alpha when F(tx)/F(t) -> x^alpha;
the second-order refinement measures the speed of that convergence through an
auxiliary function A vanishing at infinity:

    (F(tx)/F(t) - x^alpha) / A(t)  ->  x^alpha * (x^rho - 1)/rho

(with x^alpha*log(x) as the rho=0 limit).  This module provides the pre-limit
evaluators, a constructor that builds functions with prescribed second-order
behavior from their representation, ratio statements for integrals of F
against powers, and the parameter algebra for convolutions and powers of such
functions.  Limits are probed numerically on log-spaced grids and accelerated
by polynomial extrapolation in the auxiliary scale t^rho.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad

from .special_fn import DomainError, beta_fn

__all__ = [
    "ComparabilityError",
    "PowerAuxiliary",
    "SecondOrderParams",
    "RatioDirection",
    "MembershipCheck",
    "second_order_target",
    "second_order_limit",
    "build_karamata_representation",
    "second_order_karamata_ratio",
    "convolve_2rv_params",
    "power_2rv_params",
    "check_second_order_membership",
    "extrapolate_to_limit",
    "power_perturbed_family",
]

_GL_NODES, _GL_WEIGHTS = leggauss(16)


class ComparabilityError(ValueError):
    """Combined auxiliary is not comparable to |A1| + |A2| (cancellation)."""


@dataclass(frozen=True)
class PowerAuxiliary:
    """Auxiliary of pure power form A(t) = coeff * t**rho.

    Carrying the parameters explicitly lets downstream constructions use the
    closed form of the log-weighted integral instead of quadrature.
    """

    coeff: float
    rho: float

    def __call__(self, t):
        return self.coeff * np.asarray(t, dtype=float) ** self.rho

    def log_weighted_integral(self, t):
        """Closed form of the inner integral int_1^t A(s)/s ds."""
        t_arr = np.asarray(t, dtype=float)
        if self.coeff == 0.0:
            return np.zeros_like(t_arr)
        if self.rho == 0.0:
            return self.coeff * np.log(t_arr)
        return self.coeff * (t_arr**self.rho - 1.0) / self.rho


@dataclass(frozen=True)
class SecondOrderParams:
    """Second-order variation data: first index, second index, auxiliary.

    ``C_F`` optionally records the limit constant of t^(-alpha) F(t) when it
    exists.  The auxiliary must vanish at infinity with regular variation of
    index rho; that sampled behavior is checked by the test corpus rather
    than at construction time (A is an arbitrary callable).
    """

    alpha: float
    rho: float
    A: Callable
    C_F: float | None = None

    def __post_init__(self) -> None:
        if not math.isfinite(self.alpha):
            raise DomainError(f"first-order index must be finite, got {self.alpha}")
        if not (math.isfinite(self.rho) and self.rho <= 0.0):
            raise DomainError(f"second-order index must be <= 0, got {self.rho}")
        if self.C_F is not None and self.C_F == 0.0:
            raise DomainError("limit constant C_F must be nonzero when supplied")


class RatioDirection(enum.Enum):
    UP = "Up"
    DOWN = "Down"


def second_order_target(alpha: float, rho: float, x: float) -> float:
    """Limit value x^alpha * int_1^x u^(rho-1) du of the second-order ratio."""
    if x <= 0.0:
        raise DomainError(f"scale factor must be positive, got {x}")
    if rho == 0.0:
        return x**alpha * math.log(x)
    return x**alpha * (x**rho - 1.0) / rho


def second_order_limit(F: Callable, p: SecondOrderParams, t: float, x: float) -> float:
    """Pre-limit ratio (F(tx)/F(t) - x^alpha)/A(t) at finite t."""
    if t <= 0.0 or x <= 0.0:
        raise DomainError(f"need t > 0 and x > 0, got t={t}, x={x}")
    f_t = float(F(t))
    if f_t == 0.0:
        raise ZeroDivisionError(f"F({t}) = 0; the scaled ratio is undefined")
    a_t = float(p.A(t))
    if a_t == 0.0:
        raise ZeroDivisionError(f"auxiliary vanishes at t={t}; the ratio is undefined")
    return (float(F(t * x)) / f_t - x**p.alpha) / a_t


def build_karamata_representation(
    alpha: float,
    zeta1: float,
    zeta2: float,
    a1: Callable,
    rho: float | None = None,
) -> Callable:
    """Construct F(t) = zeta1 (1 + zeta2 A1(t)) exp{int_1^t A1(s)/s ds} t^alpha.

    The result has second-order variation (alpha, rho) with auxiliary
    (1 + rho*zeta2) * A1.  A PowerAuxiliary carries its own rho and closed-form
    inner integral; any other callable requires an explicit rho and falls back
    to adaptive quadrature (scalar t only).
    """
    if zeta1 == 0.0 or zeta2 == 0.0:
        raise DomainError("representation constants zeta1, zeta2 must be nonzero")
    if rho is None:
        if isinstance(a1, PowerAuxiliary):
            rho = a1.rho
        else:
            raise DomainError("rho is required when the auxiliary is a generic callable")
    if not rho <= 0.0:
        raise DomainError(f"auxiliary index must be <= 0, got {rho}")
    if not 1.0 + rho * zeta2 > 0.0:
        raise DomainError(
            f"representation requires 1 + rho*zeta2 > 0, got {1.0 + rho * zeta2}"
        )

    if isinstance(a1, PowerAuxiliary):
        inner = a1.log_weighted_integral
    else:
        def inner(t):
            return quad(lambda s: a1(s) / s, 1.0, float(t), limit=200)[0]

    def representation(t):
        t_arr = np.asarray(t, dtype=float)
        return (
            zeta1
            * (1.0 + zeta2 * np.asarray(a1(t_arr), dtype=float))
            * np.exp(np.asarray(inner(t_arr), dtype=float))
            * t_arr**alpha
        )

    return representation


def _log_panel_integral(F: Callable, theta: float, lo: float, hi: float) -> float:
    """int_lo^hi s^(theta-1) F(s) ds by Gauss-Legendre panels in log s."""
    u_lo, u_hi = math.log(lo), math.log(hi)
    n_panels = max(8, int(math.ceil((u_hi - u_lo) / math.log(10.0) * 8)))
    edges = np.linspace(u_lo, u_hi, n_panels + 1)
    centers = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * np.diff(edges)
    u = centers[:, None] + half[:, None] * _GL_NODES[None, :]
    s = np.exp(u)
    values = np.exp(theta * u) * np.asarray(F(s), dtype=float)
    return float(np.sum(values @ _GL_WEIGHTS * half))


def second_order_karamata_ratio(
    F: Callable,
    p: SecondOrderParams,
    theta: float,
    t: float,
    direction: RatioDirection,
    t0: float = 1.0,
) -> float:
    """Speed of the integral-ratio limit for powers against F.

    Up (theta > -alpha - rho): compares t^theta F(t) against the integral of
    s^(theta-1) F(s) from t0 to t; the bracketed deviation from (alpha+theta),
    divided by A(t), tends to (alpha+theta)/(alpha+theta+rho).

    Down (theta < -alpha): the integral runs from t to infinity (quadrature to
    t*1e4 plus a second-order tail estimate); the deviation plus (alpha+theta),
    divided by A(t), tends to -(alpha+theta)/(alpha+theta+rho).
    """
    if t <= 0.0:
        raise DomainError(f"evaluation time must be positive, got {t}")
    shifted = p.alpha + theta
    if direction is RatioDirection.UP:
        if not theta > -p.alpha - p.rho:
            raise DomainError(
                f"divergent comparison: need theta > {-p.alpha - p.rho} for the"
                f" upward ratio, got {theta}"
            )
        lo = t0 if t0 > 0.0 else t * 1e-14
        integral = _log_panel_integral(F, theta, lo, t)
        bracket = t**theta * float(F(t)) / integral - shifted
    elif direction is RatioDirection.DOWN:
        if not theta < -p.alpha:
            raise DomainError(
                f"divergent comparison: need theta < {-p.alpha} for the"
                f" downward ratio, got {theta}"
            )
        far = t * 1e4
        integral = _log_panel_integral(F, theta, t, far)
        a_far = float(p.A(far))
        tail = far**theta * float(F(far)) * (
            -1.0 / shifted + a_far / (shifted * (shifted + p.rho))
        )
        bracket = t**theta * float(F(t)) / (integral + tail) + shifted
    else:
        raise DomainError(f"unknown direction {direction!r}")
    a_t = float(p.A(t))
    if a_t == 0.0:
        raise ZeroDivisionError(f"auxiliary vanishes at t={t}; the ratio is undefined")
    return bracket / a_t


def convolve_2rv_params(p1: SecondOrderParams, p2: SecondOrderParams) -> SecondOrderParams:
    """Second-order data of the convolution int_0^t F1(t-s)F2(s) ds.

    Requires alpha_i > -1 and rho_i in (-alpha_i - 1, 0).  The result has
    first index alpha1 + alpha2 + 1, second index max(rho1, rho2), and a
    combined auxiliary that mixes A1 and A2 through beta-function weights;
    exact cancellation between the weighted auxiliaries (for instance
    A1 = -A2 with equal indices) is rejected because the combined auxiliary
    then fails to dominate |A1| + |A2|.
    """
    for label, p in (("first", p1), ("second", p2)):
        if not p.alpha > -1.0:
            raise DomainError(f"{label} operand needs alpha > -1, got {p.alpha}")
        if not -p.alpha - 1.0 < p.rho < 0.0:
            raise DomainError(
                f"{label} operand needs rho in (-alpha-1, 0), got rho={p.rho}"
            )
    denom = beta_fn(p1.alpha + 1.0, p2.alpha + 1.0)
    weight1 = beta_fn(p1.alpha + p1.rho + 1.0, p2.alpha + 1.0) / denom
    weight2 = beta_fn(p1.alpha + 1.0, p2.alpha + p2.rho + 1.0) / denom

    def combined(t):
        return weight1 * np.asarray(p1.A(t), dtype=float) + weight2 * np.asarray(
            p2.A(t), dtype=float
        )

    samples = np.geomspace(1e2, 1e8, 13)
    magnitude = np.abs([float(p1.A(s)) for s in samples]) + np.abs(
        [float(p2.A(s)) for s in samples]
    )
    mixed = np.abs([float(combined(s)) for s in samples])
    if not np.all(magnitude > 0.0):
        raise ComparabilityError("auxiliaries vanish on the sampling grid")
    ratio = mixed / magnitude
    if not np.all(np.isfinite(ratio)) or float(np.min(ratio)) < 1e-6:
        raise ComparabilityError(
            "combined auxiliary cancels against |A1| + |A2|; the convolution"
            " rule does not apply"
        )
    c_f = None
    if p1.C_F is not None and p2.C_F is not None:
        c_f = p1.C_F * p2.C_F * denom
    return SecondOrderParams(
        alpha=p1.alpha + p2.alpha + 1.0,
        rho=max(p1.rho, p2.rho),
        A=combined,
        C_F=c_f,
    )


def power_2rv_params(p: SecondOrderParams, theta: float) -> SecondOrderParams:
    """Second-order data of |F|^theta: indices (theta*alpha, rho), auxiliary theta*A."""
    if theta == 0.0:
        raise DomainError("power exponent must be nonzero")
    if not p.rho < 0.0:
        raise DomainError(f"power rule requires rho < 0, got {p.rho}")

    def scaled(t):
        return theta * np.asarray(p.A(t), dtype=float)

    c_f = abs(p.C_F) ** theta if p.C_F is not None else None
    return SecondOrderParams(alpha=theta * p.alpha, rho=p.rho, A=scaled, C_F=c_f)


@dataclass(frozen=True)
class MembershipCheck:
    """Sampled verdict on a second-order variation claim."""

    alpha: float
    rho: float
    rel_tol: float
    t_values: tuple[float, ...]
    x_values: tuple[float, ...]
    worst_errors: tuple[float, ...]
    passed: bool
    rows: tuple[tuple[float, float, float, float, float], ...]

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "rho": self.rho,
            "rel_tol": self.rel_tol,
            "t_values": list(self.t_values),
            "x_values": list(self.x_values),
            "worst_errors": list(self.worst_errors),
            "pass": self.passed,
            "rows": [
                {
                    "t": t,
                    "x": x,
                    "pre_limit": pre,
                    "target": tgt,
                    "rel_error": err,
                }
                for t, x, pre, tgt, err in self.rows
            ],
        }


def check_second_order_membership(
    F: Callable,
    p: SecondOrderParams,
    t_values: tuple[float, ...] = (1e4, 1e5, 1e6),
    x_values: tuple[float, ...] = (0.5, 2.0, 5.0),
    rel_tol: float = 0.02,
) -> MembershipCheck:
    """Falsifiable sampling proxy for the second-order limit statement.

    Passes when every pre-limit is within rel_tol of its target and the worst
    per-t error does not degrade as t increases (limits must improve; errors
    at floating-point noise level are exempt from the monotonicity demand).
    """
    rows = []
    worst = []
    for t in t_values:
        errs = []
        for x in x_values:
            pre = second_order_limit(F, p, t, x)
            tgt = second_order_target(p.alpha, p.rho, x)
            if tgt == 0.0:
                raise DomainError(f"degenerate target at x={x}; choose x != 1")
            err = abs(pre - tgt) / abs(tgt)
            rows.append((t, x, pre, tgt, err))
            errs.append(err)
        worst.append(max(errs))
    within = all(err <= rel_tol for *_ignored, err in rows)
    improving = all(
        worst[i + 1] <= max(worst[i] * (1.0 + 1e-6), 1e-12)
        for i in range(len(worst) - 1)
    )
    return MembershipCheck(
        alpha=p.alpha,
        rho=p.rho,
        rel_tol=rel_tol,
        t_values=tuple(float(t) for t in t_values),
        x_values=tuple(float(x) for x in x_values),
        worst_errors=tuple(worst),
        passed=bool(within and improving),
        rows=tuple(rows),
    )


def extrapolate_to_limit(t_values, values, rho: float) -> float:
    """Polynomial extrapolation of ratio samples to the t -> infinity limit.

    Pre-limit quantities converge at speed t^rho; re-expressing the samples in
    the variable x = t^rho and evaluating the interpolating polynomial at
    x = 0 removes the leading error terms (exact for an expansion with as many
    powers of t^rho as there are sample points).
    """
    if not rho < 0.0:
        raise DomainError(f"extrapolation requires rho < 0, got {rho}")
    t_arr = np.asarray(t_values, dtype=float)
    v_arr = np.asarray(values, dtype=float)
    if t_arr.shape != v_arr.shape or t_arr.ndim != 1 or t_arr.size < 2:
        raise DomainError("need matching 1-d sample arrays with at least two points")
    x = t_arr**rho
    if len(set(x.tolist())) != x.size:
        raise DomainError("sample times must be distinct on the t^rho scale")
    total = 0.0
    for i in range(x.size):
        weight = 1.0
        for j in range(x.size):
            if j != i:
                weight *= -x[j] / (x[i] - x[j])
        total += v_arr[i] * weight
    return total


def power_perturbed_family(
    alpha: float, rho: float, exact_auxiliary: bool = True
) -> tuple[Callable, SecondOrderParams]:
    """Shipped test family F(t) = t^alpha (1 + t^rho) with its variation data.

    With ``exact_auxiliary`` the auxiliary rho*t^rho/(1+t^rho) makes the
    second-order pre-limit an algebraic identity (zero sampling error); the
    plain power auxiliary rho*t^rho differs by a relative O(t^rho) and is the
    natural normalization for transform-side comparisons.
    """
    if not rho < 0.0:
        raise DomainError(f"perturbed-power family requires rho < 0, got {rho}")

    def F(t):
        t_arr = np.asarray(t, dtype=float)
        return t_arr**alpha * (1.0 + t_arr**rho)

    if exact_auxiliary:
        def A(t):
            t_arr = np.asarray(t, dtype=float)
            return rho * t_arr**rho / (1.0 + t_arr**rho)
        params = SecondOrderParams(alpha=alpha, rho=rho, A=A, C_F=1.0)
    else:
        params = SecondOrderParams(alpha=alpha, rho=rho, A=PowerAuxiliary(rho, rho), C_F=1.0)
    return F, params
