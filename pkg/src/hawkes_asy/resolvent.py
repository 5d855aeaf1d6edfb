"""Renewal-equation solver: R = phi + R * phi on a uniform grid.

The discretization works in cell-mass space (product integration): unknowns
are the masses r_k = integral of R over cell k, and the kernel enters only
through its exact cell masses, never through pointwise density samples.
This keeps the scheme first-order accurate even for kernels whose density
blows up at zero (the fractional family behaves like t^{alpha-1}).

The lower-triangular Toeplitz system is solved directly in O(n^2) for short
grids and by divide-and-conquer with FFT convolution for long ones.
Cumulatives IR(t) = int_0^t R and IR2(t) = int_0^t IR are produced at grid
nodes; closed-form fast paths cover the exponential and fractional families.
"""

from __future__ import annotations

import csv
import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from .kernels import Kernel, UnsupportedRegimeError
from .special_fn import gamma_fn

__all__ = [
    "TimeGrid",
    "ResolventMethod",
    "ResolventProfile",
    "InstabilityError",
    "TruncationWarning",
    "solve_resolvent",
    "neumann_partial_sum",
    "closed_form_fractional_profile",
    "closed_form_exponential_profile",
]

_CRITICAL_TOL = 1e-12
_BASE_BLOCK = 2048  # direct O(B^2) recursion base; FFT convolution above


class InstabilityError(RuntimeError):
    """The discretized recursion produced negative resolvent mass."""


class TruncationWarning(UserWarning):
    """A partial sum was cut while its geometric mass gap was still large."""


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid: n_steps cells of width step, horizon = step * n_steps."""

    step: float
    n_steps: int

    def __post_init__(self) -> None:
        if not (self.step > 0.0 and math.isfinite(self.step)):
            raise ValueError(f"grid step must be positive and finite, got {self.step}")
        if self.n_steps < 1:
            raise ValueError(f"grid needs at least one step, got {self.n_steps}")

    @property
    def horizon(self) -> float:
        return self.step * self.n_steps

    def nodes(self) -> np.ndarray:
        return self.step * np.arange(self.n_steps + 1)

    def midpoints(self) -> np.ndarray:
        return self.step * (np.arange(self.n_steps) + 0.5)


class ResolventMethod(enum.Enum):
    DISCRETIZED = "Discretized"
    CLOSED_FORM_EXPONENTIAL = "ClosedFormExponential"
    CLOSED_FORM_FRACTIONAL = "ClosedFormFractional"


@dataclass(frozen=True)
class ResolventProfile:
    """Resolvent density at cell midpoints plus cumulatives at grid nodes."""

    grid: TimeGrid
    R: np.ndarray
    IR: np.ndarray
    IR2: np.ndarray
    method: ResolventMethod

    def to_csv(self, path) -> None:
        """Write node rows t, R, IR, IR2.

        R is a midpoint quantity; each node row carries the value from the
        cell starting at that node (the final row repeats the last cell).
        """
        nodes = self.grid.nodes()
        r_col = np.append(self.R, self.R[-1])
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "R", "IR", "IR2"])
            for i in range(len(nodes)):
                writer.writerow([nodes[i], r_col[i], self.IR[i], self.IR2[i]])


def _profile_from_masses(grid: TimeGrid, masses: np.ndarray, method: ResolventMethod) -> ResolventProfile:
    h = grid.step
    ir = np.concatenate(([0.0], np.cumsum(masses)))
    ir2 = np.concatenate(([0.0], np.cumsum(0.5 * h * (ir[1:] + ir[:-1]))))
    return ResolventProfile(grid=grid, R=masses / h, IR=ir, IR2=ir2, method=method)


def _phi_windows(k: Kernel, grid: TimeGrid) -> tuple[np.ndarray, np.ndarray]:
    """Kernel cell masses d_k and midpoint-centered window masses w_i.

    d_k is the mass of phi over cell k; w_i is the mass over the window of
    width h centered at offset i*h (half-window [0, h/2] for i=0), which is
    the product-integration weight coupling cells at lag i.
    """
    h = grid.step
    n = grid.n_steps
    edges = h * np.arange(n + 1)
    d = np.asarray(k.cell_mass(edges[:-1], edges[1:]), dtype=float)
    half_edges = h * (np.arange(n) + 0.5)
    w = np.empty(n, dtype=float)
    w[0] = float(k.cell_mass(0.0, 0.5 * h))
    if n > 1:
        w[1:] = np.asarray(k.cell_mass(half_edges[:-1], half_edges[1:]), dtype=float)
    return d, w


def _solve_block(r: np.ndarray, rhs: np.ndarray, w: np.ndarray, lo: int, hi: int, denom: float) -> None:
    """Solve r_k*denom = rhs_k + sum_{j<k} w_{k-j} r_j on [lo, hi).

    rhs must already contain the contributions of all r_j with j < lo.
    """
    if hi - lo <= _BASE_BLOCK:
        for k in range(lo, hi):
            acc = rhs[k]
            if k > lo:
                acc += float(np.dot(r[lo:k], w[k - lo:0:-1]))
            r[k] = acc / denom
        return
    mid = lo + (hi - lo) // 2
    _solve_block(r, rhs, w, lo, mid, denom)
    seg = fftconvolve(r[lo:mid], w[1 : hi - lo])
    rhs[mid:hi] += seg[mid - lo - 1 : hi - lo - 1]
    _solve_block(r, rhs, w, mid, hi, denom)


def solve_resolvent(k: Kernel, grid: TimeGrid) -> ResolventProfile:
    """Solve the renewal equation by product integration on the grid.

    Raises UnsupportedRegimeError for kernels with mass above one and
    InstabilityError if the recursion produces materially negative masses
    (a sign the grid is too coarse for the kernel's variation).
    """
    if k.m > 1.0 + _CRITICAL_TOL:
        raise UnsupportedRegimeError(f"resolvent requires kernel mass <= 1, got m={k.m}")
    d, w = _phi_windows(k, grid)
    denom = 1.0 - w[0]
    r = np.zeros(grid.n_steps, dtype=float)
    rhs = d.astype(float, copy=True)
    _solve_block(r, rhs, w, 0, grid.n_steps, denom)
    floor = -1e-9 * max(float(np.max(np.abs(r))), 1e-300)
    if float(np.min(r)) < floor:
        raise InstabilityError(
            "resolvent recursion produced negative mass; refine the grid step"
        )
    np.maximum(r, 0.0, out=r)
    return _profile_from_masses(grid, r, ResolventMethod.DISCRETIZED)


def neumann_partial_sum(
    k: Kernel, grid: TimeGrid, n_terms: int, gap_tolerance: float = 1e-6
) -> ResolventProfile:
    """Partial sum of the iterated-convolution series for the resolvent.

    Applies the same discretized convolution operator as the direct solver,
    so the two agree up to the geometric tail of the series.  For subcritical
    kernels a TruncationWarning reports a mass gap m^(N+1)/(1-m) above
    ``gap_tolerance``.
    """
    if n_terms < 1:
        raise ValueError(f"need at least one term, got {n_terms}")
    if k.m > 1.0 + _CRITICAL_TOL:
        raise UnsupportedRegimeError(f"partial sums require kernel mass <= 1, got m={k.m}")
    if k.m < 1.0 - _CRITICAL_TOL:
        gap = k.m ** (n_terms + 1) / (1.0 - k.m)
        if gap > gap_tolerance:
            warnings.warn(
                f"partial sum truncated with mass gap {gap:.3g} > {gap_tolerance:.3g}",
                TruncationWarning,
                stacklevel=2,
            )
    d, w = _phi_windows(k, grid)
    n = grid.n_steps
    term = d.copy()
    total = d.copy()
    for _ in range(1, n_terms):
        term = fftconvolve(term, w)[:n]
        total += term
    return _profile_from_masses(grid, total, ResolventMethod.DISCRETIZED)


def closed_form_fractional_profile(alpha: float, beta: float, grid: TimeGrid) -> ResolventProfile:
    """Exact resolvent of the critical fractional kernel.

    R(t) = beta t^(alpha-1)/Gamma(alpha); IR(t) = beta t^alpha/Gamma(1+alpha);
    IR2(t) = beta t^(1+alpha)/Gamma(2+alpha).
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"fractional exponent must lie in (0,1), got {alpha}")
    if beta <= 0.0:
        raise ValueError(f"rate must be positive, got {beta}")
    nodes = grid.nodes()
    r = beta * grid.midpoints() ** (alpha - 1.0) / gamma_fn(alpha)
    ir = beta * nodes**alpha / gamma_fn(1.0 + alpha)
    ir2 = beta * nodes ** (1.0 + alpha) / gamma_fn(2.0 + alpha)
    return ResolventProfile(grid=grid, R=r, IR=ir, IR2=ir2, method=ResolventMethod.CLOSED_FORM_FRACTIONAL)


def closed_form_exponential_profile(m: float, beta: float, grid: TimeGrid) -> ResolventProfile:
    """Exact resolvent of the exponential kernel: R(t) = m beta e^(-beta(1-m)t)."""
    if not 0.0 < m <= 1.0:
        raise ValueError(f"exponential resolvent needs 0 < m <= 1, got {m}")
    if beta <= 0.0:
        raise ValueError(f"rate must be positive, got {beta}")
    nodes = grid.nodes()
    decay = beta * (1.0 - m)
    r = m * beta * np.exp(-decay * grid.midpoints())
    if m < 1.0:
        ratio = m / (1.0 - m)
        ir = ratio * -np.expm1(-decay * nodes)
        ir2 = ratio * (nodes + np.expm1(-decay * nodes) / decay)
    else:
        ir = beta * nodes
        ir2 = 0.5 * beta * nodes**2
    return ResolventProfile(grid=grid, R=r, IR=ir, IR2=ir2, method=ResolventMethod.CLOSED_FORM_EXPONENTIAL)
