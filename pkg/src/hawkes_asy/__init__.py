"""Asymptotics of Hawkes processes with heavy-tailed excitation kernels.

Numerical toolkit for the mean and variance of a linear Hawkes process whose
excitation kernel may be subcritical, critical with finite mean, or critical
with a regularly-varying tail.  The package provides

* controlled special-function evaluation (gamma, beta, Mittag-Leffler),
* an excitation-kernel zoo (exponential, Pareto tail, Mittag-Leffler,
  mixed Mittag-Leffler convolutions),
* Laplace-Stieltjes / Mellin transform machinery with second-order
  regular-variation (2RV) correspondence factors,
* resolvent computation (closed forms and a discretized Volterra solver),
* exact moment formulas plus first- and second-order approximations with
  regime-dependent correction terms,
* a 2RV calculus (Karamata representations, ratio limits, convolution and
  power rules),
* an exact-thinning Monte-Carlo simulator, and
* a command-line interface with a self-contained validation suite.
"""

from __future__ import annotations

__version__ = "0.1.0"
