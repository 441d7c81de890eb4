"""Shared damped-least-squares machinery for the calibration fits.

Thin wrapper around scipy's trust-region least squares that adds named
parameters, 1-sigma uncertainties from the local quadratic model, honest
convergence reporting, and optional deterministic multi-start.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .errors import FitError


@dataclass
class FitResult:
    """Parameter estimates with uncertainties and residual diagnostics."""

    parameters: dict
    uncertainties: dict
    residual_norm: float
    converged: bool
    iterations: int
    covariance: np.ndarray | None = None
    ill_conditioned: bool = False
    extras: dict = field(default_factory=dict)

    def __getitem__(self, name):
        return self.parameters[name]

    def to_dict(self):
        return {
            "parameters": dict(self.parameters),
            "uncertainties": dict(self.uncertainties),
            "residual_norm": self.residual_norm,
            "converged": self.converged,
            "iterations": self.iterations,
            "ill_conditioned": self.ill_conditioned,
            **{k: v for k, v in self.extras.items()
               if isinstance(v, (int, float, str, bool, list))},
        }


def _covariance(res):
    """Covariance from the Jacobian at the optimum; None if singular."""
    m, p = res.jac.shape
    if m <= p:
        return None
    jtj = res.jac.T @ res.jac
    try:
        cov = np.linalg.inv(jtj)
    except np.linalg.LinAlgError:
        return None
    dof = m - p
    return cov * 2.0 * res.cost / dof


def fit_least_squares(residual_fn, x0, names, bounds=None, starts=None,
                      max_nfev=2000, x_scale="jac", diff_step=None) -> FitResult:
    """Run a damped least-squares fit, optionally from multiple starts.

    ``residual_fn(x) -> 1-d residual vector``; ``names`` labels the
    parameter vector.  ``starts`` is an optional list of extra starting
    points; the best final cost wins (deterministic given the inputs).
    """
    x0 = np.asarray(x0, dtype=float)
    if len(names) != x0.size:
        raise FitError("names and x0 length mismatch")
    lo, hi = (-np.inf, np.inf) if bounds is None else bounds
    best = None
    for start in [x0] + list(starts or []):
        try:
            res = least_squares(residual_fn, np.asarray(start, dtype=float),
                                bounds=(lo, hi), max_nfev=max_nfev,
                                x_scale=x_scale, diff_step=diff_step,
                                method="trf")
        except ValueError as exc:
            raise FitError(f"least squares failed: {exc}") from exc
        if best is None or res.cost < best.cost:
            best = res
    cov = _covariance(best)
    if cov is not None:
        sigma = np.sqrt(np.maximum(np.diag(cov), 0.0))
    else:
        sigma = np.full(x0.size, np.nan)
    converged = bool(best.status > 0)
    return FitResult(
        parameters=dict(zip(names, best.x)),
        uncertainties=dict(zip(names, sigma)),
        residual_norm=float(np.linalg.norm(best.fun)),
        converged=converged,
        iterations=int(best.nfev),
        covariance=cov,
    )
