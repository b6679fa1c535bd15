"""
Rate extraction from population time series.

Curves (rho_uu versus light time t):
    from_d     y = a (1 - exp(-g t))            rate = a g        (Gamma_du)
    from_u     y = a + (1 - a) exp(-g t)        rate = (1 - a) g  (Gamma_ud)
    spin_echo  y = (1 - exp(-k t)) / 2          rate = k          ((Gamma_Ram + Gamma_el) / 2)

Two methods:
- early-slope: weighted least squares of (y - y(0)) = m t + q t^2 on an early
  window; the window is narrowed to t < 0.2 / k with k = -2 q / m from the
  previous pass. The rate is the initial slope (times 2 for the echo).
- full-exponential: Gauss-Newton with step halving on the full model,
  started from a grid search over the decay constant.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from scatterqubit.utils.constants import (
    EARLY_WINDOW_FACTOR,
    EARLY_WINDOW_REFINEMENTS,
    GAUSS_NEWTON_MAX_ITER,
    GAUSS_NEWTON_RTOL,
    POPULATION_TOLERANCE,
    CurveKind,
    FitMethod,
)
from scatterqubit.utils.exceptions import DomainError
from scatterqubit.utils.logger import logger

_GRID_POINTS = 400
_MAX_HALVINGS = 40


class FitError(DomainError):
    """Raised when a time series cannot be fitted."""


class DegenerateDataError(FitError):
    """Raised for data without any variation."""


class FitConvergenceError(FitError):
    """Raised when Gauss-Newton does not converge; carries the last iterate."""

    def __init__(self, message: str, last_iterate: np.ndarray):
        super().__init__(message)
        self.last_iterate = last_iterate


@dataclass(frozen=True)
class DecayFitResult:
    rate: float
    uncertainty: float
    method: FitMethod
    residual_norm: float
    curve: CurveKind
    parameters: Dict[str, float] = field(default_factory=dict)
    iterations: int = 0

    def as_dict(self) -> Dict[str, object]:
        return {
            "rate": self.rate,
            "uncertainty": self.uncertainty,
            "method": self.method.value,
            "residual_norm": self.residual_norm,
            "curve": self.curve.value,
            "parameters": dict(self.parameters),
            "iterations": self.iterations,
        }


# === Curve models ===

@dataclass(frozen=True)
class _CurveModel:
    names: Tuple[str, ...]
    origin: float
    slope_to_rate: float
    evaluate: Callable[[np.ndarray, np.ndarray], np.ndarray]
    jacobian: Callable[[np.ndarray, np.ndarray], np.ndarray]
    rate: Callable[[np.ndarray], float]
    rate_gradient: Callable[[np.ndarray], np.ndarray]


def _from_d_eval(p, t):
    return p[0] * (1.0 - np.exp(-p[1] * t))


def _from_d_jac(p, t):
    decay = np.exp(-p[1] * t)
    return np.column_stack([1.0 - decay, p[0] * t * decay])


def _from_u_eval(p, t):
    return p[0] + (1.0 - p[0]) * np.exp(-p[1] * t)


def _from_u_jac(p, t):
    decay = np.exp(-p[1] * t)
    return np.column_stack([1.0 - decay, -(1.0 - p[0]) * t * decay])


def _echo_eval(p, t):
    return 0.5 * (1.0 - np.exp(-p[0] * t))


def _echo_jac(p, t):
    return (0.5 * t * np.exp(-p[0] * t))[:, None]


_MODELS: Dict[CurveKind, _CurveModel] = {
    CurveKind.FROM_D: _CurveModel(
        names=("amplitude", "decay_constant"), origin=0.0, slope_to_rate=1.0,
        evaluate=_from_d_eval, jacobian=_from_d_jac,
        rate=lambda p: p[0] * p[1], rate_gradient=lambda p: np.array([p[1], p[0]]),
    ),
    CurveKind.FROM_U: _CurveModel(
        names=("steady_state", "decay_constant"), origin=1.0, slope_to_rate=-1.0,
        evaluate=_from_u_eval, jacobian=_from_u_jac,
        rate=lambda p: (1.0 - p[0]) * p[1], rate_gradient=lambda p: np.array([-p[1], 1.0 - p[0]]),
    ),
    CurveKind.SPIN_ECHO: _CurveModel(
        names=("decoherence_rate",), origin=0.0, slope_to_rate=2.0,
        evaluate=_echo_eval, jacobian=_echo_jac,
        rate=lambda p: p[0], rate_gradient=lambda p: np.array([1.0]),
    ),
}


# === Input checks ===

def _prepare(
    times: Sequence[float],
    populations: Sequence[float],
    sigma: Optional[Sequence[float]],
) -> Tuple[np.ndarray, np.ndarray, Optional[np.ndarray]]:
    t = np.asarray(times, dtype=float)
    y = np.asarray(populations, dtype=float)
    if t.ndim != 1 or t.shape != y.shape:
        raise FitError(f"times and populations must be 1-D of equal length, got {t.shape} and {y.shape}")
    if t.size < 3:
        raise FitError(f"At least 3 points are needed, got {t.size}")
    if not (np.all(np.isfinite(t)) and np.all(np.isfinite(y))):
        raise FitError("times and populations must be finite")
    if np.any(t < 0):
        raise FitError("times must be non-negative (measured from the state preparation)")
    if np.ptp(t) == 0.0:
        raise DegenerateDataError("All samples share the same time")
    if np.any(y < -POPULATION_TOLERANCE) or np.any(y > 1.0 + POPULATION_TOLERANCE):
        raise FitError(
            f"Populations must lie in [{-POPULATION_TOLERANCE}, {1.0 + POPULATION_TOLERANCE}], "
            f"got range [{y.min():.4g}, {y.max():.4g}]"
        )
    if np.ptp(y) == 0.0:
        raise DegenerateDataError("Populations have zero variance; no decay can be fitted")

    s = None
    if sigma is not None:
        s = np.asarray(sigma, dtype=float)
        if s.shape != t.shape or np.any(~np.isfinite(s)) or np.any(s <= 0):
            raise FitError("sigma must be positive, finite and match the data length")

    order = np.argsort(t, kind="stable")
    return t[order], y[order], (None if s is None else s[order])


def _covariance(jac: np.ndarray, residuals: np.ndarray, weighted: bool) -> np.ndarray:
    n, k = jac.shape
    normal = jac.T @ jac
    try:
        inverse = np.linalg.inv(normal)
    except np.linalg.LinAlgError:
        inverse = np.linalg.pinv(normal)
    if weighted:
        return inverse
    dof = n - k
    scale = float(residuals @ residuals) / dof if dof > 0 else 0.0
    return scale * inverse


def _clip(rate: float, curve: CurveKind) -> float:
    if rate < 0.0:
        logger.warning(f"Fitted {curve.value} rate {rate:.6g} /s is negative; clipped to 0")
        return 0.0
    return rate


# === Early slope ===

def _quadratic_through_origin(t, dy, w):
    design = np.column_stack([t, t * t])
    jac = design * w[:, None]
    coef, *_ = np.linalg.lstsq(jac, dy * w, rcond=None)
    residuals = (dy - design @ coef) * w
    return coef, jac, residuals


def _early_slope(t, y, sigma, curve: CurveKind) -> DecayFitResult:
    model = _MODELS[curve]
    w = np.ones_like(t) if sigma is None else 1.0 / sigma
    dy = y - model.origin

    limit = t[0] + 0.25 * (t[-1] - t[0])
    window = t <= limit
    if window.sum() < 3:
        window = np.zeros_like(t, dtype=bool)
        window[:3] = True

    coef, jac, residuals = _quadratic_through_origin(t[window], dy[window], w[window])
    passes = 1
    for _ in range(EARLY_WINDOW_REFINEMENTS):
        slope, curvature = coef
        if slope == 0.0:
            break
        k = -2.0 * curvature / slope
        if k <= 0.0:
            break
        refined = t < EARLY_WINDOW_FACTOR / k
        if refined.sum() < 3:
            logger.debug(f"Early window t < {EARLY_WINDOW_FACTOR / k:.4g} s holds < 3 points; keeping previous")
            break
        window = refined
        coef, jac, residuals = _quadratic_through_origin(t[window], dy[window], w[window])
        passes += 1

    cov = _covariance(jac, residuals, sigma is not None)
    rate = model.slope_to_rate * coef[0]
    uncertainty = abs(model.slope_to_rate) * math.sqrt(max(cov[0, 0], 0.0))
    return DecayFitResult(
        rate=_clip(float(rate), curve),
        uncertainty=float(uncertainty),
        method=FitMethod.EARLY_SLOPE,
        residual_norm=float(np.linalg.norm(residuals)),
        curve=curve,
        parameters={"slope": float(coef[0]), "curvature": float(coef[1]), "window_points": int(window.sum())},
        iterations=passes,
    )


# === Full exponential ===

def _grid_start(t, y, w, curve: CurveKind) -> np.ndarray:
    """Best decay constant on a log grid, with the linear amplitude solved exactly."""
    positive = t[t > 0]
    g_lo = 0.01 / t[-1]
    g_hi = 100.0 / positive.min()
    best, best_cost = None, math.inf
    for g in np.logspace(math.log10(g_lo), math.log10(g_hi), _GRID_POINTS):
        decay = np.exp(-g * t)
        if curve is CurveKind.SPIN_ECHO:
            p = np.array([g])
        else:
            basis = (1.0 - decay) * w
            target = (y if curve is CurveKind.FROM_D else y - decay) * w
            denom = float(basis @ basis)
            if denom == 0.0:
                continue
            p = np.array([float(basis @ target) / denom, g])
        r = (y - _MODELS[curve].evaluate(p, t)) * w
        cost = float(r @ r)
        if cost < best_cost:
            best, best_cost = p, cost
    if best is None:
        raise FitError("Grid search found no usable starting point")
    return best


def _gauss_newton(t, y, w, curve: CurveKind, p0: np.ndarray) -> Tuple[np.ndarray, int]:
    model = _MODELS[curve]

    def residual(p):
        return (y - model.evaluate(p, t)) * w

    p = p0.astype(float)
    r = residual(p)
    cost = float(r @ r)
    for iteration in range(1, GAUSS_NEWTON_MAX_ITER + 1):
        jac = model.jacobian(p, t) * w[:, None]
        step, *_ = np.linalg.lstsq(jac, r, rcond=None)

        scale = 1.0
        for _ in range(_MAX_HALVINGS):
            trial = p + scale * step
            r_trial = residual(trial)
            cost_trial = float(r_trial @ r_trial)
            if np.all(np.isfinite(r_trial)) and cost_trial <= cost:
                break
            scale *= 0.5
        else:
            # no descent along the Gauss-Newton direction: at the minimum to round-off
            return p, iteration

        converged = np.all(np.abs(scale * step) <= GAUSS_NEWTON_RTOL * np.maximum(np.abs(trial), 1e-300))
        p, r, previous, cost = trial, r_trial, cost, cost_trial
        if converged or previous - cost <= GAUSS_NEWTON_RTOL * GAUSS_NEWTON_RTOL * max(previous, 1e-300):
            return p, iteration
    raise FitConvergenceError(
        f"Gauss-Newton did not converge in {GAUSS_NEWTON_MAX_ITER} iterations", last_iterate=p
    )


def _full_exponential(t, y, sigma, curve: CurveKind) -> DecayFitResult:
    model = _MODELS[curve]
    w = np.ones_like(t) if sigma is None else 1.0 / sigma
    p, iterations = _gauss_newton(t, y, w, curve, _grid_start(t, y, w, curve))

    residuals = (y - model.evaluate(p, t)) * w
    jac = model.jacobian(p, t) * w[:, None]
    cov = _covariance(jac, residuals, sigma is not None)
    gradient = model.rate_gradient(p)
    uncertainty = math.sqrt(max(float(gradient @ cov @ gradient), 0.0))
    return DecayFitResult(
        rate=_clip(float(model.rate(p)), curve),
        uncertainty=uncertainty,
        method=FitMethod.FULL_EXPONENTIAL,
        residual_norm=float(np.linalg.norm(residuals)),
        curve=curve,
        parameters={name: float(value) for name, value in zip(model.names, p)},
        iterations=iterations,
    )


def fit_rates(
    times: Sequence[float],
    populations: Sequence[float],
    curve: CurveKind | str,
    method: FitMethod | str = FitMethod.FULL_EXPONENTIAL,
    sigma: Optional[Sequence[float]] = None,
) -> DecayFitResult:
    """
    Fits rho_uu(t) of the given curve kind and reports Gamma_du (from_d),
    Gamma_ud (from_u) or the decoherence rate (spin_echo).
    """
    curve, method = CurveKind(curve), FitMethod(method)
    t, y, s = _prepare(times, populations, sigma)
    if method is FitMethod.EARLY_SLOPE:
        result = _early_slope(t, y, s, curve)
    else:
        result = _full_exponential(t, y, s, curve)
    logger.debug(
        f"{method.value} fit of {curve.value}: rate {result.rate:.6g} +- {result.uncertainty:.3g} /s "
        f"({result.iterations} iteration(s))"
    )
    return result
