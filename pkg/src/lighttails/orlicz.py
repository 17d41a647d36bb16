"""Sub-Gaussian and sub-exponential norms via the moment-ratio supremum.

The norms are defined as sup over p >= 1 of ||Z||_p / p^(1/alpha) with
alpha = 2 (sub-Gaussian) or alpha = 1 (sub-exponential).  The supremum is
evaluated on a log-spaced grid with local refinement; the tail beyond
p_max is accepted only when the ratio is nonincreasing over the last
octave, which holds for every catalogue distribution.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from . import distributions as dist

__all__ = [
    "OrliczEstimate", "PMaxTooSmallError", "psi_norm", "psi_norm_finite",
    "psi_norm_empirical", "centering_bound", "conditional_contraction_check",
    "concentrated_variable_bounds", "square_psi1_from_psi2", "mgf_bound_check",
]

E = math.e


class PMaxTooSmallError(RuntimeError):
    """The moment ratio was still increasing at p_max."""


@dataclass(frozen=True)
class OrliczEstimate:
    alpha: int
    value: float
    p_star: float
    method: str

    def to_dict(self):
        return {"alpha": self.alpha, "value": self.value,
                "p_star": self.p_star, "method": self.method}


def _check_alpha(alpha):
    if alpha not in (1, 2):
        raise ValueError(f"alpha must be 1 or 2, got {alpha}")


def _p_grid(p_max, grid_density):
    if p_max < 1:
        raise ValueError(f"p_max must be >= 1, got {p_max}")
    if grid_density < 8:
        raise ValueError(f"grid_density must be >= 8 points per octave, got {grid_density}")
    octaves = math.log2(p_max) if p_max > 1 else 1.0
    n = max(2, int(math.ceil(octaves * grid_density)) + 1)
    return np.exp(np.linspace(0.0, math.log(p_max), n))


def _sup_ratio(log_lp, alpha, p_max, grid_density, method):
    """Maximize exp(log_lp(p)) / p^(1/alpha) over [1, p_max].

    log_lp(p) returns ln ||Z||_p.  Returns an OrliczEstimate; raises
    PMaxTooSmallError when the last octave is still increasing.
    """
    grid = _p_grid(p_max, grid_density)

    def log_ratio(p):
        return log_lp(p) - math.log(p) / alpha

    ratios = np.array([log_ratio(p) for p in grid])
    if np.all(ratios == -math.inf):
        return OrliczEstimate(alpha, 0.0, 1.0, method)

    tail = ratios[grid >= p_max / 2 - 1e-9]
    if np.any(np.diff(tail) > 1e-9):
        raise PMaxTooSmallError(
            f"moment ratio still increasing at p_max={p_max}; p_max too small")

    i = int(np.argmax(ratios))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    best_lr, best_p = ratios[i], grid[i]
    if hi > lo:
        res = optimize.minimize_scalar(
            lambda t: -log_ratio(math.exp(t)),
            bounds=(math.log(lo), math.log(hi)), method="bounded",
            options={"xatol": 1e-12})
        if -res.fun > best_lr:
            best_lr, best_p = -res.fun, math.exp(res.x)
    return OrliczEstimate(alpha, math.exp(best_lr), float(best_p), method)


def psi_norm(spec, alpha, p_max=256.0, grid_density=16) -> OrliczEstimate:
    """psi_1 or psi_2 norm of a catalogue distribution.

    Uses exact L_p norms (closed form or certified quadrature) on a
    log-spaced grid with golden-section style refinement at the argmax.
    """
    _check_alpha(alpha)
    dist.validate(spec)
    method = "closed-form" if dist.finite_support(spec) is not None else "analytic-grid"
    return _sup_ratio(lambda p: dist.log_abs_moment(spec, p) / p,
                      alpha, p_max, grid_density, method)


def psi_norm_finite(values, probs, alpha, p_max=256.0, grid_density=16) -> OrliczEstimate:
    """Exact-arithmetic psi norm of a finite-support distribution."""
    _check_alpha(alpha)
    values = np.asarray(values, dtype=float)
    probs = np.asarray(probs, dtype=float)
    with np.errstate(divide="ignore"):
        log_p = np.log(probs)
        log_av = np.log(np.abs(values))
    mask = np.isfinite(log_p) & np.isfinite(log_av)
    if not np.any(mask):
        return OrliczEstimate(alpha, 0.0, 1.0, "closed-form")
    lp, lv = log_p[mask], log_av[mask]

    def log_lp_norm(p):
        t = lp + p * lv
        m = t.max()
        return (m + math.log(np.sum(np.exp(t - m)))) / p

    return _sup_ratio(log_lp_norm, alpha, p_max, grid_density, "closed-form")


def psi_norm_empirical(samples, alpha, p_max=10.0, grid_density=16) -> OrliczEstimate:
    """Plug-in psi norm from samples.

    High empirical moments are dominated by the sample maximum and are
    downward biased; p_max may not exceed ln(sample count).
    """
    _check_alpha(alpha)
    samples = np.asarray(samples, dtype=float).ravel()
    n = len(samples)
    if n == 0:
        raise ValueError("empty sample array")
    if n < 100:
        raise ValueError(f"need at least 100 samples, got {n}")
    if p_max > math.log(n):
        raise ValueError(
            f"p_max={p_max} exceeds ln(sample count)={math.log(n):.3f}; "
            "higher empirical moments are unreliable")
    warnings.warn("empirical psi norms are downward-biased at high p",
                  stacklevel=2)
    with np.errstate(divide="ignore"):
        log_abs = np.log(np.abs(samples))
    log_abs = log_abs[np.isfinite(log_abs)]
    if len(log_abs) == 0:
        return OrliczEstimate(alpha, 0.0, 1.0, "empirical")
    log_n = math.log(n)

    def log_lp_norm(p):
        t = p * log_abs
        m = t.max()
        return (m + math.log(np.sum(np.exp(t - m))) - log_n) / p

    grid = _p_grid(p_max, grid_density)
    lrs = np.array([log_lp_norm(p) - math.log(p) / alpha for p in grid])
    i = int(np.argmax(lrs))
    return OrliczEstimate(alpha, math.exp(lrs[i]), float(grid[i]), "empirical")


def centering_bound(psi_value: float) -> float:
    """Norm bound for the centered variable: twice the uncentered norm."""
    if psi_value < 0:
        raise ValueError(f"psi_value must be nonnegative, got {psi_value}")
    return 2.0 * psi_value


def conditional_contraction_check(marginal, phi, alpha):
    """Conditioning contracts the psi norm: returns (lhs, rhs), lhs <= rhs.

    `marginal` is a finite (values, probs) pair for iid X, X'; `phi` is a
    square value table phi[s, t] over the support.  lhs is the psi norm of
    E[phi(X, X')|X], rhs the psi norm of phi(X, X') on the product space.
    """
    values, probs = marginal
    probs = np.asarray(probs, dtype=float)
    phi = np.asarray(phi, dtype=float)
    m = len(probs)
    if phi.shape != (m, m):
        raise ValueError(
            f"phi must be a square {m}x{m} table, got shape {phi.shape}")
    cond_mean = phi @ probs
    lhs = psi_norm_finite(cond_mean, probs, alpha).value
    joint_p = np.outer(probs, probs).ravel()
    rhs = psi_norm_finite(phi.ravel(), joint_p, alpha).value
    return lhs, rhs


def concentrated_variable_bounds(eps: float):
    """Norm bounds for a centered variable with |X|<=1, Pr{|X|>eps}<=eps.

    Returns (lp_bound, psi1_bound) with lp_bound(p) = 2*eps^(1/p) and
    psi1_bound = 2/(e*ln(1/eps)).
    """
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0,1), got {eps}")

    def lp_bound(p):
        return 2.0 * eps ** (1.0 / p)

    psi1_bound = 2.0 / (E * math.log(1.0 / eps))
    return lp_bound, psi1_bound


def square_psi1_from_psi2(psi2_value: float) -> float:
    """psi_1 bound for the square of a sub-Gaussian variable."""
    if psi2_value < 0:
        raise ValueError(f"psi2_value must be nonnegative, got {psi2_value}")
    return 2.0 * psi2_value ** 2


def mgf_bound_check(spec, beta, psi2_value=None):
    """MGF of a centered variable against exp(4e beta^2 psi_2^2).

    Returns (mgf, bound); the sub-Gaussian MGF bound asserts mgf <= bound.
    psi2_value may be passed to avoid recomputing the norm across a beta
    sweep.
    """
    mu = dist.mean(spec)
    if abs(mu) > 1e-9:
        raise ValueError(f"spec must be centered, got mean {mu}")
    if psi2_value is None:
        psi2_value = psi_norm(spec, 2).value
    m = dist.mgf(spec, beta)
    bound = math.exp(4.0 * E * beta ** 2 * psi2_value ** 2)
    return m, bound
