"""Exact entropy calculus on finite-support distributions.

The central object is S(Y) = E_Y[Y] - ln E[e^Y] with the exponentially
tilted expectation E_Y[Z] = E[Z e^Y] / E[e^Y].  Everything here is a
finite sum (with log-sum-exp shifting and compensated accumulation), so
this module serves as the ground-truth oracle for the tail-bound module.
S(Y) >= 0 and S(Y) = S(Y + c) always hold; nonnegativity follows from the
fluctuation representation, whose integrand is a variance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .orlicz import psi_norm_finite

__all__ = [
    "FiniteDist", "ProductTable", "LemmaHypothesisError", "entropy",
    "tilted_expect", "log_mgf_via_entropy", "fluctuation_entropy",
    "conditional_entropy_table", "subadditivity_gap",
    "entropy_bound_subgaussian", "entropy_bound_subexponential",
    "entropy_bound_holder",
]

E = math.e
_ENUMERATION_CAP = 10 ** 6


class LemmaHypothesisError(ValueError):
    """The bound's hypothesis (centering / norm smallness) is not met."""


@dataclass(frozen=True)
class FiniteDist:
    values: tuple
    probs: tuple

    def __init__(self, values, probs):
        v = np.asarray(values, dtype=float)
        p = np.asarray(probs, dtype=float)
        if v.shape != p.shape or v.ndim != 1 or len(v) == 0:
            raise ValueError("values and probs must be equal-length nonempty 1-d lists")
        if not np.all(np.isfinite(v)):
            raise ValueError("values must be finite")
        if np.any(p < 0):
            raise ValueError("probs must be nonnegative")
        if abs(math.fsum(p) - 1.0) > 1e-12:
            raise ValueError(f"probs must sum to 1 within 1e-12, got {math.fsum(p)!r}")
        object.__setattr__(self, "values", tuple(float(x) for x in v))
        object.__setattr__(self, "probs", tuple(float(x) for x in p))

    @property
    def v(self):
        return np.array(self.values)

    @property
    def p(self):
        return np.array(self.probs)

    def mean(self):
        return math.fsum(pi * vi for pi, vi in zip(self.probs, self.values))

    def var(self):
        mu = self.mean()
        return math.fsum(pi * (vi - mu) ** 2 for pi, vi in zip(self.probs, self.values))

    def scaled(self, c):
        return FiniteDist(tuple(c * vi for vi in self.values), self.probs)

    def shifted(self, c):
        return FiniteDist(tuple(vi + c for vi in self.values), self.probs)

    def to_dict(self):
        return {"values": list(self.values), "probs": list(self.probs)}

    @classmethod
    def from_dict(cls, d):
        return cls(d["values"], d["probs"])


@dataclass(frozen=True)
class ProductTable:
    """n independent finite coordinates and a function table over their product."""
    supports: tuple
    f_table: np.ndarray

    def __init__(self, supports, f_table):
        supports = tuple(supports)
        f = np.asarray(f_table, dtype=float)
        shape = tuple(len(s.values) for s in supports)
        if f.shape != shape:
            raise ValueError(f"f_table shape {f.shape} does not match supports {shape}")
        card = int(np.prod(shape))
        if card > _ENUMERATION_CAP:
            raise ValueError(
                f"product cardinality {card} exceeds enumeration cap {_ENUMERATION_CAP}")
        object.__setattr__(self, "supports", supports)
        object.__setattr__(self, "f_table", f)

    @property
    def n(self):
        return len(self.supports)

    def joint_probs(self):
        jp = np.array([1.0])
        for s in self.supports:
            jp = np.multiply.outer(jp, s.p)
        return jp.reshape(self.f_table.shape)

    def f_dist(self):
        return FiniteDist(self.f_table.ravel(), self.joint_probs().ravel())

    def to_dict(self):
        return {"supports": [s.to_dict() for s in self.supports],
                "f_table": self.f_table.tolist()}

    @classmethod
    def from_dict(cls, d):
        return cls([FiniteDist.from_dict(s) for s in d["supports"]],
                   np.asarray(d["f_table"], dtype=float))


# ---------------------------------------------------------------------------
# Entropy and tilted expectations

def _tilt_weights(values, probs):
    """exp-shifted weights p_i e^(y_i - max) and their sum."""
    values = np.asarray(values, dtype=float)
    probs = np.asarray(probs, dtype=float)
    m = float(np.max(values))
    w = probs * np.exp(values - m)
    return m, w, math.fsum(w)


def entropy(y: FiniteDist) -> float:
    """S(Y) = E_Y[Y] - ln E[e^Y], exact finite sum."""
    values, probs = y.v, y.p
    m, w, z = _tilt_weights(values, probs)
    tilted_mean = math.fsum(w * values) / z
    log_mgf = m + math.log(z)
    return tilted_mean - log_mgf


def tilted_expect(y: FiniteDist, g) -> float:
    """E_Y[g] = E[g e^Y] / E[e^Y] with g aligned to Y.values."""
    g = np.asarray(g, dtype=float)
    if g.shape != (len(y.values),):
        raise ValueError(f"g has length {g.shape}, expected {len(y.values)}")
    _, w, z = _tilt_weights(y.v, y.p)
    return math.fsum(w * g) / z


def _tilted_variance(y: FiniteDist, s: float) -> float:
    """Var of Y under the sY-tilted measure."""
    values = y.v
    _, w, z = _tilt_weights(s * values, y.p)
    mu = math.fsum(w * values) / z
    return math.fsum(w * (values - mu) ** 2) / z


def log_mgf_via_entropy(y: FiniteDist, beta: float, tol: float = 1e-9):
    """Both sides of ln E[e^(beta(Y-EY))] = beta * int_0^beta S(gamma Y)/gamma^2.

    Returns (direct, integral); the identity asserts their equality.  The
    integrand extends continuously to gamma -> 0 with value Var(Y)/2.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if beta == 0.0:
        return 0.0, 0.0
    centered = y.shifted(-y.mean())
    m, w, z = _tilt_weights(beta * centered.v, centered.p)
    direct = m + math.log(z)
    half_var = centered.var() / 2.0

    def integrand(gamma):
        if abs(gamma) < 1e-6:
            return half_var
        return entropy(centered.scaled(gamma)) / gamma ** 2

    val, err = integrate.quad(integrand, 0.0, beta, epsabs=tol / 10.0,
                              epsrel=1e-12, limit=200)
    if err > tol:
        raise RuntimeError(f"quadrature error {err} exceeds tolerance {tol}")
    return direct, beta * val


def fluctuation_entropy(y: FiniteDist, tol: float = 1e-9) -> float:
    """S(Y) via the double integral of tilted variances over the triangle.

    Integrates E_{sY}[(Y - E_{sY}[Y])^2] over {0 <= t <= s <= 1}; equals
    entropy(y) and provides an independent route to it.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    val, err = integrate.dblquad(lambda s, t: _tilted_variance(y, s),
                                 0.0, 1.0, lambda t: t, lambda t: 1.0,
                                 epsabs=tol / 10.0, epsrel=1e-12)
    if err > tol:
        raise RuntimeError(f"quadrature error {err} exceeds tolerance {tol}")
    return val


# ---------------------------------------------------------------------------
# Conditional entropies on product spaces

def conditional_entropy_table(table: ProductTable, gamma: float) -> np.ndarray:
    """S(gamma f_k(X))(x) for every coordinate k and base point x.

    Returns an array of shape (n,) + f_table.shape; by construction the
    k-th slice does not vary along axis k (the resampled coordinate).
    """
    shape = table.f_table.shape
    out = np.empty((table.n,) + shape)
    for k, support in enumerate(table.supports):
        pk = support.p
        a = np.moveaxis(table.f_table, k, -1)            # (..., m_k)
        rest_shape = a.shape[:-1]
        rows = gamma * a.reshape(-1, a.shape[-1])
        cond_mean = rows @ pk
        rows = rows - cond_mean[:, None]
        ent = _entropy_rows(rows, pk)
        block = np.broadcast_to(ent.reshape(rest_shape + (1,)),
                                rest_shape + (a.shape[-1],))
        out[k] = np.moveaxis(block, -1, k)
    return out


def _entropy_rows(rows, probs):
    """Row-wise entropy of finite dists sharing one probability vector."""
    m = rows.max(axis=1, keepdims=True)
    w = probs[None, :] * np.exp(rows - m)
    z = w.sum(axis=1)
    tilted_mean = (w * rows).sum(axis=1) / z
    return tilted_mean - (m[:, 0] + np.log(z))


def subadditivity_gap(table: ProductTable, gamma: float) -> float:
    """E_{gamma f(X)}[sum_k S(gamma f_k)] - S(gamma f(X)); always >= 0."""
    f_flat = gamma * table.f_table.ravel()
    jp = table.joint_probs().ravel()
    m, w, z = _tilt_weights(f_flat, jp)
    tilted_mean = math.fsum(w * f_flat) / z
    lhs = tilted_mean - (m + math.log(z))
    cond_sum = conditional_entropy_table(table, gamma).sum(axis=0).ravel()
    rhs = math.fsum(w * cond_sum) / z
    return rhs - lhs


# ---------------------------------------------------------------------------
# Entropy bound lemmas

def entropy_bound_subgaussian(y: FiniteDist, beta: float):
    """(S(beta Y), bound) with bound = min(ln E[e^(2 beta Y)], 16e beta^2 psi2^2).

    S is shift invariant, so Y is centered internally before the psi_2
    based part; the contract is s <= bound.
    """
    centered = y.shifted(-y.mean())
    s = entropy(centered.scaled(beta))
    if beta == 0.0:
        return 0.0, 0.0
    m, w, z = _tilt_weights(2.0 * beta * centered.v, centered.p)
    bound_mgf = m + math.log(z)
    psi2 = psi_norm_finite(centered.v, centered.p, 2).value
    bound_psi = 16.0 * E * beta ** 2 * psi2 ** 2
    return s, min(bound_mgf, bound_psi)


def entropy_bound_subexponential(y: FiniteDist):
    """(S(Y), e^2 psi1^2 / (1 - e psi1)^2) for centered Y with psi1 < 1/e."""
    mu = y.mean()
    if abs(mu) > 1e-12:
        raise LemmaHypothesisError(
            f"lemma hypothesis not met: E[Y] = {mu}, expected 0")
    psi1 = psi_norm_finite(y.v, y.p, 1).value
    if not psi1 < 1.0 / E:
        raise LemmaHypothesisError(
            f"lemma hypothesis not met: psi1 = {psi1} >= 1/e")
    s = entropy(y)
    bound = E ** 2 * psi1 ** 2 / (1.0 - E * psi1) ** 2
    return s, bound


def entropy_bound_holder(y: FiniteDist, p: float, variant: str = "psi1"):
    """(S(Y), ||Y^2||_p / (2 (1 - e q psi1)^2)) for conjugate q = p/(p-1).

    variant="psi2" replaces q * psi1 by sqrt(q) * psi2 in the denominator
    (with the correspondingly stronger hypothesis psi2 < 1/(e sqrt(q))).
    """
    if p <= 1:
        raise ValueError(f"p must exceed 1, got {p}")
    if variant not in ("psi1", "psi2"):
        raise ValueError(f"variant must be 'psi1' or 'psi2', got {variant!r}")
    mu = y.mean()
    if abs(mu) > 1e-12:
        raise LemmaHypothesisError(
            f"lemma hypothesis not met: E[Y] = {mu}, expected 0")
    q = p / (p - 1.0)
    values, probs = y.v, y.p
    # ||Y^2||_p exact on finite support
    y2p = math.fsum(probs * np.abs(values) ** (2 * p)) ** (1.0 / p)
    if variant == "psi1":
        psi1 = psi_norm_finite(values, probs, 1).value
        if not q * psi1 < 1.0 / E:
            raise LemmaHypothesisError(
                f"lemma hypothesis not met: q*psi1 = {q * psi1} >= 1/e")
        denom = (1.0 - E * q * psi1) ** 2
    else:
        psi2 = psi_norm_finite(values, probs, 2).value
        if not math.sqrt(q) * psi2 < 1.0 / E:
            raise LemmaHypothesisError(
                f"lemma hypothesis not met: sqrt(q)*psi2 = {math.sqrt(q) * psi2} >= 1/e")
        denom = (1.0 - E * math.sqrt(q) * psi2) ** 2
    s = entropy(y)
    return s, y2p / (2.0 * denom)
