"""Closed-form tail bounds for functions of independent variables.

Three headline bounds plus the classical bounded-difference baseline:

  sub-Gaussian:     exp(-t^2 / (32 e V2))
  sub-exponential:  exp(-t^2 / (4 e^2 V1 + 2 e M1 t))
  moment/Bernstein: exp(-t^2 / (2 V2p + 2 e q M1 t))   (q conjugate to p)

with V_a the summed squared per-coordinate proxies and M the largest one.
All probabilities are evaluated in log space and clamped to (0, 1].
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = [
    "ProxyProfile", "TailBoundResult", "InversionResult", "thm1_tail",
    "thm2_tail", "thm3_tail", "bounded_difference_tail", "invert_tail",
    "optimization_lemma", "BOUND_KINDS",
]

E = math.e

BOUND_KINDS = ("thm1", "thm2", "thm3", "thm3-psi2-variant", "bounded-difference")


@dataclass(frozen=True)
class ProxyProfile:
    """Per-coordinate worst-case norm data consumed by the bounds.

    Entries are the essential suprema over the base point of the
    per-coordinate conditional-version norms; computing those suprema is
    the caller's job (see functions.proxy_profile).
    """
    n: int
    psi1_per_coord: Optional[tuple] = None
    psi2_per_coord: Optional[tuple] = None
    l2p_per_coord: Optional[tuple] = None
    l2p_order: Optional[float] = None       # the p of the 2p-norms
    ranges: Optional[tuple] = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        for name in ("psi1_per_coord", "psi2_per_coord", "l2p_per_coord", "ranges"):
            entries = getattr(self, name)
            if entries is None:
                continue
            entries = tuple(float(x) for x in entries)
            object.__setattr__(self, name, entries)
            if len(entries) != self.n:
                raise ValueError(f"{name} must have length n={self.n}, got {len(entries)}")
            if any(x < 0 for x in entries):
                raise ValueError(f"{name} entries must be nonnegative")
        if self.l2p_per_coord is not None:
            if self.l2p_order is None or self.l2p_order <= 1:
                raise ValueError("l2p_per_coord requires l2p_order > 1")

    # derived proxies
    @property
    def v1(self):
        self._need("psi1_per_coord")
        return math.fsum(x * x for x in self.psi1_per_coord)

    @property
    def m1(self):
        self._need("psi1_per_coord")
        return max(self.psi1_per_coord)

    @property
    def v2(self):
        self._need("psi2_per_coord")
        return math.fsum(x * x for x in self.psi2_per_coord)

    @property
    def m2(self):
        self._need("psi2_per_coord")
        return max(self.psi2_per_coord)

    @property
    def v2p(self):
        self._need("l2p_per_coord")
        return math.fsum(x * x for x in self.l2p_per_coord)

    def _need(self, name):
        if getattr(self, name) is None:
            raise ValueError(f"profile is missing {name}")

    def to_dict(self):
        d = {"n": self.n}
        for name in ("psi1_per_coord", "psi2_per_coord", "l2p_per_coord", "ranges"):
            if getattr(self, name) is not None:
                d[name] = list(getattr(self, name))
        if self.l2p_order is not None:
            d["l2p_order"] = self.l2p_order
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(n=d["n"],
                   psi1_per_coord=d.get("psi1_per_coord"),
                   psi2_per_coord=d.get("psi2_per_coord"),
                   l2p_per_coord=d.get("l2p_per_coord"),
                   l2p_order=d.get("l2p_order"),
                   ranges=d.get("ranges"))


@dataclass(frozen=True)
class TailBoundResult:
    kind: str
    t: float
    prob: float
    log_prob: float
    note: str = ""

    def to_dict(self):
        d = {"kind": self.kind, "t": self.t, "prob": self.prob,
             "log_prob": self.log_prob}
        if self.note:
            d["note"] = self.note
        return d


def _result(kind, t, log_prob, note=""):
    log_prob = min(log_prob, 0.0)
    return TailBoundResult(kind, t, math.exp(log_prob), log_prob, note)


def _check_t(t):
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")


def thm1_tail(profile: ProxyProfile, t: float) -> TailBoundResult:
    """Sub-Gaussian bound exp(-t^2 / (32 e V2))."""
    _check_t(t)
    v2 = profile.v2
    if v2 == 0.0:
        return TailBoundResult("thm1", t, 0.0, -math.inf,
                               "degenerate: f is a.s. constant")
    return _result("thm1", t, -t * t / (32.0 * E * v2))


def thm2_tail(profile: ProxyProfile, t: float) -> TailBoundResult:
    """Sub-exponential bound exp(-t^2 / (4 e^2 V1 + 2 e M1 t))."""
    _check_t(t)
    v1, m1 = profile.v1, profile.m1
    if v1 == 0.0 and m1 == 0.0:
        return TailBoundResult("thm2", t, 0.0, -math.inf,
                               "degenerate: f is a.s. constant")
    return _result("thm2", t, -t * t / (4.0 * E * E * v1 + 2.0 * E * m1 * t))


def thm3_tail(profile: ProxyProfile, p: float, t: float,
              variant: str = "psi1") -> TailBoundResult:
    """Moment-based bound exp(-t^2 / (2 V2p + 2 e q M t)), q = p/(p-1).

    variant="psi1" uses q * max psi1 in the linear term; variant="psi2"
    uses sqrt(q) * max psi2 instead.
    """
    _check_t(t)
    if p <= 1:
        raise ValueError(
            f"p must exceed 1 (p -> 1 drives the scale proxy to infinity), got {p}")
    if profile.l2p_order is not None and abs(profile.l2p_order - p) > 1e-12:
        raise ValueError(
            f"profile carries 2p-norms for p={profile.l2p_order}, asked for p={p}")
    q = p / (p - 1.0)
    v2p = profile.v2p
    if variant == "psi1":
        kind, scale = "thm3", q * profile.m1
    elif variant == "psi2":
        kind, scale = "thm3-psi2-variant", math.sqrt(q) * profile.m2
    else:
        raise ValueError(f"variant must be 'psi1' or 'psi2', got {variant!r}")
    if v2p == 0.0 and scale == 0.0:
        return TailBoundResult(kind, t, 0.0, -math.inf,
                               "degenerate: f is a.s. constant")
    return _result(kind, t, -t * t / (2.0 * v2p + 2.0 * E * scale * t))


def bounded_difference_tail(profile: ProxyProfile, t: float) -> TailBoundResult:
    """Classical baseline exp(-2 t^2 / sum r_k^2); trivial if any range is infinite."""
    _check_t(t)
    profile._need("ranges")
    if any(math.isinf(r) for r in profile.ranges):
        return TailBoundResult("bounded-difference", t, 1.0, 0.0,
                               "baseline inapplicable: infinite conditional range")
    ssq = math.fsum(r * r for r in profile.ranges)
    if ssq == 0.0:
        return TailBoundResult("bounded-difference", t, 0.0, -math.inf,
                               "degenerate: f is a.s. constant")
    return _result("bounded-difference", t, -2.0 * t * t / ssq)


def evaluate_tail(kind, profile, t, p=None):
    """Dispatch a bound kind name to its closed form."""
    if kind == "thm1":
        return thm1_tail(profile, t)
    if kind == "thm2":
        return thm2_tail(profile, t)
    if kind == "thm3":
        return thm3_tail(profile, p if p is not None else 2.0, t)
    if kind == "thm3-psi2-variant":
        return thm3_tail(profile, p if p is not None else 2.0, t, variant="psi2")
    if kind == "bounded-difference":
        return bounded_difference_tail(profile, t)
    raise ValueError(f"unknown bound kind {kind!r}; known: {BOUND_KINDS}")


# ---------------------------------------------------------------------------
# Inversion

@dataclass(frozen=True)
class InversionResult:
    """Deviation levels with exp(bound exponent) = delta.

    `exact` solves the quadratic t^2 = L (a + b t) exactly; `additive` is
    the relaxation sqrt(a L) + b L used by the closed-form application
    bounds.  exact <= additive always.
    """
    kind: str
    delta: float
    exact: float
    additive: float

    def to_dict(self):
        return {"kind": self.kind, "delta": self.delta,
                "exact": self.exact, "additive": self.additive}


def invert_tail(kind, profile: ProxyProfile, delta: float, p=None,
                variant: str = "psi1") -> InversionResult:
    """Smallest t at which the requested bound equals delta."""
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0,1), got {delta}")
    big_l = math.log(1.0 / delta)
    if kind == "thm1":
        t = math.sqrt(32.0 * E * profile.v2 * big_l)
        return InversionResult(kind, delta, t, t)
    if kind == "thm2":
        a, b = 4.0 * E * E * profile.v1, 2.0 * E * profile.m1
    elif kind == "thm3":
        if p is None or p <= 1:
            raise ValueError(f"thm3 inversion needs p > 1, got {p}")
        q = p / (p - 1.0)
        scale = q * profile.m1 if variant == "psi1" else math.sqrt(q) * profile.m2
        a, b = 2.0 * profile.v2p, 2.0 * E * scale
    else:
        raise ValueError(f"cannot invert bound kind {kind!r}")
    exact = (b * big_l + math.sqrt(b * b * big_l * big_l + 4.0 * a * big_l)) / 2.0
    additive = math.sqrt(a * big_l) + b * big_l
    return InversionResult(kind, delta, exact, additive)


# ---------------------------------------------------------------------------
# The optimization lemma behind the quadratic-over-linear exponents

def optimization_lemma(c: float, b: float, t: float, grid_points: int = 10 ** 4):
    """(rhs, grid_min) for inf over beta in [0,1/b) of -beta t + C beta^2/(1-b beta).

    rhs = -t^2 / (2 (2C + b t)); the infimum is at most rhs, so a dense
    grid minimum must also not exceed it (up to grid resolution).
    """
    if c <= 0 or b <= 0 or t <= 0:
        raise ValueError(f"C, b, t must all be positive, got ({c}, {b}, {t})")
    rhs = -t * t / (2.0 * (2.0 * c + b * t))
    betas = np.linspace(0.0, 1.0 / b, grid_points + 1)[:-1]
    # include the witness point realizing the right-hand side, so coarse
    # grids cannot spuriously miss the infimum near beta = 0
    betas = np.append(betas, t / (2.0 * c + b * t))
    g = -betas * t + c * betas ** 2 / (1.0 - b * betas)
    grid_min = float(np.min(g))
    return rhs, grid_min
