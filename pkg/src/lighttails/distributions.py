"""Declarative catalogue of scalar and vector random sources.

Every catalogue distribution has all moments finite, so L_p and Orlicz
norm queries are always well posed.  Sampling is counter-based (Philox):
the triple (spec, seed, count) plus an optional stream index fully
determines the output, so parallel shards can be merged deterministically.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import integrate, stats
from scipy.special import gammaln

__all__ = [
    "Gaussian", "Exponential", "Rademacher", "UniformInterval", "Poisson",
    "ChiSquared", "TwoPointEps", "FiniteSupport", "Shifted", "Scaled",
    "SquareOf", "Centered", "DistributionSpec", "VectorSpec", "SpecError",
    "MomentDivergenceError", "QuadratureError", "validate", "mean",
    "abs_moment", "lp_norm", "mgf", "sample", "sample_vector",
    "finite_support", "spec_to_dict", "spec_from_dict",
]

_QUAD_RTOL = 1e-10
_QUAD_LIMIT = 400


class SpecError(ValueError):
    """Invalid distribution parameters; message names the offending field."""


class MomentDivergenceError(ValueError):
    """Requested transform (e.g. an MGF value) does not exist."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


@dataclass(frozen=True)
class Gaussian:
    mean: float = 0.0
    sd: float = 1.0


@dataclass(frozen=True)
class Exponential:
    rate: float = 1.0


@dataclass(frozen=True)
class Rademacher:
    pass


@dataclass(frozen=True)
class UniformInterval:
    lo: float
    hi: float


@dataclass(frozen=True)
class Poisson:
    rate: float


@dataclass(frozen=True)
class ChiSquared:
    dof: int


@dataclass(frozen=True)
class TwoPointEps:
    """X = +1 w.p. eps/2, -1 w.p. eps/2, 0 otherwise.

    Centered, |X| <= 1 and Pr{|X| > eps} <= eps hold exactly, which makes
    this the canonical strongly concentrated variable.
    """
    eps: float


@dataclass(frozen=True)
class FiniteSupport:
    values: tuple
    probs: tuple

    def __init__(self, values, probs):
        object.__setattr__(self, "values", tuple(float(v) for v in values))
        object.__setattr__(self, "probs", tuple(float(p) for p in probs))


@dataclass(frozen=True)
class Shifted:
    base: "DistributionSpec"
    offset: float


@dataclass(frozen=True)
class Scaled:
    base: "DistributionSpec"
    factor: float


@dataclass(frozen=True)
class SquareOf:
    base: "DistributionSpec"


@dataclass(frozen=True)
class Centered:
    base: "DistributionSpec"


DistributionSpec = Union[
    Gaussian, Exponential, Rademacher, UniformInterval, Poisson, ChiSquared,
    TwoPointEps, FiniteSupport, Shifted, Scaled, SquareOf, Centered,
]


@dataclass(frozen=True)
class VectorSpec:
    """Vector with independent coordinates and the euclidean norm."""
    dim: int
    components: tuple
    norm_kind: str = "euclidean"

    def __init__(self, dim, components, norm_kind="euclidean"):
        object.__setattr__(self, "dim", int(dim))
        object.__setattr__(self, "components", tuple(components))
        object.__setattr__(self, "norm_kind", norm_kind)


def validate(spec) -> None:
    """Raise SpecError if the spec's parameters are out of range."""
    if isinstance(spec, Gaussian):
        if not spec.sd > 0:
            raise SpecError(f"sd must be positive, got {spec.sd}")
    elif isinstance(spec, Exponential):
        if not spec.rate > 0:
            raise SpecError(f"rate must be positive, got {spec.rate}")
    elif isinstance(spec, UniformInterval):
        if not spec.lo < spec.hi:
            raise SpecError(f"lo must be < hi, got lo={spec.lo}, hi={spec.hi}")
    elif isinstance(spec, Poisson):
        if not spec.rate > 0:
            raise SpecError(f"rate must be positive, got {spec.rate}")
    elif isinstance(spec, ChiSquared):
        if not (isinstance(spec.dof, int) and spec.dof >= 1):
            raise SpecError(f"dof must be a positive integer, got {spec.dof}")
    elif isinstance(spec, TwoPointEps):
        if not 0 < spec.eps < 1:
            raise SpecError(f"eps must lie in (0,1), got {spec.eps}")
    elif isinstance(spec, FiniteSupport):
        v = np.asarray(spec.values, dtype=float)
        p = np.asarray(spec.probs, dtype=float)
        if v.shape != p.shape or v.ndim != 1 or len(v) == 0:
            raise SpecError("values and probs must be equal-length nonempty lists")
        if not np.all(np.isfinite(v)):
            raise SpecError("values must be finite")
        if np.any(p < 0):
            raise SpecError(f"probs must be nonnegative, got {spec.probs}")
        if abs(p.sum() - 1.0) > 1e-12:
            raise SpecError(f"probs must sum to 1 within 1e-12, got sum {p.sum()!r}")
    elif isinstance(spec, (Shifted, Scaled, SquareOf, Centered)):
        validate(spec.base)
    elif isinstance(spec, Rademacher):
        pass
    elif isinstance(spec, VectorSpec):
        if spec.dim < 1:
            raise SpecError(f"dim must be >= 1, got {spec.dim}")
        if len(spec.components) != spec.dim:
            raise SpecError(
                f"components must have length dim={spec.dim}, got {len(spec.components)}")
        if spec.norm_kind != "euclidean":
            raise SpecError(f"unsupported norm_kind {spec.norm_kind!r}")
        for c in spec.components:
            validate(c)
    else:
        raise SpecError(f"unknown spec type {type(spec).__name__}")


# ---------------------------------------------------------------------------
# Exact finite-support reduction

def finite_support(spec):
    """Return (values, probs) arrays if the spec is exactly finite, else None.

    Duplicate values produced by transforms (e.g. squaring a symmetric
    support) are merged.
    """
    vp = _finite_raw(spec)
    if vp is None:
        return None
    values, probs = vp
    order = np.argsort(values)
    values, probs = values[order], probs[order]
    merged_v, merged_p = [], []
    for v, p in zip(values, probs):
        if merged_v and abs(v - merged_v[-1]) <= 1e-15 * max(1.0, abs(v)):
            merged_p[-1] += p
        else:
            merged_v.append(v)
            merged_p.append(p)
    return np.array(merged_v), np.array(merged_p)


def _finite_raw(spec):
    if isinstance(spec, Rademacher):
        return np.array([-1.0, 1.0]), np.array([0.5, 0.5])
    if isinstance(spec, TwoPointEps):
        e = spec.eps
        return np.array([-1.0, 0.0, 1.0]), np.array([e / 2, 1 - e, e / 2])
    if isinstance(spec, FiniteSupport):
        return np.asarray(spec.values, dtype=float), np.asarray(spec.probs, dtype=float)
    if isinstance(spec, Shifted):
        vp = _finite_raw(spec.base)
        if vp is not None:
            return vp[0] + spec.offset, vp[1]
    if isinstance(spec, Scaled):
        vp = _finite_raw(spec.base)
        if vp is not None:
            return vp[0] * spec.factor, vp[1]
    if isinstance(spec, SquareOf):
        vp = _finite_raw(spec.base)
        if vp is not None:
            return vp[0] ** 2, vp[1]
    if isinstance(spec, Centered):
        vp = _finite_raw(spec.base)
        if vp is not None:
            return vp[0] - float(np.dot(vp[0], vp[1])), vp[1]
    return None


def support_interval(spec):
    """Smallest closed interval carrying all the mass; endpoints may be inf."""
    fs = finite_support(spec)
    if fs is not None:
        values = fs[0]
        return float(values[0]), float(values[-1])
    if isinstance(spec, Gaussian):
        return -math.inf, math.inf
    if isinstance(spec, (Exponential, Poisson, ChiSquared)):
        return 0.0, math.inf
    if isinstance(spec, UniformInterval):
        return spec.lo, spec.hi
    if isinstance(spec, Shifted):
        lo, hi = support_interval(spec.base)
        return lo + spec.offset, hi + spec.offset
    if isinstance(spec, Scaled):
        lo, hi = support_interval(spec.base)
        a, b = lo * spec.factor, hi * spec.factor
        return (a, b) if a <= b else (b, a)
    if isinstance(spec, SquareOf):
        lo, hi = support_interval(spec.base)
        if lo >= 0:
            return lo * lo, hi * hi
        if hi <= 0:
            return hi * hi, lo * lo
        return 0.0, max(lo * lo, hi * hi)
    if isinstance(spec, Centered):
        lo, hi = support_interval(spec.base)
        mu = _mean(spec.base)
        return lo - mu, hi - mu
    raise SpecError(f"unknown spec {type(spec).__name__}")


# ---------------------------------------------------------------------------
# Analytic means

def mean(spec) -> float:
    validate(spec)
    return _mean(spec)


def _mean(spec):
    if isinstance(spec, Gaussian):
        return spec.mean
    if isinstance(spec, Exponential):
        return 1.0 / spec.rate
    if isinstance(spec, Rademacher):
        return 0.0
    if isinstance(spec, UniformInterval):
        return 0.5 * (spec.lo + spec.hi)
    if isinstance(spec, Poisson):
        return spec.rate
    if isinstance(spec, ChiSquared):
        return float(spec.dof)
    if isinstance(spec, TwoPointEps):
        return 0.0
    if isinstance(spec, FiniteSupport):
        return float(np.dot(spec.values, spec.probs))
    if isinstance(spec, Shifted):
        return _mean(spec.base) + spec.offset
    if isinstance(spec, Scaled):
        return spec.factor * _mean(spec.base)
    if isinstance(spec, SquareOf):
        # E[X^2] is the squared L_2 norm of the base
        return abs_moment(spec.base, 2.0)
    if isinstance(spec, Centered):
        return 0.0
    raise SpecError(f"unknown spec type {type(spec).__name__}")


# ---------------------------------------------------------------------------
# Absolute moments E|X|^p and L_p norms
#
# Everything runs in log space: the Orlicz supremum probes p up to ~256,
# where raw moments overflow doubles by hundreds of orders of magnitude.

def abs_moment(spec, p: float) -> float:
    """E|X|^p, exact where a closed form exists, else quadrature/series."""
    lm = log_abs_moment(spec, p)
    return math.exp(lm) if lm > -math.inf else 0.0


def lp_norm(spec, p: float) -> float:
    """(E|X|^p)^(1/p) for p >= 1."""
    if p < 1:
        raise SpecError(f"p must be >= 1, got {p}")
    lm = log_abs_moment(spec, p)
    return math.exp(lm / p) if lm > -math.inf else 0.0


def log_abs_moment(spec, p: float) -> float:
    """ln E|X|^p (-inf for the a.s. zero variable)."""
    validate(spec)
    if p < 0:
        raise SpecError(f"moment order must be nonnegative, got p={p}")
    return _log_abs_moment_cached(spec, float(p))


@functools.lru_cache(maxsize=1 << 16)
def _log_abs_moment_cached(spec, p):
    return _log_abs_moment(spec, p)


def _log_abs_moment(spec, p):
    if p == 0:
        return 0.0
    vp = finite_support(spec)
    if vp is not None:
        values, probs = vp
        with np.errstate(divide="ignore"):
            terms = np.log(probs) + p * np.log(np.abs(values))
        return _logsumexp(terms)
    if isinstance(spec, Gaussian) and spec.mean == 0.0:
        # E|N(0,sd)|^p = sd^p * 2^(p/2) * Gamma((p+1)/2) / sqrt(pi)
        return (p * math.log(spec.sd) + 0.5 * p * math.log(2.0)
                + float(gammaln((p + 1) / 2)) - 0.5 * math.log(math.pi))
    if isinstance(spec, Exponential):
        return float(gammaln(p + 1)) - p * math.log(spec.rate)
    if isinstance(spec, UniformInterval):
        return _uniform_log_abs_moment(spec.lo, spec.hi, p)
    if isinstance(spec, ChiSquared):
        return (p * math.log(2.0) + float(gammaln(spec.dof / 2 + p))
                - float(gammaln(spec.dof / 2)))
    if isinstance(spec, Poisson):
        return _poisson_log_series(spec.rate,
                                   lambda k: p * _safe_log_abs(float(k)))
    if isinstance(spec, Scaled):
        return p * math.log(abs(spec.factor)) + _log_abs_moment(spec.base, p) \
            if spec.factor != 0 else -math.inf
    if isinstance(spec, SquareOf):
        return _log_abs_moment(spec.base, 2 * p)
    if isinstance(spec, Centered):
        return _log_abs_moment(Shifted(spec.base, -_mean(spec.base)), p)
    # Shifted continuous/discrete bases and non-central Gaussians
    base, fn = _transform_chain(spec)
    if isinstance(base, Poisson):
        return _poisson_log_series(base.rate,
                                   lambda k: p * _safe_log_abs(fn(float(k))))
    return _log_moment_numeric(base, fn, p)


def _safe_log_abs(x):
    ax = abs(x)
    return math.log(ax) if ax > 0 else -math.inf


def _logsumexp(terms):
    terms = np.asarray(terms, dtype=float)
    m = np.max(terms) if len(terms) else -math.inf
    if m == -math.inf:
        return -math.inf
    return float(m + math.log(np.sum(np.exp(terms - m))))


def _uniform_log_abs_moment(lo, hi, p):
    # ln of the integral of |x|^p over [lo,hi], minus ln width
    width = hi - lo
    c = -math.log(p + 1) - math.log(width)
    if lo >= 0:
        if lo == 0:
            return (p + 1) * math.log(hi) + c
        return (p + 1) * math.log(hi) + math.log1p(-(lo / hi) ** (p + 1)) + c
    if hi <= 0:
        return _uniform_log_abs_moment(-hi, -lo, p)
    return _logsumexp([(p + 1) * math.log(hi), (p + 1) * math.log(-lo)]) + c


def _poisson_log_series(lam, log_g):
    """ln sum exp(log_g(k)) * pmf(k) over the Poisson support."""
    terms = []
    log_pmf = -lam
    k = 0
    running_max = -math.inf
    while True:
        t = log_g(k) + log_pmf
        terms.append(t)
        running_max = max(running_max, t)
        k += 1
        log_pmf += math.log(lam) - math.log(k)
        # past the mode the log-terms decay faster than linearly
        if k > lam + 10 and t < running_max - 40:
            return _logsumexp(terms)
        if k > 100000:
            raise QuadratureError("Poisson series did not converge")


def _transform_chain(spec):
    """Split a composed spec into (primitive base, vectorized map)."""
    if isinstance(spec, Shifted):
        base, fn = _transform_chain(spec.base)
        off = spec.offset
        return base, (lambda x, fn=fn, off=off: fn(x) + off)
    if isinstance(spec, Scaled):
        base, fn = _transform_chain(spec.base)
        c = spec.factor
        return base, (lambda x, fn=fn, c=c: c * fn(x))
    if isinstance(spec, SquareOf):
        base, fn = _transform_chain(spec.base)
        return base, (lambda x, fn=fn: fn(x) ** 2)
    if isinstance(spec, Centered):
        base, fn = _transform_chain(spec.base)
        mu = _mean(spec.base)
        return base, (lambda x, fn=fn, mu=mu: fn(x) - mu)
    return spec, _identity


def _identity(x):
    return x


def _moment_window(base, p):
    """x-interval carrying essentially all mass of |x|^p * density."""
    if isinstance(base, Gaussian):
        w = math.sqrt(2 * p) + 12.0
        return base.mean - w * base.sd, base.mean + w * base.sd
    if isinstance(base, Exponential):
        return 0.0, (p + 8 * math.sqrt(p) + 40.0) / base.rate
    if isinstance(base, ChiSquared):
        peak = base.dof + 2 * p
        return 0.0, peak + 10 * math.sqrt(peak) + 50.0
    if isinstance(base, UniformInterval):
        return base.lo, base.hi
    raise SpecError(f"no moment window for {type(base).__name__}")


def _logpdf_fn(base):
    """Fast scalar/vector log-density, avoiding frozen-dist call overhead."""
    if isinstance(base, Gaussian):
        m, sd = base.mean, base.sd
        c = -math.log(sd) - 0.5 * math.log(2 * math.pi)
        return lambda x: c - 0.5 * ((x - m) / sd) ** 2
    if isinstance(base, Exponential):
        r = base.rate
        lr = math.log(r)

        def expon_logpdf(x):
            return np.where(np.asarray(x) >= 0, lr - r * np.asarray(x), -np.inf)
        return expon_logpdf
    if isinstance(base, ChiSquared):
        k2 = base.dof / 2.0
        c = -k2 * math.log(2.0) - float(gammaln(k2))

        def chi2_logpdf(x):
            x = np.asarray(x, dtype=float)
            with np.errstate(divide="ignore"):
                return np.where(x > 0, c + (k2 - 1) * np.log(np.maximum(x, 1e-300))
                                - x / 2, -np.inf)
        return chi2_logpdf
    if isinstance(base, UniformInterval):
        c = -math.log(base.hi - base.lo)
        lo, hi = base.lo, base.hi

        def unif_logpdf(x):
            x = np.asarray(x)
            return np.where((x >= lo) & (x <= hi), c, -np.inf)
        return unif_logpdf
    raise SpecError(f"no density available for {type(base).__name__}")


def _log_moment_numeric(base, fn, p):
    """ln integral of |fn(x)|^p * density(x) dx, scaled to avoid overflow."""
    logpdf = _logpdf_fn(base)
    lo, hi = _moment_window(base, p)
    xs = np.linspace(lo, hi, 4001)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = np.asarray(p * np.log(np.abs(fn(xs))) + logpdf(xs))
    h[~np.isfinite(h)] = -np.inf
    k = float(np.max(h))
    if k == -math.inf:
        return -math.inf
    live = np.where(h > k - 80.0)[0]
    a = xs[max(live[0] - 1, 0)]
    b = xs[min(live[-1] + 1, len(xs) - 1)]

    def integrand(x):
        fx = abs(fn(x))
        if fx == 0.0:
            return 0.0
        e = p * math.log(fx) + float(logpdf(x)) - k
        return math.exp(e) if e > -700 else 0.0

    val, err = integrate.quad(integrand, a, b, epsabs=0.0,
                              epsrel=1e-11, limit=_QUAD_LIMIT)
    if not np.isfinite(val) or val <= 0 or err > 1e-8 * val:
        raise QuadratureError(
            f"moment quadrature failed to converge (value {val}, error {err})")
    return k + math.log(val)


def _frozen_continuous(base):
    if isinstance(base, Gaussian):
        return stats.norm(base.mean, base.sd)
    if isinstance(base, Exponential):
        return stats.expon(scale=1.0 / base.rate)
    if isinstance(base, UniformInterval):
        return stats.uniform(base.lo, base.hi - base.lo)
    if isinstance(base, ChiSquared):
        return stats.chi2(base.dof)
    raise SpecError(f"no density available for {type(base).__name__}")


def _quantile_quad(integrand):
    """Integrate over the quantile domain (0,1) to relative tolerance 1e-10."""
    val, err = integrate.quad(integrand, 0.0, 1.0,
                              epsabs=0.0, epsrel=_QUAD_RTOL, limit=_QUAD_LIMIT)
    if not np.isfinite(val) or (abs(val) > 0 and err > 1e-8 * abs(val)):
        raise QuadratureError(
            f"quadrature failed to converge (value {val}, error {err})")
    return val


# ---------------------------------------------------------------------------
# Moment generating functions

def mgf(spec, beta: float) -> float:
    """E[exp(beta * X)], raising MomentDivergenceError if infinite."""
    validate(spec)
    return _mgf(spec, float(beta))


def _mgf(spec, beta):
    if beta == 0.0:
        return 1.0
    vp = finite_support(spec)
    if vp is not None:
        values, probs = vp
        m = np.max(beta * values)
        return float(math.exp(m) * np.dot(probs, np.exp(beta * values - m)))
    if isinstance(spec, Gaussian):
        return math.exp(beta * spec.mean + 0.5 * beta ** 2 * spec.sd ** 2)
    if isinstance(spec, Exponential):
        if beta >= spec.rate:
            raise MomentDivergenceError(
                f"MGF of Exponential(rate={spec.rate}) diverges at beta={beta}")
        return spec.rate / (spec.rate - beta)
    if isinstance(spec, UniformInterval):
        w = spec.hi - spec.lo
        return (math.exp(beta * spec.hi) - math.exp(beta * spec.lo)) / (beta * w)
    if isinstance(spec, Poisson):
        return math.exp(spec.rate * (math.exp(beta) - 1.0))
    if isinstance(spec, ChiSquared):
        if beta >= 0.5:
            raise MomentDivergenceError(
                f"MGF of ChiSquared diverges at beta={beta} >= 1/2")
        return (1.0 - 2.0 * beta) ** (-spec.dof / 2)
    if isinstance(spec, Shifted):
        return math.exp(beta * spec.offset) * _mgf(spec.base, beta)
    if isinstance(spec, Scaled):
        return _mgf(spec.base, beta * spec.factor)
    if isinstance(spec, Centered):
        return math.exp(-beta * _mean(spec.base)) * _mgf(spec.base, beta)
    if isinstance(spec, SquareOf):
        base = spec.base
        if isinstance(base, Gaussian) and base.mean == 0.0:
            if beta >= 1.0 / (2 * base.sd ** 2):
                raise MomentDivergenceError(
                    f"MGF of a squared Gaussian diverges at beta={beta}")
            return (1.0 - 2.0 * beta * base.sd ** 2) ** -0.5
        inner, fn = _transform_chain(base)
        if isinstance(inner, Poisson):
            return _poisson_series(inner.rate,
                                   lambda k: np.exp(beta * fn(k) ** 2))
        frozen = _frozen_continuous(inner)
        if beta > 0 and not isinstance(inner, UniformInterval):
            raise MomentDivergenceError(
                "MGF of a squared unbounded variable requires beta <= 0 "
                "unless a closed form is available")
        return _quantile_quad(lambda u: np.exp(beta * fn(frozen.ppf(u)) ** 2))
    raise SpecError(f"unknown spec type {type(spec).__name__}")


# ---------------------------------------------------------------------------
# Deterministic sampling

def _rng(seed: int, stream: int = 0) -> np.random.Generator:
    if not 0 <= seed < 2 ** 64:
        raise SpecError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.Philox(key=[seed, stream]))


def sample(spec, seed: int, count: int, stream: int = 0) -> np.ndarray:
    """Draw `count` iid values; bit-identical for equal (spec, seed, count, stream)."""
    validate(spec)
    if count < 1:
        raise SpecError(f"count must be >= 1, got {count}")
    if isinstance(spec, VectorSpec):
        return sample_vector(spec, seed, count, stream)
    return _draw(spec, _rng(seed, stream), count)


def sample_vector(vec: VectorSpec, seed: int, count: int, stream: int = 0) -> np.ndarray:
    """Sample a (count, dim) array with independent coordinates."""
    validate(vec)
    rng = _rng(seed, stream)
    cols = [_draw(c, rng, count) for c in vec.components]
    return np.column_stack(cols)


def _draw(spec, rng, count):
    if isinstance(spec, Gaussian):
        return rng.normal(spec.mean, spec.sd, count)
    if isinstance(spec, Exponential):
        return rng.exponential(1.0 / spec.rate, count)
    if isinstance(spec, Rademacher):
        return 2.0 * rng.integers(0, 2, count) - 1.0
    if isinstance(spec, UniformInterval):
        return rng.uniform(spec.lo, spec.hi, count)
    if isinstance(spec, Poisson):
        return rng.poisson(spec.rate, count).astype(float)
    if isinstance(spec, ChiSquared):
        return rng.chisquare(spec.dof, count)
    if isinstance(spec, TwoPointEps):
        u = rng.random(count)
        out = np.zeros(count)
        out[u < spec.eps / 2] = 1.0
        out[(u >= spec.eps / 2) & (u < spec.eps)] = -1.0
        return out
    if isinstance(spec, FiniteSupport):
        values = np.asarray(spec.values)
        probs = np.asarray(spec.probs, dtype=float)
        idx = rng.choice(len(values), size=count, p=probs / probs.sum())
        return values[idx]
    if isinstance(spec, Shifted):
        return _draw(spec.base, rng, count) + spec.offset
    if isinstance(spec, Scaled):
        return spec.factor * _draw(spec.base, rng, count)
    if isinstance(spec, SquareOf):
        return _draw(spec.base, rng, count) ** 2
    if isinstance(spec, Centered):
        return _draw(spec.base, rng, count) - _mean(spec.base)
    raise SpecError(f"unknown spec type {type(spec).__name__}")


# ---------------------------------------------------------------------------
# JSON serialization (the CLI's config vocabulary)

_KIND_NAMES = {
    Gaussian: "gaussian", Exponential: "exponential", Rademacher: "rademacher",
    UniformInterval: "uniform", Poisson: "poisson", ChiSquared: "chi_squared",
    TwoPointEps: "two_point_eps", FiniteSupport: "finite_support",
    Shifted: "shifted", Scaled: "scaled", SquareOf: "square_of",
    Centered: "centered",
}


def spec_to_dict(spec) -> dict:
    if isinstance(spec, VectorSpec):
        return {"kind": "vector", "dim": spec.dim,
                "components": [spec_to_dict(c) for c in spec.components],
                "norm_kind": spec.norm_kind}
    kind = _KIND_NAMES[type(spec)]
    d = {"kind": kind}
    if isinstance(spec, Gaussian):
        d.update(mean=spec.mean, sd=spec.sd)
    elif isinstance(spec, (Exponential, Poisson)):
        d.update(rate=spec.rate)
    elif isinstance(spec, UniformInterval):
        d.update(lo=spec.lo, hi=spec.hi)
    elif isinstance(spec, ChiSquared):
        d.update(dof=spec.dof)
    elif isinstance(spec, TwoPointEps):
        d.update(eps=spec.eps)
    elif isinstance(spec, FiniteSupport):
        d.update(values=list(spec.values), probs=list(spec.probs))
    elif isinstance(spec, Shifted):
        d.update(base=spec_to_dict(spec.base), offset=spec.offset)
    elif isinstance(spec, Scaled):
        d.update(base=spec_to_dict(spec.base), factor=spec.factor)
    elif isinstance(spec, (SquareOf, Centered)):
        d.update(base=spec_to_dict(spec.base))
    return d


def spec_from_dict(d: dict):
    if not isinstance(d, dict) or "kind" not in d:
        raise SpecError("spec object must be a dict with a 'kind' field")
    kind = d["kind"]
    try:
        if kind == "vector":
            return VectorSpec(d["dim"], [spec_from_dict(c) for c in d["components"]],
                              d.get("norm_kind", "euclidean"))
        if kind == "gaussian":
            return Gaussian(d.get("mean", 0.0), d.get("sd", 1.0))
        if kind == "exponential":
            return Exponential(d["rate"])
        if kind == "rademacher":
            return Rademacher()
        if kind == "uniform":
            return UniformInterval(d["lo"], d["hi"])
        if kind == "poisson":
            return Poisson(d["rate"])
        if kind == "chi_squared":
            return ChiSquared(d["dof"])
        if kind == "two_point_eps":
            return TwoPointEps(d["eps"])
        if kind == "finite_support":
            return FiniteSupport(d["values"], d["probs"])
        if kind == "shifted":
            return Shifted(spec_from_dict(d["base"]), d["offset"])
        if kind == "scaled":
            return Scaled(spec_from_dict(d["base"]), d["factor"])
        if kind == "square_of":
            return SquareOf(spec_from_dict(d["base"]))
        if kind == "centered":
            return Centered(spec_from_dict(d["base"]))
    except KeyError as exc:
        raise SpecError(f"spec kind {kind!r} is missing field {exc.args[0]!r}") from exc
    raise SpecError(f"unknown spec kind {kind!r}")
