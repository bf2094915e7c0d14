"""Deterministic numerical integration and sphere integrals.

Provides adaptive 1D quadrature on intervals (composite 15-node
Gauss-Legendre panels with bisection refinement), rigorous truncation of
half-line integrals from analytic envelopes, exact surface areas and
monomial moments of the unit sphere, and a seeded Monte Carlo sphere
integrator for exponents without a closed angular form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.special import roots_legendre

_NODES, _WEIGHTS = roots_legendre(15)


class QuadratureConvergenceError(RuntimeError):
    """Raised when a quadrature cannot meet the requested tolerance."""

    def __init__(self, message: str, estimate: float):
        super().__init__(f"{message} (achieved error estimate {estimate:.3e})")
        self.estimate = estimate


@dataclass(frozen=True)
class QuadResult:
    """Value of an integral together with its achieved error estimate."""

    value: float
    error_estimate: float
    subdivisions: int
    converged: bool = True


def _panel(g: Callable, a: float, b: float) -> float:
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return half * float(np.dot(_WEIGHTS, g(mid + half * _NODES)))


def rough_scale(g: Callable, a: float, b: float) -> float:
    """Single-panel estimate of the integral of |g|, for tolerance scaling."""
    return _panel(lambda x: np.abs(g(x)), a, b)


def composite_nodes(a: float, b: float, panels: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of a uniform composite 15-node Gauss-Legendre rule."""
    if panels < 1:
        raise ValueError("need at least one panel")
    edges = np.linspace(a, b, panels + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1] - edges[0])
    nodes = (mids[:, None] + half * _NODES[None, :]).ravel()
    weights = np.tile(half * _WEIGHTS, panels)
    return nodes, weights


def integrate_1d(
    g: Callable,
    a: float,
    b: float,
    tol: float = 1e-10,
    max_depth: int = 40,
) -> QuadResult:
    """Adaptive integral of g over [a, b] to absolute tolerance ``tol``.

    ``g`` must accept an ndarray of abscissae and return the values
    elementwise.  Panels are bisected until the coarse/fine discrepancy fits
    the panel's proportional share of ``tol`` (or the float64 noise floor of
    the panel values).  The returned ``error_estimate`` sums the accepted
    discrepancies, which conservatively bounds the true error for smooth
    integrands; ``converged`` is False if any panel hit ``max_depth`` or the
    total estimate exceeds ``tol``.
    """
    if not (math.isfinite(a) and math.isfinite(b) and a < b):
        raise ValueError(f"bad interval [{a}, {b}]")
    if tol <= 0:
        raise ValueError("tol must be > 0")
    span = b - a
    state = {"panels": 1, "depth_ok": True}

    def recurse(lo: float, hi: float, coarse: float, depth: int) -> tuple[float, float]:
        mid = 0.5 * (lo + hi)
        left = _panel(g, lo, mid)
        right = _panel(g, mid, hi)
        state["panels"] += 2
        fine = left + right
        err = abs(fine - coarse)
        noise = 5e-15 * (abs(left) + abs(right) + abs(coarse))
        if err <= tol * (hi - lo) / span or err <= noise:
            return fine, err
        if depth >= max_depth:
            state["depth_ok"] = False
            return fine, err
        v1, e1 = recurse(lo, mid, left, depth + 1)
        v2, e2 = recurse(mid, hi, right, depth + 1)
        return v1 + v2, e1 + e2

    value, err = recurse(a, b, _panel(g, a, b), 1)
    converged = state["depth_ok"] and err <= tol
    return QuadResult(value, err, state["panels"], converged)


def integrate_power_weight(
    g: Callable,
    gamma: float,
    upper: float,
    tol: float = 1e-10,
    max_depth: int = 40,
) -> QuadResult:
    """Integral of x^gamma * g(x) over (0, upper) for gamma > -1.

    Fractional weights are regularised by the substitution x = u^m (m chosen
    so the transformed exponent is nonnegative, m = 2 whenever 2*gamma is an
    integer), after which the integrand is continuous at 0 and plain
    adaptive quadrature applies.
    """
    if gamma <= -1:
        raise ValueError(f"weight exponent must be > -1, got {gamma}")
    if upper <= 0:
        raise ValueError("upper limit must be > 0")
    if gamma == int(gamma) and gamma >= 0:
        gi = int(gamma)
        return integrate_1d(lambda x: x**gi * g(x) if gi else g(x), 0.0, upper, tol, max_depth)
    if 2 * gamma == int(2 * gamma):
        m = 2
    else:
        m = max(2, math.ceil(1.0 / (gamma + 1.0)))
    expo = m * gamma + m - 1  # >= 0 by choice of m

    def substituted(u):
        return m * u**expo * g(u**m)

    return integrate_1d(substituted, 0.0, upper ** (1.0 / m), tol, max_depth)


def truncation_point(
    tol: float,
    rate: float,
    env_coeff: float,
    env_power: int,
    decay: str = "gauss",
) -> tuple[float, float]:
    """Truncation point T and tail bound for a dominated half-line integrand.

    The integrand is assumed bounded by env_coeff * (1 + u^env_power) * E(u)
    with E(u) = exp(-rate * u^2) ("gauss") or exp(-rate * u) ("exp"),
    rate > 0.  Returns (T, tail) with the analytic tail bound tail <= tol / 2.
    """
    if rate <= 0:
        raise ValueError("decay rate must be > 0")
    if env_coeff < 0:
        raise ValueError("envelope coefficient must be >= 0")
    half = rate / 2.0
    if decay == "gauss":
        # int_T^inf u^M e^{-r u^2} du <= e^{-r T^2 / 2} * (1/2) Gamma((M+1)/2) / (r/2)^((M+1)/2)
        k0 = 0.5 * math.gamma(0.5) / half**0.5
        km = 0.5 * math.gamma((env_power + 1) / 2.0) / half ** ((env_power + 1) / 2.0)
    elif decay == "exp":
        k0 = 1.0 / half
        km = math.gamma(env_power + 1.0) / half ** (env_power + 1)
    else:
        raise ValueError(f"unknown decay kind {decay!r}")
    K = env_coeff * (k0 + km)
    bound = tol / 2.0
    if K <= bound or env_coeff == 0:
        return 1.0, min(K, bound)
    if decay == "gauss":
        T = math.sqrt(2.0 * math.log(K / bound) / rate)
    else:
        T = 2.0 * math.log(K / bound) / rate
    T = max(T, 1.0)
    tail = K * math.exp(-half * T * T) if decay == "gauss" else K * math.exp(-half * T)
    return T, tail


def integrate_halfline(
    g: Callable,
    tol: float,
    rate: float,
    env_coeff: float = 1.0,
    env_power: int = 0,
    decay: str = "gauss",
    weight_gamma: float = 0.0,
) -> QuadResult:
    """Integral of x^weight_gamma * g(x) over (0, infinity).

    ``g`` must be dominated by env_coeff * (1 + x^env_power) * E(x) with the
    decay kind and rate of :func:`truncation_point`; the weight exponent is
    folded into the envelope when choosing the truncation point.  The tail
    bound is added to the reported error estimate.
    """
    power = env_power + max(0, math.ceil(weight_gamma))
    T, tail = truncation_point(tol, rate, env_coeff, power, decay)
    if weight_gamma:
        res = integrate_power_weight(g, weight_gamma, T, tol / 2.0)
    else:
        res = integrate_1d(g, 0.0, T, tol / 2.0)
    err = res.error_estimate + tail
    return QuadResult(res.value, err, res.subdivisions, res.converged and err <= tol)


# ---------------------------------------------------------------------------
# Sphere integrals
# ---------------------------------------------------------------------------

def sphere_area(d: int) -> float:
    """Surface area of the unit sphere in R^d: 2 pi^(d/2) / Gamma(d/2)."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


@lru_cache(maxsize=None)
def sphere_monomial_moment(d: int, beta: tuple[int, ...]) -> float:
    """Surface integral of omega^beta over the unit sphere in R^d.

    Zero when any exponent is odd; otherwise
    2 * prod_i Gamma((beta_i + 1)/2) / Gamma((|beta| + d)/2).
    """
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    if len(beta) != d:
        raise ValueError(f"exponent tuple must have {d} entries, got {len(beta)}")
    if any(b < 0 for b in beta):
        raise ValueError("exponents must be >= 0")
    if any(b % 2 for b in beta):
        return 0.0
    num = 1.0
    for b in beta:
        num *= math.gamma((b + 1) / 2.0)
    return 2.0 * num / math.gamma((sum(beta) + d) / 2.0)


@dataclass(frozen=True)
class SphereSampler:
    """Reproducible uniform samples on the unit sphere in R^d.

    Identical (d, seed, n) always produce the identical sample array;
    points are normalised standard Gaussian vectors.
    """

    d: int
    seed: int
    n: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"dimension must be >= 2, got {self.d}")
        if self.n < 0:
            raise ValueError("sample count must be >= 0")

    @cached_property
    def points(self) -> np.ndarray:
        rng = np.random.default_rng(self.seed)
        z = rng.standard_normal((self.n, self.d))
        norms = np.linalg.norm(z, axis=1, keepdims=True)
        pts = z / norms
        pts.flags.writeable = False
        return pts

    def substream(self, task_index: int) -> "SphereSampler":
        """Deterministic independent sampler for a parallel sub-task."""
        derived = int(np.random.SeedSequence([self.seed, task_index]).generate_state(1)[0])
        return replace(self, seed=derived)


def mc_sphere_integral(g: Callable, sampler: SphereSampler) -> QuadResult:
    """Monte Carlo surface integral of g over the unit sphere.

    Returns |S^(d-1)| times the sample mean of g, with the standard error of
    the mean (scaled by the area) as error estimate.
    """
    if sampler.n == 0:
        raise ValueError("sample count must be > 0")
    area = sphere_area(sampler.d)
    vals = np.asarray(g(sampler.points), dtype=float)
    if vals.shape != (sampler.n,):
        raise ValueError(f"integrand must return {sampler.n} values, got shape {vals.shape}")
    mean = float(vals.mean())
    se = float(vals.std(ddof=1) / math.sqrt(sampler.n)) if sampler.n > 1 else math.inf
    return QuadResult(area * mean, area * se, 0, True)
