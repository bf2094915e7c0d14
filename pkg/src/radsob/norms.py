"""Sobolev norms of radial fields by every route, plus inequality checks.

Routes implemented for a radial field f(|x|) on the ball of radius r (or on
all of space, with decaying profiles):

* ``def``      -- the d-dimensional definition, summing L^p norms of all
                  partial derivatives up to order k.  For p = 2 the angular
                  integrals reduce to exact sphere monomial moments; for
                  general p a seeded Monte Carlo sphere average is used.
* ``D``        -- weighted 1D norms of powers of the radial derivation
                  applied to the profile, on (0, r).
* ``squared``  -- weighted 1D norms of derivatives of the squared-argument
                  profile, on (0, r^2).

The module also provides weighted Hardy-type inequality checks with the
explicit constants p/(ps+1) and 2^(p-1)(s+1)^p, boundary-value estimates,
and norms of corotational maps F_i(x) = x_i f(|x|) together with their
radial comparison norm in dimension d + 2.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field as dataclass_field
from functools import lru_cache
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.optimize import brentq

from .derivcalc import forward_terms
from .indexpoly import MonomialPoly, MultiIndex, enumerate_multi
from .profile import CorpusEntry, Profile, RadialField, SquaredProfile, d_op, to_squared
from .quad import (
    QuadResult,
    composite_nodes,
    integrate_1d,
    integrate_halfline,
    integrate_power_weight,
    rough_scale,
    sphere_area,
    sphere_monomial_moment,
    truncation_point,
    SphereSampler,
)

DEFAULT_SEED = 20240001
DEFAULT_SAMPLES = 200_000

_MC_FINE_PANELS = 32
_MC_COARSE_PANELS = 12
_TINY = 1e-60


class NormValue(NamedTuple):
    """A computed norm with its total error estimate and Monte Carlo part."""

    value: float
    err: float
    mc_se: float = 0.0


@dataclass(frozen=True)
class WeightFamily:
    """Weight exponents of the two profile routes for given (d, k, p).

    Route D uses the exponent (d-1)/p + j on (0, r); the squared route uses
    (d-2)/(2p) + j/2 on (0, r^2), equivalently the weight s^((d-2+pj)/2)
    inside the p-th power.  All exponents are >= 0 for d >= 2, p >= 1.
    """

    d: int
    k: int
    p: float

    def __post_init__(self):
        if self.d < 2 or self.k < 0 or self.p < 1:
            raise ValueError(f"invalid weight family (d={self.d}, k={self.k}, p={self.p})")

    def route_d_exponent(self, j: int) -> float:
        return (self.d - 1) / self.p + j

    def route_squared_exponent(self, j: int) -> float:
        return (self.d - 2) / (2 * self.p) + j / 2

    def weight_exponent(self, j: int) -> float:
        return (self.d - 2 + self.p * j) / 2


class CorotField:
    """A corotational map F(x) = (x_1 f(|x|), ..., x_d f(|x|))."""

    __slots__ = ("d", "profile")

    def __init__(self, d: int, profile: Profile):
        if d < 2:
            raise ValueError(f"dimension must be >= 2, got {d}")
        if not profile.is_even:
            raise ValueError("corotational maps require an even profile")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "profile", profile)

    def __setattr__(self, name, value):
        raise AttributeError("CorotField is immutable")

    def eval(self, x) -> np.ndarray:
        pt = np.asarray(x, dtype=float)
        if pt.shape != (self.d,):
            raise ValueError(f"expected a point in R^{self.d}")
        return pt * self.profile.eval(float(np.linalg.norm(pt)))


# ---------------------------------------------------------------------------
# Shared integration helpers
# ---------------------------------------------------------------------------

def _gauss_envelope(prof, p: float = 1.0, extra_power: float = 0.0) -> tuple[float, int, float]:
    """(coeff, power, rate) dominating x^extra_power * |prof(x)|^p.

    The bound is coeff * (1 + x^power) * exp(-rate * x^2) for profiles in
    rho, or exp(-rate * x) for squared-argument profiles; rate comes from the
    smallest decay in the term list and must be positive for half-line use.
    """
    if prof.is_zero:
        return 0.0, 0, math.inf
    c = float(prof.coeff_abs_sum) ** p * 2 ** max(p - 1.0, 0.0)
    power = math.ceil(prof.max_power * p + max(extra_power, 0.0))
    rate = p * float(prof.min_decay)
    return c, power, rate


def _decay_kind(prof) -> str:
    return "exp" if isinstance(prof, SquaredProfile) else "gauss"


def _is_even_power(p: float) -> bool:
    return p == int(p) and int(p) % 2 == 0


@lru_cache(maxsize=8192)
def _sign_changes(prof, upper: float) -> tuple[float, ...]:
    """Interior sign changes of a term-list function on (0, upper).

    These are exactly the kink locations of |prof|^p for odd or fractional p;
    splitting the integration interval there keeps every piece smooth, which
    the two-level panel error estimator needs (at a kink the coarse and fine
    panel errors can coincide and hide a large true error).
    """
    xs = np.linspace(0.0, upper, 513)
    vals = np.asarray(prof.eval(xs), dtype=float)
    out: list[float] = []
    for i in range(len(xs) - 1):
        v0, v1 = vals[i], vals[i + 1]
        if v0 == 0.0:
            if xs[i] > 0.0:
                out.append(float(xs[i]))
            continue
        if v0 * v1 < 0.0:
            out.append(float(brentq(prof.eval, xs[i], xs[i + 1], xtol=1e-15)))
    return tuple(out)


def _piecewise_weighted(
    core: Callable,
    gamma: float,
    upper: float,
    abs_tol: float,
    kinks: Sequence[float],
) -> QuadResult:
    """Integral of x^gamma * core(x) over (0, upper), split at the kinks."""
    edges = [0.0] + [k for k in kinks if 0.0 < k < upper] + [upper]
    total = 0.0
    err = 0.0
    panels = 0
    converged = True
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi - lo <= 1e-15 * upper:
            continue
        piece_tol = abs_tol * (hi - lo) / upper
        if lo == 0.0:
            res = integrate_power_weight(core, gamma, hi, piece_tol)
        elif gamma == 0.0:
            res = integrate_1d(core, lo, hi, piece_tol)
        else:
            res = integrate_1d(lambda x: x**gamma * core(x), lo, hi, piece_tol)
        total += res.value
        err += res.error_estimate
        panels += res.subdivisions
        converged = converged and res.converged
    return QuadResult(total, err, panels, converged)


def _weighted_lp_power(
    prof,
    p: float,
    gamma: float,
    upper: float,
    rel_tol: float,
) -> QuadResult:
    """Integral of x^gamma |prof(x)|^p over (0, upper), upper may be inf."""
    if prof.is_zero:
        return QuadResult(0.0, 0.0, 0, True)

    def core(x):
        return np.abs(prof.eval(x)) ** p

    tail = 0.0
    if math.isinf(upper):
        coeff, power, rate = _gauss_envelope(prof, p)
        if rate <= 0:
            raise ValueError("half-line integration requires a decaying profile")
        kind = _decay_kind(prof)
        ueff, tail = truncation_point(
            1e-14
            * max(
                rough_scale(lambda x: x ** max(gamma, 0.0) * core(x), 0.0, 2.0), 1e-10
            ),
            rate,
            coeff,
            power + max(0, math.ceil(gamma)),
            kind,
        )
    else:
        ueff = upper
    scale = max(
        rough_scale(lambda x: x ** max(gamma, 0.0) * core(x), 0.0, ueff),
        rough_scale(lambda x: x ** max(gamma, 0.0) * core(x), 0.0, max(ueff / 4.0, ueff * 0.1)),
        _TINY,
    )
    kinks = () if _is_even_power(p) else _sign_changes(prof, ueff)
    res = _piecewise_weighted(core, gamma, ueff, rel_tol * scale, kinks)
    return QuadResult(res.value, res.error_estimate + tail, res.subdivisions, res.converged)


def _radial_pair_integral(prod: Profile, mexp: int, r: float, rel_tol: float) -> QuadResult:
    """Integral of rho^mexp * prod(rho) over (0, r), r may be inf; mexp >= 0 integer."""
    if prod.is_zero:
        return QuadResult(0.0, 0.0, 0, True)

    def integrand(rho):
        return rho**mexp * prod.eval(rho)

    if math.isinf(r):
        coeff, power, rate = _gauss_envelope(prod, 1.0, mexp)
        if rate <= 0:
            raise ValueError("half-line integration requires a decaying profile")
        t_probe, _ = truncation_point(1e-8, rate, max(coeff, 1.0), power, "gauss")
        scale = max(
            rough_scale(integrand, 0.0, t_probe),
            rough_scale(integrand, 0.0, max(t_probe / 4.0, 0.5)),
            _TINY,
        )
        return integrate_halfline(integrand, rel_tol * scale, rate, coeff, power, "gauss")
    scale = max(rough_scale(integrand, 0.0, r), _TINY)
    return integrate_1d(integrand, 0.0, r, rel_tol * scale)


# ---------------------------------------------------------------------------
# Expansion of partial derivatives into polynomial x profile terms
# ---------------------------------------------------------------------------

class PolyProfileTerm(NamedTuple):
    """One summand poly(x) * radial(|x|) with ``poly`` homogeneous of ``degree``."""

    poly: MonomialPoly
    radial: Profile
    degree: int


def _alpha_terms(d: int, alpha: MultiIndex, f: Profile) -> list[PolyProfileTerm]:
    """Expansion of d^alpha f(|x|) as a list of polynomial x profile terms."""
    out = []
    for j, poly in forward_terms(d, tuple(alpha)):
        out.append(PolyProfileTerm(poly, d_op(f, j), poly.homogeneous_degree()))
    return out


def _corot_alpha_terms(d: int, alpha: MultiIndex, i: int, f: Profile) -> list[PolyProfileTerm]:
    """Expansion of d^alpha F_i for F_i(x) = x_i f(|x|).

    The product rule leaves exactly two groups: x_i times the expansion of
    d^alpha f(|x|), and alpha_i times the expansion of the derivative with
    one x_i-derivative removed.
    """
    xi = MonomialPoly.variable(d, i)
    out = []
    for term in _alpha_terms(d, alpha, f):
        out.append(PolyProfileTerm(xi * term.poly, term.radial, term.degree + 1))
    ai = alpha[i - 1]
    if ai >= 1:
        beta = tuple(a - 1 if idx == i - 1 else a for idx, a in enumerate(alpha))
        for term in _alpha_terms(d, beta, f):
            out.append(PolyProfileTerm(ai * term.poly, term.radial, term.degree))
    return out


def _pair_l2_square(
    d: int, terms: Sequence[PolyProfileTerm], r: float, rel_tol: float
) -> tuple[float, float]:
    """Squared L^2 norm over the ball (or space) of sum_t poly_t(x) radial_t(|x|).

    Expands the square, integrates each angular polynomial factor by exact
    sphere moments and each radial factor by adaptive quadrature.
    """
    total = 0.0
    err = 0.0
    for a in range(len(terms)):
        for b in range(a, len(terms)):
            t, u = terms[a], terms[b]
            prodpoly = t.poly * u.poly
            mom = 0.0
            for beta, c in prodpoly.coeffs.items():
                mom += float(c) * sphere_monomial_moment(d, beta)
            if mom == 0.0:
                continue
            sym = 1.0 if a == b else 2.0
            res = _radial_pair_integral(t.radial * u.radial, t.degree + u.degree + d - 1, r, rel_tol)
            total += sym * mom * res.value
            err += sym * abs(mom) * res.error_estimate
    return total, err


# ---------------------------------------------------------------------------
# The d-dimensional definition route
# ---------------------------------------------------------------------------

def _ball_def_exact(
    field: RadialField, orders: Sequence[int], p: float, r: float, rel_tol: float
) -> NormValue:
    d = field.d
    f = field.profile
    if p == 2:
        total = 0.0
        err = 0.0
        for n in orders:
            for alpha in enumerate_multi(d, n):
                v, e = _pair_l2_square(d, _alpha_terms(d, alpha, f), r, rel_tol)
                total += v
                err += e
        total = max(total, 0.0)
        value = math.sqrt(total)
        return NormValue(value, err / (2 * value) if value > 0 else math.sqrt(err), 0.0)
    if list(orders) == [0]:
        # order zero is the plain L^p norm: the angular integral is exact for any p
        res = _weighted_lp_power(f, p, d - 1, r, rel_tol)
        powsum = sphere_area(d) * res.value
        value = max(powsum, 0.0) ** (1.0 / p)
        err = sphere_area(d) * res.error_estimate
        return NormValue(value, err * value / (p * powsum) if powsum > 0 else err ** (1.0 / p), 0.0)
    raise ValueError("the exact-angular method requires p = 2 (or order k = 0)")


def _mc_accumulate(
    terms: Sequence[PolyProfileTerm],
    V: np.ndarray,
    nodes: np.ndarray,
    weights: np.ndarray,
    d: int,
    p: float,
) -> np.ndarray:
    """Per-sample radial integrals of rho^(d-1) |sum_t s_t(rho) V_t|^p."""
    acc = np.zeros(V.shape[1])
    block = 64
    for start in range(0, len(nodes), block):
        nd = nodes[start : start + block]
        wt = weights[start : start + block]
        S = np.empty((len(nd), len(terms)))
        for t_i, t in enumerate(terms):
            col = t.radial.eval(nd)
            if t.degree:
                col = col * nd**t.degree
            S[:, t_i] = col
        U = S @ V
        np.abs(U, out=U)
        U **= p
        acc += (wt * nd ** (d - 1)) @ U
    return acc


def _ball_def_mc(
    field: RadialField,
    orders: Sequence[int],
    p: float,
    r: float,
    seed: int,
    samples: int,
    rel_tol: float,
) -> NormValue:
    d = field.d
    f = field.profile
    if samples < 2:
        raise ValueError("Monte Carlo needs at least 2 samples")
    sampler = SphereSampler(d, seed, samples)
    pts = sampler.points

    all_terms: list[list[PolyProfileTerm]] = []
    for n in orders:
        for alpha in enumerate_multi(d, n):
            all_terms.append(_alpha_terms(d, alpha, f))

    tail_total = 0.0
    if math.isinf(r):
        R = 1.0
        for terms in all_terms:
            live = [t for t in terms if not t.radial.is_zero]
            if not live:
                continue
            chat = 2.0 * sum(float(t.radial.coeff_abs_sum) for t in live)
            ahat = max(t.radial.max_power + t.degree for t in live)
            bhat = min(float(t.radial.min_decay) for t in live)
            if bhat <= 0:
                raise ValueError("half-line integration requires a decaying profile")
            coeff = chat**p * 2 ** max(p - 1.0, 0.0)
            power = math.ceil(ahat * p) + d - 1
            T, tail = truncation_point(1e-10 * (1.0 + coeff), p * bhat, coeff, power, "gauss")
            R = max(R, T)
            tail_total += tail
    else:
        R = r

    fine = composite_nodes(0.0, R, _MC_FINE_PANELS)
    coarse = composite_nodes(0.0, R, _MC_COARSE_PANELS)
    acc = np.zeros(samples)
    quad_err = tail_total
    for terms in all_terms:
        live = [t for t in terms if not t.radial.is_zero]
        if not live:
            continue
        V = np.stack([t.poly.eval_many(pts) for t in live])
        acc_alpha = _mc_accumulate(live, V, fine[0], fine[1], d, p)
        acc_coarse = _mc_accumulate(live, V, coarse[0], coarse[1], d, p)
        quad_err += abs(float(acc_alpha.mean()) - float(acc_coarse.mean()))
        acc += acc_alpha

    area = sphere_area(d)
    pow_mean = area * float(acc.mean())
    se_pow = area * float(acc.std(ddof=1)) / math.sqrt(samples)
    quad_pow = area * quad_err
    if pow_mean <= 0:
        return NormValue(0.0, (se_pow + quad_pow) ** (1.0 / p), se_pow ** (1.0 / p))
    value = pow_mean ** (1.0 / p)
    scale = value / (p * pow_mean)
    return NormValue(value, (se_pow + quad_pow) * scale, se_pow * scale)


def _ball_def_detail(
    field: RadialField,
    orders: Sequence[int],
    p: float,
    r: float,
    method: str,
    seed: int,
    samples: int,
    rel_tol: float,
) -> NormValue:
    if method == "exact-angular":
        return _ball_def_exact(field, orders, p, r, rel_tol)
    if method == "monte-carlo":
        return _ball_def_mc(field, orders, p, r, seed, samples, rel_tol)
    raise ValueError(f"unknown method {method!r}")


def sobolev_ball_definition(
    field: RadialField,
    k: int,
    p: float,
    r: float,
    method: str = "exact-angular",
    seed: int = DEFAULT_SEED,
    samples: int = DEFAULT_SAMPLES,
    tol: float = 1e-10,
) -> float:
    """Sobolev norm of order k by the d-dimensional definition.

    ``method="exact-angular"`` (p = 2, or k = 0 for any p) integrates the
    angular polynomial factors by exact sphere moments; ``"monte-carlo"``
    handles any p >= 1 with a seeded sphere sample.  ``r`` may be
    ``math.inf`` for decaying profiles.
    """
    if k < 0 or p < 1 or (not math.isinf(r) and r <= 0):
        raise ValueError("need k >= 0, p >= 1, r > 0")
    return _ball_def_detail(field, range(k + 1), p, r, method, seed, samples, tol).value


# ---------------------------------------------------------------------------
# The two profile routes
# ---------------------------------------------------------------------------

def _aggregate(pieces: list[QuadResult], p: float, aggregation: str) -> NormValue:
    if aggregation == "p-power":
        powsum = sum(max(res.value, 0.0) for res in pieces)
        err_pow = sum(res.error_estimate for res in pieces)
        value = powsum ** (1.0 / p)
        err = err_pow * value / (p * powsum) if powsum > 0 else err_pow ** (1.0 / p)
        return NormValue(value, err, 0.0)
    if aggregation == "sum-of-norms":
        value = 0.0
        err = 0.0
        for res in pieces:
            piece_pow = max(res.value, 0.0)
            piece = piece_pow ** (1.0 / p)
            value += piece
            err += (
                res.error_estimate * piece / (p * piece_pow)
                if piece_pow > 0
                else res.error_estimate ** (1.0 / p)
            )
        return NormValue(value, err, 0.0)
    raise ValueError(f"unknown aggregation {aggregation!r}")


def _profile_d_detail(
    f: Profile, d: int, k: int, p: float, r: float, aggregation: str, rel_tol: float
) -> NormValue:
    wf = WeightFamily(d, k, p)
    pieces = []
    for j in range(k + 1):
        g = d_op(f, j)
        gamma = wf.route_d_exponent(j) * p  # = d - 1 + j p
        pieces.append(_weighted_lp_power(g, p, gamma, r, rel_tol))
    return _aggregate(pieces, p, aggregation)


def sobolev_profile_D(
    f: Profile,
    d: int,
    k: int,
    p: float,
    r: float,
    aggregation: str = "sum-of-norms",
    tol: float = 1e-10,
) -> float:
    """Weighted norms of radial-derivation powers of the profile on (0, r).

    The j-th summand is the L^p(0, r) norm of rho^((d-1)/p + j) (D^j f)(rho);
    ``aggregation`` selects the plain sum of norms or the (sum of p-th
    powers)^(1/p) form.  No sphere-area factor is included.  ``r`` may be
    ``math.inf`` for decaying profiles.
    """
    if not f.is_even:
        raise ValueError("requires an even profile")
    return _profile_d_detail(f, d, k, p, r, aggregation, tol).value


def _profile_squared_detail(
    ft: SquaredProfile,
    d: int,
    k: int,
    p: float,
    r_squared: float,
    aggregation: str,
    rel_tol: float,
) -> NormValue:
    wf = WeightFamily(d, k, p)
    pieces = []
    for j in range(k + 1):
        g = ft.derivative(j)
        gamma = wf.route_squared_exponent(j) * p  # = (d - 2 + j p) / 2
        pieces.append(_weighted_lp_power(g, p, gamma, r_squared, rel_tol))
    return _aggregate(pieces, p, aggregation)


def sobolev_profile_squared(
    ft: SquaredProfile,
    d: int,
    k: int,
    p: float,
    r_squared: float,
    aggregation: str = "sum-of-norms",
    tol: float = 1e-10,
) -> float:
    """Weighted norms of derivatives of the squared-argument profile on (0, r^2).

    The j-th summand is the L^p(0, r^2) norm of s^((d-2)/(2p) + j/2) f~^(j)(s).
    ``r_squared`` may be ``math.inf`` for decaying profiles.
    """
    return _profile_squared_detail(ft, d, k, p, r_squared, aggregation, tol).value


# ---------------------------------------------------------------------------
# L^p identity and homogeneous norms
# ---------------------------------------------------------------------------

class LpDetail(NamedTuple):
    value_def: NormValue
    value_D: NormValue
    value_squared: NormValue


def _lp_detail(field: RadialField, p: float, r: float, rel_tol: float) -> LpDetail:
    d = field.d
    f = field.profile
    area = sphere_area(d)

    # definition route: |S^(d-1)| int rho^(d-1) |f|^p
    res_def = _weighted_lp_power(f, p, d - 1, r, rel_tol)
    pow_def = area * res_def.value
    v_def = max(pow_def, 0.0) ** (1.0 / p)
    e_def = area * res_def.error_estimate * (v_def / (p * pow_def) if pow_def > 0 else 1.0)

    # radial-weight route: same identity written as a weighted 1D norm of f
    e = (d - 1) / p

    def integrand_d(rho):
        return (rho**e * np.abs(f.eval(rho))) ** p

    if f.is_zero:
        res_D = QuadResult(0.0, 0.0, 0, True)
    else:
        tail = 0.0
        if math.isinf(r):
            coeff, power, rate = _gauss_envelope(f, p, 0.0)
            if rate <= 0:
                raise ValueError("half-line integration requires a decaying profile")
            ueff, tail = truncation_point(
                1e-14 * max(rough_scale(integrand_d, 0.0, 2.0), 1e-10),
                rate,
                coeff,
                power + d - 1,
                "gauss",
            )
        else:
            ueff = r
        scale = max(
            rough_scale(integrand_d, 0.0, ueff),
            rough_scale(integrand_d, 0.0, ueff / 4.0),
            _TINY,
        )
        kinks = () if _is_even_power(p) else _sign_changes(f, ueff)
        res_D = _piecewise_weighted(integrand_d, 0.0, ueff, rel_tol * scale, kinks)
        res_D = QuadResult(
            res_D.value, res_D.error_estimate + tail, res_D.subdivisions, res_D.converged
        )
    pow_D = area * res_D.value
    v_D = max(pow_D, 0.0) ** (1.0 / p)
    e_D = area * res_D.error_estimate * (v_D / (p * pow_D) if pow_D > 0 else 1.0)

    # squared-argument route on (0, r^2)
    ft = to_squared(f)
    res_sq = _weighted_lp_power(ft, p, (d - 2) / 2.0, math.inf if math.isinf(r) else r * r, rel_tol)
    pow_sq = (area / 2.0) * res_sq.value
    v_sq = max(pow_sq, 0.0) ** (1.0 / p)
    e_sq = (area / 2.0) * res_sq.error_estimate * (v_sq / (p * pow_sq) if pow_sq > 0 else 1.0)

    return LpDetail(
        NormValue(v_def, e_def), NormValue(v_D, e_D), NormValue(v_sq, e_sq)
    )


def lp_radial(
    field: RadialField, p: float, r: float, tol: float = 1e-12
) -> tuple[float, float, float]:
    """The L^p norm of the field by its three equal-by-identity routes.

    Returns (value_def, value_D, value_squared); all three carry the exact
    sphere-area constants of the identity, so they agree up to the combined
    quadrature error, not merely up to equivalence.
    """
    if p < 1 or (not math.isinf(r) and r <= 0):
        raise ValueError("need p >= 1 and r > 0")
    detail = _lp_detail(field, p, r, tol)
    return (detail.value_def.value, detail.value_D.value, detail.value_squared.value)


def _homogeneous_detail(
    f: Profile,
    d: int,
    k: int,
    p: float,
    method: str,
    seed: int,
    samples: int,
    rel_tol: float,
) -> LpDetail:
    if not f.is_zero and not (f.min_decay and f.min_decay > 0):
        raise ValueError("homogeneous norms require strictly positive decay in every term")
    area = sphere_area(d)
    field = RadialField(d, f)
    v_def = _ball_def_detail(field, [k], p, math.inf, method, seed, samples, rel_tol)

    g = d_op(f, k)
    res_D = _weighted_lp_power(g, p, d - 1 + k * p, math.inf, rel_tol)
    pow_D = area * res_D.value
    vD = max(pow_D, 0.0) ** (1.0 / p)
    eD = area * res_D.error_estimate * (vD / (p * pow_D) if pow_D > 0 else 1.0)

    gt = to_squared(f).derivative(k)
    res_sq = _weighted_lp_power(gt, p, (d - 2 + k * p) / 2.0, math.inf, rel_tol)
    pow_sq = (area / 2.0) * res_sq.value
    vsq = max(pow_sq, 0.0) ** (1.0 / p)
    esq = (area / 2.0) * res_sq.error_estimate * (vsq / (p * pow_sq) if pow_sq > 0 else 1.0)

    return LpDetail(v_def, NormValue(vD, eD), NormValue(vsq, esq))


def homogeneous_norm(
    f: Profile | RadialField,
    d: int,
    k: int,
    p: float,
    method: str = "exact-angular",
    seed: int = DEFAULT_SEED,
    samples: int = DEFAULT_SAMPLES,
    tol: float = 1e-10,
) -> tuple[float, float, float]:
    """Top-order norms over all of space, by the three routes.

    Returns (value_def_k_only, value_D, value_squared).  The definition
    route sums only the derivatives of order exactly k; the 1D routes carry
    the sphere-area constants, so at k = 0 all three coincide exactly.
    Requires every profile term to decay.
    """
    prof = f.profile if isinstance(f, RadialField) else f
    detail = _homogeneous_detail(prof, d, k, p, method, seed, samples, tol)
    return (detail.value_def.value, detail.value_D.value, detail.value_squared.value)


# ---------------------------------------------------------------------------
# Hardy-type inequality checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InequalityReport:
    """One evaluated weighted inequality: rhs terms, slack = rhs - lhs."""

    name: str
    p: float
    r: float
    s: float
    lhs: float
    terms: tuple[float, ...]
    rhs: float
    slack: float
    quad_err: float


def _check_hardy_params(p: float, s: float, r: float) -> None:
    if p < 1:
        raise ValueError(f"need p >= 1, got {p}")
    if s <= -1.0 / p:
        raise ValueError(f"need s > -1/p = {-1.0 / p}, got {s}")
    if not math.isinf(r) and r <= 0:
        raise ValueError(f"need r > 0, got {r}")


def hardy_check(f, p: float, r: float, s: float, tol: float = 1e-12) -> InequalityReport:
    """Check the weighted Hardy inequality with its explicit constants.

    Interval form (finite r, any C^1 function in the term class):

        int_0^r x^(ps) |f|^p <= (p/(ps+1)) r^(ps+1) |f(r)|^p
                                + (p/(ps+1))^p int_0^r x^(p(s+1)) |f'|^p

    Passing r = math.inf selects the boundary-free half-line variant, which
    requires a decaying function.  ``f`` may be a Profile or a
    SquaredProfile.  Returns the evaluated sides; slack >= 0 up to
    quadrature error.
    """
    _check_hardy_params(p, s, r)
    const = p / (p * s + 1.0)
    fp = f.derivative()
    lhs_res = _weighted_lp_power(f, p, p * s, r, tol)
    grad_res = _weighted_lp_power(fp, p, p * (s + 1.0), r, tol)
    if math.isinf(r):
        boundary = 0.0
        variant = "hardy-halfline"
    else:
        boundary = const * r ** (p * s + 1.0) * abs(f.eval(r)) ** p
        variant = "hardy-interval"
    gradient = const**p * grad_res.value
    rhs = boundary + gradient
    return InequalityReport(
        name=variant,
        p=p,
        r=r,
        s=s,
        lhs=lhs_res.value,
        terms=(boundary, gradient),
        rhs=rhs,
        slack=rhs - lhs_res.value,
        quad_err=lhs_res.error_estimate + const**p * grad_res.error_estimate,
    )


def boundary_check(f, p: float, r: float, s: float, tol: float = 1e-12) -> InequalityReport:
    """Check the boundary-value estimate with its explicit constants.

        |f(r)|^p <= (2^(p-1) (s+1)^p / r^(ps+1)) int_0^r x^(ps) |f|^p
                    + (2^(p-1) / r^(ps+1)) int_0^r x^(p(s+1)) |f'|^p
    """
    _check_hardy_params(p, s, r)
    if math.isinf(r):
        raise ValueError("the boundary estimate needs a finite radius")
    fp = f.derivative()
    zeroth_res = _weighted_lp_power(f, p, p * s, r, tol)
    grad_res = _weighted_lp_power(fp, p, p * (s + 1.0), r, tol)
    front = 2.0 ** (p - 1.0) / r ** (p * s + 1.0)
    zeroth = front * (s + 1.0) ** p * zeroth_res.value
    gradient = front * grad_res.value
    lhs = abs(f.eval(r)) ** p
    rhs = zeroth + gradient
    return InequalityReport(
        name="boundary",
        p=p,
        r=r,
        s=s,
        lhs=lhs,
        terms=(zeroth, gradient),
        rhs=rhs,
        slack=rhs - lhs,
        quad_err=front * ((s + 1.0) ** p * zeroth_res.error_estimate + grad_res.error_estimate),
    )


# ---------------------------------------------------------------------------
# Corotational maps
# ---------------------------------------------------------------------------

def _corot_lhs_detail(F: CorotField, k: int, r: float, rel_tol: float) -> NormValue:
    d = F.d
    f = F.profile
    total = 0.0
    err = 0.0
    for n in range(k + 1):
        for alpha in enumerate_multi(d, n):
            for i in range(1, d + 1):
                v, e = _pair_l2_square(d, _corot_alpha_terms(d, alpha, i, f), r, rel_tol)
                total += v
                err += e
    total = max(total, 0.0)
    value = math.sqrt(total)
    return NormValue(value, err / (2 * value) if value > 0 else math.sqrt(err), 0.0)


def corot_lhs(F: CorotField, k: int, r: float, tol: float = 1e-10) -> float:
    """H^k norm over the ball of the corotational map (p = 2 only).

    Each component derivative is expanded into polynomial x profile terms
    and integrated with exact angular moments and radial quadrature.
    """
    if k < 0 or r <= 0:
        raise ValueError("need k >= 0 and r > 0")
    return _corot_lhs_detail(F, k, r, tol).value


def corot_rhs(f: Profile, d: int, k: int, r: float, tol: float = 1e-10) -> float:
    """H^k norm over the ball in dimension d + 2 of the radial extension of f."""
    if k < 0 or r <= 0:
        raise ValueError("need k >= 0 and r > 0")
    return _ball_def_exact(RadialField(d + 2, f), range(k + 1), 2.0, r, tol).value


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class ReportEntry:
    label: str
    route: str
    value: float
    err: float
    method: str


@dataclass
class NormReport:
    """Per-(profile, route) values with pairwise ratio summaries.

    Serialises to JSON as {"params": ..., "entries": [...], "ratios":
    [{"pair", "min", "max"}, ...], "degenerate": [...]}; CSV flattening
    writes the entries table only.
    """

    params: dict
    entries: list[ReportEntry] = dataclass_field(default_factory=list)
    ratios: list[dict] = dataclass_field(default_factory=list)
    degenerate: list[dict] = dataclass_field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "params": self.params,
            "entries": [
                {
                    "label": e.label,
                    "route": e.route,
                    "value": e.value,
                    "err": e.err,
                    "method": e.method,
                }
                for e in self.entries
            ],
            "ratios": self.ratios,
            "degenerate": self.degenerate,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":")) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["label", "route", "method", "value", "err"])
        for e in self.entries:
            writer.writerow([e.label, e.route, e.method, repr(e.value), repr(e.err)])
        return buf.getvalue()

    def ratio_bounds(self, pair: str) -> tuple[float, float]:
        for row in self.ratios:
            if row["pair"] == pair:
                return row["min"], row["max"]
        raise KeyError(pair)


def _ratio_rows(pairs: dict[str, list[float]]) -> list[dict]:
    rows = []
    for pair in sorted(pairs):
        vals = pairs[pair]
        if vals:
            rows.append({"pair": pair, "min": min(vals), "max": max(vals)})
        else:
            rows.append({"pair": pair, "min": math.nan, "max": math.nan})
    return rows


def equivalence_report(
    corpus: Sequence[CorpusEntry],
    d: int,
    k: int,
    p: float,
    r: float,
    method: str = "exact-angular",
    seed: int = DEFAULT_SEED,
    samples: int = DEFAULT_SAMPLES,
    tol: float = 1e-10,
    aggregation: str = "sum-of-norms",
) -> NormReport:
    """Three-route norm table over a corpus, with pairwise ratio ranges.

    For finite r the routes are the full order-k ball norms; with
    r = math.inf only the top order enters (the 1D routes then carry no
    sphere-area constants either way, so the k = 0 ratio def/D equals
    |S^(d-1)|^(1/p) exactly).  Zero profiles and, on the half-line,
    non-decaying profiles are excluded from ratio statistics and listed
    under ``degenerate``.
    """
    if method not in ("exact-angular", "monte-carlo"):
        raise ValueError(f"unknown method {method!r}")
    if p < 1:
        raise ValueError("need p >= 1")
    if method == "exact-angular" and p != 2 and k >= 1:
        raise ValueError("the exact-angular method requires p = 2 when k >= 1")
    if not math.isinf(r) and r <= 0:
        raise ValueError("need r > 0")
    if aggregation not in ("sum-of-norms", "p-power"):
        raise ValueError(f"unknown aggregation {aggregation!r}")

    halfline = math.isinf(r)
    report = NormReport(
        params={
            "report": "equivalence",
            "d": d,
            "k": k,
            "p": p,
            "r": "inf" if halfline else r,
            "method": method,
            "seed": seed,
            "samples": samples,
            "tol": tol,
            "aggregation": aggregation,
        }
    )
    pairs: dict[str, list[float]] = {"def/D": [], "def/squared": [], "D/squared": []}
    for entry in corpus:
        f = entry.profile
        if f.is_zero:
            report.degenerate.append({"label": entry.label, "reason": "zero profile"})
            continue
        if halfline and not (f.min_decay and f.min_decay > 0):
            report.degenerate.append(
                {"label": entry.label, "reason": "no decay; not admissible on the half-line"}
            )
            continue
        field = RadialField(d, f)
        js = [k] if halfline else range(k + 1)
        v_def = _ball_def_detail(field, js, p, r, method, seed, samples, tol)
        wf = WeightFamily(d, k, p)
        pieces_D = [
            _weighted_lp_power(d_op(f, j), p, wf.route_d_exponent(j) * p, r, tol) for j in js
        ]
        v_D = _aggregate(pieces_D, p, aggregation)
        ft = to_squared(f)
        r_sq = math.inf if halfline else r * r
        pieces_sq = [
            _weighted_lp_power(ft.derivative(j), p, wf.route_squared_exponent(j) * p, r_sq, tol)
            for j in js
        ]
        v_sq = _aggregate(pieces_sq, p, aggregation)

        report.entries.append(ReportEntry(entry.label, "def", v_def.value, v_def.err, method))
        report.entries.append(ReportEntry(entry.label, "D", v_D.value, v_D.err, "exact-angular"))
        report.entries.append(
            ReportEntry(entry.label, "squared", v_sq.value, v_sq.err, "exact-angular")
        )
        values = (v_def.value, v_D.value, v_sq.value)
        if not all(math.isfinite(v) for v in values):
            report.degenerate.append({"label": entry.label, "reason": "non-finite norm"})
        elif all(v > 0 for v in values):
            pairs["def/D"].append(v_def.value / v_D.value)
            pairs["def/squared"].append(v_def.value / v_sq.value)
            pairs["D/squared"].append(v_D.value / v_sq.value)
        else:
            report.degenerate.append({"label": entry.label, "reason": "zero norm"})
    report.ratios = _ratio_rows(pairs)
    return report


def corot_report(
    corpus: Sequence[CorpusEntry],
    d: int,
    k: int,
    r: float,
    tol: float = 1e-10,
) -> NormReport:
    """Corotational H^k norms against the (d+2)-dimensional radial norms."""
    if d < 2 or k < 0 or r <= 0:
        raise ValueError("need d >= 2, k >= 0, r > 0")
    report = NormReport(
        params={"report": "corot", "d": d, "k": k, "p": 2, "r": r, "tol": tol}
    )
    pairs: dict[str, list[float]] = {"lhs/rhs": [], "(lhs/rhs)^2": []}
    for entry in corpus:
        f = entry.profile
        if f.is_zero:
            report.degenerate.append({"label": entry.label, "reason": "zero profile"})
            continue
        lhs = _corot_lhs_detail(CorotField(d, f), k, r, tol)
        rhs = _ball_def_exact(RadialField(d + 2, f), range(k + 1), 2.0, r, tol)
        report.entries.append(ReportEntry(entry.label, "lhs", lhs.value, lhs.err, "exact-angular"))
        report.entries.append(ReportEntry(entry.label, "rhs", rhs.value, rhs.err, "exact-angular"))
        if lhs.value > 0 and rhs.value > 0:
            ratio = lhs.value / rhs.value
            pairs["lhs/rhs"].append(ratio)
            pairs["(lhs/rhs)^2"].append(ratio * ratio)
        else:
            report.degenerate.append({"label": entry.label, "reason": "zero norm"})
    report.ratios = _ratio_rows(pairs)
    return report
