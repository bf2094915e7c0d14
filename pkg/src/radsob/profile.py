"""Closed-form radial profiles: finite sums c * rho^a * exp(-b * rho^2).

This term class is closed under differentiation, multiplication, the
squared-argument substitution s = rho^2, and (on even profiles) the radial
derivation f -> f'(rho) / rho.  That closure is what lets every numeric
route in the package be cross-checked against an exact symbolic value.
Coefficients c and decay rates b are Fractions; floats appear only in
``eval``.

A profile is *even* when every power a is even; even profiles extend to
smooth radial functions of x through f(|x|) and carry a squared-argument
representative f~ with f(rho) = f~(rho^2).
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .quad import QuadratureConvergenceError, integrate_1d

Term = tuple[Fraction, int, Fraction]  # (coefficient, power, decay rate)


def _canonical_terms(terms: Iterable[Sequence]) -> tuple[Term, ...]:
    merged: dict[tuple[int, Fraction], Fraction] = {}
    for c, a, b in terms:
        a = int(a)
        if a < 0:
            raise ValueError(f"power must be >= 0, got {a}")
        b = Fraction(b)
        if b < 0:
            raise ValueError(f"decay rate must be >= 0, got {b}")
        key = (a, b)
        merged[key] = merged.get(key, Fraction(0)) + Fraction(c)
    return tuple(
        (c, a, b) for (a, b), c in sorted(merged.items()) if c != 0
    )


class _TermSum:
    """Shared mechanics of the two term-list function classes."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Sequence] = ()):
        object.__setattr__(self, "terms", _canonical_terms(terms))

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def min_decay(self) -> Fraction | None:
        """Smallest decay rate over the terms; None for the zero function."""
        if not self.terms:
            return None
        return min(b for _, _, b in self.terms)

    @property
    def coeff_abs_sum(self) -> Fraction:
        return sum((abs(c) for c, _, _ in self.terms), Fraction(0))

    @property
    def max_power(self) -> int:
        return max((a for _, a, _ in self.terms), default=0)

    def eval_at_zero_exact(self) -> Fraction:
        """Exact value at the origin (only a = 0 terms contribute)."""
        return sum((c for c, a, _ in self.terms if a == 0), Fraction(0))

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.terms))

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*x^{a}*exp(-{b}*..)" for c, a, b in self.terms) or "0"
        return f"{type(self).__name__}[{body}]"

    def _binary(self, other, combine):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        return type(self)(combine(other))

    def __add__(self, other):
        return self._binary(other, lambda o: list(self.terms) + list(o.terms))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return type(self)([(-c, a, b) for c, a, b in self.terms])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            s = Fraction(other)
            return type(self)([(c * s, a, b) for c, a, b in self.terms])
        if type(other) is type(self):
            return type(self)(
                [
                    (c1 * c2, a1 + a2, b1 + b2)
                    for c1, a1, b1 in self.terms
                    for c2, a2, b2 in other.terms
                ]
            )
        return NotImplemented

    __rmul__ = __mul__


class Profile(_TermSum):
    """f(rho) = sum of c * rho^a * exp(-b * rho^2) on [0, infinity)."""

    @property
    def parity(self) -> str | None:
        """'even' / 'odd' when all powers share that parity, else None.

        The zero profile counts as even (and odd).
        """
        parities = {a % 2 for _, a, _ in self.terms}
        if parities <= {0}:
            return "even"
        if parities == {1}:
            return "odd"
        return None

    @property
    def is_even(self) -> bool:
        return all(a % 2 == 0 for _, a, _ in self.terms)

    def eval(self, rho):
        """Value at rho; accepts a float or an ndarray and matches the input shape."""
        r = np.asarray(rho, dtype=float)
        out = np.zeros_like(r)
        for c, a, b in self.terms:
            term = np.full_like(r, float(c))
            if a:
                term = term * r**a
            if b:
                term = term * np.exp(-float(b) * r * r)
            out = out + term
        if np.ndim(rho) == 0:
            return float(out)
        return out

    def derivative(self, j: int = 1) -> "Profile":
        """Exact j-th derivative; the class is closed under differentiation."""
        if j < 0:
            raise ValueError("derivative order must be >= 0")
        out = self
        for _ in range(j):
            terms: list[Term] = []
            for c, a, b in out.terms:
                if a:
                    terms.append((c * a, a - 1, b))
                if b:
                    terms.append((-2 * b * c, a + 1, b))
            out = Profile(terms)
        return out


class SquaredProfile(_TermSum):
    """f~(s) = sum of c * s^a * exp(-b * s) on [0, infinity)."""

    def eval(self, s):
        """Value at s; accepts a float or an ndarray and matches the input shape."""
        x = np.asarray(s, dtype=float)
        out = np.zeros_like(x)
        for c, a, b in self.terms:
            term = np.full_like(x, float(c))
            if a:
                term = term * x**a
            if b:
                term = term * np.exp(-float(b) * x)
            out = out + term
        if np.ndim(s) == 0:
            return float(out)
        return out

    def derivative(self, j: int = 1) -> "SquaredProfile":
        """Exact j-th derivative."""
        if j < 0:
            raise ValueError("derivative order must be >= 0")
        out = self
        for _ in range(j):
            terms: list[Term] = []
            for c, a, b in out.terms:
                if a:
                    terms.append((c * a, a - 1, b))
                if b:
                    terms.append((-b * c, a, b))
            out = SquaredProfile(terms)
        return out


def to_squared(f: Profile) -> SquaredProfile:
    """Squared-argument representative f~ with f(rho) = f~(rho^2); exact.

    Term by term, (c, a, b) becomes (c, a/2, b).  Requires an even profile.
    """
    if not f.is_even:
        raise ValueError("squared-argument substitution requires an even profile")
    return SquaredProfile([(c, a // 2, b) for c, a, b in f.terms])


def from_squared(ft: SquaredProfile) -> Profile:
    """Compose with rho^2: the even profile rho -> f~(rho^2)."""
    return Profile([(c, 2 * a, b) for c, a, b in ft.terms])


@lru_cache(maxsize=None)
def d_op(f: Profile, j: int = 1) -> Profile:
    """j-th power of the radial derivation f -> f'(rho)/rho, exactly.

    On even profiles the quotient extends smoothly through rho = 0, and the
    result equals 2^j times the j-th derivative of the squared-argument
    representative recomposed with rho^2; that is how it is computed here.
    """
    if j < 0:
        raise ValueError("order must be >= 0")
    if not f.is_even:
        raise ValueError("the radial derivation is defined on even profiles")
    return from_squared(to_squared(f).derivative(j)) * (2**j)


def d_op_by_division(f: Profile, j: int = 1) -> Profile:
    """Same operation via literal differentiate-then-divide-by-rho steps.

    Kept as an independent exact route for cross-checks: the derivative of
    an even profile has every power >= 1, so dividing by rho is a plain
    power shift in the term list.
    """
    if not f.is_even:
        raise ValueError("the radial derivation is defined on even profiles")
    out = f
    for _ in range(j):
        dterms = out.derivative().terms
        if any(a < 1 for _, a, _ in dterms):
            raise ValueError("division by rho would leave the term class")
        out = Profile([(c, a - 1, b) for c, a, b in dterms])
    return out


def whitney_derivative(f: Profile, n: int, rho: float, tol: float = 1e-10) -> float:
    """Numeric value of f~^(n)(rho^2) from an integral over the even profile alone.

    Evaluates (1 / (2^(2n-1) (n-1)!)) * int_0^1 (1 - t^2)^(n-1) f^(2n)(t*rho) dt
    by adaptive quadrature.  Raises QuadratureConvergenceError with the achieved
    error estimate if the quadrature does not converge to ``tol``.
    """
    if n < 1:
        raise ValueError("order must be >= 1")
    if rho <= 0:
        raise ValueError("rho must be > 0")
    if not f.is_even:
        raise ValueError("requires an even profile")
    f2n = f.derivative(2 * n)
    scale = 1.0 / (2 ** (2 * n - 1) * math.factorial(n - 1))

    def integrand(t):
        return (1.0 - t * t) ** (n - 1) * f2n.eval(t * rho)

    res = integrate_1d(integrand, 0.0, 1.0, tol=tol)
    if not res.converged:
        raise QuadratureConvergenceError(
            "quadrature for the squared-argument derivative did not converge",
            estimate=res.error_estimate * scale,
        )
    return scale * res.value


class RadialField:
    """A dimension d >= 2 together with an even profile f, representing f(|x|)."""

    __slots__ = ("d", "profile")

    def __init__(self, d: int, profile: Profile):
        if d < 2:
            raise ValueError(f"dimension must be >= 2, got {d}")
        if not profile.is_even:
            raise ValueError("radial fields require an even profile")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "profile", profile)

    def __setattr__(self, name, value):
        raise AttributeError("RadialField is immutable")

    def __eq__(self, other) -> bool:
        if not isinstance(other, RadialField):
            return NotImplemented
        return self.d == other.d and self.profile == other.profile

    def __hash__(self) -> int:
        return hash((self.d, self.profile))

    def __repr__(self) -> str:
        return f"RadialField(d={self.d}, {self.profile!r})"

    def eval(self, x) -> float:
        pt = np.asarray(x, dtype=float)
        if pt.shape != (self.d,):
            raise ValueError(f"expected a point in R^{self.d}, got shape {pt.shape}")
        return float(self.profile.eval(float(np.linalg.norm(pt))))


# ---------------------------------------------------------------------------
# Profile corpus
# ---------------------------------------------------------------------------

class CorpusEntry(NamedTuple):
    label: str
    profile: Profile


BUILTIN_CORPUS_SEED = 20240001

_CANONICAL = [
    CorpusEntry("one", Profile([(1, 0, 0)])),
    CorpusEntry("rho2", Profile([(1, 2, 0)])),
    CorpusEntry("gauss", Profile([(1, 0, 1)])),
    CorpusEntry("rho4_gauss2", Profile([(3, 4, 2)])),
]


def builtin_corpus() -> list[CorpusEntry]:
    """Fixed, seeded corpus of 24 even profiles.

    Four canonical profiles plus twenty generated ones with coefficients in
    [-2, 2] (eighths), powers in {0, 2, 4, 6} and decay rates in
    {0, 1/2, 1, 2}.  Even-numbered generated entries use strictly positive
    decay in every term so they are admissible on the half-line.  The list
    is deterministic: same seed, same corpus.
    """
    import random

    rng = random.Random(BUILTIN_CORPUS_SEED)
    entries = list(_CANONICAL)
    powers = [0, 2, 4, 6]
    decaying = [Fraction(1, 2), Fraction(1), Fraction(2)]
    all_decays = [Fraction(0)] + decaying
    for idx in range(20):
        decays = decaying if idx % 2 == 0 else all_decays
        terms = []
        for _ in range(rng.randint(1, 3)):
            c = Fraction(rng.randrange(-16, 17), 8)
            if c == 0:
                c = Fraction(1, 2)
            terms.append((c, rng.choice(powers), rng.choice(decays)))
        prof = Profile(terms)
        if prof.is_zero:  # cancellation after merging; keep the corpus nonzero
            prof = Profile([(Fraction(1, 2), 2, Fraction(1))])
        entries.append(CorpusEntry(f"seed{idx:02d}", prof))
    return entries


def halfline_corpus(entries: Sequence[CorpusEntry] | None = None) -> list[CorpusEntry]:
    """Corpus entries whose every term decays, i.e. admissible on (0, infinity)."""
    if entries is None:
        entries = builtin_corpus()
    return [e for e in entries if not e.profile.is_zero and e.profile.min_decay > 0]


def save_corpus(entries: Sequence[CorpusEntry], path: str | Path) -> None:
    """Write a corpus file: a JSON array of {"terms": [[c, a, b], ...], "label": ...}."""
    doc = [
        {
            "terms": [[float(c), a, float(b)] for c, a, b in e.profile.terms],
            "label": e.label,
        }
        for e in entries
    ]
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def load_corpus(path: str | Path) -> list[CorpusEntry]:
    """Read a corpus file written by :func:`save_corpus` (or by hand)."""
    doc = json.loads(Path(path).read_text())
    if not isinstance(doc, list):
        raise ValueError("corpus file must contain a JSON array")
    entries = []
    for item in doc:
        terms = [(Fraction(c), int(a), Fraction(b)) for c, a, b in item["terms"]]
        entries.append(CorpusEntry(str(item["label"]), Profile(terms)))
    return entries
