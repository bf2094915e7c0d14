"""Partial derivatives of radial fields and the exact recovery machinery.

The forward direction expands any partial derivative of f(|x|) into a finite
sum of polynomial factors times powers of the radial derivation applied to f.
The backward direction inverts that expansion: an exact rational Gram matrix
built over all coordinate tuples of a given length yields recovery
coefficients q_alpha with

    |x|^n (D^n f)(|x|) = sum over |alpha| = n of q_alpha(x/|x|) d^alpha f(|x|).

Everything up to final evaluation is exact rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .indexpoly import (
    DIndex,
    MonomialPoly,
    MultiIndex,
    collapse,
    enumerate_dindex,
    enumerate_multi,
    multi_factorial,
)
from .profile import RadialField, d_op

DEFAULT_ENUMERATION_BUDGET = 10**7


class BudgetExceededError(ValueError):
    """The d**n coordinate-tuple enumeration would exceed the configured budget."""

    def __init__(self, d: int, n: int, required: int, budget: int):
        super().__init__(
            f"enumeration of {d}^{n} = {required} coordinate tuples exceeds budget {budget}"
        )
        self.d = d
        self.n = n
        self.required = required
        self.budget = budget


# ---------------------------------------------------------------------------
# Forward expansion
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def forward_terms(d: int, alpha: MultiIndex) -> tuple[tuple[int, MonomialPoly], ...]:
    """Expansion data for the derivative d^alpha of a radial field in R^d.

    Returns pairs (j, P_j) with P_j = Laplacian^(n-j) x^alpha / (2^(n-j) (n-j)!)
    for j = ceil(n/2) .. n, zero polynomials dropped, so that

        d^alpha f(|x|) = sum_j P_j(x) * (D^j f)(|x|).

    Each P_j is homogeneous of degree 2j - n.
    """
    n = sum(alpha)
    if len(alpha) != d:
        raise ValueError(f"multi-index has {len(alpha)} entries, expected {d}")
    if n == 0:
        return ((0, MonomialPoly.constant(d, 1)),)
    mono = MonomialPoly.monomial(d, alpha)
    out = []
    for j in range(math.ceil(n / 2), n + 1):
        poly = mono.laplacian_power(n - j) * Fraction(1, 2 ** (n - j) * math.factorial(n - j))
        if not poly.is_zero:
            out.append((j, poly))
    return tuple(out)


def partial_derivative(field: RadialField, alpha: MultiIndex, x: Sequence[float]) -> float:
    """Value of d^alpha applied to the radial field at x (x = 0 allowed)."""
    pt = np.asarray(x, dtype=float)
    if pt.shape != (field.d,) or len(alpha) != field.d:
        raise ValueError(f"point and multi-index must live in R^{field.d}")
    rho = float(np.linalg.norm(pt))
    if sum(alpha) == 0:
        return field.profile.eval(rho)
    total = 0.0
    for j, poly in forward_terms(field.d, tuple(alpha)):
        total += poly.eval(pt) * d_op(field.profile, j).eval(rho)
    return total


def profile_derivative_from_partials(field: RadialField, j: int, x: Sequence[float]) -> float:
    """The ordinary j-th profile derivative f^(j)(|x|) recovered from partials.

    Uses f^(j)(|x|) = sum over |alpha| = j of d^alpha f(|x|) * (j!/alpha!) * x^alpha / |x|^j,
    which requires x != 0.
    """
    if j < 0:
        raise ValueError("order must be >= 0")
    pt = np.asarray(x, dtype=float)
    rho = float(np.linalg.norm(pt))
    if rho == 0.0:
        raise ValueError("recovery from partial derivatives requires x != 0")
    if j == 0:
        return field.profile.eval(rho)
    total = 0.0
    jfact = math.factorial(j)
    for alpha in enumerate_multi(field.d, j):
        mono = float(np.prod(pt ** np.asarray(alpha)))
        total += partial_derivative(field, alpha, pt) * (jfact / multi_factorial(alpha)) * mono
    return total / rho**j


# ---------------------------------------------------------------------------
# Gram matrix
# ---------------------------------------------------------------------------

def _invert_exact(rows: Sequence[Sequence[Fraction]]) -> tuple[tuple[Fraction, ...], ...]:
    k = len(rows)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(k)] for i, r in enumerate(rows)]
    for col in range(k):
        piv = next((r for r in range(col, k) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        pivot = aug[col][col]
        aug[col] = [v / pivot for v in aug[col]]
        for r in range(k):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[col])]
    return tuple(tuple(row[k:]) for row in aug)


def _det_exact(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    mat = [list(r) for r in rows]
    k = len(mat)
    det = Fraction(1)
    for col in range(k):
        piv = next((r for r in range(col, k) if mat[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            mat[col], mat[piv] = mat[piv], mat[col]
            det = -det
        det *= mat[col][col]
        inv = 1 / mat[col][col]
        for r in range(col + 1, k):
            if mat[r][col]:
                factor = mat[r][col] * inv
                mat[r] = [v - factor * w for v, w in zip(mat[r], mat[col])]
    return det


@dataclass(frozen=True)
class GramMatrix:
    """Exact rational Gram matrix of the scaled-Laplacian coefficient vectors.

    ``entries[i][j]`` sums, over all d**n coordinate tuples I, the products of
    the i-th and j-th scaled repeated Laplacians of the coordinate-product
    monomial evaluated at the last basis vector.  The inverse is exact and
    satisfies entries @ inverse == identity in rational arithmetic.
    """

    d: int
    n: int
    entries: tuple[tuple[Fraction, ...], ...]
    inverse: tuple[tuple[Fraction, ...], ...]

    @property
    def size(self) -> int:
        return len(self.entries)

    def leading_minors(self) -> list[Fraction]:
        """Determinants of the leading principal blocks (all positive for SPD)."""
        return [
            _det_exact([row[: k + 1] for row in self.entries[: k + 1]])
            for k in range(self.size)
        ]

    def as_float(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.entries])


@lru_cache(maxsize=None)
def _p_vector_at_basis(d: int, alpha: MultiIndex, jmax: int) -> tuple[Fraction, ...]:
    """(p^0, ..., p^jmax) of the monomial x^alpha evaluated at e_d, exactly.

    Evaluation at the basis vector picks out the coefficient of the pure
    x_d power in each repeated Laplacian.
    """
    n = sum(alpha)
    poly = MonomialPoly.monomial(d, alpha)
    values = []
    for j in range(jmax + 1):
        key = (0,) * (d - 1) + (n - 2 * j,)
        coeff = poly.coeffs.get(key, Fraction(0))
        values.append(coeff * Fraction(1, 2**j * math.factorial(j)))
        poly = poly.laplacian()
    return tuple(values)


@lru_cache(maxsize=None)
def _gram(d: int, n: int) -> GramMatrix:
    jmax = n // 2
    size = jmax + 1
    acc = [[Fraction(0)] * size for _ in range(size)]
    for index in enumerate_dindex(d, n):
        vec = _p_vector_at_basis(d, collapse(index, d), jmax)
        for i in range(size):
            if vec[i] == 0:
                continue
            for j in range(i, size):
                acc[i][j] += vec[i] * vec[j]
    for i in range(size):
        for j in range(i):
            acc[i][j] = acc[j][i]
    entries = tuple(tuple(row) for row in acc)
    gram = GramMatrix(d, n, entries, _invert_exact(entries))
    if any(m <= 0 for m in gram.leading_minors()):
        raise ValueError(f"Gram matrix for (d={d}, n={n}) is not positive definite")
    return gram


def gram_matrix(d: int, n: int, budget: int = DEFAULT_ENUMERATION_BUDGET) -> GramMatrix:
    """Exact Gram matrix for dimension d >= 2 and derivative order n >= 1.

    Enumerates all d**n coordinate tuples directly; raises
    :class:`BudgetExceededError` when d**n exceeds ``budget``.
    """
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    required = d**n
    if required > budget:
        raise BudgetExceededError(d, n, required, budget)
    return _gram(d, n)


def solve_linear_system(
    d: int,
    n: int,
    lhs: Sequence,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> list[Fraction]:
    """Exact rational solution y of (Gram matrix) y = lhs.

    ``lhs`` must have floor(n/2) + 1 entries (ints, Fractions, or floats,
    which are converted exactly).
    """
    gram = gram_matrix(d, n, budget)
    if len(lhs) != gram.size:
        raise ValueError(f"right-hand side must have {gram.size} entries, got {len(lhs)}")
    rhs = [Fraction(v) for v in lhs]
    return [
        sum((row[j] * rhs[j] for j in range(gram.size)), Fraction(0))
        for row in gram.inverse
    ]


# ---------------------------------------------------------------------------
# Recovery coefficients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RecoveryCoeffs:
    """Map alpha -> q_alpha with |x|^n (D^n f)(|x|) = sum q_alpha(x/|x|) d^alpha f(|x|).

    Each q_alpha is a homogeneous polynomial: of degree 2n for even n and
    2n - 1 for odd n (parity under x -> -x forces the degree to share the
    parity of n, so the minimal uniform even-n/odd-n choice is used; on the
    unit sphere the homogenising radius factors are invisible).
    """

    d: int
    n: int
    polys: Mapping[MultiIndex, MonomialPoly]

    @property
    def target_degree(self) -> int:
        return 2 * self.n - (self.n % 2)


@lru_cache(maxsize=None)
def _recovery(d: int, n: int) -> RecoveryCoeffs:
    gram = _gram(d, n)
    ginv0 = gram.inverse[0]
    r2 = MonomialPoly.radius_squared(d)
    nfact = math.factorial(n)
    polys: dict[MultiIndex, MonomialPoly] = {}
    for alpha in enumerate_multi(d, n):
        mono = MonomialPoly.monomial(d, alpha)
        acc = MonomialPoly.zero(d)
        poly = mono
        for j in range(n // 2 + 1):
            scaled = poly * Fraction(1, 2**j * math.factorial(j))
            if not scaled.is_zero:
                lift = (n + 2 * j - (n % 2)) // 2  # homogenise to the target degree
                acc = acc + ginv0[j] * (scaled * r2**lift)
            poly = poly.laplacian()
        polys[alpha] = Fraction(nfact, multi_factorial(alpha)) * acc
    return RecoveryCoeffs(d, n, polys)


def recovery_coeffs(
    d: int, n: int, budget: int = DEFAULT_ENUMERATION_BUDGET
) -> RecoveryCoeffs:
    """Recovery coefficients q_alpha for all |alpha| = n in dimension d."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    required = d**n
    if required > budget:
        raise BudgetExceededError(d, n, required, budget)
    return _recovery(d, n)


def recover_Dn(field: RadialField, n: int, x: Sequence[float]) -> float:
    """|x|^n (D^n f)(|x|) reconstructed purely from partial derivatives at x.

    Requires x != 0 (the construction divides by |x|).
    """
    pt = np.asarray(x, dtype=float)
    rho = float(np.linalg.norm(pt))
    if rho == 0.0:
        raise ValueError("recovery requires x != 0")
    omega = pt / rho
    rc = recovery_coeffs(field.d, n)
    total = 0.0
    for alpha, q in rc.polys.items():
        qv = q.eval(omega)
        if qv:
            total += qv * partial_derivative(field, alpha, pt)
    return total
