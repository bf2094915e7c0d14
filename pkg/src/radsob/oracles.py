"""Finite-difference cross-checks, evaluated in extended precision.

Composed 5-point central stencils carry rounding noise of order
eps / h^|alpha|; in float64 that swamps tight relative targets for third
and fourth derivatives at any usable step.  The stencil is therefore
evaluated with mpmath at a small step, keeping truncation and rounding both
far below the tolerances it is compared against.  The oracle touches only
point values of the field, never the expansion formulas it is meant to
check.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

import mpmath as mp

from .profile import RadialField

# offset -> weight tables of the 5-point central stencils, per derivative
# order; each divides by h^order.
_STENCILS: dict[int, tuple[tuple[int, Fraction], ...]] = {
    1: ((-2, Fraction(1, 12)), (-1, Fraction(-8, 12)), (1, Fraction(8, 12)), (2, Fraction(-1, 12))),
    2: (
        (-2, Fraction(-1, 12)),
        (-1, Fraction(16, 12)),
        (0, Fraction(-30, 12)),
        (1, Fraction(16, 12)),
        (2, Fraction(-1, 12)),
    ),
    3: ((-2, Fraction(-1, 2)), (-1, Fraction(1)), (1, Fraction(-1)), (2, Fraction(1, 2))),
    4: ((-2, Fraction(1)), (-1, Fraction(-4)), (0, Fraction(6)), (1, Fraction(-4)), (2, Fraction(1))),
}


def fd_partial_derivative(
    field: RadialField,
    alpha: Sequence[int],
    x: Sequence[float],
    h: float = 3e-6,
    dps: int = 40,
) -> float:
    """Partial derivative d^alpha of the field at x by composed 5-point stencils.

    Per-coordinate orders up to 4 are supported (the 5-point table).  With the
    default step and precision the oracle is accurate to roughly 1e-8 absolute
    for the profile corpus.
    """
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != field.d:
        raise ValueError(f"multi-index must have {field.d} entries")
    if any(a < 0 or a > 4 for a in alpha):
        raise ValueError("per-coordinate derivative orders must lie in 0..4")
    n = sum(alpha)
    with mp.workdps(dps):
        hh = mp.mpf(h)
        terms = [
            (mp.mpf(c.numerator) / c.denominator, a, mp.mpf(b.numerator) / b.denominator)
            for c, a, b in field.profile.terms
        ]

        def phi(point):
            r2 = mp.fsum(v * v for v in point)
            rho = mp.sqrt(r2)
            total = mp.mpf(0)
            for c, a, b in terms:
                val = c
                if a:
                    val *= r2 ** (a // 2) if a % 2 == 0 else rho**a
                if b:
                    val *= mp.exp(-b * r2)
                total += val
            return total

        base = [mp.mpf(float(v)) for v in x]
        if n == 0:
            return float(phi(base))
        active = [i for i, a in enumerate(alpha) if a > 0]
        total = mp.mpf(0)
        for combo in itertools.product(*[_STENCILS[alpha[i]] for i in active]):
            weight = Fraction(1)
            point = list(base)
            for coord, (offset, w) in zip(active, combo):
                weight *= w
                if offset:
                    point[coord] = point[coord] + offset * hh
            if weight:
                total += (mp.mpf(weight.numerator) / weight.denominator) * phi(point)
        return float(total / hh**n)
