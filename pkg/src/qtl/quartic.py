"""The cyclic quartic field M = Q((zeta5 - zeta5^-1) sqrt d) and its invariants."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .quadclass import DiscriminantError, squarefree_core


@dataclass(frozen=True)
class QuarticField:
    d: int  # square-free core
    source: int  # the integer the field was built from (often a discriminant)
    min_poly: tuple  # coefficients, highest degree first
    conductor: int
    field_disc: int
    signature: str  # "imaginary" (0, 2) or "real" (4, 0)
    unit_rank: int

    @property
    def real_embeddings(self):
        return 4 if self.signature == "real" else 0

    @property
    def complex_pairs(self):
        return 0 if self.signature == "real" else 2


def build_quartic(m):
    m = int(m)
    if m == 0:
        raise DiscriminantError("m must be nonzero")
    d = squarefree_core(m)
    if d == 1:
        raise DiscriminantError("square-free core 1 gives no quartic field")
    if d % 5 == 0:
        raise DiscriminantError("5 divides d")
    poly = (1, 0, 5 * d, 0, 5 * d * d)
    if d % 4 == 1:
        conductor, disc = 5 * abs(d), 125 * d * d
    else:
        conductor, disc = 20 * abs(d), 2000 * d * d
    signature = "imaginary" if d > 0 else "real"
    r1, r2 = (0, 2) if d > 0 else (4, 0)
    return QuarticField(d, m, poly, conductor, disc, signature, r1 + r2 - 1)


def generator_value(d):
    """Complex value of (zeta5 - zeta5^-1) sqrt d."""
    z = cmath.exp(2j * cmath.pi / 5)
    root = cmath.sqrt(d) if d > 0 else 1j * math.sqrt(-d)
    return (z - 1 / z) * root


def eval_poly(coeffs, x):
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def eisenstein_irreducible(d):
    d = int(d)
    if d in (0, 1) or d % 5 == 0 or squarefree_core(d) != d:
        raise DiscriminantError("need square-free d prime to 5")
    _, _, a2, a1, a0 = (1, 0, 5 * d, 0, 5 * d * d)
    return a2 % 5 == 0 and a1 % 5 == 0 and a0 % 5 == 0 and a0 % 25 != 0


def _is_rational_square(q):
    q = Fraction(q)
    if q < 0:
        return False
    return math.isqrt(q.numerator) ** 2 == q.numerator and math.isqrt(q.denominator) ** 2 == q.denominator


def verify_cyclic_conditions(n, e, f):
    """Cyclicity test for X^4 - 2eX^2 + (e^2 - f^2 n); returns (is_cyclic, poly_disc)."""
    n, e, f = Fraction(n), Fraction(e), Fraction(f)
    if f == 0:
        raise ValueError("f must be nonzero")
    c = e * e - f * f * n
    disc = 256 * f**4 * n * n * c
    cyclic = (not _is_rational_square(n)) and _is_rational_square(n * c)
    return cyclic, disc
