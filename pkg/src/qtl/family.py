"""Pell solutions of a^2 - 125 b^2 = 4 and the Kishi quintics they produce."""

from __future__ import annotations

from dataclasses import dataclass

W2 = 125  # w = sqrt(125)


class FamilyInvariantError(AssertionError):
    pass


@dataclass(frozen=True)
class PellUnit:
    """(a + b sqrt 125) / 2 with a = b mod 2."""

    a: int
    b: int

    def __mul__(self, other):
        a = (self.a * other.a + W2 * self.b * other.b) // 2
        b = (self.a * other.b + other.a * self.b) // 2
        return PellUnit(a, b)

    def norm(self):
        return (self.a * self.a - W2 * self.b * self.b) // 4


ETA = PellUnit(123, 11)
ONE = PellUnit(2, 0)


def eta_power(n):
    if n < 0:
        raise ValueError("n must be nonnegative")
    result, base = ONE, ETA
    while n:
        if n & 1:
            result = result * base
        base = base * base
        n >>= 1
    return result


def kishi_polynomial(norm, trace):
    """X^5 - 5 N X^3 + 5 N^2 X - N^2 T, coefficients highest first."""
    return (1, 0, -5 * norm, 0, 5 * norm * norm, -norm * norm * trace)


def fifth_power_excluded(u, v, delta):
    """Nagell criterion for p = 5: (u + v sqrt delta)/2 is no fifth power if 0 < |v| < delta^2/16."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    return 0 < abs(v) and 16 * abs(v) < delta * delta


def phi(u):
    return u**4 - 8 * u**2 - 16 * u + 16


@dataclass(frozen=True)
class FamilyMember:
    n: int
    alpha: int
    beta: int
    d: int
    trace1: int
    trace2: int
    poly1: tuple
    poly2: tuple

    @property
    def k(self):
        return (self.n - 7) // 25

    def nagell_certificates(self):
        # eps1^2 = ((d + 2) + (a + b) sqrt d)/2 and eps2 = ((a + 125 b) + 5 sqrt(5d))/2
        return (
            fifth_power_excluded(self.trace1, self.alpha + self.beta, self.d),
            fifth_power_excluded(self.trace2, 5, 5 * self.d),
        )

    def csv_row(self):
        fmt = lambda p: ",".join(map(str, p))
        return ";".join(
            map(str, [self.k, self.n, self.alpha, self.beta, self.d, self.trace1, self.trace2, fmt(self.poly1), fmt(self.poly2)])
        )


def _check(cond, what):
    if not cond:
        raise FamilyInvariantError(what)


def member_for_exponent(n):
    """Family member from eta^n; refuses exponents violating a + b = 0 mod 25."""
    eta = eta_power(n)
    alpha, beta = eta.a, eta.b
    if (alpha + beta) % 25:
        raise ValueError(f"eta^{n}: alpha + beta = {(alpha + beta) % 25} mod 25, not 0")
    u = alpha + beta
    d = u * u - 4
    trace1 = d + 2
    trace2 = alpha + W2 * beta
    m = FamilyMember(n, alpha, beta, d, trace1, trace2, kishi_polynomial(1, trace1), kishi_polynomial(1, trace2))
    _check(alpha * alpha - W2 * beta * beta == 4, "Pell identity")
    _check(alpha >= 2 and beta >= 2, "alpha, beta >= 2")
    # norms of eps1 = (u + sqrt d)/2 and eps2 = (trace2 + 5 sqrt(5d))/2
    _check(u * u - d == 4, "norm of eps1")
    _check(trace2 * trace2 - 125 * d == 4, "norm of eps2")
    _check(trace1 % 125 in (2, 123), "Tr(eps1^2) = +-2 mod 125")
    _check(trace2 % 125 in (2, 123), "Tr(eps2) = +-2 mod 125")
    _check(phi(u) > 0, "phi(u) > 0")
    _check(all(m.nagell_certificates()), "Nagell certificates")
    return m


def family_member(k):
    if k < 0:
        raise ValueError("k must be nonnegative")
    return member_for_exponent(7 + 25 * k)


def congruent_exponents(limit):
    """All n <= limit with alpha + beta = 0 mod 25 for eta^n."""
    out = []
    for n in range(1, limit + 1):
        e = eta_power(n)
        if (e.a + e.b) % 25 == 0:
            out.append(n)
    return out
