"""Frobenius (F20) detection for quintics via factorization patterns modulo primes.

AGL(1,5) acting on five points has cycle types 1^5 (identity), 5 (order 5),
1.4 (order 4) and 1.2.2 (order 2), in proportions 1 : 4 : 10 : 5 out of 20.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

F20_PATTERNS = frozenset({(1, 1, 1, 1, 1), (5,), (1, 4), (1, 2, 2)})
F20_PROPORTIONS = {(1, 1, 1, 1, 1): Fraction(1, 20), (5,): Fraction(4, 20), (1, 4): Fraction(10, 20), (1, 2, 2): Fraction(5, 20)}


@dataclass(frozen=True)
class IntPolynomial:
    coefficients: tuple  # highest degree first

    def __post_init__(self):
        cs = tuple(int(c) for c in self.coefficients)
        if not cs or cs[0] == 0:
            raise ValueError("leading coefficient must be nonzero")
        object.__setattr__(self, "coefficients", cs)

    @property
    def degree(self):
        return len(self.coefficients) - 1

    def __call__(self, x):
        acc = 0
        for c in self.coefficients:
            acc = acc * x + c
        return acc

    @classmethod
    def parse(cls, text):
        return cls(tuple(int(t) for t in text.replace(" ", "").split(",")))


def _as_poly(f):
    return f if isinstance(f, IntPolynomial) else IntPolynomial(tuple(f))


# --- arithmetic in F_p[X]; polynomials are lists, lowest degree first ---------


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _mod_reduce(f, p):
    return _trim([c % p for c in reversed(f.coefficients)])


def _divmod(a, b, p):
    a = list(a)
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    q = [0] * max(len(a) - db, 1)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv % p
        if c:
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return _trim(q), _trim(a[:db]) if db else []


def _mulmod(a, b, m, p):
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _divmod([c % p for c in prod], m, p)[1]


def _powmod(base, e, m, p):
    result = [1]
    while e:
        if e & 1:
            result = _mulmod(result, base, m, p)
        base = _mulmod(base, base, m, p)
        e >>= 1
    return result


def _gcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _derivative(a, p):
    return _trim([(i * c) % p for i, c in enumerate(a)][1:])


def _sub(a, b, p):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def is_good_prime(f, p):
    f = _as_poly(f)
    if f.coefficients[0] % p == 0:
        return False
    a = _mod_reduce(f, p)
    return len(_gcd(a, _derivative(a, p), p)) == 1


def factor_degree_pattern(f, p):
    """Sorted degrees of the irreducible factors of f mod p, or None for a bad prime."""
    f = _as_poly(f)
    if not is_good_prime(f, p):
        return None
    a = _mod_reduce(f, p)
    inv = pow(a[-1], -1, p)
    a = [c * inv % p for c in a]
    degrees = []
    x = [0, 1]
    h = x
    k = 0
    while len(a) - 1 >= 2 * (k + 1):
        k += 1
        h = _powmod(h, p, a, p)
        g = _gcd(a, _sub(h, x, p), p)
        dg = len(g) - 1
        if dg > 0:
            degrees += [k] * (dg // k)
            a = _divmod(a, g, p)[0]
            h = _divmod(h, a, p)[1] if len(a) > 1 else []
    if len(a) > 1:
        degrees.append(len(a) - 1)
    return tuple(sorted(degrees))


def primes():
    """Odd primes in increasing order, unbounded."""
    found = []
    n = 3
    while True:
        if all(n % q for q in found if q * q <= n):
            found.append(n)
            yield n
        n += 2


# --- rational roots ------------------------------------------------------------


def rational_roots(f):
    """Exactly verified rational roots; candidates come from numerical roots."""
    f = _as_poly(f)
    cs = f.coefficients
    out = set()
    if cs[-1] == 0:
        out.add(Fraction(0))
    scale = max(abs(c) for c in cs)
    approx = np.roots([c / scale for c in cs])
    lc = abs(cs[0])
    dens = [b for b in range(1, min(lc, 10**4) + 1) if lc % b == 0]
    for r in approx:
        if abs(r.imag) > 1e-6 * max(1.0, abs(r)):
            continue
        for b in dens:
            centre = round(r.real * b)
            for num in range(centre - 2, centre + 3):
                q = Fraction(num, b)
                val = sum(c * q ** (len(cs) - 1 - i) for i, c in enumerate(cs))
                if val == 0:
                    out.add(q)
    return sorted(out)


# --- classification -----------------------------------------------------------------


@dataclass
class FrobeniusVerdict:
    status: str  # reducible | excluded | F20_compatible | F20_certified
    witness_prime: int | None = None
    patterns_seen: Counter = field(default_factory=Counter)
    primes_used: int = 0
    irreducible_witness: int | None = None
    skipped_primes: list = field(default_factory=list)

    def frequencies(self):
        n = sum(self.patterns_seen.values())
        return {pat: cnt / n for pat, cnt in sorted(self.patterns_seen.items())} if n else {}

    def to_dict(self):
        return {
            "status": self.status,
            "witness_prime": self.witness_prime,
            "irreducible_witness": self.irreducible_witness,
            "primes_used": self.primes_used,
            "patterns_seen": {"".join(map(str, k)): v for k, v in sorted(self.patterns_seen.items())},
        }


def frobenius_classify(f, prime_budget=500):
    f = _as_poly(f)
    if f.degree != 5:
        raise ValueError("frobenius_classify needs a quintic")
    roots = rational_roots(f)
    if roots:
        return FrobeniusVerdict("reducible")
    verdict = FrobeniusVerdict("F20_compatible")
    for p in primes():
        if verdict.primes_used >= prime_budget:
            break
        pat = factor_degree_pattern(f, p)
        if pat is None:
            verdict.skipped_primes.append(p)
            continue
        verdict.primes_used += 1
        verdict.patterns_seen[pat] += 1
        if pat == (5,) and verdict.irreducible_witness is None:
            verdict.irreducible_witness = p
        if pat == (1, 4) and verdict.witness_prime is None:
            verdict.witness_prime = p
    if any(pat not in F20_PATTERNS for pat in verdict.patterns_seen):
        verdict.status = "excluded"
    elif verdict.witness_prime is not None:
        verdict.status = "F20_certified"
    return verdict


def chebotarev_report(verdict):
    """Observed vs expected F20 proportions, as rows (pattern, observed, expected)."""
    freqs = verdict.frequencies()
    return [(pat, freqs.get(pat, 0.0), float(share)) for pat, share in F20_PROPORTIONS.items()]


TYPE_LABELS = {"k1": "Type I", "k2": "Type II"}


def label_type(source):
    """Type I for units of k1 = Q(sqrt d), Type II for units of k2 = Q(sqrt 5d)."""
    if source not in TYPE_LABELS:
        raise ValueError("source must be 'k1' or 'k2'")
    return TYPE_LABELS[source]
