"""Class groups of quadratic discriminants via binary quadratic forms.

D < 0: reduced positive definite forms, one per class.
D > 0: reduced indefinite forms fall into rho-cycles, one cycle per class of
the narrow (form) class group.  For the odd prime 5 the narrow and wide
5-ranks agree, so this is enough for the rank columns.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from pathlib import Path

DEFAULT_BOUND = 10**7


class DiscriminantError(ValueError):
    pass


# --- integers ------------------------------------------------------------------


def squarefree_core(m):
    """Square-free integer with the same sign and the same square class as m."""
    if m == 0:
        raise DiscriminantError("0 has no square-free core")
    sign = -1 if m < 0 else 1
    n = abs(m)
    core = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            if e % 2:
                core *= p
        p += 1 if p == 2 else 2
    return sign * core * n


def is_square(n):
    return n >= 0 and math.isqrt(n) ** 2 == n


def xgcd(a, b):
    """(g, x, y) with x a + y b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@dataclass(frozen=True)
class FundamentalDiscriminant:
    value: int
    squarefree_core: int

    def __int__(self):
        return self.value


def fundamental_discriminant(m):
    m = int(m)
    if m == 0 or is_square(m):
        raise DiscriminantError(f"{m} is zero or a perfect square")
    d = squarefree_core(m)
    if d == 1:
        raise DiscriminantError(f"{m} is a square times 1")
    D = d if d % 4 == 1 else 4 * d
    return FundamentalDiscriminant(D, d)


def as_discriminant(D):
    if isinstance(D, FundamentalDiscriminant):
        return D
    D = int(D)
    fd = fundamental_discriminant(D)
    if fd.value != D:
        raise DiscriminantError(f"{D} is not a fundamental discriminant")
    return fd


def dual_pair(D):
    """(D1, D2) for k1 = Q(sqrt d) and k2 = Q(sqrt 5d)."""
    fd = as_discriminant(D)
    if fd.value % 5 == 0:
        raise DiscriminantError("5 divides the discriminant")
    return fd.value, fundamental_discriminant(5 * fd.squarefree_core).value


# --- forms -------------------------------------------------------------------


@dataclass(frozen=True)
class QuadForm:
    a: int
    b: int
    c: int

    @property
    def disc(self):
        return self.b * self.b - 4 * self.a * self.c

    def __iter__(self):
        yield self.a
        yield self.b
        yield self.c

    def __str__(self):
        return f"({self.a},{self.b},{self.c})"


def principal_form(D):
    delta = D % 2
    return QuadForm(1, delta, (delta - D) // 4)


def inverse_form(f):
    return QuadForm(f.a, -f.b, f.c)


def compose_raw(f, g):
    """Dirichlet composition of primitive forms of one discriminant (unreduced)."""
    a1, b1, c1 = f
    a2, b2, c2 = g
    D = f.disc
    if g.disc != D:
        raise DiscriminantError("forms have different discriminants")
    s = (b1 + b2) // 2
    d0, x, y = xgcd(a1, a2)
    d, z, w = xgcd(d0, s)
    v = z * y
    a3 = a1 * a2 // (d * d)
    b3 = b2 + 2 * (a2 // d) * (v * (s - b2) - w * c2)
    b3 %= 2 * abs(a3)
    c3 = (b3 * b3 - D) // (4 * a3)
    return QuadForm(a3, b3, c3)


def reduce_definite(f):
    a, b, c = f
    if a <= 0:
        raise DiscriminantError("definite reduction needs a > 0")
    while True:
        # normalize -a < b <= a
        r = (a - b) // (2 * a)
        b, c = b + 2 * r * a, a * r * r + b * r + c
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return QuadForm(a, b, c)


def _r(b, a, s):
    # the rho normalization of b modulo 2|a|, s = isqrt(D)
    m = 2 * abs(a)
    if abs(a) > s:
        r = b % m
        if r > abs(a):
            r -= m
        return r
    return s - ((s - b) % m)


def rho(f, s=None):
    a, b, c = f
    D = f.disc
    if s is None:
        s = math.isqrt(D)
    b2 = _r(-b, c, s)
    return QuadForm(c, b2, (b2 * b2 - D) // (4 * c))


def is_reduced_indefinite(f, s=None):
    a, b, _ = f
    if s is None:
        s = math.isqrt(f.disc)
    return 0 < b <= s and 2 * abs(a) - b <= s < 2 * abs(a) + b


def reduce_indefinite(f):
    s = math.isqrt(f.disc)
    steps = 0
    while not is_reduced_indefinite(f, s):
        f = rho(f, s)
        steps += 1
        if steps > 10000:
            raise RuntimeError("indefinite reduction did not terminate")
    return f


def reduce_form(f):
    return reduce_definite(f) if f.disc < 0 else reduce_indefinite(f)


def reduced_forms(D):
    """All primitive reduced forms of discriminant D."""
    out = []
    if D < 0:
        amax = math.isqrt(-D // 3)
        for a in range(1, amax + 1):
            for b in range(-a + 1, a + 1):
                if (b - D) % 2:
                    continue
                num = b * b - D
                if num % (4 * a):
                    continue
                c = num // (4 * a)
                if c < a or (c == a and b < 0):
                    continue
                if math.gcd(math.gcd(a, b), c) == 1:
                    out.append(QuadForm(a, b, c))
        return out
    s = math.isqrt(D)
    for b in range(1, s + 1):
        if (b - D) % 2:
            continue
        m = (D - b * b) // 4
        lo = (s - b) // 2 + 1  # 2|a| > s - b
        hi = (s + b) // 2  # 2|a| - b <= s
        for a in range(max(lo, 1), hi + 1):
            if 2 * a + b <= s or m % a:
                continue
            c = m // a
            for sa in (a, -a):
                f = QuadForm(sa, b, -c if sa > 0 else c)
                if math.gcd(math.gcd(a, b), c) == 1:
                    out.append(f)
    return out


def rho_cycles(D):
    forms = reduced_forms(D)
    s = math.isqrt(D)
    seen = set()
    cycles = []
    for f in forms:
        if f in seen:
            continue
        cyc = []
        g = f
        while g not in seen:
            seen.add(g)
            cyc.append(g)
            g = rho(g, s)
        cycles.append(cyc)
    return cycles


# --- class group ------------------------------------------------------------------


class FormGroup:
    """Classes of one discriminant with multiplication on class indices."""

    def __init__(self, D):
        self.D = D
        if D < 0:
            self.reps = reduced_forms(D)
            self.index = {f: i for i, f in enumerate(self.reps)}
        else:
            cycles = rho_cycles(D)
            self.reps = [c[0] for c in cycles]
            self.index = {f: i for i, c in enumerate(cycles) for f in c}
        self.h = len(self.reps)
        self.identity = self.index[reduce_form(principal_form(D))]

    def lookup(self, f):
        return self.index[reduce_form(f)]

    def mul(self, i, j):
        return self.lookup(compose_raw(self.reps[i], self.reps[j]))

    def inv(self, i):
        return self.lookup(inverse_form(self.reps[i]))

    def pow(self, i, m):
        # square-and-multiply on class indices
        result, base = self.identity, i
        while m:
            if m & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            m >>= 1
        return result

    def order(self, i):
        k, x = 1, i
        while x != self.identity:
            x = self.mul(x, i)
            k += 1
        return k


def _factor(n):
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _closure(G, elems):
    S = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in elems:
                y = G.mul(x, g)
                if y not in S:
                    S.add(y)
                    nxt.append(y)
        frontier = nxt
    return S


def _p_basis(G, S, p):
    """Basis of the abelian p-group S (set of class indices), largest orders first."""
    basis = []
    H = {G.identity}

    def coset_order(x):
        k, y = 0, x
        while y not in H:
            y = G.pow(y, p)
            k += 1
        return k

    while len(H) < len(S):
        x = max(sorted(S - H), key=coset_order)
        k = coset_order(x)
        y = G.pow(x, p**k)
        h = next((h for h in sorted(H) if G.pow(h, p**k) == y), None)
        if h is None:
            raise RuntimeError("p-group basis adjustment failed")
        g = G.mul(x, G.inv(h))
        basis.append((g, k))
        H = _closure(G, [b for b, _ in basis])
    return basis


@dataclass
class FormClassGroup:
    discriminant: int
    h: int
    invariants_list: list = field(default_factory=list)  # elementary divisors, ascending
    generators: list = field(default_factory=list)  # one form per elementary divisor

    def rank(self, p):
        return sum(1 for d in self.invariants_list if d % p == 0)

    def invariant_factors(self):
        """Invariant factors d1 | d2 | ... (ascending), assembled from the elementary divisors."""
        by_prime = {}
        for d in self.invariants_list:
            q = next(iter(_factor(d)))
            by_prime.setdefault(q, []).append(d)
        length = max((len(v) for v in by_prime.values()), default=0)
        out = [1] * length
        for divs in by_prime.values():
            for pos, d in enumerate(sorted(divs, reverse=True)):
                out[length - 1 - pos] *= d
        return out


def class_group(D, bound=DEFAULT_BOUND):
    D = int(D)
    if abs(D) > bound:
        raise DiscriminantError(f"|D| = {abs(D)} exceeds bound {bound}")
    G = FormGroup(D)
    h = G.h
    pairs = []
    for p, e in sorted(_factor(h).items()):
        # Sylow p-subgroup: closure of the (h / p^e)-th powers
        cof = h // p**e
        S = {G.identity}
        for i in range(h):
            if len(S) == p**e:
                break
            y = G.pow(i, cof)
            if y not in S:
                S = _closure(G, list(S | {y}))
        pairs += [(p**k, G.reps[g]) for g, k in _p_basis(G, S, p)]
    pairs.sort(key=lambda t: (t[0], t[1].a, t[1].b))
    return FormClassGroup(D, h, [d for d, _ in pairs], [g for _, g in pairs])


def rank_p(D, p=5, bound=DEFAULT_BOUND, cache=None):
    D = int(D)
    if cache is not None:
        hit = cache.get(D)
        if hit is not None:
            return sum(1 for d in hit[1] if d % p == 0)
    cg = class_group(D, bound)
    if cache is not None:
        cache.put(D, cg.h, cg.invariants_list)
    return cg.rank(p)


def torsion_rank(D, p=5):
    """log_p #{x : x^p = 1}, computed by brute force over all classes."""
    G = FormGroup(int(D))
    count = sum(1 for i in range(G.h) if G.pow(i, p) == G.identity)
    r = round(math.log(count, p))
    if p**r != count:
        raise RuntimeError("torsion count is not a power of p")
    return r


# --- Pell ---------------------------------------------------------------------


def pell4(N):
    """Minimal positive solution (x, y) of x^2 - N y^2 = 4."""
    N = int(N)
    if N <= 0 or is_square(N):
        raise DiscriminantError(f"{N} must be positive and not a square")
    if N <= 16:
        y = 1
        while True:
            x2 = 4 + N * y * y
            if is_square(x2):
                return math.isqrt(x2), y
            y += 1
    s = math.isqrt(N)
    m, d, a = 0, 1, s
    p0, p1 = 1, s
    q0, q1 = 0, 1
    best = None
    while True:
        norm = p1 * p1 - N * q1 * q1
        cand = None
        if norm == 4:
            cand = (p1, q1)
        elif norm == 1:
            cand = (2 * p1, 2 * q1)
        if cand and (best is None or cand[1] < best[1]):
            best = cand
        if best is not None and q1 >= best[1]:
            break
        m = d * a - m
        d = (N - m * m) // d
        a = (s + m) // d
        p0, p1 = p1, a * p1 + p0
        q0, q1 = q1, a * q1 + q0
    x, y = best
    assert x * x - N * y * y == 4
    return x, y


# --- cache --------------------------------------------------------------------


class ClassGroupCache:
    """Append-only text cache, one line 'D;h;divisors_csv' per discriminant."""

    def __init__(self, path):
        self.path = Path(path)
        self.data = {}
        if self.path.exists():
            for line in self.path.read_text().splitlines():
                line = line.strip()
                if not line:
                    continue
                D, h, divs = line.split(";")
                self.data[int(D)] = (int(h), [int(x) for x in divs.split(",") if x])

    def get(self, D):
        return self.data.get(int(D))

    def put(self, D, h, divisors):
        D = int(D)
        if D in self.data:
            return
        self.data[D] = (int(h), list(divisors))
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a") as fh:
            fh.write(f"{D};{h};{','.join(map(str, divisors))}\n")


def default_cache_path():
    return Path(os.environ.get("QTL_CACHE", Path.home() / ".cache" / "qtl" / "classgroups.txt"))
