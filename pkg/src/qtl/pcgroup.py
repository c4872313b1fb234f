"""Finite p-groups given by consistent polycyclic presentations.

Elements are exponent vectors (e_1, ..., e_n) standing for g_1^e_1 ... g_n^e_n.
Relations use the convention [g_j, g_i] = g_j^-1 g_i^-1 g_j g_i for j > i.

For groups of order at most p^5 a full multiplication table is built with
numpy and every subgroup computation runs on index sets.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

TABLE_LIMIT = 5  # largest n with a dense Cayley table (5^5 = 3125 elements)
LINE_DIRECTIONS = ((1, 0), (1, 1), (1, 2), (1, 3), (1, 4), (0, 1))


class PresentationError(ValueError):
    pass


class SearchBudgetExceeded(RuntimeError):
    pass


def _norm_word(word, p):
    # word: iterable of (generator, exponent), generators 1-based, exponents in [0, p)
    out = []
    for g, e in word:
        if not 0 <= int(e) < p:
            raise PresentationError(f"exponent {e} of g{g} not reduced mod {p}")
        if int(e):
            out.append((int(g), int(e)))
    return tuple(out)


@dataclass(frozen=True)
class PcPresentation:
    prime: int
    ngens: int
    power_relations: tuple = ()
    commutator_relations: tuple = ()
    name: str = ""
    generator_count: int = 2

    def __post_init__(self):
        n = self.ngens
        powers = list(self.power_relations) + [()] * (n - len(self.power_relations))
        object.__setattr__(self, "power_relations", tuple(_norm_word(w, self.prime) for w in powers[:n]))
        comms = {}
        for (j, i), w in dict(self.commutator_relations).items():
            comms[(int(j), int(i))] = _norm_word(w, self.prime)
        object.__setattr__(
            self, "commutator_relations", tuple(sorted((k, v) for k, v in comms.items() if v))
        )
        for i, w in enumerate(self.power_relations, start=1):
            for g, _ in w:
                if not i < g <= n:
                    raise PresentationError(f"g{i}^{self.prime} mentions g{g}")
        for (j, i), w in self.commutator_relations:
            if not 1 <= i < j <= n:
                raise PresentationError(f"bad commutator [g{j},g{i}]")
            for g, _ in w:
                if not j < g <= n:
                    raise PresentationError(f"[g{j},g{i}] mentions g{g}")

    @property
    def order(self):
        return self.prime ** self.ngens

    def power(self, i):
        return self.power_relations[i - 1]

    def commutator(self, j, i):
        return dict(self.commutator_relations).get((j, i), ())

    def format(self):
        lines = [f"group {self.name} order={self.prime}^{self.ngens} mingens={self.generator_count}"]
        for i, w in enumerate(self.power_relations, start=1):
            if w:
                lines.append(f"g{i}^{self.prime} = {format_word(w)}")
        for (j, i), w in self.commutator_relations:
            lines.append(f"[g{j},g{i}] = {format_word(w)}")
        return "\n".join(lines)


def format_word(word):
    return " ".join(f"g{g}^{e}" for g, e in word) if word else "1"


def parse_word(text):
    text = text.strip()
    if text in ("", "1"):
        return ()
    out = []
    for tok in text.split():
        m = re.fullmatch(r"g(\d+)(?:\^(-?\d+))?", tok)
        if not m:
            raise PresentationError(f"bad word factor {tok!r}")
        out.append((int(m.group(1)), int(m.group(2) or 1)))
    return tuple(out)


_HEADER = re.compile(r"group\s+(\S+)\s+order=(\d+)\^(\d+)\s+mingens=(\d+)")
_POWER = re.compile(r"g(\d+)\^(\d+)\s*=\s*(.*)")
_COMM = re.compile(r"\[g(\d+),\s*g(\d+)\]\s*=\s*(.*)")


def parse_presentations(text):
    """Parse the presentation data format; returns a dict name -> PcPresentation."""
    out = {}
    cur = None

    def finish():
        if cur is not None:
            name, p, n, d1, powers, comms = cur
            out[name] = PcPresentation(p, n, tuple(powers), tuple(comms.items()), name, d1)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip() if not raw.lstrip().startswith("group") else raw.strip()
        if not line:
            continue
        m = _HEADER.fullmatch(line)
        if m:
            finish()
            p, n = int(m.group(2)), int(m.group(3))
            cur = (m.group(1), p, n, int(m.group(4)), [()] * n, {})
            continue
        if cur is None:
            raise PresentationError(f"line {lineno}: relation before group header")
        m = _COMM.fullmatch(line)
        if m:
            cur[5][(int(m.group(1)), int(m.group(2)))] = parse_word(m.group(3))
            continue
        m = _POWER.fullmatch(line)
        if m:
            if int(m.group(2)) != cur[1]:
                raise PresentationError(f"line {lineno}: exponent must be the prime")
            i = int(m.group(1))
            if not 1 <= i <= cur[2]:
                raise PresentationError(f"line {lineno}: generator out of range")
            cur[4][i - 1] = parse_word(m.group(3))
            continue
        raise PresentationError(f"line {lineno}: cannot parse {raw!r}")
    finish()
    return out


DATA_DIR = Path(__file__).with_name("data")


@lru_cache(maxsize=None)
def load_presentations(path=None):
    path = Path(path) if path else DATA_DIR / "presentations.txt"
    return parse_presentations(path.read_text())


def get_presentation(name, path=None):
    pres = load_presentations(path)
    if name not in pres:
        raise KeyError(f"no presentation named {name}")
    return pres[name]


@dataclass(frozen=True)
class Element:
    exponents: tuple

    def __str__(self):
        parts = [f"g{i}^{e}" for i, e in enumerate(self.exponents, start=1) if e]
        return " ".join(parts) if parts else "1"


# --- collection -------------------------------------------------------------


class Collector:
    """Normal-form arithmetic for one presentation (collection to the left)."""

    def __init__(self, pres):
        self.pres = pres
        self.p = pres.prime
        self.n = pres.ngens
        n = self.n
        self._pow = [pres.power(i + 1) for i in range(n)]
        # conjugate g_j^{g_k} = g_j [g_j, g_k] as a word, 0-based generators
        self._conj = {}
        for k in range(n):
            for j in range(k + 1, n):
                w = pres.commutator(j + 1, k + 1)
                self._conj[(j, k)] = ((j, 1),) + tuple((g - 1, e) for g, e in w)
        self._powz = [tuple((g - 1, e) for g, e in w) for w in self._pow]

    def identity(self):
        return (0,) * self.n

    def _mul_gen(self, e, k):
        # e: list, multiply in place by g_k on the right (0-based k)
        p = self.p
        tail = e[k + 1:]
        for j in range(k + 1, self.n):
            e[j] = 0
        letters = []
        e[k] += 1
        if e[k] == p:
            e[k] = 0
            letters.extend(self._powz[k])
        for off, ej in enumerate(tail):
            if ej:
                letters.extend(self._conj[(k + 1 + off, k)] * ej)
        for g, c in letters:
            for _ in range(c):
                self._mul_gen(e, g)

    def mul(self, x, y):
        e = list(x)
        for k, c in enumerate(y):
            for _ in range(c):
                self._mul_gen(e, k)
        return tuple(e)

    def inverse(self, x):
        cur = list(x)
        z = [0] * self.n
        for k in range(self.n):
            if cur[k]:
                t = self.p - cur[k]
                for _ in range(t):
                    self._mul_gen(cur, k)
                for _ in range(t):
                    self._mul_gen(z, k)
        return tuple(z)

    def gen(self, k, e=1):
        v = [0] * self.n
        v[k - 1] = e % self.p
        return tuple(v)

    def power(self, x, m):
        out = self.identity()
        for _ in range(m):
            out = self.mul(out, x)
        return out

    def collect(self, word):
        """Word: sequence of signed 1-based generator indices or (gen, exp) pairs."""
        e = self.identity()
        for letter in word:
            if isinstance(letter, tuple):
                g, c = letter
            else:
                g, c = abs(letter), (1 if letter > 0 else -1)
            if not 1 <= g <= self.n:
                raise IndexError(f"generator index {g} out of range 1..{self.n}")
            x = self.gen(g) if c > 0 else self.inverse(self.gen(g))
            for _ in range(abs(c)):
                e = self.mul(e, x)
        return e

    def word_element(self, word):
        return self.collect(tuple((g, e) for g, e in word))


def collect(pres, word):
    return Element(_collector(pres).collect(word))


@lru_cache(maxsize=64)
def _collector(pres):
    return Collector(pres)


def consistency_check(pres):
    """Run the standard overlap test words; True iff all agree."""
    c = Collector(pres)
    p, n = c.p, c.n
    try:
        gens = [c.gen(i) for i in range(1, n + 1)]
        pm1 = [c.gen(i, p - 1) for i in range(1, n + 1)]
        m = c.mul
        for i, j, k in itertools.combinations(range(n), 3):
            # k > j > i as generator indices
            gi, gj, gk = gens[i], gens[j], gens[k]
            if m(m(gk, gj), gi) != m(gk, m(gj, gi)):
                return False
        for i, j in itertools.combinations(range(n), 2):
            gi, gj = gens[i], gens[j]
            if m(m(pm1[j], gj), gi) != m(pm1[j], m(gj, gi)):
                return False
            if m(m(gj, pm1[i]), gi) != m(gj, m(pm1[i], gi)):
                return False
        for i in range(n):
            if m(m(gens[i], pm1[i]), gens[i]) != m(gens[i], m(pm1[i], gens[i])):
                return False
    except RecursionError:
        return False
    return True


# --- table-based group engine ----------------------------------------------


class PcGroup:
    """Dense-table view of a small consistent presentation."""

    def __init__(self, pres):
        if pres.ngens > TABLE_LIMIT:
            raise SearchBudgetExceeded(f"order {pres.prime}^{pres.ngens} exceeds table limit")
        self.pres = pres
        self.p = p = pres.prime
        self.n = n = pres.ngens
        self.order = p ** n
        self.col = Collector(pres)
        self.weights = np.array([p ** (n - 1 - i) for i in range(n)], dtype=np.int64)
        N = self.order
        self.exps = np.array(list(itertools.product(range(p), repeat=n)), dtype=np.int64).reshape(N, n)
        right = np.empty((n, N), dtype=np.int32)
        for k in range(n):
            for x in range(N):
                right[k, x] = self.index(self.col.mul(tuple(self.exps[x]), self.col.gen(k + 1)))
        table = np.empty((N, N), dtype=np.int16 if N < 32768 else np.int32)
        table[:, 0] = np.arange(N)
        for y in range(1, N):
            ey = self.exps[y]
            k = int(np.nonzero(ey)[0][-1])
            prev = y - int(self.weights[k])
            table[:, y] = right[k, table[:, prev]]
        self.table = table
        inv = np.empty(N, dtype=np.int64)
        rows, cols = np.nonzero(table == 0)
        inv[rows] = cols
        self.inv = inv
        self.gens = [int(self.weights[k]) for k in range(n)]

    def index(self, e):
        return int(np.dot(np.asarray(e, dtype=np.int64), self.weights))

    def element(self, idx):
        return tuple(int(v) for v in self.exps[idx])

    def mul(self, x, y):
        return self.table[x, y]

    def comm(self, x, y):
        t = self.table
        return t[t[t[self.inv[x], self.inv[y]], x], y]

    def pow(self, x, m):
        out = np.zeros_like(np.asarray(x))
        for _ in range(m):
            out = self.table[out, x]
        return out

    def conj(self, x, y):
        # x^y = y^-1 x y
        return self.table[self.table[self.inv[y], x], y]

    # subgroups as sorted index arrays
    def closure(self, gens):
        gens = [int(g) for g in np.atleast_1d(gens)]
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        frontier = np.array([0])
        while frontier.size:
            nxt = self.table[np.ix_(frontier, gens)].ravel() if gens else np.array([], dtype=int)
            nxt = np.unique(nxt)
            nxt = nxt[~mask[nxt]]
            mask[nxt] = True
            frontier = nxt
        return mask

    def basis(self, mask):
        """Induced pc-sequence (one element per occupied depth) of a subgroup mask."""
        members = np.nonzero(mask)[0]
        exps = self.exps[members]
        out = []
        for k in range(self.n):
            cand = members[np.all(exps[:, :k] == 0, axis=1) & (exps[:, k] == 1)]
            if cand.size:
                out.append(int(cand.min()))
        return out

    def normal_closure(self, gens, within=None):
        # closing under conjugation by generators of `within` suffices in a finite group
        conjugators = self.gens if within is None else self.basis(within)
        mask = self.closure(gens)
        while True:
            members = np.nonzero(mask)[0]
            conj = self.conj(members[:, None], np.array(conjugators)[None, :]).ravel()
            if mask[conj].all():
                return mask
            mask = self.closure(np.unique(np.concatenate([self.basis(mask), conj[~mask[conj]]])))

    def commutator_subgroup(self, a, b):
        """[A, B] for subgroup masks A, B: normal closure in <A, B> of generator commutators."""
        a_idx, b_idx = np.array(self.basis(a)), np.array(self.basis(b))
        cs = np.unique(self.comm(a_idx[:, None], b_idx[None, :]).ravel())
        return self.normal_closure(cs, within=a | b)


@lru_cache(maxsize=64)
def _group(pres):
    return PcGroup(pres)


@dataclass
class Subgroup:
    generators: list
    canonical_basis: list
    order: int
    mask: np.ndarray = field(repr=False, default=None)

    def __contains__(self, elt):
        exps = elt.exponents if isinstance(elt, Element) else tuple(elt)
        p = round(len(self.mask) ** (1 / len(exps)))
        n = len(exps)
        idx = sum(e * p ** (n - 1 - i) for i, e in enumerate(exps))
        return bool(self.mask[idx])


def _subgroup(G, mask, gens=None):
    members = np.nonzero(mask)[0]
    basis = []
    exps = G.exps[members]
    # canonical induced pc-sequence: per depth, the least element with leading exponent 1
    for k in range(G.n):
        lead_ok = np.all(exps[:, :k] == 0, axis=1) & (exps[:, k] == 1)
        cand = members[lead_ok]
        if cand.size:
            basis.append(Element(G.element(int(cand.min()))))
    order = int(mask.sum())
    if G.p ** len(basis) != order:
        raise PresentationError("subgroup basis does not match order")
    if gens is None:
        gens = basis
    return Subgroup(list(gens), basis, order, mask)


def whole_group(pres):
    G = _group(pres)
    return _subgroup(G, np.ones(G.order, dtype=bool), [Element(G.element(g)) for g in G.gens])


def subgroup_from_elements(pres, elements):
    G = _group(pres)
    idx = [G.index(e.exponents if isinstance(e, Element) else e) for e in elements]
    return _subgroup(G, G.closure(idx), [Element(G.element(i)) for i in idx])


def derived_subgroup(pres, sub=None):
    G = _group(pres)
    m = np.ones(G.order, dtype=bool) if sub is None else sub.mask
    d = G.commutator_subgroup(m, m)
    d = G.normal_closure(np.nonzero(d)[0], within=m)
    return _subgroup(G, d)


def lower_central_series(pres):
    G = _group(pres)
    full = np.ones(G.order, dtype=bool)
    series = [_subgroup(G, full)]
    cur = full
    while cur.sum() > 1:
        nxt = G.normal_closure(np.nonzero(G.commutator_subgroup(cur, full))[0])
        if nxt.sum() == cur.sum():
            raise PresentationError("group is not nilpotent")
        series.append(_subgroup(G, nxt))
        cur = nxt
    return series


def nilpotency_class(pres):
    return len(lower_central_series(pres)) - 1


def frattini_subgroup(pres):
    G = _group(pres)
    full = np.arange(G.order)
    der = derived_subgroup(pres).mask
    powers = G.pow(full, G.p)
    return _subgroup(G, G.closure(np.concatenate([np.nonzero(der)[0], powers])))


# --- abelian invariants ------------------------------------------------------


@dataclass(frozen=True)
class AbelianInvariants:
    partition: tuple

    def __post_init__(self):
        part = tuple(sorted((int(x) for x in self.partition if int(x) > 0), reverse=True))
        object.__setattr__(self, "partition", part)

    def order(self, p=5):
        return p ** sum(self.partition)

    def __str__(self):
        if not self.partition:
            return "(0)"
        groups = itertools.groupby(self.partition)
        parts = []
        for v, run in groups:
            c = len(list(run))
            parts.append(f"{v}^{c}" if c > 1 else f"{v}")
        return "(" + "".join(parts) + ")"

    @classmethod
    def parse(cls, text):
        """Parse shorthand such as '(1^3)', '(21)', '(21^3)', '(1)'."""
        body = text.strip().strip("()")
        out = []
        for m in re.finditer(r"(\d)(?:\^(\d+))?", body):
            out.extend([int(m.group(1))] * int(m.group(2) or 1))
        return cls(tuple(out))


def _invariants_of_quotient(G, sub_mask, normal_mask):
    members = np.nonzero(sub_mask)[0]
    base = int(normal_mask.sum())
    counts = []
    x = members.copy()
    k = 0
    total = int(sub_mask.sum()) // base
    while True:
        k += 1
        x = G.pow(x, G.p)
        c = int(normal_mask[x].sum()) // base
        counts.append(c)
        if c == total:
            break
    # counts[k-1] = p^(sum min(lambda_i, k))
    logs = [0] + [round(np.log(c) / np.log(G.p)) for c in counts]
    ge = [logs[i] - logs[i - 1] for i in range(1, len(logs))]  # number of parts >= i
    part = []
    for i, r in enumerate(ge, start=1):
        nxt = ge[i] if i < len(ge) else 0
        part.extend([i] * (r - nxt))
    return AbelianInvariants(tuple(part))


def abelian_invariants(pres, sub=None):
    """Invariants of sub/sub' (the whole group when sub is None)."""
    G = _group(pres)
    if sub is None:
        sub = whole_group(pres)
    der = derived_subgroup(pres, sub)
    return _invariants_of_quotient(G, sub.mask, der.mask)


# --- maximal subgroups and transfers -------------------------------------------


def _check_rank2(pres):
    G = _group(pres)
    if pres.generator_count != 2:
        raise PresentationError(f"unsupported rank {pres.generator_count}; need d1 = 2")
    phi = frattini_subgroup(pres).mask
    if G.order // int(phi.sum()) != G.p ** 2:
        raise PresentationError("Frattini quotient is not of rank 2")
    for g in G.gens[2:]:
        if not phi[g]:
            raise PresentationError("generators beyond g2 must lie in the Frattini subgroup")
    return G


def _coords(G, idx):
    e = G.exps[idx]
    return e[..., 0] % G.p, e[..., 1] % G.p


def line_index(vec, p=5):
    """Position 1..6 of the line spanned by vec in F_p^2 (fixed direction order)."""
    a, b = vec[0] % p, vec[1] % p
    if a == 0 and b == 0:
        raise ValueError("zero vector spans no line")
    if a == 0:
        return p + 1
    t = (b * pow(a, -1, p)) % p
    return t + 1


def maximal_subgroups(pres):
    G = _check_rank2(pres)
    a, b = _coords(G, np.arange(G.order))
    out = []
    for u, v in LINE_DIRECTIONS:
        # (a, b) lies on the line through (u, v) iff a v - b u = 0
        mask = ((a * v - b * u) % G.p) == 0
        out.append(_subgroup(G, mask))
    return out


@dataclass
class TransferMap:
    """Artin transfer V: G/G' -> H/H' for one maximal subgroup H."""

    subgroup: Subgroup
    derived_mask: np.ndarray = field(repr=False)
    images: tuple = ()  # V(g1), V(g2) as Element representatives
    _group: PcGroup = field(repr=False, default=None)

    def __call__(self, x):
        G = self._group
        idx = G.index(x.exponents if isinstance(x, Element) else x)
        return Element(G.element(_transfer_value(G, self.subgroup.mask, idx)))

    def congruent(self, x, y):
        G = self._group
        xi = G.index(x.exponents if isinstance(x, Element) else x)
        yi = G.index(y.exponents if isinstance(y, Element) else y)
        return bool(self.derived_mask[G.table[xi, G.inv[yi]]])

    def kernel(self):
        """Kernel as a set of (a, b) in F_p^2 = G/G' coordinates on g1, g2."""
        G = self._group
        out = set()
        for a in range(G.p):
            for b in range(G.p):
                idx = G.index((a, b) + (0,) * (G.n - 2))
                if self.derived_mask[_transfer_value(G, self.subgroup.mask, idx)]:
                    out.add((a, b))
        return out


def _transfer_value(G, hmask, g):
    # transversal t_i = h0^i for an h0 outside H
    h0 = next(x for x in G.gens[:2] if not hmask[x])
    trans = [0]
    for _ in range(G.p - 1):
        trans.append(int(G.table[trans[-1], h0]))
    inv = G.inv

    def coset(x):
        for i, t in enumerate(trans):
            if hmask[G.table[x, inv[t]]]:
                return i
        raise PresentationError("transversal does not cover G")

    seen = set()
    value = 0
    for i in range(G.p):
        if i in seen:
            continue
        t = trans[i]
        length = 0
        j = i
        while True:
            seen.add(j)
            length += 1
            j = coset(G.table[trans[j], g])
            if j == i:
                break
        gl = int(G.pow(np.array(g), length))
        piece = G.table[G.table[t, gl], inv[t]]
        value = int(G.table[value, piece])
    return value


def artin_transfer(pres, H):
    G = _group(pres)
    if G.order // H.order != G.p:
        raise PresentationError("transfer needs a subgroup of index p")
    der = derived_subgroup(pres, H).mask
    images = tuple(Element(G.element(_transfer_value(G, H.mask, g))) for g in G.gens[:2])
    return TransferMap(H, der, images, G)


@dataclass(frozen=True)
class KappaClass:
    canonical: tuple
    total: int
    fixed: int
    cycles: tuple  # cycle lengths when kappa is a permutation, else ()
    name: str

    def __str__(self):
        return self.name


def _relabel(kappa, perm):
    # perm maps position i (0-based) to new label perm[i]
    out = [0] * len(kappa)
    for i, k in enumerate(kappa):
        out[perm[i]] = 0 if k == 0 else perm[k - 1] + 1
    return tuple(out)


def kappa_class(kappa):
    kappa = tuple(int(k) for k in kappa)
    m = len(kappa)
    canon = min(_relabel(kappa, perm) for perm in itertools.permutations(range(m)))
    total = sum(1 for k in kappa if k == 0)
    fixed = sum(1 for i, k in enumerate(kappa, start=1) if k == i)
    cycles = ()
    if sorted(kappa) == list(range(1, m + 1)):
        seen, lens = set(), []
        for s in range(1, m + 1):
            if s in seen:
                continue
            n, j = 0, s
            while j not in seen:
                seen.add(j)
                j = kappa[j - 1]
                n += 1
            lens.append(n)
        cycles = tuple(sorted(lens, reverse=True))
    return KappaClass(canon, total, fixed, cycles, _kappa_name(kappa, total, fixed, cycles))


_NUM = {2: "two", 3: "three"}


def _kappa_name(kappa, total, fixed, cycles):
    m = len(kappa)
    if cycles:
        nontriv = [c for c in cycles if c > 1]
        if not nontriv:
            return "identity"
        if len(set(nontriv)) == 1 and len(nontriv) > 1:
            return f"{_NUM.get(len(nontriv), len(nontriv))} {nontriv[0]}-cycles"
        if len(nontriv) == 1:
            return f"{nontriv[0]}-cycle"
        return "+".join(f"{c}-cycle" for c in nontriv)
    if total == m:
        return "constant"
    images = {k for k in kappa if k}
    if total == 0 and len(images) == 1:
        return "constant"
    if total == 1 and len(images) == 1:
        return "nrl. const. with fp." if fixed else "nearly constant"
    if total == m - 1 and fixed == 1:
        return "fixed point"
    return f"{total} total, {fixed} fixed"


def kappa_from_string(text):
    s = text.strip().strip("()")
    return tuple(int(ch) for ch in s)


@dataclass
class ArtinPattern:
    kappa: tuple
    tau: tuple
    kappa_class: KappaClass

    def tau_multiset(self):
        return tuple(sorted((t.partition for t in self.tau), reverse=True))


def artin_pattern(pres):
    G = _check_rank2(pres)
    kappa, tau = [], []
    for H in maximal_subgroups(pres):
        V = artin_transfer(pres, H)
        ker = V.kernel()
        if len(ker) == G.p ** 2:
            kappa.append(0)
        elif len(ker) == G.p:
            v = next(x for x in ker if x != (0, 0))
            kappa.append(line_index(v, G.p))
        else:
            raise PresentationError(f"transfer kernel of order {len(ker)} is not a line")
        tau.append(abelian_invariants(pres, H))
    return ArtinPattern(tuple(kappa), tuple(tau), kappa_class(kappa))


def tau_string(tau):
    """Shorthand with multiplicities, e.g. '(1^3)^2,(21)^4'."""
    parts = sorted((t.partition for t in tau), reverse=True)
    out = []
    for part, run in itertools.groupby(parts):
        c = len(list(run))
        s = str(AbelianInvariants(part))
        out.append(f"{s}^{c}" if c > 1 else s)
    return ",".join(out)


def parse_tau(text):
    """Inverse of tau_string; returns a sorted tuple of partitions."""
    body = text.strip().strip("[]")
    out = []
    for m in re.finditer(r"(\(([\d^]+)\)|(\d[\d^]*))(?:\^(\d+))?", body):
        inner = m.group(2) or m.group(3)
        inv = AbelianInvariants.parse(inner)
        out.extend([inv.partition] * int(m.group(4) or 1))
    return tuple(sorted(out, reverse=True))


# --- parent ----------------------------------------------------------------------


def parent_quotient(pres):
    """Presentation of G / gamma_c(G), where c is the nilpotency class."""
    series = lower_central_series(pres)
    if len(series) <= 2:
        raise PresentationError("abelian group has no parent")
    last = series[-2]
    G = _group(pres)
    size = len(last.canonical_basis)
    m = pres.ngens - size
    tail = np.zeros(G.order, dtype=bool)
    tail[np.all(G.exps[:, :m] == 0, axis=1)] = True
    if not np.array_equal(tail, last.mask):
        raise PresentationError("last lower central term is not spanned by trailing generators")

    def cut(w):
        return tuple((g, e) for g, e in w if g <= m)

    powers = tuple(cut(pres.power(i)) for i in range(1, m + 1))
    comms = tuple(((j, i), cut(w)) for (j, i), w in pres.commutator_relations if j <= m)
    name = f"parent({pres.name})" if pres.name else ""
    return PcPresentation(pres.prime, m, powers, comms, name, pres.generator_count)


# --- sigma-group search ------------------------------------------------------------


def _mat_mul(A, B, p):
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(2)) % p for j in range(2)) for i in range(2)
    )


def _mat_order(A, p):
    ident = ((1, 0), (0, 1))
    M, k = A, 1
    while M != ident:
        M = _mat_mul(M, A, p)
        k += 1
    return k


def admissible_matrices(d, p=5, square_minus_identity=False):
    """Invertible A over F_p with ord(A) = d and I + A + ... + A^(d-1) = 0."""
    out = []
    minus = ((p - 1, 0), (0, p - 1))
    for a, b, c, e in itertools.product(range(p), repeat=4):
        if (a * e - b * c) % p == 0:
            continue
        A = ((a, b), (c, e))
        if _mat_order(A, p) != d:
            continue
        acc = ((1, 0), (0, 1))
        total = ((0, 0), (0, 0))
        for _ in range(d):
            total = tuple(tuple((total[i][j] + acc[i][j]) % p for j in range(2)) for i in range(2))
            acc = _mat_mul(acc, A, p)
        if total != ((0, 0), (0, 0)):
            continue
        if square_minus_identity and _mat_mul(A, A, p) != minus:
            continue
        out.append(A)
    return out


class _AutSearch:
    """Lift induced matrices on G/G' to automorphisms, vectorized over lifts."""

    def __init__(self, pres):
        self.G = G = _check_rank2(pres)
        self.pres = pres
        der = derived_subgroup(pres).mask
        self.der = np.nonzero(der)[0]
        self.words = self._gen_words()

    def _gen_words(self):
        # express every pc generator as a word in g1, g2 by breadth-first search
        G = self.G
        g1, g2 = G.gens[0], G.gens[1]
        moves = [(g1, 1), (g2, 2), (int(G.inv[g1]), -1), (int(G.inv[g2]), -2)]
        words = {0: ()}
        frontier = [0]
        while frontier and len(words) < G.order:
            nxt = []
            for x in frontier:
                for g, letter in moves:
                    y = int(G.table[x, g])
                    if y not in words:
                        words[y] = words[x] + (letter,)
                        nxt.append(y)
            frontier = nxt
        return [words[g] for g in G.gens]

    def _eval(self, word, X, Y):
        G = self.G
        out = np.zeros_like(X)
        iX, iY = G.inv[X], G.inv[Y]
        for letter in word:
            out = G.table[out, {1: X, 2: Y, -1: iX, -2: iY}[letter]]
        return out

    def _eval_rel(self, word, imgs):
        G = self.G
        out = np.zeros_like(imgs[0])
        for g, e in word:
            for _ in range(e % G.p):
                out = G.table[out, imgs[g - 1]]
        return out

    def lifts(self, A):
        """Boolean mask over lifts (c1, c2) in G' x G' that define homomorphisms."""
        G, p = self.G, self.G.p
        (a, b), (c, d) = A
        # image of g1 has coordinates (a, c), image of g2 has (b, d): columns of A
        base1 = G.index((a, c) + (0,) * (G.n - 2))
        base2 = G.index((b, d) + (0,) * (G.n - 2))
        X = G.table[base1, self.der]
        Y = G.table[base2, self.der]
        X, Y = np.meshgrid(X, Y, indexing="ij")
        X, Y = X.ravel().astype(np.int64), Y.ravel().astype(np.int64)
        imgs = [self._eval(w, X, Y) for w in self.words]
        ok = np.ones(X.shape, dtype=bool)
        pres = self.pres
        for i in range(1, G.n + 1):
            lhs = G.pow(imgs[i - 1], p)
            ok &= lhs == self._eval_rel(pres.power(i), imgs)
        for j in range(2, G.n + 1):
            for i in range(1, j):
                lhs = G.comm(imgs[j - 1], imgs[i - 1])
                ok &= lhs == self._eval_rel(pres.commutator(j, i), imgs)
        return X, Y, imgs, ok

    def permutation(self, imgs, k):
        """Full permutation of G for the k-th lift: g1^e1...gn^en -> prod im_i^e_i."""
        G = self.G
        images = [int(im[k]) for im in imgs]
        cur = np.zeros(G.order, dtype=np.int64)
        for i in range(G.n):
            e = G.exps[:, i]
            for step in range(1, G.p):
                sel = e >= step
                cur[sel] = G.table[cur[sel], images[i]]
        return cur

    def find(self, A, d):
        """An automorphism of exact order d inducing A, or None."""
        X, Y, imgs, ok = self.lifts(A)
        idx = np.nonzero(ok)[0]
        for k in idx[:8]:
            perm = self.permutation(imgs, k)
            if np.unique(perm).size != self.G.order:
                continue
            order = _perm_order(perm)
            if order % d:
                continue
            m = order // d
            sigma = perm
            for _ in range(m - 1):
                sigma = perm[sigma]
            if _perm_order(sigma) == d and _is_hom(self.G, sigma):
                return sigma
        return None


def _perm_order(perm):
    ident = np.arange(perm.size)
    cur = perm.copy()
    k = 1
    while not np.array_equal(cur, ident):
        cur = perm[cur]
        k += 1
    return k


def _is_hom(G, perm, samples=None):
    gens = G.gens
    x = np.arange(G.order)
    for g in gens:
        if not np.array_equal(perm[G.table[x, g]], G.table[perm[x], perm[g]]):
            return False
    return True


@lru_cache(maxsize=64)
def _aut_search(pres):
    return _AutSearch(pres)


def find_sigma_automorphism(pres, d, square_minus_identity=False):
    """Return (matrix, permutation) of a degree-d sigma automorphism, or None."""
    if pres.order > pres.prime ** TABLE_LIMIT:
        raise SearchBudgetExceeded("automorphism search is limited to order 5^5")
    search = _aut_search(pres)
    for A in admissible_matrices(d, pres.prime, square_minus_identity):
        sigma = search.find(A, d)
        if sigma is not None:
            return A, sigma
    return None


def sigma_degree_test(pres, d):
    if d not in (2, 4):
        raise ValueError("degree must be 2 or 4")
    return find_sigma_automorphism(pres, d) is not None


@dataclass(frozen=True)
class SigmaFlags:
    degree4: bool
    degree2: bool
    combined_flag: bool
    single_sigma: bool | None = None  # one sigma of order 4 with sigma^2 inducing -I


def single_sigma_test(pres):
    """Strict reading: one order-4 sigma whose square inverts G/G'."""
    return find_sigma_automorphism(pres, 4, square_minus_identity=True) is not None


def sigma_flags(pres, strict=False):
    # combined flag: sigma-group of degree 4 and of degree 2, possibly through
    # different automorphisms; this is the reading that reproduces the stem table
    deg4 = sigma_degree_test(pres, 4)
    deg2 = sigma_degree_test(pres, 2)
    single = single_sigma_test(pres) if strict else None
    return SigmaFlags(deg4, deg2, deg4 and deg2, single)
