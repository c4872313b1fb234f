"""Deduction layer: reflection cases, extension structure, class-number rules,
Shafarevich admissibility, identification of the second 5-class group and the
5-class tower length of M = Q((zeta5 - zeta5^-1) sqrt d).
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from . import pcgroup as pc

DATA_DIR = Path(__file__).parent / "data"
CATALOG_PATH = DATA_DIR / "catalog.txt"

IMAGINARY = "imaginary"  # d > 0, unit rank 1
REAL = "real"  # d < 0, unit rank 3
ELL_GE3 = "≥3 (conjectured 3)"


class InconsistentObservation(ValueError):
    pass


class CatalogError(ValueError):
    pass


def signature_of(d):
    if d == 0:
        raise ValueError("d must be nonzero")
    return IMAGINARY if d > 0 else REAL


def unit_rank(signature):
    if signature not in (IMAGINARY, REAL):
        raise ValueError(f"unknown signature {signature!r}")
    return 1 if signature == IMAGINARY else 3


# --- transfer target patterns with unknown components ---------------------------


@dataclass(frozen=True)
class TauPattern:
    """A multiset of six abelian type invariants, some possibly unknown ('?')."""

    known: tuple  # sorted partitions, descending
    unknown: int = 0

    def __post_init__(self):
        object.__setattr__(self, "known", tuple(sorted((tuple(k) for k in self.known), reverse=True)))

    @classmethod
    def parse(cls, text):
        known, unknown = [], 0
        for token in _split_top(text.strip().strip("[]")):
            m = re.fullmatch(r"\?(?:\^(\d+))?", token)
            if m:
                unknown += int(m.group(1) or 1)
            else:
                known.extend(pc.parse_tau(token))
        return cls(tuple(known), unknown)

    @classmethod
    def from_invariants(cls, tau):
        return cls(tuple(t.partition if isinstance(t, pc.AbelianInvariants) else tuple(t) for t in tau), 0)

    @property
    def size(self):
        return len(self.known) + self.unknown

    @property
    def fully_known(self):
        return self.unknown == 0

    @property
    def all_unknown(self):
        return not self.known

    def matches(self, observed):
        """Whether this (catalog) pattern is compatible with an observed pattern.

        Unknown-only patterns match only each other; otherwise every known
        component here must occur in the observation, and the observation's
        remaining known components must fit into the unknown slots here.
        """
        if self.size != observed.size:
            return False
        if self.all_unknown or observed.all_unknown:
            return self.all_unknown and observed.all_unknown
        mine, theirs = Counter(self.known), Counter(observed.known)
        if mine - theirs:
            return False
        return sum((theirs - mine).values()) <= self.unknown

    def __str__(self):
        parts = [pc.tau_string([pc.AbelianInvariants(k) for k in self.known])] if self.known else []
        if self.unknown:
            parts.append("?" if self.unknown == 1 else f"?^{self.unknown}")
        return ",".join(parts)


def _split_top(text):
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append(cur.strip())
            cur = ""
        else:
            cur += ch
    if cur.strip():
        out.append(cur.strip())
    return out


# --- observations and reflection cases ------------------------------------------------


@dataclass(frozen=True)
class FieldObservation:
    d: int
    r1: int | None = None
    r2: int | None = None
    delta1: int | None = None
    delta2: int | None = None
    kappa: str | None = None
    tau: TauPattern | None = None

    def __post_init__(self):
        if self.d == 0:
            raise ValueError("d must be nonzero")
        for name in ("delta1", "delta2"):
            v = getattr(self, name)
            if v is not None and v not in (0, 1):
                raise ValueError(f"{name} must be 0 or 1, got {v}")
        for name in ("r1", "r2"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValueError(f"{name} must be nonnegative")

    @property
    def signature(self):
        return signature_of(self.d)

    def rank_tuple(self):
        vals = (self.r1, self.delta1, self.r2, self.delta2)
        if any(v is None for v in vals):
            raise ValueError("observation needs r1, delta1, r2, delta2")
        return vals


# rows are (r1, delta1, r2, delta2)
CASES = {
    IMAGINARY: {
        "a": (1, 0, 0, 1),
        "b": (0, 1, 1, 0),
        "c": (1, 1, 1, 1),
        "d": (0, 0, 0, 0),
        "e": (1, 1, 0, 0),
        "f": (0, 0, 1, 1),
        "g": (2, 1, 0, 1),
        "h": (0, 1, 2, 1),
    },
    REAL: {
        "a": (2, 0, 0, 0),
        "b": (0, 0, 2, 0),
        "c": (1, 0, 1, 0),
        "d": (2, 1, 1, 0),
        "e": (1, 0, 2, 1),
    },
}

# cases in which all six unramified quintics are normal over Q with one Frobenius type
UNIFORM_CASES = {
    IMAGINARY: {"a": "F5,2", "g": "F5,2", "b": "F5,3", "h": "F5,3"},
    REAL: {"a": "F5,2", "b": "F5,3"},
}


@dataclass(frozen=True)
class ExtensionStructure:
    """Galois structure of the six unramified cyclic quintic extensions E_1..E_6 as fields over Q."""

    uniform: bool
    galois_groups: tuple  # six entries: "F5,2", "F5,3" or None (non-Galois)
    conjugate_pairs: tuple = ()  # index pairs (1-based) of isomorphic non-Galois fields

    def describe(self):
        if self.uniform:
            return f"all six Gal(E_i/Q) = {self.galois_groups[0]}"
        return "E1: F5,2, E2: F5,3, E3 = E4, E5 = E6 non-Galois"


@dataclass(frozen=True)
class CaseVerdict:
    letter: str
    signature: str
    structure: ExtensionStructure


def reflection_consistency(obs):
    """5-class rank of M equals 2 in the reflection identity for the given signature."""
    r1, d1, r2, d2 = obs.rank_tuple()
    if obs.signature == IMAGINARY:
        # both k_i real: the unit contributions cancel the +2
        return r1 + r2 == d1 + d2
    return r1 + r2 - d1 - d2 == 2


def extension_structure(letter, signature):
    if letter not in CASES[signature]:
        raise InconsistentObservation(f"no case {letter!r} for {signature} fields")
    kind = UNIFORM_CASES[signature].get(letter)
    if kind:
        return ExtensionStructure(True, (kind,) * 6)
    return ExtensionStructure(False, ("F5,2", "F5,3", None, None, None, None), ((3, 4), (5, 6)))


def classify_case(obs):
    if not reflection_consistency(obs):
        raise InconsistentObservation(f"ranks {obs.rank_tuple()} violate the reflection identity for {obs.signature} M (d = {obs.d})")
    row = obs.rank_tuple()
    for letter, ref in CASES[obs.signature].items():
        if ref == row:
            return CaseVerdict(letter, obs.signature, extension_structure(letter, obs.signature))
    raise InconsistentObservation(f"(r1, delta1, r2, delta2) = {row} matches no case for {obs.signature} fields")


# --- class number relation -----------------------------------------------------------------


@dataclass(frozen=True)
class ClassNumberRelation:
    """h5(E_i) = multiplier * h5(L_i)^2."""

    multiplier: int
    possible: bool
    rules: tuple


def class_number_relation(capitulation_order, unit_index, signature=None):
    if capitulation_order not in (5, 25):
        raise ValueError("capitulation order must be 5 or 25")
    if unit_index not in (1, 5):
        raise ValueError("unit norm index must be 1 or 5")
    multiplier = unit_index * 25 // capitulation_order
    rules = [f"h5(E) = (u / #ker) * h5(M) * h5(L)^2 with h5(M) = 25 gives factor {multiplier}"]
    possible = True
    if multiplier == 25:
        possible = False
        rules.append("factor 25 needs partial capitulation with u = 5, impossible for totally real or imaginary M")
    if signature == IMAGINARY:
        # u = 1 exactly when the capitulation is partial, so the factor is always 5
        if (unit_index == 1) != (capitulation_order == 5):
            possible = False
        rules.append("imaginary M: u = 1 iff #ker = 5, so h5(E) = 5 h5(L)^2")
    elif signature == REAL:
        # b = (U_M : N U_E) = #ker / 5 for an unramified cyclic quintic extension
        b = capitulation_order // 5
        expected = 5 if b == unit_index else 1
        if expected != multiplier:
            possible = False
        rules.append(f"real M: factor 5 iff b = u (b = {b}, u = {unit_index})")
    elif signature is not None:
        raise ValueError(f"unknown signature {signature!r}")
    return ClassNumberRelation(multiplier, possible, tuple(rules))


# --- candidate catalog ----------------------------------------------------------------------


def _flag(text):
    return None if text == "-" else bool(int(text))


def _int_or_none(text):
    return None if text == "-" else int(text)


def _order_exponent(text):
    if text == "-":
        return None
    base, exp = text.split("^")
    if base != "5":
        raise CatalogError(f"order {text!r} is not a power of 5")
    return int(exp)


LENGTH_RULES = {"abelian", "balanced", "trivial-cover", "blackburn", ">=3", "-"}


@dataclass(frozen=True)
class CandidateRecord:
    name: str
    order_exponent: int | None
    coclass: int | None
    kappa: tuple
    tau: TauPattern
    sigma4: bool | None
    sigma2: bool | None
    flag_f: bool | None
    schur_sigma: bool | None
    strong_sigma: bool | None
    d2: int | None
    parent: str | None
    length_rule: str
    kappa_class: pc.KappaClass = field(compare=False, repr=False, default=None)

    def __post_init__(self):
        if self.length_rule not in LENGTH_RULES:
            raise CatalogError(f"{self.name}: unknown length rule {self.length_rule!r}")
        if self.schur_sigma and self.d2 != 2:
            raise CatalogError(f"{self.name}: a Schur sigma-group has a balanced presentation (d2 = 2)")
        if self.kappa_class is None:
            object.__setattr__(self, "kappa_class", pc.kappa_class(self.kappa))

    @property
    def is_marker(self):
        return self.name.endswith("-desc")

    @property
    def is_ambiguous(self):
        return "|" in self.name

    @property
    def members(self):
        """Individual group ids behind an ambiguity record such as 5^7#891|894|897."""
        if not self.is_ambiguous:
            return (self.name,)
        head, ids = self.name.split("#")
        return tuple(f"{head}#{i}" for i in ids.split("|"))

    @property
    def abelian(self):
        return self.length_rule == "abelian"

    @classmethod
    def parse(cls, line):
        f = line.strip().split(";")
        if len(f) != 13:
            raise CatalogError(f"catalog line needs 13 fields: {line!r}")
        name, order, cc, kappa, tau, s4, s2, ff, schur, strong, d2, parent, rule = f
        return cls(
            name,
            _order_exponent(order),
            _int_or_none(cc),
            tuple(int(c) for c in kappa),
            TauPattern.parse(tau),
            _flag(s4),
            _flag(s2),
            _flag(ff),
            _flag(schur),
            _flag(strong),
            _int_or_none(d2),
            None if parent == "-" else parent,
            rule,
        )


@dataclass(frozen=True)
class Catalog:
    records: tuple

    def __getitem__(self, name):
        for r in self.records:
            if r.name == name:
                return r
        raise KeyError(name)

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)

    def names(self):
        return [r.name for r in self.records]


def parse_catalog(text):
    recs = [CandidateRecord.parse(line) for line in text.splitlines() if line.strip() and not line.startswith("#")]
    names = [r.name for r in recs]
    if len(set(names)) != len(names):
        raise CatalogError("duplicate catalog names")
    return Catalog(tuple(recs))


@lru_cache(maxsize=4)
def load_catalog(path=None):
    return parse_catalog(Path(path or CATALOG_PATH).read_text())


def validate_catalog(catalog=None, presentations=None, sigma=False):
    """Compare catalog data with values computed from shipped presentations.

    Returns a list of mismatch descriptions (empty when coherent).  Sigma
    flag searches are slower and only run with sigma=True.
    """
    catalog = catalog or load_catalog()
    presentations = presentations if presentations is not None else pc.load_presentations()
    problems = []
    for rec in catalog:
        pres = presentations.get(rec.name)
        if pres is None:
            continue
        if rec.order_exponent != pres.ngens:
            problems.append(f"{rec.name}: order 5^{rec.order_exponent} vs presentation 5^{pres.ngens}")
        pattern = pc.artin_pattern(pres)
        if pattern.kappa_class.canonical != rec.kappa_class.canonical:
            problems.append(f"{rec.name}: kappa class {pattern.kappa_class.name} vs catalog {rec.kappa_class.name}")
        tau = TauPattern.from_invariants(pattern.tau)
        if tau != rec.tau:
            problems.append(f"{rec.name}: tau {tau} vs catalog {rec.tau}")
        if sigma:
            flags = pc.sigma_flags(pres)
            for attr, val in (("sigma4", flags.degree4), ("sigma2", flags.degree2), ("flag_f", flags.combined_flag)):
                if getattr(rec, attr) is not None and getattr(rec, attr) != val:
                    problems.append(f"{rec.name}: {attr} computed {int(val)} vs catalog {int(getattr(rec, attr))}")
    return problems


# --- Shafarevich bound and tower length ------------------------------------------------------


def shafarevich_admissible(candidate, signature):
    """Relation rank bound d2 <= d1 + r with d1 = 2 and r the unit rank of M."""
    if candidate.d2 is None:
        raise ValueError(f"{candidate.name}: relation rank d2 not recorded")
    return candidate.d2 <= 2 + unit_rank(signature)


@dataclass(frozen=True)
class LengthVerdict:
    ell5: object  # 1, 2, ELL_GE3 or None (undetermined)
    rules: tuple


def tower_length(candidate, signature):
    r = unit_rank(signature)
    rules = []
    if candidate.abelian:
        rules.append("abelian second 5-class group: the tower stops at the first stage")
        return LengthVerdict(1, tuple(rules))
    if candidate.d2 is None:
        if candidate.length_rule == ">=3":
            rules.append(f"{candidate.name}: catalog records the tower as longer than two stages")
            return LengthVerdict(ELL_GE3, tuple(rules))
        rules.append(f"{candidate.name}: relation rank d2 not recorded, length undetermined")
        return LengthVerdict(None, tuple(rules))
    bound = 2 + r
    if not shafarevich_admissible(candidate, signature):
        rules.append(f"Shafarevich: d2 = {candidate.d2} > d1 + r = {bound}, so G is not the full tower group")
        return LengthVerdict(ELL_GE3, tuple(rules))
    rules.append(f"Shafarevich: d2 = {candidate.d2} <= d1 + r = {bound}")
    certificate = {
        "balanced": "Schur sigma-group (balanced presentation) realizes a two-stage tower",
        "trivial-cover": "metabelian sigma-group with trivial cover: the tower has two stages",
        "blackburn": "metabelian coclass-1 group with two-generator derived group cannot be a proper quotient of the tower group",
    }.get(candidate.length_rule)
    if certificate is None:
        rules.append("no length certificate recorded")
        return LengthVerdict(None, tuple(rules))
    rules.append(certificate)
    return LengthVerdict(2, tuple(rules))


# --- identification --------------------------------------------------------------------------


@dataclass(frozen=True)
class TowerVerdict:
    status: str  # identified | ambiguous | marker | unknown
    group: CandidateRecord | None
    candidates: tuple
    ell5: object
    reasoning: tuple

    @property
    def group_name(self):
        return self.group.name if self.group is not None else None

    def ell5_code(self):
        """Short form used in tables: '1', '2', '>=3' or '?'."""
        if self.ell5 is None:
            return "?"
        return ">=3" if self.ell5 == ELL_GE3 else str(self.ell5)

    def to_dict(self):
        return {
            "status": self.status,
            "group": self.group_name,
            "members": list(self.group.members) if self.group else [],
            "candidates": [c.name for c in self.candidates],
            "ell5": self.ell5_code(),
            "rules": list(self.reasoning),
        }


def _as_kappa_class(kappa):
    if isinstance(kappa, pc.KappaClass):
        return kappa
    if isinstance(kappa, str):
        return pc.kappa_class(pc.kappa_from_string(kappa))
    return pc.kappa_class(tuple(kappa))


def _as_tau(tau):
    if isinstance(tau, TauPattern):
        return tau
    if isinstance(tau, str):
        return TauPattern.parse(tau)
    return TauPattern.from_invariants(tau)


def identify_group(kappa, tau, signature, catalog=None):
    catalog = catalog or load_catalog()
    kc = _as_kappa_class(kappa)
    obs_tau = _as_tau(tau)
    unit_rank(signature)
    rules = [f"kappa class: {kc.name}", f"tau: {obs_tau}"]
    pool = list(catalog)
    if signature == IMAGINARY:
        dropped = [c.name for c in pool if c.coclass == 1 and not c.abelian]
        pool = [c for c in pool if not (c.coclass == 1 and not c.abelian)]
        rules.append(
            "imaginary M: coclass-1 nonabelian groups excluded (odd 5-valuation of h5(E_i) forces coclass >= 2): "
            + ", ".join(dropped)
        )
    before = len(pool)
    pool = [c for c in pool if c.sigma4 is not False]
    if len(pool) != before:
        rules.append("Gal(M/Q) of order 4 acts as a sigma-automorphism of degree 4: non-sigma groups excluded")
    matches = [c for c in pool if c.kappa_class.canonical == kc.canonical and c.tau.matches(obs_tau)]
    proper = [c for c in matches if not c.is_marker]
    if proper:
        matches = proper
    if not matches:
        rules.append("no catalog record matches (kappa class, tau)")
        return TowerVerdict("unknown", None, (), None, tuple(rules))
    if len(matches) > 1:
        rules.append("several catalog records match: " + ", ".join(c.name for c in matches))
        lengths = {tower_length(c, signature).ell5 for c in matches}
        ell = lengths.pop() if len(lengths) == 1 else None
        return TowerVerdict("ambiguous", None, tuple(matches), ell, tuple(rules))
    cand = matches[0]
    rules.append(f"matched {cand.name}")
    status = "marker" if cand.is_marker else ("ambiguous" if cand.is_ambiguous else "identified")
    if cand.is_ambiguous:
        rules.append("record stands for the set " + ", ".join(cand.members))
    length = tower_length(cand, signature)
    return TowerVerdict(status, cand, (cand,), length.ell5, tuple(rules) + length.rules)


def identify_observation(obs, catalog=None):
    if obs.kappa is None or obs.tau is None:
        raise ValueError("identification needs kappa and tau")
    return identify_group(obs.kappa, obs.tau, obs.signature, catalog)
