import itertools
from fractions import Fraction

import numpy as np
import pytest

from qtl import family as fam
from qtl import galois as gal

GRID_PRIMES = (3, 7, 11, 13)


# --- brute-force oracle over F_{p^2} ------------------------------------------------------


def _nonresidue(p):
    squares = {x * x % p for x in range(p)}
    return next(n for n in range(2, p) if n not in squares)


def brute_patterns(monic_tails, p):
    """Factorization patterns of monic quintics X^5 + c4 X^4 + ... + c0 over F_p.

    Every root in F_p gives a linear factor and every conjugate root pair in
    F_{p^2} \\ F_p a quadratic one; a repeated factor of a quintic has degree
    at most 2, so squarefreeness is decided by common roots of f and f' in
    F_{p^2}.  The cofactor left after the linear and quadratic factors is then
    irreducible.  Returns None for non-squarefree reductions.
    """
    tails = np.asarray(monic_tails, dtype=np.int64) % p
    n = _nonresidue(p)
    x0, x1 = (a.ravel() for a in np.meshgrid(np.arange(p), np.arange(p), indexing="ij"))

    def horner(coeffs):
        a0 = np.zeros((tails.shape[0], x0.size), dtype=np.int64)
        a1 = np.zeros_like(a0)
        for c in coeffs:
            a0, a1 = (a0 * x0 + n * a1 * x1 + c[:, None]) % p, (a0 * x1 + a1 * x0) % p
        return a0, a1

    ones = np.ones(tails.shape[0], dtype=np.int64)
    f_coeffs = [ones] + [tails[:, i] for i in range(5)]
    df_coeffs = [5 * ones] + [(4 - i) * tails[:, i] for i in range(4)]
    f0, f1 = horner(f_coeffs)
    d0, d1 = horner(df_coeffs)
    root = (f0 == 0) & (f1 == 0)
    repeated = (root & (d0 == 0) & (d1 == 0)).any(axis=1)
    linear = (root & (x1 == 0)).sum(axis=1)
    quadratic = (root & (x1 != 0)).sum(axis=1) // 2
    out = []
    for rep, n1, n2 in zip(repeated, linear, quadratic):
        if rep:
            out.append(None)
            continue
        rest = 5 - n1 - 2 * n2
        assert rest in (0, 3, 4, 5)
        out.append(tuple(sorted([1] * n1 + [2] * n2 + ([rest] if rest else []))))
    return out


def grid_reductions(p):
    """Distinct monic reductions mod p of all quintics with coefficients in [-3, 3]."""
    seen = set()
    for lc in (-3, -2, -1, 1, 2, 3):
        if lc % p == 0:
            continue
        inv = pow(lc, -1, p)
        for cs in itertools.product(range(-3, 4), repeat=5):
            seen.add(tuple(c * inv % p for c in cs))
    return sorted(seen)


@pytest.mark.parametrize("p", GRID_PRIMES)
def test_distinct_degree_patterns_match_brute_force(p):
    # the pattern of f mod p equals the pattern of f / lc(f) mod p
    tails = grid_reductions(p)
    oracle = brute_patterns(tails, p)
    for tail, expected in zip(tails, oracle):
        got = gal.factor_degree_pattern((1,) + tail, p)
        assert got == expected, (p, tail)
        if got is not None:
            assert sum(got) == 5


def test_oracle_on_known_factorizations():
    # X^5 - 1 = (X - 1)(X^4 + ... + 1) mod 7, the quartic is irreducible since 7 has order 6 mod 5
    assert brute_patterns([(0, 0, 0, 0, -1)], 7) == [(1, 4)]
    assert brute_patterns([(0, 0, 0, 0, -2)], 11) == [(5,)]


# --- factorization ---------------------------------------------------------------------------


def test_examples():
    assert gal.factor_degree_pattern((1, 0, 0, 0, 0, -2), 11) == (5,)
    assert gal.factor_degree_pattern((1, 0, 0, 0, 0, -1), 7) == (1, 4)


def test_bad_primes():
    assert gal.factor_degree_pattern((1, 0, 0, 0, 0, -2), 5) is None  # X^5 - 2 = (X - 2)^5 mod 5
    assert gal.factor_degree_pattern((3, 0, 0, 0, 0, -2), 3) is None  # leading coefficient
    assert not gal.is_good_prime((1, 0, 0, 0, 0, -2), 2)


def test_int_polynomial():
    f = gal.IntPolynomial.parse("1, 0, -5, 0, 5, -9")
    assert f.degree == 5 and f(1) == -8
    with pytest.raises(ValueError):
        gal.IntPolynomial((0, 1))


def test_primes_generator():
    assert list(itertools.islice(gal.primes(), 8)) == [3, 5, 7, 11, 13, 17, 19, 23]


def test_rational_roots():
    assert gal.rational_roots((2, -1, 0, 0, 2, -1)) == [Fraction(1, 2)]
    assert gal.rational_roots((1, 0, 0, 0, 0, -1)) == [Fraction(1)]
    assert gal.rational_roots((1, 0, 0, 0, 0, -2)) == []
    assert Fraction(0) in gal.rational_roots((1, 0, 0, 0, 1, 0))


# --- classification -----------------------------------------------------------------------------


def test_x5_minus_2_certified():
    v = gal.frobenius_classify((1, 0, 0, 0, 0, -2), 200)
    assert v.status == "F20_certified"
    assert set(v.patterns_seen) <= gal.F20_PATTERNS
    assert v.witness_prime is not None and v.irreducible_witness is not None
    # cross-check the sampler on its first ten good primes
    good = [p for p in itertools.islice(gal.primes(), 40) if gal.is_good_prime((1, 0, 0, 0, 0, -2), p)][:10]
    for p in good:
        (expected,) = brute_patterns([(0, 0, 0, 0, -2)], p)
        assert gal.factor_degree_pattern((1, 0, 0, 0, 0, -2), p) == expected


def test_x5_minus_1_reducible():
    assert gal.frobenius_classify((1, 0, 0, 0, 0, -1)).status == "reducible"


def test_symmetric_quintic_excluded():
    assert gal.frobenius_classify((1, 0, 0, 0, -1, -1), 100).status == "excluded"


def test_dihedral_quintic_only_compatible():
    # X^5 - 5X + 12 has Galois group D5: no 4-cycles ever appear
    v = gal.frobenius_classify((1, 0, 0, 0, -5, 12), 300)
    assert v.status == "F20_compatible" and (1, 4) not in v.patterns_seen


def test_cyclic_quintic_only_compatible():
    # the real subfield of Q(zeta_11)
    v = gal.frobenius_classify((1, 1, -4, -3, 3, 1), 300)
    assert v.status == "F20_compatible" and set(v.patterns_seen) <= {(1, 1, 1, 1, 1), (5,)}


def test_degree_must_be_five():
    with pytest.raises(ValueError):
        gal.frobenius_classify((1, 0, 1))


@pytest.mark.parametrize("which", ["poly1", "poly2"])
def test_family_quintics(which):
    f = getattr(fam.family_member(0), which)
    v = gal.frobenius_classify(f, 500)
    assert v.status in ("F20_compatible", "F20_certified")
    assert all(p in gal.F20_PATTERNS for p in v.patterns_seen)
    assert v.primes_used == 500


def test_chebotarev_report_shape():
    v = gal.frobenius_classify((1, 0, 0, 0, 0, -2), 500)
    rows = gal.chebotarev_report(v)
    assert {r[0] for r in rows} == set(gal.F20_PATTERNS)
    assert abs(sum(r[1] for r in rows) - 1) < 1e-9
    assert abs(sum(r[2] for r in rows) - 1) < 1e-9
    d = v.to_dict()
    assert d["status"] == "F20_certified" and sum(d["patterns_seen"].values()) == 500


def test_type_labels():
    assert gal.label_type("k1") == "Type I"
    assert gal.label_type("k2") == "Type II"
    with pytest.raises(ValueError):
        gal.label_type("k3")
