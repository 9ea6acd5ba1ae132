import random
from fractions import Fraction

import pytest
from sympy import primerange

from src.errors import IrreducibilityInconclusive, ZeroPolynomialDivision, ZeroReduction
from src.exact_algebra import (
    UniPoly,
    Verdict,
    certify_irreducible_over_Q,
    count_real_roots,
    discriminant,
    factor_mod_p,
    frobenius_degrees,
    is_eisenstein,
    poly_gcd,
    poly_gcdex,
    rational_roots,
    resultant,
)
from src.finite_fields import FinField, FinPoly, default_modulus
from src.finite_fields import poly_gcd as finpoly_gcd
from src.number_fields import NumberField

F_POLY = UniPoly([2, 0, -16, 0, 20, 0, -8, 0, 1])
SMALL_PRIMES = list(primerange(2, 50))


def test_arithmetic_and_printing():
    x = UniPoly.x()
    assert (x + 1) * (x - 1) == UniPoly([-1, 0, 1])
    q, r = divmod(UniPoly([1, 0, 0, 1]), UniPoly([1, 1]))
    assert q == UniPoly([1, -1, 1])
    assert r.is_zero
    assert UniPoly([1, 2, 3])(2) == 17
    assert UniPoly([Fraction(1, 2), 1]).degree == 1
    assert UniPoly().degree == -1
    assert repr(F_POLY) == "x^8 - 8*x^6 + 20*x^4 - 16*x^2 + 2"


def test_division_by_zero_polynomial():
    with pytest.raises(ZeroPolynomialDivision):
        divmod(UniPoly([1, 1]), UniPoly())


def test_reduce_mod_rejects_vanishing_polynomial():
    with pytest.raises(ZeroReduction):
        UniPoly([2, 4]).reduce_mod(FinField(2))


def test_gcd_and_bezout():
    a = UniPoly([-1, 0, 1])
    b = UniPoly([1, 1])
    assert poly_gcd(a, b) == UniPoly([1, 1])
    s, t, g = poly_gcdex(a, b)
    assert g == UniPoly([1, 1])
    assert s * a + t * b == g


def test_resultant_and_discriminant():
    assert discriminant(UniPoly([-2, 0, 1])) == 8
    assert discriminant(UniPoly([1, 1, 0, 1])) == -31
    assert resultant(UniPoly([-2, 0, 1]), UniPoly([-1, 1])) == -1
    assert discriminant(F_POLY) == 2 ** 31


def test_real_roots():
    assert count_real_roots(F_POLY) == 8
    assert count_real_roots(F_POLY, 0, None) == 4
    assert count_real_roots(UniPoly([1, 0, 1])) == 0
    assert count_real_roots(UniPoly([-2, 0, 1]), 0, 2) == 1


def test_rational_roots():
    assert rational_roots(UniPoly([-2, 1, 1])) == [1, -2]
    assert rational_roots(UniPoly([0, -1, 2])) == [0, Fraction(1, 2)]
    assert rational_roots(F_POLY) == []


def test_eisenstein():
    assert is_eisenstein(F_POLY, 2)
    assert not is_eisenstein(UniPoly([4, 2, 1]), 2)


def test_certificates():
    cert = certify_irreducible_over_Q(F_POLY)
    assert cert.verdict == Verdict.IRREDUCIBLE
    assert cert.method == "eisenstein"
    assert cert.check()

    quartic = certify_irreducible_over_Q(UniPoly([1, 0, 0, 0, 1]))
    assert quartic.verdict == Verdict.IRREDUCIBLE
    assert (quartic.method, quartic.shift) == ("eisenstein", 1)

    cubic = certify_irreducible_over_Q(UniPoly([1, 1, 0, 1]))
    assert (cubic.verdict, cubic.method, cubic.prime) == (Verdict.IRREDUCIBLE, "prime", 2)
    assert cubic.check()

    reducible = certify_irreducible_over_Q(UniPoly([-1, 0, 1]))
    assert reducible.verdict == Verdict.REDUCIBLE
    assert reducible.check()


def test_inconclusive_when_every_reduction_splits():
    # x^4 - 10x^2 + 1 is irreducible but factors modulo every prime
    f = UniPoly([1, 0, -10, 0, 1])
    cert = certify_irreducible_over_Q(f, prime_budget=10)
    assert cert.verdict == Verdict.INCONCLUSIVE
    assert 2 in cert.degree_set
    with pytest.raises(IrreducibilityInconclusive):
        NumberField(f, prime_budget=10)


def test_frobenius_degrees():
    assert frobenius_degrees(UniPoly([-2, 0, 1]), 7) == [1, 1]
    assert frobenius_degrees(UniPoly([-2, 0, 1]), 5) == [2]
    assert frobenius_degrees(UniPoly([-2, 0, 1]), 2) is None


def test_finite_field_basics():
    assert default_modulus(2, 4) == (1, 1, 0, 0, 1)
    k = FinField(2, 4)
    a = k.gen
    assert k.order == 16
    assert a ** 15 == 1
    assert a * a.inverse() == 1
    assert a.frobenius(4) == a
    assert a.frobenius(1) == a * a


def test_isomorphism_between_presentations():
    k1 = FinField(2, 4)
    k2 = FinField(2, 4, modulus=(1, 0, 0, 1, 1))
    embed = k1.isomorphism_to(k2)
    elements = list(k1.elements())
    for a in elements[:8]:
        for b in elements[8:]:
            assert embed(a * b) == embed(a) * embed(b)
            assert embed(a + b) == embed(a) + embed(b)


def test_factorization_product_identity_fuzz():
    rng = random.Random(1)
    for case in range(120):
        p = rng.choice(SMALL_PRIMES)
        k = FinField(p)
        degree = rng.randint(1, 12)
        coeffs = [rng.randrange(p) for _ in range(degree)] + [rng.randrange(1, p)]
        f = FinPoly.from_ints(k, coeffs)
        factors = factor_mod_p(f, k, seed=case)
        product = FinPoly.from_ints(k, [1])
        for g, e in factors:
            assert g.lc == 1
            for _ in range(e):
                product = product * g
        assert product == f.monic()
        assert sum(g.degree * e for g, e in factors) == degree


def random_int_poly(rng, degree, bound=5):
    coeffs = [rng.randint(-bound, bound) for _ in range(degree)] + [rng.choice([-2, -1, 1, 2])]
    return UniPoly(coeffs)


def test_resultant_vanishes_exactly_on_common_factors_fuzz():
    rng = random.Random(7)
    for case in range(200):
        f = random_int_poly(rng, rng.randint(1, 4))
        g = random_int_poly(rng, rng.randint(1, 4))
        if case % 2:
            shared = random_int_poly(rng, rng.randint(1, 2))
            f, g = f * shared, g * shared
        assert (resultant(f, g) == 0) == (poly_gcd(f, g).degree > 0)


def test_discriminant_detects_repeated_factors_mod_p_fuzz():
    rng = random.Random(11)
    for case in range(200):
        coeffs = [rng.randint(-6, 6) for _ in range(rng.randint(2, 6))] + [1]
        if case % 3 == 0:
            # force a square factor over Q
            root = rng.randint(-3, 3)
            coeffs = (UniPoly(coeffs) * UniPoly([-root, 1]) ** 2).to_list()
        f = UniPoly(coeffs)
        disc = discriminant(f)
        for p in rng.sample(SMALL_PRIMES, 4):
            k = FinField(p)
            fbar = f.reduce_mod(k)
            repeated = finpoly_gcd(fbar, fbar.derivative()).degree > 0
            assert (disc % p == 0) == repeated


def test_products_of_linear_factors_are_never_certified_irreducible_fuzz():
    rng = random.Random(13)
    for _ in range(150):
        f = UniPoly([1])
        for _ in range(rng.randint(2, 5)):
            f = f * UniPoly([rng.randint(-9, 9), rng.choice([-3, -2, -1, 1, 2, 3])])
        cert = certify_irreducible_over_Q(f, prime_budget=20)
        assert cert.verdict == Verdict.REDUCIBLE
        assert cert.check()


def test_repeated_irrational_factor_is_reducible():
    f = UniPoly([-2, 0, 1]) ** 2
    cert = certify_irreducible_over_Q(f)
    assert (cert.verdict, cert.method) == (Verdict.REDUCIBLE, "repeated_factor")
    assert cert.factor == UniPoly([-2, 0, 1])
    assert cert.check()
