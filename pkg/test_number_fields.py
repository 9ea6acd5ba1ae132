import random
from fractions import Fraction

import pytest

from src.cyclotomic import cyclotomic_field, restrict_to_real
from src.dataset import F_POLY, LF_POLY, LG_POLY, SIGMA_IMAGE, TAU_F_IMAGE, TAU_G_STATED
from src.errors import MixedParents, NFDivisionByZero, NotARoot, WrongDegree
from src.exact_algebra import UniPoly
from src.number_fields import (
    AutGroup,
    NFAutomorphism,
    NumberField,
    find_automorphisms,
    fixed_field,
    generate_group,
    same_quadratic_field,
)


@pytest.fixture(scope="module")
def F():
    return NumberField(list(F_POLY))


@pytest.fixture(scope="module")
def sigma(F):
    return NFAutomorphism(F, list(SIGMA_IMAGE))


def test_field_invariants(F):
    assert F.degree == 8
    assert F.signature == (8, 0)
    assert F.is_totally_real
    assert F.discriminant == 2 ** 31
    assert F.certificate.method == "eisenstein"


def test_element_arithmetic(F):
    theta = F.gen
    assert theta * theta.inverse() == F.one
    assert (theta + 2).norm() == 2
    assert theta.trace() == 0
    assert (theta * theta).trace() == 16
    assert ((theta * theta) - 2).minimal_polynomial() == UniPoly([2, 0, -4, 0, 1])
    assert F.element([Fraction(1, 2)]) * 2 == F.one
    assert theta ** 8 == F.element(UniPoly.monomial(8))


def test_division_by_zero(F):
    with pytest.raises(NFDivisionByZero):
        F.zero.inverse()


def test_sign_counts(F):
    theta = F.gen
    assert theta.sign_counts() == (4, 4)
    assert (theta + 2).sign_counts() == (8, 0)
    assert F.element(-3).sign_counts() == (0, 8)


def test_mixed_parents(F):
    L = NumberField(list(LF_POLY))
    with pytest.raises(MixedParents):
        F.gen + L.gen


def test_automorphism_of_order_eight(F, sigma):
    assert sigma.order == 8
    assert (sigma ** 8).is_identity
    assert sigma(F.gen) == F.element(list(SIGMA_IMAGE))
    G = generate_group([sigma])
    assert G.order == 8
    assert G.is_cyclic
    assert G[0].is_identity
    for i in range(G.order):
        for j in range(G.order):
            assert G[G.mul(i, j)] == G[i] * G[j]


def test_automorphism_is_a_ring_map(F, sigma):
    x = F.element([1, 2, 0, -1, 0, 0, 3, 0])
    y = F.element([0, 0, 1, 0, 0, 5, 0, -2])
    assert sigma(x * y) == sigma(x) * sigma(y)
    assert sigma(x + y) == sigma(x) + sigma(y)


def test_bad_image_rejected(F):
    with pytest.raises(NotARoot):
        NFAutomorphism(F, [0, 2])


def test_fixed_fields_of_the_cyclic_group(F, sigma):
    G = AutGroup.generate(F, [sigma])
    quadratic, t = fixed_field(F, G.subgroup([2]))
    assert quadratic.degree == 2
    assert same_quadratic_field(quadratic.poly, UniPoly([-2, 0, 1]))
    assert all(h(t) == t for h in G.subgroup([2]))
    quartic, _ = fixed_field(F, G.subgroup([4]))
    assert quartic.degree == 4
    rational, _ = fixed_field(F, G)
    assert rational.degree == 1


def test_fixed_field_degree_law_fuzz():
    rng = random.Random(7)
    conductors = [5, 7, 8, 9, 11, 12, 13, 15, 16, 20, 21, 24]
    for _ in range(100):
        C = cyclotomic_field(rng.choice(conductors))
        k = rng.choice(C.units)
        a = restrict_to_real(C, k)
        H = generate_group([a])
        K, t = fixed_field(a.parent, H)
        assert K.degree * H.order == a.parent.degree
        assert a(t) == t


def test_same_quadratic_field():
    assert same_quadratic_field(UniPoly([-8, 0, 1]), UniPoly([-2, 0, 1]))
    assert same_quadratic_field(UniPoly([-1, -2, 1]), UniPoly([-2, 0, 1]))
    assert not same_quadratic_field(UniPoly([-3, 0, 1]), UniPoly([-2, 0, 1]))
    with pytest.raises(WrongDegree):
        same_quadratic_field(UniPoly([1, 1, 0, 1]), UniPoly([-2, 0, 1]))


def test_found_automorphisms_of_lf():
    L = NumberField(list(LF_POLY))
    autos = find_automorphisms(L)
    assert len(autos) == 4
    assert autos[0].is_identity
    assert NFAutomorphism(L, list(TAU_F_IMAGE)) in autos
    assert generate_group(autos).is_cyclic


def test_found_automorphisms_of_lg():
    L = NumberField(list(LG_POLY))
    autos = find_automorphisms(L)
    assert len(autos) == 4
    assert sorted(a.order for a in autos) == [1, 2, 4, 4]
    for a in autos:
        assert L.poly(a.image).is_zero


def test_stated_lg_automorphism_is_not_a_root():
    L = NumberField(list(LG_POLY))
    with pytest.raises(NotARoot):
        NFAutomorphism(L, list(TAU_G_STATED))


def test_minimal_polynomial_annihilates_and_divides_degree_fuzz(F):
    rng = random.Random(17)
    Lf = NumberField(list(LF_POLY))
    for case in range(120):
        K = F if case % 2 else Lf
        x = K.element([rng.randint(-5, 5) for _ in range(K.degree)])
        if case % 5 == 0:
            # land in a proper subfield
            x = x * x if K is Lf else (K.gen ** 2) * rng.randint(1, 4) + rng.randint(-3, 3)
        if x.is_zero:
            continue
        m = x.minimal_polynomial()
        assert m.is_monic
        assert m(x).is_zero
        assert K.degree % m.degree == 0
