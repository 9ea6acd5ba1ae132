import random
from fractions import Fraction

import pytest
from sympy import primerange

from src.dataset import F_POLY, LF_POLY, LG_POLY, SIGMA_IMAGE, TAU_F_IMAGE
from src.errors import IndexDivisor, NotPIntegral
from src.exact_algebra import UniPoly, Verdict, certify_irreducible_over_Q
from src.ideals import dedekind_factor, factor_primes, galois_act_prime, prime_permutation, residue_reduce
from src.number_fields import AutGroup, NFAutomorphism, NumberField, generate_group
from src.verification import KH_POLY


@pytest.fixture(scope="module")
def F():
    return NumberField(list(F_POLY))


@pytest.fixture(scope="module")
def Lf():
    return NumberField(list(LF_POLY))


def test_two_is_totally_ramified_in_F(F):
    (P,) = dedekind_factor(F, 2).factors
    assert (P.e, P.f, P.label) == (8, 1, "2.1")


@pytest.mark.parametrize("p, count, f", [(3, 1, 8), (7, 2, 4), (17, 4, 2), (31, 8, 1)])
def test_splitting_in_F(F, p, count, f):
    fp = dedekind_factor(F, p)
    assert len(fp) == count
    assert all(P.e == 1 and P.f == f for P in fp)
    assert fp.labels == [f"{p}.{i}" for i in range(1, count + 1)]


@pytest.mark.parametrize("poly", [LF_POLY, LG_POLY])
def test_two_is_inert_in_the_quartic_fields(poly):
    L = NumberField(list(poly))
    (P,) = dedekind_factor(L, 2).factors
    assert (P.e, P.f) == (1, 4)
    assert P.residue_field.order == 16


def test_index_divisor_detected():
    K = NumberField(list(KH_POLY))
    with pytest.raises(IndexDivisor) as excinfo:
        dedekind_factor(K, 2)
    assert excinfo.value.p == 2


def test_fundamental_identity(F, Lf):
    for K in (F, Lf):
        for p in primerange(2, 400):
            fp = dedekind_factor(K, p)
            assert sum(P.e * P.f for P in fp) == K.degree


def test_residue_reduction(Lf):
    (P,) = dedekind_factor(Lf, 2).factors
    r = residue_reduce(Lf.gen, P)
    assert r.frobenius(1) != r
    assert r.frobenius(4) == r
    assert residue_reduce(Lf.element([3]), P) == 1
    with pytest.raises(NotPIntegral):
        residue_reduce(Lf.element([Fraction(1, 2)]), P)


def test_prime_action_is_a_left_action(F):
    sigma = NFAutomorphism(F, list(SIGMA_IMAGE))
    G = generate_group([sigma])
    primes = factor_primes(F, [7, 17, 31])
    for ctx in primes.values():
        perms = [prime_permutation(a, ctx) for a in G]
        assert perms[0] == {lab: lab for lab in ctx.labels}
        for i in range(G.order):
            for j in range(G.order):
                composed = perms[G.mul(i, j)]
                assert all(composed[lab] == perms[i][perms[j][lab]] for lab in ctx.labels)


def test_sigma_is_transitive_on_primes(F):
    sigma = NFAutomorphism(F, list(SIGMA_IMAGE))
    for p in (7, 17, 31, 97):
        ctx = dedekind_factor(F, p)
        perm = prime_permutation(sigma, ctx)
        seen = {"%d.1" % p}
        lab = perm["%d.1" % p]
        while lab not in seen:
            seen.add(lab)
            lab = perm[lab]
        assert seen == set(ctx.labels)


def test_fundamental_identity_on_random_fields_fuzz():
    rng = random.Random(19)
    fields = 0
    while fields < 100:
        degree = rng.randint(2, 8)
        f = UniPoly([rng.randint(-7, 7) for _ in range(degree)] + [1])
        cert = certify_irreducible_over_Q(f, prime_budget=30)
        if cert.verdict != Verdict.IRREDUCIBLE:
            continue
        K = NumberField(f, certificate=cert)
        fields += 1
        for p in primerange(2, 100):
            try:
                fp = dedekind_factor(K, p)
            except IndexDivisor:
                continue
            assert sum(P.e * P.f for P in fp) == degree


def test_residue_map_is_a_ring_homomorphism_fuzz(Lf):
    rng = random.Random(23)
    residues = [P for p in (2, 7, 11, 31) for P in dedekind_factor(Lf, p)]
    for _ in range(120):
        P = rng.choice(residues)
        x = Lf.element([Fraction(rng.randint(-20, 20), rng.choice([1, 3, 5, 9])) for _ in range(4)])
        y = Lf.element([rng.randint(-20, 20) for _ in range(4)])
        assert residue_reduce(x * y, P) == residue_reduce(x, P) * residue_reduce(y, P)
        assert residue_reduce(x + y, P) == residue_reduce(x, P) + residue_reduce(y, P)


@pytest.mark.parametrize("poly, image, primes", [
    (F_POLY, SIGMA_IMAGE, (2, 3, 5, 7, 17, 31, 97)),
    (LF_POLY, TAU_F_IMAGE, (2, 7, 11, 31, 61, 97)),
])
def test_galois_action_preserves_ramification_and_degree(poly, image, primes):
    K = NumberField(list(poly))
    G = AutGroup.generate(K, [NFAutomorphism(K, list(image))])
    for p in primes:
        ctx = dedekind_factor(K, p)
        for a in G:
            for P in ctx:
                Q = galois_act_prime(a, P, ctx)
                assert (Q.e, Q.f) == (P.e, P.f)
