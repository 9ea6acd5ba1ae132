import math
import random

import pytest
from sympy import legendre_symbol

from src.certify import (
    ELEMENT_CAP,
    CertVerdict,
    CycleType,
    GroupModel,
    build_frobenius_group,
    certify_group,
    closure_with_multiplier,
    cycle_type_of,
    cycle_types,
    cyclic_group,
    _notes,
    dihedral_group,
    discriminant_analysis,
    frobenius_sample,
    parse_group_spec,
    subgroup_closure_check,
    two_adic_valuation,
)
from src.errors import OrderCapExceeded
from src.exact_algebra import UniPoly
from src.utils import read_poly_file
from src.verification import F17_TABLE, H_POLY, H_POLY_PATH

X17_MINUS_X_MINUS_1 = UniPoly([-1, -1] + [0] * 15 + [1])


@pytest.fixture(scope="module")
def F17():
    return build_frobenius_group(17)


def test_cycle_type_basics():
    t = CycleType.of([1, 16])
    assert t.parts == (16, 1)
    assert str(t) == "(16,1)"
    assert str(CycleType((2,) * 8 + (1,))) == "(2^8,1)"
    assert not t.is_even
    assert CycleType((17,)).is_even
    assert CycleType((8, 8, 1)).order == 8
    assert cycle_type_of([1, 2, 0, 4, 3]) == CycleType((3, 2))


def test_frobenius_group_of_order_272(F17):
    assert F17.order == 272
    assert {t.parts: c for t, c in cycle_types(F17).items()} == F17_TABLE


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_affine_group_tables_count_every_element(p):
    for G, order in ((build_frobenius_group(p), p * (p - 1)), (dihedral_group(p), 2 * p)):
        table = cycle_types(G)
        assert G.order == order
        assert sum(table.values()) == order
        assert table[CycleType((p,))] == p - 1


def test_dihedral_table():
    table = {t.parts: c for t, c in cycle_types(dihedral_group(17)).items()}
    assert table == {(17,): 16, (2,) * 8 + (1,): 17, (1,) * 17: 1}


def test_closures_inside_F17(F17):
    assert subgroup_closure_check(17)
    assert closure_with_multiplier(17, 3).element_set() == F17.element_set()
    assert closure_with_multiplier(17, 9).order == 136
    assert dihedral_group(17).order == 34


def test_powers_keep_cycle_types(F17):
    rng = random.Random(3)
    for _ in range(100):
        i = rng.randrange(F17.order)
        k = rng.choice([k for k in range(1, 20) if math.gcd(k, F17.element_order(i)) == 1])
        assert cycle_type_of(F17.power(i, k)) == cycle_type_of(F17.elements[i])


def test_order_cap():
    assert ELEMENT_CAP == 317 * 316
    with pytest.raises(OrderCapExceeded):
        build_frobenius_group(331)
    with pytest.raises(OrderCapExceeded):
        GroupModel("S6", 6, [[1, 0, 2, 3, 4, 5], [1, 2, 3, 4, 5, 0]], cap=100)


def test_group_specs():
    assert parse_group_spec("frobenius:5").order == 20
    assert parse_group_spec("dihedral:7").order == 14
    assert parse_group_spec("cyclic:2").order == 2
    with pytest.raises(ValueError):
        parse_group_spec("alternating:5")
    with pytest.raises(ValueError):
        parse_group_spec("frobenius:x")


def test_sample_of_a_quadratic_follows_legendre_symbols():
    sample = frobenius_sample(UniPoly([-2, 0, 1]), 1000)
    split = sum(1 for p in range(3, 1001) if _is_odd_prime(p) and legendre_symbol(2, p) == 1)
    inert = sum(1 for p in range(3, 1001) if _is_odd_prime(p) and legendre_symbol(2, p) == -1)
    assert sample.counts == {CycleType((2,)): inert, CycleType((1, 1)): split}
    assert sample.skipped == [2]


def _is_odd_prime(p):
    return p > 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


def test_tiny_sample():
    sample = frobenius_sample(UniPoly([1, 0, 1]), 5)
    assert sample.counts == {CycleType((2,)): 1, CycleType((1, 1)): 1}
    assert sample.primes_used == 2


def test_sample_is_independent_of_worker_count():
    f = UniPoly(list(H_POLY))
    one = frobenius_sample(f, 3000, workers=1)
    two = frobenius_sample(f, 3000, workers=2)
    assert one.counts == two.counts
    assert one.skipped == two.skipped


def test_cross_check_agrees_with_factorization():
    sample = frobenius_sample(UniPoly(list(H_POLY)), 2000, seed=5, cross_check=20)
    assert len(sample.cross_checked) == 20
    assert sample.mismatches == []


def test_quadratic_is_consistent_with_c2():
    report = certify_group(UniPoly([-2, 0, 1]), cyclic_group(2), 1000)
    assert report.verdict == CertVerdict.CONSISTENT
    assert report.all_types_observed
    assert report.max_deviation < 0.05
    assert report.to_dict()["statistical"] is True


def test_trinomial_contradicts_F17():
    report = certify_group(X17_MINUS_X_MINUS_1, build_frobenius_group(17), 10 ** 4)
    assert report.verdict == CertVerdict.CONTRADICTED
    assert report.outside
    assert "verdict: CONTRADICTED" in report.to_text()


def test_degree_mismatch_rejected():
    with pytest.raises(ValueError):
        certify_group(UniPoly([-2, 0, 1]), cyclic_group(3), 100)


def test_discriminant_of_H():
    d = discriminant_analysis(UniPoly(list(H_POLY)))
    assert d["odd_part_is_square"]
    assert int(d["discriminant"]) == 2 ** d["v2"] * int(d["odd_part"])
    assert two_adic_valuation(-48) == 4
    with pytest.raises(ValueError):
        two_adic_valuation(0)


def test_H_is_consistent_with_F17_early():
    report = certify_group(UniPoly(list(H_POLY)), build_frobenius_group(17), 5000)
    assert report.verdict == CertVerdict.CONSISTENT
    assert CycleType((17,)) in report.observed


@pytest.mark.slow
def test_H_certification_to_one_hundred_thousand():
    report = certify_group(UniPoly(list(H_POLY)), build_frobenius_group(17), 10 ** 5, seed=42, cross_check=20)
    assert report.verdict == CertVerdict.CONSISTENT
    assert report.nontrivial_types_observed
    assert report.within_tolerance
    assert report.mismatches == []


def test_H_is_read_from_the_shipped_data_file():
    assert list(H_POLY) == read_poly_file(H_POLY_PATH)
    f = UniPoly(list(H_POLY))
    assert (f.degree, f.lc, f(0)) == (17, 1, 68)


def test_two_transitivity_needs_an_n_cycle():
    S4_like = {CycleType((3, 1)): 8, CycleType((4,)): 6, CycleType((1, 1, 1, 1)): 1}
    without_cycle = _notes({CycleType((3, 1)): 5, CycleType((1, 1, 1, 1)): 1}, S4_like, 4)
    assert not [n for n in without_cycle if "2-transitive" in n]
    with_cycle = _notes({CycleType((3, 1)): 5, CycleType((4,)): 2}, S4_like, 4)
    assert [n for n in with_cycle if "2-transitive" in n]
    assert [n for n in with_cycle if "transitive" in n and "2-" not in n]


@pytest.mark.parametrize("poly, group", [
    (X17_MINUS_X_MINUS_1, build_frobenius_group(17)),
    (UniPoly(list(H_POLY)), build_frobenius_group(17)),
    (UniPoly([-2, 0, 1]), cyclic_group(2)),
])
def test_certification_is_monotone_in_max_prime(poly, group):
    previous = None
    for bound in (50, 200, 1000, 3000):
        report = certify_group(poly, group, bound)
        if previous is not None:
            assert report.primes_sampled >= previous.primes_sampled
            assert set(report.observed) >= set(previous.observed)
            assert all(report.observed[t] >= c for t, c in previous.observed.items())
            if previous.verdict == CertVerdict.CONTRADICTED:
                assert report.verdict == CertVerdict.CONTRADICTED
        previous = report
    if poly is X17_MINUS_X_MINUS_1:
        assert previous.verdict == CertVerdict.CONTRADICTED
