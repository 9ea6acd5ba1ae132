"""
Prime ideals above rational primes via Dedekind's criterion, residue maps,
and the action of field automorphisms on primes.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from loguru import logger

from .errors import IndexDivisor, NoMatch, NotPIntegral
from .exact_algebra import UniPoly, factor_mod_p, is_eisenstein
from .finite_fields import FinField, FinPoly, poly_gcd


@dataclass(frozen=True)
class PrimeIdeal:
    """
    P = (p, g(theta)) with g monic irreducible mod p.
    The residue field is F_p[X]/(g), so theta reduces to X.
    """

    p: int
    g: FinPoly
    e: int
    f: int
    label: str

    @cached_property
    def residue_field(self):
        return FinField(self.p, self.f, modulus=self.g.to_ints())

    @property
    def norm(self):
        return self.p ** self.f

    def to_dict(self):
        return {"label": self.label, "p": self.p, "g": list(self.g.to_ints()), "e": self.e, "f": self.f}


@dataclass(frozen=True)
class FactoredPrime:
    p: int
    field: object
    factors: tuple

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)

    def by_label(self, label):
        for P in self.factors:
            if P.label == label:
                return P
        raise KeyError(label)

    @property
    def labels(self):
        return [P.label for P in self.factors]

    def to_dict(self):
        return {"p": self.p, "primes": [P.to_dict() for P in self.factors]}


def _lift(poly):
    """Integer lift with coefficients in [0, p)"""
    return UniPoly(poly.to_ints())


def dedekind_factor(K, p, seed=0):
    """
    Factor p in the order Z[theta] of K and certify it is p-maximal
    Args:
        K: NumberField with monic integral defining polynomial
        p: rational prime
        seed: seed of the equal-degree splitting stream
    Returns:
        FactoredPrime with labels "p.1", "p.2", ... in coefficient order
    Raises:
        IndexDivisor: p divides [O_K : Z[theta]]
    """
    f = K.poly
    n = K.degree
    Fp = FinField(p)

    if is_eisenstein(f, p):
        g = FinPoly.x(Fp)
        P = PrimeIdeal(p, g, n, 1, f"{p}.1")
        logger.debug(f"{p} is totally ramified in {K} (Eisenstein)")
        return FactoredPrime(p, K, (P,))

    factors = factor_mod_p(f, Fp, seed)
    if any(e > 1 for _, e in factors):
        g_star = UniPoly((1,))
        h_star = UniPoly((1,))
        for g, e in factors:
            lifted = _lift(g)
            g_star = g_star * lifted
            h_star = h_star * lifted ** (e - 1)
        F = (g_star * h_star - f) * Fraction(1, p)
        bars = [g_star.reduce_mod(Fp), h_star.reduce_mod(Fp)]
        common = poly_gcd(bars[0], bars[1])
        if not F.is_zero:
            F_bar = FinPoly.from_ints(Fp, [c.numerator % p for c in F.coeffs])
            common = poly_gcd(common, F_bar)
        if common.degree > 0:
            logger.debug(f"Dedekind test fails for {p} in {K}: gcd {common}")
            raise IndexDivisor(p, f, common)

    primes = tuple(
        PrimeIdeal(p, g, e, g.degree, f"{p}.{i}")
        for i, (g, e) in enumerate(sorted(factors, key=lambda ge: ge[0].to_ints()), start=1)
    )
    assert sum(P.e * P.f for P in primes) == n
    return FactoredPrime(p, K, primes)


def factor_primes(K, primes, seed=0):
    """dedekind_factor for several primes, keyed by p in increasing order"""
    return {p: dedekind_factor(K, p, seed) for p in sorted(set(primes))}


def residue_reduce(x, P):
    """Image of a p-integral element x in the residue field O/P"""
    k = P.residue_field
    p = P.p
    coeffs = []
    for c in x.coords:
        if c.denominator % p == 0:
            raise NotPIntegral(p)
        coeffs.append(c.numerator * pow(c.denominator, -1, p) % p)
    return k.element(coeffs)


def galois_act_prime(a, P, ctx):
    """
    The prime a(P) among the factors of P.p
    Args:
        a: NFAutomorphism of the field of ctx
        P: PrimeIdeal
        ctx: FactoredPrime containing P
    Returns:
        the unique Q in ctx with g_P(a(theta)) in Q
    """
    K = a.parent
    x = K.zero
    for c in reversed(_lift(P.g).coeffs):
        x = x * a.image + c
    for Q in ctx:
        if residue_reduce(x, Q).is_zero:
            return Q
    raise NoMatch(f"no prime above {P.p} contains the image of {P.label}")


def prime_permutation(a, ctx):
    """Label permutation induced by a on the primes of ctx"""
    return {P.label: galois_act_prime(a, P, ctx).label for P in ctx}
