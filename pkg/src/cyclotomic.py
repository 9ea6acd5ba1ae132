"""
Cyclotomic fields Q(zeta_n), their Galois maps zeta -> zeta^k, and the
subfields cut out by subgroups of (Z/n)^*, generated by Gaussian periods.
"""

from functools import cached_property, lru_cache
from math import gcd

from loguru import logger
from sympy import divisors, primitive_root, totient

from .errors import NotCoprime
from .exact_algebra import IrreducibilityCertificate, UniPoly
from .linalg import EchelonBasis
from .number_fields import NFAutomorphism, NumberField


@lru_cache(maxsize=None)
def cyclotomic_poly(n):
    """Phi_n, by dividing x^n - 1 by Phi_d for the proper divisors d of n"""
    if n < 1:
        raise ValueError(f"cyclotomic polynomial needs n >= 1, got {n}")
    poly = UniPoly.monomial(n) - 1
    for d in divisors(n)[:-1]:
        poly = poly // cyclotomic_poly(d)
    return poly


def cyclic_subgroup(n, order):
    """The subgroup of the given order in (Z/n)^*, for prime n"""
    if (n - 1) % order:
        raise ValueError(f"{order} does not divide {n - 1}")
    g = primitive_root(n)
    step = pow(g, (n - 1) // order, n)
    return tuple(sorted(pow(step, j, n) for j in range(order)))


class CyclotomicField:

    def __init__(self, n):
        if n < 1:
            raise ValueError(f"conductor must be positive, got {n}")
        poly = cyclotomic_poly(n)
        self.n = n
        self.degree = int(totient(n))
        self.field = NumberField(poly, certificate=IrreducibilityCertificate.cyclotomic(poly, n))
        self._powers = {}

    def __repr__(self):
        return f"CyclotomicField({self.n})"

    @property
    def zeta(self):
        return self.field.gen

    def zeta_power(self, e):
        e %= self.n
        if e not in self._powers:
            self._powers[e] = self.field.element(UniPoly.monomial(e))
        return self._powers[e]

    @property
    def units(self):
        return [k for k in range(1, self.n) if gcd(k, self.n) == 1] or [1]

    @cached_property
    def real(self):
        subgroup = (1,) if self.n <= 2 else (1, self.n - 1)
        return PeriodSubfield(self, subgroup)


class PeriodSubfield:
    """
    Fixed field of H in (Z/n)^*, generated by eta = sum of zeta^h over H.

    Elements of Q(zeta) fixed by H are converted exactly to the power basis
    of eta and back.
    """

    def __init__(self, cyclotomic, subgroup):
        n = cyclotomic.n
        H = sorted({h % n for h in subgroup})
        for h in H:
            if gcd(h, n) != 1:
                raise NotCoprime(h, n)
        for a in H:
            for b in H:
                if a * b % n not in H:
                    raise ValueError(f"{H} is not a subgroup of (Z/{n})^*")
        self.cyclotomic = cyclotomic
        self.subgroup = tuple(H)
        self.period = self.conjugate_period(1)

        self._basis = EchelonBasis(cyclotomic.degree)
        self._power_coords = []
        power = cyclotomic.field.one
        while True:
            dependency = self._basis.insert(power.coords)
            if dependency is not None:
                break
            self._power_coords.append(power.coords)
            power = power * self.period
        minpoly = UniPoly([-c for c in dependency] + [1])
        self.field = NumberField(minpoly)
        logger.debug(f"period subfield of Q(zeta_{n}) for H={self.subgroup}: {minpoly}")

    @property
    def degree(self):
        return self.field.degree

    def conjugate_period(self, k):
        """Image of eta under zeta -> zeta^k"""
        C = self.cyclotomic
        total = C.field.zero
        for h in self.subgroup:
            total = total + C.zeta_power(k * h)
        return total

    def to_subfield(self, x):
        """Express an H-invariant element of Q(zeta_n) in the eta power basis"""
        coords = self._basis.solve(x.coords)
        if coords is None:
            raise ValueError(f"element is not fixed by {self.subgroup}")
        return self.field.element(coords)

    def embed(self, y):
        """Image in Q(zeta_n) of an element of the subfield"""
        C = self.cyclotomic
        y = self.field.element(y)
        total = C.field.zero
        for c, coords in zip(y.coords, self._power_coords):
            if c:
                total = total + C.field.element(coords) * c
        return total


def galois_map(C, k):
    """zeta -> zeta^k on Q(zeta_n)"""
    if gcd(k, C.n) != 1:
        raise NotCoprime(k, C.n)
    return NFAutomorphism(C.field, C.zeta_power(k))


def real_subfield(C):
    """
    Maximal real subfield of Q(zeta_n)
    Returns:
        (NumberField of zeta + zeta^-1, that element of Q(zeta_n))
    """
    return C.real.field, C.real.period


def restrict_to_subfield(S, k):
    if gcd(k, S.cyclotomic.n) != 1:
        raise NotCoprime(k, S.cyclotomic.n)
    return NFAutomorphism(S.field, S.to_subfield(S.conjugate_period(k)))


def restrict_to_real(C, k):
    """Restriction of zeta -> zeta^k to the maximal real subfield"""
    return restrict_to_subfield(C.real, k)


def matching_exponents(S, image):
    """Units k whose restriction to S sends its generator to image"""
    image = S.field.element(image)
    return [k for k in S.cyclotomic.units if S.to_subfield(S.conjugate_period(k)) == image]


def check_beta_identity(with_i=True):
    """
    In Q(zeta_64), with alpha = zeta^2 + zeta^-2, test beta^2 = -2 - alpha for
    beta = i(zeta + zeta^-1), i = zeta^16; with_i=False drops the factor i.
    """
    C = cyclotomic_field(64)
    zeta, zeta_inv = C.zeta_power(1), C.zeta_power(-1)
    alpha = C.zeta_power(2) + C.zeta_power(-2)
    beta = zeta + zeta_inv
    if with_i:
        beta = C.zeta_power(16) * beta
    return beta * beta == -2 - alpha


def beta_element():
    C = cyclotomic_field(64)
    return C.zeta_power(16) * (C.zeta_power(1) + C.zeta_power(-1))


@lru_cache(maxsize=None)
def cyclotomic_field(n):
    """Shared CyclotomicField instance per conductor"""
    return CyclotomicField(n)
