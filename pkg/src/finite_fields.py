"""
Finite fields F_q = F_p[X]/(m(X)) and polynomials over them.

Prime-field kernels come from sympy.polys.galoistools, which works on dense
integer lists with the leading coefficient first. The classes here keep
coefficients lowest degree first and convert at the boundary.
"""

import random
from functools import lru_cache

from loguru import logger
from sympy import isprime
from sympy.polys import galoistools as gt
from sympy.polys.domains import ZZ

from .errors import ZeroPolynomialDivision


def to_gf(coeffs, p):
    """Ascending integer coefficients -> reduced galoistools list"""
    return gt.gf_strip([int(c) % p for c in reversed(coeffs)])


def from_gf(f):
    return tuple(int(c) for c in reversed(f))


@lru_cache(maxsize=None)
def default_modulus(p, k):
    """Least monic irreducible of degree k over F_p, ordered by its tail read base p"""
    if k == 1:
        return (0, 1)
    for tail in range(p ** k):
        coeffs = []
        t = tail
        for _ in range(k):
            t, c = divmod(t, p)
            coeffs.append(c)
        coeffs.append(1)
        if gt.gf_irreducible_p(to_gf(coeffs, p), p, ZZ):
            return tuple(coeffs)
    raise ValueError(f"no irreducible polynomial of degree {k} over F_{p}")


class FinField:
    """The field F_p[X]/(modulus) with p^k elements"""

    def __init__(self, p, k=1, modulus=None):
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        if modulus is None:
            modulus = default_modulus(p, k)
        modulus = from_gf(to_gf(modulus, p))
        if len(modulus) - 1 != k or modulus[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {k}")
        if k > 1 and not gt.gf_irreducible_p(to_gf(modulus, p), p, ZZ):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.k = k
        self.modulus = modulus
        self._modulus_gf = to_gf(modulus, p)

    @property
    def order(self):
        return self.p ** self.k

    def __eq__(self, other):
        return isinstance(other, FinField) and self.p == other.p and self.modulus == other.modulus

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        return f"FinField({self.p}^{self.k}, modulus={list(self.modulus)})"

    def _reduce_gf(self, f):
        """galoistools list -> canonical coefficient tuple of length k"""
        r = from_gf(gt.gf_rem(f, self._modulus_gf, self.p, ZZ))
        return r + (0,) * (self.k - len(r))

    def element(self, value):
        """Coerce an int or an ascending coefficient sequence into the field"""
        if isinstance(value, FFElement):
            if value.field != self:
                raise ValueError("element belongs to another field")
            return value
        if isinstance(value, int):
            value = (value,)
        return FFElement(self, self._reduce_gf(to_gf(value, self.p)))

    @property
    def zero(self):
        return FFElement(self, (0,) * self.k)

    @property
    def one(self):
        return self.element(1)

    @property
    def gen(self):
        return self.element((0, 1))

    def elements(self):
        for n in range(self.order):
            coeffs = []
            for _ in range(self.k):
                n, c = divmod(n, self.p)
                coeffs.append(c)
            yield FFElement(self, tuple(coeffs))

    def random_element(self, rng):
        return FFElement(self, tuple(rng.randrange(self.p) for _ in range(self.k)))

    def isomorphism_to(self, other):
        """
        Field embedding self -> other between presentations of the same field
        Returns:
            Callable mapping FFElement of self to FFElement of other
        """
        if self.order != other.order:
            raise ValueError(f"{self} and {other} have different orders")
        if self == other:
            return lambda a: a
        for rho in other.elements():
            acc = other.zero
            for c in reversed(self.modulus):
                acc = acc * rho + c
            if acc.is_zero:
                break
        else:
            raise ValueError(f"{other} contains no root of {self.modulus}")

        def embed(a):
            acc = other.zero
            for c in reversed(a.coeffs):
                acc = acc * rho + c
            return acc
        return embed


class FFElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs

    def _coerce(self, other):
        if isinstance(other, FFElement):
            if other.field != self.field:
                raise ValueError("elements of different finite fields")
            return other
        if isinstance(other, int):
            return self.field.element(other)
        return NotImplemented

    @property
    def _gf(self):
        return to_gf(self.coeffs, self.field.p)

    @property
    def is_zero(self):
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FFElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FFElement(self.field, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        K = self.field
        return FFElement(K, K._reduce_gf(gt.gf_mul(self._gf, other._gf, K.p, ZZ)))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero in a finite field")
        K = self.field
        s, _, h = gt.gf_gcdex(self._gf, K._modulus_gf, K.p, ZZ)
        return FFElement(K, K._reduce_gf(s))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        K = self.field
        return FFElement(K, K._reduce_gf(gt.gf_pow_mod(self._gf, n, K._modulus_gf, K.p, ZZ)))

    def frobenius(self, i=1):
        """a -> a^(p^i)"""
        K = self.field
        return self ** (K.p ** (i % K.k))

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.element(other)
        return isinstance(other, FFElement) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        if self.field.k == 1:
            return str(self.coeffs[0])
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if i == 0 else f"{c if c != 1 else ''}X{'' if i == 1 else '^' + str(i)}")
        return " + ".join(reversed(terms)) or "0"


class FinPoly:
    """Polynomial over a FinField, coefficients lowest degree first"""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs=()):
        cs = [field.element(c) for c in coeffs]
        while cs and cs[-1].is_zero:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def from_ints(cls, field, ints):
        return cls(field, [int(c) for c in ints])

    @classmethod
    def x(cls, field):
        return cls(field, [0, 1])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    @property
    def is_zero(self):
        return not self.coeffs

    def is_one(self):
        return len(self.coeffs) == 1 and self.coeffs[0] == 1

    def to_ints(self):
        """Coefficients of a prime-field polynomial as ints in [0, p)"""
        if self.field.k != 1:
            raise ValueError("to_ints needs a prime field")
        return tuple(c.coeffs[0] for c in self.coeffs)

    def key(self):
        return tuple(c.coeffs for c in self.coeffs)

    def monic(self):
        if self.is_zero:
            return self
        inv = self.lc.inverse()
        return FinPoly(self.field, [c * inv for c in self.coeffs])

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        zero = self.field.zero
        a = self.coeffs + (zero,) * (n - len(self.coeffs))
        b = other.coeffs + (zero,) * (n - len(other.coeffs))
        return FinPoly(self.field, [x + y for x, y in zip(a, b)])

    def __neg__(self):
        return FinPoly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, FFElement)):
            c = self.field.element(other)
            return FinPoly(self.field, [a * c for a in self.coeffs])
        if self.is_zero or other.is_zero:
            return FinPoly(self.field)
        out = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return FinPoly(self.field, out)

    def __divmod__(self, other):
        if other.is_zero:
            raise ZeroPolynomialDivision("division by the zero polynomial")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return FinPoly(self.field), self
        inv = other.lc.inverse()
        quo = [self.field.zero] * (dq + 1)
        m = other.degree
        for i in range(dq, -1, -1):
            c = rem[i + m] * inv
            quo[i] = c
            if c.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                rem[i + j] = rem[i + j] - c * b
        return FinPoly(self.field, quo), FinPoly(self.field, rem[:m])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def derivative(self):
        return FinPoly(self.field, [c * i for i, c in enumerate(self.coeffs)][1:])

    def pow_mod(self, n, modulus):
        result = FinPoly(self.field, [1])
        base = self % modulus
        while n:
            if n & 1:
                result = (result * base) % modulus
            n >>= 1
            if n:
                base = (base * base) % modulus
        return result

    def __call__(self, a):
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * a + c
        return acc

    def __eq__(self, other):
        return isinstance(other, FinPoly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        if self.is_zero:
            return "0"
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if c.is_zero:
                continue
            coeff = repr(c)
            if self.field.k > 1 and len(c.coeffs) > 1 and sum(1 for v in c.coeffs if v) > 1:
                coeff = f"({coeff})"
            if i == 0:
                terms.append(coeff)
            else:
                mono = "x" if i == 1 else f"x^{i}"
                terms.append(mono if c == 1 else f"{coeff}*{mono}")
        return " + ".join(terms)


def poly_gcd(a, b):
    """Monic gcd of two FinPolys"""
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


# Generic algorithms over F_q, q = p^k

def _pth_root(f):
    """g with g^p = f, for f with derivative zero"""
    K = f.field
    e = K.order // K.p
    return FinPoly(K, [f.coeffs[i] ** e for i in range(0, f.degree + 1, K.p)])


def _sqf_generic(f):
    """Squarefree decomposition of a monic f: list of (g, multiplicity)"""
    out = []
    df = f.derivative()
    if df.is_zero:
        return [(g, e * f.field.p) for g, e in _sqf_generic(_pth_root(f))]
    c = poly_gcd(f, df)
    w = f // c
    i = 1
    while not w.is_one():
        y = poly_gcd(w, c)
        z = w // y
        if z.degree > 0:
            out.append((z.monic(), i))
        i += 1
        w = y
        c = c // y
    if c.degree > 0:
        out.extend((g, e * f.field.p) for g, e in _sqf_generic(_pth_root(c.monic())))
    return out


def _ddf_generic(f):
    K = f.field
    x = FinPoly.x(K)
    h = x
    d = 0
    out = []
    while 2 * (d + 1) <= f.degree:
        d += 1
        h = h.pow_mod(K.order, f)
        g = poly_gcd(f, h - x)
        if g.degree > 0:
            out.append((g, d))
            f = f // g
            h = h % f
    if f.degree > 0:
        out.append((f.monic(), f.degree))
    return out


def _edf_generic(f, d, rng):
    if f.degree <= d:
        return [f]
    K = f.field
    n = f.degree
    while True:
        a = FinPoly(K, [K.random_element(rng) for _ in range(n)])
        if a.degree < 1:
            continue
        if K.p == 2:
            t = a
            b = a
            for _ in range(K.k * d - 1):
                t = (t * t) % f
                b = b + t
        else:
            b = a.pow_mod((K.order ** d - 1) // 2, f) - FinPoly(K, [1])
        g = poly_gcd(f, b)
        if 0 < g.degree < n:
            return _edf_generic(g, d, rng) + _edf_generic(f // g, d, rng)


# Prime-field fast path on galoistools lists

def _gf_edf(f, d, p, rng):
    n = gt.gf_degree(f)
    if n <= d:
        return [f]
    while True:
        r = gt.gf_strip([rng.randrange(p) for _ in range(n)])
        if gt.gf_degree(r) < 1:
            continue
        if p == 2:
            h = r
            for _ in range(d - 1):
                r = gt.gf_pow_mod(r, 2, f, p, ZZ)
                h = gt.gf_add(h, r, p, ZZ)
        else:
            h = gt.gf_sub_ground(gt.gf_pow_mod(r, (p ** d - 1) // 2, f, p, ZZ), ZZ.one, p, ZZ)
        g = gt.gf_gcd(f, h, p, ZZ)
        if 0 < gt.gf_degree(g) < n:
            return _gf_edf(g, d, p, rng) + _gf_edf(gt.gf_quo(f, g, p, ZZ), d, p, rng)


def gf_cycle_type(f, p):
    """
    Degrees of the irreducible factors of a squarefree galoistools polynomial,
    by distinct-degree factorization only
    """
    _, f = gt.gf_monic(f, p, ZZ)
    degrees = []
    for h, d in gt.gf_ddf_zassenhaus(f, p, ZZ):
        degrees.extend([d] * (gt.gf_degree(h) // d))
    return sorted(degrees, reverse=True)


def factor_finpoly(f, seed=0):
    """
    Full factorization of a nonzero FinPoly into monic irreducibles
    Args:
        f: FinPoly over F_q
        seed: seed of the equal-degree splitting stream
    Returns:
        list of (monic irreducible FinPoly, multiplicity) sorted by degree then coefficients
    """
    if f.is_zero:
        raise ValueError("cannot factor the zero polynomial")
    K = f.field
    rng = random.Random(seed)
    factors = []
    if K.k == 1:
        p = K.p
        _, sqf = gt.gf_sqf_list(to_gf(f.to_ints(), p), p, ZZ)
        for g, e in sqf:
            for h, d in gt.gf_ddf_zassenhaus(g, p, ZZ):
                for irr in _gf_edf(h, d, p, rng):
                    factors.append((FinPoly.from_ints(K, from_gf(irr)), e))
    else:
        for g, e in _sqf_generic(f.monic()):
            for h, d in _ddf_generic(g):
                for irr in _edf_generic(h, d, rng):
                    factors.append((irr.monic(), e))
    factors.sort(key=lambda fe: (fe[0].degree, fe[0].key(), fe[1]))
    logger.debug(f"factored degree {f.degree} polynomial over F_{K.order} into {len(factors)} factors")
    return factors
