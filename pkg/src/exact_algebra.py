"""
Exact univariate polynomial algebra over Q.

UniPoly keeps Fraction coefficients lowest degree first. Resultants use the
subresultant chain over Z, real-root counting uses a primitive Sturm chain,
and factorization modulo p is delegated to src.finite_fields.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Optional

from loguru import logger
from sympy import divisors, factorint, primerange
from sympy.polys import galoistools as gt
from sympy.polys.domains import ZZ

from .errors import ZeroPolynomialDivision, ZeroReduction
from .finite_fields import FinField, FinPoly, factor_finpoly, gf_cycle_type, to_gf

# Rational-root search is skipped when the constant term is larger than this
ROOT_SEARCH_LIMIT = 10 ** 40


class UniPoly:
    """Polynomial over Q, immutable, with a canonical coefficient tuple"""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls):
        return cls((0, 1))

    @classmethod
    def constant(cls, c):
        return cls((c,))

    @classmethod
    def monomial(cls, n, c=1):
        return cls((0,) * n + (c,))

    @property
    def degree(self):
        """Degree, with -1 standing in for the zero polynomial"""
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def is_monic(self):
        return self.lc == 1

    @property
    def is_integral(self):
        return all(c.denominator == 1 for c in self.coeffs)

    def int_coeffs(self):
        if not self.is_integral:
            raise ValueError(f"{self} has non-integral coefficients")
        return [c.numerator for c in self.coeffs]

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return UniPoly((other,))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return UniPoly(c * other for c in self.coeffs)
        if not isinstance(other, UniPoly):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative polynomial power")
        result = UniPoly((1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero:
            raise ZeroPolynomialDivision(f"division of {self} by the zero polynomial")
        rem = list(self.coeffs)
        m = other.degree
        dq = len(rem) - 1 - m
        if dq < 0:
            return UniPoly(), self
        quo = [Fraction(0)] * (dq + 1)
        lc = other.lc
        for i in range(dq, -1, -1):
            c = rem[i + m] / lc
            quo[i] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= c * b
        return UniPoly(quo), UniPoly(rem[:m])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, value):
        """Horner evaluation at anything closed under + and * with rationals"""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def derivative(self):
        return UniPoly(c * i for i, c in enumerate(self.coeffs))._drop_constant()

    def _drop_constant(self):
        return UniPoly(self.coeffs[1:])

    def compose(self, inner):
        """self(inner(x))"""
        acc = UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def shift(self, a):
        """self(x + a)"""
        return self.compose(UniPoly((a, 1)))

    def reflect(self):
        """self(-x)"""
        return UniPoly(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs))

    def monic(self):
        if self.is_zero:
            return self
        return self * (1 / self.lc)

    def primitive_part(self):
        """Integral primitive multiple with positive leading coefficient"""
        if self.is_zero:
            return self
        den = lcm(*(c.denominator for c in self.coeffs))
        ints = [(c * den).numerator for c in self.coeffs]
        g = reduce(gcd, ints)
        if ints[-1] < 0:
            g = -g
        return UniPoly(v // g for v in ints)

    def reduce_mod(self, field):
        """Image in F[x] for a FinField F; ZeroReduction if not p-integral or zero"""
        p = field.p
        ints = []
        for c in self.coeffs:
            if c.denominator % p == 0:
                raise ZeroReduction(p, self)
            ints.append(c.numerator * pow(c.denominator, -1, p) % p)
        reduced = FinPoly.from_ints(field, ints)
        if reduced.is_zero:
            raise ZeroReduction(p, self)
        return reduced

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UniPoly((other,))
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if self.is_zero:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def to_list(self):
        """JSON-friendly coefficients: ints, or 'p/q' strings"""
        return [c.numerator if c.denominator == 1 else f"{c.numerator}/{c.denominator}" for c in self.coeffs]


def poly_gcd(a, b):
    """Monic gcd over Q"""
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def poly_gcdex(a, b):
    """
    Extended Euclid over Q
    Returns:
        (s, t, g) with s*a + t*b = g, g monic
    """
    r0, r1 = a, b
    s0, s1 = UniPoly((1,)), UniPoly()
    t0, t1 = UniPoly(), UniPoly((1,))
    while not r1.is_zero:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero:
        return s0, t0, r0
    inv = 1 / r0.lc
    return s0 * inv, t0 * inv, r0 * inv


# integer helpers on ascending int lists

def _strip(v):
    while v and v[-1] == 0:
        v.pop()
    return v


def _content(v):
    return abs(reduce(gcd, v))


def _prem(a, b):
    """lc(b)^(deg a - deg b + 1) * a mod b, over Z"""
    db = len(b) - 1
    lb = b[-1]
    r = list(a)
    e = len(a) - len(b) + 1
    if e <= 0:
        return r
    while r and len(r) - 1 >= db:
        c = r[-1]
        shift = len(r) - 1 - db
        r = [x * lb for x in r]
        for j, bj in enumerate(b):
            r[shift + j] -= c * bj
        _strip(r)
        e -= 1
    if e > 0:
        r = [x * lb ** e for x in r]
    return r


def _int_resultant(A, B):
    if not A or not B:
        return 0
    a, b = _content(A), _content(B)
    A = [x // a for x in A]
    B = [x // b for x in B]
    g = h = 1
    s = 1
    t = a ** (len(B) - 1) * b ** (len(A) - 1)
    if len(A) < len(B):
        A, B = B, A
        if (len(A) - 1) % 2 and (len(B) - 1) % 2:
            s = -1
    while len(B) - 1 > 0:
        da, db = len(A) - 1, len(B) - 1
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        R = _prem(A, B)
        A = B
        div = g * h ** delta
        B = [x // div for x in R]
        if not B:
            return 0
        g = A[-1]
        h = g ** delta // h ** (delta - 1) if delta >= 1 else h
    da = len(A) - 1
    if da == 0:
        return s * t
    h = B[-1] ** da // h ** (da - 1)
    return s * t * h


def _scaled_ints(f):
    den = lcm(*(c.denominator for c in f.coeffs))
    return den, [(c * den).numerator for c in f.coeffs]


def resultant(a, b):
    """Res(a, b) for nonzero a, b in Q[x], exact"""
    if a.is_zero or b.is_zero:
        raise ValueError("resultant of the zero polynomial")
    da, A = _scaled_ints(a)
    db, B = _scaled_ints(b)
    r = _int_resultant(A, B)
    return Fraction(r, da ** b.degree * db ** a.degree)


def discriminant(f):
    n = f.degree
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(f, f.derivative()) / f.lc


# real roots

def sturm_sequence(f):
    """Primitive Sturm chain of f as ascending int lists"""
    p0 = f.primitive_part().int_coeffs()
    seq = [p0]
    d = f.derivative()
    if d.is_zero:
        return seq
    seq.append(d.primitive_part().int_coeffs())
    while True:
        a, b = seq[-2], seq[-1]
        if len(b) == 1:
            break
        r = _prem(a, b)
        if not r:
            break
        # pseudo-remainder sign follows lc(b)^(delta+1)
        lead_power = b[-1] ** (len(a) - len(b) + 1)
        sign = -1 if lead_power > 0 else 1
        c = _content(r)
        seq.append([sign * x // c for x in r])
    return seq


def _sign_at(v, x):
    if x is None:
        return None
    acc = Fraction(0)
    for c in reversed(v):
        acc = acc * x + c
    return (acc > 0) - (acc < 0)


def _variations(seq, x, at_infinity=0):
    signs = []
    for v in seq:
        if at_infinity:
            s = 1 if v[-1] > 0 else -1
            if at_infinity < 0 and (len(v) - 1) % 2:
                s = -s
        else:
            s = _sign_at(v, x)
        if s:
            signs.append(s)
    return sum(1 for u, w in zip(signs, signs[1:]) if u != w)


def count_real_roots(f, lo=None, hi=None):
    """
    Number of distinct real roots of f in (lo, hi]
    Args:
        f: nonzero UniPoly
        lo, hi: rational bounds; None means -inf / +inf
    Returns:
        int
    """
    seq = sturm_sequence(f)
    v_lo = _variations(seq, None, -1) if lo is None else _variations(seq, Fraction(lo))
    v_hi = _variations(seq, None, 1) if hi is None else _variations(seq, Fraction(hi))
    return v_lo - v_hi


def rational_roots(f):
    """Rational roots of f, positive before negative, by increasing size"""
    ints = f.primitive_part().int_coeffs()
    roots = []
    while ints and ints[0] == 0:
        ints = ints[1:]
        if Fraction(0) not in roots:
            roots.append(Fraction(0))
    if len(ints) < 2:
        return roots
    a0, an = abs(ints[0]), abs(ints[-1])
    if a0 > ROOT_SEARCH_LIMIT or an > ROOT_SEARCH_LIMIT:
        logger.debug("skipping rational root search, coefficients too large")
        return roots
    candidates = {Fraction(s * p, q) for p in divisors(a0) for q in divisors(an) for s in (1, -1)}
    g = UniPoly(ints)
    for c in sorted(candidates, key=lambda c: (abs(c), c < 0)):
        if g(c) == 0:
            roots.append(c)
    return roots


def is_eisenstein(f, p):
    """True when the integral polynomial f is Eisenstein at p"""
    ints = f.int_coeffs()
    if len(ints) < 2 or ints[-1] % p == 0 or ints[0] % (p * p) == 0:
        return False
    return all(c % p == 0 for c in ints[:-1])


# factorization modulo p

def factor_mod_p(f, field, seed=0):
    """
    Factor f modulo p into monic irreducibles over a FinField
    Args:
        f: UniPoly with p-integral coefficients, or a FinPoly
        field: FinField F_{p^k}
        seed: seed of the equal-degree splitting stream
    Returns:
        list of (FinPoly, multiplicity), deterministic for a given seed
    """
    if isinstance(f, UniPoly):
        f = f.reduce_mod(field)
    elif f.is_zero:
        raise ZeroReduction(field.p, f)
    return factor_finpoly(f, seed)


def frobenius_degrees(f, p):
    """
    Cycle type of Frobenius at p for integral f, or None when f mod p is not
    squarefree or drops degree
    """
    ints = f.int_coeffs()
    if ints[-1] % p == 0:
        return None
    g = to_gf(ints, p)
    if not gt.gf_sqf_p(g, p, ZZ):
        return None
    return gf_cycle_type(g, p)


# irreducibility certificates

class Verdict(str, Enum):
    IRREDUCIBLE = "Irreducible"
    REDUCIBLE = "Reducible"
    INCONCLUSIVE = "Inconclusive"


def subset_sums(degrees):
    sums = {0}
    for d in degrees:
        sums |= {s + d for s in sums}
    return sums


@dataclass(frozen=True)
class IrreducibilityCertificate:
    verdict: Verdict
    poly: UniPoly
    method: str
    prime: Optional[int] = None
    shift: int = 0
    factor: Optional[UniPoly] = None
    degree_set: frozenset = field(default_factory=frozenset)
    primes_used: tuple = ()
    conductor: Optional[int] = None

    @classmethod
    def cyclotomic(cls, poly, n):
        return cls(Verdict.IRREDUCIBLE, poly, "cyclotomic", conductor=n)

    def check(self):
        """Re-verify the witness from scratch"""
        f = self.poly.primitive_part()
        n = f.degree
        if self.method == "prime":
            degrees = frobenius_degrees(f, self.prime)
            return degrees == [n]
        if self.method == "eisenstein":
            return is_eisenstein(f.shift(self.shift), self.prime)
        if self.method == "cyclotomic":
            from .cyclotomic import cyclotomic_poly
            return cyclotomic_poly(self.conductor) == f
        if self.method == "degree_sieve":
            allowed = set(range(n + 1))
            for p in self.primes_used:
                degrees = frobenius_degrees(f, p)
                if degrees is None:
                    return False
                allowed &= subset_sums(degrees)
            return allowed == {0, n}
        if self.method in ("rational_root", "repeated_factor"):
            return (f % self.factor).is_zero and 0 < self.factor.degree < n
        return self.verdict == Verdict.INCONCLUSIVE

    def to_dict(self):
        out = {"verdict": self.verdict.value, "method": self.method, "poly": self.poly.to_list()}
        if self.prime is not None:
            out["prime"] = self.prime
        if self.shift:
            out["shift"] = self.shift
        if self.factor is not None:
            out["factor"] = self.factor.to_list()
        if self.degree_set:
            out["degree_set"] = sorted(self.degree_set)
        if self.primes_used:
            out["primes_used"] = list(self.primes_used)
        if self.conductor is not None:
            out["conductor"] = self.conductor
        return out


def _eisenstein_witness(f):
    n = f.degree
    for shift in (0, 1, -1):
        g = f.shift(shift).int_coeffs()
        lower = reduce(gcd, g[:-1])
        if lower == 0:
            continue
        for p in sorted(factorint(abs(lower))):
            if g[-1] % p and g[0] % (p * p):
                return p, shift
    return None


def certify_irreducible_over_Q(f, prime_budget=60):
    """
    Decide irreducibility of f over Q with a checkable witness
    Args:
        f: nonconstant UniPoly (rescaled to a primitive integral polynomial)
        prime_budget: number of good primes examined by the reduction sieve
    Returns:
        IrreducibilityCertificate
    """
    if f.degree < 1:
        raise ValueError("irreducibility of a constant polynomial")
    f = f.primitive_part()
    n = f.degree

    if n >= 2:
        roots = rational_roots(f)
        if roots:
            r = roots[0]
            factor = UniPoly((-r.numerator, r.denominator))
            logger.debug(f"{f} has rational root {r}")
            return IrreducibilityCertificate(Verdict.REDUCIBLE, f, "rational_root", factor=factor)

        repeated = poly_gcd(f, f.derivative())
        if repeated.degree > 0:
            return IrreducibilityCertificate(Verdict.REDUCIBLE, f, "repeated_factor", factor=repeated)

        witness = _eisenstein_witness(f)
        if witness:
            p, shift = witness
            return IrreducibilityCertificate(Verdict.IRREDUCIBLE, f, "eisenstein", prime=p, shift=shift)

    allowed = set(range(n + 1))
    used = []
    for p in primerange(2, 10 ** 7):
        if len(used) >= prime_budget:
            break
        degrees = frobenius_degrees(f, p)
        if degrees is None:
            continue
        used.append(p)
        if degrees == [n]:
            return IrreducibilityCertificate(Verdict.IRREDUCIBLE, f, "prime", prime=p, primes_used=tuple(used))
        allowed &= subset_sums(degrees)
        if allowed == {0, n}:
            return IrreducibilityCertificate(
                Verdict.IRREDUCIBLE, f, "degree_sieve", degree_set=frozenset(allowed), primes_used=tuple(used)
            )

    logger.warning(f"irreducibility of {f} inconclusive after {len(used)} primes")
    return IrreducibilityCertificate(
        Verdict.INCONCLUSIVE, f, "budget", degree_set=frozenset(allowed), primes_used=tuple(used)
    )
