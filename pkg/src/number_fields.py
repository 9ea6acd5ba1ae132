"""
Number fields K = Q[x]/(f) in the power basis of a root theta of f.
"""

from fractions import Fraction
from functools import cached_property
from math import lcm

from loguru import logger
from mpmath import mp, polyroots, pslq
from sympy import factorint

from .errors import (
    ClosureExceedsDegree,
    GeneratorSearchExhausted,
    IrreducibilityInconclusive,
    MixedParents,
    NFDivisionByZero,
    NotARoot,
    NotIrreducible,
    WrongDegree,
)
from .exact_algebra import (
    UniPoly,
    Verdict,
    certify_irreducible_over_Q,
    count_real_roots,
    discriminant,
    poly_gcdex,
    resultant,
)
from .linalg import EchelonBasis
from .utils import format_rational, parse_rational

# linear combinations theta + c*theta^2 tried by fixed_field after plain powers
FIXED_FIELD_SEARCH = 32


class NumberField:
    """
    Q(theta) for a monic integral irreducible defining polynomial.

    Construction certifies irreducibility; NotIrreducible or
    IrreducibilityInconclusive is raised when no certificate is found.
    """

    def __init__(self, poly, certificate=None, prime_budget=60):
        if not isinstance(poly, UniPoly):
            poly = UniPoly(poly)
        if poly.degree < 1 or not poly.is_monic or not poly.is_integral:
            raise ValueError(f"defining polynomial must be monic integral nonconstant, got {poly}")
        if certificate is None:
            certificate = certify_irreducible_over_Q(poly, prime_budget)
        if certificate.verdict == Verdict.REDUCIBLE:
            raise NotIrreducible(poly, certificate.factor)
        if certificate.verdict == Verdict.INCONCLUSIVE:
            raise IrreducibilityInconclusive(poly, certificate.degree_set)
        self.poly = poly
        self.degree = poly.degree
        self.certificate = certificate
        self._f = poly.int_coeffs()
        logger.debug(f"number field of degree {self.degree} defined by {poly} ({certificate.method})")

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.poly == other.poly

    def __hash__(self):
        return hash(self.poly)

    def __repr__(self):
        return f"NumberField({self.poly})"

    # elements

    def element(self, value):
        """Coerce an int, Fraction, 'p/q' string, UniPoly or coordinate sequence"""
        if isinstance(value, NFElement):
            if value.parent != self:
                raise MixedParents(f"element of {value.parent} used in {self}")
            return value
        if isinstance(value, (int, Fraction)):
            return NFElement(self, (Fraction(value),) + (Fraction(0),) * (self.degree - 1))
        if isinstance(value, UniPoly):
            value = value.coeffs
        coords = [parse_rational(c) for c in value]
        if len(coords) > self.degree:
            coords = list((UniPoly(coords) % self.poly).coeffs)
        coords += [Fraction(0)] * (self.degree - len(coords))
        return NFElement(self, tuple(coords))

    @property
    def zero(self):
        return self.element(0)

    @property
    def one(self):
        return self.element(1)

    @property
    def gen(self):
        if self.degree == 1:
            return self.element(-self.poly.coeffs[0])
        return self.element((0, 1))

    def _reduce_ints(self, v):
        """Reduce an integer product vector of length <= 2n-1 modulo f"""
        n = self.degree
        f = self._f
        for k in range(len(v) - 1, n - 1, -1):
            c = v[k]
            if c:
                base = k - n
                for i in range(n):
                    if f[i]:
                        v[base + i] -= c * f[i]
        return v[:n] + [0] * (n - len(v[:n]))

    @cached_property
    def power_traces(self):
        """Tr(theta^k) for k < n, by Newton's identities"""
        n = self.degree
        a = self._f
        p = [n]
        for k in range(1, n):
            s = k * a[n - k]
            for i in range(1, k):
                s += a[n - i] * p[k - i]
            p.append(-s)
        return p

    @cached_property
    def signature(self):
        r1 = count_real_roots(self.poly)
        return r1, (self.degree - r1) // 2

    @property
    def is_totally_real(self):
        return self.signature[1] == 0

    @cached_property
    def discriminant(self):
        return discriminant(self.poly)

    def to_dict(self):
        return {"poly": self.poly.to_list()}


def _scaled(coords):
    den = lcm(*(c.denominator for c in coords))
    return den, [c.numerator * (den // c.denominator) for c in coords]


class NFElement:
    """Element of a NumberField, stored as power-basis coordinates"""

    __slots__ = ("parent", "coords")

    def __init__(self, parent, coords):
        self.parent = parent
        self.coords = coords

    def _coerce(self, other):
        if isinstance(other, NFElement):
            if other.parent != self.parent:
                raise MixedParents(f"cannot combine elements of {self.parent} and {other.parent}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.parent.element(other)
        return NotImplemented

    @property
    def is_zero(self):
        return not any(self.coords)

    def __bool__(self):
        return not self.is_zero

    @property
    def is_rational(self):
        return not any(self.coords[1:])

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return NFElement(self.parent, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return NFElement(self.parent, tuple(-a for a in self.coords))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return NFElement(self.parent, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NFElement(self.parent, tuple(a * other for a in self.coords))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        da, a = _scaled(self.coords)
        db, b = _scaled(other.coords)
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        den = da * db
        return NFElement(self.parent, tuple(Fraction(v, den) for v in self.parent._reduce_ints(prod)))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero:
            raise NFDivisionByZero(f"inverse of zero in {self.parent}")
        s, _, g = poly_gcdex(self.as_poly(), self.parent.poly)
        if g.degree != 0:
            raise NFDivisionByZero(f"{self} is not invertible")
        return self.parent.element(s)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise NFDivisionByZero("division by zero")
            return NFElement(self.parent, tuple(a / Fraction(other) for a in self.coords))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.parent.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self.coords[0] == other
        return isinstance(other, NFElement) and self.parent == other.parent and self.coords == other.coords

    def __hash__(self):
        return hash((self.parent, self.coords))

    def __repr__(self):
        return repr(self.as_poly()).replace("x", "a")

    def as_poly(self):
        return UniPoly(self.coords)

    def minimal_polynomial(self):
        """Monic minimal polynomial over Q, from the first linear dependency among powers"""
        basis = EchelonBasis(self.parent.degree)
        power = self.parent.one
        k = 0
        while True:
            coords = basis.insert(power.coords)
            if coords is not None:
                return UniPoly([-c for c in coords] + [1])
            power = power * self
            k += 1

    def charpoly(self):
        m = self.minimal_polynomial()
        return m ** (self.parent.degree // m.degree)

    def norm(self):
        return resultant(self.parent.poly, self.as_poly()) if not self.is_zero else Fraction(0)

    def trace(self):
        return sum(c * t for c, t in zip(self.coords, self.parent.power_traces))

    def sign_counts(self):
        """
        Numbers of real embeddings where the element is positive / negative
        Returns:
            (positive, negative); needs a totally real parent and a nonzero element
        """
        if not self.parent.is_totally_real:
            raise ValueError(f"{self.parent} is not totally real")
        if self.is_zero:
            raise ValueError("sign of zero")
        m = self.minimal_polynomial()
        mult = self.parent.degree // m.degree
        positive = count_real_roots(m, 0, None)
        return positive * mult, (m.degree - positive) * mult

    def to_list(self):
        return [format_rational(c) for c in self.coords]


class NFAutomorphism:
    """Automorphism of a NumberField given by the image of theta"""

    def __init__(self, parent, image, verify=True):
        image = parent.element(image)
        if verify and not parent.poly(image).is_zero:
            raise NotARoot(f"{image} is not a root of {parent.poly}")
        self.parent = parent
        self.image = image

    @classmethod
    def identity(cls, parent):
        return cls(parent, parent.gen, verify=False)

    @cached_property
    def matrix(self):
        """Rows are the coordinates of image^j"""
        rows = []
        power = self.parent.one
        for _ in range(self.parent.degree):
            rows.append(power.coords)
            power = power * self.image
        return rows

    def __call__(self, x):
        x = self.parent.element(x)
        n = self.parent.degree
        out = [Fraction(0)] * n
        for c, row in zip(x.coords, self.matrix):
            if c:
                for i in range(n):
                    if row[i]:
                        out[i] += c * row[i]
        return NFElement(self.parent, tuple(out))

    def __mul__(self, other):
        """Composition self o other"""
        if other.parent != self.parent:
            raise MixedParents("automorphisms of different fields")
        return NFAutomorphism(self.parent, self(other.image), verify=False)

    @property
    def is_identity(self):
        return self.image == self.parent.gen

    @cached_property
    def order(self):
        g = self
        k = 1
        while not g.is_identity:
            g = self * g
            k += 1
            if k > self.parent.degree:
                raise ClosureExceedsDegree(k, self.parent.degree)
        return k

    def __pow__(self, k):
        k %= self.order
        result = NFAutomorphism.identity(self.parent)
        for _ in range(k):
            result = self * result
        return result

    def inverse(self):
        return self ** (self.order - 1)

    def __eq__(self, other):
        return isinstance(other, NFAutomorphism) and self.parent == other.parent and self.image == other.image

    def __hash__(self):
        return hash((self.parent, self.image.coords))

    def __repr__(self):
        return f"a -> {self.image!r}"

    def to_dict(self):
        return {"image": self.image.to_list()}


def verify_automorphism(K, image):
    """NFAutomorphism after checking f(image) = 0, NotARoot otherwise"""
    return NFAutomorphism(K, image, verify=True)


class AutGroup:
    """
    Finite group of automorphisms with a cached multiplication table.
    Elements are listed in discovery order, identity first.
    """

    def __init__(self, parent, elements):
        self.parent = parent
        self.elements = list(elements)
        self._index = {e.image.coords: i for i, e in enumerate(self.elements)}

    @classmethod
    def generate(cls, parent, generators):
        identity = NFAutomorphism.identity(parent)
        elements = [identity]
        seen = {identity.image.coords}
        queue = [identity]
        while queue:
            e = queue.pop(0)
            for g in generators:
                h = g * e
                if h.image.coords not in seen:
                    seen.add(h.image.coords)
                    elements.append(h)
                    queue.append(h)
                    if len(elements) > parent.degree:
                        raise ClosureExceedsDegree(len(elements), parent.degree)
        logger.debug(f"generated automorphism group of order {len(elements)} on {parent}")
        return cls(parent, elements)

    @property
    def order(self):
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def index(self, a):
        try:
            return self._index[a.image.coords]
        except KeyError:
            raise ValueError(f"{a} is not in the group") from None

    def __contains__(self, a):
        return a.parent == self.parent and a.image.coords in self._index

    @cached_property
    def table(self):
        """table[i][j] = index of elements[i] o elements[j]"""
        return [[self.index(a * b) for b in self.elements] for a in self.elements]

    def mul(self, i, j):
        return self.table[i][j]

    def inverse_index(self, i):
        return self.table[i].index(0)

    def element_order(self, i):
        k, j = 1, i
        while j != 0:
            j = self.table[i][j]
            k += 1
        return k

    @property
    def is_cyclic(self):
        return any(self.element_order(i) == self.order for i in range(self.order))

    def subgroup(self, indices):
        return AutGroup.generate(self.parent, [self.elements[i] for i in indices])


def generate_group(generators, parent=None):
    """Closure of a set of automorphisms; ClosureExceedsDegree past [K:Q] elements"""
    if parent is None:
        if not generators:
            raise ValueError("generate_group needs a parent field when no generators are given")
        parent = generators[0].parent
    return AutGroup.generate(parent, list(generators))


def fixed_field(K, H):
    """
    Fixed field of a subgroup H of Aut(K)
    Args:
        K: NumberField
        H: AutGroup (or iterable of automorphisms closed under composition)
    Returns:
        (NumberField, NFElement t in K generating it)
    """
    H = list(H)
    target = K.degree // len(H)
    theta = K.gen
    candidates = [theta ** j for j in range(1, max(K.degree, 2))]
    candidates += [theta + c * theta ** 2 for c in range(1, FIXED_FIELD_SEARCH + 1)]
    for x in candidates:
        t = K.zero
        for h in H:
            t = t + h(x)
        m = t.minimal_polynomial()
        if m.degree == target:
            logger.debug(f"fixed field of order-{len(H)} subgroup defined by {m}")
            return NumberField(m), t
    raise GeneratorSearchExhausted(f"no generator of the fixed field of an order-{len(H)} subgroup found")


def squarefree_kernel(n):
    """Signed squarefree part of a nonzero rational"""
    n = Fraction(n)
    value = n.numerator * n.denominator
    sign = -1 if value < 0 else 1
    core = 1
    for p, e in factorint(abs(value)).items():
        if e % 2:
            core *= p
    return sign * core


def same_quadratic_field(f, g):
    """True when two quadratics over Q define the same field"""
    for h in (f, g):
        if h.degree != 2:
            raise WrongDegree(f"{h} is not quadratic")

    def kernel(h):
        a, b, c = h.coeffs[2], h.coeffs[1], h.coeffs[0]
        return squarefree_kernel(b * b - 4 * a * c)
    return kernel(f) == kernel(g)


def signature(K):
    return K.signature


def find_automorphisms(K, dps=80, max_coeff=10 ** 15):
    """
    Automorphisms of K located numerically and certified exactly.

    Roots of f come from mpmath; each root is written as a rational
    polynomial in one fixed root by an integer relation search (PSLQ). A
    candidate is kept only when f(image) = 0 holds exactly in K.
    Returns:
        list of NFAutomorphism, identity first, then by image coordinates
    """
    n = K.degree
    found = {}
    with mp.workdps(dps):
        roots = polyroots([int(c) for c in reversed(K._f)], maxsteps=400, extraprec=4 * dps)
        eps = mp.mpf(10) ** (-(dps // 2))
        base = max(roots, key=lambda z: (abs(mp.im(z)) < eps, mp.re(z)))
        weight = mp.sqrt(2)

        def flat(z):
            return mp.re(z) + weight * mp.im(z)

        powers = [flat(base ** k) for k in range(n)]
        for r in roots:
            relation = pslq([flat(r)] + powers, maxcoeff=max_coeff, maxsteps=10 ** 6)
            if not relation or relation[0] == 0:
                continue
            image = [Fraction(-m, relation[0]) for m in relation[1:]]
            try:
                a = NFAutomorphism(K, image)
            except NotARoot:
                logger.debug(f"integer relation for a root of {K.poly} is not exact")
                continue
            found[a.image.coords] = a
    autos = sorted(found.values(), key=lambda a: (not a.is_identity, a.image.coords))
    logger.debug(f"{len(autos)} automorphisms of {K}")
    return autos
