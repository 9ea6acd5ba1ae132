"""
Exception hierarchy shared by every module of the package.

Library code raises these; the CLI and the verification runner catch them,
log them and turn them into report entries or exit codes.
"""


class HeckeOrbitError(Exception):
    """Base class of all package errors"""


# exact algebra

class ZeroPolynomialDivision(HeckeOrbitError, ZeroDivisionError):
    """Division by the zero polynomial"""


class ZeroReduction(HeckeOrbitError):
    """A polynomial becomes zero (or is not p-integral) after reduction mod p"""

    def __init__(self, p, poly=None):
        self.p = p
        self.poly = poly
        super().__init__(f"polynomial vanishes or is not integral modulo {p}")


# number fields

class NotIrreducible(HeckeOrbitError):
    def __init__(self, poly, factor):
        self.poly = poly
        self.factor = factor
        super().__init__(f"{poly} is reducible, factor {factor}")


class IrreducibilityInconclusive(HeckeOrbitError):
    def __init__(self, poly, degree_set):
        self.poly = poly
        self.degree_set = degree_set
        super().__init__(
            f"could not certify {poly} irreducible; surviving degrees {sorted(degree_set)}"
        )


class MixedParents(HeckeOrbitError, ValueError):
    """Arithmetic between elements of different number fields"""


class NFDivisionByZero(HeckeOrbitError, ZeroDivisionError):
    pass


class NotARoot(HeckeOrbitError):
    """Claimed automorphism image is not a root of the defining polynomial"""


class ClosureExceedsDegree(HeckeOrbitError):
    def __init__(self, size, degree):
        self.size = size
        self.degree = degree
        super().__init__(f"group closure reached {size} elements, field degree is {degree}")


class GeneratorSearchExhausted(HeckeOrbitError):
    pass


class WrongDegree(HeckeOrbitError, ValueError):
    pass


# cyclotomic

class NotCoprime(HeckeOrbitError, ValueError):
    def __init__(self, k, n):
        self.k = k
        self.n = n
        super().__init__(f"{k} is not coprime to {n}")


# ideals

class IndexDivisor(HeckeOrbitError):
    """Dedekind's criterion fails: p divides the index of Z[theta]"""

    def __init__(self, p, poly, witness):
        self.p = p
        self.poly = poly
        self.witness = witness
        super().__init__(f"{p} divides the index of the order generated by a root of {poly}")


class NoMatch(HeckeOrbitError):
    pass


class NotPIntegral(HeckeOrbitError, ValueError):
    def __init__(self, p):
        self.p = p
        super().__init__(f"element is not integral at {p}")


# orbits

class MissingPrime(HeckeOrbitError, KeyError):
    def __init__(self, label):
        self.label = label
        super().__init__(f"no eigenvalue recorded at prime {label}")

    def __str__(self):
        return self.args[0]


class WrongField(HeckeOrbitError, ValueError):
    pass


class OrphanOrbit(HeckeOrbitError):
    def __init__(self, sigma_index, label):
        self.sigma_index = sigma_index
        self.label = label
        super().__init__(f"conjugate of {label} by group element {sigma_index} matches no orbit")


class DuplicateOrbit(HeckeOrbitError, ValueError):
    pass


class HomomorphismViolation(HeckeOrbitError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class MissingSign(HeckeOrbitError, ValueError):
    def __init__(self, label):
        self.label = label
        super().__init__(f"constituent {label} has no Atkin-Lehner sign")


# certify

class OrderCapExceeded(HeckeOrbitError):
    def __init__(self, cap):
        self.cap = cap
        super().__init__(f"group enumeration exceeds {cap} elements")


# cli / datasets

class SchemaError(HeckeOrbitError, ValueError):
    pass
