"""
Hecke eigensystems with number-field coefficients and the two Galois actions
on them: inner conjugation by automorphisms of the base field F, which moves
the primes, and exterior twisting by automorphisms of the coefficient field.
The orbit analysis (action table, phi, descent data, bookkeeping) sits on top.
"""

from dataclasses import dataclass, field, replace
from math import gcd
from types import MappingProxyType
from typing import Dict, List, Mapping, Optional, Tuple

from loguru import logger

from .errors import (
    DuplicateOrbit,
    HomomorphismViolation,
    MissingPrime,
    MissingSign,
    OrphanOrbit,
    WrongField,
)
from .ideals import factor_primes, prime_permutation, residue_reduce
from .number_fields import AutGroup, NFAutomorphism, NumberField, fixed_field, generate_group


def label_key(label):
    """Sort key of a prime label 'p.i'"""
    p, _, i = label.partition(".")
    return int(p), int(i or 0)


@dataclass(frozen=True, eq=False)
class EigensystemRecord:
    """Hecke eigenvalues a_P in a coefficient field L, keyed by prime label"""

    label: str
    coeff_field: NumberField
    eigenvalues: Mapping[str, object]
    atkin_lehner: Optional[int] = None
    generator_label: Optional[str] = None
    weight: int = 2
    character: str = "trivial"

    def __post_init__(self):
        values = dict(self.eigenvalues)
        for lab, v in values.items():
            if v.parent != self.coeff_field:
                raise WrongField(f"eigenvalue at {lab} of {self.label} lies outside {self.coeff_field}")
        if self.atkin_lehner not in (None, 1, -1):
            raise ValueError(f"Atkin-Lehner sign must be +1 or -1, got {self.atkin_lehner}")
        object.__setattr__(self, "eigenvalues", MappingProxyType(values))
        if self.generator_label is None:
            object.__setattr__(self, "generator_label", self._find_generator())
        elif self.generator_label not in values:
            raise MissingPrime(self.generator_label)

    def _find_generator(self):
        n = self.coeff_field.degree
        for lab in sorted(self.eigenvalues, key=label_key):
            v = self.eigenvalues[lab]
            if n > 1 and v.is_rational:
                continue
            if v.minimal_polynomial().degree == n:
                return lab
        raise ValueError(f"eigenvalues of {self.label} do not generate {self.coeff_field}")

    @property
    def dim(self):
        return self.coeff_field.degree

    def __getitem__(self, label):
        try:
            return self.eigenvalues[label]
        except KeyError:
            raise MissingPrime(label) from None

    @property
    def labels(self):
        return sorted(self.eigenvalues, key=label_key)

    def same_system(self, other):
        return self.coeff_field == other.coeff_field and dict(self.eigenvalues) == dict(other.eigenvalues)

    def relabel(self, label):
        return replace(self, label=label)

    def to_dict(self):
        return {
            "label": self.label,
            "dim": self.dim,
            "coeff_field": self.coeff_field.poly.to_list(),
            "atkin_lehner": self.atkin_lehner,
            "eigenvalues": {lab: self.eigenvalues[lab].to_list() for lab in self.labels},
        }


@dataclass
class GaloisSetup:
    """
    Base field F, a group G of automorphisms of F, and the permutation each
    element of G induces on the supported primes (a left action).
    """

    base_field: NumberField
    group: AutGroup
    primes: Dict[int, object]
    action: List[Dict[str, str]]
    generators: List[int] = field(default_factory=list)

    @classmethod
    def build(cls, base_field, generators, supported_primes, seed=0):
        group = generate_group(generators, base_field)
        primes = factor_primes(base_field, supported_primes, seed)
        action = []
        for a in group:
            perm = {}
            for ctx in primes.values():
                perm.update(prime_permutation(a, ctx))
            action.append(perm)
        setup = cls(base_field, group, primes, action, [group.index(g) for g in generators])
        setup.check_action()
        logger.info(
            f"Galois setup: |G|={group.order}, {len(setup.labels)} primes above {sorted(primes)}"
        )
        return setup

    @property
    def labels(self):
        return sorted(self.action[0], key=label_key)

    def check_action(self):
        for i in range(self.group.order):
            for j in range(self.group.order):
                m = self.group.mul(i, j)
                for lab in self.action[0]:
                    if self.action[m][lab] != self.action[i][self.action[j][lab]]:
                        raise HomomorphismViolation(
                            f"prime action is not compatible with composition at {lab}", (i, j, lab)
                        )

    def element_index(self, sigma):
        if isinstance(sigma, int):
            if not 0 <= sigma < self.group.order:
                raise IndexError(f"group has no element {sigma}")
            return sigma
        return self.group.index(sigma)

    def word_index(self, word):
        """
        Index of a product of generators, e.g. "s^2", "s0*s1", "1".
        "s" is the first generator; factors compose left to right as maps.
        """
        index = 0
        text = word.replace(" ", "")
        if text in ("", "1", "e", "id"):
            return 0
        gens = self.generators
        for token in text.split("*"):
            base, _, power = token.partition("^")
            if not base.startswith("s"):
                raise ValueError(f"bad group word {word!r}")
            g = gens[int(base[1:] or 0)]
            for _ in range(int(power or 1)):
                index = self.group.mul(index, g)
        return index

    def prime_orbit(self, label, indices):
        return sorted({self.action[i][label] for i in indices}, key=label_key)


def inner_conjugate(r, sigma, setup, label=None):
    """
    The eigensystem with a_P = a_{sigma(P)}(r)
    Raises:
        MissingPrime: the record lacks sigma(P) for some recorded P
    """
    i = setup.element_index(sigma)
    perm = setup.action[i]
    new = {}
    for lab in r.eigenvalues:
        if lab not in perm:
            raise MissingPrime(lab)
        target = perm[lab]
        if target not in r.eigenvalues:
            raise MissingPrime(target)
        new[lab] = r.eigenvalues[target]
    generator = next(lab for lab in new if perm[lab] == r.generator_label)
    return EigensystemRecord(
        label=label or (r.label if i == 0 else f"{r.label}^g{i}"),
        coeff_field=r.coeff_field,
        eigenvalues=new,
        atkin_lehner=r.atkin_lehner,
        generator_label=generator,
        weight=r.weight,
        character=r.character,
    )


def exterior_twist(r, tau, label=None):
    """The eigensystem with a_P = tau(a_P(r))"""
    if tau.parent != r.coeff_field:
        raise WrongField(f"twist by an automorphism of {tau.parent}, record lives in {r.coeff_field}")
    return EigensystemRecord(
        label=label or r.label,
        coeff_field=r.coeff_field,
        eigenvalues={lab: tau(v) for lab, v in r.eigenvalues.items()},
        atkin_lehner=r.atkin_lehner,
        generator_label=r.generator_label,
        weight=r.weight,
        character=r.character,
    )


def match_up_to_twist(r, s, twists):
    """
    The tau in twists with s = r^tau, or None
    Args:
        r, s: EigensystemRecords
        twists: AutGroup of the coefficient field of r
    """
    if r.coeff_field != s.coeff_field or set(r.eigenvalues) != set(s.eigenvalues):
        return None
    if twists.parent != r.coeff_field:
        raise WrongField("twist group does not act on the coefficient field")
    anchor = r.generator_label
    target = s[anchor]
    for tau in twists:
        if tau(r[anchor]) != target:
            continue
        if all(tau(r[lab]) == s[lab] for lab in r.eigenvalues):
            return tau
        # the anchor generates L, so no other tau can match
        return None
    return None


@dataclass(frozen=True, eq=False)
class OrbitClass:
    """The exterior-twist class [r] = {r^tau : tau in Aut(L)}"""

    representative: EigensystemRecord
    twists: AutGroup

    def __post_init__(self):
        if self.twists.parent != self.representative.coeff_field:
            raise WrongField(f"twist group of {self.representative.label} acts on another field")

    @property
    def label(self):
        return self.representative.label

    @property
    def dim(self):
        return self.representative.dim

    def contains(self, s):
        return match_up_to_twist(self.representative, s, self.twists) is not None

    def canonical(self):
        """Member whose generator eigenvalue has the least coordinate vector"""
        rep = self.representative
        best = min(self.twists, key=lambda tau: tau(rep[rep.generator_label]).coords)
        return exterior_twist(rep, best)


@dataclass(frozen=True)
class OrbitActionTable:
    """table[i][j] = index of the orbit g_i . [r_j]"""

    labels: Tuple[str, ...]
    table: Tuple[Tuple[int, ...], ...]

    @property
    def group_order(self):
        return len(self.table)

    def image(self, i, j):
        return self.table[i][j]

    def stabilizer(self, j):
        return [i for i in range(self.group_order) if self.table[i][j] == j]

    def orbit(self, j):
        return sorted({row[j] for row in self.table})

    def partition(self):
        blocks = []
        seen = set()
        for j in range(len(self.labels)):
            if j not in seen:
                block = self.orbit(j)
                seen.update(block)
                blocks.append(block)
        return blocks

    def to_dict(self):
        return {
            "orbits": list(self.labels),
            "table": [[self.labels[k] for k in row] for row in self.table],
            "partition": [[self.labels[k] for k in block] for block in self.partition()],
        }


def orbit_action(setup, orbits):
    """
    Action of G on the twist classes of the given records
    Raises:
        DuplicateOrbit: two inputs lie in the same class
        OrphanOrbit: a conjugate falls outside every given class
        HomomorphismViolation: the table does not compose like G
    """
    for a in range(len(orbits)):
        for b in range(a + 1, len(orbits)):
            if orbits[b].contains(orbits[a].representative):
                raise DuplicateOrbit(f"{orbits[a].label} and {orbits[b].label} are twists of each other")

    table = []
    for i in range(setup.group.order):
        row = []
        for o in orbits:
            conj = inner_conjugate(o.representative, i, setup)
            k = next((k for k, t in enumerate(orbits) if t.contains(conj)), None)
            if k is None:
                raise OrphanOrbit(i, o.label)
            row.append(k)
        table.append(tuple(row))

    # conjugation is a right action: g_i g_j . [r] = g_j . (g_i . [r])
    for i in range(setup.group.order):
        for j in range(setup.group.order):
            m = setup.group.mul(i, j)
            for o in range(len(orbits)):
                if table[m][o] != table[j][table[i][o]]:
                    raise HomomorphismViolation(
                        f"orbit action of elements {i}, {j} does not compose on {orbits[o].label}", (i, j, o)
                    )
    result = OrbitActionTable(tuple(o.label for o in orbits), tuple(table))
    logger.info(f"orbit partition: {result.to_dict()['partition']}")
    return result


@dataclass
class PhiReport:
    label: str
    stabilizer: Tuple[int, ...]
    phi: Dict[int, NFAutomorphism]
    delta_order: int
    kernel: Tuple[int, ...]
    endomorphism_field: NumberField
    descent_field: NumberField
    coeff_degree: int
    cyclic_index: Optional[int]
    coeff_totally_real: bool

    @property
    def injective(self):
        return len(self.kernel) == 1

    @property
    def phi_trivial(self):
        return len(self.kernel) == len(self.stabilizer)

    @property
    def predicted_dimension(self):
        return self.coeff_degree

    @property
    def descent_applicable(self):
        return self.coeff_totally_real

    def to_dict(self):
        return {
            "label": self.label,
            "stabilizer": list(self.stabilizer),
            "stabilizer_order": len(self.stabilizer),
            "phi": {str(i): tau.to_dict() for i, tau in sorted(self.phi.items())},
            "delta_order": self.delta_order,
            "kernel": list(self.kernel),
            "injective": self.injective,
            "phi_trivial": self.phi_trivial,
            "endomorphism_field": self.endomorphism_field.to_dict(),
            "endomorphism_degree": self.endomorphism_field.degree,
            "descent_field": self.descent_field.to_dict(),
            "descent_degree": self.descent_field.degree,
            "predicted_dimension": self.predicted_dimension,
            "descent_applicable": self.descent_applicable,
            "cyclic_index": self.cyclic_index,
        }


def phi_analysis(setup, orbits, label, table=None):
    """
    The homomorphism phi: Stab([r]) -> Aut(L) with g.r = r^phi(g), and the
    fields it determines
    Returns:
        PhiReport
    Raises:
        HomomorphismViolation: phi does not respect composition
    """
    if table is None:
        table = orbit_action(setup, orbits)
    j = table.labels.index(label)
    o = orbits[j]
    rep = o.representative
    stab = table.stabilizer(j)

    phi = {}
    for i in stab:
        conj = inner_conjugate(rep, i, setup)
        tau = match_up_to_twist(rep, conj, o.twists)
        if tau is None:
            raise HomomorphismViolation(f"element {i} stabilizes [{label}] but no twist realises it", i)
        phi[i] = tau

    for i in stab:
        for k in stab:
            m = setup.group.mul(i, k)
            if phi[m] != phi[i] * phi[k]:
                raise HomomorphismViolation(
                    f"phi({i}*{k}) != phi({i}) phi({k}) for {label}", (i, k)
                )

    images = list({tau.image.coords: tau for tau in phi.values()}.values())
    delta = generate_group(images, rep.coeff_field)
    kernel = tuple(i for i in stab if phi[i].is_identity)
    if len(stab) % delta.order or rep.dim % delta.order:
        raise HomomorphismViolation(f"|Delta|={delta.order} does not divide |Stab| and [L:Q] for {label}")

    endomorphism_field, _ = fixed_field(rep.coeff_field, delta)
    descent_field, _ = fixed_field(setup.base_field, setup.group.subgroup(stab))
    cyclic_index = setup.group.order // len(stab) if setup.group.is_cyclic else None

    report = PhiReport(
        label=label,
        stabilizer=tuple(stab),
        phi=phi,
        delta_order=delta.order,
        kernel=kernel,
        endomorphism_field=endomorphism_field,
        descent_field=descent_field,
        coeff_degree=rep.dim,
        cyclic_index=cyclic_index,
        coeff_totally_real=rep.coeff_field.is_totally_real,
    )
    logger.info(
        f"phi[{label}]: |Stab|={len(stab)}, |Delta|={delta.order}, injective={report.injective}, "
        f"[K:Q]={endomorphism_field.degree}, [E':Q]={descent_field.degree}"
    )
    return report


def fixing_subgroup(setup, r):
    """Indices of the g with g.r = r exactly"""
    return [i for i in range(setup.group.order) if inner_conjugate(r, i, setup).same_system(r)]


def is_base_change(setup, r):
    """True when every element of G fixes r"""
    return len(fixing_subgroup(setup, r)) == setup.group.order


# bookkeeping over a whole space

@dataclass(frozen=True)
class Constituent:
    label: str
    dim: int
    sign: Optional[int]


@dataclass(frozen=True)
class SpaceSummary:
    group_order: int
    constituents: Tuple[Constituent, ...]
    orbit_partition: Tuple[Tuple[str, ...], ...]

    def count_of_dimension(self, d):
        return sum(1 for c in self.constituents if c.dim == d)

    def orbit_size(self, label):
        for block in self.orbit_partition:
            if label in block:
                return len(block)
        raise KeyError(label)


def summarize_space(orbits, table):
    constituents = tuple(Constituent(o.label, o.dim, o.representative.atkin_lehner) for o in orbits)
    partition = tuple(tuple(table.labels[k] for k in block) for block in table.partition())
    return SpaceSummary(table.group_order, constituents, partition)


class Status:
    HOLDS = "HOLDS"
    FIRES = "FIRES"
    MUST_BE_BASE_CHANGE_FROM_INTERMEDIATE = "MUST_BE_BASE_CHANGE_FROM_INTERMEDIATE"
    VACUOUS = "VACUOUS"
    DATA_INCONSISTENT = "DATA_INCONSISTENT"


@dataclass(frozen=True)
class Finding:
    check: str
    constituent: str
    status: str
    detail: str

    @property
    def fired(self):
        return self.status in (Status.FIRES, Status.MUST_BE_BASE_CHANGE_FROM_INTERMEDIATE)

    def to_dict(self):
        return {"check": self.check, "constituent": self.constituent, "status": self.status, "detail": self.detail}


@dataclass
class CorollaryReport:
    findings: List[Finding] = field(default_factory=list)

    @property
    def consistent(self):
        return all(f.status != Status.DATA_INCONSISTENT for f in self.findings)

    def for_constituent(self, label):
        return [f for f in self.findings if f.constituent == label]

    def to_dict(self):
        return {"consistent": self.consistent, "findings": [f.to_dict() for f in self.findings]}


def corollary_suite(s):
    """
    Consequences of the orbit structure that only need dimensions and the
    orbit partition:
      unique_dimension      a constituent alone in its dimension d < |G| is a
                            base change from a field strictly between Q and F
      dimension_multiplicity  at least |G|/|Stab| constituents share its dimension
      coprime_dimension     gcd(d, |G|) = 1 forces 1 or |G| constituents of dimension d
    """
    G = s.group_order
    report = CorollaryReport()
    for c in s.constituents:
        n_d = s.count_of_dimension(c.dim)
        stab = G // s.orbit_size(c.label)

        if c.dim < G and n_d == 1:
            report.findings.append(Finding(
                "unique_dimension", c.label, Status.MUST_BE_BASE_CHANGE_FROM_INTERMEDIATE,
                f"only constituent of dimension {c.dim} < {G}: base change from an intermediate field",
            ))
        else:
            report.findings.append(Finding("unique_dimension", c.label, Status.VACUOUS, ""))

        bound = G // stab
        if n_d >= bound:
            report.findings.append(Finding(
                "dimension_multiplicity", c.label, Status.HOLDS,
                f"{n_d} constituents of dimension {c.dim} >= |G|/|Stab| = {bound}",
            ))
        else:
            report.findings.append(Finding(
                "dimension_multiplicity", c.label, Status.DATA_INCONSISTENT,
                f"{n_d} constituents of dimension {c.dim} < |G|/|Stab| = {bound}",
            ))

        if gcd(c.dim, G) == 1:
            if n_d == 1:
                status, detail = Status.FIRES, "base change from the fixed field of G"
            elif n_d == G:
                status, detail = Status.FIRES, "not a base change from any proper subfield"
            else:
                status, detail = Status.DATA_INCONSISTENT, f"{n_d} constituents of dimension {c.dim}, expected 1 or {G}"
            report.findings.append(Finding("coprime_dimension", c.label, status, detail))
        else:
            report.findings.append(Finding("coprime_dimension", c.label, Status.VACUOUS, ""))

    for f in report.findings:
        if f.status == Status.DATA_INCONSISTENT:
            logger.warning(f"{f.check} inconsistent for {f.constituent}: {f.detail}")
    return report


def genus_bookkeeping(s):
    """
    Returns:
        (sum of dimensions, sum of dimensions with Atkin-Lehner sign -1)
    Raises:
        MissingSign
    """
    for c in s.constituents:
        if c.sign is None:
            raise MissingSign(c.label)
    total = sum(c.dim for c in s.constituents)
    quotient = sum(c.dim for c in s.constituents if c.sign == -1)
    return total, quotient


def quotient_constituents(s):
    """Labels surviving in the quotient by the Atkin-Lehner involution"""
    genus_bookkeeping(s)
    return [c.label for c in s.constituents if c.sign == -1]


# reductions modulo primes of the coefficient field

def eigensystem_mod_prime(r, P):
    """a_P(r) reduced modulo a prime P of the coefficient field"""
    return {lab: residue_reduce(r[lab], P) for lab in r.labels}


def compare_mod_prime(a, b, up_to_frobenius=False):
    """
    Compare two reduced eigensystems, possibly over different presentations
    of the same finite field
    """
    if set(a) != set(b):
        return False
    if not a:
        return True
    ka = next(iter(a.values())).field
    kb = next(iter(b.values())).field
    if ka.order != kb.order:
        return False
    embed = ka.isomorphism_to(kb)
    mapped = {lab: embed(v) for lab, v in a.items()}
    shifts = range(kb.k) if up_to_frobenius else range(1)
    return any(all(mapped[lab].frobenius(i) == b[lab] for lab in a) for i in shifts)


def check_identity(setup, source, target, word, tau=None):
    """Whether g.source = target^tau for the group word g"""
    conj = inner_conjugate(source, setup.word_index(word), setup)
    expected = target if tau is None else exterior_twist(target, tau)
    return conj.same_system(expected)
