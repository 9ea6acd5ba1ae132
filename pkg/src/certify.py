"""
Permutation-group models (affine groups over Z/p and their subgroups),
cycle-type tables, and Galois-group certification by Frobenius sampling.

Certification is statistical: factorization patterns of f modulo primes
are compared with the cycle-type table of a candidate group. Only an
observed pattern outside the table is a definite contradiction.
"""

import math
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Tuple

import numpy as np
from loguru import logger
from sympy import primerange, primitive_root
from sympy.polys.domains import ZZ
from sympy.polys import galoistools as gt

from .errors import OrderCapExceeded
from .exact_algebra import UniPoly, discriminant, factor_mod_p
from .finite_fields import FinField, gf_cycle_type, to_gf
from .utils import format_rational

ELEMENT_CAP = 317 * 316


@dataclass(frozen=True, order=True)
class CycleType:
    """Partition of n as cycle lengths, largest first"""

    parts: Tuple[int, ...]

    @classmethod
    def of(cls, lengths):
        return cls(tuple(sorted(lengths, reverse=True)))

    @property
    def degree(self):
        return sum(self.parts)

    @property
    def is_even(self):
        return sum(k - 1 for k in self.parts) % 2 == 0

    @property
    def order(self):
        return math.lcm(*self.parts)

    def __str__(self):
        counts = Counter(self.parts)
        return "(" + ",".join(
            str(k) if counts[k] == 1 else f"{k}^{counts[k]}" for k in sorted(counts, reverse=True)
        ) + ")"


class GroupModel:
    """
    Finite permutation group on {0, ..., n-1}, fully enumerated.
    Composition is (a * b)[x] = a[b[x]].
    """

    def __init__(self, name, degree, generators, cap=ELEMENT_CAP):
        self.name = name
        self.degree = degree
        self.generators = [np.asarray(g, dtype=np.int64) for g in generators]
        for g in self.generators:
            if g.shape != (degree,) or not np.array_equal(np.sort(g), np.arange(degree)):
                raise ValueError(f"{name}: generator is not a permutation of {degree} points")
        self.elements = self._closure(cap)
        logger.debug(f"group {name}: order {self.order} on {degree} points")

    def _closure(self, cap):
        identity = np.arange(self.degree, dtype=np.int64)
        seen = {identity.tobytes()}
        rows = [identity]
        frontier = identity[None, :]
        while len(frontier):
            fresh = []
            for g in self.generators:
                for row in g[frontier]:
                    key = row.tobytes()
                    if key not in seen:
                        seen.add(key)
                        fresh.append(row)
                        if len(seen) > cap:
                            raise OrderCapExceeded(cap)
            rows.extend(fresh)
            frontier = np.array(fresh, dtype=np.int64).reshape(-1, self.degree)
        return np.array(rows, dtype=np.int64)

    @property
    def order(self):
        return len(self.elements)

    def element_set(self):
        return {row.tobytes() for row in self.elements}

    def power(self, i, k):
        g = self.elements[i]
        out = np.arange(self.degree, dtype=np.int64)
        for _ in range(k):
            out = g[out]
        return out

    def element_order(self, i):
        return cycle_type_of(self.elements[i]).order

    def __repr__(self):
        return f"GroupModel({self.name}, order={self.order})"


def cycle_type_of(perm):
    perm = np.asarray(perm)
    seen = np.zeros(len(perm), dtype=bool)
    lengths = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        k, x = 0, start
        while not seen[x]:
            seen[x] = True
            x = perm[x]
            k += 1
        lengths.append(k)
    return CycleType.of(lengths)


def cycle_types(G):
    """
    Exact cycle-type table of G
    Returns:
        dict CycleType -> number of elements
    """
    E = G.elements
    n = G.degree
    points = np.arange(n, dtype=np.int64)
    current = np.broadcast_to(points, E.shape).copy()
    length = np.zeros(E.shape, dtype=np.int64)
    for k in range(1, n + 1):
        current = np.take_along_axis(E, current, axis=1)
        hit = (current == points) & (length == 0)
        length[hit] = k
        if not (length == 0).any():
            break
    rows, counts = np.unique(np.sort(length, axis=1), axis=0, return_counts=True)
    table = {}
    for row, count in zip(rows, counts):
        parts = []
        for L, c in zip(*np.unique(row, return_counts=True)):
            parts.extend([int(L)] * (int(c) // int(L)))
        table[CycleType.of(parts)] = int(count)
    return dict(sorted(table.items(), reverse=True))


# affine groups over Z/p

def affine_permutation(p, a, b):
    """x -> a x + b on Z/p"""
    return (a * np.arange(p, dtype=np.int64) + b) % p


def _check_size(p, order):
    if order > ELEMENT_CAP:
        raise OrderCapExceeded(ELEMENT_CAP)
    if p < 2:
        raise ValueError(f"need p >= 2, got {p}")


def build_frobenius_group(p):
    """Z/p x| (Z/p)^*: generated by x -> x + 1 and x -> g x, g the least primitive root"""
    _check_size(p, p * (p - 1))
    g = primitive_root(p)
    return GroupModel(f"F{p}", p, [affine_permutation(p, 1, 1), affine_permutation(p, g, 0)])


def dihedral_group(p):
    """x -> x + 1 and x -> -x"""
    _check_size(p, 2 * p)
    return GroupModel(f"D{p}", p, [affine_permutation(p, 1, 1), affine_permutation(p, -1, 0)])


def cyclic_group(n):
    _check_size(n, n)
    return GroupModel(f"C{n}", n, [affine_permutation(n, 1, 1)])


def closure_with_multiplier(p, u):
    """The group generated by the dihedral group on Z/p and x -> u x"""
    _check_size(p, p * (p - 1))
    gens = [affine_permutation(p, 1, 1), affine_permutation(p, -1, 0), affine_permutation(p, u, 0)]
    return GroupModel(f"<D{p}, x->{u}x>", p, gens)


def subgroup_closure_check(p=17):
    """The dihedral group on Z/p and x -> g x, g the least primitive root, generate all of F_p"""
    full = build_frobenius_group(p)
    closure = closure_with_multiplier(p, primitive_root(p))
    ok = closure.order == p * (p - 1) and closure.element_set() == full.element_set()
    logger.debug(f"dihedral closure for p={p}: order {closure.order}, equal to F{p}: {ok}")
    return ok


def parse_group_spec(spec):
    """'frobenius:p', 'dihedral:p' or 'cyclic:n'"""
    kind, _, arg = spec.partition(":")
    try:
        n = int(arg)
    except ValueError:
        raise ValueError(f"bad group spec {spec!r}") from None
    builders = {"frobenius": build_frobenius_group, "dihedral": dihedral_group, "cyclic": cyclic_group}
    if kind not in builders:
        raise ValueError(f"unknown group family {kind!r} in {spec!r}")
    return builders[kind](n)


# Frobenius sampling

def _sample_chunk(coeffs, primes, disc):
    out = []
    for p in primes:
        if coeffs[-1] % p == 0 or disc % p == 0:
            continue
        g = to_gf(coeffs, p)
        if not gt.gf_sqf_p(g, p, ZZ):
            continue
        out.append((p, tuple(gf_cycle_type(g, p))))
    return out


@dataclass
class FrobeniusSample:
    counts: Dict[CycleType, int]
    primes_used: int
    skipped: List[int]
    cross_checked: List[int] = field(default_factory=list)
    mismatches: List[int] = field(default_factory=list)

    @property
    def total(self):
        return sum(self.counts.values())


def _chunks(items, k):
    size = -(-len(items) // k)
    return [items[i:i + size] for i in range(0, len(items), size)]


def frobenius_sample(f, max_prime, seed=0, workers=1, cross_check=0):
    """
    Cycle types of Frobenius at every prime p <= max_prime not dividing
    disc(f) or the leading coefficient
    Args:
        f: integral UniPoly of degree >= 1
        workers: process count; the merged table does not depend on it
        cross_check: number of seeded primes re-derived by full factorization
    Returns:
        FrobeniusSample
    """
    if not isinstance(f, UniPoly):
        f = UniPoly(f)
    coeffs = f.int_coeffs()
    disc = discriminant(f)
    if disc == 0:
        raise ValueError(f"{f} is not squarefree")
    disc_num = disc.numerator
    primes = list(primerange(2, max_prime + 1))

    if workers > 1 and len(primes) > workers:
        parts = _chunks(primes, workers)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sample_chunk, [coeffs] * len(parts), parts, [disc_num] * len(parts)))
    else:
        results = [_sample_chunk(coeffs, primes, disc_num)]
    observed = sorted(pair for chunk in results for pair in chunk)

    counts = Counter(CycleType(t) for _, t in observed)
    used = {p for p, _ in observed}
    sample = FrobeniusSample(
        counts=dict(sorted(counts.items(), reverse=True)),
        primes_used=len(observed),
        skipped=[p for p in primes if p not in used],
    )

    if cross_check and observed:
        rng = random.Random(seed)
        picks = sorted(rng.sample(observed, min(cross_check, len(observed))))
        for p, t in picks:
            degrees = []
            for g, e in factor_mod_p(f, FinField(p), seed):
                degrees.extend([g.degree] * e)
            sample.cross_checked.append(p)
            if tuple(sorted(degrees, reverse=True)) != t:
                logger.error(f"cycle type mismatch at p={p}: {t} vs {degrees}")
                sample.mismatches.append(p)

    logger.info(
        f"Frobenius sample of {f}: {sample.primes_used} primes <= {max_prime}, "
        f"{len(sample.counts)} cycle types, {len(sample.skipped)} skipped"
    )
    return sample


# certification

class CertVerdict:
    CONSISTENT = "CONSISTENT"
    CONTRADICTED = "CONTRADICTED"


def two_adic_valuation(n):
    n = abs(n)
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    return v


def discriminant_analysis(f):
    """disc(f), its 2-adic valuation, the odd cofactor, and whether that cofactor is a square"""
    d = discriminant(f)
    if d.denominator != 1:
        raise ValueError("discriminant analysis needs an integral polynomial")
    d = d.numerator
    v = two_adic_valuation(d)
    odd = d // 2 ** v
    square = odd > 0 and math.isqrt(odd) ** 2 == odd
    return {"discriminant": str(d), "sign": 1 if d > 0 else -1, "v2": v, "odd_part": str(odd), "odd_part_is_square": square}


@dataclass
class CertReport:
    polynomial: List
    group: str
    group_order: int
    max_prime: int
    primes_sampled: int
    observed: Dict[CycleType, int]
    candidate: Dict[CycleType, int]
    tolerance: float
    notes: List[str]
    disc: Dict
    cross_checked: int = 0
    mismatches: List[int] = field(default_factory=list)

    @property
    def outside(self):
        return [t for t in self.observed if t not in self.candidate]

    @property
    def verdict(self):
        return CertVerdict.CONTRADICTED if self.outside else CertVerdict.CONSISTENT

    @cached_property
    def densities(self):
        """rows (type, expected, observed, |deviation|) over the union of types"""
        total = self.primes_sampled or 1
        rows = []
        for t in sorted(set(self.candidate) | set(self.observed), reverse=True):
            expected = Fraction(self.candidate.get(t, 0), self.group_order)
            observed = self.observed.get(t, 0) / total
            rows.append((t, expected, observed, abs(observed - float(expected))))
        return rows

    @property
    def max_deviation(self):
        return max((row[3] for row in self.densities), default=0.0)

    @property
    def within_tolerance(self):
        return self.max_deviation <= self.tolerance

    @property
    def all_types_observed(self):
        return all(t in self.observed for t in self.candidate)

    @property
    def nontrivial_types_observed(self):
        n = max((t.degree for t in self.candidate), default=0)
        return all(t in self.observed for t in self.candidate if t.parts != (1,) * n)

    def to_dict(self):
        return {
            "polynomial": self.polynomial,
            "group": self.group,
            "group_order": self.group_order,
            "max_prime": self.max_prime,
            "primes_sampled": self.primes_sampled,
            "observed": {str(t): c for t, c in self.observed.items()},
            "densities": [
                {"type": str(t), "expected": format_rational(e), "observed": round(o, 6), "deviation": round(d, 6)}
                for t, e, o, d in self.densities
            ],
            "max_deviation": round(self.max_deviation, 6),
            "tolerance": self.tolerance,
            "within_tolerance": self.within_tolerance,
            "all_types_observed": self.all_types_observed,
            "nontrivial_types_observed": self.nontrivial_types_observed,
            "outside_candidate": [str(t) for t in self.outside],
            "verdict": self.verdict,
            "statistical": True,
            "notes": self.notes,
            "discriminant": self.disc,
            "cross_checked": self.cross_checked,
            "cross_check_mismatches": self.mismatches,
        }

    def to_text(self):
        lines = [
            f"polynomial: {self.polynomial}",
            f"candidate:  {self.group} (order {self.group_order})",
            f"primes:     {self.primes_sampled} sampled up to {self.max_prime}",
            "",
            f"{'type':<16}{'expected':>12}{'observed':>12}{'deviation':>12}",
        ]
        for t, e, o, d in self.densities:
            lines.append(f"{str(t):<16}{float(e):>12.5f}{o:>12.5f}{d:>12.5f}")
        lines += [
            "",
            f"max deviation {self.max_deviation:.5f} (tolerance {self.tolerance})",
            f"discriminant: v2={self.disc['v2']}, odd part square: {self.disc['odd_part_is_square']}",
        ]
        lines += [f"note: {n}" for n in self.notes]
        lines.append(f"verdict: {self.verdict} (statistical, not a proof)")
        return "\n".join(lines) + "\n"


def _notes(observed, candidate, n):
    notes = []
    odd = [t for t in observed if not t.is_even]
    if odd:
        notes.append(f"odd permutation {odd[0]} observed: the Galois group is not contained in A_{n}")
    if CycleType((n,)) in observed:
        notes.append(f"{n}-cycle observed: the Galois group is transitive")
    if n > 2 and CycleType((n,)) in observed and CycleType((n - 1, 1)) in observed:
        notes.append(f"{n}-cycle and type ({n - 1},1) observed: the Galois group is 2-transitive")
    if observed:
        m = math.lcm(*(t.order for t in observed))
        notes.append(f"the Galois group order is divisible by {m}, the lcm of observed element orders")
    missing = [str(t) for t in candidate if t not in observed]
    if missing:
        notes.append(f"candidate types never observed: {', '.join(missing)}")
    return notes


def certify_group(f, candidate, max_prime, seed=0, tolerance=0.02, workers=1, cross_check=0):
    """
    Compare the Frobenius cycle types of f with the table of a candidate group
    Returns:
        CertReport; CONTRADICTED iff some observed type is outside the table
    """
    if not isinstance(f, UniPoly):
        f = UniPoly(f)
    if f.degree != candidate.degree:
        raise ValueError(f"degree {f.degree} does not match the {candidate.degree} points of {candidate.name}")
    table = cycle_types(candidate)
    sample = frobenius_sample(f, max_prime, seed, workers, cross_check)
    report = CertReport(
        polynomial=f.to_list(),
        group=candidate.name,
        group_order=candidate.order,
        max_prime=max_prime,
        primes_sampled=sample.primes_used,
        observed=sample.counts,
        candidate=table,
        tolerance=tolerance,
        notes=_notes(sample.counts, table, f.degree),
        disc=discriminant_analysis(f),
        cross_checked=len(sample.cross_checked),
        mismatches=sample.mismatches,
    )
    if report.verdict == CertVerdict.CONTRADICTED:
        logger.warning(f"{candidate.name} contradicted by types {[str(t) for t in report.outside]}")
    else:
        logger.info(f"{candidate.name} consistent; max deviation {report.max_deviation:.4f}")
    return report
