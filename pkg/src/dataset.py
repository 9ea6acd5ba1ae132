"""
Eigensystem datasets: the JSON schema, loading and saving, identity
cross-checks, and the deterministic generator of the bundled example.

The bundled example lives over F = Q(zeta_32)^+ with G = Gal(F/Q) cyclic of
order 8. Its eigenvalues are synthetic: free values are chosen on orbit
representatives of primes and propagated along the identities
^{sigma^s} r = r^tau, so the orbit analysis has to recover exactly those
stabilizers and twists.
"""

import json
import random
from dataclasses import dataclass, field
from math import gcd
from typing import List, Optional, Tuple

from loguru import logger

from .cyclotomic import PeriodSubfield, cyclic_subgroup, cyclotomic_field, restrict_to_subfield
from .errors import HeckeOrbitError, NotARoot, SchemaError
from .number_fields import AutGroup, NFAutomorphism, NumberField, find_automorphisms
from .orbits import EigensystemRecord, GaloisSetup, OrbitClass, check_identity, inner_conjugate
from .utils import parse_rational, write_json

F_POLY = (2, 0, -16, 0, 20, 0, -8, 0, 1)
SIGMA_IMAGE = (0, -5, 0, 5, 0, -1, 0, 0)
LF_POLY = (1, -4, -4, 1, 1)
TAU_F_IMAGE = (-2, 3, 1, -1)
LG_POLY = (1, 19, -59, 19, 1)
TAU_G_STATED = ("-35/11", 14, "-58/11", "-3/11")

# degree-24 stand-in for L_h: subfield of Q(zeta_97) fixed by the order-4 subgroup
LH_CONDUCTOR = 97
LH_SUBGROUP_ORDER = 4
TAU_H_EXPONENT = 28

SUPPORTED_PRIMES = (2, 3, 7, 17, 31, 97)
OFFSET_RANGE = range(-20, 21)


@dataclass(frozen=True)
class Identity:
    """g.source = target^tau for the group word g; tau None means identity"""

    word: str
    source: str
    target: str
    tau_image: Optional[Tuple] = None

    def to_dict(self):
        return {
            "sigma_word": self.word,
            "from": self.source,
            "to": self.target,
            "tau_image": None if self.tau_image is None else [_fmt(c) for c in self.tau_image],
        }


@dataclass
class Dataset:
    base_field: NumberField
    galois_generators: List[NFAutomorphism]
    supported_primes: Tuple[int, ...]
    orbits: List[OrbitClass]
    identities: List[Identity] = field(default_factory=list)
    _setups: dict = field(default_factory=dict, repr=False)

    def setup(self, seed=0):
        if seed not in self._setups:
            self._setups[seed] = GaloisSetup.build(
                self.base_field, self.galois_generators, self.supported_primes, seed
            )
        return self._setups[seed]

    @property
    def labels(self):
        return [o.label for o in self.orbits]

    def record(self, label):
        for o in self.orbits:
            if o.label == label:
                return o.representative
        raise KeyError(label)

    def orbit(self, label):
        for o in self.orbits:
            if o.label == label:
                return o
        raise KeyError(label)


def _fmt(c):
    c = parse_rational(c)
    return c.numerator if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def dataset_to_dict(ds):
    return {
        "base_field": ds.base_field.poly.to_list(),
        "galois_generators": [g.image.to_list() for g in ds.galois_generators],
        "supported_primes": list(ds.supported_primes),
        "constituents": [
            {
                **o.representative.to_dict(),
                "aut_generators": [tau.image.to_list() for tau in _generators_of(o.twists)],
            }
            for o in ds.orbits
        ],
        "identities": [i.to_dict() for i in ds.identities],
    }


def _generators_of(group):
    """A small generating list: an element of maximal order, then whatever it misses"""
    if group.order == 1:
        return []
    ranked = sorted(range(1, group.order), key=lambda i: -group.element_order(i))
    gens = [ranked[0]]
    span = _span(group.parent, [group[ranked[0]]])
    for i in ranked[1:]:
        if group[i].image.coords not in span:
            gens.append(i)
            span = _span(group.parent, [group[j] for j in gens])
    return [group[i] for i in gens]


def _span(parent, generators):
    return {e.image.coords for e in AutGroup.generate(parent, generators)}


def _require(data, key, kind, where):
    if not isinstance(data, dict) or key not in data:
        raise SchemaError(f"{where}: missing key {key!r}")
    value = data[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise SchemaError(f"{where}.{key}: expected {kind}, got {type(value).__name__}")
    return value


def _rationals(values, where):
    if not isinstance(values, list):
        raise SchemaError(f"{where}: expected a list of rationals")
    for v in values:
        if not isinstance(v, (int, str)) or isinstance(v, bool):
            raise SchemaError(f"{where}: {v!r} is neither an integer nor a 'p/q' string")
    try:
        return [parse_rational(v) for v in values]
    except ValueError as e:
        raise SchemaError(f"{where}: {e}") from e


def dataset_from_dict(data):
    """
    Build a Dataset from its JSON form
    Raises:
        SchemaError: malformed JSON, or data that does not define valid
            fields, automorphisms or records
    """
    if not isinstance(data, dict):
        raise SchemaError("dataset must be a JSON object")
    fields = {}

    def number_field(coeffs, where):
        key = tuple(_rationals(coeffs, where))
        if key not in fields:
            try:
                fields[key] = NumberField(list(key))
            except (HeckeOrbitError, ValueError) as e:
                raise SchemaError(f"{where}: {e}") from e
        return fields[key]

    def automorphism(K, image, where):
        try:
            return NFAutomorphism(K, _rationals(image, where))
        except (HeckeOrbitError, ValueError) as e:
            raise SchemaError(f"{where}: {e}") from e

    F = number_field(_require(data, "base_field", list, "dataset"), "base_field")
    gens = [
        automorphism(F, image, f"galois_generators[{i}]")
        for i, image in enumerate(_require(data, "galois_generators", list, "dataset"))
    ]
    primes = _require(data, "supported_primes", list, "dataset")
    if not primes or not all(isinstance(p, int) and not isinstance(p, bool) and p > 1 for p in primes):
        raise SchemaError("supported_primes: expected a non-empty list of primes")

    orbits = []
    seen = set()
    for n, entry in enumerate(_require(data, "constituents", list, "dataset")):
        where = f"constituents[{n}]"
        label = _require(entry, "label", str, where)
        if label in seen:
            raise SchemaError(f"{where}: duplicate label {label!r}")
        seen.add(label)
        L = number_field(_require(entry, "coeff_field", list, where), f"{where}.coeff_field")
        dim = _require(entry, "dim", int, where)
        if dim != L.degree:
            raise SchemaError(f"{where}: dim {dim} but coefficient field has degree {L.degree}")
        sign = entry.get("atkin_lehner")
        if sign not in (None, 1, -1):
            raise SchemaError(f"{where}.atkin_lehner: expected 1, -1 or null")
        raw = _require(entry, "eigenvalues", dict, where)
        try:
            values = {lab: L.element(_rationals(v, f"{where}.eigenvalues.{lab}")) for lab, v in raw.items()}
            record = EigensystemRecord(label=label, coeff_field=L, eigenvalues=values, atkin_lehner=sign)
            twists = AutGroup.generate(
                L,
                [automorphism(L, image, f"{where}.aut_generators[{i}]")
                 for i, image in enumerate(entry.get("aut_generators", []))],
            )
        except SchemaError:
            raise
        except (HeckeOrbitError, ValueError) as e:
            raise SchemaError(f"{where}: {e}") from e
        orbits.append(OrbitClass(record, twists))

    identities = []
    for n, entry in enumerate(data.get("identities", [])):
        where = f"identities[{n}]"
        image = entry.get("tau_image") if isinstance(entry, dict) else None
        identities.append(Identity(
            word=_require(entry, "sigma_word", str, where),
            source=_require(entry, "from", str, where),
            target=_require(entry, "to", str, where),
            tau_image=None if image is None else tuple(_rationals(image, f"{where}.tau_image")),
        ))
        for lab in (identities[-1].source, identities[-1].target):
            if lab not in seen:
                raise SchemaError(f"{where}: unknown constituent {lab!r}")

    return Dataset(F, gens, tuple(sorted(set(primes))), orbits, identities)


def load_dataset(path):
    try:
        with open(path, "r") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: invalid JSON ({e})") from e
    ds = dataset_from_dict(data)
    logger.info(f"Loaded dataset {path}: constituents {ds.labels}")
    return ds


def save_dataset(ds, path):
    write_json(dataset_to_dict(ds), path)


def check_identities(ds, setup=None):
    """
    Evaluate every recorded identity
    Returns:
        list of (Identity, bool)
    """
    setup = setup or ds.setup()
    results = []
    for ident in ds.identities:
        source = ds.record(ident.source)
        target = ds.record(ident.target)
        tau = None
        if ident.tau_image is not None:
            try:
                tau = NFAutomorphism(target.coeff_field, ident.tau_image)
            except NotARoot:
                results.append((ident, False))
                continue
        ok = check_identity(setup, source, target, ident.word, tau)
        if not ok:
            logger.warning(f"identity {ident.word}.{ident.source} = {ident.target}^tau does not hold")
        results.append((ident, ok))
    return results


# the bundled example

def base_field():
    F = NumberField(list(F_POLY))
    return F, NFAutomorphism(F, list(SIGMA_IMAGE))


def lf_field():
    L = NumberField(list(LF_POLY))
    return L, NFAutomorphism(L, list(TAU_F_IMAGE))


def lg_field():
    """
    L_g with an order-4 automorphism: the stated one when it is a root of
    the defining polynomial, otherwise the certified one found numerically
    """
    L = NumberField(list(LG_POLY))
    try:
        return L, NFAutomorphism(L, list(TAU_G_STATED))
    except NotARoot:
        logger.warning("stated tau_g is not an automorphism of L_g; searching numerically")
    candidates = [a for a in find_automorphisms(L) if a.order == 4]
    if not candidates:
        raise NotARoot(f"no automorphism of order 4 on {L}")
    return L, min(candidates, key=lambda a: a.image.coords)


def lh_standin():
    """
    The degree-24 subfield of Q(zeta_97) and the restriction of
    zeta -> zeta^28, of order 8
    Returns:
        (PeriodSubfield, NFAutomorphism)
    """
    C = cyclotomic_field(LH_CONDUCTOR)
    S = PeriodSubfield(C, cyclic_subgroup(LH_CONDUCTOR, LH_SUBGROUP_ORDER))
    return S, restrict_to_subfield(S, TAU_H_EXPONENT)


def propagate(setup, step, tau, offsets):
    """
    Eigenvalues on every supported prime with a_{s(P)} = tau(a_P), s the
    group element with index step. Each <s>-orbit P_0 -> P_1 -> ... of
    length m gets a_{P_j} = tau^j(x) where x = sum of tau^{m i}(theta + c)
    over the powers of tau^m, so that tau^m fixes x.
    Args:
        offsets: iterator of integer offsets c, one per orbit
    """
    L = tau.parent
    perm = setup.action[step]
    powers = [NFAutomorphism.identity(L)]
    for _ in range(1, tau.order):
        powers.append(tau * powers[-1])

    values = {}
    for lab in setup.labels:
        if lab in values:
            continue
        orbit = [lab]
        while perm[orbit[-1]] != lab:
            orbit.append(perm[orbit[-1]])
        m = len(orbit)
        y = L.gen + next(offsets)
        x = L.zero
        for i in range(tau.order // gcd(m, tau.order)):
            x = x + powers[(m * i) % tau.order](y)
        for j, l in enumerate(orbit):
            values[l] = powers[j % tau.order](x)
    return values


def generate_paper_example(seed=42, supported_primes=SUPPORTED_PRIMES):
    """
    The bundled dataset: f, f' and g, g' with quartic coefficient fields
    swapped by sigma and fixed up to twist by sigma^2, and h fixed up to
    twist by sigma
    """
    rng = random.Random(seed)
    F, sigma = base_field()
    setup = GaloisSetup.build(F, [sigma], supported_primes, seed)
    n_orbits = len(setup.labels)

    def offsets():
        return iter(rng.sample(OFFSET_RANGE, min(n_orbits, len(OFFSET_RANGE))))

    Lf, tau_f = lf_field()
    Lg, tau_g = lg_field()
    S, tau_h = lh_standin()
    Lh = S.field
    s1, s2 = setup.word_index("s"), setup.word_index("s^2")

    f = EigensystemRecord("f", Lf, propagate(setup, s2, tau_f, offsets()), atkin_lehner=-1)
    g = EigensystemRecord("g", Lg, propagate(setup, s2, tau_g, offsets()), atkin_lehner=-1)
    h = EigensystemRecord("h", Lh, propagate(setup, s1, tau_h, offsets()), atkin_lehner=1)
    f_conj = inner_conjugate(f, s1, setup, label="f'")
    g_conj = inner_conjugate(g, s1, setup, label="g'")

    twists_f = AutGroup.generate(Lf, [tau_f])
    twists_g = AutGroup.generate(Lg, [tau_g])
    twists_h = AutGroup.generate(Lh, [tau_h])
    orbits = [
        OrbitClass(f, twists_f),
        OrbitClass(f_conj, twists_f),
        OrbitClass(g, twists_g),
        OrbitClass(g_conj, twists_g),
        OrbitClass(h, twists_h),
    ]
    identities = [
        Identity("s", "f", "f'"),
        Identity("s^2", "f", "f", tau_f.image.coords),
        Identity("s", "g", "g'"),
        Identity("s^2", "g", "g", tau_g.image.coords),
        Identity("s", "h", "h", tau_h.image.coords),
    ]
    ds = Dataset(F, [sigma], tuple(sorted(set(supported_primes))), orbits, identities)
    ds._setups[seed] = setup
    logger.info(f"Generated example dataset (seed {seed}) over {len(setup.labels)} primes")
    return ds
