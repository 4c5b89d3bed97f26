"""Crystallographic groups Z^n x| W0 with exact integer translations."""
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
import math
import random

import numpy as np

from .classify import ClassifiedType, parse_type_name
from .exceptions import CertificateError, ConsistencyError, PreconditionError
from .finite import FiniteGroup
from .intmat import identity, matvec, smith_invariants, scale, vec_add
from .lattice import IntegerLattice
from .weyl import point_group_for

DEFAULT_SEED = 0xC0C5E7E5
INFINITY = math.inf


@dataclass(frozen=True)
class CrystalElement:
    """The pair ``(a, w)``: translation ``a`` in Z^n and point-group index ``w``."""

    a: tuple
    w: int
    group: "CrystalGroup" = field(repr=False, compare=True, hash=False)

    def __mul__(self, other):
        return self.group.mul(self, other)

    def __pow__(self, k):
        return self.group.power(self, k)

    def to_json(self):
        return {"a": list(self.a), "w": self.w}


class CrystalGroup:
    """Semidirect product ``Z^n x|_alpha W0``.

    ``action`` gives the matrix alpha(w) for each point-group element and
    defaults to the point group's own matrices.  A non-faithful action may
    be passed on purpose (the certificate then reports the failure).
    """

    def __init__(self, point_group, family=None, action=None, require_faithful=True):
        self.point_group = point_group
        self.rank = point_group.rank
        self.family = family or point_group.family
        self.action = tuple(action) if action is not None else point_group.elements
        if len(self.action) != point_group.order:
            raise PreconditionError("action must give one matrix per point-group element")
        if require_faithful and not self.is_faithful():
            raise PreconditionError("point-group action is not faithful")

    def __repr__(self):
        return f"<CrystalGroup {self.family} Z^{self.rank} x| W0(order {self.point_group.order})>"

    def is_faithful(self):
        I = identity(self.rank)
        return [w for w, M in enumerate(self.action) if M == I] == [0]

    @property
    def exponent(self):
        """Exponent of the point group: bounds every torsion order."""
        return self.point_group.exponent

    def element(self, a, w=0):
        a = tuple(int(x) for x in a)
        if len(a) != self.rank:
            raise PreconditionError("translation has wrong length")
        return CrystalElement(a, int(w), self)

    def translation(self, a):
        return self.element(a, 0)

    @property
    def identity(self):
        return self.element((0,) * self.rank, 0)

    def alpha(self, w, v):
        return matvec(self.action[w], v)

    def _check(self, *xs):
        for x in xs:
            if x.group is not self:
                raise PreconditionError("elements belong to different groups")

    def mul(self, x, y):
        """``(a, w)(b, v) = (a + alpha(w) b, wv)``."""
        self._check(x, y)
        return CrystalElement(vec_add(x.a, self.alpha(x.w, y.a)),
                              self.point_group.mul(x.w, y.w), self)

    def inv(self, x):
        """``(a, w)^-1 = (alpha(w^-1)(-a), w^-1)``."""
        self._check(x)
        wi = self.point_group.inv(x.w)
        return CrystalElement(self.alpha(wi, tuple(-c for c in x.a)), wi, self)

    def power(self, x, k):
        if k < 0:
            x, k = self.inv(x), -k
        result = self.identity
        while k:
            if k & 1:
                result = self.mul(result, x)
            x = self.mul(x, x)
            k >>= 1
        return result

    def commutator(self, x, y):
        """``[x, y] = x^-1 y^-1 x y``."""
        return self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))

    def cyclic_sum(self, x):
        """``a + alpha(w) a + ... + alpha(w^(k-1)) a`` with ``k`` the order of ``w``."""
        pg = self.point_group
        total = (0,) * self.rank
        wi = 0
        for _ in range(pg.orders[x.w]):
            total = vec_add(total, self.alpha(wi, x.a))
            wi = pg.mul(wi, x.w)
        return total

    def element_order(self, x, cross_check=True):
        """Order of ``x``: the order of its point part when the cyclic sum vanishes, else infinity.

        With ``cross_check`` the answer is compared with iterated
        multiplication up to the point-group exponent.
        """
        k = self.point_group.orders[x.w]
        by_sum = k if not any(self.cyclic_sum(x)) else INFINITY
        if cross_check:
            by_iter, y = INFINITY, x
            for j in range(1, self.exponent + 1):
                if y == self.identity:
                    by_iter = j
                    break
                y = self.mul(y, x)
            if by_iter != by_sum:
                raise ConsistencyError(f"torsion law disagrees for {x}: {by_sum} vs {by_iter}")
        return by_sum

    def is_translation(self, x):
        """Decide membership in the translation subgroup in two ways.

        ``by_component`` reads off the point part.  ``by_formula`` decides
        ``forall y [x, y^m] = 1`` (m = |W0|) by the reduction to basis
        translations: x satisfies it iff it commutes with every ``(m e_i, 1)``.
        """
        self._check(x)
        m = self.point_group.order
        by_component = x.w == 0
        by_formula = all(
            self.commutator(x, self.power(self.translation(e), m)) == self.identity
            for e in identity(self.rank))
        if by_component != by_formula:
            raise ConsistencyError(f"translation tests disagree on {x}")
        return TranslationTest(by_component, by_formula)

    def divisibility_profile(self, x, primes):
        """For each p, whether ``x = y^p`` has a translation solution ``y``."""
        if x.w != 0:
            raise PreconditionError("divisibility profile is defined for translations only")
        return [all(c % p == 0 for c in x.a) for p in primes]

    def box(self, radius):
        """All elements with ``max |a_i| <= radius``, point part varying fastest."""
        rng = range(-radius, radius + 1)
        return [self.element(a, w) for a in product(rng, repeat=self.rank)
                for w in range(self.point_group.order)]

    def random_element(self, rng, radius):
        return self.element([rng.randint(-radius, radius) for _ in range(self.rank)],
                            rng.randrange(self.point_group.order))

    def encode(self, x):
        return {"a": list(x.a), "w": x.w}

    def decode(self, data):
        return self.element(data["a"], data["w"])


@dataclass(frozen=True)
class TranslationTest:
    by_component: bool
    by_formula: bool


def build_affine_group(family):
    """``Z^n x| W0`` for an irreducible affine type; the psi certificate is run first."""
    ctype = parse_type_name(family) if isinstance(family, str) else family
    if not isinstance(ctype, ClassifiedType) or not ctype.affine or ctype.family is None:
        raise PreconditionError("build_affine_group needs an irreducible affine type")
    g = CrystalGroup(point_group_for(ctype), family=ctype.name)
    psi_certificate(g).raise_for_failure()
    return g


@dataclass
class CertificateReport:
    items: dict
    torsion_free_quotient_order: int
    failures: dict

    @property
    def ok(self):
        return not self.failures

    def raise_for_failure(self):
        for item, msg in self.failures.items():
            raise CertificateError(item, msg)

    def to_json(self):
        return {"items": {str(k): v for k, v in self.items.items()},
                "T/2T": self.torsion_free_quotient_order,
                "failures": {str(k): v for k, v in self.failures.items()}}


def psi_certificate(g, sample_radius=1):
    """Check the six properties pinning ``g`` down as ``Z^n x| W0`` with faithful action.

    1. ``{(0, w)}`` is a subgroup whose multiplication matches W0.
    2. The centraliser of the basis translations is abelian.
    3. Every element factors uniquely as translation times ``(0, w)``, and
       translations are normal.
    4. Nonzero translations have no torsion of order up to the exponent.
    5. ``|T/2T| = 2^n``, computed from a Smith normal form.
    6. Each ``(0, w)`` with ``w != 1`` moves some element of the centraliser.

    Items 2 and 6 use the reduction: ``(a, w)`` commutes with all basis
    translations iff ``alpha(w)`` is the identity, so the centraliser is
    exactly the translation subgroup when the action is faithful.
    """
    pg, n = g.point_group, g.rank
    items, failures = {}, {}
    basis = [g.translation(e) for e in identity(n)]
    section = [g.element((0,) * n, w) for w in range(pg.order)]

    def record(item, ok, msg):
        items[item] = ok
        if not ok:
            failures[item] = msg

    ok = all(g.mul(section[u], section[v]) == section[pg.mul(u, v)]
             for u in range(pg.order) for v in range(pg.order))
    ok = ok and all(g.inv(section[u]) == section[pg.inv(u)] for u in range(pg.order))
    record(1, ok, "point-part section is not a subgroup isomorphic to W0")

    sample = g.box(sample_radius)
    centralizing = [w for w in range(pg.order)
                    if all(g.mul(section[w], b) == g.mul(b, section[w]) for b in basis)]
    central_sample = [x for x in sample if x.w in centralizing]
    ok = all(g.mul(x, y) == g.mul(y, x) for x in central_sample for y in central_sample)
    record(2, ok, "centraliser of the basis translations is not abelian")

    ok = all(g.mul(g.translation(x.a), section[x.w]) == x for x in sample)
    ok = ok and len({(x.a, x.w) for x in sample}) == len(sample)
    ok = ok and all(g.mul(g.mul(section[w], b), g.inv(section[w])).w == 0
                    for w in range(pg.order) for b in basis)
    record(3, ok, "normal form (a, w) is not unique or translations are not normal")

    m = g.exponent
    ok = True
    for x in sample:
        if x.w != 0 or not any(x.a):
            continue
        y = x
        for _ in range(m):
            if y == g.identity:
                ok = False
            y = g.mul(y, x)
    record(4, ok, "a nonzero translation has finite order")

    # relation matrix of 2T inside T: coordinates of the squared basis translations
    relations = [g.power(b, 2).a for b in basis]
    snf = smith_invariants(relations)
    quotient_order = math.prod(snf)
    record(5, quotient_order == 2 ** n, f"|T/2T| = {quotient_order}, expected {2 ** n}")

    ok = centralizing == [0] and all(
        any(g.mul(g.mul(section[w], b), g.inv(section[w])) != b for b in basis)
        for w in range(1, pg.order))
    record(6, ok, "some non-identity point element centralises the translations")
    return CertificateReport(items, quotient_order, failures)


@dataclass
class ScaleReport:
    m: int
    pairs_checked: int
    violations: list
    image_lattice: IntegerLattice

    @property
    def ok(self):
        return not self.violations and self.image_lattice == IntegerLattice(
            scale(self.m, identity(self.image_lattice.rank)))


def scale_map(g, m):
    return lambda x: g.element(tuple(m * c for c in x.a), x.w)


def scale_isomorphism(g, m, radius=2, random_pairs=1000, seed=DEFAULT_SEED):
    """Verify ``(a, w) -> (m a, w)`` is multiplicative.

    Checked on all pairs in the box ``max |a_i| <= radius`` and on
    ``random_pairs`` seeded pseudorandom pairs; the image of the translation
    basis must span ``m Z^n``.
    """
    if m < 1:
        raise PreconditionError("m must be >= 1")
    phi = scale_map(g, m)
    box = g.box(radius)
    pairs = [(x, y) for x in box for y in box]
    rng = random.Random(seed)
    pairs += [(g.random_element(rng, 50), g.random_element(rng, 50)) for _ in range(random_pairs)]
    violations = [(x, y) for x, y in pairs if phi(g.mul(x, y)) != g.mul(phi(x), phi(y))]
    image = IntegerLattice.spanned_by([phi(g.translation(e)).a for e in identity(g.rank)], g.rank)
    return ScaleReport(m, len(pairs), violations, image)


class FiniteQuotient(FiniteGroup):
    """``G / mT``: elements ``(a mod m, w)`` indexed as ``w * m^n + sum a_i m^i``."""

    def __init__(self, group, m):
        if m < 1:
            raise PreconditionError("m must be >= 1")
        self.group = group
        self.m = int(m)
        self.n = group.rank
        self.point_order = group.point_group.order
        self.block = self.m ** self.n
        self.order = self.block * self.point_order
        self.identity = 0
        self._radix = np.array([self.m ** i for i in range(self.n)], dtype=np.int64)
        self._mats = np.array(group.action, dtype=np.int64).reshape(self.point_order, self.n, self.n)
        self._wtab = np.array(group.point_group.table, dtype=np.int64)

    def __repr__(self):
        return f"<FiniteQuotient {self.provenance} order={self.order}>"

    @property
    def provenance(self):
        return (self.group.family, self.m)

    def _split(self, X):
        X = np.asarray(X, dtype=np.int64)
        w = X // self.block
        r = X % self.block
        a = (r[..., None] // self._radix) % self.m
        return a, w

    def _join(self, a, w):
        return w * self.block + (a % self.m) @ self._radix

    def mul_many(self, X, Y):
        a1, w1 = self._split(X)
        a2, w2 = self._split(Y)
        moved = np.einsum("...ij,...j->...i", self._mats[w1], a2)
        return self._join(a1 + moved, self._wtab[w1, w2])

    def mul(self, i, j):
        return int(self.mul_many(np.array([i]), np.array([j]))[0])

    def normal_form(self, i):
        a, w = self._split(np.array([i]))
        return tuple(int(x) for x in a[0]), int(w[0])

    def index_of(self, a, w):
        return int(self._join(np.array([list(a)], dtype=np.int64), np.array([w]))[0])

    def project(self, x):
        """Image of a crystal element under the canonical projection."""
        return self.index_of(x.a, x.w)

    def is_translation_image(self, i):
        return i < self.block

    @cached_property
    def _generators(self):
        gens = [self.index_of((0,) * self.n, w) for w in self.group.point_group.generator_indices]
        gens += [self.index_of(e, 0) for e in identity(self.n)]
        return tuple(g for g in gens if g != self.identity) or (self.identity,)

    def label(self, i):
        a, w = self.normal_form(i)
        return f"({','.join(map(str, a))};w{w})"


def make_quotient(g, m):
    return FiniteQuotient(g, m)
