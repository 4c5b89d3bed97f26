"""Sublattices of Z^n, invariant-sublattice enumeration and W-module lattices."""
from dataclasses import dataclass, field
from itertools import product

from .exceptions import PreconditionError
from .intmat import (columns, conjugate_into_basis, content, det, hnf_basis, identity,
                     matvec, scale, solve_upper)


@dataclass(frozen=True)
class IntegerLattice:
    """Full-rank sublattice of Z^n spanned by the columns of ``basis``.

    The basis is normalised to upper-triangular Hermite normal form on
    construction, so equal lattices compare equal.
    """

    basis: tuple

    def __post_init__(self):
        B = tuple(tuple(int(x) for x in row) for row in self.basis)
        if det(B) == 0:
            raise PreconditionError("lattice basis must have nonzero determinant")
        object.__setattr__(self, "basis", hnf_basis(columns(B), len(B)))

    @classmethod
    def full(cls, n):
        return cls(identity(n))

    @classmethod
    def spanned_by(cls, vectors, n):
        return cls(hnf_basis(vectors, n))

    @property
    def rank(self):
        return len(self.basis)

    @property
    def index(self):
        return abs(det(self.basis))

    def contains(self, v):
        return solve_upper(self.basis, v) is not None

    def scaled(self, m):
        return IntegerLattice(scale(m, self.basis))

    def is_invariant(self, matrices):
        """``M L = L`` for each matrix (``M L <= L`` suffices for unimodular M)."""
        return all(self.contains(matvec(M, b)) for M in matrices for b in columns(self.basis))

    def primitive_part(self):
        """Return ``(m, N)`` with ``self == m N`` and ``N`` not a proper multiple."""
        g = content(self.basis)
        return g, IntegerLattice(tuple(tuple(x // g for x in row) for row in self.basis))

    def to_json(self):
        return {"index": self.index, "hnf": [list(row) for row in self.basis]}

    def __str__(self):
        return f"index {self.index}: {[list(r) for r in self.basis]}"


def _ordered_factorizations(d, n):
    if n == 1:
        yield (d,)
        return
    for a in range(1, d + 1):
        if d % a == 0:
            for rest in _ordered_factorizations(d // a, n - 1):
                yield (a,) + rest


def hnf_matrices(n, d):
    """All upper-triangular HNF bases of determinant ``d`` in dimension ``n``.

    Each index-``d`` sublattice of Z^n appears exactly once.
    """
    for diag in _ordered_factorizations(d, n):
        slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
        for values in product(*(range(diag[i]) for i, _ in slots)):
            B = [[0] * n for _ in range(n)]
            for i in range(n):
                B[i][i] = diag[i]
            for (i, j), v in zip(slots, values):
                B[i][j] = v
            yield tuple(tuple(row) for row in B)


def count_sublattices(n, d):
    """Number of index-``d`` sublattices of Z^n (counted without enumeration)."""
    total = 0
    for diag in _ordered_factorizations(d, n):
        c = 1
        for i, di in enumerate(diag):
            c *= di ** (n - 1 - i)
        total += c
    return total


def _generators_of(pg):
    return pg.generators if hasattr(pg, "generators") else tuple(pg)


def invariant_sublattices(pg, index_bound):
    """Sublattices of index at most ``index_bound`` mapped onto themselves by the group.

    Sorted by index, then by HNF basis.  Checking the generators is enough
    because each generator is unimodular.
    """
    if index_bound < 1:
        raise PreconditionError("index_bound must be >= 1")
    gens = _generators_of(pg)
    n = len(gens[0])
    out = []
    for d in range(1, index_bound + 1):
        found = []
        for B in hnf_matrices(n, d):
            cols = columns(B)
            if all(solve_upper(B, matvec(M, b)) is not None for M in gens for b in cols):
                found.append(IntegerLattice(B))
        out.extend(sorted(found, key=lambda L: L.basis))
    return out


@dataclass
class PrimitiveReport:
    primitives: list
    invariant: list
    decomposition: dict = field(repr=False)
    violations: list
    note: str = ""

    @property
    def ok(self):
        return not self.violations

    def to_json(self):
        return {
            "primitives": [L.to_json() for L in self.primitives],
            "invariant_count": len(self.invariant),
            "violations": [L.to_json() for L in self.violations],
            "note": self.note,
        }


def primitive_normal_list(pg, index_bound):
    """Invariant sublattices that are not integer multiples of another invariant one.

    Every invariant sublattice within the bound is decomposed as ``m N`` with
    ``N`` primitive; a decomposition whose ``N`` is missing from the primitive
    list is reported as a violation.
    """
    invariant = invariant_sublattices(pg, index_bound)
    gens = _generators_of(pg)
    primitives = [L for L in invariant if content(L.basis) == 1]
    prim_set = set(primitives)
    decomposition, violations = {}, []
    for L in invariant:
        m, N = L.primitive_part()
        if N not in prim_set or not N.is_invariant(gens):
            violations.append(L)
        decomposition[L] = (m, N)
    family = getattr(pg, "family", None)
    note = ""
    if not (family and "~" in family):
        note = "action is not the point group of an irreducible affine family; finiteness of primitives is not expected"
    return PrimitiveReport(primitives, invariant, decomposition, violations, note)


class WModuleLattice:
    """A lattice in Z^n together with a point-group action preserving it.

    ``action`` lists one integer matrix per point-group element (same order as
    ``point_group.elements``); it defaults to the point group's own matrices
    and may be non-faithful.
    """

    def __init__(self, lattice, point_group, action=None):
        self.lattice = lattice if isinstance(lattice, IntegerLattice) else IntegerLattice(lattice)
        self.point_group = point_group
        self.action = tuple(action) if action is not None else point_group.elements
        if len(self.action) != point_group.order:
            raise PreconditionError("action must give one matrix per group element")
        if not self.lattice.is_invariant(self.action):
            raise PreconditionError("action does not preserve the lattice")

    @property
    def rank(self):
        return self.lattice.rank

    def local_matrices(self):
        """Action matrices written in the lattice's own basis."""
        B = self.lattice.basis
        return tuple(conjugate_into_basis(M, B) for M in self.action)

    def scaled(self, m):
        return WModuleLattice(self.lattice.scaled(m), self.point_group, self.action)
