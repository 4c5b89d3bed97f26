"""Integer point groups of the finite Weyl families."""
from collections import deque
from functools import cached_property
from math import lcm

from .classify import ClassifiedType, parse_type_name, template_graph
from .exceptions import CapExceeded, PreconditionError, UnsupportedFamily
from .intmat import det, identity, mat_pow, matmul, matvec

DEFAULT_CAP = 10**6


def _path_cartan(n, bonds=None):
    """Cartan matrix of a path; ``bonds`` maps (i, j) to A[i][j] for multiple bonds."""
    A = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(n - 1):
        A[i][i + 1] = A[i + 1][i] = -1
    for (i, j), v in (bonds or {}).items():
        A[i][j] = v
    return A


def _star_cartan(arms):
    size = 1 + sum(arms)
    A = [[2 if i == j else 0 for j in range(size)] for i in range(size)]
    nxt = 1
    for length in arms:
        prev = 0
        for _ in range(length):
            A[prev][nxt] = A[nxt][prev] = -1
            prev, nxt = nxt, nxt + 1
    return A


def cartan_matrix(family, rank):
    """Cartan matrix ``A[i][j] = <alpha_i^vee, alpha_j>`` of a finite crystallographic type."""
    n = rank
    if family == "A":
        A = _path_cartan(n)
    elif family == "B":
        A = _path_cartan(n, {(n - 2, n - 1): -1, (n - 1, n - 2): -2}) if n >= 2 else _path_cartan(1)
    elif family == "C":
        A = _path_cartan(n, {(n - 2, n - 1): -2, (n - 1, n - 2): -1}) if n >= 2 else _path_cartan(1)
    elif family == "D":
        A = _star_cartan([1, 1, n - 3])
    elif family in ("E6", "E7", "E8"):
        A = _star_cartan({"E6": [2, 2, 1], "E7": [3, 2, 1], "E8": [4, 2, 1]}[family])
    elif family == "F4":
        A = _path_cartan(4, {(1, 2): -1, (2, 1): -2})
    elif family == "G2":
        A = _path_cartan(2, {(0, 1): -1, (1, 0): -3})
    else:
        raise UnsupportedFamily(f"no Weyl group for family {family!r}")
    return tuple(tuple(row) for row in A)


def simple_reflections(cartan):
    """Simple reflections ``s_i(e_j) = e_j - A[i][j] e_i`` in the simple-root basis."""
    n = len(cartan)
    gens = []
    for i in range(n):
        M = [list(row) for row in identity(n)]
        for j in range(n):
            M[i][j] -= cartan[i][j]
        gens.append(tuple(tuple(row) for row in M))
    return gens


def _check_invertible(M):
    if det(M) not in (1, -1):
        raise PreconditionError("generator is not invertible over the integers")


class PointGroup:
    """A finite group of integer matrices given by generators and its full element list.

    ``elements[0]`` is the identity; elements are stored in breadth-first
    order from the generators so indices are deterministic.
    """

    def __init__(self, generators, elements, family=None, coxeter_matrix=None):
        self.generators = tuple(generators)
        self.elements = tuple(elements)
        self.rank = len(self.elements[0])
        self.family = family
        self.coxeter_matrix = coxeter_matrix
        self._index = {M: i for i, M in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)

    @property
    def order(self):
        return len(self.elements)

    def __repr__(self):
        tag = f" {self.family}" if self.family else ""
        return f"<PointGroup{tag} rank={self.rank} order={self.order}>"

    def index(self, M):
        return self._index[M]

    def matrix(self, i):
        return self.elements[i]

    @cached_property
    def generator_indices(self):
        return tuple(self._index[g] for g in self.generators)

    @cached_property
    def table(self):
        els, idx = self.elements, self._index
        return tuple(tuple(idx[matmul(A, B)] for B in els) for A in els)

    def mul(self, i, j):
        return self.table[i][j]

    @cached_property
    def inverses(self):
        # a matrix of order k has inverse A^(k-1)
        return tuple(self._index[mat_pow(A, k - 1)] for A, k in zip(self.elements, self.orders))

    def inv(self, i):
        return self.inverses[i]

    @cached_property
    def orders(self):
        I = identity(self.rank)
        out = []
        for A in self.elements:
            k, X = 1, A
            while X != I:
                X = matmul(X, A)
                k += 1
            out.append(k)
        return tuple(out)

    @cached_property
    def exponent(self):
        return lcm(*self.orders)

    def power(self, i, k):
        return self._index[mat_pow(self.elements[i], k % self.orders[i])]

    def is_closed(self):
        """Closure under product and inverse, checked by direct matrix products."""
        I = identity(self.rank)
        for A in self.elements:
            if not any(matmul(A, B) == I for B in self.elements):
                return False
            for B in self.elements:
                if matmul(A, B) not in self._index:
                    return False
        return True

    def is_faithful(self):
        """Only the identity element fixes every standard basis vector."""
        n = self.rank
        basis = identity(n)
        fixing = [i for i, M in enumerate(self.elements)
                  if all(matvec(M, e) == e for e in basis)]
        return fixing == [0]

    def satisfies_coxeter_relations(self):
        """``(M_i M_j)^m(i,j) = I`` for every generator pair with finite label."""
        if self.coxeter_matrix is None:
            raise PreconditionError("no Coxeter matrix attached")
        I = identity(self.rank)
        gens = self.generators
        for i, Mi in enumerate(gens):
            for j, Mj in enumerate(gens):
                m = self.coxeter_matrix[i][j]
                if mat_pow(matmul(Mi, Mj), m) != I:
                    return False
                # the label is the exact order, not just a multiple
                for d in range(1, m):
                    if m % d == 0 and mat_pow(matmul(Mi, Mj), d) == I:
                        return False
        return True

    def to_json(self):
        return {"rank": self.rank, "order": self.order, "exponent": self.exponent,
                "family": self.family,
                "generators": [[x for row in M for x in row] for M in self.generators]}


def generate_closure(generators, cap=DEFAULT_CAP, **kwargs):
    """Breadth-first closure of integer matrices under multiplication.

    Raises ``CapExceeded`` once more than ``cap`` elements are found, which is
    how infinite (or far too large) groups are reported.
    """
    generators = [tuple(tuple(int(x) for x in row) for row in M) for M in generators]
    if not generators:
        raise PreconditionError("need at least one generator")
    for M in generators:
        _check_invertible(M)
    I = identity(len(generators[0]))
    elements, seen = [I], {I}
    queue = deque([I])
    while queue:
        x = queue.popleft()
        for g in generators:
            y = matmul(x, g)
            if y not in seen:
                seen.add(y)
                elements.append(y)
                if len(elements) > cap:
                    raise CapExceeded(f"closure exceeded {cap} elements")
                queue.append(y)
    return PointGroup(generators, elements, **kwargs)


def _as_type(family):
    return parse_type_name(family) if isinstance(family, str) else family


def point_group_for(family, cap=DEFAULT_CAP):
    """Point group of a tabulated family.

    Spherical crystallographic types give the Weyl group acting on the root
    lattice.  Affine types give the Weyl group of the finite part acting on
    the coroot lattice (the translation lattice), i.e. reflections built from
    the transposed Cartan matrix.  The result is checked against the Coxeter
    relations of the finite diagram and for faithfulness.
    """
    ctype = _as_type(family)
    if not isinstance(ctype, ClassifiedType) or ctype.kind == "other" or ctype.family is None:
        raise UnsupportedFamily("point groups exist only for tabulated irreducible families")
    fam, rank = ctype.family, ctype.rank
    if fam.startswith("I2") or fam in ("H3", "H4"):
        raise UnsupportedFamily(f"{ctype.name} is not crystallographic")
    if ctype.affine and fam == "A" and rank == 1:
        return generate_closure([((-1,),)], cap=cap, family=ctype.name, coxeter_matrix=((1,),))
    A = cartan_matrix(fam, rank)
    if ctype.affine:
        A = tuple(zip(*A))
    finite = ClassifiedType("spherical", fam if fam != "C" else "B", rank)
    if rank == 2 and fam in ("A", "B", "C", "G2"):
        from .classify import rank_two_type
        finite = rank_two_type({"A": 3, "B": 4, "C": 4, "G2": 6}[fam])
    cox = template_graph(finite).matrix()
    pg = generate_closure(simple_reflections(A), cap=cap, family=ctype.name, coxeter_matrix=cox)
    if not pg.satisfies_coxeter_relations():
        raise AssertionError(f"tabulated generators for {ctype.name} violate the Coxeter relations")
    if not pg.is_faithful():
        raise AssertionError(f"action of {ctype.name} is not faithful")
    return pg
