"""Coxeter matrices, their graph/diagram views, and right-angled checks."""
from dataclasses import dataclass
from itertools import combinations
import math

import numpy as np

from .exceptions import ParseError

INF = math.inf


@dataclass(frozen=True)
class CoxeterGraph:
    """A Coxeter matrix on named generators.

    ``labels`` stores only off-diagonal pairs with label other than 2, keyed by
    index pairs ``(i, j)`` with ``i < j``.  Labels are ints >= 3 or ``math.inf``.
    """

    vertices: tuple
    labels: tuple = ()

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex")
        norm = {}
        for (i, j), m in dict(self.labels).items():
            if i == j:
                raise ValueError("diagonal label must be 1")
            if i > j:
                i, j = j, i
            if not (m == INF or (isinstance(m, int) and m >= 2)):
                raise ValueError(f"invalid label {m!r}")
            if (i, j) in norm and norm[(i, j)] != m:
                raise ValueError("asymmetric labels")
            if m != 2:
                norm[(i, j)] = m
        object.__setattr__(self, "labels", tuple(sorted(norm.items())))

    @classmethod
    def from_matrix(cls, matrix, names=None):
        """Build from a full symmetric Coxeter matrix (``0``, ``-1`` or ``inf`` mean infinity)."""
        n = len(matrix)
        names = tuple(names) if names is not None else tuple(f"s{i + 1}" for i in range(n))
        labels = {}
        for i in range(n):
            if matrix[i][i] != 1:
                raise ValueError("diagonal label must be 1")
            for j in range(i + 1, n):
                a, b = matrix[i][j], matrix[j][i]
                if a != b:
                    raise ValueError("asymmetric labels")
                m = INF if (a == INF or a <= 0) else int(a)
                if m == 1:
                    raise ValueError("off-diagonal label must be >= 2")
                labels[(i, j)] = m
        return cls(names, tuple(labels.items()))

    @property
    def rank(self):
        return len(self.vertices)

    def label(self, i, j):
        if i == j:
            return 1
        if i > j:
            i, j = j, i
        return dict(self.labels).get((i, j), 2)

    def matrix(self):
        n = self.rank
        return tuple(tuple(self.label(i, j) for j in range(n)) for i in range(n))

    def graph_edges(self):
        """Edges of the Coxeter graph: pairs with finite label."""
        return [(i, j) for i, j in combinations(range(self.rank), 2) if self.label(i, j) < INF]

    def diagram_edges(self):
        """Edges of the Coxeter diagram: pairs with label >= 3 (including infinity)."""
        return [(i, j) for (i, j), m in self.labels if m >= 3]

    def subgraph(self, indices):
        indices = list(indices)
        pos = {v: k for k, v in enumerate(indices)}
        labels = {(pos[i], pos[j]): m for (i, j), m in self.labels if i in pos and j in pos}
        return CoxeterGraph(tuple(self.vertices[i] for i in indices), tuple(labels.items()))

    def relabel(self, perm):
        """Graph whose vertex ``k`` is this graph's vertex ``perm[k]``."""
        return self.subgraph(perm)

    def __str__(self):
        parts = [f"vertices: {' '.join(self.vertices)}"]
        for (i, j), m in self.labels:
            parts.append(f"edge: {self.vertices[i]} {self.vertices[j]} {'inf' if m == INF else m}")
        return "\n".join(parts)


def parse_coxeter_graph(text):
    """Parse the line-based graph format.

    ``vertices: a b c`` followed by ``edge: a b 3`` lines (labels >= 3 or
    ``inf``); pairs not listed get label 2 and ``#`` starts a comment.
    """
    vertices = None
    labels = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise ParseError(f"line {lineno}: expected 'key: value'")
        key, fields = key.strip(), rest.split()
        if key == "vertices":
            if vertices is not None:
                raise ParseError(f"line {lineno}: repeated vertices line")
            if not fields:
                raise ParseError(f"line {lineno}: no vertices")
            if len(set(fields)) != len(fields):
                raise ParseError(f"line {lineno}: duplicate vertex")
            vertices = tuple(fields)
        elif key == "edge":
            if vertices is None:
                raise ParseError(f"line {lineno}: edge before vertices line")
            if len(fields) != 3:
                raise ParseError(f"line {lineno}: edge needs two vertices and a label")
            s, t, m = fields
            for v in (s, t):
                if v not in vertices:
                    raise ParseError(f"line {lineno}: unknown vertex {v!r}")
            if m.lower() in ("inf", "infinity", "oo"):
                m = INF
            else:
                try:
                    m = int(m)
                except ValueError:
                    raise ParseError(f"line {lineno}: bad label {m!r}") from None
            i, j = vertices.index(s), vertices.index(t)
            if i == j:
                raise ParseError(f"line {lineno}: diagonal label must be 1")
            if m != INF and m < 2:
                raise ParseError(f"line {lineno}: off-diagonal label must be >= 2")
            key2 = (min(i, j), max(i, j))
            if key2 in labels and labels[key2] != m:
                raise ParseError(f"line {lineno}: asymmetric labels for {s},{t}")
            labels[key2] = m
        else:
            raise ParseError(f"line {lineno}: unknown key {key!r}")
    if vertices is None:
        raise ParseError("missing vertices line")
    return CoxeterGraph(vertices, tuple(labels.items()))


def _components(n, edges):
    adj = {i: set() for i in range(n)}
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    seen, comps = set(), []
    for start in range(n):
        if start in seen:
            continue
        comp, stack = [], [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v] - seen:
                seen.add(w)
                stack.append(w)
        comps.append(sorted(comp))
    return comps


def diagram_components(g):
    """Connected components of the diagram, as induced subgraphs (vertex order kept)."""
    return [g.subgraph(c) for c in _components(g.rank, g.diagram_edges())]


def is_irreducible(g):
    return len(_components(g.rank, g.diagram_edges())) == 1


def is_right_angled(g):
    return all(m in (2, INF) for _, m in g.labels)


def has_induced_square(n, edges):
    """Whether the simple graph has an induced 4-cycle.

    An induced C4 is a pair of non-adjacent vertices with two common
    neighbours that are themselves non-adjacent.
    """
    adj = [set() for _ in range(n)]
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    for u, v in combinations(range(n), 2):
        if v in adj[u]:
            continue
        common = sorted(adj[u] & adj[v])
        for x, y in combinations(common, 2):
            if y not in adj[x]:
                return True
    return False


@dataclass(frozen=True)
class RacgReport:
    right_angled: bool
    irreducible_racg: bool = None
    hyperbolic: bool = None

    @property
    def applicable(self):
        return self.right_angled


def racg_checks(g):
    """Right-angledness, irreducibility via the complement of the graph, hyperbolicity.

    The last two are ``None`` (not applicable) when the input is not right-angled.
    """
    if not is_right_angled(g):
        return RacgReport(right_angled=False)
    edges = g.graph_edges()
    edge_set = set(edges)
    complement = [p for p in combinations(range(g.rank), 2) if p not in edge_set]
    irreducible = len(_components(g.rank, complement)) == 1
    return RacgReport(True, irreducible, not has_induced_square(g.rank, edges))


def gram_matrix(g):
    """Cosine matrix with entries -cos(pi/m) (and -1 for m = infinity)."""
    n = g.rank
    B = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            m = g.label(i, j)
            B[i, j] = -1.0 if m == INF else -np.cos(np.pi / m)
    return B


def gram_kind(g, tol=1e-9):
    """Classify a connected diagram by the signature of its cosine matrix.

    Positive definite means spherical; positive semidefinite with a
    one-dimensional kernel means affine; anything else is ``"other"``.
    """
    eig = np.linalg.eigvalsh(gram_matrix(g))
    if eig.min() > tol:
        return "spherical"
    zero = np.abs(eig) <= tol
    if zero.sum() == 1 and (eig[~zero] > tol).all():
        return "affine"
    return "other"
