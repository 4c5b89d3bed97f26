"""Template classification of spherical and affine Coxeter diagrams."""
from dataclasses import dataclass, field
import re

from .coxeter import INF, CoxeterGraph, diagram_components


@dataclass(frozen=True)
class ClassifiedType:
    """Result of classifying a Coxeter diagram.

    For an irreducible input ``family`` is a symbol such as ``"A"``, ``"E6"`` or
    ``"I2(5)"`` and ``rank`` is the Lie rank (vertex count minus one for affine
    types).  Reducible inputs carry their per-component results in
    ``components`` and a ``family`` of ``None``.
    """

    kind: str
    family: str = None
    rank: int = None
    affine: bool = False
    components: tuple = field(default=(), compare=False)

    @property
    def name(self):
        if self.family is None:
            if not self.components:
                return "other"
            return " x ".join(c.name for c in self.components)
        if self.kind == "other":
            return "other"
        fam = self.family
        if fam in ("A", "B", "C", "D"):
            letter, num = fam, str(self.rank)
        elif fam.startswith("I2"):
            return fam
        else:
            letter, num = fam[0], fam[1:]
        return f"{letter}~{num}" if self.affine else f"{letter}{num}"

    def describe(self):
        if self.kind == "other":
            return "other"
        text = f"{self.kind} {self.name}"
        if self.affine and self.family == "A" and self.rank == 1:
            text += " (infinite dihedral)"
        return text

    def to_json(self):
        data = {"kind": self.kind, "family": self.name if self.kind != "other" else None,
                "rank": self.rank}
        if self.components and self.family is None:
            data["components"] = [c.to_json() for c in self.components]
        return data


# -- template builders -------------------------------------------------------

def _graph(n, edges):
    return CoxeterGraph(tuple(f"v{i}" for i in range(n)),
                        tuple(((i, j), m) for i, j, m in edges))


def _path(labels):
    return _graph(len(labels) + 1, [(i, i + 1, m) for i, m in enumerate(labels)])


def _star(arms):
    """A centre vertex with simply-laced arms of the given lengths."""
    edges, nxt = [], 1
    for length in arms:
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt, 3))
            prev, nxt = nxt, nxt + 1
    return _graph(nxt, edges)


def _cycle(n):
    return _graph(n, [(i, (i + 1) % n, 3) for i in range(n)])


def _btilde(r):
    edges = [(0, 2, 3), (1, 2, 3)]
    edges += [(i, i + 1, 3) for i in range(2, r - 1)]
    edges.append((r - 1, r, 4))
    return _graph(r + 1, edges)


def spherical_templates(n):
    """Tabulated connected spherical diagrams on ``n`` vertices (``n != 2``)."""
    out = []
    if n >= 1:
        out.append((ClassifiedType("spherical", "A", n), _path([3] * (n - 1))))
    if n >= 3:
        out.append((ClassifiedType("spherical", "B", n), _path([3] * (n - 2) + [4])))
    if n >= 4:
        out.append((ClassifiedType("spherical", "D", n), _star([1, 1, n - 3])))
    extra = {
        3: [("H3", _path([5, 3]))],
        4: [("F4", _path([3, 4, 3])), ("H4", _path([5, 3, 3]))],
        6: [("E6", _star([2, 2, 1]))],
        7: [("E7", _star([3, 2, 1]))],
        8: [("E8", _star([4, 2, 1]))],
    }
    for fam, g in extra.get(n, []):
        out.append((ClassifiedType("spherical", fam, n), g))
    return out


def affine_templates(n):
    """Tabulated irreducible affine diagrams on ``n`` vertices (``n != 2``)."""
    r = n - 1
    out = []
    if r >= 2:
        out.append((ClassifiedType("affine", "A", r, True), _cycle(n)))
        out.append((ClassifiedType("affine", "C", r, True), _path([4] + [3] * (r - 2) + [4])))
    if r >= 3:
        out.append((ClassifiedType("affine", "B", r, True), _btilde(r)))
    if r >= 4:
        d_edges = [(0, 2, 3), (1, 2, 3)] + [(i, i + 1, 3) for i in range(2, r - 2)]
        d_edges += [(r - 2, r - 1, 3), (r - 2, r, 3)]
        out.append((ClassifiedType("affine", "D", r, True), _graph(n, d_edges)))
    extra = {
        3: [("G2", _path([3, 6]))],
        5: [("F4", _path([3, 3, 4, 3]))],
        7: [("E6", _star([2, 2, 2]))],
        8: [("E7", _star([3, 3, 1]))],
        9: [("E8", _star([5, 2, 1]))],
    }
    for fam, g in extra.get(n, []):
        out.append((ClassifiedType("affine", fam, r, True), g))
    return out


def rank_two_type(m):
    if m == INF:
        return ClassifiedType("affine", "A", 1, True)
    named = {3: ("A", 2), 4: ("B", 2), 6: ("G2", 2)}
    if m in named:
        fam, rk = named[m]
        return ClassifiedType("spherical", fam, rk)
    return ClassifiedType("spherical", f"I2({m})", 2)


def all_templates(max_vertices):
    """Every tabulated template with at most ``max_vertices`` vertices (rank-two dihedral excluded)."""
    out = []
    for n in range(1, max_vertices + 1):
        if n == 2:
            continue
        out.extend(spherical_templates(n))
        out.extend(affine_templates(n))
    return out


# -- isomorphism -------------------------------------------------------------

def _signature(g, v):
    return tuple(sorted(g.label(v, w) for w in range(g.rank) if w != v and g.label(v, w) != 2))


def labeled_isomorphic(g, h):
    """Exhaustive labelled-graph isomorphism with degree/label pruning."""
    if g.rank != h.rank:
        return False
    if sorted(m for _, m in g.labels) != sorted(m for _, m in h.labels):
        return False
    sig_g = [_signature(g, v) for v in range(g.rank)]
    sig_h = [_signature(h, v) for v in range(h.rank)]
    if sorted(sig_g) != sorted(sig_h):
        return False
    order = sorted(range(g.rank), key=lambda v: (-len(sig_g[v]), sig_g[v]))
    mapping, used = {}, set()

    def extend(k):
        if k == len(order):
            return True
        v = order[k]
        for w in range(h.rank):
            if w in used or sig_h[w] != sig_g[v]:
                continue
            if all(g.label(v, u) == h.label(w, mapping[u]) for u in mapping):
                mapping[v] = w
                used.add(w)
                if extend(k + 1):
                    return True
                del mapping[v]
                used.discard(w)
        return False

    return extend(0)


def _classify_connected(g):
    n = g.rank
    if n == 2:
        return rank_two_type(g.label(0, 1))
    for ctype, template in spherical_templates(n) + affine_templates(n):
        if labeled_isomorphic(g, template):
            return ctype
    return ClassifiedType("other")


def classify_diagram(g):
    """Classify each diagram component against the tabulated lists."""
    comps = tuple(_classify_connected(c) for c in diagram_components(g))
    if len(comps) == 1:
        return comps[0]
    kinds = {c.kind for c in comps}
    kind = kinds.pop() if len(kinds) == 1 else "other"
    rank = sum(c.rank for c in comps) if kind != "other" else None
    return ClassifiedType(kind, None, rank, kind == "affine", comps)


_NAME = re.compile(r"^\s*([A-Za-z])(~?)\s*(\d+)\s*$")


def parse_type_name(name):
    """Parse names such as ``"A~2"``, ``"C3"``, ``"G~2"``, ``"E8"`` into a ClassifiedType.

    The name is validated against the tabulated lists (``"B~2"`` is accepted as
    an alias of ``"C~2"``).
    """
    m = _NAME.match(name)
    if not m:
        raise ValueError(f"unrecognised type name {name!r}")
    letter, tilde, rank = m.group(1).upper(), bool(m.group(2)), int(m.group(3))
    if tilde:
        if letter == "B" and rank == 2:
            letter = "C"
        fam = letter if letter in "ABCD" else f"{letter}{rank}"
        if rank == 1 and letter == "A":
            return ClassifiedType("affine", "A", 1, True)
        for ctype, _ in affine_templates(rank + 1):
            if ctype.family == fam and ctype.rank == rank:
                return ctype
    else:
        if letter == "C" and rank >= 2:
            return ClassifiedType("spherical", "C", rank)
        if rank == 2 and letter in "ABG":
            return rank_two_type({"A": 3, "B": 4, "G": 6}[letter])
        fam = letter if letter in "ABD" else f"{letter}{rank}"
        for ctype, _ in spherical_templates(rank):
            if ctype.family == fam and ctype.rank == rank:
                return ctype
    raise ValueError(f"{name!r} is not a tabulated family")


def template_graph(ctype):
    """Diagram of a tabulated irreducible type."""
    if ctype.affine:
        if ctype.family == "A" and ctype.rank == 1:
            return _path([INF])
        pool = affine_templates(ctype.rank + 1)
    else:
        if ctype.rank == 2:
            m = {"A": 3, "B": 4, "C": 4, "G2": 6}.get(ctype.family)
            if m is None:
                m = int(ctype.family[3:-1])
            return _path([m])
        pool = spherical_templates(ctype.rank)
    fam = "B" if (ctype.family == "C" and not ctype.affine) else ctype.family
    for c, g in pool:
        if c.family == fam:
            return g
    raise ValueError(f"no template for {ctype}")
