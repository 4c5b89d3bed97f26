"""Finite groups on the index set ``range(order)``.

Every group here exposes ``order``, ``identity``, ``mul``, the vectorised
``mul_many`` and a generating set; the multiplication table is materialised
only when asked for and the order is small enough.
"""
from functools import cached_property
from math import prod

import numpy as np

from .exceptions import CapExceeded, ParseError, PreconditionError

TABLE_CAP = 4096


class FiniteGroup:
    order: int
    identity: int = 0

    def __len__(self):
        return self.order

    def mul(self, i, j):
        return int(self.mul_many(np.array([i]), np.array([j]))[0])

    def mul_many(self, X, Y):
        raise NotImplementedError

    @property
    def generators(self):
        return self._generators

    def label(self, i):
        return str(i)

    @cached_property
    def elements(self):
        return np.arange(self.order)

    @cached_property
    def table(self):
        if self.order > TABLE_CAP:
            raise CapExceeded(f"refusing to build a {self.order}x{self.order} table")
        N = self.order
        X = np.repeat(np.arange(N), N)
        Y = np.tile(np.arange(N), N)
        return self.mul_many(X, Y).reshape(N, N)

    @cached_property
    def _powers(self):
        """Element orders and inverses by simultaneous powering."""
        N = self.order
        base = np.arange(N)
        cur = base.copy()
        prev = np.full(N, self.identity)
        orders = np.zeros(N, dtype=np.int64)
        inverses = np.zeros(N, dtype=np.int64)
        k = 1
        while True:
            hit = (cur == self.identity) & (orders == 0)
            orders[hit] = k
            inverses[hit] = prev[hit]
            if (orders > 0).all():
                break
            prev = cur
            cur = self.mul_many(cur, base)
            k += 1
            if k > N:
                raise AssertionError("element order exceeds group order; not a group")
        return orders, inverses

    @property
    def orders(self):
        return self._powers[0]

    @property
    def inverses(self):
        return self._powers[1]

    def inv(self, i):
        return int(self.inverses[i])

    def power(self, i, k):
        if k < 0:
            i, k = self.inv(i), -k
        result, base = self.identity, i
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def right_action(self, g):
        """Permutation ``x -> x g`` as an array."""
        return self.mul_many(self.elements, np.full(self.order, g))

    def left_action(self, g):
        return self.mul_many(np.full(self.order, g), self.elements)

    def relabeled(self, perm):
        """Isomorphic copy where old element ``i`` is called ``perm[i]``."""
        perm = np.asarray(perm)
        T = self.table
        new = np.empty_like(T)
        new[np.ix_(perm, perm)] = perm[T]
        return TableGroup(new, check=False)


def subgroup_closure(G, gens):
    """Sorted array of the subgroup generated by ``gens``."""
    gens = [int(g) for g in gens]
    seen = np.zeros(G.order, dtype=bool)
    seen[G.identity] = True
    frontier = np.array([G.identity])
    while frontier.size:
        new = []
        for g in gens:
            img = G.mul_many(frontier, np.full(frontier.size, g))
            img = np.unique(img[~seen[img]])
            seen[img] = True
            new.append(img)
        frontier = np.unique(np.concatenate(new)) if new else np.array([], dtype=int)
    return np.flatnonzero(seen)


def greedy_generators(G, candidates=None):
    """A small generating set, picked greedily from ``candidates`` (default: all elements)."""
    candidates = G.elements if candidates is None else candidates
    gens, sub = [], np.array([G.identity])
    inside = np.zeros(G.order, dtype=bool)
    inside[G.identity] = True
    for c in candidates:
        if inside[c]:
            continue
        gens.append(int(c))
        sub = subgroup_closure(G, gens)
        inside[:] = False
        inside[sub] = True
        if sub.size == G.order:
            break
    return tuple(gens)


class TableGroup(FiniteGroup):
    """A group given by its Cayley table."""

    def __init__(self, table, labels=None, check=True):
        T = np.asarray(table, dtype=np.int64)
        if T.ndim != 2 or T.shape[0] != T.shape[1]:
            raise PreconditionError("table must be square")
        self.order = T.shape[0]
        if T.size and (T.min() < 0 or T.max() >= self.order):
            raise PreconditionError("table entries out of range")
        self.__dict__["table"] = T
        ids = [e for e in range(self.order) if (T[e] == np.arange(self.order)).all()
               and (T[:, e] == np.arange(self.order)).all()]
        if not ids:
            raise PreconditionError("table has no identity element")
        self.identity = ids[0]
        self.labels = labels
        if check:
            self.validate()

    def validate(self):
        T, N = self.table, self.order
        full = np.arange(N)
        for row in T:
            if not (np.sort(row) == full).all():
                raise PreconditionError("table is not a Latin square (missing inverses)")
        for col in T.T:
            if not (np.sort(col) == full).all():
                raise PreconditionError("table is not a Latin square (missing inverses)")
        # Light's test: associativity on a generating set suffices
        for g in self.generators:
            if not (T[T[:, g], :] == T[:, T[g, :]]).all():
                raise PreconditionError("table is not associative")

    @cached_property
    def _generators(self):
        return greedy_generators(self)

    def mul_many(self, X, Y):
        return self.table[X, Y]

    def mul(self, i, j):
        return int(self.table[i, j])

    def label(self, i):
        return self.labels[i] if self.labels else str(i)


class AbelianGroup(FiniteGroup):
    """Z/n_1 x ... x Z/n_k written additively, elements indexed in mixed radix."""

    def __init__(self, moduli):
        self.moduli = tuple(int(m) for m in moduli)
        if not self.moduli or min(self.moduli) < 1:
            raise PreconditionError("moduli must be positive")
        self.order = prod(self.moduli)
        self.identity = 0
        self._radix = np.cumprod((1,) + self.moduli[:-1])

    def __repr__(self):
        return "AbelianGroup(" + " x ".join(f"Z/{m}" for m in self.moduli) + ")"

    def decode(self, i):
        return tuple((i // r) % m for r, m in zip(self._radix.tolist(), self.moduli))

    def encode(self, t):
        return int(sum((x % m) * r for x, m, r in zip(t, self.moduli, self._radix.tolist())))

    def _digits(self, X):
        X = np.asarray(X)
        return [(X // r) % m for r, m in zip(self._radix, self.moduli)]

    def mul_many(self, X, Y):
        out = np.zeros(np.shape(X), dtype=np.int64)
        for dx, dy, r, m in zip(self._digits(X), self._digits(Y), self._radix, self.moduli):
            out += ((dx + dy) % m) * r
        return out

    def add(self, i, j):
        return self.mul(i, j)

    def neg(self, i):
        return self.encode(tuple(-x for x in self.decode(i)))

    def times(self, k, i):
        """The integer multiple ``k * i``."""
        return self.encode(tuple(k * x for x in self.decode(i)))

    @cached_property
    def _generators(self):
        gens = []
        for pos in range(len(self.moduli)):
            t = [0] * len(self.moduli)
            t[pos] = 1
            gens.append(self.encode(t))
        return tuple(gens)

    def label(self, i):
        d = self.decode(i)
        return str(d[0]) if len(d) == 1 else "(" + ",".join(map(str, d)) + ")"


def cyclic(n):
    return AbelianGroup((n,))


def parse_table(text):
    """Read ``N`` followed by ``N*N`` whitespace-separated indices."""
    tokens = text.split()
    if not tokens:
        raise ParseError("empty table file")
    try:
        values = [int(t) for t in tokens]
    except ValueError as exc:
        raise ParseError(f"non-integer token in table: {exc}") from None
    N, body = values[0], values[1:]
    if N < 1 or len(body) != N * N:
        raise ParseError(f"expected {N * N} entries after the order, found {len(body)}")
    return TableGroup(np.array(body).reshape(N, N))


def format_table(G):
    T = G.table
    lines = [str(G.order)]
    lines += [" ".join(str(int(x)) for x in row) for row in T]
    return "\n".join(lines) + "\n"


def direct_product_table(G, H):
    """Cayley table of G x H with element ``(g, h)`` at index ``g * |H| + h``."""
    TG, TH = G.table, H.table
    big = TG[:, None, :, None] * H.order + TH[None, :, None, :]
    N = G.order * H.order
    return TableGroup(big.reshape(N, N), check=False)
