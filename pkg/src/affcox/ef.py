"""Ehrenfeucht-Fraisse games on finite groups and the tuple-expansion strategy transfer."""
import sys
from dataclasses import dataclass, field

import numpy as np

from .crystal import DEFAULT_SEED
from .exceptions import CapExceeded, PreconditionError
from .finite import AbelianGroup
from .quotients import find_isomorphism, is_isomorphism

EF_ORDER_CAP = 64
EF_ROUNDS_CAP = 4
PLAYER_I, PLAYER_II = "I", "II"


@dataclass(frozen=True)
class UnnestedAtomicProfile:
    """Truth values of ``x=y``, ``1=y``, ``x^-1=y`` and ``x0*x1=y`` over a tuple."""

    equal: tuple
    identity: tuple
    inverse: tuple
    product: tuple

    @classmethod
    def of(cls, G, tup):
        t = np.asarray(tup, dtype=np.int64)
        T = G.table
        return cls(
            equal=_bits(t[:, None] == t[None, :]),
            identity=_bits(t == G.identity),
            inverse=_bits(G.inverses[t][:, None] == t[None, :]),
            product=_bits(T[t[:, None], t[None, :]][:, :, None] == t[None, None, :]),
        )


def _bits(arr):
    return tuple(np.asarray(arr).ravel().tolist())


def _consistent(A, B, ta, tb):
    """Do the tuples satisfy the same unnested atomic formulas?"""
    ta = np.asarray(ta, dtype=np.int64)
    tb = np.asarray(tb, dtype=np.int64)
    if not np.array_equal(ta[:, None] == ta[None, :], tb[:, None] == tb[None, :]):
        return False
    if not np.array_equal(ta == A.identity, tb == B.identity):
        return False
    if not np.array_equal(A.inverses[ta][:, None] == ta[None, :], B.inverses[tb][:, None] == tb[None, :]):
        return False
    pa = A.table[ta[:, None], ta[None, :]][:, :, None] == ta[None, None, :]
    pb = B.table[tb[:, None], tb[None, :]][:, :, None] == tb[None, None, :]
    return bool(np.array_equal(pa, pb))


class EFSolver:
    """Exact minimax for EF_k on two finite groups.

    Positions are memoised on the set of chosen pairs plus rounds left: the
    win condition only looks at which pairs have been played, not at their
    order or multiplicity.
    """

    def __init__(self, A, B):
        if max(A.order, B.order) > EF_ORDER_CAP:
            raise CapExceeded(f"EF solver is capped at order {EF_ORDER_CAP}")
        self.A, self.B = A, B
        self.memo = {}
        oa, ob = A.orders, B.orders
        # candidate answers ordered by agreement of element order; nothing is filtered
        self.answers_in_B = [sorted(range(B.order), key=lambda y, x=x: (ob[y] != oa[x], y))
                             for x in range(A.order)]
        self.answers_in_A = [sorted(range(A.order), key=lambda x, y=y: (oa[x] != ob[y], x))
                             for y in range(B.order)]

    def _extend(self, S, a, b):
        pairs = sorted(S | {(a, b)})
        return _consistent(self.A, self.B, [p[0] for p in pairs], [p[1] for p in pairs])

    def second_wins(self, S, k):
        """Does Player II win from the (consistent) position ``S`` with ``k`` rounds left?"""
        if k == 0:
            return True
        key = (S, k)
        if key in self.memo:
            return self.memo[key]
        played_a = {p[0] for p in S}
        played_b = {p[1] for p in S}
        result = True
        for a in range(self.A.order):
            if a in played_a:
                continue
            if not any(self._extend(S, a, b) and self.second_wins(S | {(a, b)}, k - 1)
                       for b in self.answers_in_B[a]):
                result = False
                break
        if result:
            for b in range(self.B.order):
                if b in played_b:
                    continue
                if not any(self._extend(S, a, b) and self.second_wins(S | {(a, b)}, k - 1)
                           for a in self.answers_in_A[b]):
                    result = False
                    break
        self.memo[key] = result
        return result


def ef_value(A, B, k, solver=None):
    """Winner ("I" or "II") of the k-round game on A and B."""
    if k < 0 or k > EF_ROUNDS_CAP:
        raise CapExceeded(f"rounds must lie in 0..{EF_ROUNDS_CAP}")
    solver = solver or EFSolver(A, B)
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 10000))
    try:
        return PLAYER_II if solver.second_wins(frozenset(), k) else PLAYER_I
    finally:
        sys.setrecursionlimit(old)


def least_distinguishing_rounds(A, B, k_max=3):
    """Smallest ``k <= k_max`` at which Player I wins, or ``None``."""
    if k_max > EF_ROUNDS_CAP:
        raise CapExceeded(f"k_max is capped at {EF_ROUNDS_CAP}")
    solver = EFSolver(A, B)
    for k in range(1, k_max + 1):
        if ef_value(A, B, k, solver) == PLAYER_I:
            return k
    return None


# -- tuple expansion -----------------------------------------------------------

def _int_ops():
    return (lambda x, y: x + y), (lambda c, x: c * x), 0


def _group_ops(G):
    return G.add, (lambda c, x: G.times(c, x)), G.identity


def expand_tuple(b, matrices, group=None):
    """Concatenate ``b`` with the auxiliary entries needed to read off ``M b``.

    For each matrix and each row ``i``: for every coefficient ``a = M[i][j]``
    the multiples ``2b_j, ..., a b_j`` when ``a >= 2`` or ``-b_j, ..., a b_j``
    when ``a < 0`` (coefficients 0 and 1 add nothing); then the row partial
    sums ``sum_{j<k} M[i][j] b_j`` for ``k = 2..n``.  Entries are integers, or
    elements of ``group`` (an ``AbelianGroup``) when given.
    """
    b = tuple(int(x) for x in b)
    n = len(b)
    add, times, zero = _group_ops(group) if group is not None else _int_ops()
    out = list(b)
    for M in matrices:
        if len(M) != n or any(len(row) != n for row in M):
            raise PreconditionError(f"matrix shape does not match tuple length {n}")
        for row in M:
            for a, bj in zip(row, b):
                if a >= 2:
                    out.extend(times(c, bj) for c in range(2, a + 1))
                elif a < 0:
                    out.extend(times(c, bj) for c in range(-1, a - 1, -1))
            acc = times(row[0], b[0]) if n else zero
            for j in range(1, n):
                acc = add(acc, times(row[j], b[j]))
                out.append(acc)
    return tuple(out)


def apply_matrix(M, a, group):
    """``M a`` for a tuple of elements of an abelian group."""
    out = []
    for row in M:
        acc = group.identity
        for c, x in zip(row, a):
            acc = group.add(acc, group.times(c, x))
        out.append(acc)
    return tuple(out)


class SemidirectPower:
    """``A^n`` semidirect the point group, elements ``(a, w)`` with ``a`` a tuple over A."""

    def __init__(self, A, pg):
        self.A, self.pg = A, pg
        self.n = len(pg.elements[0])

    def mul(self, x, y):
        (a, w), (b, v) = x, y
        wb = apply_matrix(self.pg.elements[w], b, self.A)
        return tuple(self.A.add(s, t) for s, t in zip(a, wb)), self.pg.mul(w, v)

    def inv(self, x):
        a, w = x
        wi = self.pg.inverses[w]
        img = apply_matrix(self.pg.elements[wi], a, self.A)
        return tuple(self.A.neg(s) for s in img), wi

    def identity(self):
        return (self.A.identity,) * self.n, _identity_index(self.pg)

    def random(self, rng):
        a = tuple(int(v) for v in rng.integers(0, self.A.order, self.n))
        return a, int(rng.integers(0, self.pg.order))


def _identity_index(pg):
    n = len(pg.elements[0])
    I = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    return pg.index(I)


@dataclass
class TransferReport:
    trials: int
    case_counts: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)
    missing_witnesses: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.counterexamples and not self.missing_witnesses

    def to_json(self):
        return {"schema": "affcox.transfer/1", "trials": self.trials, "ok": self.ok,
                "case_counts": self.case_counts, "counterexamples": self.counterexamples[:20],
                "missing_witnesses": self.missing_witnesses[:20]}


def strategy_transfer_check(A, B, pg, trials=500, iso=None, seed=DEFAULT_SEED):
    """Check that atomic facts transfer from (A, B) to (A^n x| W0, B^n x| W0).

    The four kinds checked are equality, identity, inverse and product.

    Random plays are built in ``A^n x| W0`` (with products, inverses, copies
    and the identity mixed in so every case is exercised both ways) and sent
    to the B side through ``iso`` coordinatewise.  Each atomic fact must have
    the same truth value on both sides, and the coordinates it depends on
    must occur in the expanded tuples, with ``iso`` carrying one expansion
    onto the other.
    """
    if not isinstance(A, AbelianGroup) or not isinstance(B, AbelianGroup):
        raise PreconditionError("strategy transfer needs finite abelian groups")
    if A.order != B.order:
        raise PreconditionError("A and B have different orders")
    if iso is None:
        iso = find_isomorphism(A, B)
        if iso is None:
            raise PreconditionError("A and B are not isomorphic; no correspondence to transfer")
    iso = np.asarray(iso)
    if not is_isomorphism(A, B, iso):
        raise PreconditionError("supplied map is not an isomorphism")
    SA, SB = SemidirectPower(A, pg), SemidirectPower(B, pg)
    rng = np.random.default_rng(seed)
    eA = SA.identity()

    def image(x):
        return tuple(int(iso[s]) for s in x[0]), x[1]

    def expansions_match(a):
        left = expand_tuple(a, pg.elements, A)
        right = expand_tuple(tuple(int(iso[s]) for s in a), pg.elements, B)
        return tuple(int(iso[s]) for s in left) == right, set(left)

    report = TransferReport(trials, {c: [0, 0] for c in ("equality", "identity", "inverse", "product")})
    for t in range(trials):
        x0, x1 = SA.random(rng), SA.random(rng)
        choice = int(rng.integers(0, 5))
        y = [SA.random(rng), SA.mul(x0, x1), SA.inv(x0), x0, eA][choice]
        facts_a = {
            "equality": x0 == y,
            "identity": y == eA,
            "inverse": SA.inv(x0) == y,
            "product": SA.mul(x0, x1) == y,
        }
        bx0, bx1, by = image(x0), image(x1), image(y)
        facts_b = {
            "equality": bx0 == by,
            "identity": by == SB.identity(),
            "inverse": SB.inv(bx0) == by,
            "product": SB.mul(bx0, bx1) == by,
        }
        for case, va in facts_a.items():
            report.case_counts[case][int(va)] += 1
            if va != facts_b[case]:
                report.counterexamples.append({"trial": t, "case": case, "x0": x0, "x1": x1, "y": y})
        # witnesses: w0 * a1 for the product and w0^-1 * a0 for the inverse
        for a, w in ((x1[0], x0[1]), (x0[0], pg.inverses[x0[1]])):
            same, entries = expansions_match(a)
            needed = apply_matrix(pg.elements[w], a, A)
            # each coordinate of w a is the last row partial sum (n >= 2) or a multiple of b (n = 1)
            if not same or not all(v in entries for v in needed):
                report.missing_witnesses.append({"trial": t, "a": a, "w": int(w)})
    for case in report.case_counts:
        report.case_counts[case] = {"false": report.case_counts[case][0],
                                    "true": report.case_counts[case][1]}
    return report
