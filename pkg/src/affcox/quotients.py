"""Finite-quotient fingerprints, exact isomorphism search and genus comparisons."""
from collections import Counter
from dataclasses import asdict, dataclass, field
from itertools import product

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .crystal import make_quotient
from .exceptions import CapExceeded, PreconditionError
from .finite import greedy_generators, subgroup_closure
from .intmat import identity, mat_sub, smith_invariants
from .logic import parse_formula, solution_set

FINGERPRINT_CAP = 10**5
EXACT_CAP = 512
MODULE_EXACT_CAP = 256


def _orbits(N, perms):
    """Orbit labels of the group generated by the permutations (arrays) on range(N)."""
    if not perms:
        return np.arange(N)
    rows = np.concatenate([np.arange(N)] * len(perms))
    cols = np.concatenate(perms)
    graph = coo_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(N, N))
    _, labels = connected_components(graph, directed=True, connection="weak")
    return labels


def conjugacy_classes(G):
    """Class label of every element (orbits of conjugation by the generators)."""
    inv = G.inverses
    X = G.elements
    perms = []
    for g in G.generators:
        gs = np.full(G.order, g)
        perms.append(G.mul_many(G.mul_many(gs, X), inv[gs]))
    return _orbits(G.order, perms)


def _normal_closure(G, elements):
    gens = [int(x) for x in elements if x != G.identity]
    while True:
        sub = subgroup_closure(G, gens) if gens else np.array([G.identity])
        inside = np.zeros(G.order, dtype=bool)
        inside[sub] = True
        extra = []
        for h in gens:
            for g in G.generators:
                c = G.mul(G.mul(G.inv(g), h), g)
                if not inside[c]:
                    extra.append(c)
                    inside[subgroup_closure(G, gens + extra)] = True
        if not extra:
            return sub
        gens = gens + extra


def derived_subgroup(G):
    gens = G.generators
    comms = [G.mul(G.mul(G.inv(a), G.inv(b)), G.mul(a, b)) for a in gens for b in gens]
    return _normal_closure(G, comms)


def center(G):
    X = G.elements
    mask = np.ones(G.order, dtype=bool)
    for g in G.generators:
        gs = np.full(G.order, g)
        mask &= G.mul_many(X, gs) == G.mul_many(gs, X)
    return np.flatnonzero(mask)


def abelianization_invariants(G, derived=None):
    """Invariant factors of G/[G,G] from the Smith form of a relation matrix.

    The abelianisation is generated by the images of G's generators; walking
    its Cayley graph from the identity, every edge that closes a cycle gives
    a relation vector, and these relations generate the full relation lattice.
    """
    derived = derived_subgroup(G) if derived is None else derived
    dgens = greedy_generators(G, derived) if derived.size > 1 else ()
    perms = [G.mul_many(G.elements, np.full(G.order, h)) for h in dgens]
    coset = _orbits(G.order, perms)
    gens = G.generators
    r = len(gens)
    start = coset[G.identity]
    vec = {start: (0,) * r}
    rep = {start: G.identity}
    queue = [start]
    relations = []
    while queue:
        c = queue.pop()
        x = rep[c]
        for i, g in enumerate(gens):
            y = G.mul(x, g)
            cy = coset[y]
            v = list(vec[c])
            v[i] += 1
            v = tuple(v)
            if cy in vec:
                diff = tuple(a - b for a, b in zip(v, vec[cy]))
                if any(diff):
                    relations.append(diff)
            else:
                vec[cy] = v
                rep[cy] = y
                queue.append(cy)
    if not relations:
        return ()
    snf = smith_invariants(relations)
    snf += [0] * (r - len(snf))
    return tuple(d for d in snf if d != 1)


@dataclass(frozen=True)
class GroupFingerprint:
    order: int
    exponent: int
    abelianization: tuple
    order_histogram: tuple
    class_sizes: tuple
    center_order: int
    derived_order: int
    involutions: int
    class_profile: tuple = field(default=())

    @property
    def abelian(self):
        return self.center_order == self.order

    def to_json(self):
        data = asdict(self)
        data["abelian"] = self.abelian
        return data


def fingerprint(G, cap=FINGERPRINT_CAP):
    """Isomorphism-invariant summary of a finite group.

    ``class_profile`` refines the class sizes by the element order and the
    order of the square of a representative of each class.
    """
    if G.order > cap:
        raise CapExceeded(f"group order {G.order} exceeds fingerprint cap {cap}")
    orders = G.orders
    classes = conjugacy_classes(G)
    sizes = np.bincount(classes)
    derived = derived_subgroup(G)
    squares = G.mul_many(G.elements, G.elements)
    reps = {}
    for x in range(G.order):
        reps.setdefault(int(classes[x]), x)
    profile = Counter((int(sizes[c]), int(orders[x]), int(orders[squares[x]]))
                      for c, x in reps.items())
    exp = int(np.lcm.reduce(orders))
    return GroupFingerprint(
        order=G.order,
        exponent=exp,
        abelianization=abelianization_invariants(G, derived),
        order_histogram=tuple(sorted(Counter(orders.tolist()).items())),
        class_sizes=tuple(sorted(Counter(sizes.tolist()).items())),
        center_order=int(center(G).size),
        derived_order=int(derived.size),
        involutions=int((orders == 2).sum()),
        class_profile=tuple(sorted(profile.items())),
    )


def _element_invariants(G):
    classes = conjugacy_classes(G)
    sizes = np.bincount(classes)
    orders = G.orders
    squares = G.mul_many(G.elements, G.elements)
    return [(int(orders[x]), int(sizes[classes[x]]), int(orders[squares[x]]))
            for x in range(G.order)], classes


def find_isomorphism(G, H, cap=EXACT_CAP):
    """An isomorphism ``G -> H`` as an index array, or ``None`` if none exists.

    Backtracks over images of a generating set, pruning by element order,
    class size and order of the square, and checking each partial map for
    consistency on the subgroup generated so far.  The first generator's
    image is fixed up to conjugacy.
    """
    if max(G.order, H.order) > cap:
        raise CapExceeded(f"exact isomorphism search is capped at order {cap}")
    if G.order != H.order:
        return None
    inv_g, _ = _element_invariants(G)
    inv_h, classes_h = _element_invariants(H)
    if sorted(inv_g) != sorted(inv_h):
        return None
    freq = Counter(inv_h)
    candidates = sorted(range(G.order), key=lambda x: (freq[inv_g[x]], -inv_g[x][0], x))
    gens = greedy_generators(G, candidates)
    by_inv = {}
    for y in range(H.order):
        by_inv.setdefault(inv_h[y], []).append(y)
    N = G.order
    TG = G.table
    TH = H.table

    def consistent(chosen):
        phi = np.full(N, -1)
        used = np.zeros(N, dtype=bool)
        phi[G.identity] = H.identity
        used[H.identity] = True
        queue = [G.identity]
        while queue:
            x = queue.pop()
            for g, h in chosen:
                y = TG[x, g]
                t = TH[phi[x], h]
                if phi[y] < 0:
                    if used[t]:
                        return None
                    phi[y] = t
                    used[t] = True
                    queue.append(y)
                elif phi[y] != t:
                    return None
        return phi

    def search(k, chosen):
        if k == len(gens):
            phi = consistent(chosen)
            return phi if phi is not None and (phi >= 0).all() else None
        pool = by_inv[inv_g[gens[k]]]
        if k == 0:
            seen, reps = set(), []
            for y in pool:
                if classes_h[y] not in seen:
                    seen.add(classes_h[y])
                    reps.append(y)
            pool = reps
        for y in pool:
            trial = chosen + [(gens[k], y)]
            if consistent(trial) is None:
                continue
            found = search(k + 1, trial)
            if found is not None:
                return found
        return None

    return search(0, [])


def iso_bruteforce(G, H, cap=EXACT_CAP):
    """Exact isomorphism decision for groups of order at most ``cap``."""
    return find_isomorphism(G, H, cap) is not None


def is_isomorphism(G, H, phi):
    """Check a candidate map against the full multiplication tables."""
    phi = np.asarray(phi)
    if sorted(phi.tolist()) != list(range(H.order)):
        return False
    return bool((phi[G.table] == H.table[np.ix_(phi, phi)]).all())


@dataclass
class ModulusResult:
    modulus: int
    verdict: str
    fingerprints: tuple
    method: str

    @property
    def distinguished(self):
        return self.verdict == "different"

    def to_json(self):
        return {"modulus": self.modulus, "verdict": self.verdict, "method": self.method,
                "fingerprints": [f.to_json() if f else None for f in self.fingerprints]}


@dataclass
class GenusReport:
    pair: tuple
    results: list

    @property
    def distinguished_at(self):
        for r in self.results:
            if r.distinguished:
                return r.modulus
        return None

    @property
    def verdict(self):
        m = self.distinguished_at
        if m is not None:
            return f"distinguished at m={m}"
        return "not distinguished within tested moduli"

    def to_json(self):
        return {"schema": "affcox.genus/1", "pair": list(self.pair), "verdict": self.verdict,
                "distinguished_at": self.distinguished_at,
                "results": [r.to_json() for r in self.results]}


def compare_finite_groups(G, H, exact_cap=EXACT_CAP, cap=FINGERPRINT_CAP):
    """Return ``(verdict, method, fp_G, fp_H)``; verdict is "different", "isomorphic" or "tie"."""
    if G.order != H.order:
        return "different", "order", None, None
    fg, fh = fingerprint(G, cap), fingerprint(H, cap)
    if fg != fh:
        return "different", "fingerprint", fg, fh
    if G.order <= exact_cap:
        if iso_bruteforce(G, H, exact_cap):
            return "isomorphic", "exact", fg, fh
        return "different", "exact", fg, fh
    return "tie", "fingerprint", fg, fh


def spacegroup_genus_compare(g1, g2, mods, stop_at_first=False, exact_cap=EXACT_CAP):
    """Compare the quotients ``g/mT`` of two crystallographic groups for each modulus.

    A difference at any modulus proves the groups lie in different genera;
    agreement only holds within the tested moduli.
    """
    mods = list(mods)
    if not mods:
        raise PreconditionError("need at least one modulus")
    results = []
    for m in mods:
        q1, q2 = make_quotient(g1, m), make_quotient(g2, m)
        verdict, method, f1, f2 = compare_finite_groups(q1, q2, exact_cap)
        if verdict == "tie":
            verdict = "undistinguished (fingerprint tie)"
        if method == "order":
            f1 = f2 = None
        results.append(ModulusResult(m, verdict, (f1, f2), method))
        if stop_at_first and verdict == "different":
            break
    return GenusReport((g1.family, g2.family), results)


# -- Z[W0]-module fingerprints ----------------------------------------------

@dataclass(frozen=True)
class ModuleFingerprint:
    p: int
    k: int
    per_element: tuple
    orbit_histogram: tuple

    def to_json(self):
        return asdict(self)


def _all_vectors(q, n):
    return np.array(list(product(range(q), repeat=n)), dtype=np.int64).reshape(-1, n)


def _encode(V, q):
    n = V.shape[1]
    radix = q ** np.arange(n - 1, -1, -1)
    return V @ radix


def module_fingerprint(lattice, p, k, cap=FINGERPRINT_CAP):
    """Fixed-point counts, Smith forms of ``M - I`` and orbit sizes on ``L / p^k L``."""
    q = p ** k
    n = lattice.rank
    if q ** n > cap:
        raise CapExceeded(f"|L/p^kL| = {q ** n} exceeds cap {cap}")
    mats = lattice.local_matrices()
    V = _all_vectors(q, n)
    per = []
    I = identity(n)
    for M in mats:
        A = np.array(M, dtype=np.int64)
        fixed = int((((V @ A.T) - V) % q == 0).all(axis=1).sum())
        snf = tuple(int(np.gcd(d, q)) if d else q for d in smith_invariants(mat_sub(M, I)))
        per.append((fixed, snf))
    gen_idx = lattice.point_group.generator_indices
    perms = [_encode((V @ np.array(mats[i], dtype=np.int64).T) % q, q) for i in gen_idx]
    labels = _orbits(V.shape[0], perms)
    hist = tuple(sorted(Counter(np.bincount(labels).tolist()).items()))
    return ModuleFingerprint(p, k, tuple(per), hist)


def find_module_isomorphism(l1, l2, p, k):
    """An equivariant isomorphism ``L1/p^kL1 -> L2/p^kL2`` as a matrix mod p^k, or None.

    Module isomorphisms are linear, so the search runs over matrices column by
    column and checks ``F A_g = B_g F`` for each generator as soon as the
    columns it involves are fixed.
    """
    q = p ** k
    n = l1.rank
    gen_idx = l1.point_group.generator_indices
    m1, m2 = l1.local_matrices(), l2.local_matrices()
    A = [np.array(m1[i], dtype=np.int64) % q for i in gen_idx]
    B = [np.array(m2[i], dtype=np.int64) % q for i in gen_idx]
    vectors = _all_vectors(q, n)
    F = np.zeros((n, n), dtype=np.int64)
    # constraint (g, j) becomes checkable once every column in its support is chosen
    ready = {}
    for gi, Ag in enumerate(A):
        for j in range(n):
            support = set(np.flatnonzero(Ag[:, j]).tolist()) | {j}
            ready.setdefault(max(support), []).append((gi, j))

    def check(col):
        for gi, j in ready.get(col, []):
            lhs = (F @ A[gi][:, j]) % q
            rhs = (B[gi] @ F[:, j]) % q
            if not (lhs == rhs).all():
                return False
        return True

    def invertible():
        d = int(round(np.linalg.det(F.astype(float)))) if n <= 3 else None
        if d is None:
            from .intmat import det
            d = det(tuple(tuple(int(x) for x in row) for row in F))
        return d % p != 0

    def search(col):
        if col == n:
            return F.copy() if invertible() else None
        for v in vectors:
            F[:, col] = v
            if check(col):
                found = search(col + 1)
                if found is not None:
                    return found
        F[:, col] = 0
        return None

    return search(0)


@dataclass
class ModuleGenusReport:
    entries: list

    @property
    def same_within_tested(self):
        return all(e["verdict"] in ("equal", "isomorphic") for e in self.entries)

    def to_json(self):
        return {"schema": "affcox.module-genus/1",
                "same_within_tested": self.same_within_tested, "entries": self.entries}


def _same_point_group(l1, l2):
    G1, G2 = l1.point_group, l2.point_group
    return G1 is G2 or (G1.order == G2.order and G1.elements == G2.elements)


def module_genus_compare(l1, l2, primes, k_max, exact_cap=MODULE_EXACT_CAP):
    """Compare ``L1/p^kL1`` and ``L2/p^kL2`` as modules for each prime and ``k <= k_max``."""
    if not primes:
        raise PreconditionError("need at least one prime")
    if not _same_point_group(l1, l2):
        raise PreconditionError("lattices carry different point groups")
    if l1.rank != l2.rank:
        raise PreconditionError("lattices have different ranks")
    entries = []
    for p in primes:
        for k in range(1, k_max + 1):
            f1, f2 = module_fingerprint(l1, p, k), module_fingerprint(l2, p, k)
            if f1 != f2:
                verdict, method = "different", "fingerprint"
            elif (p ** k) ** l1.rank <= exact_cap:
                found = find_module_isomorphism(l1, l2, p, k)
                verdict, method = ("isomorphic", "exact") if found is not None else ("different", "exact")
            else:
                verdict, method = "equal", "fingerprint"
            entries.append({"p": p, "k": k, "verdict": verdict, "method": method,
                            "fingerprints": [f1.to_json(), f2.to_json()]})
    return ModuleGenusReport(entries)


def eval_formula_on_quotient(q, formula):
    """Solution set of a one-variable formula, quantifiers ranging over the whole quotient."""
    if isinstance(formula, str):
        formula = parse_formula(formula)
    return solution_set(formula, q)
