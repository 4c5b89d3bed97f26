"""Exact integer matrix helpers.

Matrices are tuples of row tuples of Python ints; vectors are tuples.  Lattices
are spanned by the *columns* of a basis matrix.
"""
from fractions import Fraction
from math import gcd

from .exceptions import PreconditionError


def identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def as_matrix(rows):
    return tuple(tuple(int(x) for x in row) for row in rows)


def transpose(A):
    return tuple(zip(*A)) if A else ()


def matmul(A, B):
    Bt = transpose(B)
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def matvec(A, v):
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v):
    return tuple(c * a for a in v)


def mat_sub(A, B):
    return tuple(vec_sub(r, s) for r, s in zip(A, B))


def scale(c, A):
    return tuple(vec_scale(c, row) for row in A)


def columns(A):
    return transpose(A)


def from_columns(cols):
    return transpose(tuple(tuple(c) for c in cols))


def det(A):
    """Determinant by fraction-free Bareiss elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(row) for row in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def inverse_rational(A):
    """Inverse over the rationals as a tuple of Fraction rows."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return tuple(tuple(row[n:]) for row in M)


def integral_inverse(A):
    inv = inverse_rational(A)
    if any(x.denominator != 1 for row in inv for x in row):
        raise PreconditionError("matrix is not invertible over the integers")
    return tuple(tuple(int(x) for x in row) for row in inv)


def conjugate_into_basis(M, B):
    """Return B^-1 M B, which must be integral when M preserves the lattice B Z^n."""
    Binv = inverse_rational(B)
    prod = matmul(Binv, matmul(M, B))
    if any(Fraction(x).denominator != 1 for row in prod for x in row):
        raise PreconditionError("matrix does not preserve the lattice")
    return tuple(tuple(int(x) for x in row) for row in prod)


def _eliminate_pivot(vectors, c):
    """gcd-reduce coordinate ``c`` across ``vectors``; return (pivot or None, rest)."""
    vecs = [list(v) for v in vectors if any(v)]
    while True:
        nz = [v for v in vecs if v[c] != 0]
        if len(nz) <= 1:
            break
        nz.sort(key=lambda v: abs(v[c]))
        piv = nz[0]
        for v in nz[1:]:
            q = v[c] // piv[c]
            for i in range(len(v)):
                v[i] -= q * piv[i]
        vecs = [v for v in vecs if any(v)]
    nz = [v for v in vecs if v[c] != 0]
    if not nz:
        return None, vecs
    piv = nz[0]
    if piv[c] < 0:
        piv[:] = [-x for x in piv]
    rest = [v for v in vecs if v is not piv]
    return piv, rest


def hnf_basis(vectors, n):
    """Upper-triangular column HNF of the lattice spanned by ``vectors`` in Z^n.

    Column ``j`` is supported on coordinates ``0..j``; diagonal entries are
    positive and entries right of a diagonal entry are reduced modulo it.
    Raises if the vectors do not span a full-rank sublattice.
    """
    active = [tuple(int(x) for x in v) for v in vectors]
    basis = [None] * n
    for c in range(n - 1, -1, -1):
        piv, active = _eliminate_pivot(active, c)
        if piv is None:
            raise PreconditionError("vectors do not span a full-rank lattice")
        basis[c] = piv
    for j in range(n):
        for i in range(j - 1, -1, -1):
            q = basis[j][i] // basis[i][i]
            if q:
                basis[j] = [x - q * y for x, y in zip(basis[j], basis[i])]
    return from_columns(basis)


def solve_upper(B, v):
    """Coordinates of ``v`` in the upper-triangular basis ``B``, or None if not integral."""
    n = len(B)
    v = list(v)
    coeffs = [0] * n
    for j in range(n - 1, -1, -1):
        d = B[j][j]
        if v[j] % d:
            return None
        c = v[j] // d
        coeffs[j] = c
        if c:
            for i in range(j + 1):
                v[i] -= c * B[i][j]
    return tuple(coeffs)


def smith_invariants(A):
    """Diagonal of the Smith normal form of an integer matrix (length min(rows, cols)).

    Entries are non-negative and each divides the next; zeros come last.
    """
    M = [list(row) for row in A]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    diag = []
    for t in range(min(rows, cols)):
        nz = [(abs(M[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if M[i][j]]
        if not nz:
            diag.extend([0] * (min(rows, cols) - t))
            break
        _, pi, pj = min(nz)
        M[t], M[pi] = M[pi], M[t]
        for row in M:
            row[t], row[pj] = row[pj], row[t]
        while True:
            done = True
            for i in range(t + 1, rows):
                if M[i][t]:
                    q = M[i][t] // M[t][t]
                    M[i] = [a - q * b for a, b in zip(M[i], M[t])]
                    if M[i][t]:
                        M[t], M[i] = M[i], M[t]
                        done = False
            for j in range(t + 1, cols):
                if M[t][j]:
                    q = M[t][j] // M[t][t]
                    for row in M:
                        row[j] -= q * row[t]
                    if M[t][j]:
                        for row in M:
                            row[t], row[j] = row[j], row[t]
                        done = False
            if not done:
                continue
            # enforce divisibility of the remaining block by the pivot
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if M[i][j] % M[t][t]), None)
            if bad is None:
                break
            M[t] = [a + b for a, b in zip(M[t], M[bad[0]])]
        diag.append(abs(M[t][t]))
    return diag


def content(A):
    """gcd of all entries."""
    g = 0
    for row in A:
        for x in row:
            g = gcd(g, x)
    return g


def mat_pow(A, k):
    n = len(A)
    result = identity(n)
    base = A
    while k:
        if k & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        k >>= 1
    return result
