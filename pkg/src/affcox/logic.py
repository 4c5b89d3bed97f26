"""First-order formulas in the language of groups: parsing and evaluation on finite groups.

Grammar (whitespace-insensitive)::

    term    := factor (('*' | '·') factor)*
    factor  := primary ('^' ['-'] INT)*
    primary := '1' | IDENT | '(' term ')' | '[' term ',' term ']'
    formula := disj ('->' formula)?
    disj    := conj ('|' conj)*
    conj    := unary ('&' unary)*
    unary   := '!' unary | ('A' | 'E') IDENT '.' formula | '(' formula ')'
             | term ('=' | '!=') term

``[s, t]`` is the commutator ``s^-1 t^-1 s t``.  Quantifier bodies extend as
far to the right as possible.
"""
from dataclasses import dataclass
import re

import numpy as np

from .exceptions import CapExceeded, ParseError, PreconditionError

EVAL_ORDER_CAP = 10**4
_VECTOR_LIMIT = 2 * 10**6


# -- AST ---------------------------------------------------------------------

@dataclass(frozen=True)
class One:
    def __str__(self):
        return "1"


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Mul:
    left: object
    right: object

    def __str__(self):
        return f"{self.left}*{self.right}"


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int

    def __str__(self):
        return f"({self.base})^{self.exponent}"


@dataclass(frozen=True)
class Comm:
    left: object
    right: object

    def __str__(self):
        return f"[{self.left},{self.right}]"


@dataclass(frozen=True)
class Eq:
    left: object
    right: object

    def __str__(self):
        return f"{self.left}={self.right}"


@dataclass(frozen=True)
class Not:
    body: object

    def __str__(self):
        return f"!{self.body}"


@dataclass(frozen=True)
class And:
    left: object
    right: object

    def __str__(self):
        return f"({self.left}&{self.right})"


@dataclass(frozen=True)
class Or:
    left: object
    right: object

    def __str__(self):
        return f"({self.left}|{self.right})"


@dataclass(frozen=True)
class Implies:
    left: object
    right: object

    def __str__(self):
        return f"({self.left}->{self.right})"


@dataclass(frozen=True)
class Forall:
    var: str
    body: object

    def __str__(self):
        return f"A {self.var}. {self.body}"


@dataclass(frozen=True)
class Exists:
    var: str
    body: object

    def __str__(self):
        return f"E {self.var}. {self.body}"


def Inv(t):
    return Pow(t, -1)


def free_vars(node):
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, One):
        return set()
    if isinstance(node, (Forall, Exists)):
        return free_vars(node.body) - {node.var}
    if isinstance(node, (Pow, Not)):
        return free_vars(node.base if isinstance(node, Pow) else node.body)
    return free_vars(node.left) | free_vars(node.right)


def quantifier_depth(node):
    if isinstance(node, (Forall, Exists)):
        return 1 + quantifier_depth(node.body)
    if isinstance(node, Not):
        return quantifier_depth(node.body)
    if isinstance(node, (And, Or, Implies)):
        return max(quantifier_depth(node.left), quantifier_depth(node.right))
    return 0


# -- parser ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(->|!=|[A-Za-z_][A-Za-z0-9_]*|\d+|[()\[\],.*·^=!&|\-∀∃])")


def _tokenize(text):
    tokens, pos = [], 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        tok = m.group(1)
        tokens.append((tok, m.start(1)))
        pos = m.end()
    tokens.append(("<end>", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self, k=0):
        return self.tokens[min(self.i + k, len(self.tokens) - 1)][0]

    def pos(self):
        return self.tokens[self.i][1]

    def take(self, expected=None):
        tok, pos = self.tokens[self.i]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}", pos)
        self.i += 1
        return tok

    def ident(self):
        tok, pos = self.tokens[self.i]
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            raise ParseError(f"expected a variable, found {tok!r}", pos)
        self.i += 1
        return tok

    # formulas
    def formula(self):
        left = self.disj()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.formula())
        return left

    def disj(self):
        node = self.conj()
        while self.peek() == "|":
            self.take()
            node = Or(node, self.conj())
        return node

    def conj(self):
        node = self.unary()
        while self.peek() == "&":
            self.take()
            node = And(node, self.unary())
        return node

    def _is_quantifier(self):
        return self.peek() in ("A", "E", "∀", "∃") and self.peek(2) == "." and \
            re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", self.peek(1) or "")

    def unary(self):
        if self.peek() == "!":
            self.take()
            return Not(self.unary())
        if self._is_quantifier():
            q = self.take()
            var = self.ident()
            self.take(".")
            body = self.formula()
            return Forall(var, body) if q in ("A", "∀") else Exists(var, body)
        start = self.i
        try:
            return self.atom()
        except ParseError as first:
            if self.tokens[start][0] != "(":
                raise
            self.i = start
            self.take("(")
            try:
                node = self.formula()
                self.take(")")
            except ParseError:
                raise first from None
            return node

    def atom(self):
        left = self.term()
        op = self.peek()
        if op not in ("=", "!="):
            raise ParseError(f"expected '=' or '!=', found {op!r}", self.pos())
        self.take()
        right = self.term()
        return Eq(left, right) if op == "=" else Not(Eq(left, right))

    # terms
    def term(self):
        node = self.factor()
        while self.peek() in ("*", "·"):
            self.take()
            node = Mul(node, self.factor())
        return node

    def factor(self):
        node = self.primary()
        while self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() == "-":
                self.take()
                sign = -1
            tok, pos = self.tokens[self.i]
            if not tok.isdigit():
                raise ParseError(f"expected an integer exponent, found {tok!r}", pos)
            self.take()
            node = Pow(node, sign * int(tok))
        return node

    def primary(self):
        tok, pos = self.tokens[self.i]
        if tok == "1":
            self.take()
            return One()
        if tok == "(":
            self.take()
            node = self.term()
            self.take(")")
            return node
        if tok == "[":
            self.take()
            left = self.term()
            self.take(",")
            right = self.term()
            self.take("]")
            return Comm(left, right)
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            self.take()
            return Var(tok)
        raise ParseError(f"unexpected token {tok!r}", pos)


def parse_formula(text):
    """Parse a formula; raises ``ParseError`` with the offending position."""
    p = _Parser(text)
    node = p.formula()
    if p.peek() != "<end>":
        raise ParseError(f"trailing input {p.peek()!r}", p.pos())
    return node


def parse_term(text):
    p = _Parser(text)
    node = p.term()
    if p.peek() != "<end>":
        raise ParseError(f"trailing input {p.peek()!r}", p.pos())
    return node


# -- evaluation --------------------------------------------------------------

class _Evaluator:
    """Vectorised evaluation: each variable owns one array axis."""

    def __init__(self, G, ndim):
        self.G = G
        self.ndim = max(ndim, 1)
        self.unit = np.full((1,) * self.ndim, G.identity, dtype=np.int64)

    def mul(self, X, Y):
        X, Y = np.broadcast_arrays(X, Y)
        return np.asarray(self.G.mul_many(X, Y), dtype=np.int64)

    def term(self, t, env):
        if isinstance(t, One):
            return self.unit
        if isinstance(t, Var):
            if t.name not in env:
                raise PreconditionError(f"unbound variable {t.name!r}")
            return env[t.name]
        if isinstance(t, Mul):
            return self.mul(self.term(t.left, env), self.term(t.right, env))
        if isinstance(t, Comm):
            s, u = self.term(t.left, env), self.term(t.right, env)
            inv = self.G.inverses
            return self.mul(self.mul(inv[s], inv[u]), self.mul(s, u))
        if isinstance(t, Pow):
            X = self.term(t.base, env)
            k = t.exponent
            if k < 0:
                X, k = self.G.inverses[X], -k
            result = np.broadcast_to(self.unit, X.shape)
            while k:
                if k & 1:
                    result = self.mul(result, X)
                X = self.mul(X, X)
                k >>= 1
            return result
        raise TypeError(f"not a term: {t!r}")

    def formula(self, f, env, depth):
        if isinstance(f, Eq):
            return self.term(f.left, env) == self.term(f.right, env)
        if isinstance(f, Not):
            return ~self.formula(f.body, env, depth)
        if isinstance(f, And):
            return self.formula(f.left, env, depth) & self.formula(f.right, env, depth)
        if isinstance(f, Or):
            return self.formula(f.left, env, depth) | self.formula(f.right, env, depth)
        if isinstance(f, Implies):
            return ~self.formula(f.left, env, depth) | self.formula(f.right, env, depth)
        if isinstance(f, (Forall, Exists)):
            return self.quantifier(f, env, depth)
        raise TypeError(f"not a formula: {f!r}")

    def quantifier(self, f, env, depth):
        N = self.G.order
        reduce = np.all if isinstance(f, Forall) else np.any
        current = max((v.size for v in env.values()), default=1)
        if current * N <= _VECTOR_LIMIT:
            shape = [1] * self.ndim
            shape[depth] = N
            inner = dict(env)
            inner[f.var] = np.arange(N, dtype=np.int64).reshape(shape)
            res = self.formula(f.body, inner, depth + 1)
            res = np.broadcast_to(res, np.broadcast_shapes(res.shape, tuple(shape)))
            return reduce(res, axis=depth, keepdims=True)
        acc = None
        for v in range(N):
            inner = dict(env)
            inner[f.var] = np.full((1,) * self.ndim, v, dtype=np.int64)
            res = self.formula(f.body, inner, depth + 1)
            if acc is None:
                acc = res
            elif isinstance(f, Forall):
                acc = acc & res
            else:
                acc = acc | res
        return acc


def _check_structure(G):
    if G.order > EVAL_ORDER_CAP:
        raise CapExceeded(f"structure of order {G.order} exceeds the evaluation cap")


def evaluate(formula, G, assignment=None):
    """Truth value of ``formula`` in ``G`` under ``assignment`` (variable -> element index)."""
    if isinstance(formula, str):
        formula = parse_formula(formula)
    _check_structure(G)
    assignment = dict(assignment or {})
    missing = free_vars(formula) - set(assignment)
    if missing:
        raise PreconditionError(f"unbound variable(s): {', '.join(sorted(missing))}")
    ev = _Evaluator(G, quantifier_depth(formula))
    env = {k: np.full((1,) * ev.ndim, int(v), dtype=np.int64) for k, v in assignment.items()}
    return bool(np.all(ev.formula(formula, env, 0)))


def solution_set(formula, G, var=None, assignment=None):
    """Elements ``x`` with ``G |= formula(x)``; one free variable may remain unassigned."""
    if isinstance(formula, str):
        formula = parse_formula(formula)
    _check_structure(G)
    assignment = dict(assignment or {})
    fv = free_vars(formula) - set(assignment)
    if var is None:
        if len(fv) != 1:
            raise PreconditionError(f"expected exactly one free variable, found {sorted(fv)}")
        var = next(iter(fv))
    elif fv - {var}:
        raise PreconditionError(f"unexpected free variables {sorted(fv - {var})}")
    ev = _Evaluator(G, 1 + quantifier_depth(formula))
    shape = [1] * ev.ndim
    shape[0] = G.order
    env = {k: np.full((1,) * ev.ndim, int(v), dtype=np.int64) for k, v in assignment.items()}
    env[var] = np.arange(G.order, dtype=np.int64).reshape(shape)
    res = ev.formula(formula, env, 1)
    res = np.broadcast_to(res, np.broadcast_shapes(res.shape, tuple(shape)))
    return [int(i) for i in np.flatnonzero(res.reshape(G.order, -1).all(axis=1))]
