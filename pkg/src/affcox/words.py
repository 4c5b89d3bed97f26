"""Words in the universal Coxeter group W_n, the free product of n copies of Z/2."""
import math
import re
from dataclasses import dataclass

from .exceptions import ParseError, PreconditionError

INFINITY = math.inf


@dataclass(frozen=True)
class ReducedWord:
    """Free-product normal form: letters in ``1..rank``, no letter repeated adjacently."""

    rank: int
    letters: tuple = ()

    def __post_init__(self):
        letters = tuple(int(x) for x in self.letters)
        object.__setattr__(self, "letters", letters)
        if self.rank < 1:
            raise PreconditionError("rank must be positive")
        for x in letters:
            if not 1 <= x <= self.rank:
                raise PreconditionError(f"letter e{x} outside rank {self.rank}")
        for x, y in zip(letters, letters[1:]):
            if x == y:
                raise PreconditionError("adjacent letters must differ in a reduced word")

    @classmethod
    def generator(cls, rank, i):
        return cls(rank, (i,))

    @classmethod
    def identity(cls, rank):
        return cls(rank, ())

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other):
        return word_mul(self, other)

    def inverse(self):
        return ReducedWord(self.rank, self.letters[::-1])

    def is_identity(self):
        return not self.letters

    def __str__(self):
        return " ".join(f"e{x}" for x in self.letters) if self.letters else "1"


def reduce_letters(letters):
    """Cancel equal adjacent letters until none remain (a stack pass suffices)."""
    out = []
    for x in letters:
        if out and out[-1] == x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def word_mul(u, v):
    if u.rank != v.rank:
        raise PreconditionError(f"rank mismatch: {u.rank} vs {v.rank}")
    a, b = u.letters, v.letters
    k = 0
    while k < min(len(a), len(b)) and a[len(a) - 1 - k] == b[k]:
        k += 1
    return ReducedWord(u.rank, a[:len(a) - k] + b[k:])


def word_product(*words):
    out = words[0]
    for w in words[1:]:
        out = word_mul(out, w)
    return out


def word_from_letters(rank, letters):
    return ReducedWord(rank, reduce_letters(letters))


def parse_word(text, rank=None):
    """Parse ``"e1 e2 e1"`` (or ``"1"`` for the identity), reducing as it goes."""
    tokens = text.split()
    letters = []
    pos = 0
    for tok in tokens:
        pos = text.index(tok, pos)
        if tok == "1" and len(tokens) == 1:
            break
        m = re.fullmatch(r"e(\d+)", tok)
        if not m or int(m.group(1)) < 1:
            raise ParseError(f"bad generator name {tok!r}", pos)
        letters.append(int(m.group(1)))
        pos += len(tok)
    if rank is None:
        rank = max(letters, default=1)
    elif letters and max(letters) > rank:
        raise ParseError(f"generator e{max(letters)} exceeds rank {rank}")
    return word_from_letters(rank, letters)


def cyclic_reduce(w):
    """Return ``(core, c)`` with ``core`` cyclically reduced and ``c^-1 w c = core``."""
    letters = w.letters
    i, j = 0, len(letters) - 1
    while j - i >= 1 and letters[i] == letters[j]:
        i += 1
        j -= 1
    core = ReducedWord(w.rank, letters[i:j + 1])
    conj = ReducedWord(w.rank, letters[:i])
    return core, conj


def element_order(w):
    core, _ = cyclic_reduce(w)
    return {0: 1, 1: 2}.get(len(core), INFINITY)


@dataclass(frozen=True)
class ConjugacyWitness:
    target: int
    conjugator: ReducedWord

    def verify(self, w):
        c = self.conjugator
        return word_product(c.inverse(), w, c).letters == (self.target,)

    def to_json(self):
        return {"target": self.target, "conjugator": str(self.conjugator)}


def involution_witness(w):
    """Conjugator taking an involution to a single generator, verified by multiplication."""
    core, c = cyclic_reduce(w)
    if len(core) != 1:
        raise PreconditionError(f"{w} is not an involution")
    witness = ConjugacyWitness(core.letters[0], c)
    if not witness.verify(w):
        raise AssertionError("conjugacy witness failed to verify")
    return witness


def parity(w):
    return len(w.letters) % 2


def all_words(rank, max_len):
    """Every reduced word of length at most ``max_len``, shortest first."""
    layer = [()]
    yield ReducedWord(rank, ())
    for _ in range(max_len):
        layer = [p + (x,) for p in layer for x in range(1, rank + 1) if not p or p[-1] != x]
        for p in layer:
            yield ReducedWord(rank, p)


def generator_conjugates(rank, max_len):
    """Words of length at most ``max_len`` of the form ``u e_i u^-1``."""
    out = set()
    for u in all_words(rank, (max_len - 1) // 2):
        for i in range(1, rank + 1):
            w = word_product(u, ReducedWord(rank, (i,)), u.inverse())
            if len(w) <= max_len:
                out.add(w)
    return out


def involutions(rank, max_len):
    """Words ``w`` of length at most ``max_len`` with ``w^2 = 1`` and ``w != 1``."""
    return {w for w in all_words(rank, max_len)
            if not w.is_identity() and word_mul(w, w).is_identity()}
