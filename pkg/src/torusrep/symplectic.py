"""Sp(2g, Z), its generators, and the two commuting actions on theta matrices.

The modular action is ``A . theta = theta A^-1`` (right multiplication by the
inverse, so that it is a left action); a change of lattice is left
multiplication by ``h`` in GL(n, Z).
"""
from __future__ import annotations

import json
import random
from fractions import Fraction
from typing import Iterable, Sequence

from .angles import Angle, ThetaMatrix
from .errors import DimensionError
from .lattice import det, identity, mat_mul, transpose

J0 = ((0, 1), (-1, 0))


def standard_J(g: int) -> list[list[int]]:
    """Block diagonal matrix with g copies of [[0, 1], [-1, 0]]."""
    if g < 1:
        raise DimensionError("genus must be at least 1")
    j = [[0] * (2 * g) for _ in range(2 * g)]
    for i in range(g):
        j[2 * i][2 * i + 1] = 1
        j[2 * i + 1][2 * i] = -1
    return j


def is_symplectic(m: Sequence[Sequence[int]]) -> bool:
    size = len(m)
    if any(len(r) != size for r in m):
        raise DimensionError("symplectic test needs a square matrix")
    if size == 0 or size % 2:
        raise DimensionError(f"symplectic test needs even dimension, got {size}")
    j = standard_J(size // 2)
    return mat_mul(mat_mul(m, j), transpose(m)) == j


class SymplecticMatrix:
    """Integer 2g x 2g matrix with A J A^T = J (checked at construction)."""

    __slots__ = ("entries", "g")

    def __init__(self, entries: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(x) for x in r) for r in entries)
        if not is_symplectic(rows):
            raise ValueError(f"not symplectic: {rows}")
        self.entries = rows
        self.g = len(rows) // 2

    @classmethod
    def identity(cls, g: int) -> "SymplecticMatrix":
        return cls(identity(2 * g))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def __matmul__(self, other: "SymplecticMatrix") -> "SymplecticMatrix":
        if not isinstance(other, SymplecticMatrix):
            return NotImplemented
        if other.g != self.g:
            raise DimensionError("genus mismatch")
        return SymplecticMatrix(mat_mul(self.entries, other.entries))

    def inverse(self) -> "SymplecticMatrix":
        # A^-1 = J^-1 A^T J, with J^-1 = -J
        j = standard_J(self.g)
        jinv = [[-x for x in r] for r in j]
        return SymplecticMatrix(mat_mul(mat_mul(jinv, transpose(self.entries)), j))

    def __eq__(self, other):
        return isinstance(other, SymplecticMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"SymplecticMatrix({self.tolist()})"

    def to_json(self) -> dict:
        return {"g": self.g, "entries": self.tolist()}

    @classmethod
    def from_json(cls, obj) -> "SymplecticMatrix":
        m = cls(obj["entries"])
        if "g" in obj and obj["g"] != m.g:
            raise DimensionError(f"declared g={obj['g']} but matrix has genus {m.g}")
        return m


def _transvection(v: Sequence[int]) -> list[list[int]]:
    # I + v v^T J is symplectic for any v, since v^T J v = 0
    size = len(v)
    j = standard_J(size // 2)
    vvt = [[a * b for b in v] for a in v]
    t = mat_mul(vvt, j)
    return [[int(i == k) + t[i][k] for k in range(size)] for i in range(size)]


def symplectic_generators(g: int) -> list[SymplecticMatrix]:
    """Fixed generating list used by orbit searches.

    For each handle i the two SL(2, Z) transvections [[1,1],[0,1]] and
    [[1,0],[1,1]] placed in block i, then for each adjacent pair of handles
    the transvection along alpha_i - alpha_{i+1}. Together these are the
    images of the Humphries twists, so they generate all of Sp(2g, Z).
    """
    if g < 1:
        raise DimensionError("genus must be at least 1")
    gens = []
    for i in range(g):
        for block in ([[1, 1], [0, 1]], [[1, 0], [1, 1]]):
            m = identity(2 * g)
            for a in range(2):
                for b in range(2):
                    m[2 * i + a][2 * i + b] = block[a][b]
            gens.append(SymplecticMatrix(m))
    for i in range(g - 1):
        v = [0] * (2 * g)
        v[2 * i] = 1
        v[2 * i + 2] = -1
        gens.append(SymplecticMatrix(_transvection(v)))
    return gens


class GeneratorWord(tuple):
    """Word in the generators: letters are signed 1-based generator indices.

    ``+i`` is generator ``i - 1`` and ``-i`` its inverse. Letters are applied
    left to right, so the word (a, b) acts as ``b . (a . theta)``.
    """

    def __new__(cls, letters: Iterable[int] = ()):
        letters = tuple(int(x) for x in letters)
        if any(x == 0 for x in letters):
            raise ValueError("generator letters are signed and 1-based; 0 is invalid")
        return super().__new__(cls, letters)

    def inverse(self) -> "GeneratorWord":
        return GeneratorWord(-x for x in reversed(self))

    def reduced(self) -> "GeneratorWord":
        out = []
        for x in self:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        return GeneratorWord(out)

    def __add__(self, other):
        return GeneratorWord(tuple(self) + tuple(other))

    def __repr__(self):
        return f"GeneratorWord({list(self)})"


def word_matrix(word: Sequence[int], g: int, gens: Sequence[SymplecticMatrix] | None = None) -> SymplecticMatrix:
    """The single matrix M with ``act(theta, M)`` equal to applying the word letter by letter."""
    gens = gens or symplectic_generators(g)
    m = SymplecticMatrix.identity(g)
    for x in word:
        if abs(x) > len(gens):
            raise IndexError(f"letter {x} out of range for {len(gens)} generators")
        a = gens[abs(x) - 1] if x > 0 else gens[abs(x) - 1].inverse()
        m = a @ m
    return m


def random_word(g: int, length: int, rng: random.Random) -> GeneratorWord:
    count = len(symplectic_generators(g))
    return GeneratorWord(rng.choice((1, -1)) * rng.randint(1, count) for _ in range(length))


class LatticeChange:
    """Unimodular n x n integer matrix h, acting by theta -> h theta."""

    __slots__ = ("entries", "n")

    def __init__(self, entries: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(x) for x in r) for r in entries)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise DimensionError("lattice change must be square and nonempty")
        if abs(det(rows)) != 1:
            raise ValueError(f"lattice change is not unimodular: {rows}")
        self.entries = rows
        self.n = n

    @classmethod
    def identity(cls, n: int) -> "LatticeChange":
        return cls(identity(n))

    def det(self) -> int:
        return det(self.entries)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def __eq__(self, other):
        return isinstance(other, LatticeChange) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"LatticeChange({self.tolist()})"


def random_unimodular(n: int, rng: random.Random, steps: int = 8) -> LatticeChange:
    """Product of random elementary row operations (and a sign flip)."""
    m = identity(n)
    if n > 1:
        for _ in range(steps):
            i, j = rng.sample(range(n), 2)
            c = rng.choice((-2, -1, 1, 2))
            m[i] = [x + c * y for x, y in zip(m[i], m[j])]
    if rng.random() < 0.5:
        k = rng.randrange(n)
        m[k] = [-x for x in m[k]]
    return LatticeChange(m)


def _combine(rows: Sequence[Sequence[Angle]], weights: Sequence[Sequence[int]], symtab) -> list[list[Angle]]:
    # out[i][j] = sum_k weights[i][k] * rows[k][j] in exact angle arithmetic
    width = len(symtab)
    out = []
    for w in weights:
        line = []
        for j in range(len(rows[0])):
            acc = [Fraction(0)] * width
            for c, r in zip(w, rows):
                if c:
                    for t, x in enumerate(r[j].coeffs):
                        acc[t] += c * x
            line.append(Angle(acc, symtab))
        out.append(line)
    return out


def right_multiply(theta: ThetaMatrix, m: Sequence[Sequence[int]]) -> ThetaMatrix:
    """theta . m for an integer 2g x 2g matrix m (no inverse taken)."""
    if len(m) != 2 * theta.g:
        raise DimensionError(f"matrix size {len(m)} does not match 2g = {2 * theta.g}")
    cols = theta.columns()
    new_cols = _combine(cols, transpose(m), theta.symtab)
    return ThetaMatrix(transpose(new_cols), theta.symtab)


def act_on_theta(theta: ThetaMatrix, a: SymplecticMatrix) -> ThetaMatrix:
    """A . theta = theta A^-1."""
    if a.g != theta.g:
        raise DimensionError(f"symplectic matrix has genus {a.g}, theta has genus {theta.g}")
    return right_multiply(theta, a.inverse().entries)


def act_word(theta: ThetaMatrix, word: Sequence[int]) -> ThetaMatrix:
    return act_on_theta(theta, word_matrix(word, theta.g))


def change_lattice(theta: ThetaMatrix, h: LatticeChange | Sequence[Sequence[int]]) -> ThetaMatrix:
    """h . theta for h in GL(n, Z)."""
    if not isinstance(h, LatticeChange):
        h = LatticeChange(h)
    if h.n != theta.n:
        raise DimensionError(f"lattice change is {h.n}x{h.n}, theta has {theta.n} rows")
    return ThetaMatrix(_combine(theta.entries, h.entries, theta.symtab), theta.symtab)


def dumps_word(word: Sequence[int]) -> str:
    return json.dumps(list(word))
