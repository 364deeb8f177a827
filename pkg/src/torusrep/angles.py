"""Exact angles and angle matrices.

An angle is stored as a rational multiple of pi plus a rational combination
of user-declared symbols, which the caller asserts to be linearly independent
over Q together with pi. Only the pi part is periodic, so canonical form keeps
the pi coefficient in [0, 2) and leaves symbol coefficients untouched.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DimensionError, TableMismatch, UnknownSymbol

PI = "pi"
_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings; floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def fraction_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


class SymbolTable:
    """Ordered symbol names; slot 0 is reserved for pi."""

    __slots__ = ("names", "_index")

    def __init__(self, symbols: Iterable[str] = ()):
        symbols = tuple(symbols)
        for s in symbols:
            if not isinstance(s, str) or not _IDENT.match(s):
                raise ValueError(f"bad symbol name {s!r}")
            if s == PI:
                raise ValueError("'pi' is reserved")
        if len(set(symbols)) != len(symbols):
            raise ValueError(f"duplicate symbols in {symbols}")
        self.names = (PI,) + symbols
        self._index = {name: i for i, name in enumerate(self.names)}

    @property
    def symbols(self) -> tuple[str, ...]:
        return self.names[1:]

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownSymbol(f"unknown symbol {name!r}; declared: {list(self.symbols)}") from None

    def __eq__(self, other):
        return isinstance(other, SymbolTable) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"SymbolTable({list(self.symbols)!r})"


def _check_same(a: SymbolTable, b: SymbolTable):
    if a is not b and a != b:
        raise TableMismatch(f"{a!r} vs {b!r}")


class Angle:
    """Immutable exact angle ``pi_coeff*pi + sum(c_s * s)`` modulo 2*pi.

    ``coeffs[0]`` is the pi coefficient, ``coeffs[i]`` the coefficient of
    ``symtab.names[i]``. Build through :func:`angle_new` or the classmethods.
    """

    __slots__ = ("coeffs", "symtab", "_hash")

    def __init__(self, coeffs: Sequence[Fraction], symtab: SymbolTable):
        if len(coeffs) != len(symtab):
            raise DimensionError("coefficient vector does not match symbol table")
        c = [as_fraction(x) for x in coeffs]
        c[0] = c[0] % 2
        self.coeffs = tuple(c)
        self.symtab = symtab
        self._hash = None

    @classmethod
    def zero(cls, symtab: SymbolTable) -> "Angle":
        return cls((Fraction(0),) * len(symtab), symtab)

    @classmethod
    def symbol(cls, symtab: SymbolTable, name: str, coeff=1) -> "Angle":
        return angle_new(symtab, 0, {name: coeff})

    @property
    def pi_coeff(self) -> Fraction:
        return self.coeffs[0]

    @property
    def sym_coeffs(self) -> dict[str, Fraction]:
        names = self.symtab.names
        return {names[i]: c for i, c in enumerate(self.coeffs) if i and c}

    def is_pi_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: "Angle") -> "Angle":
        if not isinstance(other, Angle):
            return NotImplemented
        _check_same(self.symtab, other.symtab)
        return Angle([a + b for a, b in zip(self.coeffs, other.coeffs)], self.symtab)

    def __neg__(self) -> "Angle":
        return Angle([-a for a in self.coeffs], self.symtab)

    def __sub__(self, other: "Angle") -> "Angle":
        return self + (-other)

    def __mul__(self, k: int) -> "Angle":
        # integer multiples only: R/2piZ is a Z-module, not a Q-module
        if not isinstance(k, int) or isinstance(k, bool):
            return NotImplemented
        return Angle([k * a for a in self.coeffs], self.symtab)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, Angle) and self.coeffs == other.coeffs
                and self.symtab == other.symtab)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.coeffs, self.symtab))
        return self._hash

    def evaluate(self, sym_values: Mapping[str, float]) -> float:
        """Real value of this lift (not reduced mod 2*pi)."""
        import math

        total = float(self.coeffs[0]) * math.pi
        for name, c in self.sym_coeffs.items():
            if name not in sym_values:
                raise UnknownSymbol(f"no value supplied for symbol {name!r}")
            total += float(c) * float(sym_values[name])
        return total

    def to_json(self) -> dict:
        return {"pi": fraction_str(self.pi_coeff),
                "syms": {k: fraction_str(v) for k, v in self.sym_coeffs.items()}}

    @classmethod
    def from_json(cls, obj: Mapping, symtab: SymbolTable) -> "Angle":
        return angle_new(symtab, as_fraction(obj.get("pi", "0/1")),
                         {k: as_fraction(v) for k, v in obj.get("syms", {}).items()})

    def __str__(self):
        terms = []
        for name, c in zip(self.symtab.names, self.coeffs):
            if not c:
                continue
            if c == 1:
                terms.append(name)
            elif c == -1:
                terms.append("-" + name)
            else:
                terms.append(f"{c}*{name}")
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")

    def __repr__(self):
        return f"Angle({self})"


def angle_new(symtab: SymbolTable, pi_coeff=0, sym_coeffs: Mapping[str, object] | None = None) -> Angle:
    """Canonical angle from a pi coefficient and a symbol -> coefficient map."""
    coeffs = [Fraction(0)] * len(symtab)
    coeffs[0] = as_fraction(pi_coeff)
    for name, c in (sym_coeffs or {}).items():
        if name == PI:
            coeffs[0] += as_fraction(c)
        else:
            coeffs[symtab.index(name)] += as_fraction(c)
    return Angle(coeffs, symtab)


def angle_add(a: Angle, b: Angle) -> Angle:
    return a + b


def angle_is_pi_rational(a: Angle) -> bool:
    return a.is_pi_rational()


def parse_angle(text, symtab: SymbolTable) -> Angle:
    """Parse a linear expression such as ``"x + pi/3"`` or ``"-2*phi"``.

    A bare rational without pi is rejected: a radian constant like 1 has to be
    declared as a symbol so its independence from pi is explicit.
    """
    import sympy

    if isinstance(text, Angle):
        return text
    if isinstance(text, (int, Fraction)) and text == 0:
        return Angle.zero(symtab)
    local = {name: sympy.Symbol(name) for name in symtab.symbols}
    local["pi"] = sympy.pi
    try:
        expr = sympy.sympify(str(text), locals=local, rational=True)
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ValueError(f"cannot parse angle {text!r}") from exc
    expr = sympy.expand(expr)
    coeffs = {}
    for term, c in expr.as_coefficients_dict().items():
        if term == 1:
            if c != 0:
                raise ValueError(f"bare rational constant in {text!r}; declare it as a symbol")
            continue
        if not c.is_Rational:
            raise ValueError(f"non-rational coefficient in {text!r}")
        key = "pi" if term == sympy.pi else str(term)
        if key != "pi" and not isinstance(term, sympy.Symbol):
            raise ValueError(f"{text!r} is not linear in pi and the declared symbols")
        coeffs[key] = Fraction(int(c.p), int(c.q))
    return angle_new(symtab, 0, coeffs)


AngleVector = tuple  # tuple[Angle, ...]


class ThetaMatrix:
    """The n x 2g angle matrix of a representation pi_1(S) -> T^n.

    Column order is alpha_1, beta_1, ..., alpha_g, beta_g; row i holds the
    i-th coordinate of the generator images.
    """

    __slots__ = ("entries", "symtab", "n", "g")

    def __init__(self, entries: Sequence[Sequence[Angle]], symtab: SymbolTable):
        rows = tuple(tuple(r) for r in entries)
        if not rows:
            raise DimensionError("theta matrix needs at least one row")
        width = len(rows[0])
        if width < 2 or width % 2:
            raise DimensionError(f"column count must be even and >= 2, got {width}")
        for r in rows:
            if len(r) != width:
                raise DimensionError("ragged theta matrix")
            for a in r:
                if not isinstance(a, Angle):
                    raise TypeError(f"entries must be Angle, got {type(a).__name__}")
                _check_same(a.symtab, symtab)
        self.entries = rows
        self.symtab = symtab
        self.n = len(rows)
        self.g = width // 2

    @classmethod
    def from_strings(cls, rows: Sequence[Sequence[object]], symbols: Iterable[str] | SymbolTable = ()):
        """Convenience builder: ``ThetaMatrix.from_strings([["x", "pi/3"]], ["x"])``."""
        symtab = symbols if isinstance(symbols, SymbolTable) else SymbolTable(symbols)
        return cls([[parse_angle(e, symtab) for e in r] for r in rows], symtab)

    @classmethod
    def zeros(cls, n: int, g: int, symtab: SymbolTable | None = None):
        symtab = symtab or SymbolTable()
        z = Angle.zero(symtab)
        return cls([[z] * (2 * g) for _ in range(n)], symtab)

    @property
    def shape(self):
        return self.n, 2 * self.g

    def row(self, i: int) -> tuple[Angle, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[Angle, ...]:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[tuple[Angle, ...]]:
        return [self.column(j) for j in range(2 * self.g)]

    def pi_block(self) -> list[list[Fraction]]:
        """n x 2g matrix of pi coefficients."""
        return [[a.coeffs[0] for a in r] for r in self.entries]

    def symbol_block(self) -> list[list[Fraction]]:
        """n x (2g*m) matrix of symbol coefficients, column-major per entry."""
        return [[c for a in r for c in a.coeffs[1:]] for r in self.entries]

    def flat_rows(self) -> list[list[Fraction]]:
        """Rows flattened over the basis (pi, symbols) of every column."""
        return [[c for a in r for c in a.coeffs] for r in self.entries]

    def submatrix(self, rows: Sequence[int]) -> "ThetaMatrix":
        return ThetaMatrix([self.entries[i] for i in rows], self.symtab)

    def is_pi_rational(self) -> bool:
        return all(a.is_pi_rational() for r in self.entries for a in r)

    def __eq__(self, other):
        return (isinstance(other, ThetaMatrix) and self.symtab == other.symtab
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.entries, self.symtab))

    def __repr__(self):
        body = "; ".join(", ".join(str(a) for a in r) for r in self.entries)
        return f"ThetaMatrix(n={self.n}, g={self.g}, [{body}])"

    def to_json(self) -> dict:
        return {"n": self.n, "g": self.g, "symbols": list(self.symtab.symbols),
                "entries": [[a.to_json() for a in r] for r in self.entries]}

    def dumps(self) -> str:
        """Byte-stable canonical JSON."""
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, obj: Mapping) -> "ThetaMatrix":
        symtab = SymbolTable(obj.get("symbols", []))
        m = cls([[Angle.from_json(e, symtab) for e in r] for r in obj["entries"]], symtab)
        if "n" in obj and obj["n"] != m.n or "g" in obj and obj["g"] != m.g:
            raise DimensionError(f"declared n={obj.get('n')}, g={obj.get('g')} "
                                 f"but entries are {m.n} x {2 * m.g}")
        return m

    @classmethod
    def loads(cls, text: str) -> "ThetaMatrix":
        return cls.from_json(json.loads(text))


def theta_from_generators(images: Sequence[Sequence[Angle]], g: int) -> ThetaMatrix:
    """Stack generator images (alpha_1, beta_1, ..., alpha_g, beta_g) as columns."""
    if g < 1:
        raise DimensionError("genus must be positive")
    if len(images) != 2 * g:
        raise DimensionError(f"expected {2 * g} generator images, got {len(images)}")
    n = len(images[0])
    if n < 1 or any(len(v) != n for v in images):
        raise DimensionError("generator images must share a positive length")
    symtab = images[0][0].symtab
    return ThetaMatrix([[images[j][i] for j in range(2 * g)] for i in range(n)], symtab)


def evaluate_word(theta: ThetaMatrix, k: Sequence[int]) -> AngleVector:
    """rho(gamma) for the abelianized word with exponent vector k, i.e. theta.k mod 2pi."""
    if len(k) != 2 * theta.g:
        raise DimensionError(f"exponent vector has length {len(k)}, expected {2 * theta.g}")
    k = [int(x) for x in k]
    out = []
    for r in theta.entries:
        acc = [Fraction(0)] * len(theta.symtab)
        for kj, a in zip(k, r):
            if kj:
                for t, c in enumerate(a.coeffs):
                    acc[t] += kj * c
        out.append(Angle(acc, theta.symtab))
    return tuple(out)
