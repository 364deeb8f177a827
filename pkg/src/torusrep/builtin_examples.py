"""Built-in theta matrices reproducing the worked examples.

Radian constants such as 1 are declared as symbols (``one``) so that their
independence from pi is explicit rather than implied.
"""
from __future__ import annotations

import math
from typing import Callable, Sequence

from .angles import Angle, SymbolTable, ThetaMatrix, angle_new
from .errors import DimensionError


def example_3_1() -> ThetaMatrix:
    """rho(a1) = rho(a2) = (phi, phi), rho(b1) = rho(b2) = 0; genus 2, n = 2."""
    return ThetaMatrix.from_strings([["phi", 0, "phi", 0],
                                     ["phi", 0, "phi", 0]], ["phi"])


def example_3_2() -> ThetaMatrix:
    """rho(a_i) = (phi, 0), rho(b_i) = (0, phi); genus 2, n = 2."""
    return ThetaMatrix.from_strings([["phi", 0, "phi", 0],
                                     [0, "phi", 0, "phi"]], ["phi"])


def appendix_2d(g: int = 2) -> ThetaMatrix:
    """Dense in T^2, yet no single curve has a dense image."""
    if g < 2:
        raise DimensionError("this example needs genus >= 2")
    rows = [["one", "one"] + [0] * (2 * g - 2),
            [0, 0, "one", "one"] + [0] * (2 * g - 4)]
    return ThetaMatrix.from_strings(rows, ["one"])


def appendix_nd(n: int = 3, g: int = 2) -> ThetaMatrix:
    """The n-dimensional version: extra rows (theta_i, 0, ..., 0)."""
    if g < 2:
        raise DimensionError("this example needs genus >= 2")
    if n < 2:
        raise DimensionError("this example needs n >= 2")
    extra = [f"theta{i}" for i in range(3, n + 1)]
    rows = [["one", "one"] + [0] * (2 * g - 2),
            [0, 0, "one", "one"] + [0] * (2 * g - 4)]
    rows += [[name] + [0] * (2 * g - 1) for name in extra]
    return ThetaMatrix.from_strings(rows, ["one"] + extra)


def class_d(g: int = 1, n: int = 2, lambdas: Sequence[str] | None = None,
            thetas: Sequence[str] | None = None) -> ThetaMatrix:
    """Rows lambda_j * (theta_1, ..., theta_2g) with lambda_1 = 1.

    Products lambda_j * theta_i are not linear in the symbols, so each one
    becomes its own symbol ``<lambda>_<theta>``; the caller asserts that pi,
    the thetas and all products are independent over Q.
    """
    if g < 1 or n < 1:
        raise DimensionError("class-D needs g >= 1 and n >= 1")
    lambdas = list(lambdas) if lambdas is not None else [f"l{j}" for j in range(2, n + 1)]
    thetas = list(thetas) if thetas is not None else [f"t{i}" for i in range(1, 2 * g + 1)]
    if len(lambdas) != n - 1:
        raise DimensionError(f"need {n - 1} lambda names for n = {n}, got {len(lambdas)}")
    if len(thetas) != 2 * g:
        raise DimensionError(f"need {2 * g} theta names for g = {g}, got {len(thetas)}")
    products = [f"{lam}_{t}" for lam in lambdas for t in thetas]
    symtab = SymbolTable(thetas + products)
    rows = [[Angle.symbol(symtab, t) for t in thetas]]
    for lam in lambdas:
        rows.append([angle_new(symtab, 0, {f"{lam}_{t}": 1}) for t in thetas])
    return ThetaMatrix(rows, symtab)


REGISTRY: dict[str, Callable[..., ThetaMatrix]] = {
    "ex-3.1": example_3_1,
    "ex-3.2": example_3_2,
    "app-A-2d": appendix_2d,
    "app-A-nd": appendix_nd,
    "class-D": class_d,
}

# keyword arguments each builder accepts from the command line
PARAMETERS = {
    "ex-3.1": (),
    "ex-3.2": (),
    "app-A-2d": ("g",),
    "app-A-nd": ("n", "g"),
    "class-D": ("g", "n", "lambdas"),
}

_IRRATIONALS = [math.sqrt(p) for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)]


def get_example(name: str, **params) -> ThetaMatrix:
    if name not in REGISTRY:
        raise ValueError(f"unknown example {name!r}; choose from {sorted(REGISTRY)}")
    allowed = PARAMETERS[name]
    unused = {k for k, v in params.items() if v is not None and k not in allowed}
    if unused:
        raise ValueError(f"example {name!r} does not take {sorted(unused)}")
    return REGISTRY[name](**{k: v for k, v in params.items() if v is not None and k in allowed})


def default_symbol_values(theta: ThetaMatrix | SymbolTable) -> dict[str, float]:
    """Numerical stand-ins for the declared symbols.

    ``phi`` and ``one`` get 1.0, other symbols square roots of successive
    primes. A class-D product symbol ``<lam>_<t>`` gets value(lam) * value(t)
    so the float matrix really has proportional rows.
    """
    symtab = theta if isinstance(theta, SymbolTable) else theta.symtab
    pool = iter(_IRRATIONALS * 8)
    values, factors = {}, {}
    for name in symtab.symbols:
        lam, _, base = name.partition("_")
        if base in values:
            if lam not in factors:
                factors[lam] = next(pool)
            values[name] = factors[lam] * values[base]
        else:
            values[name] = 1.0 if name in ("one", "phi") else next(pool)
    return values
