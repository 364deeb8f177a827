"""Density certificates, closure normal forms and dense-curve search.

Everything here reduces to the *relation lattice*

    L = { lam in Z^n : lam^T theta lies in pi Q^{2g} },

which only sees symbol coefficients and therefore does not depend on the
representative chosen mod 2*pi. The row module of theta, viewed inside the
torus T^{2g}, has free rank ``n - rank L``; it is torsion free when every
``lam`` in L sends theta to 0 mod 2*pi. A representation is dense exactly
when L = 0. The stacked-matrix test ``rank (theta; pi I) = n + 2g`` is kept
as an independent second route.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from functools import reduce
from typing import Iterator, Sequence

from .angles import Angle, ThetaMatrix, evaluate_word
from .errors import InvariantError
from .lattice import complete_to_unimodular, det, integer_left_kernel, rank_q, vec_mat
from .symplectic import LatticeChange, change_lattice

WITNESS_SEARCH_BOUND = 8


def relation_lattice(theta: ThetaMatrix) -> list[list[int]]:
    """Hermite-form Z-basis of the integer row relations modulo pi Q."""
    return integer_left_kernel(theta.symbol_block())


def rank_z(theta: ThetaMatrix) -> int:
    """Free rank of the Z-module spanned by the rows of theta in T^{2g}."""
    return theta.n - len(relation_lattice(theta))


def lift_rank_z(theta: ThetaMatrix) -> int:
    """Q-rank of the rows of the stored [0, 2pi) lift, flattened over (pi, symbols).

    This is the row rank of one particular real lift; unlike :func:`rank_z`
    it can change when pi-rational rows are re-reduced mod 2*pi.
    """
    return rank_q(theta.flat_rows())


def _pi_part(theta: ThetaMatrix, lam: Sequence[int]) -> list[Fraction]:
    return vec_mat(lam, theta.pi_block())


def _vanishes_mod_2pi(pi_part: Sequence[Fraction]) -> bool:
    return all(x.denominator == 1 and x.numerator % 2 == 0 for x in pi_part)


def _norm_key(v):
    return max(abs(x) for x in v), sum(abs(x) for x in v), [-x for x in v]


def _sign_normal(v):
    lead = next((x for x in v if x), 0)
    return list(v) if lead >= 0 else [-x for x in v]


def is_pi_q_free(theta: ThetaMatrix) -> tuple[bool, list[int] | None]:
    """Whether the row module meets the torsion pi Q^{2g} / 2pi Z^{2g} only in 0.

    Returns ``(free, witness)``. The boolean is exact: lam -> lam^T theta mod 2pi
    is additive on L, so it vanishes on L iff it vanishes on a basis. When
    not free, the witness is the shortest offending lam found among small
    combinations of the basis (falling back to a basis vector).
    """
    basis = relation_lattice(theta)
    bad = [b for b in basis if not _vanishes_mod_2pi(_pi_part(theta, b))]
    if not bad:
        return True, None
    best = _sign_normal(bad[0])
    if len(basis) <= 3:
        rng = range(-WITNESS_SEARCH_BOUND, WITNESS_SEARCH_BOUND + 1)
        for c in itertools.product(rng, repeat=len(basis)):
            if not any(c):
                continue
            lam = [sum(ci * b[j] for ci, b in zip(c, basis)) for j in range(theta.n)]
            if _norm_key(lam) < _norm_key(best) and not _vanishes_mod_2pi(_pi_part(theta, lam)):
                best = _sign_normal(lam)
    return False, best


def stacked_rank(theta: ThetaMatrix) -> int:
    """Row rank over Z of (theta; pi I_{2g}), computed as a Q-rank of flat rows."""
    width = len(theta.symtab)
    rows = theta.flat_rows()
    for j in range(2 * theta.g):
        r = [Fraction(0)] * (2 * theta.g * width)
        r[j * width] = Fraction(1)
        rows.append(r)
    return rank_q(rows)


def dense_by_stacked_rank(theta: ThetaMatrix) -> bool:
    return stacked_rank(theta) == theta.n + 2 * theta.g


@dataclass(frozen=True)
class ClosureNormalForm:
    """h theta = (theta_o; pi Q) with theta_o of size k x 2g."""

    h: LatticeChange
    theta_o: ThetaMatrix | None  # None when k = 0
    q_block: list[list[Fraction]]  # (n - k) x 2g, pi coefficients
    k: int
    # rows of the input theta that are not pi-rational (the coarse reading of k)
    coarse_k: int = 0

    @property
    def readings_agree(self) -> bool:
        return self.coarse_k == self.k

    def reduced(self, theta: ThetaMatrix) -> ThetaMatrix:
        return change_lattice(theta, self.h)


@dataclass(frozen=True)
class DensityCertificate:
    rank_z: int
    pi_q_free: bool
    witness: list[int] | None
    dense: bool
    closure_dim: int
    normalizer: LatticeChange
    stacked_rank: int = 0
    n: int = 0
    g: int = 0
    extra: dict = field(default_factory=dict, compare=False)

    def invariant_fields(self) -> tuple:
        return self.rank_z, self.pi_q_free, self.dense, self.closure_dim

    def to_json(self) -> dict:
        out = {"rank_z": self.rank_z, "pi_q_free": self.pi_q_free, "dense": self.dense,
               "closure_dim": self.closure_dim, "normalizer": self.normalizer.tolist()}
        if self.witness is not None:
            out["witness"] = list(self.witness)
        return out


def closure_normal_form(theta: ThetaMatrix) -> ClosureNormalForm:
    """Unimodular h with the pi-rational rows of h theta moved to the bottom.

    The bottom n - k rows of h are a basis of the relation lattice, so they
    become pi-rational; the top k rows of h theta are then Z-independent and
    generate a torsion-free module.
    """
    n = theta.n
    rel = relation_lattice(theta)
    k = n - len(rel)
    coarse = sum(1 for r in theta.entries if not all(a.is_pi_rational() for a in r))
    if not rel:
        h = [[int(i == j) for j in range(n)] for i in range(n)]
    else:
        full = complete_to_unimodular(rel)
        h = full[len(rel):] + full[:len(rel)]
        if det(h) < 0:
            h[0] = [-x for x in h[0]]
    h = LatticeChange(h)
    reduced = change_lattice(theta, h)
    theta_o = reduced.submatrix(range(k)) if k else None
    q_block = [[a.pi_coeff for a in reduced.row(i)] for i in range(k, n)]
    return ClosureNormalForm(h=h, theta_o=theta_o, q_block=q_block, k=k, coarse_k=coarse)


def certify_density(theta: ThetaMatrix) -> DensityCertificate:
    """Density verdict by rank and freeness, cross-checked against the stacked rank."""
    r = rank_z(theta)
    free, witness = is_pi_q_free(theta)
    dense = r == theta.n and free
    stacked = stacked_rank(theta)
    if dense != (stacked == theta.n + 2 * theta.g):
        raise InvariantError(f"density routes disagree on {theta!r}: rank_z={r}, "
                             f"free={free}, stacked={stacked}")
    nf = closure_normal_form(theta)
    if nf.k != r:
        raise InvariantError(f"closure dimension {nf.k} != rank {r}")
    return DensityCertificate(rank_z=r, pi_q_free=free, witness=witness, dense=dense,
                              closure_dim=nf.k, normalizer=nf.h, stacked_rank=stacked,
                              n=theta.n, g=theta.g,
                              extra={"lift_rank_z": lift_rank_z(theta),
                                     "readings_agree": nf.readings_agree})


def generates_dense_subgroup(vector: Sequence[Angle]) -> bool:
    """A point of T^n generates a dense subgroup iff pi and its entries are Q-independent."""
    return rank_q([list(a.coeffs[1:]) for a in vector]) == len(vector)


def _shells(dim: int, bound: int) -> Iterator[tuple[int, ...]]:
    # max-norm shells 1..bound; inside a shell by L1 norm, then lexicographically
    # descending; only one of +-k (first nonzero entry positive)
    for r in range(1, bound + 1):
        shell = []
        for k in itertools.product(range(-r, r + 1), repeat=dim):
            if max(abs(x) for x in k) != r:
                continue
            lead = next(x for x in k if x)
            if lead > 0:
                shell.append(k)
        shell.sort(key=lambda k: (sum(abs(x) for x in k), [-x for x in k]))
        yield from shell


def dense_curve_possible(theta: ThetaMatrix) -> bool:
    """Cheap necessary condition: the symbol parts of all entries must span >= n dimensions."""
    vectors = [list(a.coeffs[1:]) for r in theta.entries for a in r]
    if not vectors[0]:
        return False
    return rank_q(vectors) >= theta.n


def find_dense_curve(theta: ThetaMatrix, bound: int, primitive_only: bool = True) -> list[int] | None:
    """Smallest exponent vector k (|k|_inf <= bound) with theta.k generating a dense subgroup.

    ``primitive_only`` keeps gcd(k) = 1 as a stand-in for simple closed curves;
    simplicity of an actual curve is not checked. ``None`` only means nothing
    was found within the bound, except when :func:`dense_curve_possible`
    already rules out every k.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if not dense_curve_possible(theta):
        return None
    for k in _shells(2 * theta.g, bound):
        if primitive_only and reduce(gcd, k, 0) != 1:
            continue
        if _dense_image(theta, k):
            return list(k)
    return None


def _dense_image(theta: ThetaMatrix, k: Sequence[int]) -> bool:
    return generates_dense_subgroup(evaluate_word(theta, k))


def row_system(theta: ThetaMatrix, i: int) -> ThetaMatrix:
    """Row i as a 1 x 2g system (the projection to the i-th circle factor)."""
    return theta.submatrix([i])


def normal_form_is_sound(theta: ThetaMatrix, nf: ClosureNormalForm) -> bool:
    """Check the (theta_o; pi Q) block shape and the properties of theta_o."""
    if abs(nf.h.det()) != 1:
        return False
    red = change_lattice(theta, nf.h)
    n, k = theta.n, nf.k
    if any(not a.is_pi_rational() for i in range(k, n) for a in red.row(i)):
        return False
    if [[a.pi_coeff for a in red.row(i)] for i in range(k, n)] != nf.q_block:
        return False
    if k:
        if nf.theta_o != red.submatrix(range(k)):
            return False
        if rank_z(nf.theta_o) != k or not is_pi_q_free(nf.theta_o)[0]:
            return False
    return k == n - len(relation_lattice(theta))
