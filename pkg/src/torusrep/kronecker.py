"""Approximation of a target angle matrix by the Sp(2g, Z)-orbit of a base.

Given ``base`` (n x 2g) and ``target``, find K in Sp(2g, Z) with
``|target - base K| < eps`` entrywise modulo 2pi (max of circle distances).
Three search strategies are available:

* handle-wise: per handle, the SL(2, Z) family ``(k, h)`` with
  ``(t1, t2) -> (k t1 + t2, (k h - 1) t1 + h t2)``, found by two
  one-dimensional inhomogeneous searches;
* beam search over generator words;
* brute-force breadth-first enumeration of generator words.

Every returned result is re-verified from scratch, so soundness never
depends on the strategy. A ``None`` only means nothing was found within
the given bounds.
"""
from __future__ import annotations

import enum
import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .density import DensityCertificate
from .errors import DimensionError, HypothesisViolation, InvariantError
from .orbit import TWO_PI, FloatTorusMatrix, _GeneratorTable, circle_distance
from .symplectic import GeneratorWord, SymplecticMatrix, is_symplectic

log = logging.getLogger(__name__)

DEFAULT_BEAM_WIDTH = 64
DEFAULT_BEAM_DEPTH = 30
DEFAULT_HANDLE_BOUND = 10_000
GRID_FALLBACK_CAP = 400
DIVERSITY_CELLS = 10.0
MAX_K_CANDIDATES = 256


class Strategy(enum.Enum):
    AUTO = "auto"
    HANDLE_WISE = "handle"
    BEAM_SEARCH = "beam"
    BRUTE_FORCE = "brute"


def _signed_order(bound: int) -> np.ndarray:
    """0, 1, -1, 2, -2, ..., bound, -bound."""
    k = np.arange(1, bound + 1)
    return np.concatenate(([0], np.stack([k, -k], axis=1).ravel()))


def approx_1d(alpha: float, beta: float, epsilon: float, bound: int) -> int | None:
    """Smallest |k| <= bound with |k alpha - beta| < epsilon mod 2pi (positive k first on ties)."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if bound < 0:
        raise ValueError("bound must be non-negative")
    ks = _signed_order(bound)
    err = circle_distance(ks * float(alpha), float(beta))
    hits = np.flatnonzero(err < epsilon)
    return int(ks[hits[0]]) if hits.size else None


def _all_1d(alpha: float, beta: float, epsilon: float, bound: int) -> np.ndarray:
    ks = _signed_order(bound)
    return ks[circle_distance(ks * float(alpha), float(beta)) < epsilon]


def handle_matrix(k: int, h: int) -> list[list[int]]:
    """[[k, 1], [kh - 1, h]]: acts on the column (t1, t2); determinant is always 1."""
    return [[k, 1], [k * h - 1, h]]


def handle_multiplier(k: int, h: int) -> list[list[int]]:
    """The same map as a right multiplier of the row (t1, t2)."""
    return [[k, k * h - 1], [1, h]]


def _pair_error(theta, target, k, h) -> float:
    t1, t2 = theta
    img = (k * t1 + t2, (k * h - 1) * t1 + h * t2)
    return float(np.max(circle_distance(img, target)))


def approx_handle(theta: Sequence[float], target: Sequence[float], epsilon: float,
                  bound: int) -> tuple[int, int] | None:
    """Integers (k, h) moving the pair ``theta`` within epsilon of ``target``.

    k is chosen so the first coordinate ``k t1 + t2`` lands near the target,
    then h so that ``h (k t1 + t2) - t1`` does; the first MAX_K_CANDIDATES
    values of k that work for the first coordinate are tried in order of |k|
    before falling back to a direct scan of the (k, h) grid.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    t1, t2 = float(theta[0]), float(theta[1])
    a1, a2 = float(target[0]), float(target[1])
    for k in _all_1d(t1, a1 - t2, epsilon, bound)[:MAX_K_CANDIDATES]:
        k = int(k)
        h = approx_1d(k * t1 + t2, a2 + t1, epsilon, bound)
        if h is not None and _pair_error((t1, t2), (a1, a2), k, h) < epsilon:
            return _checked(k, h)
    cap = min(bound, GRID_FALLBACK_CAP)
    ks = _signed_order(cap)
    kk, hh = np.meshgrid(ks, ks, indexing="ij")
    e1 = circle_distance(kk * t1 + t2, a1)
    e2 = circle_distance((kk * hh - 1) * t1 + hh * t2, a2)
    ok = np.argwhere(np.maximum(e1, e2) < epsilon)
    if ok.size:
        i, j = ok[0]
        return _checked(int(ks[i]), int(ks[j]))
    return None


def _checked(k, h):
    m = handle_matrix(k, h)
    if m[0][0] * m[1][1] - m[0][1] * m[1][0] != 1:
        raise InvariantError(f"handle matrix for {(k, h)} has determinant != 1")
    return k, h


@dataclass
class ApproxRequest:
    base: FloatTorusMatrix
    target: FloatTorusMatrix
    epsilon: float
    search_bound: int | None = None
    strategy: Strategy = Strategy.AUTO
    beam_width: int = DEFAULT_BEAM_WIDTH
    certificate: DensityCertificate | None = None
    allow_violation: bool = False
    max_states: int = 1_000_000

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.base.values.shape != self.target.values.shape:
            raise DimensionError(f"base {self.base.values.shape} and target "
                                 f"{self.target.values.shape} differ in shape")
        if isinstance(self.strategy, str):
            self.strategy = Strategy(self.strategy)


@dataclass
class ApproxResult:
    """K with base K close to target; the error is recomputed on construction."""

    k_matrix: SymplecticMatrix
    base: FloatTorusMatrix = field(repr=False)
    target: FloatTorusMatrix = field(repr=False)
    epsilon: float
    word: list
    strategy: Strategy
    hypothesis_warning: bool = False
    achieved_error: float = field(init=False)

    def __post_init__(self):
        if not is_symplectic(self.k_matrix.entries):
            raise InvariantError("returned K is not symplectic")
        image = self.base.right_multiply(self.k_matrix.entries)
        self.achieved_error = image.distance(self.target)

    @property
    def ratio_c(self) -> float:
        return self.achieved_error / self.epsilon

    @property
    def found(self) -> bool:
        return self.achieved_error < self.epsilon

    def to_json(self) -> dict:
        return {"found": self.found, "K": self.k_matrix.tolist(), "error": self.achieved_error,
                "word": list(self.word), "ratio_C": self.ratio_c,
                "strategy": self.strategy.value, "hypothesis_warning": self.hypothesis_warning}


def _error(values: np.ndarray, target: np.ndarray) -> float:
    return float(np.max(circle_distance(values, target)))


def _handle_wise(req: ApproxRequest) -> tuple[list[list[int]], list] | None:
    base, target = req.base.values, req.target.values
    n, g = req.base.n, req.base.g
    bound = req.search_bound or DEFAULT_HANDLE_BOUND
    k_full = np.eye(2 * g, dtype=object)
    params = []
    for i in range(g):
        cols = slice(2 * i, 2 * i + 2)
        if n == 1:
            kh = approx_handle(base[0, cols], target[0, cols], req.epsilon, bound)
        else:
            kh = _handle_grid(base[:, cols], target[:, cols], req.epsilon, min(bound, GRID_FALLBACK_CAP))
        if kh is None:
            return None
        params.append(list(kh))
        m = handle_multiplier(*kh)
        for a in range(2):
            for b in range(2):
                k_full[2 * i + a, 2 * i + b] = m[a][b]
    return [[int(x) for x in r] for r in k_full], params


def _handle_grid(block: np.ndarray, target: np.ndarray, eps: float, cap: int):
    ks = _signed_order(cap)
    kk, hh = np.meshgrid(ks, ks, indexing="ij")
    err = np.zeros(kk.shape)
    for row, tgt in zip(block, target):
        t1, t2 = row
        err = np.maximum(err, circle_distance(kk * t1 + t2, tgt[0]))
        err = np.maximum(err, circle_distance((kk * hh - 1) * t1 + hh * t2, tgt[1]))
    ok = np.argwhere(err < eps)
    if not ok.size:
        return None
    i, j = ok[0]
    return _checked(int(ks[i]), int(ks[j]))


class _WordSearch:
    """Shared bookkeeping for the word-based strategies."""

    def __init__(self, req: ApproxRequest):
        self.req = req
        self.g = req.base.g
        self.table = _GeneratorTable(self.g)
        self.int_mult = {}
        for i, a in enumerate(self.table.gens, start=1):
            self.int_mult[i] = np.array(a.inverse().entries, dtype=object)
            self.int_mult[-i] = np.array(a.entries, dtype=object)
        self.target = req.target.values

    def step(self, state, letter):
        values, kmat, word = state
        return (np.mod(values @ self.table.mult[letter], TWO_PI),
                kmat.dot(self.int_mult[letter]), word + (letter,))

    def start(self):
        return (self.req.base.values.copy(), np.eye(2 * self.g, dtype=int).astype(object), ())


def _kkey(kmat) -> tuple:
    return tuple(int(x) for x in kmat.ravel())


def _beam(req: ApproxRequest):
    ws = _WordSearch(req)
    depth = req.search_bound or DEFAULT_BEAM_DEPTH
    beam = [ws.start()]
    seen = {_kkey(beam[0][1])}
    best = min(beam, key=lambda s: _error(s[0], ws.target))
    if _error(best[0], ws.target) < req.epsilon:
        return best
    for _ in range(depth):
        children = []
        for state in beam:
            for letter in ws.table.letters:
                child = ws.step(state, letter)
                key = _kkey(child[1])
                if key in seen:
                    continue
                seen.add(key)
                children.append((_error(child[0], ws.target), child[2], child))
        if not children:
            break
        # canonical tie-break: smallest error, then lexicographically smallest word
        children.sort(key=lambda c: (c[0], c[1]))
        if children[0][0] < req.epsilon:
            return children[0][2]
        beam = _diverse(children, req.beam_width, DIVERSITY_CELLS * req.epsilon)
    return None


def _diverse(children, width, cell):
    # keep at most one state per cell so the beam does not collapse onto one basin
    kept, used = [], set()
    for _, _, state in children:
        key = np.floor(state[0] / cell).astype(np.int64).tobytes()
        if key in used:
            continue
        used.add(key)
        kept.append(state)
        if len(kept) == width:
            break
    return kept


def _brute(req: ApproxRequest):
    ws = _WordSearch(req)
    depth = req.search_bound or 8
    layer = [ws.start()]
    seen = {_kkey(layer[0][1])}
    if _error(layer[0][0], ws.target) < req.epsilon:
        return layer[0]
    for _ in range(depth):
        nxt = []
        for state in layer:
            for letter in ws.table.letters:
                child = ws.step(state, letter)
                key = _kkey(child[1])
                if key in seen:
                    continue
                seen.add(key)
                if _error(child[0], ws.target) < req.epsilon:
                    return child
                nxt.append(child)
                if len(seen) >= req.max_states:
                    return None
        layer = nxt
    return None


def approx_symplectic(req: ApproxRequest) -> ApproxResult | None:
    """Search for K in Sp(2g, Z) with base K within epsilon of target."""
    warn = False
    if req.certificate is not None and not req.certificate.dense:
        if not req.allow_violation:
            raise HypothesisViolation("base fails the density certificate; pi and the base "
                                      "entries are not independent over Q")
        warnings.warn("running approximation on a base that is not certified dense")
        warn = True
    g = req.base.g

    def result(kmat, word, strategy):
        res = ApproxResult(SymplecticMatrix(kmat), req.base, req.target, req.epsilon,
                           list(word), strategy, warn)
        if not res.found:
            raise InvariantError(f"{strategy} returned K with error {res.achieved_error} >= eps")
        return res

    if _error(req.base.values, req.target.values) < req.epsilon:
        return result(np.eye(2 * g, dtype=int).tolist(), [], req.strategy)

    order = {
        Strategy.AUTO: [Strategy.HANDLE_WISE, Strategy.BEAM_SEARCH],
        Strategy.HANDLE_WISE: [Strategy.HANDLE_WISE],
        Strategy.BEAM_SEARCH: [Strategy.BEAM_SEARCH],
        Strategy.BRUTE_FORCE: [Strategy.BRUTE_FORCE],
    }[req.strategy]
    for strategy in order:
        if strategy is Strategy.HANDLE_WISE:
            found = _handle_wise(req)
            if found is not None:
                kmat, params = found
                return result(kmat, params, strategy)
        else:
            search = _beam if strategy is Strategy.BEAM_SEARCH else _brute
            # in AUTO mode the handle-wise bound does not carry over to word depth
            sub = req if req.strategy is not Strategy.AUTO else _replace_bound(req, None)
            state = search(sub)
            if state is not None:
                _, kmat, word = state
                # words act by A^-1 on the right; kmat already accumulates those multipliers
                return result([[int(x) for x in r] for r in kmat], GeneratorWord(word), strategy)
        log.debug("strategy %s found nothing", strategy.value)
    return None


def _replace_bound(req: ApproxRequest, bound):
    from dataclasses import replace
    return replace(req, search_bound=bound, strategy=Strategy.BEAM_SEARCH)


def minimum_gap(points: np.ndarray) -> float:
    """Smallest pairwise max-metric torus distance among distinct points."""
    pts = np.asarray(points, dtype=float)
    best = math.inf
    for i in range(len(pts)):
        d = np.max(circle_distance(pts[i + 1:], pts[i]), axis=1) if i + 1 < len(pts) else []
        d = [x for x in d if x > 1e-9]
        if d:
            best = min(best, min(d))
    return best
