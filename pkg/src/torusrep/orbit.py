"""Floating-point exploration of Sp(2g, Z)-orbits on M(n, 2g; T).

Orbits are explored breadth-first over the fixed generator list and their
inverses. Points are deduplicated on a grid of spacing ``grid_delta``: one
representative per occupied cell, and children are computed from the
representative, so round-off only accumulates along BFS depth.
"""
from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .angles import Angle, ThetaMatrix
from .errors import DimensionError
from .symplectic import GeneratorWord, SymplecticMatrix, symplectic_generators

TWO_PI = 2 * math.pi
DEFAULT_GRID_DELTA = 0.01
DEFAULT_PROBE_RESOLUTION = 32
MAX_PROBES = 1 << 18
REPLAY_TOL = 1e-9


def wrap(x):
    """Reduce into [0, 2pi); values within 1e-12 below 2pi snap to 0."""
    y = np.mod(x, TWO_PI)
    return np.where(y >= TWO_PI - 1e-12, 0.0, y)


def circle_distance(a, b):
    d = np.abs(np.mod(np.asarray(a) - np.asarray(b), TWO_PI))
    return np.minimum(d, TWO_PI - d)


class FloatTorusMatrix:
    """n x 2g real matrix with entries kept in [0, 2pi)."""

    __slots__ = ("values",)

    def __init__(self, values):
        v = np.array(values, dtype=float)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 2 or v.shape[1] % 2:
            raise DimensionError(f"expected an n x 2g array, got shape {v.shape}")
        self.values = wrap(v)
        self.values.setflags(write=False)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def g(self) -> int:
        return self.values.shape[1] // 2

    def act(self, a: SymplecticMatrix | np.ndarray) -> "FloatTorusMatrix":
        """theta A^-1, as in the exact action."""
        if isinstance(a, SymplecticMatrix):
            a = np.array(a.inverse().entries, dtype=float)
        return FloatTorusMatrix(self.values @ a)

    def right_multiply(self, k) -> "FloatTorusMatrix":
        return FloatTorusMatrix(self.values @ np.asarray(k, dtype=float))

    def distance(self, other: "FloatTorusMatrix") -> float:
        """Max over entries of the circle distance."""
        return float(np.max(circle_distance(self.values, other.values)))

    def to_json(self) -> dict:
        return {"n": self.n, "g": self.g, "entries": self.values.tolist()}

    @classmethod
    def from_json(cls, obj) -> "FloatTorusMatrix":
        return cls(obj["entries"])

    def __repr__(self):
        return f"FloatTorusMatrix({self.values.tolist()})"


def project_to_float(theta: ThetaMatrix | Angle, sym_values: Mapping[str, float] | None = None):
    """Evaluate exact angles numerically and reduce mod 2pi."""
    sym_values = sym_values or {}
    if isinstance(theta, Angle):
        return float(wrap(theta.evaluate(sym_values)))
    vals = [[a.evaluate(sym_values) for a in r] for r in theta.entries]
    return FloatTorusMatrix(vals)


class _GeneratorTable:
    # right-multipliers for each signed letter: +i acts by gen_i^-1, -i by gen_i
    def __init__(self, g: int, gens: Sequence[SymplecticMatrix] | None = None):
        self.gens = list(gens or symplectic_generators(g))
        self.letters = []
        self.mult = {}
        for i, a in enumerate(self.gens, start=1):
            self.mult[i] = np.array(a.inverse().entries, dtype=float)
            self.mult[-i] = np.array(a.entries, dtype=float)
            self.letters += [i, -i]

    def replay(self, seed: np.ndarray, word: Sequence[int]) -> np.ndarray:
        x = seed
        for letter in word:
            x = wrap(x @ self.mult[letter])
        return x


@dataclass
class OrbitSample:
    seed: FloatTorusMatrix
    points: list  # FloatTorusMatrix, in BFS order
    words: list  # GeneratorWord per point
    budget_used: int
    grid_delta: float
    exhausted: bool  # no point has a child outside the occupied cells
    evaluations: int = 0
    generators: list = field(default_factory=list, repr=False)

    def __len__(self):
        return len(self.points)

    def array(self, count: int | None = None) -> np.ndarray:
        """Points flattened to an (N, n*2g) array."""
        pts = self.points if count is None else self.points[:count]
        return np.array([p.values.ravel() for p in pts])

    def occupied_cells(self) -> int:
        return len(self.points)

    def prefix(self, count: int) -> "OrbitSample":
        count = max(1, min(count, len(self.points)))
        return OrbitSample(self.seed, self.points[:count], self.words[:count], count,
                           self.grid_delta, self.exhausted and count == len(self.points),
                           self.evaluations, self.generators)

    def replay_error(self) -> float:
        """Largest entrywise deviation between stored points and their replayed words."""
        table = _GeneratorTable(self.seed.g, self.generators or None)
        worst = 0.0
        for p, w in zip(self.points, self.words):
            y = table.replay(self.seed.values, w)
            worst = max(worst, float(np.max(circle_distance(y, p.values))))
        return worst


def _cell(values: np.ndarray, delta: float) -> bytes:
    return np.floor(values / delta).astype(np.int64).tobytes()


def orbit_explore(seed: FloatTorusMatrix, budget: int, grid_delta: float = DEFAULT_GRID_DELTA,
                  generators: Sequence[SymplecticMatrix] | None = None) -> OrbitSample:
    """Breadth-first orbit sample of at most ``budget`` grid-distinct points."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if grid_delta <= 0:
        raise ValueError("grid_delta must be positive")
    table = _GeneratorTable(seed.g, generators)
    start = seed.values
    seen = {_cell(start, grid_delta)}
    points = [seed]
    words = [GeneratorWord()]
    frontier = deque([0])
    evaluations = 0
    while frontier and len(points) < budget:
        idx = frontier.popleft()
        base = points[idx].values
        for letter in table.letters:
            child = wrap(base @ table.mult[letter])
            evaluations += 1
            key = _cell(child, grid_delta)
            if key in seen:
                continue
            seen.add(key)
            points.append(FloatTorusMatrix(child))
            words.append(words[idx] + (letter,))
            frontier.append(len(points) - 1)
            if len(points) >= budget:
                break
    if len(points) < budget:
        exhausted = True
    else:
        exhausted = _closed(points, table, grid_delta, seen)
    return OrbitSample(seed, points, words, len(points), grid_delta, exhausted,
                       evaluations, table.gens)


def _closed(points, table, delta, seen) -> bool:
    # budget reached: the discretized orbit is closed iff no point has a new child
    for p in points:
        for letter in table.letters:
            if _cell(wrap(p.values @ table.mult[letter]), delta) not in seen:
                return False
    return True


def probe_grid(dim: int, resolution: int = DEFAULT_PROBE_RESOLUTION, max_probes: int = MAX_PROBES) -> np.ndarray:
    """Uniform probe grid of T^dim, with resolution lowered so it has <= max_probes points."""
    if resolution < 2:
        raise ValueError("probe resolution must be >= 2")
    while resolution > 2 and resolution ** dim > max_probes:
        resolution -= 1
    axis = np.arange(resolution) * (TWO_PI / resolution)
    mesh = np.meshgrid(*([axis] * dim), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def dispersion_of_points(points: np.ndarray, probe_resolution: int = DEFAULT_PROBE_RESOLUTION) -> float:
    """Largest max-metric torus distance from a probe point to the nearest sample."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.size == 0:
        raise ValueError("empty sample")
    pts = wrap(pts)
    probes = probe_grid(pts.shape[1], probe_resolution)
    tree = cKDTree(pts, boxsize=TWO_PI)
    dist, _ = tree.query(probes, k=1, p=np.inf)
    return float(min(np.max(dist), math.pi))


def dispersion(sample: OrbitSample, probe_resolution: int = DEFAULT_PROBE_RESOLUTION) -> float:
    return dispersion_of_points(sample.array(), probe_resolution)


class Prediction(enum.Enum):
    DISCRETE = "PredictDiscrete"
    DENSE = "PredictDense"


@dataclass
class Genus1Report:
    prediction: Prediction
    exhausted: bool
    cells: int
    dispersion: float
    threshold: float
    budget: int
    grid_delta: float

    @property
    def consistent(self) -> bool:
        if self.prediction is Prediction.DISCRETE:
            return self.exhausted
        return self.dispersion < self.threshold


def classify_orbit_genus1(theta_bar: Sequence, pi_rational: bool | None = None,
                          sym_values: Mapping[str, float] | None = None, *,
                          budget: int = 100_000, grid_delta: float = 0.05,
                          threshold: float = 0.1,
                          probe_resolution: int = DEFAULT_PROBE_RESOLUTION) -> Genus1Report:
    """Predict discrete vs dense orbit for a genus-one pair and measure it.

    With exact :class:`Angle` input the pi-rationality is read off the
    symbols; with floats the caller has to say which case applies.
    """
    if len(theta_bar) != 2:
        raise DimensionError("genus-one input is a pair of angles")
    if all(isinstance(a, Angle) for a in theta_bar):
        exact = all(a.is_pi_rational() for a in theta_bar)
        if pi_rational is not None and pi_rational != exact:
            raise ValueError("pi_rational flag contradicts the exact input")
        pi_rational = exact
        values = [project_to_float(a, sym_values) for a in theta_bar]
    else:
        if pi_rational is None:
            raise ValueError("float input needs an explicit pi_rational flag")
        values = [float(x) for x in theta_bar]
    prediction = Prediction.DISCRETE if pi_rational else Prediction.DENSE
    sample = orbit_explore(FloatTorusMatrix([values]), budget, grid_delta)
    return Genus1Report(prediction, sample.exhausted, sample.occupied_cells(),
                        dispersion(sample, probe_resolution), threshold, budget, grid_delta)
