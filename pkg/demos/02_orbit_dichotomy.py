"""Genus one: rational pairs have finite orbits, irrational pairs fill the torus.

We run the breadth-first orbit exploration on two seeds and compare the
number of occupied grid cells and the dispersion (largest gap seen from a
probe grid).
"""
import math

from torusrep import FloatTorusMatrix, classify_orbit_genus1, dispersion, orbit_explore
from torusrep.angles import SymbolTable, angle_new

# %% (pi/2, pi/3) closes quickly.
st = SymbolTable()
report = classify_orbit_genus1([angle_new(st, "1/2"), angle_new(st, "1/3")])
print(report.prediction.value, "cells", report.cells, "closed", report.exhausted)

# %% (1, sqrt 2) keeps spreading until every grid cell is used.
seed = FloatTorusMatrix([[1.0, math.sqrt(2)]])
sample = orbit_explore(seed, 100_000, grid_delta=0.05)
print("cells", len(sample), "closed on the grid", sample.exhausted)
for count in (10, 100, 1000, 10_000, len(sample)):
    print(f"{count:6d} points  dispersion {dispersion(sample.prefix(count)):.4f}")

# Each point carries the generator word that produced it.
print("worst replay error", sample.replay_error())
print("example word", sample.words[-1])
