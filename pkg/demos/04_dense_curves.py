"""Is there a single curve whose image is dense?

The image of a curve with homology class k is theta @ k. It generates a
dense subgroup of T^n when pi and its n entries are independent over Q.
Density of the whole representation does not guarantee such a curve.
"""
from torusrep import ThetaMatrix, certify_density, find_dense_curve, get_example

# %% Genus one, one circle: some curve always works.
theta = ThetaMatrix.from_strings([["x", "pi/2"]], ["x"])
print(find_dense_curve(theta, 4))

# %% Dense in T^2, yet every curve lands in a one-dimensional family.
theta = get_example("app-A-2d")
print("dense:", certify_density(theta).dense, " curve:", find_dense_curve(theta, 8))

# %% Rows that are generic multiples of each other do admit a curve.
theta = get_example("class-D", g=2, n=3)
print("dense:", certify_density(theta).dense, " curve:", find_dense_curve(theta, 3))
