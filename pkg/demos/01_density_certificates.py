"""Density certificates for the worked examples.

A representation of a genus-g surface group into T^n is recorded as an
n x 2g matrix of angles. Its image is dense exactly when the rows are
Z-independent and no integer combination of them is a nonzero torsion point.
We certify the built-in examples and look at why the first one fails.
"""
from torusrep import certify_density, closure_normal_form, get_example

# %% Two rows that are equal: the image sits on the diagonal of T^2.
theta = get_example("ex-3.1")
print(theta)
cert = certify_density(theta)
print("rank", cert.rank_z, "free", cert.pi_q_free, "dense", cert.dense, "k", cert.closure_dim)

# The normalizer h moves the relation row to the bottom, where it becomes zero.
nf = closure_normal_form(theta)
print("h =", nf.h.tolist())
print(nf.reduced(theta))

# %% Independent rows fill the torus.
cert = certify_density(get_example("ex-3.2"))
print("ex-3.2 dense:", cert.dense)

# %% A torsion relation. Rows (x, pi/3) and (x, 2pi/3) differ by a torsion point,
# so the witness is the difference vector.
from torusrep import ThetaMatrix

theta = ThetaMatrix.from_strings([["x", "pi/3"], ["x", "2*pi/3"]], ["x"])
cert = certify_density(theta)
print(cert.to_json())

# %% Every certificate is cross-checked against the stacked rank of (theta; pi I).
for name in ("ex-3.1", "ex-3.2", "app-A-2d", "app-A-nd", "class-D"):
    c = certify_density(get_example(name))
    print(f"{name:9s} dense={c.dense!s:5s} stacked rank={c.stacked_rank} (n + 2g = {c.n + 2 * c.g})")
