"""Approximating a target by base @ K with K symplectic.

For a base whose entries are independent over Q together with pi, every
target can be approached. The handle-wise solver uses the family
[[k, 1], [kh - 1, h]] on each handle; beam search explores generator words.
"""
import math

import numpy as np

from torusrep import ApproxRequest, FloatTorusMatrix, approx_symplectic

base = FloatTorusMatrix([[1.0, math.sqrt(2)]])
rng = np.random.default_rng(0)

for strategy in ("handle", "beam"):
    solved = 0
    for target in rng.uniform(0, 2 * math.pi, (10, 1, 2)):
        res = approx_symplectic(ApproxRequest(base, FloatTorusMatrix(target), 0.05, strategy=strategy))
        solved += res is not None
    print(strategy, "solved", solved, "of 10")

# %% One solution in detail.
res = approx_symplectic(ApproxRequest(base, FloatTorusMatrix([[0.3, 5.9]]), 0.05))
print("K =", res.k_matrix.tolist(), "error", round(res.achieved_error, 4), "C =", round(res.ratio_c, 2))

# %% Genus two, one handle at a time.
base2 = FloatTorusMatrix([[1.0, math.sqrt(2), math.sqrt(3), math.sqrt(5)]])
res = approx_symplectic(ApproxRequest(base2, FloatTorusMatrix([[0.5, 2.5, 4.0, 1.0]]), 0.05))
print(res.strategy.value, res.word)
print(np.array(res.k_matrix.entries))

# %% A rational base has a finite orbit, so small targets are out of reach.
rational = FloatTorusMatrix([[math.pi / 2, math.pi / 3]])
print(approx_symplectic(ApproxRequest(rational, FloatTorusMatrix([[1.0, 2.0]]), 0.05)))
