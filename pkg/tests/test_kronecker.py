import math
import warnings

import numpy as np
import pytest

from torusrep.angles import ThetaMatrix
from torusrep.density import certify_density
from torusrep.errors import HypothesisViolation
from torusrep.kronecker import (ApproxRequest, Strategy, approx_1d, approx_handle,
                                approx_symplectic, handle_matrix, handle_multiplier, minimum_gap)
from torusrep.orbit import FloatTorusMatrix, circle_distance, orbit_explore
from torusrep.symplectic import is_symplectic

SQRT2 = math.sqrt(2)


def brute_1d(alpha, beta, eps, bound):
    # oracle: scan k by |k|, nonnegative first
    for m in range(bound + 1):
        for k in ((0,) if m == 0 else (m, -m)):
            if circle_distance(k * alpha, beta) < eps:
                return k
    return None


class Test1D:
    def test_zero(self):
        assert approx_1d(1.0, 0.0, 0.1, 10) == 0

    def test_found(self):
        k = approx_1d(1.0, 0.5, 0.1, 100)
        assert k == brute_1d(1.0, 0.5, 0.1, 100) == -12
        assert circle_distance(k * 1.0, 0.5) < 0.1

    def test_rational_none(self):
        assert approx_1d(math.pi / 2, 0.3, 0.01, 10_000) is None

    def test_against_oracle(self):
        rng = np.random.default_rng(1)
        for alpha, beta in rng.uniform(0, 2 * math.pi, (100, 2)):
            assert approx_1d(alpha, beta, 0.05, 300) == brute_1d(alpha, beta, 0.05, 300)

    def test_invalid(self):
        with pytest.raises(ValueError):
            approx_1d(1.0, 0.5, 0.0, 10)
        with pytest.raises(ValueError):
            approx_1d(1.0, 0.5, 0.1, -1)


class TestHandle:
    def test_family_det(self):
        for k in range(-5, 6):
            for h in range(-5, 6):
                m = handle_matrix(k, h)
                assert m[0][0] * m[1][1] - m[0][1] * m[1][0] == 1
                assert is_symplectic(handle_multiplier(k, h))

    def test_rotation(self):
        t1, t2 = 1.0, SQRT2
        target = (t2, (-t1) % (2 * math.pi))
        assert approx_handle((t1, t2), target, 1e-9, 10) == (0, 0)

    def test_found(self):
        kh = approx_handle((1.0, 1.4142135), (0.1, 0.2), 0.3, 50)
        assert kh == (5, 7)
        k, h = kh
        img = (k * 1.0 + 1.4142135, (k * h - 1) * 1.0 + h * 1.4142135)
        assert max(circle_distance(img, (0.1, 0.2))) < 0.3

    def test_rational_none(self):
        assert approx_handle((math.pi / 2, math.pi / 3), (1.0, 2.0), 0.01, 200) is None


def _req(base, target, eps, **kw):
    return ApproxRequest(FloatTorusMatrix(base), FloatTorusMatrix(target), eps, **kw)


def _check(res, req):
    assert is_symplectic(res.k_matrix.entries)
    img = np.mod(req.base.values @ np.array(res.k_matrix.entries, dtype=float), 2 * math.pi)
    err = float(np.max(circle_distance(img, req.target.values)))
    assert err == pytest.approx(res.achieved_error) and err < req.epsilon


class TestSymplectic:
    def test_identity(self):
        req = _req([[1.0, SQRT2]], [[1.0, SQRT2]], 0.01)
        res = approx_symplectic(req)
        assert res.k_matrix.tolist() == [[1, 0], [0, 1]] and res.achieved_error == 0

    @pytest.mark.parametrize("strategy", ["auto", "handle", "beam", "brute"])
    def test_example_target(self, strategy):
        bound = 25 if strategy == "brute" else None
        req = _req([[1.0, 1.4142135]], [[0.3, 5.9]], 0.2, strategy=strategy, search_bound=bound)
        res = approx_symplectic(req)
        assert res is not None
        _check(res, req)

    def test_rational_none(self):
        base = [[math.pi / 2, math.pi / 3]]
        target = [[1.0, 2.0]]
        orbit = orbit_explore(FloatTorusMatrix(base), 10_000, 1e-6)
        assert orbit.exhausted
        gap = min(np.max(circle_distance(orbit.array(), np.array(target[0])), axis=1))
        eps = 0.05
        assert gap > eps  # target is farther than eps from every orbit point
        for strategy in ("auto", "beam"):
            assert approx_symplectic(_req(base, target, eps, strategy=strategy)) is None
        assert approx_symplectic(_req(base, target, eps, strategy="brute", search_bound=8)) is None

    def test_minimum_gap(self):
        orbit = orbit_explore(FloatTorusMatrix([[math.pi / 2, math.pi / 3]]), 10_000, 1e-6)
        assert minimum_gap(orbit.array()) == pytest.approx(math.pi / 6)

    def test_genus2_block(self):
        base = [[1.0, SQRT2, math.sqrt(3), math.sqrt(5)]]
        target = [[0.5, 2.5, 4.0, 1.0]]
        req = _req(base, target, 0.1)
        res = approx_symplectic(req)
        assert res is not None and res.strategy is Strategy.HANDLE_WISE
        _check(res, req)

    def test_random_targets(self):
        rng = np.random.default_rng(7)
        base = [[1.0, SQRT2]]
        for target in rng.uniform(0, 2 * math.pi, (10, 1, 2)):
            req = _req(base, target, 0.05)
            res = approx_symplectic(req)
            assert res is not None
            _check(res, req)

    def test_hypothesis(self):
        theta = ThetaMatrix.from_strings([["pi/2", "pi/3"]])
        cert = certify_density(theta)
        base = [[math.pi / 2, math.pi / 3]]
        with pytest.raises(HypothesisViolation):
            approx_symplectic(_req(base, [[1.0, 2.0]], 0.05, certificate=cert))
        with warnings.catch_warnings(record=True):
            warnings.simplefilter("always")
            res = approx_symplectic(_req(base, [[math.pi / 3, 3 * math.pi / 2]], 0.05,
                                         certificate=cert, allow_violation=True))
        assert res is not None and res.hypothesis_warning

    def test_request_validation(self):
        with pytest.raises(ValueError):
            _req([[1.0, 2.0]], [[1.0, 2.0]], 0)
        with pytest.raises(ValueError):
            _req([[1.0, 2.0]], [[1.0, 2.0, 3.0, 4.0]], 0.1)

    def test_json(self):
        req = _req([[1.0, SQRT2]], [[0.3, 5.9]], 0.2)
        out = approx_symplectic(req).to_json()
        assert out["found"] and out["ratio_C"] == pytest.approx(out["error"] / 0.2)
        assert set(out) >= {"found", "K", "error", "word", "ratio_C"}
