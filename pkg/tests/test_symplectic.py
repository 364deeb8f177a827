import random

import pytest
from hypothesis import given, strategies as st

from torusrep.angles import Angle, SymbolTable, ThetaMatrix
from torusrep.errors import DimensionError
from torusrep.lattice import mat_mul
from torusrep.builtin_examples import example_3_1
from torusrep.symplectic import (GeneratorWord, LatticeChange, SymplecticMatrix, act_on_theta,
                                 act_word, change_lattice, is_symplectic, random_unimodular,
                                 random_word, standard_J, symplectic_generators, word_matrix)

from _gen import random_theta


class TestJ:
    def test_g1(self):
        assert standard_J(1) == [[0, 1], [-1, 0]]

    def test_g2(self):
        assert standard_J(2) == [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]

    def test_square(self):
        j = standard_J(1)
        assert mat_mul(j, j) == [[-1, 0], [0, -1]]
        for g in (1, 2, 3):
            j = standard_J(g)
            jt = [list(r) for r in zip(*j)]
            assert mat_mul(j, jt) == [[int(a == b) for b in range(2 * g)] for a in range(2 * g)]

    def test_bad_genus(self):
        with pytest.raises(DimensionError):
            standard_J(0)


class TestIsSymplectic:
    def test_sl2(self):
        assert is_symplectic([[1, 1], [0, 1]])

    def test_handle_swap(self):
        swap = [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]
        assert is_symplectic(swap)

    def test_diag(self):
        assert not is_symplectic([[2, 0], [0, 1]])
        assert not is_symplectic([[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])

    def test_odd(self):
        with pytest.raises(DimensionError):
            is_symplectic([[1, 0, 0], [0, 1, 0], [0, 0, 1]])

    def test_constructor_validates(self):
        with pytest.raises(ValueError):
            SymplecticMatrix([[2, 0], [0, 1]])


class TestGenerators:
    def test_g1(self):
        assert [a.tolist() for a in symplectic_generators(1)] == [[[1, 1], [0, 1]], [[1, 0], [1, 1]]]

    @pytest.mark.parametrize("g", [1, 2, 3, 4])
    def test_valid(self, g):
        gens = symplectic_generators(g)
        assert len(gens) == 3 * g - 1
        if g == 2:
            assert len(gens) >= 5
        for a in gens:
            assert is_symplectic(a.entries) and is_symplectic(a.inverse().entries)
            assert a @ a.inverse() == SymplecticMatrix.identity(g)

    def test_closure_words(self, rng):
        for g in (1, 2, 3):
            for _ in range(20):
                w = random_word(g, rng.randint(0, 20), rng)
                m = word_matrix(w, g)
                assert is_symplectic(m.entries)
                assert is_symplectic(m.inverse().entries)
                assert word_matrix(w + w.inverse(), g) == SymplecticMatrix.identity(g)

    def test_word_reduce(self):
        assert GeneratorWord([1, 2, -2, -1, 3]).reduced() == GeneratorWord([3])
        assert GeneratorWord([1, -2]).inverse() == GeneratorWord([2, -1])
        with pytest.raises(ValueError):
            GeneratorWord([0])


def _theta_g1():
    st_ = SymbolTable(["t1", "t2"])
    return ThetaMatrix([[Angle.symbol(st_, "t1"), Angle.symbol(st_, "t2")]], st_)


class TestAction:
    def test_identity(self, rng):
        theta = random_theta(rng)
        assert act_on_theta(theta, SymplecticMatrix.identity(theta.g)) == theta

    def test_twist(self):
        # with theta A^-1, the inverse twist produces theta1 + theta2 in the second slot
        theta = _theta_g1()
        t1, t2 = theta.row(0)
        a = SymplecticMatrix([[1, -1], [0, 1]])
        assert act_on_theta(theta, a).row(0) == (t1, t1 + t2)
        b = SymplecticMatrix([[1, 1], [0, 1]])
        assert act_on_theta(theta, b).row(0) == (t1, t2 - t1)

    def test_dimension(self):
        with pytest.raises(DimensionError):
            act_on_theta(_theta_g1(), SymplecticMatrix.identity(2))
        with pytest.raises(DimensionError):
            change_lattice(_theta_g1(), LatticeChange([[0, 1], [1, 0]]))

    def test_left_action(self, rng):
        for _ in range(30):
            theta = random_theta(rng)
            g = theta.g
            a = word_matrix(random_word(g, rng.randint(0, 6), rng), g)
            b = word_matrix(random_word(g, rng.randint(0, 6), rng), g)
            assert act_on_theta(act_on_theta(theta, a), b) == act_on_theta(theta, b @ a)

    def test_act_word_matches_matrix(self, rng):
        for _ in range(20):
            theta = random_theta(rng)
            w = random_word(theta.g, 6, rng)
            assert act_word(theta, w) == act_on_theta(theta, word_matrix(w, theta.g))


class TestLatticeChange:
    def test_identity(self, rng):
        theta = random_theta(rng)
        assert change_lattice(theta, LatticeChange.identity(theta.n)) == theta

    def test_ex31_rows_cancel(self):
        out = change_lattice(example_3_1(), LatticeChange([[1, 0], [-1, 1]]))
        assert all(a.is_zero() for a in out.row(1))
        assert out.row(0) == example_3_1().row(0)

    def test_rejects_non_unimodular(self):
        with pytest.raises(ValueError):
            LatticeChange([[2, 0], [0, 1]])

    def test_commutes(self, rng):
        for _ in range(30):
            theta = random_theta(rng)
            a = word_matrix(random_word(theta.g, 8, rng), theta.g)
            h = random_unimodular(theta.n, rng)
            assert change_lattice(act_on_theta(theta, a), h) == act_on_theta(change_lattice(theta, h), a)

    @given(st.integers(1, 4), st.integers(0, 10_000))
    def test_random_unimodular(self, n, seed):
        h = random_unimodular(n, random.Random(seed))
        assert abs(h.det()) == 1
