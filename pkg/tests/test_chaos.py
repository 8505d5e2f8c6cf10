import numpy as np
import pytest

from chaoslab.chaos import (
    apply_signs,
    as_sign_matrix,
    chaos_coefficients,
    decouple_identity_rhs,
    eval_decoupled,
    eval_undecoupled,
    shift_map,
)
from chaoslab.errors import EnumerationCapError
from chaoslab.extremal import walsh_sign_arrangement
from chaoslab.rearrange import distribution, equimeasurable


def masses(step):
    vals, counts = np.unique(step.flat_values(), return_counts=True)
    return {float(v): c * step.atom_measure for v, c in zip(vals, counts)}


class TestEvalDecoupled:
    def test_rank_one(self):
        x = eval_decoupled([[1.0]])
        assert masses(x) == {1.0: 0.5, -1.0: 0.5}

    def test_all_ones_corner(self):
        x = eval_decoupled(np.ones((2, 2)))
        # the all-plus pair is mask (0, 0)
        assert x.values[0, 0] == 4.0
        assert x.values.max() == 4.0

    def test_identity_coefficients(self):
        x = eval_decoupled([[1.0, 0.0], [0.0, 1.0]])
        assert masses(x) == {2.0: 0.25, 0.0: 0.5, -2.0: 0.25}

    def test_cap(self):
        with pytest.raises(EnumerationCapError):
            eval_decoupled(np.ones((14, 14)))


class TestEvalUndecoupled:
    def test_single_product(self):
        b = np.zeros((2, 2))
        b[0, 1] = 1.0
        assert masses(eval_undecoupled(b)) == {1.0: 0.5, -1.0: 0.5}

    def test_symmetrized_half(self):
        b = np.zeros((2, 2))
        b[0, 1] = b[1, 0] = 0.5
        assert masses(eval_undecoupled(b)) == {1.0: 0.5, -1.0: 0.5}

    def test_all_ones_off_diagonal(self):
        b = np.ones((3, 3)) - np.eye(3)
        assert masses(eval_undecoupled(b)) == {6.0: 0.25, -2.0: 0.75}

    def test_nonzero_diagonal_rejected(self):
        with pytest.raises(ValueError, match="diagonal must vanish"):
            eval_undecoupled(np.eye(2))

    def test_rectangular_rejected(self):
        with pytest.raises(ValueError):
            eval_undecoupled(np.zeros((2, 3)))


class TestDecouplingIdentity:
    def test_hand_case(self):
        b = np.zeros((2, 2))
        b[0, 1] = 1.0
        lhs = eval_undecoupled(b)
        rhs = decouple_identity_rhs(b, 2)
        assert np.array_equal(lhs.values, rhs.values)

    def test_zero(self):
        rhs = decouple_identity_rhs(np.zeros((3, 3)), 3)
        assert np.all(rhs.values == 0.0)

    def test_random_n5(self):
        rng = np.random.Generator(np.random.Philox(key=11))
        for _ in range(10):
            b = rng.standard_normal((5, 5))
            np.fill_diagonal(b, 0.0)
            lhs = eval_undecoupled(b)
            rhs = decouple_identity_rhs(b, 5)
            assert np.abs(lhs.values - rhs.values).max() <= 1e-12

    def test_random_up_to_n8(self):
        rng = np.random.Generator(np.random.Philox(key=12))
        for n in range(2, 9):
            b = rng.standard_normal((n, n))
            np.fill_diagonal(b, 0.0)
            lhs = eval_undecoupled(b)
            rhs = decouple_identity_rhs(b, n)
            assert np.abs(lhs.values - rhs.values).max() <= 1e-12

    def test_subset_cap(self):
        with pytest.raises(EnumerationCapError):
            decouple_identity_rhs(np.zeros((13, 13)), 13)


class TestApplySigns:
    def test_identity_and_negation(self):
        a = np.arange(6.0).reshape(2, 3)
        assert np.array_equal(apply_signs(a, np.ones((2, 3))), a)
        assert np.array_equal(apply_signs(a, -np.ones((2, 3))), -a)

    def test_involution(self):
        rng = np.random.Generator(np.random.Philox(key=13))
        a = rng.standard_normal((3, 4))
        theta = np.where(rng.random((3, 4)) < 0.5, -1.0, 1.0)
        assert np.array_equal(apply_signs(apply_signs(a, theta), theta), a)

    def test_block_signs_recover_walsh_pattern(self):
        theta = walsh_sign_arrangement(2)
        assert np.array_equal(apply_signs(np.ones((4, 4)), theta), theta)

    def test_validation(self):
        with pytest.raises(ValueError):
            apply_signs(np.ones((2, 2)), np.ones((2, 3)))
        with pytest.raises(ValueError):
            as_sign_matrix(np.array([[0.5, 1.0], [1.0, 1.0]]))
        with pytest.raises(ValueError):
            as_sign_matrix(np.array([[1.0, -1.0], [1.0, 1.0]]), symmetric=True)


class TestChaosCoefficients:
    def test_recovers_unit_coefficient(self):
        x = eval_decoupled([[0.0, 1.0], [0.0, 0.0]])
        assert np.array_equal(chaos_coefficients(x, 2, 2), [[0.0, 1.0], [0.0, 0.0]])

    def test_constant_function_projects_to_zero(self):
        from chaoslab.dyadic import StepFunction2D

        x = StepFunction2D(n=2, m=2, values=np.ones((4, 4)))
        assert np.all(chaos_coefficients(x, 2, 2) == 0.0)

    def test_roundtrip_random(self):
        rng = np.random.Generator(np.random.Philox(key=14))
        a = rng.standard_normal((3, 3))
        x = eval_decoupled(a)
        assert np.abs(chaos_coefficients(x, 3, 3) - a).max() <= 1e-12

    def test_generation_too_small(self):
        x = eval_decoupled(np.ones((2, 2)))
        with pytest.raises(ValueError, match="generation too small"):
            chaos_coefficients(x, 3, 2)


class TestShiftMap:
    def test_single_entry(self):
        b = shift_map([[1.0]], 1)
        assert b.shape == (2, 2)
        assert b[0, 1] == 1.0 and b.sum() == 1.0
        assert masses(eval_undecoupled(b)) == {1.0: 0.5, -1.0: 0.5}

    def test_random_equimeasurable(self):
        rng = np.random.Generator(np.random.Philox(key=15))
        for _ in range(10):
            a = rng.standard_normal((3, 3))
            assert equimeasurable(
                eval_decoupled(a), eval_undecoupled(shift_map(a, 3))
            )

    def test_all_ones_peak(self):
        a = np.ones((2, 2))
        und = eval_undecoupled(shift_map(a, 2))
        dec = eval_decoupled(a)
        assert und.values.max() == 4.0 == dec.values.max()
        # the peak level set is at least one corner cell of measure 1/16
        d = distribution(und)
        assert d.at(3.0) >= 1.0 / 16.0
        assert d.at(3.0) == distribution(dec).at(3.0)


class TestIndexRelabeling:
    def test_distribution_depends_only_on_block(self):
        rng = np.random.Generator(np.random.Philox(key=16))
        block = rng.standard_normal((2, 3))
        a1 = np.zeros((6, 8))
        a1[np.ix_([0, 4], [1, 2, 7])] = block
        a2 = np.zeros((9, 10))
        a2[np.ix_([3, 8], [0, 5, 9])] = block
        assert equimeasurable(eval_decoupled(a1), eval_decoupled(a2))
