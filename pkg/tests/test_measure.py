"""Intensity models, the common-reference reduction, point patterns, and
mark kernels."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ppdiv import (DensityPair, DiscreteIntensity, DomainMismatch,
                   GridIntensity, MarkedModel, OutOfWindow, PointPattern,
                   ScaledIntensity, SmoothIntensity, SummedIntensity,
                   common_reference, count, total_mass)

INF = math.inf


class TestCommonReference:
    def test_disjoint_discrete_supports(self):
        a = DiscreteIntensity([("x", 2.0)])
        b = DiscreteIntensity([("y", 3.0)])
        pair = common_reference(a, b)
        assert pair.reference.support_locations() == ("x", "y")
        assert pair.f == (2.0, 0.0)
        assert pair.g == (0.0, 3.0)

    def test_grid_refinement_of_constant_density(self):
        a = GridIntensity([(0, 2)], [2], [1.0, 1.0])
        b = GridIntensity([(0, 2)], [1], [2.0])
        pair = common_reference(a, b)
        assert pair.reference.shape == (2,)
        assert pair.f == (1.0, 1.0)
        assert pair.g == (2.0, 2.0)

    def test_identity_pair(self):
        a = GridIntensity([(0, 1)], [4], [1.0, 2.0, 3.0, 4.0])
        pair = common_reference(a, a)
        assert pair.f == pair.g

    def test_overlapping_grids_extend_with_zeros(self):
        a = GridIntensity([(0, 2)], [2], [1.0, 2.0])
        b = GridIntensity([(1, 3)], [2], [3.0, 4.0])
        pair = common_reference(a, b)
        assert pair.reference.bounds == ((0.0, 3.0),)
        assert pair.reference.shape == (3,)
        assert pair.f == (1.0, 2.0, 0.0)
        assert pair.g == (0.0, 3.0, 4.0)

    def test_disjoint_grid_boxes_rejected(self):
        a = GridIntensity([(0, 1)], [1], [1.0])
        b = GridIntensity([(2, 3)], [1], [1.0])
        with pytest.raises(DomainMismatch):
            common_reference(a, b)

    def test_class_mismatch_rejected(self):
        a = DiscreteIntensity([("x", 1.0)])
        b = GridIntensity([(0, 1)], [1], [1.0])
        with pytest.raises(DomainMismatch):
            common_reference(a, b)

    def test_incommensurate_grids_rejected(self):
        a = GridIntensity([(0, 1)], [3], [1.0, 1.0, 1.0])
        b = GridIntensity([(0, math.sqrt(2))], [1], [1.0])
        with pytest.raises(DomainMismatch):
            common_reference(a, b)

    def test_roundtrip_masses(self):
        # integrating each density against the reference reproduces the
        # per-cell/atom masses of the inputs
        rng = np.random.default_rng(5)
        a = GridIntensity([(0, 2)], [4], tuple(rng.uniform(0, 3, 4)))
        b = GridIntensity([(0, 2)], [6], tuple(rng.uniform(0, 3, 6)))
        pair = common_reference(a, b)
        ref = pair.reference
        w = ref.values_array.reshape(-1) * ref.cell_volume
        assert math.fsum(w * np.asarray(pair.f)) == pytest.approx(
            total_mass(a), abs=1e-12)
        assert math.fsum(w * np.asarray(pair.g)) == pytest.approx(
            total_mass(b), abs=1e-12)
        for centre, fv in zip(ref.support_locations(), pair.f):
            assert fv == pytest.approx(a.density_at(centre), abs=1e-12)

    def test_smooth_pair_shares_domain(self):
        a = SmoothIntensity([(0, 1)], lambda x: 2.0)
        b = SmoothIntensity([(0, 2)], lambda x: 1.0)
        with pytest.raises(DomainMismatch):
            common_reference(a, b)


class TestTotalMass:
    def test_discrete(self):
        assert total_mass(DiscreteIntensity([("x", 2.0), ("y", 3.0)])) == 5.0

    def test_grid(self):
        assert total_mass(GridIntensity([(0, 2)], [2], [1.0, 3.0])) == 4.0

    def test_smooth_sigma_finite(self):
        lebesgue = SmoothIntensity([(0.0, INF)], lambda x: 1.0)
        assert total_mass(lebesgue) == INF

    def test_truncation_sequence_has_finite_mass(self):
        lebesgue = SmoothIntensity([(0.0, INF)], lambda x: 1.0)
        for n in (1, 5, 30):
            assert total_mass(lebesgue.truncated(n)) == pytest.approx(
                float(n), abs=1e-10)

    def test_smooth_finite(self):
        m = SmoothIntensity([(0.0, INF)], lambda x: math.exp(-x))
        assert total_mass(m) == pytest.approx(1.0, abs=1e-9)

    @given(c=st.floats(min_value=0.0, max_value=50.0))
    def test_scale(self, c):
        m = DiscreteIntensity([("x", 2.0), ("y", 3.0)])
        assert total_mass(ScaledIntensity(c, m)) == pytest.approx(
            c * total_mass(m), rel=1e-12)

    def test_scale_of_infinite(self):
        lebesgue = SmoothIntensity([(0.0, INF)], lambda x: 1.0)
        assert total_mass(ScaledIntensity(2.0, lebesgue)) == INF
        assert total_mass(ScaledIntensity(0.0, lebesgue)) == 0.0

    def test_sum_extended(self):
        lebesgue = SmoothIntensity([(0.0, INF)], lambda x: 1.0)
        decaying = SmoothIntensity([(0.0, INF)], lambda x: math.exp(-x))
        assert total_mass(SummedIntensity([lebesgue, decaying])) == INF

    def test_sum_matches_parts(self):
        parts = [DiscreteIntensity([("x", 1.0), ("y", 2.0)]),
                 DiscreteIntensity([("y", 0.5), ("z", 1.5)])]
        s = SummedIntensity(parts)
        assert total_mass(s) == pytest.approx(5.0, abs=1e-12)
        flat = s.flattened()
        assert dict(flat.atoms) == {"x": 1.0, "y": 2.5, "z": 1.5}

    def test_sum_rejects_mixed_classes(self):
        with pytest.raises(DomainMismatch):
            SummedIntensity([DiscreteIntensity([("x", 1.0)]),
                             GridIntensity([(0, 1)], [1], [1.0])])

    def test_smooth_combinators_flatten(self):
        doubled = ScaledIntensity(
            2.0, SmoothIntensity([(0, 1)], lambda x: x)).flattened()
        assert doubled.density(0.5) == 1.0
        summed = SummedIntensity(
            [SmoothIntensity([(0, 1)], lambda x: 1.0),
             SmoothIntensity([(0, 1)], lambda x: 2.0)]).flattened()
        assert summed.density(0.3) == 3.0
        assert total_mass(summed) == pytest.approx(3.0, abs=1e-10)


class TestPointPattern:
    def test_count_interval(self):
        eta = PointPattern([(0.3, 1), (0.7, 1)])
        assert count(eta, (0.0, 0.5)) == 1

    def test_count_empty(self):
        assert count(PointPattern(()), (0.0, 1.0)) == 0

    def test_count_multiplicity(self):
        eta = PointPattern([(0.3, 2)])
        assert count(eta, (0.0, 1.0)) == 2

    def test_out_of_window(self):
        eta = PointPattern([(0.3, 1)], window=(0.0, 1.0))
        with pytest.raises(OutOfWindow):
            count(eta, (0.0, 2.0))

    def test_discrete_regions(self):
        eta = PointPattern([("a", 2), ("b", 1)], window=frozenset("abc"))
        assert count(eta, {"a"}) == 2
        assert count(eta, {"a", "b"}) == 3
        with pytest.raises(OutOfWindow):
            count(eta, {"z"})

    def test_window_containment_enforced(self):
        with pytest.raises(ValueError):
            PointPattern([(1.5, 1)], window=(0.0, 1.0))

    def test_positive_multiplicity(self):
        with pytest.raises(ValueError):
            PointPattern([(0.5, 0)])


class TestMarkKernel:
    def test_normalised_kernel_accepted(self):
        base = DiscreteIntensity([("a", 1.0)])
        marks = DiscreteIntensity([("u", 1.0), ("v", 1.0)])
        MarkedModel(base, marks, lambda t, x: 0.5)

    def test_unnormalised_kernel_rejected(self):
        base = DiscreteIntensity([("a", 1.0)])
        marks = DiscreteIntensity([("u", 1.0), ("v", 1.0)])
        with pytest.raises(ValueError):
            MarkedModel(base, marks, lambda t, x: 0.6)

    def test_normalisation_tolerance(self):
        base = DiscreteIntensity([("a", 1.0)])
        marks = DiscreteIntensity([("u", 1.0), ("v", 1.0)])
        MarkedModel(base, marks, lambda t, x: 0.5 + 4e-11)

    def test_grid_mark_reference(self):
        base = GridIntensity([(0, 1)], [2], [1.0, 1.0])
        marks = GridIntensity([(0, 1)], [4], [1.0] * 4)
        MarkedModel(base, marks, lambda t, x: 1.0)


class TestDensityPair:
    def test_reference_weights_respected(self):
        # same measures via nu and 2*nu must carry halved densities
        ref1 = DiscreteIntensity([("a", 1.0), ("b", 1.0)])
        ref2 = DiscreteIntensity([("a", 2.0), ("b", 2.0)])
        p1 = DensityPair(ref1, [1.0, 2.0], [2.0, 1.0])
        p2 = DensityPair(ref2, [0.5, 1.0], [1.0, 0.5])
        assert p1.lambda_mass() == p2.lambda_mass() == 3.0

    def test_infinite_density_rejected(self):
        ref = DiscreteIntensity([("a", 1.0)])
        with pytest.raises(ValueError):
            DensityPair(ref, [INF], [1.0])

    def test_grid_boundary_tie_break(self):
        grid = GridIntensity([(0, 2)], [2], [1.0, 5.0])
        # interior boundary points belong to the lower-index cell
        assert grid.density_at(1.0) == 1.0
        assert grid.density_at(1.0 + 1e-12) == 5.0
        assert grid.density_at(2.0) == 5.0
