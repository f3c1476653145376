import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rliff import Position2D, SyncedEstimates, Trajectory, WeightVector, fuse, tracking_error

coord = st.floats(min_value=-50, max_value=50, allow_nan=False, allow_infinity=False)
weight = st.floats(min_value=-1, max_value=2, allow_nan=False, allow_infinity=False)
points = st.builds(Position2D, coord, coord)
weights = st.builds(WeightVector, weight, weight)


def synced(truth=(0, 0), rssi=(0, 0), pdr=(0, 0), aoa=(0, 0), t=0):
    return SyncedEstimates(t, Position2D(*truth), Position2D(*rssi), Position2D(*pdr), Position2D(*aoa))


class TestTypes:
    @pytest.mark.parametrize("x, y", [(math.nan, 0.0), (0.0, math.inf), (-math.inf, 1.0)])
    def test_position_rejects_non_finite(self, x, y):
        with pytest.raises(ValueError):
            Position2D(x, y)

    def test_weight_vector_pdr_is_derived(self):
        w = WeightVector(0.5, 0.2)
        assert w.w_pdr == pytest.approx(0.3)
        assert sum(w.as_tuple()) == pytest.approx(1.0, abs=1e-15)

    def test_from_triple_checks_sum(self):
        w = WeightVector.from_triple(0.825227, -0.339092, 0.513865)
        assert w.w_pdr == pytest.approx(-0.339092)
        with pytest.raises(ValueError):
            WeightVector.from_triple(0.5, 0.5, 0.5)

    def test_trajectory_rejects_empty_and_unordered(self):
        with pytest.raises(ValueError):
            Trajectory("e", "rectangular", ())
        with pytest.raises(ValueError):
            Trajectory("e", "rectangular", (synced(t=1), synced(t=1)))
        with pytest.raises(ValueError):
            Trajectory("e", "zigzag", (synced(),))


class TestFuse:
    def test_equal_inputs(self):
        est = synced(rssi=(2, 3), pdr=(2, 3), aoa=(2, 3))
        assert fuse(est, WeightVector(0.7, -0.4)) == Position2D(2, 3)

    def test_selector_weight(self):
        est = synced(rssi=(1.5, 0.5), pdr=(4.0, -2.0), aoa=(9.0, 9.0))
        f = fuse(est, WeightVector(1.0, 0.0))
        assert (f.x, f.y) == pytest.approx((1.5, 0.5), abs=1e-12)

    def test_equal_weights_worked_example(self):
        est = synced(rssi=(0, 0), pdr=(3, 0), aoa=(0, 3))
        f = fuse(est, WeightVector(1 / 3, 1 / 3))
        assert (f.x, f.y) == pytest.approx((1.0, 1.0), abs=1e-12)

    @given(points, weights)
    def test_affine_identity_exact(self, p, w):
        est = SyncedEstimates(0, p, p, p, p)
        assert fuse(est, w) == p

    @given(points, points, points, weights, coord, coord)
    def test_translation_equivariance(self, r, p, a, w, dx, dy):
        d = Position2D(dx, dy)
        base = fuse(SyncedEstimates(0, r, r, p, a), w)
        moved = fuse(SyncedEstimates(0, r + d, r + d, p + d, a + d), w)
        assert moved.x == pytest.approx(base.x + dx, abs=1e-9)
        assert moved.y == pytest.approx(base.y + dy, abs=1e-9)


class TestTrackingError:
    def test_zero_when_fused_equals_truth(self):
        assert tracking_error(synced(truth=(1, 1), rssi=(1, 1), pdr=(1, 1), aoa=(1, 1)), WeightVector(0.2, 0.3)) == 0

    def test_three_four_five(self):
        est = synced(truth=(0, 0), rssi=(0.3, 0.4), pdr=(5, 5), aoa=(-5, 2))
        assert tracking_error(est, WeightVector(1.0, 0.0)) == pytest.approx(0.5, abs=1e-12)

    def test_equal_weights_example(self):
        est = synced(rssi=(0, 0), pdr=(3, 0), aoa=(0, 3))
        assert tracking_error(est, WeightVector(1 / 3, 1 / 3)) == pytest.approx(math.sqrt(2), abs=1e-12)

    @given(points, points, points, points, weights)
    def test_matches_distance_to_fused_point(self, t, r, p, a, w):
        est = SyncedEstimates(0, t, r, p, a)
        f = fuse(est, w)
        err = tracking_error(est, w)
        assert err >= 0
        # symmetric: distance truth->fused equals fused->truth
        assert err == pytest.approx(math.hypot(f.x - t.x, f.y - t.y), abs=1e-9)
