import itertools
import math

import numpy as np
import pytest

from kerrcat.exceptional import lep3_closed_form
from kerrcat.winding import (
    Contour,
    ResultantVector,
    resultant_vector,
    winding_number,
    winding_trajectory,
)

ALPHA = 1.521
KAPPA = 1 / 15.5
EPS3 = 0.009444278905278216
DELTA3 = 1.7943185620778273


def circle(center, radius, samples=720):
    return Contour(kind="circle", center=center, radius=radius, samples=samples)


class TestResultantVector:
    def test_repeated_pair_kills_r1(self):
        rv = resultant_vector(-1.0, -1.0, -2.5)
        assert rv.r1 == 0.0
        assert rv.r2 != 0.0

    def test_triple_root_kills_both(self):
        rv = resultant_vector(-0.7, -0.7, -0.7)
        assert (rv.r1, rv.r2) == (0.0, 0.0)
        assert rv.norm == 0.0

    def test_permutation_invariance(self):
        vals = (-0.3, -0.9 + 0.4j, -0.9 - 0.4j)
        ref = resultant_vector(*vals)
        for perm in itertools.permutations(vals):
            rv = resultant_vector(*perm)
            assert rv.r1 == pytest.approx(ref.r1, rel=1e-12)
            assert rv.r2 == pytest.approx(ref.r2, rel=1e-12)

    def test_identity_against_eigenvalue_products(self, rng):
        # R1 = 108 (q^2 - m^3), R2 = 432 q for the cubic t^3 - 3 m t - 2 q;
        # roots from the companion matrix are the independent oracle
        for _ in range(1000):
            q = rng.uniform(-2.0, 2.0)
            m = rng.uniform(-2.0, 2.0)
            roots = np.roots([1.0, 0.0, -3.0 * m, -2.0 * q])
            d = (
                (roots[0] - roots[1])
                * (roots[0] - roots[2])
                * (roots[1] - roots[2])
            )
            r1_oracle = -(d * d).real
            r2_oracle = (
                -8.0
                * (roots[0] + roots[1] - 2 * roots[2])
                * (roots[0] + roots[2] - 2 * roots[1])
                * (roots[1] + roots[2] - 2 * roots[0])
            ).real
            scale1 = 108.0 * (q * q + abs(m) ** 3) + 1e-30
            scale2 = 432.0 * abs(q) + 1e-30
            assert abs(108.0 * (q * q - m**3) - r1_oracle) < 1e-9 * scale1
            assert abs(432.0 * q - r2_oracle) < 1e-9 * scale2

    def test_rejects_nonconjugate_triple(self):
        with pytest.raises(ValueError, match="conjugation"):
            resultant_vector(-1.0, -0.5 + 0.3j, -0.7 - 0.2j)

    def test_norm(self):
        assert ResultantVector(3.0, 4.0).norm == 5.0


class TestWindingNumber:
    def test_circle_enclosing_lep3(self):
        res = winding_number(circle((EPS3, DELTA3), 0.3 * EPS3), ALPHA, KAPPA)
        assert abs(res.winding) == 1
        assert res.winding == -1  # ccw contour, (+eps, +delta) vertex
        assert abs(res.raw - res.winding) < 1e-6
        assert res.samples <= 46080

    def test_mirror_images_flip_chirality(self):
        for center, expect in [
            ((-EPS3, DELTA3), +1),
            ((EPS3, -DELTA3), +1),
            ((-EPS3, -DELTA3), -1),
        ]:
            res = winding_number(circle(center, 0.3 * EPS3), ALPHA, KAPPA)
            assert res.winding == expect

    def test_congruent_non_enclosing_circle(self):
        res = winding_number(circle((1.5 * EPS3, 0.0), 0.3 * EPS3), ALPHA, KAPPA)
        assert res.winding == 0
        assert abs(res.raw) < 1e-6

    def test_generic_lep2_point_not_topological(self):
        # on the lower LEP2 branch: only R1 vanishes there, the vector
        # stays bounded away from zero
        res = winding_number(circle((0.004, 1.2725457675), 8e-4), ALPHA, KAPPA)
        assert res.winding == 0
        assert res.min_norm > 1.0

    def test_mirror_pair_windings_cancel(self):
        # contour enclosing both (+eps3, delta3) and (-eps3, delta3):
        # chirality is odd in eps, so the sum recorded by the oracle is 0
        res = winding_number(circle((0.0, DELTA3), 2.0 * EPS3), ALPHA, KAPPA)
        assert res.winding == 0

    def test_fast_path_matches_eigenvalue_path(self):
        for center, radius in [
            ((EPS3, DELTA3), 0.3 * EPS3),
            ((0.0, DELTA3), 2.0 * EPS3),
            ((1.5 * EPS3, 0.0), 0.3 * EPS3),
        ]:
            fast = winding_number(circle(center, radius), ALPHA, KAPPA, fast=True)
            slow = winding_number(circle(center, radius), ALPHA, KAPPA, fast=False)
            assert fast.winding == slow.winding
            assert fast.raw == pytest.approx(slow.raw, abs=1e-6)

    def test_polyline_square_matches_circle(self):
        h = 3e-3
        sq = Contour(
            kind="polyline",
            vertices=(
                (EPS3 - h, DELTA3 - h),
                (EPS3 + h, DELTA3 - h),
                (EPS3 + h, DELTA3 + h),
                (EPS3 - h, DELTA3 + h),
            ),
        )
        assert winding_number(sq, ALPHA, KAPPA).winding == -1

    def test_contour_through_lep3_rejected(self):
        with pytest.raises(RuntimeError, match="resultant zero"):
            winding_number(circle((EPS3, DELTA3), 0.05 * EPS3), ALPHA, KAPPA)

    def test_quantization_on_random_contours(self, rng):
        done = 0
        while done < 50:
            center = (rng.uniform(-0.03, 0.03), rng.uniform(-2.5, 2.5))
            radius = rng.uniform(1e-3, 0.4)
            try:
                res = winding_number(circle(center, radius), ALPHA, KAPPA)
            except RuntimeError:
                continue  # passed too near a resultant zero; redraw
            assert abs(res.raw - res.winding) < 1e-3
            done += 1

    def test_kappa_zero_rejected(self):
        with pytest.raises(ValueError):
            winding_number(circle((0.0, 0.0), 0.1), ALPHA, 0.0)


class TestWindingTrajectory:
    def test_closed_and_normalized(self):
        rows = winding_trajectory(circle((EPS3, DELTA3), 0.3 * EPS3), ALPHA, KAPPA)
        assert rows[0][0] == 0.0
        assert rows[-1][0] == pytest.approx(2 * math.pi, abs=1e-12)
        assert abs(rows[0][1] - rows[-1][1]) < 1e-9
        assert abs(rows[0][2] - rows[-1][2]) < 1e-9
        for _, r1n, r2n in rows:
            assert math.hypot(r1n, r2n) == pytest.approx(1.0, abs=1e-12)

    @staticmethod
    def _origin_turns(rows):
        return (
            sum(
                math.atan2(x1 * y2 - y1 * x2, x1 * x2 + y1 * y2)
                for (_, x1, y1), (_, x2, y2) in zip(rows[:-1], rows[1:])
            )
            / (2 * math.pi)
        )

    def test_enclosing_projection_encircles_origin(self):
        rows = winding_trajectory(circle((EPS3, DELTA3), 0.3 * EPS3), ALPHA, KAPPA)
        assert round(self._origin_turns(rows)) == -1

    def test_non_enclosing_projection_does_not(self):
        rows = winding_trajectory(circle((1.5 * EPS3, 0.0), 0.3 * EPS3), ALPHA, KAPPA)
        assert abs(self._origin_turns(rows)) < 1e-6


class TestContourValidation:
    def test_bad_kind(self):
        with pytest.raises(ValueError, match="kind"):
            Contour(kind="spiral", radius=1.0)

    def test_zero_radius(self):
        with pytest.raises(ValueError, match="radius"):
            Contour(kind="circle", radius=0.0)

    def test_too_few_vertices(self):
        with pytest.raises(ValueError, match="vertices"):
            Contour(kind="polyline", vertices=((0.0, 0.0), (1.0, 1.0)))

    def test_too_few_samples(self):
        with pytest.raises(ValueError, match="samples"):
            Contour(kind="circle", radius=1.0, samples=4)

    def test_circle_closure(self):
        c = circle((0.3, 1.1), 0.25)
        assert c.point(0.0) == pytest.approx(c.point(2 * math.pi))

    def test_lep3_consistency_with_exceptional_module(self):
        ep = lep3_closed_form(ALPHA, KAPPA)[0]
        assert ep.eps == pytest.approx(EPS3, rel=1e-12)
        assert ep.delta == pytest.approx(DELTA3, rel=1e-12)
