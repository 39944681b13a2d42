import itertools

import pytest

from sphere_rigidity.extraction import all_point_maps, composition_operator
from sphere_rigidity.lattice import GridSpec, SpaceModel, SphereError
from sphere_rigidity.peaks import intersect_max_sets, peak_family, peak_family_included
from sphere_rigidity.setcalc import max_set

from conftest import fn


class TestPeakFamily:
    def test_two_points_m1(self, two):
        assert list(peak_family(two, "p1", GridSpec(1))) == [fn(1, 0), fn(1, 1)]

    def test_single_point(self):
        space = SpaceModel.standard(1)
        for m in (1, 4):
            assert list(peak_family(space, "p1", GridSpec(m))) == [fn(1)]

    def test_two_points_m2(self, two):
        assert list(peak_family(two, "p1", GridSpec(2))) == [fn(1, 0), fn(1, "1/2"), fn(1, 1)]

    @pytest.mark.parametrize("n", range(1, 5))
    @pytest.mark.parametrize("m", range(1, 4))
    def test_counts(self, n, m):
        space = SpaceModel.standard(n)
        for t in space:
            assert len(peak_family(space, t, GridSpec(m))) == (m + 1) ** (n - 1)

    def test_unknown_point(self, two):
        with pytest.raises(SphereError, match="unknown point"):
            peak_family(two, "q", GridSpec(1))


class TestSeparation:
    def test_examples(self, two, three):
        assert peak_family_included(two, "p1", "p1", GridSpec(1))
        assert not peak_family_included(two, "p1", "p2", GridSpec(1))
        assert not peak_family_included(three, "p1", "p3", GridSpec(2))

    @pytest.mark.parametrize("n", [1, 2, 3])
    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_inclusion_iff_equal(self, n, m):
        space = SpaceModel.standard(n)
        for t0, t1 in itertools.product(space, repeat=2):
            assert peak_family_included(space, t0, t1, GridSpec(m)) == (t0 == t1)


class TestIntersection:
    def test_examples(self):
        assert intersect_max_sets([fn(1, "1/2"), fn(1, 1)]).ordered() == ("p1",)
        assert intersect_max_sets([fn(1, 0), fn(0, 1)]).ordered() == ()
        f = fn("1/2", 1, 1)
        assert intersect_max_sets([f]) == max_set(f)

    def test_empty_input(self):
        with pytest.raises(SphereError):
            intersect_max_sets([])

    @pytest.mark.parametrize("n, m", [(2, 2), (3, 2), (3, 3)])
    def test_nonempty_under_isometries(self, n, m):
        space, grid = SpaceModel.standard(n), GridSpec(m)
        for sigma in all_point_maps(space, space):
            phi = composition_operator(sigma, grid)
            for x in space:
                images = [phi(f) for f in peak_family(space, x, grid)]
                assert intersect_max_sets(images).members
