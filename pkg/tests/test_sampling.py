import numpy as np
import pytest

from ovlomax.dist_core import DomainError, InverseLomax, log_transform
from ovlomax.sampling import RankedSample, RssDesign, SrsDesign, draw_rss, draw_srs


class TestDesigns:
    def test_sizes(self):
        assert SrsDesign(12).n == 12
        d = RssDesign(r=3, m=8)
        assert (d.r, d.m, d.n) == (3, 8, 24)

    @pytest.mark.parametrize("bad", [0, -2, 2.5, True])
    def test_srs_validation(self, bad):
        with pytest.raises((DomainError, TypeError)):
            SrsDesign(bad)

    def test_rss_validation(self):
        with pytest.raises((DomainError, TypeError)):
            RssDesign(r=0, m=5)
        with pytest.raises((DomainError, TypeError)):
            RssDesign(r=2, m=-1)


class TestDrawSrs:
    def test_shape_and_positivity(self, rng):
        x = draw_srs(InverseLomax(1.0), SrsDesign(50), rng)
        assert x.shape == (50,)
        assert np.all(x > 0)

    def test_deterministic(self):
        d = InverseLomax(0.6)
        a = draw_srs(d, SrsDesign(5), np.random.default_rng(1))
        b = draw_srs(d, SrsDesign(5), np.random.default_rng(1))
        assert np.array_equal(a, b)


class TestDrawRss:
    def test_shape(self, rng):
        ranked = draw_rss(InverseLomax(1.0), RssDesign(r=4, m=6), rng)
        assert ranked.values.shape == (4, 6)
        assert ranked.design == RssDesign(r=4, m=6)

    def test_consumes_r_squared_per_cycle(self, rng):
        # r*r raw draws per cycle, m cycles in total
        d = InverseLomax(1.0)
        state_rng = np.random.default_rng(9)
        draw_rss(d, RssDesign(r=3, m=4), state_rng)
        probe = state_rng.random()
        ref_rng = np.random.default_rng(9)
        ref_rng.random(3 * 3 * 4)
        assert probe == ref_rng.random()

    def test_degenerate_design_equals_srs(self):
        d = InverseLomax(0.8)
        ranked = draw_rss(d, RssDesign(r=1, m=5), np.random.default_rng(2))
        plain = draw_srs(d, SrsDesign(5), np.random.default_rng(2))
        assert np.allclose(np.sort(ranked.values.ravel()), np.sort(plain))

    def test_row_means_increase_with_rank(self):
        # judgment ranking on raw values: higher rank rows sit higher
        d = InverseLomax(1.0)
        ranked = draw_rss(d, RssDesign(r=4, m=4000), np.random.default_rng(3))
        medians = np.median(ranked.values, axis=1)
        assert np.all(np.diff(medians) > 0)

    def test_rank_maps_to_reversed_exponential_order(self):
        # ascending raw ranks reverse under t = log(1 + 1/x): the top raw
        # rank in a set of 2 behaves like the minimum of 2 exponentials
        alpha = 1.0
        ranked = draw_rss(InverseLomax(alpha), RssDesign(r=2, m=200_000),
                          np.random.default_rng(4))
        t = log_transform(ranked.values)
        top_mean = t[1].mean()     # raw rank 2 of 2
        bottom_mean = t[0].mean()  # raw rank 1 of 2
        assert top_mean == pytest.approx(alpha / 2, rel=0.02)
        assert bottom_mean == pytest.approx(1.5 * alpha, rel=0.02)


class TestRankedSample:
    def test_validates_shape(self):
        with pytest.raises(DomainError):
            RankedSample(values=np.ones((2, 3)), design=RssDesign(r=3, m=2))

    def test_validates_positivity(self):
        vals = np.ones((2, 2))
        vals[0, 0] = -1.0
        with pytest.raises(DomainError):
            RankedSample(values=vals, design=RssDesign(r=2, m=2))
