import math
from fractions import Fraction

import pytest

from radsob.opspace import TraceExtPair, boundedness_report, extend, trace
from radsob.profile import Profile, RadialField, SquaredProfile, to_squared
from radsob.quad import sphere_area

ONE = Profile([(1, 0, 0)])
RHO2 = Profile([(1, 2, 0)])
GAUSS = Profile([(1, 0, 1)])


class TestOperators:
    def test_trace_examples(self):
        assert trace(RadialField(2, RHO2)) == SquaredProfile([(1, 1, 0)])
        assert trace(RadialField(3, GAUSS)) == SquaredProfile([(1, 0, 1)])
        assert trace(RadialField(2, Profile([(3, 4, 2)]))) == SquaredProfile([(3, 2, 2)])

    def test_extend_examples(self):
        assert extend(SquaredProfile([(1, 0, 0)]), 3).profile == ONE
        assert extend(SquaredProfile([(1, 1, 0)]), 2).profile == RHO2

    def test_round_trips_exact(self, corpus):
        for d in (2, 3):
            for entry in corpus:
                field = RadialField(d, entry.profile)
                assert extend(trace(field), d) == field
                ft = to_squared(entry.profile)
                assert trace(extend(ft, d)) == ft

    def test_linearity(self, corpus):
        a, b = Fraction(3, 2), Fraction(-2, 7)
        for e1, e2 in zip(corpus[:5], corpus[5:10]):
            combo = RadialField(3, a * e1.profile + b * e2.profile)
            want = a * trace(RadialField(3, e1.profile)) + b * trace(RadialField(3, e2.profile))
            assert trace(combo) == want


class TestBoundedness:
    @pytest.mark.parametrize("p", [1.0, 2.0, 3.0])
    def test_k0_exact_ratio(self, p, corpus):
        report = boundedness_report(corpus[:6], 3, 0, p, 1.0, tol=1e-12)
        want = (2.0 / sphere_area(3)) ** (1.0 / p)
        lo, hi = report.ratio_bounds("trace/field")
        assert lo == pytest.approx(want, rel=1e-10)
        assert hi == pytest.approx(want, rel=1e-10)

    def test_reciprocal_ratios(self, corpus):
        report = boundedness_report(corpus[:4], 2, 1, 2, 1.0)
        lo_f, hi_f = report.ratio_bounds("field/trace")
        lo_t, hi_t = report.ratio_bounds("trace/field")
        assert lo_f == pytest.approx(1.0 / hi_t, rel=1e-12)
        assert hi_f == pytest.approx(1.0 / lo_t, rel=1e-12)

    def test_interval_stable_under_refinement(self, corpus):
        coarse = boundedness_report(corpus, 3, 2, 2, 1.0, tol=1e-9)
        fine = boundedness_report(corpus, 3, 2, 2, 1.0, tol=1e-11)
        for pair in ("trace/field", "field/trace"):
            lo_c, hi_c = coarse.ratio_bounds(pair)
            lo_f, hi_f = fine.ratio_bounds(pair)
            assert abs(lo_c - lo_f) <= 1e-6 * abs(lo_f)
            assert abs(hi_c - hi_f) <= 1e-6 * abs(hi_f)

    def test_zero_profile_excluded(self):
        from radsob.profile import CorpusEntry

        entries = [CorpusEntry("zero", Profile([])), CorpusEntry("gauss", GAUSS)]
        report = boundedness_report(entries, 2, 0, 2, 1.0)
        assert any(row["label"] == "zero" for row in report.degenerate)


class TestPair:
    def test_validation(self):
        with pytest.raises(ValueError):
            TraceExtPair(1, 0, 2.0, 1.0)
        with pytest.raises(ValueError):
            TraceExtPair(2, 0, 2.0, -1.0)

    def test_norm_accessors(self):
        pair = TraceExtPair(3, 0, 2.0, 1.0)
        field = RadialField(3, GAUSS)
        ratio = pair.interval_norm(pair.forward(field)) / pair.field_norm(field)
        assert ratio == pytest.approx(math.sqrt(2.0 / sphere_area(3)), rel=1e-10)
