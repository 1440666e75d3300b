import numpy as np
import pytest

from rieszlag import basis as bs
from rieszlag import operators as op
from rieszlag import verify as vf


class TestProp33Scans:
    def test_region_i_stable(self):
        rep = vf.check_prop33("prop33-i", 1, 0.5, nx=5, ny=4)
        assert rep.stable
        assert np.isfinite(rep.sup_ratio)
        assert rep.empirical_only

    def test_region_ii_odd_both_bounds(self):
        rep = vf.check_prop33("prop33-ii-odd", 1, 0.0, nx=5, ny=4)
        assert rep.stable
        # the weaker even-order bound also stays finite for odd k
        weaker = vf.check_prop33("prop33-ii-even", 1, 0.0, nx=5, ny=4)
        assert weaker.stable
        rep_even = vf.check_prop33("prop33-ii-even", 2, 0.0, nx=5, ny=4)
        assert rep_even.stable

    def test_region_iii_stable(self):
        rep = vf.check_prop33("prop33-iii", 2, 0.0, nx=5, ny=4)
        assert rep.stable

    def test_parity_validation(self):
        with pytest.raises(ValueError):
            vf.check_prop33("prop33-ii-odd", 2, 0.0)

    def test_degenerate_region_rejected(self):
        with pytest.raises(ValueError):
            vf.check_prop33("prop33-i", 1, 0.5, ratio_bounds=(0.6, 0.9))
        with pytest.raises(ValueError):
            vf.check_prop33("prop33-ii-odd", 1, 0.5, ratio_bounds=(4.0, 3.0))

    def test_report_roundtrip(self):
        rep = vf.check_prop33("prop33-i", 1, 0.0, nx=4, ny=3, levels=1)
        d = rep.to_dict()
        assert d["statement"] == "prop33-i"
        assert d["empirical_only"] is True

    def test_threads_do_not_change_result(self):
        a = vf.check_prop33("prop33-i", 1, 0.5, nx=4, ny=3, threads=1)
        b = vf.check_prop33("prop33-i", 1, 0.5, nx=4, ny=3, threads=4)
        assert a.sup_ratio == b.sup_ratio
        assert a.argmax == b.argmax


class TestProp31Scan:
    @pytest.mark.parametrize("k,l", [(2, 0), (2, 1), (2, 2), (3, 1)])
    def test_table_bounds(self, k, l):
        rep = vf.check_prop31(k, l, nd=4, x_values=(-0.4, 0.6, 1.5))
        assert rep.stable
        assert np.isfinite(rep.sup_ratio)

    def test_validation(self):
        with pytest.raises(ValueError):
            vf.check_prop31(1, 2)


class TestMaximalDomination:
    def test_zero_input(self):
        zero = bs.SmoothFunction(value=lambda x: np.zeros_like(
            np.asarray(x, dtype=float)), deriv=None, support=(1.0, 2.0))
        rep = vf.check_maximal_domination(1, 0.5, zero, [0.5, 1.5, 4.0])
        assert rep["fitted_C"] == 0.0
        assert max(rep["lhs"]) == 0.0

    def test_far_field_regimes(self):
        f = op.bump(1.5, 0.5)  # support [1, 2]
        rep = vf.check_maximal_domination(1, 0.5, f, [0.1, 5.0])
        # far below the support the decaying-tail operator carries the
        # domination; far above it is the averaging-from-zero operator
        assert rep["hardy_inf"][0] > rep["hardy0"][0]
        assert rep["hardy0"][1] > rep["hardy_inf"][1]
        assert rep["lhs"][0] <= 2.0 * rep["fitted_C"] * (
            rep["hardy0"][0] + rep["hardy_inf"][0] + rep["local"][0]
            + rep["near_diagonal"][0] + 1e-300)

    def test_domination_holds_on_support(self):
        f = op.bump(1.5, 0.5)
        rep = vf.check_maximal_domination(1, 0.0, f, [1.2, 1.5, 1.8])
        lhs = np.array(rep["lhs"])
        rhs = (np.array(rep["hardy0"]) + np.array(rep["hardy_inf"])
               + np.array(rep["local"]) + np.array(rep["near_diagonal"]))
        assert np.all(lhs <= rep["fitted_C"] * rhs + 1e-12)
        assert rep["fitted_C"] < 10.0

    def test_fitted_constant_stable_under_refinement(self):
        f = op.bump(1.5, 0.5)
        coarse = vf.check_maximal_domination(1, 0.5, f,
                                             np.linspace(1.1, 1.9, 4))
        fine = vf.check_maximal_domination(1, 0.5, f,
                                           np.linspace(1.1, 1.9, 8))
        lo, hi = sorted((coarse["fitted_C"], fine["fitted_C"]))
        assert hi < 2.0 * lo


class TestLpScan:
    def test_in_range_arithmetic(self):
        assert vf.strong_type_range(1, 0.0, 2.0) == (-4.0, 2.0)
        assert vf.strong_type_range(2, 0.0, 2.0) == (-2.0, 2.0)
        rep = vf.lp_scan(1, 0.0, 2.0, 0.0, 3, nmax=300)
        assert rep.in_range
        rep = vf.lp_scan(1, 0.0, 2.0, 5.0, 3, nmax=300)
        assert not rep.in_range
        assert all(np.isfinite(rep.ratios))

    def test_family_nesting(self):
        small = vf.lp_scan(2, 0.0, 2.0, 0.0, 3, seed=11, nmax=300)
        large = vf.lp_scan(2, 0.0, 2.0, 0.0, 5, seed=11, nmax=300)
        assert large.ratios[:3] == small.ratios

    def test_scaling_invariance(self):
        # replacing f by 3f leaves the norm ratio unchanged to roundoff
        g = vf._seeded_bump(3, 0)
        from rieszlag.basis import BasisTag, analyze
        from rieszlag.specfun import AlphaParam
        tag = BasisTag("laguerre-phi", AlphaParam(0.0))
        c = analyze(g, tag, 300)
        c3 = bs.SpectralCoeffs(tag, 3.0 * c.coeffs)

        def image_of(co):
            return lambda x: op.riesz_apply_laguerre_spectral(
                1, 0.0, co, x, tail_tol=np.inf)

        r1 = (op.weighted_norm(image_of(c), 2.0, 0.0, (0.0, 30.0)).value
              / op.weighted_norm(g, 2.0, 0.0, (0.0, 30.0)).value)
        r3 = (op.weighted_norm(image_of(c3), 2.0, 0.0, (0.0, 30.0)).value
              / op.weighted_norm(lambda x: 3.0 * g(x), 2.0, 0.0,
                                 (0.0, 30.0)).value)
        assert r3 == pytest.approx(r1, rel=1e-13)

    def test_seeded_bumps_inside_working_interval(self):
        for i in range(8):
            g = vf._seeded_bump(0, i)
            assert 0.1 < g.support[0] < g.support[1] < 10.0
