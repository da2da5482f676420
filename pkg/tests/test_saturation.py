import pytest

from dghom.dgcore import opposite, sphere_cell, tensor
from dghom.dgmod import validate_module
from dghom.hochschild import hh_dims
from dghom.presentation import from_quiver, realize
from dghom.saturation import (dual_data, euler_report, euler_via_duality, euler_via_hh,
                              properness_check, saturation_report,
                              semisimple_quotient_left_module, smoothness_certify,
                              triangle_identity_check, triangle_identity_check_both)
from conftest import Q


class TestProperness:
    def test_corpus_proper(self, corpus):
        for cat in corpus.values():
            ok, detail = properness_check(cat)
            assert ok
            assert all(isinstance(v, int) for v in detail.values())

    def test_spheres_proper(self):
        ok, _ = properness_check(sphere_cell(2, Q))
        assert ok

    def test_truncated_not_proper(self):
        pres = from_quiver(Q, ["v"], [("x", "v", "v", 0)])
        cat, cert = realize(pres, 2, 3)
        ok, _ = properness_check(cat)
        assert not ok


class TestSmoothness:
    def test_semisimple_module_valid(self, corpus):
        for cat in corpus.values():
            assert validate_module(semisimple_quotient_left_module(cat)).ok

    def test_unit_certified_zero(self, corpus):
        r = smoothness_certify(corpus["unit"], 6)
        assert r.status == "certified" and r.level == 0

    def test_kxk_certified_zero(self, corpus):
        r = smoothness_certify(corpus["kxk"], 6)
        assert r.status == "certified" and r.level == 0

    def test_path_certified_one(self, corpus):
        r = smoothness_certify(corpus["path12"], 6)
        assert r.status == "certified" and r.level == 1
        assert r.tor_dims[0] == 2 and r.tor_dims[1] == 1 and r.tor_dims[2] == 0

    @pytest.mark.parametrize("bound", [1, 2, 3, 4, 5, 6])
    def test_kx2_inconclusive_every_bound(self, corpus, bound):
        r = smoothness_certify(corpus["kx2"], bound)
        assert r.status == "inconclusive" and r.level == bound
        assert all(r.tor_dims[n] == 1 for n in range(bound + 2))

    def test_graded_input_honestly_inconclusive(self):
        r = smoothness_certify(sphere_cell(1, Q), 4)
        assert r.status == "inconclusive"
        assert "degree 0" in r.reason

    def test_non_basic_honestly_inconclusive(self):
        # one-object k x k: the unit 1 = e1 + e2 is not a basis vector and
        # the non-unit span is not a nilpotent ideal
        from dghom.grammar import loads
        text = """
dgcat
field q
object v
basis v v e 0
basis v v u 0
unit v u 1
compose v v v e e e 1
compose v v v u u u 1
compose v v v e u e 1
compose v v v u e e 1
"""
        cat, _ = loads(text)
        r = smoothness_certify(cat, 4)
        assert r.status == "inconclusive"

    def test_hh_vanishes_above_certified_level(self, corpus):
        for name in ("unit", "kxk", "path12"):
            cat = corpus[name]
            r = smoothness_certify(cat, 6)
            assert r.certified
            dims = hh_dims(cat, r.level + 3)
            for n in range(r.level + 1, r.level + 4):
                assert dims[n] == (0, "exact")


class TestDualData:
    def test_unit(self, corpus):
        dd = dual_data(corpus["unit"])
        assert dd.ev.dims(("*", "*")) == {0: 1}
        assert dd.ev.module == dd.coev.module

    def test_dims_are_hom_dims(self, corpus):
        a = corpus["path12"]
        dd = dual_data(a)
        for x in a.objects:
            for y in a.objects:
                assert dd.ev.dims((x, y)) == a.hom_dims(y, x)

    def test_sphere_diagonal(self):
        s = sphere_cell(2, Q)
        dd = dual_data(s)
        assert dd.ev.dims(("1", "2")) == {}
        assert dd.ev.dims(("2", "1")) == {2: 1}

    def test_role_swap_is_dual_of_opposite(self, corpus):
        for name in ("unit", "kxk", "path12", "kx2"):
            a = corpus[name]
            assert dual_data(a).role_swap() == dual_data(opposite(a)).ev.module


class TestTriangle:
    @pytest.mark.parametrize("name", ["unit", "kxk", "path12"])
    def test_pass_with_quasi_iso_evidence(self, corpus, name):
        res = triangle_identity_check(corpus[name], (-3, 3))
        assert res.status == "pass"
        assert res.evidence == "quasi-isomorphism"

    def test_both_composites(self, corpus):
        first, second = triangle_identity_check_both(corpus["path12"], (-2, 2))
        assert first.status == "pass" and second.status == "pass"

    @pytest.mark.parametrize("bound", [2, 4, 6])
    def test_never_passes_on_kx2(self, corpus, bound):
        res = triangle_identity_check(corpus["kx2"], (-3, 3), smooth_bound=bound)
        assert res.status == "inconclusive"
        assert "smoothness" in res.details["reason"]

    def test_truncated_input_inconclusive(self):
        pres = from_quiver(Q, ["v"], [("x", "v", "v", 0)])
        cat, cert = realize(pres, 2, 3)
        res = triangle_identity_check(cat, (-2, 2))
        assert res.status == "inconclusive"


class TestEuler:
    def test_values(self, corpus):
        for name, chi in (("unit", 1), ("path12", 2), ("kxk", 2)):
            rep = euler_report(corpus[name])
            assert rep.chi_hh == chi and rep.chi_dual == chi
            assert rep.agree is True

    def test_two_routes_disagreement_would_show(self, corpus):
        rep = euler_report(corpus["unit"])
        assert rep.hh_status == "exact" and rep.dual_status == "exact"

    def test_bound_limited_for_kx2(self, corpus):
        chi, window, status = euler_via_hh(corpus["kx2"])
        assert status == "bound_limited"
        rep = euler_report(corpus["kx2"])
        assert rep.agree is None

    def test_smooth_certificate_enables_exactness(self, corpus):
        cat = corpus["path12"]
        r = smoothness_certify(cat, 6)
        chi, window, status = euler_via_hh(cat, r)
        assert status == "exact" and chi == 2

    def test_multiplicative_under_tensor(self, corpus):
        saturated = ["unit", "kxk", "path12"]
        chis = {}
        for name in saturated:
            chis[name] = euler_via_hh(corpus[name])[0]
        for na in saturated:
            for nb in saturated:
                t = tensor(corpus[na], corpus[nb])
                chi_t, _, status = euler_via_hh(t)
                assert status == "exact"
                assert chi_t == chis[na] * chis[nb]

    def test_sphere_euler(self):
        # positively graded hom: negative homological degrees enter the sum
        s = sphere_cell(1, Q)
        chi, window, status = euler_via_hh(s)
        assert status == "exact" and chi == 2
        chi_d, _, status_d = euler_via_duality(s)
        assert status_d == "exact" and chi_d == 2


class TestReportShapes:
    def test_saturation_report_dict(self, corpus):
        rep = saturation_report(corpus["path12"], 4)
        d = rep.as_dict()
        assert d["saturated"] is True
        assert d["smooth"]["status"] == "certified"

    def test_euler_report_dict(self, corpus):
        d = euler_report(corpus["unit"]).as_dict()
        assert set(d) == {"chi_hh", "hh_window", "hh_status", "chi_dual",
                          "dual_window", "dual_status", "agree"}
