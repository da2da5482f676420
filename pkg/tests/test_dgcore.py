import itertools

import pytest

from dghom.exactfield import homology_dims, rank
from dghom.dgcore import (DgCategory, cell_inclusion, disk_cell, opposite, rep_saturated,
                          sphere_cell, swap_functor, tensor, unit_category, validate,
                          validate_functor)
from conftest import Q, F2, random_small_category

class TestValidate:
    def test_unit_category(self):
        u = unit_category(Q)
        assert validate(u).ok
        assert u.hom_dims("*", "*") == {0: 1}

    def test_unit_category_f2(self):
        u = unit_category(F2)
        assert validate(u).ok

    def test_corrupted_unit_reported(self):
        u = unit_category(Q)
        bad = DgCategory(Q, u.objects, u.homs, u.comp, {"*": {(0, 0): Q.of_int(2)}})
        rep = validate(bad)
        assert not rep.ok
        assert any(axiom == "unit axiom" for axiom, *_ in rep.violations)

    def test_corrupted_composition_reported(self):
        u = unit_category(Q)
        comp = {("*", "*", "*"): {((0, 0), (0, 0)): {0: Q.of_int(3)}}}
        bad = DgCategory(Q, u.objects, u.homs, comp, dict(u.units))
        rep = validate(bad)
        assert not rep.ok

    @pytest.mark.parametrize("n", [-1, 0, 1, 3])
    def test_cells_valid(self, n):
        assert validate(sphere_cell(n, Q)).ok
        assert validate(disk_cell(n, Q)).ok


class TestCells:
    def test_sphere_dims(self):
        s = sphere_cell(0, Q)
        assert s.hom_dims("1", "2") == {0: 1}
        assert s.hom_dims("2", "1") == {}
        s3 = sphere_cell(3, Q)
        assert s3.hom_dims("1", "2") == {3: 1}

    def test_disk_is_acyclic_cone(self):
        d = disk_cell(0, Q)
        dims = d.hom_dims("3", "4")
        assert sorted(dims) == [-2, -1] and set(dims.values()) == {1}
        assert rank(d.hom("3", "4").diff(-2)) == 1
        assert homology_dims(d.hom("3", "4"), (-3, 0)) == {-3: 0, -2: 0, -1: 0, 0: 0}

    @pytest.mark.parametrize("n", [0, 1, 2])
    def test_inclusion_is_a_functor(self, n):
        f = cell_inclusion(n, Q)
        assert validate_functor(f).ok
        # identity on the degree n-1 generator
        img = f.apply_elem("1", "2", {(n - 1, 0): Q.one()})
        assert img == {(n - 1, 0): Q.one()}


class TestOpposite:
    def test_involution_unit(self):
        u = unit_category(Q)
        assert opposite(opposite(u)) == u

    def test_involution_random(self, rng):
        for _ in range(6):
            cat = random_small_category(rng)
            assert opposite(opposite(cat)) == cat
            assert validate(opposite(cat)).ok

    def test_sphere_swaps_direction(self):
        s = sphere_cell(2, Q)
        op = opposite(s)
        assert op.hom_dims("2", "1") == {2: 1}
        assert op.hom_dims("1", "2") == {}

    def test_path_algebra_reversed(self, corpus):
        op = opposite(corpus["path12"])
        assert op.hom_dims("2", "1") == {0: 1}
        assert op.hom_dims("1", "2") == {}
        assert validate(op).ok


class TestTensor:
    def test_unit_is_neutral_for_dims(self, corpus):
        a = corpus["path12"]
        t = tensor(unit_category(Q), a)
        for (x, y) in itertools.product(a.objects, repeat=2):
            assert t.hom_dims(("*", x), ("*", y)) == a.hom_dims(x, y)
        assert validate(t).ok

    def test_unit_tensor_unit(self):
        u = unit_category(Q)
        t = tensor(u, u)
        assert t.total_dim() == 1 and validate(t).ok

    def test_sphere_zero_squared(self):
        t = tensor(sphere_cell(0, Q), sphere_cell(0, Q))
        assert t.hom_dims(("1", "1"), ("2", "2")) == {0: 1}

    def test_dims_are_convolutions(self, rng):
        for _ in range(6):
            a = random_small_category(rng, max_dim=3)
            b = random_small_category(rng, max_dim=3)
            t = tensor(a, b)
            for (x, xp) in itertools.product(a.objects, repeat=2):
                for (y, yp) in itertools.product(b.objects, repeat=2):
                    da = a.hom_dims(x, xp)
                    db = b.hom_dims(y, yp)
                    dt = t.hom_dims((x, y), (xp, yp))
                    degs = set()
                    for i in da:
                        for j in db:
                            degs.add(i + j)
                    for d in degs | set(dt):
                        expect = sum(da.get(i, 0) * db.get(d - i, 0) for i in da)
                        assert dt.get(d, 0) == expect

    def test_tensor_valid_random(self, rng):
        for _ in range(4):
            a = random_small_category(rng, max_dim=3)
            b = random_small_category(rng, max_dim=3)
            assert validate(tensor(a, b)).ok

    def test_field_mismatch(self):
        with pytest.raises(ValueError):
            tensor(unit_category(Q), unit_category(F2))

    def test_swap_is_invertible_functor(self, rng):
        for _ in range(4):
            a = random_small_category(rng, max_dim=3)
            b = random_small_category(rng, max_dim=3)
            sw = swap_functor(a, b)
            assert validate_functor(sw).ok
            for pair, maps in sw.hom_maps.items():
                for d, mat in maps.items():
                    assert rank(mat) == mat.cols == mat.rows

    def test_opposite_commutes_with_tensor(self, rng):
        for _ in range(4):
            a = random_small_category(rng, max_dim=3)
            b = random_small_category(rng, max_dim=3)
            assert opposite(tensor(a, b)) == tensor(opposite(a), opposite(b))


class TestRepSaturated:
    def test_requires_certificate(self, corpus):
        class Cert:
            saturated = False
        with pytest.raises(ValueError):
            rep_saturated(corpus["unit"], corpus["path12"], Cert())

    def test_unit_rep(self, corpus):
        class Cert:
            saturated = True
        a = corpus["path12"]
        r = rep_saturated(unit_category(Q), a, Cert())
        assert len(r.objects) == len(a.objects)
        for (x, y) in itertools.product(a.objects, repeat=2):
            assert r.hom_dims(("*", x), ("*", y)) == a.hom_dims(x, y)

    def test_sphere_rep_is_tensor(self, corpus):
        class Cert:
            saturated = True
        a = corpus["kx2"]
        s = sphere_cell(1, Q)
        r = rep_saturated(s, a, Cert())
        t = tensor(opposite(s), a)
        assert r == t
        assert len(r.objects) == len(s.objects) * len(a.objects)
