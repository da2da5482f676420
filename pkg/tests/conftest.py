import random

import pytest

from dghom.exactfield import FieldSpec
from dghom.corpus import builtin_corpus, kx2, path12, product_kk, unit
from dghom.dgcore import disk_cell, opposite, sphere_cell, tensor
from dghom.presentation import PathElement, from_quiver, realize

Q = FieldSpec.rationals()
F2 = FieldSpec.prime(2)
F5 = FieldSpec.prime(5)


@pytest.fixture(scope="session")
def corpus():
    return builtin_corpus(Q)


@pytest.fixture
def rng():
    return random.Random(0xD64)


def exterior_deg(field, degree):
    """k[x]/(x^2) with the generator in the given cohomological degree."""
    pres = from_quiver(field, ["v"], [("x", "v", "v", degree)],
                       [PathElement("v", "v", {("x", "x"): field.one()})])
    cat, cert = realize(pres, abs(degree) + 2, 3)
    assert cert.is_closed
    cat.name = f"ext({degree})"
    return cat


def random_small_category(rng, field=Q, max_dim=4):
    """A random valid dg category of total dimension <= max_dim, drawn
    from always-valid constructions."""
    builders = [
        lambda: unit(field),
        lambda: product_kk(field),
        lambda: path12(field),
        lambda: kx2(field),
        lambda: sphere_cell(rng.choice([-1, 0, 1, 2]), field),
        lambda: disk_cell(rng.choice([0, 1, 2]), field),
        lambda: exterior_deg(field, rng.choice([-1, 1])),
        lambda: _random_acyclic_quiver(rng, field),
    ]
    cat = rng.choice(builders)()
    if rng.random() < 0.3:
        cat = opposite(cat)
    if cat.total_dim() <= 2 and rng.random() < 0.3:
        other = unit(field)
        cat = tensor(cat, other)
    if cat.total_dim() > max_dim:
        cat = unit(field)
    return cat


def _random_acyclic_quiver(rng, field):
    n_v = rng.choice([1, 2])
    vertices = [str(i) for i in range(1, n_v + 1)]
    arrows = []
    if n_v == 2:
        for k in range(rng.choice([0, 1, 2])):
            arrows.append((f"a{k}", "1", "2", 0))
    pres = from_quiver(field, vertices, arrows)
    cat, cert = realize(pres, 2, 3)
    assert cert.is_closed
    return cat
