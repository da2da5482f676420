"""The small built-in example categories used by the checker and tests."""

from __future__ import annotations

from .exactfield import FieldSpec
from .presentation import PathElement, from_quiver, realize


def unit(field: FieldSpec):
    from .dgcore import unit_category
    return unit_category(field)


def kx2(field: FieldSpec):
    """k[x]/(x^2): one vertex, a degree-0 loop squaring to zero."""
    pres = from_quiver(field, ["v"], [("x", "v", "v", 0)],
                       [PathElement("v", "v", {("x", "x"): field.one()})])
    cat, cert = realize(pres, 2, 3)
    assert cert.is_closed
    cat.name = "k[x]/(x^2)"
    return cat


def path12(field: FieldSpec):
    """Path algebra of the quiver 1 -> 2."""
    pres = from_quiver(field, ["1", "2"], [("a", "1", "2", 0)])
    cat, cert = realize(pres, 2, 2)
    assert cert.is_closed
    cat.name = "path(1->2)"
    return cat


def product_kk(field: FieldSpec):
    """k x k as the two-object coproduct of unit categories (the basic
    form; the one-object presentation has a non-basis unit)."""
    pres = from_quiver(field, ["1", "2"], [])
    cat, cert = realize(pres, 1, 1)
    assert cert.is_closed
    cat.name = "k x k"
    return cat


def builtin_corpus(field: FieldSpec) -> dict:
    return {
        "unit": unit(field),
        "kxk": product_kk(field),
        "path12": path12(field),
        "kx2": kx2(field),
    }
