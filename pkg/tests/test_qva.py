from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import PHI, PSI, mono
from qvaforge.bichar import Bicharacter
from qvaforge.catalog import NAMES, builtin
from qvaforge.expr import parse_expr
from qvaforge.fnring import RatFn, diagonal_expand, diagonal_pole
from qvaforge.qva import (
    Model,
    nop,
    nop_oracle,
    ope,
    residue,
    residue_oracle,
    s_gamma,
    s_tau,
    simplify,
    x2,
    x3,
    y_apply,
)
from qvaforge.superhopf import ONE, Element, TensorElement, basis, exp_zD, mono_parity, mul

AB = mono(("phi", 0), ("psi", 0))


def el(m):
    return Element.monomial(m)


# ---------------------------------------------------------------- OPE and normal ordering


def test_fermion_ope(fermion):
    data = ope(fermion, el(PHI), el(PSI))
    assert data.nonzero() == {0: Element.one(RatFn.const(1, 3))}
    assert str(data) == "{ pole 1: 1 }"
    assert not ope(fermion, el(PHI), el(PHI)).nonzero()
    assert not ope(fermion, el(PSI), el(PSI)).nonzero()


def test_heisenberg_ope(fermion):
    data = ope(fermion, el(AB), el(AB))
    assert simplify(data.pole(2)) == Element.one()
    assert not data.pole(1)
    assert str(data) == "{ pole 2: 1, pole 1: 0 }"


def test_fermion_nop(fermion):
    assert simplify(nop(fermion, el(PHI), el(PSI))) == el(AB)
    # phi * phi = 0 in the exterior algebra and the phi/phi entry vanishes
    assert not nop(fermion, el(PHI), el(PHI))


def test_nop_with_identity_bicharacter():
    model = Model(Bicharacter.identity({"phi": True, "psi": True}, 3))
    for a, b in product(basis([("phi", True), ("psi", True)], 2, 1), repeat=2):
        got = simplify(nop(model, el(a), el(b)))
        assert got == mul(el(a), el(b))


# ---------------------------------------------------------------- closed formulas vs expansion oracles


def _triples(model, count=25):
    mons = basis(list(model.gens.items()), 2, 1)
    out = []
    for a, b, c in product(mons, repeat=3):
        if a and b:
            out.append((a, b, c))
    step = max(1, len(out) // count)
    return out[::step][:count + 5]


@pytest.mark.parametrize("name", NAMES)
def test_residue_formula_matches_oracle(name, models3):
    model = models3[name]
    checked = 0
    for a, b, c in _triples(model):
        A, B, C = el(a), el(b), el(c)
        N = ope(model, A, B).N
        for n in range(N):
            assert residue(model, A, B, C, n) == residue_oracle(model, A, B, C, n)
            checked += 1
    assert checked >= 25


@pytest.mark.parametrize("name", NAMES)
def test_nop_matches_oracle(name, models3):
    model = models3[name]
    for a, b, c in _triples(model, 10):
        A, B, C = el(a), el(b), el(c)
        cap = sum(g.ddeg for g in a + b + c) + model.M
        lhs = y_apply(model, nop(model, A, B), C, "z2", cap)
        assert lhs == nop_oracle(model, A, B, C, cap)


# ---------------------------------------------------------------- X maps


def test_vacuum_of_x2(models3):
    for model in models3.values():
        for m in basis(list(model.gens.items()), 2, 2):
            A = el(m)
            assert x2(model, A, Element.one()) == exp_zD(A, "z1", model.M, model.T)
            assert x2(model, Element.one(), A) == exp_zD(A, "z2", model.M, model.T)


def test_x2_fermion_leading_terms(fermion):
    out = x2(fermion, el(PHI), el(PSI))
    assert out.terms[ONE] == RatFn.inv_factor({"z1": 1, "z2": -1}, 1, 3)
    assert out.terms[AB] == RatFn.const(1, 3)


@pytest.mark.parametrize("name", NAMES)
def test_x3_with_vacuum_slot(name, models3):
    # a vacuum in any slot reduces x3 to x2 with the matching variables
    model = models3[name]
    mons = basis(list(model.gens.items()), 2, 1)
    one = Element.one()
    for a, b in product(mons, repeat=2):
        A, B = el(a), el(b)
        cap = sum(g.ddeg for g in a + b) + model.M
        assert x3(model, A, B, one, cap=cap) == x2(model, A, B, ("z1", "z2"), cap=cap)
        assert x3(model, A, one, B, cap=cap) == x2(model, A, B, ("z1", "z3"), cap=cap)
        assert x3(model, one, A, B, ("z1", "z2", None), cap=cap) == y_apply(model, A, B, "z2", cap)


# ---------------------------------------------------------------- S maps


def test_s_tau_twist(fermion):
    assert s_tau(fermion, el(PHI), el(PSI)) == TensorElement({(PHI, PSI): RatFn.const(-1, 3)})
    assert s_tau(fermion, el(PHI), el(PSI), twist=False) == TensorElement({(PHI, PSI): RatFn.const(1, 3)})


def test_s_gamma_hd(models3):
    model = models3["fermion_hd"]
    out = s_gamma(model, el(PHI), el(PSI))
    assert out.terms[(ONE, ONE)] == parse_expr("t/(z1+g) - t/z1", 3)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(NAMES), st.sampled_from(basis([("phi", True), ("psi", True)], 2, 2)),
       st.sampled_from(basis([("phi", True), ("psi", True)], 2, 2)))
def test_s_maps_are_even(name, a, b):
    model = builtin(name, T=2, M=2)
    for out in (s_tau(model, el(a), el(b)), s_gamma(model, el(a), el(b))):
        for (p, q) in out.terms:
            assert (mono_parity(p) + mono_parity(q)) % 2 == (mono_parity(a) + mono_parity(b)) % 2


def test_diagonal_expansion_of_x3(fermion):
    xv = x3(fermion, el(PHI), el(PSI), Element.one(), ("z1", "z2", None))
    f = xv.terms[ONE]
    assert diagonal_pole(f, "z1", "z2") == 1
    assert diagonal_expand(f, "z1", "z2", 1, 0).coeff(-1) == RatFn.const(1, 3)
