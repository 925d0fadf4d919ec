from itertools import product

import pytest

from conftest import PHI, PSI
from qvaforge import axioms as ax
from qvaforge.catalog import NAMES, builtin
from qvaforge.errors import InconclusiveTruncation, UnsupportedAxiom
from qvaforge.expr import parse_expr
from qvaforge.fnring import iota_expand, laurent_terms
from qvaforge.superhopf import ONE, basis

DEFORMED = [n for n in NAMES if n != "charged_free_fermion"]
TWIST_SENSITIVE = {"group_tau", "compat_x1", "compat_1x"}


@pytest.fixture(scope="module")
def models():
    return {n: builtin(n, T=3, M=2) for n in NAMES}


@pytest.fixture(scope="module")
def untwisted():
    return {n: builtin(n, T=3, M=2, compose_twist=False) for n in NAMES}


def _gens0(model):
    return [m for m in basis(list(model.gens.items()), 1, 0) if m]


@pytest.mark.parametrize("axiom", [a for a in ax.AXIOMS if a not in TWIST_SENSITIVE])
@pytest.mark.parametrize("name", NAMES)
def test_axiom_holds(name, axiom, models):
    rep = ax.run_suite(models[name], bound=1, axioms=(axiom,))
    assert rep.reports and rep.passed, [str(r) for r in rep.failures()[:3]]


@pytest.mark.parametrize("axiom", sorted(TWIST_SENSITIVE))
@pytest.mark.parametrize("name", NAMES)
def test_twist_sensitive_axioms_hold_for_plain_braiding(name, axiom, untwisted):
    rep = ax.run_suite(untwisted[name], bound=1, axioms=(axiom,))
    assert rep.passed, [str(r) for r in rep.failures()[:3]]


@pytest.mark.parametrize("name", DEFORMED)
def test_group_tau_fails_with_twist(name, models):
    # composing the braiding with the sign twist breaks S tau S tau = 1 once R is nontrivial
    rep = ax.check_group_tau(models[name], PHI, PSI)[0]
    assert not rep.passed
    assert ax.check_group_tau(models[name], PHI, PSI, twist=False)[0].passed


def test_group_tau_with_twist_on_free_fermion(models):
    rep = ax.run_suite(models["charged_free_fermion"], bound=2, axioms=("group_tau",))
    assert rep.passed


@pytest.mark.parametrize("name", DEFORMED)
def test_compat_needs_natural_pairing(name, untwisted):
    # the shift attached to a leg must follow that leg: swapping w1 and w2 fails
    model = untwisted[name]
    swapped = [r for a, b, c in product(_gens0(model) + [ONE], repeat=3)
               for r in ax.check_compat_x1(model, a, b, c, "tau", swap_shifts=True)]
    assert not all(r.passed for r in swapped)


def test_yang_baxter_nontrivial_for_hd(models, untwisted):
    # the HD braiding is not the identity, so this exercises genuine S-maps
    model = models["fermion_hd"]
    assert model.R.eval_mono(PHI, PSI)
    gens = basis(list(model.gens.items()), 1, 1)
    for which in ("tau", "gamma"):
        for a, b, c in product(gens, repeat=3):
            assert ax.check_yang_baxter(model, a, b, c, which)[0].passed
    # on composite inputs only the untwisted braiding satisfies it
    plain = untwisted["fermion_hd"]
    for a, b, c in product(basis(list(model.gens.items()), 2, 1), repeat=3):
        assert ax.check_yang_baxter(plain, a, b, c, "tau")[0].passed
    ab = basis(list(model.gens.items()), 2, 0)[-1]
    assert not ax.check_yang_baxter(model, PHI, PSI, ab, "tau")[0].passed


# ---------------------------------------------------------------- locality


def test_fermion_locality_exponent():
    model = builtin("charged_free_fermion", T=2)
    for c in basis(list(model.gens.items()), 2, 2):
        rep = ax.check_locality(model, PHI, PSI, c, k=1, Nmax=3)[0]
        assert rep.passed and rep.value == 1


def test_ek_locality_mod_t3():
    model = builtin("fermion_ek", T=3)
    for c in basis(list(model.gens.items()), 2, 1):
        rep = ax.check_locality(model, PHI, PSI, c, k=3)[0]
        assert rep.passed and rep.value <= 6


def test_locality_without_twist_fails_for_fermion():
    model = builtin("charged_free_fermion", T=1, compose_twist=False)
    rep = ax.check_locality(model, PHI, PSI, ONE, k=1)[0]
    assert not rep.passed and "differs" in rep.detail


def test_locality_window_by_hand():
    # vacuum coefficient: i_{z1;z2} 1/(z1-z2) on the left, the same kernel under i_{z2;z1} on the right
    model = builtin("charged_free_fermion", T=1)
    lhs, rhs, _ = ax._locality_sides(model, PHI, PSI, ONE, 1, 4)
    left = ax._window(lhs, 1, 4)
    right = ax._window(rhs, 1, 4)
    kernel = parse_expr("1/(z1-z2)", 1)
    for (outer, inner), win in ((("z1", "z2"), left), (("z2", "z1"), right)):
        le = iota_expand(kernel, outer, inner, 4)
        for p, coeff in le.coeffs.items():
            for e, c in laurent_terms(coeff, 0).items():
                i, j = e[0], e[1]
                i, j = (i, j + p) if inner == "z2" else (i + p, j)
                if i <= 4 and j <= 4:
                    assert win[(ONE, 0, i, j)] == c


def test_locality_needs_enough_t_order():
    model = builtin("fermion_ek", T=2)
    with pytest.raises(InconclusiveTruncation):
        ax.check_locality(model, PHI, PSI, ONE, k=3)


def test_unknown_axiom():
    model = builtin("charged_free_fermion", T=1)
    with pytest.raises(UnsupportedAxiom):
        ax.check_axiom(model, "associativity", PHI, PSI)
    with pytest.raises(UnsupportedAxiom):
        ax.run_suite(model, axioms=("nope",))


def test_report_line_format():
    model = builtin("charged_free_fermion", T=1)
    rep = ax.check_locality(model, PHI, PSI, ONE, k=1)[0]
    assert str(rep).startswith("pass locality(phi[0], psi[0], 1) [k=1,") and str(rep).endswith("N=1")
