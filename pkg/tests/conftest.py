"""Shared fixtures and independent oracles for the test suite."""

import sympy as sp
import pytest

from qvaforge.catalog import NAMES, builtin
from qvaforge.fnring import VARS
from qvaforge.superhopf import Gen

SYM = {name: sp.Symbol(name) for name in VARS}
T_SYM = sp.Symbol("t")


def to_sympy(f):
    """Sum over t-orders of num/den as a sympy expression (independent of fnring printing)."""
    total = sp.Integer(0)
    for k, (num, den) in enumerate(f.orders):
        n = sum(sp.Rational(c.numerator, c.denominator)
                * sp.Mul(*[SYM[VARS[i]] ** e for i, e in enumerate(exp) if e])
                for exp, c in num.items())
        d = sp.Integer(1)
        for form, p in den.items():
            d *= sum(c * SYM[VARS[i]] for i, c in enumerate(form) if c) ** p
        total += T_SYM ** k * n / d
    return total


def same(f, expr, T):
    """``f`` equals the sympy expression modulo ``t^T``."""
    diff = sp.series(to_sympy(f) - expr, T_SYM, 0, T).removeO()
    return sp.simplify(diff) == 0


def g(name, d=0, odd=True):
    return Gen(name, d, odd)


def mono(*parts):
    """``mono(("phi", 0), ("psi", 1))`` -> sorted monomial of odd generators."""
    return tuple(sorted(Gen(n, d, True) for n, d in parts))


PHI = mono(("phi", 0))
PSI = mono(("psi", 0))


@pytest.fixture(scope="session")
def models3():
    return {name: builtin(name, T=3, M=3) for name in NAMES}


@pytest.fixture(scope="session")
def fermion():
    return builtin("charged_free_fermion", T=3, M=3)
