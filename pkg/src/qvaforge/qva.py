"""Singular multiplication, S-maps, residues, OPE and normal ordered products.

Everything built from the bicharacter alone (S-maps, residues, OPE, NOP) is
exact.  The maps X and Y contain ``e^{zD}`` and are therefore projected: with
a weight cap ``C`` (weight = total derivation degree of a monomial) the
result is exact on every output monomial of weight at most ``C``.  Both sides
of an identity are always projected with the same cap, so comparisons are
exact statements about that projection.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .bichar import Bicharacter, braiding, translation
from .fnring import (
    NV,
    RatFn,
    ZERO,
    diagonal_expand,
    diagonal_pole,
    var_index,
)
from .superhopf import (
    Element,
    TensorElement,
    koszul_twist,
    mono_coproduct,
    mono_d_power,
    mono_mul,
    mono_parity,
    mono_weight,
)


class Model:
    """Generators, a bicharacter and the truncation settings."""

    def __init__(self, r, T=None, M=3, degree_bound=2, compose_twist=True, name=""):
        self.r = r
        self.gens = r.gens
        self.T = r.T if T is None else T
        if self.T != r.T:
            raise ValueError("model truncation must match the bicharacter truncation")
        self.M = M
        self.degree_bound = degree_bound
        self.compose_twist = compose_twist
        self.name = name or r.name
        self._braiding = None
        self._translation = {}
        self._vals = {}
        self._x2 = {}

    @property
    def R(self):
        if self._braiding is None:
            self._braiding = braiding(self.r)
        return self._braiding

    def Rg(self, by="g"):
        if by not in self._translation:
            self._translation[by] = translation(self.r, by)
        return self._translation[by]

    def with_truncation(self, T=None, M=None):
        """A copy with lower t-truncation and/or a different exponential cap."""
        T = self.T if T is None else T
        r = self.r
        if T != r.T:
            r = Bicharacter(r.gens, {k: v.truncate(T) for k, v in r.table.items()},
                            T, r.profile, r.name)
        return Model(r, T, self.M if M is None else M, self.degree_bound,
                     self.compose_twist, self.name)

    def gen(self, name, ddeg=0):
        return Element.gen(name, ddeg, self.gens[name])

    def __repr__(self):
        return f"Model({self.name}, T={self.T}, M={self.M})"


def value(model, r, m, n, vars=("z1", "z2")):
    """``r(m (x) n)`` with ``(z1, z2)`` renamed to ``vars`` (``None`` means 0)."""
    key = (r, m, n, vars)
    v = model._vals.get(key)
    if v is None:
        v = r.eval_mono(m, n)
        if v and vars != ("z1", "z2"):
            v = v.substitute({"z1": vars[0] if vars[0] else 0, "z2": vars[1] if vars[1] else 0})
        model._vals[key] = v
    return v


# ---------------------------------------------------------------- S-maps


def smap_mono(model, r, m, n, vars=("z1", "z2")):
    """``S^r(m (x) n) = sum (-1)^{|m''||n'|} m' (x) n' r(m'' (x) n'')``."""
    out = {}
    for (a1, a2), sa in mono_coproduct(m):
        for (b1, b2), sb in mono_coproduct(n):
            v = value(model, r, a2, b2, vars)
            if not v:
                continue
            s = sa * sb * (-1 if mono_parity(a2) and mono_parity(b1) else 1)
            k = (a1, b1)
            v = v if s > 0 else -v
            out[k] = out[k] + v if k in out else v
    return TensorElement(out, 2)


def smap_tensor(model, r, x, vars=("z1", "z2")):
    out = TensorElement(arity=2)
    for (m, n), c in x.terms.items():
        out = out + smap_mono(model, r, m, n, vars).scale(c)
    return out


def smap(model, r, a, b, vars=("z1", "z2")):
    return smap_tensor(model, r, TensorElement.pure(a, b), vars)


def s_tau_tensor(model, x, vars=("z1", "z2"), twist=None):
    twist = model.compose_twist if twist is None else twist
    if twist:
        x = koszul_twist(x)
    return smap_tensor(model, model.R, x, vars)


def s_tau(model, a, b, vars=("z1", "z2"), twist=None):
    return s_tau_tensor(model, TensorElement.pure(a, b), vars, twist)


def s_gamma_tensor(model, x, vars=("z1", "z2"), by="g"):
    return smap_tensor(model, model.Rg(by), x, vars)


def s_gamma(model, a, b, vars=("z1", "z2"), by="g"):
    return s_gamma_tensor(model, TensorElement.pure(a, b), vars, by)


# ---------------------------------------------------------------- X maps


def _zpow(vars, ns):
    e = [0] * NV
    for v, n in zip(vars, ns):
        if n:
            if v is None:
                return None
            e[var_index(v)] += n
    return tuple(e)


def _exp_terms(m, budget, var):
    """``(n, monomial, coeff)`` for the terms of ``e^{var D} m`` with ``n <= budget``."""
    if not m:
        return [(0, m, Fraction(1))]
    top = budget if var is not None else 0
    return [(n, mm, c) for n in range(top + 1) for mm, c in mono_d_power(m, n)]


def x2_mono(model, m, n, vars=("z1", "z2"), cap=None, nmax=None, r=None):
    """Projected ``X_{v1,v2}(m (x) n)`` as an Element with RatFn coefficients.

    ``cap`` bounds the output weight; alternatively ``nmax`` bounds the total
    order of the exponentials.
    """
    r = model.r if r is None else r
    if cap is None and nmax is None:
        cap = mono_weight(m) + mono_weight(n) + model.M
    key = (r, m, n, vars, cap, nmax)
    hit = model._x2.get(key)
    if hit is not None:
        return hit
    acc = {}
    for (a1, a2), sa in mono_coproduct(m):
        for (b1, b2), sb in mono_coproduct(n):
            if not value(model, r, a2, b2, vars):
                continue
            s = sa * sb * (-1 if mono_parity(a2) and mono_parity(b1) else 1)
            budget = nmax if nmax is not None else cap - mono_weight(a1) - mono_weight(b1)
            if budget < 0:
                continue
            for n1, m1, c1 in _exp_terms(a1, budget, vars[0]):
                for n2, m2, c2 in _exp_terms(b1, budget - n1, vars[1]):
                    pr = mono_mul(m1, m2)
                    if pr is None:
                        continue
                    e = _zpow(vars, (n1, n2))
                    if e is None:
                        continue
                    slot = acc.setdefault(pr[1], {}).setdefault((a2, b2), {})
                    c = s * pr[0] * c1 * c2
                    slot[e] = slot.get(e, 0) + c
    out = {}
    for mono, parts in acc.items():
        tot = None
        for (a2, b2), poly in parts.items():
            poly = {e: c for e, c in poly.items() if c}
            if not poly:
                continue
            term = value(model, r, a2, b2, vars).mul_poly(poly)
            tot = term if tot is None else tot + term
        if tot is not None and tot:
            out[mono] = tot
    res = Element(out)
    model._x2[key] = res
    return res


def x2(model, a, b, vars=("z1", "z2"), cap=None, nmax=None, r=None):
    if cap is None and nmax is None:
        cap = _wt(a) + _wt(b) + model.M
    out = Element()
    for m, c in a.terms.items():
        for n, d in b.terms.items():
            out = out + x2_mono(model, m, n, vars, cap, nmax, r).scale(c * d)
    return out


def x2_tensor(model, x, vars=("z1", "z2"), cap=None, nmax=None):
    out = Element()
    for (m, n), c in x.terms.items():
        out = out + x2_mono(model, m, n, vars, cap, nmax).scale(c)
    return out


def _wt(a):
    return max((mono_weight(m) for m in a.terms), default=0)


def y_apply(model, a, b, var="z1", cap=None, nmax=None):
    """``Y(a, var) b = X_{var, 0}(a (x) b)``."""
    return x2(model, a, b, (var, None), cap, nmax)


# The sign of regrouping a1 a2 a3 b1 b2 b3 c1 c2 c3 as a1 b1 c1 a2 b2 a3 c2 b3 c3.
_X3_ORDER = (0, 3, 6, 1, 4, 2, 7, 5, 8)


def _perm_sign(parities):
    odd = [parities[i] for i in _X3_ORDER]
    inv = 0
    for i in range(9):
        if odd[i]:
            for j in range(i + 1, 9):
                if odd[j] and _X3_ORDER[i] > _X3_ORDER[j]:
                    inv += 1
    return -1 if inv & 1 else 1


def x3_mono(model, ma, mb, mc, vars=("z1", "z2", "z3"), cap=None):
    """Projected three-point map with factors r12, r13, r23 and ``e^{z_i D}`` on leg i."""
    r = model.r
    if cap is None:
        cap = mono_weight(ma) + mono_weight(mb) + mono_weight(mc) + model.M
    v1, v2, v3 = vars
    acc = {}
    for (a1, a2, a3), sa in mono_coproduct(ma, 3):
        for (b1, b2, b3), sb in mono_coproduct(mb, 3):
            if not value(model, r, a2, b2, (v1, v2)):
                continue
            for (c1, c2, c3), sc in mono_coproduct(mc, 3):
                if not value(model, r, a3, c2, (v1, v3)) or not value(model, r, b3, c3, (v2, v3)):
                    continue
                par = [mono_parity(x) for x in (a1, a2, a3, b1, b2, b3, c1, c2, c3)]
                s = sa * sb * sc * _perm_sign(par)
                budget = cap - mono_weight(a1) - mono_weight(b1) - mono_weight(c1)
                if budget < 0:
                    continue
                fkey = (a2, b2, a3, c2, b3, c3)
                for n1, m1, k1 in _exp_terms(a1, budget, v1):
                    for n2, m2, k2 in _exp_terms(b1, budget - n1, v2):
                        p12 = mono_mul(m1, m2)
                        if p12 is None:
                            continue
                        for n3, m3, k3 in _exp_terms(c1, budget - n1 - n2, v3):
                            p = mono_mul(p12[1], m3)
                            if p is None:
                                continue
                            e = _zpow(vars, (n1, n2, n3))
                            if e is None:
                                continue
                            slot = acc.setdefault(p[1], {}).setdefault(fkey, {})
                            slot[e] = slot.get(e, 0) + s * p12[0] * p[0] * k1 * k2 * k3
    out = {}
    for mono, parts in acc.items():
        tot = None
        for (a2, b2, a3, c2, b3, c3), poly in parts.items():
            poly = {e: c for e, c in poly.items() if c}
            if not poly:
                continue
            f = (value(model, r, a2, b2, (v1, v2)) * value(model, r, a3, c2, (v1, v3))
                 * value(model, r, b3, c3, (v2, v3)))
            term = f.mul_poly(poly)
            tot = term if tot is None else tot + term
        if tot is not None and tot:
            out[mono] = tot
    return Element(out)


def x3(model, a, b, c, vars=("z1", "z2", "z3"), cap=None):
    if cap is None:
        cap = _wt(a) + _wt(b) + _wt(c) + model.M
    out = Element()
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            for mc, cc in c.terms.items():
                out = out + x3_mono(model, ma, mb, mc, vars, cap).scale(ca * cb * cc)
    return out


# ---------------------------------------------------------------- OPE data


def _diag_coeffs(f):
    """``{k: f^k}`` from ``f = sum_k f^k / (z1 - z2)^{k+1} + reg`` for ``k >= -1``.

    ``f^{-1}`` is the constant term of the expansion; all ``f^k`` are RatFn in z2.
    """
    P = diagonal_pole(f, "z1", "z2")
    le = diagonal_expand(f, "z1", "z2", P, 0)
    return P, {-p - 1: le.coeff(p) for p in range(-P, 1)}


def _pairs(model, a, b):
    """Coproduct data ``(sign, a', b', {k: f^k}, N)`` for ``a (x) b``."""
    r = model.r
    out = []
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            for (a1, a2), sa in mono_coproduct(ma):
                for (b1, b2), sb in mono_coproduct(mb):
                    v = r.eval_mono(a2, b2)
                    if not v:
                        continue
                    s = sa * sb * (-1 if mono_parity(a2) and mono_parity(b1) else 1)
                    P, fk = _diag_coeffs(v)
                    out.append((s * ca * cb, a1, b1, fk, P))
    return out


def _yarg(a1, b1, j):
    """``(D^(j) a') . b'`` as an Element."""
    out = Element()
    for mm, c in mono_d_power(a1, j):
        pr = mono_mul(mm, b1)
        if pr is not None:
            out = out + Element.monomial(pr[1], c * pr[0])
    return out


@dataclass
class OPEData:
    singular: dict = field(default_factory=dict)
    N: int = 0

    def pole(self, order):
        """Coefficient of ``1/(z-w)^order``."""
        return self.singular.get(order - 1, Element())

    def nonzero(self):
        return {n: e for n, e in self.singular.items() if e}

    def __str__(self):
        if not self.singular:
            return "{ }"
        body = ", ".join(f"pole {n + 1}: {_elem_text(self.singular[n])}"
                         for n in sorted(self.singular, reverse=True))
        return "{ " + body + " }"


def _elem_text(e):
    return str(simplify(e))


def simplify(e):
    """Replace RatFn coefficients that are plain rationals by Fractions."""
    out = {}
    for m, c in e.terms.items():
        if isinstance(c, RatFn) and c.is_constant() and not any(
                num for num, _ in c.orders[1:]):
            num = c.orders[0][0]
            c = num.get(ZERO, Fraction(0))
        out[m] = c
    return Element(out)


def ope(model, a, b):
    """Singular part of ``Y(a, z) Y(b, w)``: ``{n: coefficient of 1/(z-w)^{n+1}}``."""
    data = _pairs(model, a, b)
    N = max((P for *_, P in data), default=0)
    sing = {n: Element() for n in range(N)}
    for s, a1, b1, fk, P in data:
        for n in range(P):
            for k in range(n, P):
                if fk[k]:
                    sing[n] = sing[n] + _yarg(a1, b1, k - n).scale(fk[k] * s)
    return OPEData(sing, N)


def nop(model, a, b):
    """Normal ordered product ``:Y(a,w) Y(b,w):`` as a Y-argument."""
    out = Element()
    for s, a1, b1, fk, P in _pairs(model, a, b):
        for k in range(-1, P):
            if fk[k]:
                out = out + _yarg(a1, b1, k + 1).scale(fk[k] * s)
    return out


def residue(model, a, b, c, n, cap=None):
    """``Res_{z=w} X_{z,w,0}(a (x) b (x) c) (z-w)^n`` by the closed formula.

    The Y-factors are projected with ``cap`` (default: the x3 cap for the
    same inputs), so the result matches the projected expansion oracle.
    """
    if n < 0:
        raise ValueError("residue order must be non-negative")
    if cap is None:
        cap = _wt(a) + _wt(b) + _wt(c) + model.M
    out = Element()
    for s, a1, b1, fk, P in _pairs(model, a, b):
        for k in range(n, P):
            if not fk[k]:
                continue
            arg = _yarg(a1, b1, k - n)
            if arg:
                out = out + y_apply(model, arg, c, "z2", cap).scale(fk[k] * s)
    return out


def residue_oracle(model, a, b, c, n, cap=None):
    """The same residue read off the z3 = 0 specialisation of x3."""
    from .fnring import residue_diagonal
    xv = x3(model, a, b, c, ("z1", "z2", None), cap)
    return Element({m: residue_diagonal(f, "z1", "z2", n) for m, f in xv.terms.items()})


def nop_oracle(model, a, b, c, cap=None):
    """Constant diagonal term of x3 at z3 = 0; equals ``Y(nop(a, b), w) c``."""
    xv = x3(model, a, b, c, ("z1", "z2", None), cap)
    out = {}
    for m, f in xv.terms.items():
        P = diagonal_pole(f, "z1", "z2")
        out[m] = diagonal_expand(f, "z1", "z2", P, 0).coeff(0)
    return Element(out)
