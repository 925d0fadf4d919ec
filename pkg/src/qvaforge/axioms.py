"""Machine checks of the quantum vertex algebra axioms for a Model.

Each check returns an :class:`AxiomReport`.  Identities between maps that
contain ``e^{zD}`` compare projections with a shared cap (see
:mod:`qvaforge.qva`); identities stated through expansions compare exact
coefficients inside a recorded window.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb, factorial

from .bichar import shift, translation
from .errors import InconclusiveTruncation, UnsupportedAxiom
from .fnring import (
    RatFn,
    canon_form,
    form_from_dict,
    iota_expand,
    laurent_terms,
    shift_vars,
    taylor_shift,
    truncate_degree,
)
from .qva import (
    s_tau_tensor,
    smap_mono,
    smap_tensor,
    value,
    x2,
    x2_mono,
    x2_tensor,
)
from .superhopf import (
    ONE,
    Element,
    TensorElement,
    basis,
    d_power,
    exp_zD,
    koszul_flip,
    mono_coproduct,
    mono_d_power,
    mono_parity,
    mono_str,
    mono_weight,
)

AXIOMS = (
    "vacuum",
    "hd_cov_x",
    "hd_cov_s",
    "hd_cov_mult",
    "yang_baxter",
    "compat_x1",
    "compat_1x",
    "group_tau",
    "group_gamma",
    "s_at_zero",
    "braided_symmetry",
    "locality",
)


@dataclass
class AxiomReport:
    axiom: str
    inputs: str
    truncation: dict
    passed: bool
    detail: str = ""
    value: object = None

    def line(self):
        trunc = ",".join(f"{k}={v}" for k, v in self.truncation.items())
        status = "pass" if self.passed else "FAIL"
        extra = f" N={self.value}" if self.value is not None else ""
        tail = f" :: {self.detail}" if self.detail and not self.passed else ""
        return f"{status} {self.axiom}({self.inputs}) [{trunc}]{extra}{tail}"

    __str__ = line


@dataclass
class SuiteReport:
    reports: list = field(default_factory=list)

    @property
    def passed(self):
        return all(r.passed for r in self.reports)

    def failures(self):
        return [r for r in self.reports if not r.passed]


# ---------------------------------------------------------------- helpers


def _first_diff(lhs, rhs):
    """First differing coefficient of two Elements/TensorElements, or ``None``."""
    keys = sorted(set(lhs.terms) | set(rhs.terms), key=repr)
    for k in keys:
        a = lhs.terms.get(k, 0)
        b = rhs.terms.get(k, 0)
        if not a == b:
            key = " (x) ".join(mono_str(m) for m in k) if k and isinstance(k[0], tuple) else mono_str(k)
            return f"at {key}: {a} != {b}"
    return None


def _report(name, inputs, trunc, lhs, rhs):
    diff = _first_diff(lhs, rhs)
    return AxiomReport(name, inputs, trunc, diff is None, diff or "")


def _names(*monos):
    return ", ".join(mono_str(m) for m in monos)


def _el(m):
    return Element.monomial(m)


def _s_mono(model, which, m, n, vars, twist=None):
    """One S-map on a pair of monomials: ``which`` is 'tau' or 'gamma'."""
    if which == "tau":
        twist = model.compose_twist if twist is None else twist
        sign = -1 if twist and mono_parity(m) and mono_parity(n) else 1
        out = smap_mono(model, model.R, m, n, vars)
        return out if sign > 0 else out.scale(-1)
    return smap_mono(model, model.Rg(), m, n, vars)


def _s_tensor(model, which, x, vars, twist=None):
    out = TensorElement(arity=2)
    for (m, n), c in x.terms.items():
        out = out + _s_mono(model, which, m, n, vars, twist).scale(c)
    return out


def _apply12(fn, x):
    out = TensorElement(arity=3)
    for (a, b, c), v in x.terms.items():
        for (p, q), w in fn(a, b).terms.items():
            out = out + TensorElement({(p, q, c): w * v}, 3)
    return out


def _apply23(fn, x):
    out = TensorElement(arity=3)
    for (a, b, c), v in x.terms.items():
        for (p, q), w in fn(b, c).terms.items():
            out = out + TensorElement({(a, p, q): w * v}, 3)
    return out


def _tau23(x):
    out = {}
    for (a, b, c), v in x.terms.items():
        k = (a, c, b)
        v = -v if mono_parity(b) and mono_parity(c) else v
        out[k] = out[k] + v if k in out else v
    return TensorElement(out, 3)


def _apply13(fn, x):
    return _tau23(_apply12(fn, _tau23(x)))


def _cap(model, *monos):
    return sum(mono_weight(m) for m in monos) + model.M


# ---------------------------------------------------------------- axioms


def check_vacuum(model, a):
    T, M = model.T, model.M
    A = _el(a)
    one = Element.one()
    out = []
    trunc = {"T": T, "M": M}
    out.append(_report("vacuum", f"X({mono_str(a)}, 1)", trunc, x2(model, A, one), exp_zD(A, "z1", M, T)))
    out.append(_report("vacuum", f"X(1, {mono_str(a)})", trunc, x2(model, one, A), exp_zD(A, "z2", M, T)))
    for which in ("tau", "gamma"):
        lhs = _s_mono(model, which, a, ONE, ("z1", "z2"))
        out.append(_report("vacuum", f"S_{which}({mono_str(a)}, 1)", trunc, lhs,
                           TensorElement({(a, ONE): RatFn.const(1, T)})))
        lhs = _s_mono(model, which, ONE, a, ("z1", "z2"))
        out.append(_report("vacuum", f"S_{which}(1, {mono_str(a)})", trunc, lhs,
                           TensorElement({(ONE, a): RatFn.const(1, T)})))
    return out


def check_hd_cov_x(model, a, b):
    cap = _cap(model, a, b) + 1
    lhs = x2(model, _el(a), d_power(_el(b), 1), cap=cap)
    rhs = x2(model, _el(a), _el(b), cap=cap).map_coeffs(lambda f: f.derive("z2"))
    return [_report("hd_cov_x", _names(a, b), {"T": model.T, "cap": cap}, lhs, rhs)]


def check_hd_cov_s(model, a, b, which="tau", order=2):
    """``(1 (x) e^{gD}) S_{z1,z2+g} = S_{z1,z2} (1 (x) e^{gD})``, order by order in g."""
    out = []
    base = _s_mono(model, which, a, b, ("z1", "z2"))
    for n in range(order + 1):
        lhs = TensorElement(arity=2)
        for (x, y), s in base.terms.items():
            for l in range(n + 1):
                ds = s
                for _ in range(l):
                    ds = ds.derive("z2")
                ds = ds * Fraction(1, factorial(l))
                for yy, c in mono_d_power(y, n - l):
                    lhs = lhs + TensorElement({(x, yy): ds * c})
        rhs = TensorElement(arity=2)
        for bb, c in mono_d_power(b, n):
            rhs = rhs + _s_mono(model, which, a, bb, ("z1", "z2")).scale(c)
        out.append(_report("hd_cov_s", f"{which}; {_names(a, b)}; g^{n}",
                           {"T": model.T, "gamma_order": n}, lhs, rhs))
    return out


def check_hd_cov_mult(model, a, b):
    """``e^{gD} X_{z1,z2} S^(g)_{z1,z2} = X_{z1+g,z2+g}`` on weights up to the cap."""
    cap = _cap(model, a, b)
    st = _s_mono(model, "gamma", a, b, ("z1", "z2"))
    xs = x2_tensor(model, st, cap=cap)
    g = RatFn.var("g", model.T)
    lhs = Element()
    for m, c in xs.terms.items():
        gn = RatFn.const(1, model.T)
        for n in range(cap - mono_weight(m) + 1):
            lhs = lhs + d_power(_el(m), n).scale(c * gn)
            gn = gn * g
    rhs = x2(model, _el(a), _el(b), cap=cap).map_coeffs(lambda f: shift_vars(f, ["z1", "z2"], "g"))
    return [_report("hd_cov_mult", _names(a, b), {"T": model.T, "cap": cap}, lhs, rhs)]


def check_yang_baxter(model, a, b, c, which="tau"):
    def S(v1, v2):
        return lambda m, n: _s_mono(model, which, m, n, (v1, v2))

    x = TensorElement({(a, b, c): RatFn.const(1, model.T)}, 3)
    lhs = _apply12(S("z1", "z2"), _apply13(S("z1", "z3"), _apply23(S("z2", "z3"), x)))
    rhs = _apply23(S("z2", "z3"), _apply13(S("z1", "z3"), _apply12(S("z1", "z2"), x)))
    return [_report("yang_baxter", f"{which}; {_names(a, b, c)}", {"T": model.T}, lhs, rhs)]


def check_group_tau(model, a, b, twist=None):
    """``S_{z1,z2} tau S_{z2,z1} tau = 1``; ``twist`` overrides the model's Ĩ flag."""
    twist = model.compose_twist if twist is None else twist
    x = TensorElement({(a, b): RatFn.const(1, model.T)})
    y = _s_tensor(model, "tau", koszul_flip(x), ("z2", "z1"), twist)
    z = _s_tensor(model, "tau", koszul_flip(y), ("z1", "z2"), twist)
    return [_report("group_tau", _names(a, b), {"T": model.T, "twist": twist}, z, x)]


def _translation_bichars(model):
    key = "_group_gamma"
    cached = model._translation.get(key)
    if cached is None:
        r = model.r
        rg = translation(r, "g")
        rh_shifted = shift(translation(r, "h"), "g")
        rgh = translation(r, ("g", "h"))
        cached = (rg, rh_shifted, rgh)
        model._translation[key] = cached
    return cached


def check_group_gamma(model, a, b):
    rg, rh, rgh = _translation_bichars(model)
    x = TensorElement({(a, b): RatFn.const(1, model.T)})
    lhs = smap_tensor(model, rg, smap_tensor(model, rh, x))
    rhs = smap_tensor(model, rgh, x)
    return [_report("group_gamma", _names(a, b), {"T": model.T}, lhs, rhs)]


def check_s_at_zero(model, a, b):
    lhs = _s_mono(model, "gamma", a, b, ("z1", "z2")).map_coeffs(lambda f: f.specialize("g"))
    rhs = TensorElement({(a, b): RatFn.const(1, model.T)})
    return [_report("s_at_zero", _names(a, b), {"T": model.T}, lhs, rhs)]


def check_braided_symmetry(model, a, b, cap=None):
    """``X_{z1,z2} = X_{z2,z1} S^R_{z2,z1} tau`` with the untwisted braiding."""
    cap = _cap(model, a, b) if cap is None else cap
    lhs = x2_mono(model, a, b, cap=cap)
    flipped = koszul_flip(TensorElement({(a, b): Fraction(1)}))
    st = smap_tensor(model, model.R, flipped, ("z2", "z1"))
    rhs = x2_tensor(model, st, ("z2", "z1"), cap=cap)
    return [_report("braided_symmetry", _names(a, b), {"T": model.T, "cap": cap}, lhs, rhs)]


# ---------------------------------------------------------------- compatibility


def _w_denominator(model, pairs):
    """``w1^p (w1-w2)^q`` clearing every ``r_{w1,w2}`` value that can occur."""
    fw1 = canon_form(form_from_dict({"w1": 1}))[1]
    fdiff = canon_form(form_from_dict({"w1": 1, "w2": -1}))[1]
    p = q = 0
    for m, n in pairs:
        for (_, a2), _ in mono_coproduct(m):
            for (_, b2), _ in mono_coproduct(n):
                v = value(model, model.r, a2, b2, ("w1", "w2"))
                for _, den in v.orders:
                    p = max(p, den.get(fw1, 0))
                    q = max(q, den.get(fdiff, 0))
    Q = RatFn.const(1, model.T)
    Q = Q * RatFn.linear({"w1": 1}, model.T) ** p if p else Q
    Q = Q * RatFn.linear({"w1": 1, "w2": -1}, model.T) ** q if q else Q
    return Q


def _clip(t, d):
    return t.map_coeffs(lambda f: truncate_degree(f, ["w1", "w2"], d))


def check_compat_x1(model, a, b, c, which="tau", degree=2, swap_shifts=False):
    """``S_{z1,z2}(X_{w1,w2} (x) 1) = (X_{w1,w2} (x) 1) S^{23} S^{13}``.

    The S-factor between a and c sits at ``z1 + w1`` and the one between b
    and c at ``z1 + w2``; ``swap_shifts=True`` exchanges the two.  Both sides
    are multiplied by a polynomial clearing the ``w`` poles of X and compared
    up to total degree ``degree`` in ``w1, w2``.
    """
    d = degree
    Q = _w_denominator(model, [(a, b)])
    xw = x2_mono(model, a, b, ("w1", "w2"), nmax=d)
    lhs = TensorElement(arity=2)
    for m, f in xw.terms.items():
        lhs = lhs + _s_mono(model, which, m, c, ("z1", "z2")).scale(f * Q)
    wa, wb = ("w2", "w1") if swap_shifts else ("w1", "w2")

    def S_shift(w):
        def fn(m, n):
            base = _s_mono(model, which, m, n, ("z1", "z2"))
            return base.map_coeffs(lambda f: taylor_shift(f, "z1", w, d))
        return fn

    x = TensorElement({(a, b, c): RatFn.const(1, model.T)}, 3)
    y = _apply23(S_shift(wb), _apply13(S_shift(wa), x))
    rhs = TensorElement(arity=2)
    for (p, q, r_), s in y.terms.items():
        for m, f in x2_mono(model, p, q, ("w1", "w2"), nmax=d).terms.items():
            rhs = rhs + TensorElement({(m, r_): s * f * Q})
    tag = "swapped" if swap_shifts else "paired"
    return [_report("compat_x1", f"{which},{tag}; {_names(a, b, c)}",
                    {"T": model.T, "w_degree": d}, _clip(lhs, d), _clip(rhs, d))]


def check_compat_1x(model, a, b, c, which="tau", degree=2):
    """``S_{z1,z2}(1 (x) X_{w1,w2}) = (1 (x) X_{w1,w2}) S^{12}_{z1,z2+w1} S^{13}_{z1,z2+w2}``."""
    d = degree
    Q = _w_denominator(model, [(b, c)])
    xw = x2_mono(model, b, c, ("w1", "w2"), nmax=d)
    lhs = TensorElement(arity=2)
    for m, f in xw.terms.items():
        lhs = lhs + _s_mono(model, which, a, m, ("z1", "z2")).scale(f * Q)

    def S_shift(w):
        def fn(m, n):
            base = _s_mono(model, which, m, n, ("z1", "z2"))
            return base.map_coeffs(lambda f: taylor_shift(f, "z2", w, d))
        return fn

    x = TensorElement({(a, b, c): RatFn.const(1, model.T)}, 3)
    y = _apply12(S_shift("w1"), _apply13(S_shift("w2"), x))
    rhs = TensorElement(arity=2)
    for (p, q, r_), s in y.terms.items():
        for m, f in x2_mono(model, q, r_, ("w1", "w2"), nmax=d).terms.items():
            rhs = rhs + TensorElement({(p, m): s * f * Q})
    return [_report("compat_1x", f"{which}; {_names(a, b, c)}",
                    {"T": model.T, "w_degree": d}, _clip(lhs, d), _clip(rhs, d))]


# ---------------------------------------------------------------- locality


def _ord(f, var):
    """Lowest exponent of ``var`` in a RatFn whose poles are powers of ``var``."""
    i = {"z1": 0, "z2": 1}[var]
    low = None
    for k in range(f.T):
        for e in laurent_terms(f, k):
            low = e[i] if low is None else min(low, e[i])
    return 0 if low is None else low


def _y_bounded(model, a, m, var, nmax):
    """``Y(a, var) m`` truncated at exponential order ``nmax``.

    Returns ``(element, exact, low)``: exponents of ``var`` up to ``exact``
    are exact, and no exponent below ``low`` can occur.
    """
    res = x2_mono(model, a, m, (var, None), nmax=nmax)
    exact = None
    low = 0
    for (a1, a2), _ in mono_coproduct(a):
        for (_, m2), _ in mono_coproduct(m):
            v = value(model, model.r, a2, m2, (var, None))
            if not v:
                continue
            o = _ord(v, var)
            low = min(low, o)
            if a1:
                exact = nmax + o if exact is None else min(exact, nmax + o)
    return res, (10 ** 9 if exact is None else exact), low


def _apply_y(model, a, elem, var, nmax):
    """``Y(a, var)`` applied to an Element with RatFn coefficients."""
    out = Element()
    exact = 10 ** 9
    low = 0
    for m, c in elem.terms.items():
        res, ex, lo = _y_bounded(model, a, m, var, nmax)
        out = out + res.scale(c)
        exact = min(exact, ex)
        low = min(low, lo)
    return out, exact, low


def _window(elem, kt, box):
    """``{(monomial, t-order, i, j): coeff}`` for z1^i z2^j with i, j <= box."""
    out = {}
    for m, f in elem.terms.items():
        for k in range(kt):
            for e, c in laurent_terms(f, k).items():
                if e[0] <= box and e[1] <= box:
                    out[(m, k, e[0], e[1])] = out.get((m, k, e[0], e[1]), 0) + c
    return out


def _locality_sides(model, a, b, c, kt, box):
    nb = box + 2
    while True:
        inner, ex2, _ = _apply_y(model, b, Element.monomial(c), "z2", nb)
        lhs, ex1, _ = _apply_y(model, a, inner, "z1", nb)
        if min(ex1, ex2) >= box:
            break
        nb += box - min(ex1, ex2)
    # right side: i_{z2;z1} S^tau_{z2,z1}(b (x) a) applied as Y(x, z2) Y(y, z1) c
    st = s_tau_tensor(model, TensorElement({(b, a): Fraction(1)}), ("z2", "z1"))
    K = box + 2
    n_in = n_out = box + 2
    while True:
        rhs = Element()
        ex1 = ex2 = 10 ** 9
        for (x, y), s in st.terms.items():
            le = iota_expand(s, "z2", "z1", K)
            pmin = min(le.coeffs, default=0)
            cmin = 0
            for p, cp in le.coeffs.items():
                cmin = min(cmin, _ord(cp, "z2"))
            inner, exi, lowi = _apply_y(model, y, Element.monomial(c), "z1", n_in)
            outer, exo, _ = _apply_y(model, x, inner, "z2", n_out)
            ex1 = min(ex1, K + lowi, exi + pmin)
            ex2 = min(ex2, exo + cmin)
            for p, cp in le.coeffs.items():
                zp = RatFn.var("z1", model.T) ** p if p >= 0 else \
                    RatFn.const(1, model.T) / RatFn.var("z1", model.T) ** (-p)
                rhs = rhs + outer.scale(cp * zp)
        if ex1 >= box and ex2 >= box:
            break
        if ex1 < box:
            K += box - ex1
            n_in += box - ex1
        if ex2 < box:
            n_out += box - ex2
    return lhs, rhs, {"k": kt, "box": box, "nA": nb, "K": K}


def _times_diff_power(win, N):
    """Multiply window coefficients by ``(z1 - z2)^N`` (the window is down-closed)."""
    out = {}
    for (m, k, i, j), c in win.items():
        for l in range(N + 1):
            key = (m, k, i + N - l, j + l)
            out[key] = out.get(key, 0) + c * comb(N, l) * (-1) ** l
    return out


def check_locality(model, a, b, c, k=1, Nmax=6, box=None):
    """Minimal ``N <= Nmax`` with ``(z1-z2)^N`` killing the difference of the two
    iterated products mod ``t^k``.

    Coefficients are compared on the exponents ``z1^i z2^j`` with ``i, j <= box``;
    the default ``box = Nmax + 2`` keeps room for ``(z1-z2)^Nmax`` so that a
    large ``N`` cannot pass just by pushing everything out of the window.
    """
    box = Nmax + 2 if box is None else box
    if k > model.T:
        raise InconclusiveTruncation(f"locality mod t^{k} needs t-truncation >= {k}, model has {model.T}")
    lhs, rhs, trunc = _locality_sides(model, a, b, c, k, box)
    wl = _window(lhs, k, box)
    wr = _window(rhs, k, box)
    diff = {key: wl.get(key, 0) - wr.get(key, 0) for key in set(wl) | set(wr)}
    diff = {key: v for key, v in diff.items() if v}
    inputs = _names(a, b, c)
    for N in range(Nmax + 1):
        prod = _times_diff_power(diff, N)
        bad = [(key, v) for key, v in prod.items() if v and key[2] <= box and key[3] <= box]
        if not bad:
            return [AxiomReport("locality", inputs, dict(trunc, Nmax=Nmax), True, "", N)]
    (m, kk, i, j), v = min(bad, key=lambda kv: (kv[0][1], kv[0][2], kv[0][3], repr(kv[0][0])))
    detail = f"no N <= {Nmax}; at N={Nmax}: {mono_str(m)} t^{kk} z1^{i} z2^{j} differs by {v}"
    return [AxiomReport("locality", inputs, dict(trunc, Nmax=Nmax), False, detail, None)]


# ---------------------------------------------------------------- dispatch


def check_axiom(model, axiom, *args, **kwargs):
    fn = _CHECKS.get(axiom)
    if fn is None:
        raise UnsupportedAxiom(f"unknown axiom {axiom!r}; supported: {', '.join(AXIOMS)}")
    return fn(model, *args, **kwargs)


_CHECKS = {
    "vacuum": check_vacuum,
    "hd_cov_x": check_hd_cov_x,
    "hd_cov_s": check_hd_cov_s,
    "hd_cov_mult": check_hd_cov_mult,
    "yang_baxter": check_yang_baxter,
    "compat_x1": check_compat_x1,
    "compat_1x": check_compat_1x,
    "group_tau": check_group_tau,
    "group_gamma": check_group_gamma,
    "s_at_zero": check_s_at_zero,
    "braided_symmetry": check_braided_symmetry,
    "locality": check_locality,
}


def run_suite(model, bound=None, axioms=AXIOMS, k=None, Nmax=6):
    """Run every axiom on a standard set of inputs up to ``bound``.

    Locality runs mod ``t^k`` (default ``min(T, 2)``) on generator pairs.
    """
    k = min(model.T, 2) if k is None else k
    bound = model.degree_bound if bound is None else bound
    mons = basis(list(model.gens.items()), bound, bound)
    small = basis(list(model.gens.items()), 1, 1)
    gens0 = [m for m in basis(list(model.gens.items()), 1, 0) if m]
    for ax in axioms:
        if ax not in _CHECKS:
            raise UnsupportedAxiom(f"unknown axiom {ax!r}; supported: {', '.join(AXIOMS)}")
    suite = SuiteReport()
    for ax in axioms:
        if ax == "vacuum":
            for a in mons:
                suite.reports += check_vacuum(model, a)
        elif ax in ("hd_cov_x", "hd_cov_mult", "braided_symmetry", "group_tau",
                    "group_gamma", "s_at_zero"):
            for a, b in product(mons, repeat=2):
                suite.reports += check_axiom(model, ax, a, b)
        elif ax == "hd_cov_s":
            for a, b in product(small, repeat=2):
                for which in ("tau", "gamma"):
                    suite.reports += check_hd_cov_s(model, a, b, which)
        elif ax == "yang_baxter":
            for a, b, c in product(small, repeat=3):
                for which in ("tau", "gamma"):
                    suite.reports += check_yang_baxter(model, a, b, c, which)
        elif ax in ("compat_x1", "compat_1x"):
            for a, b, c in product(gens0 + [ONE], repeat=3):
                for which in ("tau", "gamma"):
                    suite.reports += check_axiom(model, ax, a, b, c, which)
        elif ax == "locality":
            for a, b in product(gens0, repeat=2):
                for c in basis(list(model.gens.items()), 2, 0):
                    suite.reports += check_locality(model, a, b, c, k=k, Nmax=Nmax)
    return suite
