"""Exact truncated t-series of rational functions with a whitelisted pole locus.

A :class:`RatFn` stores, for every power ``t^k`` with ``k < T``, a pair
``(numerator, denominator)``.  Numerators are sparse polynomials with
:class:`~fractions.Fraction` coefficients over the fixed variable table
:data:`VARS`; denominators are products of powers of canonical linear forms.
Only the forms

* ``x``               for a positional variable ``x``,
* ``x + g``, ``x + h``, ``x + g + h``  (shifted positional variable),
* ``x - y``           for positional ``x`` before ``y`` in :data:`VARS`,

may occur.  Because each of these is irreducible and carries a fixed sign
convention, a numerator that no denominator factor divides is unique, so
equality is plain structural equality after normalisation.

Each t-order keeps its own denominator, so pole orders may grow with ``k``.
"""

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .errors import (
    DisallowedPole,
    DisallowedPoleAfterShift,
    DivisionOutsideRing,
    InsufficientLowTrunc,
    TruncationZero,
    UnknownVariable,
    UnsupportedFactor,
)

VARS = ("z1", "z2", "z3", "w1", "w2", "g", "h")
NV = len(VARS)
POSITIONAL = range(5)
SHIFTS = (5, 6)
INDEX = {name: i for i, name in enumerate(VARS)}
ZERO = (0,) * NV
DEFAULT_T = 4

ONE_POLY = {ZERO: Fraction(1)}


def var_index(name):
    try:
        return INDEX[name]
    except KeyError:
        raise UnknownVariable(f"unknown variable {name!r}") from None


def unit(i, c=1):
    v = [0] * NV
    v[i] = c
    return tuple(v)


# ---------------------------------------------------------------- polynomials
# A polynomial is a dict {exponent tuple: Fraction} without zero values.


def p_add(a, b, sb=1):
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + sb * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def p_scale(a, c):
    if not c:
        return {}
    return {e: v * c for e, v in a.items()}


def p_mul(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = {}
    for e2, c2 in b.items():
        for e1, c1 in a.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                del out[e]
    return out


def p_shift(a, exps):
    return {tuple(x + y for x, y in zip(e, exps)): c for e, c in a.items()}


def p_linear(form):
    return {unit(i): Fraction(c) for i, c in enumerate(form) if c}


@lru_cache(maxsize=4096)
def _lin_pow(form, k):
    if k == 0:
        return ONE_POLY
    if k == 1:
        return p_linear(form)
    half = _lin_pow(form, k // 2)
    sq = p_mul(half, half)
    return p_mul(sq, p_linear(form)) if k % 2 else sq


def lin_pow(form, k):
    return dict(_lin_pow(form, k))


def p_deriv(a, i):
    out = {}
    for e, c in a.items():
        if e[i]:
            ne = list(e)
            ne[i] -= 1
            out[tuple(ne)] = c * e[i]
    return out


def p_subst(a, images):
    """Compose ``a`` with the linear substitution ``x_i -> images[i]``."""
    out = {}
    for e, c in a.items():
        term = {ZERO: c}
        for i, k in enumerate(e):
            if k:
                term = p_mul(term, _lin_pow(images[i], k))
                if not term:
                    break
        out = p_add(out, term)
    return out


def p_div_linear(a, form):
    """Exact quotient ``a / form`` or ``None`` when ``form`` does not divide ``a``."""
    piv = next(i for i, c in enumerate(form) if c)
    if sum(1 for c in form if c) == 1:
        if all(e[piv] >= 1 for e in a):
            s = Fraction(1, form[piv])
            return {e[:piv] + (e[piv] - 1,) + e[piv + 1:]: c * s for e, c in a.items()}
        return None
    lead = form[piv]
    # root: x_piv = c_root, a linear polynomial in the other variables
    c_root = {unit(i): Fraction(-c, lead) for i, c in enumerate(form) if c and i != piv}
    by_pow = {}
    for e, c in a.items():
        k = e[piv]
        rest = e[:piv] + (0,) + e[piv + 1:]
        by_pow.setdefault(k, {})[rest] = c
    n = max(by_pow)
    quot = {}
    carry = {}
    for k in range(n, 0, -1):
        qk = p_add(by_pow.get(k, {}), p_mul(c_root, carry)) if carry else dict(by_pow.get(k, {}))
        carry = qk
        for e, c in qk.items():
            quot[e[:piv] + (k - 1,) + e[piv + 1:]] = c
    rem = p_add(by_pow.get(0, {}), p_mul(c_root, carry))
    if rem:
        return None
    return p_scale(quot, Fraction(1, lead))


# ---------------------------------------------------------------- linear forms


def canon_form(vec):
    """Split a nonzero integer/rational vector as ``scale * canonical``."""
    vec = [Fraction(c) for c in vec]
    nz = [c for c in vec if c]
    if not nz:
        raise DisallowedPole("pole at a vanishing linear form", factor=None)
    den = 1
    for c in nz:
        den = den * c.denominator // _gcd(den, c.denominator)
    ints = [int(c * den) for c in vec]
    g = 0
    for c in ints:
        g = _gcd(g, abs(c))
    if next(c for c in ints if c) < 0:
        g = -g
    return Fraction(g, den), tuple(c // g for c in ints)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def is_allowed(form):
    pos = [form[i] for i in POSITIONAL]
    shift = [form[i] for i in SHIFTS]
    nz = [(i, c) for i, c in enumerate(pos) if c]
    if len(nz) == 1 and nz[0][1] == 1:
        return all(c in (0, 1) for c in shift)
    if len(nz) == 2 and nz[0][1] == 1 and nz[1][1] == -1:
        return not any(shift)
    return False


def form_str(form):
    out = ""
    for i, c in enumerate(form):
        if not c:
            continue
        sign = "-" if c < 0 else ("+" if out else "")
        mag = "" if abs(c) == 1 else f"{abs(c)}*"
        out += f"{sign}{mag}{VARS[i]}"
    return out


def form_from_dict(d):
    v = [0] * NV
    for name, c in d.items():
        v[var_index(name)] += c
    return tuple(v)


# ---------------------------------------------------------------- t-orders
# One t-order is (numerator poly, denominator dict {form: exponent}).

ZERO_ORDER = ({}, {})


def o_norm(num, den):
    if not num:
        return {}, {}
    den = {f: e for f, e in den.items() if e}
    for f in list(den):
        while den[f]:
            q = p_div_linear(num, f)
            if q is None:
                break
            num = q
            den[f] -= 1
        if not den[f]:
            del den[f]
    return num, den


def _raise_to(num, den, target):
    for f, e in target.items():
        k = e - den.get(f, 0)
        if k:
            num = p_mul(num, _lin_pow(f, k))
    return num


def o_add(a, b, sb=1):
    (na, da), (nb, db) = a, b
    if not nb:
        return a
    if not na:
        return (p_scale(nb, sb), dict(db)) if sb != 1 else b
    if da == db:
        return o_norm(p_add(na, nb, sb), dict(da))
    target = dict(da)
    for f, e in db.items():
        if e > target.get(f, 0):
            target[f] = e
    num = p_add(_raise_to(na, da, target), _raise_to(nb, db, target), sb)
    return o_norm(num, target)


def o_mul(a, b):
    (na, da), (nb, db) = a, b
    if not na or not nb:
        return ZERO_ORDER
    den = dict(da)
    for f, e in db.items():
        den[f] = den.get(f, 0) + e
    return o_norm(p_mul(na, nb), den)


def o_scale(a, c):
    if not c or not a[0]:
        return ZERO_ORDER
    return p_scale(a[0], c), a[1]


def o_deriv(a, i):
    num, den = a
    if not num:
        return ZERO_ORDER
    out = o_norm(p_deriv(num, i), dict(den))
    for f, e in den.items():
        if f[i]:
            d2 = dict(den)
            d2[f] = e + 1
            out = o_add(out, o_norm(p_scale(num, -e * f[i]), d2))
    return out


def o_subst(a, images, shift_error=False):
    num, den = a
    if not num:
        return ZERO_ORDER
    num = p_subst(num, images)
    nd = {}
    for f, e in den.items():
        vec = [0] * NV
        for i, c in enumerate(f):
            if c:
                for j, d in enumerate(images[i]):
                    vec[j] += c * d
        scale, g = canon_form(vec)
        if not is_allowed(g):
            exc = DisallowedPoleAfterShift if shift_error else DisallowedPole
            raise exc(f"substitution produces disallowed pole ({form_str(g)})", factor=g)
        num = p_scale(num, scale ** (-e))
        nd[g] = nd.get(g, 0) + e
    return o_norm(num, nd)


def o_key(a):
    num, den = a
    return (tuple(sorted(num.items())), tuple(sorted(den.items())))


# ---------------------------------------------------------------- RatFn


def _coerce_T(T):
    if T is None:
        return DEFAULT_T
    if int(T) < 1:
        raise TruncationZero(f"t-truncation must be positive, got {T}")
    return int(T)


class RatFn:
    """Truncated t-series ``sum_{k<T} t^k p_k / q_k`` with whitelisted ``q_k``."""

    __slots__ = ("_orders", "T", "_hash")

    def __init__(self, orders=(), T=None, _normalized=False):
        T = _coerce_T(T)
        orders = list(orders)[:T]
        if not _normalized:
            normed = []
            for num, den in orders:
                num = {tuple(e): Fraction(c) for e, c in num.items() if c}
                den = dict(den)
                for f in den:
                    if not is_allowed(f):
                        raise DisallowedPole(f"factor ({form_str(f)}) is not whitelisted", factor=f)
                normed.append(o_norm(num, den))
            orders = normed
        orders += [ZERO_ORDER] * (T - len(orders))
        self._orders = tuple(orders)
        self.T = T
        self._hash = None

    # -- constructors
    @classmethod
    def const(cls, c, T=None):
        c = Fraction(c)
        return cls([({ZERO: c}, {})] if c else [], T, _normalized=True)

    @classmethod
    def var(cls, name, T=None):
        return cls([({unit(var_index(name)): Fraction(1)}, {})], T, _normalized=True)

    @classmethod
    def t(cls, T=None):
        return cls([ZERO_ORDER, ({ZERO: Fraction(1)}, {})], T, _normalized=True)

    @classmethod
    def linear(cls, coeffs, T=None):
        """The linear polynomial ``sum coeffs[name] * name``."""
        return cls([(p_linear(form_from_dict(coeffs)), {})], T)

    @classmethod
    def inv_factor(cls, coeffs, power=1, T=None):
        """``1 / L**power`` for a whitelisted linear form ``L`` (given up to scale)."""
        scale, f = canon_form(form_from_dict(coeffs))
        if not is_allowed(f):
            raise DisallowedPole(f"factor ({form_str(f)}) is not whitelisted", factor=f)
        return cls([({ZERO: scale ** (-power)}, {f: power})], T, _normalized=True)

    @classmethod
    def from_orders(cls, orders, T=None):
        return cls(orders, T)

    def _new(self, orders, T):
        return RatFn(orders, T, _normalized=True)

    def _coerce(self, other):
        if isinstance(other, RatFn):
            return other
        if isinstance(other, (int, Fraction)):
            return RatFn.const(other, self.T)
        return NotImplemented

    # -- accessors
    @property
    def orders(self):
        return self._orders

    def order(self, k):
        if k >= self.T:
            raise TruncationZero(f"order {k} beyond truncation {self.T}")
        return self._orders[k]

    def is_zero(self):
        return not any(num for num, _ in self._orders)

    def __bool__(self):
        return not self.is_zero()

    def is_constant(self):
        """True when every order is a rational number (no variable dependence)."""
        return all(not den and all(e == ZERO for e in num) for num, den in self._orders)

    def truncate(self, T):
        T = _coerce_T(T)
        if T > self.T:
            raise TruncationZero(f"cannot raise truncation from {self.T} to {T}")
        return self._new(self._orders[:T], T)

    def pole_order(self, coeffs):
        """Largest exponent of the given linear form over all t-orders."""
        _, f = canon_form(form_from_dict(coeffs))
        return max((den.get(f, 0) for _, den in self._orders), default=0)

    def variables(self):
        used = set()
        for num, den in self._orders:
            for e in num:
                used.update(i for i, k in enumerate(e) if k)
            for f in den:
                used.update(i for i, c in enumerate(f) if c)
        return {VARS[i] for i in used}

    def factors(self):
        return {f for _, den in self._orders for f in den}

    # -- arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        T = min(self.T, other.T)
        return self._new([o_add(a, b) for a, b in zip(self._orders[:T], other._orders[:T])], T)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        T = min(self.T, other.T)
        return self._new([o_add(a, b, -1) for a, b in zip(self._orders[:T], other._orders[:T])], T)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return self._new([o_scale(a, -1) for a in self._orders], self.T)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._new([o_scale(a, other) for a in self._orders], self.T)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        T = min(self.T, other.T)
        out = [ZERO_ORDER] * T
        for i in range(T):
            a = self._orders[i]
            if not a[0]:
                continue
            for j in range(T - i):
                b = other._orders[j]
                if b[0]:
                    out[i + j] = o_add(out[i + j], o_mul(a, b))
        return self._new(out, T)

    __rmul__ = __mul__

    def mul_poly(self, poly):
        """Multiply every order by a polynomial (dict form)."""
        if not poly:
            return self._new([], self.T)
        return self._new([o_norm(p_mul(n, poly), dict(d)) if n else ZERO_ORDER
                          for n, d in self._orders], self.T)

    def inverse(self):
        a0 = self._orders[0]
        if not a0[0]:
            raise DivisionOutsideRing("order-0 part of the divisor vanishes")
        inv0 = _invert_order(a0)
        a_inv = self._new([inv0], self.T)
        delta = self * a_inv - 1
        # 1/self = a_inv * sum_n (-delta)^n, delta = O(t)
        out = RatFn.const(1, self.T)
        term = RatFn.const(1, self.T)
        for _ in range(1, self.T):
            term = term * (-delta)
            if term.is_zero():
                break
            out = out + term
        return out * a_inv

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division of RatFn by zero")
            return self * (Fraction(1) / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return (RatFn.const(1, self.T) / self) ** (-n)
        out = RatFn.const(1, self.T)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- equality
    def _key(self):
        return tuple(o_key(a) for a in self._orders)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFn.const(other, self.T)
        if not isinstance(other, RatFn):
            return NotImplemented
        T = min(self.T, other.T)
        return all(o_key(a) == o_key(b) for a, b in zip(self._orders[:T], other._orders[:T]))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.T, self._key()))
        return self._hash

    # -- calculus and substitution
    def derive(self, name):
        i = var_index(name)
        return self._new([o_deriv(a, i) for a in self._orders], self.T)

    def substitute(self, mapping, shift_error=False):
        """Linear substitution ``{name: {name2: coeff, ...} or 0 or name2}``."""
        images = [unit(i) for i in range(NV)]
        for name, img in mapping.items():
            i = var_index(name)
            if img == 0 or img is None:
                images[i] = ZERO
            elif isinstance(img, str):
                images[i] = unit(var_index(img))
            else:
                images[i] = form_from_dict(img)
        return self._new([o_subst(a, images, shift_error) for a in self._orders], self.T)

    def rename(self, mapping):
        return self.substitute(dict(mapping))

    def specialize(self, *names):
        """Set the named variables to zero."""
        return self.substitute({n: 0 for n in names})

    # -- text
    def __str__(self):
        parts = [f"t^{k}: {order_str(a)}" for k, a in enumerate(self._orders) if a[0]]
        body = "; ".join(parts) if parts else "0"
        return f"{body} + O(t^{self.T})"

    def __repr__(self):
        return f"RatFn({self})"


def _invert_order(a):
    """Invert one t-order; its numerator must factor over the whitelist."""
    num, den = a
    rest = num
    inv_den = {}
    candidates = _candidate_factors(num)
    progress = True
    while progress and not _is_const(rest):
        progress = False
        for f in candidates:
            q = p_div_linear(rest, f)
            if q is not None:
                rest = q
                inv_den[f] = inv_den.get(f, 0) + 1
                progress = True
                break
    if not _is_const(rest):
        raise DivisionOutsideRing(
            f"divisor numerator ({poly_str(rest)}) is not a product of whitelisted factors",
            factor=poly_str(rest))
    c = rest[ZERO]
    new_num = {ZERO: 1 / c}
    for f, e in den.items():
        new_num = p_mul(new_num, _lin_pow(f, e))
    return o_norm(new_num, inv_den)


def _is_const(p):
    return len(p) == 1 and ZERO in p


def _candidate_factors(num):
    used = set()
    for e in num:
        used.update(i for i, k in enumerate(e) if k)
    pos = [i for i in POSITIONAL if i in used]
    shifts = [i for i in SHIFTS if i in used]
    out = []
    for i in pos:
        out.append(unit(i))
        for k in range(1, 1 << len(shifts)):
            v = list(unit(i))
            for b, s in enumerate(shifts):
                if k >> b & 1:
                    v[s] = 1
            out.append(tuple(v))
    for a in pos:
        for b in pos:
            if a < b:
                v = [0] * NV
                v[a], v[b] = 1, -1
                out.append(tuple(v))
    return out


def unfactored_part(num):
    """The cofactor of ``num`` left after removing all whitelisted linear factors."""
    rest = num
    for f in _candidate_factors(num):
        while True:
            q = p_div_linear(rest, f)
            if q is None:
                break
            rest = q
    return rest


# ---------------------------------------------------------------- printing


def _mono_key(e):
    return (sum(e), e)


def poly_str(p):
    if not p:
        return "0"
    out = ""
    for e in sorted(p, key=_mono_key, reverse=True):
        c = p[e]
        mono = "*".join(VARS[i] if k == 1 else f"{VARS[i]}^{k}" for i, k in enumerate(e) if k)
        neg = c < 0
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        if not out:
            out = f"-{body}" if neg else body
        else:
            out += f" - {body}" if neg else f" + {body}"
    return out


def den_str(den):
    if not den:
        return "1"
    return "*".join(f"({form_str(f)})^{den[f]}" for f in sorted(den, reverse=True))


def order_str(a):
    num, den = a
    return f"({poly_str(num)})/({den_str(den)})"


# ---------------------------------------------------------------- expansions and residues

_OPS = {"add": "__add__", "sub": "__sub__", "mul": "__mul__", "div": "__truediv__"}


def arith(a, op, b):
    """Apply ``op`` in ``{'add', 'sub', 'mul', 'div'}`` to two RatFn values."""
    return getattr(a, _OPS[op])(b)


def derive(f, var):
    return f.derive(var)


def shift_vars(f, names, by="g"):
    """Substitute ``x -> x + by`` for every ``x`` in ``names``.

    ``by`` is a shift variable or a tuple of them (shift by their sum).
    """
    by = (by,) if isinstance(by, str) else tuple(by)
    return f.substitute({n: {n: 1, **{b: 1 for b in by}} for n in names}, shift_error=True)


def taylor_shift(f, var, by, order):
    """``f(var + by)`` expanded in powers of ``by`` up to degree ``order``."""
    out = RatFn.const(0, f.T)
    term = f
    byv = RatFn.var(by, f.T)
    for n in range(order + 1):
        if n:
            term = term.derive(var)
        out = out + term * (byv ** n) * Fraction(1, factorial(n))
    return out


def truncate_degree(f, names, order):
    """Drop numerator monomials whose total degree in ``names`` exceeds ``order``.

    Only meaningful when the named variables do not occur in denominators.
    """
    idx = [var_index(n) for n in names]
    out = []
    for num, den in f.orders:
        if any(f_[i] for f_ in den for i in idx):
            raise UnsupportedFactor("truncated variables occur in a denominator")
        out.append(({e: c for e, c in num.items() if sum(e[i] for i in idx) <= order}, den))
    return RatFn(out, f.T)


# ---------------------------------------------------------------- local expansions


def _expand_order(a, v, base, khi, outer=None):
    """Expand one t-order after ``x_v -> x_base + u`` (``base=None``: ``x_v -> u``).

    Returns ``(pole, {p: order})`` for ``-pole <= p <= khi``.
    """
    num, den = a
    if not num:
        return 0, {}
    nser = {}
    for e, c in num.items():
        k = e[v]
        rest = e[:v] + (0,) + e[v + 1:]
        if base is None:
            nser[k] = p_add(nser.get(k, {}), {rest: c})
        else:
            for j in range(k + 1):
                r2 = list(rest)
                r2[base] += k - j
                nser[j] = p_add(nser.get(j, {}), {tuple(r2): c * comb(k, j)})
    pole = 0
    passthru = {}
    factor_series = []
    scalar = Fraction(1)
    for f, e in den.items():
        cv = f[v]
        if not cv:
            passthru[f] = e
            continue
        rest = list(f)
        rest[v] = 0
        if base is not None:
            rest[base] += cv
        if not any(rest):
            pole += e
            scalar /= Fraction(cv) ** e
            continue
        if outer is not None and any(c for i, c in enumerate(rest) if i != outer):
            raise UnsupportedFactor(
                f"factor ({form_str(f)}) entangles the expansion variable with a third variable")
        s, g = canon_form(rest)
        if not is_allowed(g):
            raise UnsupportedFactor(f"expansion produces non-whitelisted factor ({form_str(g)})")
        factor_series.append((e, Fraction(cv), s, g))
    top = khi + pole
    if top < 0:
        return pole, {}
    series = {j: o_norm(p_scale(p, scalar), dict(passthru)) for j, p in nser.items() if j <= top}
    for e, cv, s, g in factor_series:
        fs = {}
        for n in range(top + 1):
            coef = (-1) ** n * comb(e + n - 1, n) * cv ** n * s ** (-e - n)
            fs[n] = ({ZERO: coef}, {g: e + n})
        new = {}
        for j, oa in series.items():
            if not oa[0]:
                continue
            for n, ob in fs.items():
                if j + n > top:
                    break
                new[j + n] = o_add(new.get(j + n, ZERO_ORDER), o_mul(oa, ob))
        series = new
    return pole, {j - pole: o for j, o in series.items() if o[0]}


class LaurentExp:
    """Truncated Laurent expansion ``sum_{p=-P}^{K} u^p c_p`` with RatFn ``c_p``.

    For an iota expansion ``u`` is the inner variable itself; for a diagonal
    expansion around ``x_i = x_j`` it is ``x_i - x_j``.
    """

    def __init__(self, coeffs, low, high, T, u_form, label=""):
        self.coeffs = {p: c for p, c in coeffs.items() if not c.is_zero()}
        self.low = low
        self.high = high
        self.T = T
        self.u_form = u_form
        self.label = label

    def coeff(self, p):
        if p > self.high:
            raise InsufficientLowTrunc(f"power {p} beyond the expansion order {self.high}")
        return self.coeffs.get(p, RatFn.const(0, self.T))

    def __eq__(self, other):
        if not isinstance(other, LaurentExp):
            return NotImplemented
        hi = min(self.high, other.high)
        keys = {p for p in self.coeffs if p <= hi} | {p for p in other.coeffs if p <= hi}
        return all(self.coeff(p) == other.coeff(p) for p in keys)

    def __add__(self, other):
        hi = min(self.high, other.high)
        keys = {p for p in self.coeffs if p <= hi} | {p for p in other.coeffs if p <= hi}
        return LaurentExp({p: self.coeff(p) + other.coeff(p) for p in keys},
                          min(self.low, other.low), hi, min(self.T, other.T), self.u_form, self.label)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RatFn)):
            return LaurentExp({p: c * other for p, c in self.coeffs.items()},
                              self.low, self.high, self.T, self.u_form, self.label)
        lo_a = min(self.coeffs, default=0)
        lo_b = min(other.coeffs, default=0)
        hi = min(self.high + lo_b, other.high + lo_a)
        out = {}
        for p, c in self.coeffs.items():
            for q, d in other.coeffs.items():
                if p + q <= hi:
                    out[p + q] = out.get(p + q, RatFn.const(0, min(self.T, other.T))) + c * d
        return LaurentExp(out, self.low + other.low, hi, min(self.T, other.T), self.u_form, self.label)

    def to_ratfn(self):
        """Resum the retained terms into a single RatFn."""
        total = RatFn.const(0, self.T)
        for p, c in self.coeffs.items():
            if p >= 0:
                total = total + c.mul_poly(lin_pow(self.u_form, p))
            else:
                s, f = canon_form(self.u_form)
                total = total + c * RatFn([({ZERO: s ** p}, {f: -p})], self.T, _normalized=True)
        return total

    def __str__(self):
        if not self.coeffs:
            return "0"
        u = form_str(self.u_form)
        return " + ".join(f"[{self.coeffs[p]}]*({u})^{p}" for p in sorted(self.coeffs))

    __repr__ = __str__


def _laurent(f, v, base, low, high, outer=None, u_form=None, label="", strict_low=True):
    per_order = []
    maxpole = 0
    for a in f.orders:
        pole, terms = _expand_order(a, v, base, high, outer)
        maxpole = max(maxpole, pole)
        per_order.append(terms)
    if strict_low and maxpole > low:
        raise InsufficientLowTrunc(f"pole order {maxpole} exceeds low truncation {low}")
    keys = {p for terms in per_order for p in terms}
    coeffs = {}
    for p in keys:
        coeffs[p] = RatFn([terms.get(p, ZERO_ORDER) for terms in per_order], f.T)
    return LaurentExp(coeffs, max(low, maxpole), high, f.T, u_form, label)


def iota_expand(f, outer, inner, K):
    """Expansion ``i_{outer;inner}`` of ``f`` in powers of ``inner`` up to ``inner^K``."""
    if K < 0:
        raise InsufficientLowTrunc("iota expansion order must be non-negative")
    v, o = var_index(inner), var_index(outer)
    return _laurent(f, v, None, 10 ** 9, K, outer=o, u_form=unit(v),
                    label=f"i_{{{outer};{inner}}}", strict_low=False)


def diagonal_expand(f, i, j, P, K):
    """Laurent expansion of ``f`` around ``i = j`` in ``u = i - j`` on ``[-P, K]``."""
    vi, vj = var_index(i), var_index(j)
    u = [0] * NV
    u[vi] += 1
    u[vj] -= 1
    return _laurent(f, vi, vj, P, K, u_form=tuple(u), label=f"{i}={j}")


def diagonal_pole(f, i, j):
    s, form = canon_form(form_from_dict({i: 1, j: -1}))
    return max((den.get(form, 0) for _, den in f.orders), default=0)


def residue_diagonal(f, i, j, n):
    """Coefficient of ``u^-1`` in ``f * u^n`` expanded around ``i = j``."""
    if n < 0:
        raise ValueError("residue exponent must be non-negative")
    p = -1 - n
    P = diagonal_pole(f, i, j)
    if p < -P:
        return RatFn.const(0, f.T)
    return diagonal_expand(f, i, j, P, p).coeff(p)


def laurent_terms(f, k):
    """Laurent monomials of order ``t^k`` when all poles are pure-variable factors.

    Returns ``{exponent tuple (may be negative): Fraction}``.
    """
    num, den = f.orders[k]
    shift = [0] * NV
    for form, e in den.items():
        nz = [i for i, c in enumerate(form) if c]
        if len(nz) != 1:
            raise UnsupportedFactor(f"factor ({form_str(form)}) is not a monomial")
        shift[nz[0]] -= e
    return p_shift(num, shift)


# ---------------------------------------------------------------- ring profiles


class RingProfile:
    """A codomain descriptor: admissible variables and pole factors."""

    def __init__(self, name, variables, factors):
        self.name = name
        self.variables = frozenset(variables)
        self.factors = frozenset(canon_form(form_from_dict(f))[1] for f in factors)

    @classmethod
    def from_forms(cls, name, variables, forms):
        prof = cls(name, variables, [])
        prof.factors = frozenset(forms)
        return prof

    def shifted(self, by):
        """Profile after ``x -> x + by`` on every pure positional pole ``x``."""
        k = var_index(by)
        extra = set()
        for f in self.factors:
            nz = [i for i, c in enumerate(f) if c]
            if len(nz) == 1 and nz[0] in POSITIONAL:
                v = list(f)
                v[k] = 1
                extra.add(tuple(v))
        return RingProfile.from_forms(f"{self.name}+{by}", self.variables | {by},
                                      self.factors | extra)

    def __repr__(self):
        return f"RingProfile({self.name})"


W2 = RingProfile("W2", ["z1", "z2"], [{"z1": 1}, {"z1": 1, "z2": -1}])
X_CODOMAIN = W2
S_TAU = RingProfile("S_tau", ["z1", "z2"], [{"z1": 1}, {"z2": 1}, {"z1": 1, "z2": -1}])
S_GAMMA = RingProfile("S_gamma", ["z1", "z2", "g"],
                      [{"z1": 1}, {"z1": 1, "g": 1}, {"z1": 1, "z2": -1}])


def membership(f, profile):
    if not f.variables() <= profile.variables:
        return False
    return f.factors() <= profile.factors
