"""Free supercommutative Hopf superalgebra on generators with divided-power towers.

A generator ``phi`` of the model produces the symbols ``phi[n] = D^(n) phi[0]``.
Monomials are sorted tuples of :class:`Gen`; repeated even symbols stand for
powers, a repeated odd symbol kills the monomial.  Coefficients are either
:class:`~fractions.Fraction` or :class:`~qvaforge.fnring.RatFn`; the code only
relies on ``+``, ``*`` and truthiness.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, product
from math import comb
from typing import NamedTuple

from .fnring import RatFn


class Gen(NamedTuple):
    name: str
    ddeg: int
    odd: bool

    def __str__(self):
        return f"{self.name}[{self.ddeg}]"


ONE = ()


def mono_parity(m):
    return sum(g.odd for g in m) & 1


def mono_weight(m):
    return sum(g.ddeg for g in m)


def mono_str(m):
    return "*".join(str(g) for g in m) if m else "1"


def normalize_word(word):
    """Sort a word of generator symbols; return ``(sign, monomial)`` or ``None``."""
    word = list(word)
    sign = 1
    # insertion sort, one Koszul flip per odd/odd transposition
    for i in range(1, len(word)):
        j = i
        while j > 0 and word[j - 1] > word[j]:
            if word[j].odd and word[j - 1].odd:
                sign = -sign
            word[j - 1], word[j] = word[j], word[j - 1]
            j -= 1
    for a, b in zip(word, word[1:]):
        if a == b and a.odd:
            return None
    return sign, tuple(word)


@lru_cache(maxsize=None)
def mono_mul(m1, m2):
    if not m1:
        return 1, m2
    if not m2:
        return 1, m1
    return normalize_word(m1 + m2)


def _is_zero(c):
    return not c


class Element:
    """Finite linear combination of monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {m: c for m, c in (terms or {}).items() if not _is_zero(c)}

    @classmethod
    def one(cls, c=1):
        return cls({ONE: Fraction(c) if isinstance(c, int) else c})

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def gen(cls, name, ddeg=0, odd=True):
        return cls({(Gen(name, ddeg, odd),): Fraction(1)})

    @classmethod
    def monomial(cls, m, c=1):
        return cls({tuple(m): Fraction(c) if isinstance(c, int) else c})

    @classmethod
    def word(cls, word, c=1):
        r = normalize_word(word)
        if r is None:
            return cls()
        s, m = r
        return cls.monomial(m, s * (Fraction(c) if isinstance(c, int) else c))

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return Element(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Element({m: -c for m, c in self.terms.items()})

    def scale(self, c):
        return Element({m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Element):
            return self.scale(other)
        return mul(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        for m in keys:
            if not self.terms.get(m, 0) == other.terms.get(m, 0):
                return False
        return True

    def __bool__(self):
        return bool(self.terms)

    def parity(self):
        ps = {mono_parity(m) for m in self.terms}
        if len(ps) > 1:
            raise ValueError("element is not homogeneous")
        return ps.pop() if ps else 0

    def map_coeffs(self, f):
        return Element({m: f(c) for m, c in self.terms.items()})

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(_term_str(c, m) for m, c in sorted(self.terms.items())).replace(" + -", " - ")

    __repr__ = __str__


def _coeff_str(c):
    if isinstance(c, RatFn):
        return f"[{c}]"
    return str(c)


def _term_str(c, m):
    if not m:
        return _coeff_str(c)
    if not isinstance(c, RatFn) and c == 1:
        return mono_str(m)
    if not isinstance(c, RatFn) and c == -1:
        return "-" + mono_str(m)
    return f"{_coeff_str(c)}*{mono_str(m)}"


def mul(a, b):
    out = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            r = mono_mul(m1, m2)
            if r is None:
                continue
            s, m = r
            c = c1 * c2
            if s < 0:
                c = -c
            out[m] = out[m] + c if m in out else c
    return Element(out)


class TensorElement:
    """Finite combination of ``arity``-tuples of monomials."""

    __slots__ = ("terms", "arity")

    def __init__(self, terms=None, arity=2):
        self.arity = arity
        self.terms = {k: c for k, c in (terms or {}).items() if not _is_zero(c)}

    @classmethod
    def pure(cls, *elements):
        out = {}
        for combo in product(*(e.terms.items() for e in elements)):
            key = tuple(m for m, _ in combo)
            c = Fraction(1)
            for _, v in combo:
                c = v * c
            out[key] = out[key] + c if key in out else c
        return cls(out, len(elements))

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return TensorElement(out, self.arity)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return TensorElement({k: v * c for k, v in self.terms.items()}, self.arity)

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return Element(_flat(self)) == Element(_flat(other))

    def __bool__(self):
        return bool(self.terms)

    def map_coeffs(self, f):
        return TensorElement({k: f(c) for k, c in self.terms.items()}, self.arity)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, c in sorted(self.terms.items()):
            legs = " (x) ".join(mono_str(m) for m in k)
            parts.append(legs if (not isinstance(c, RatFn) and c == 1) else f"{_coeff_str(c)}*({legs})")
        return " + ".join(parts)

    __repr__ = __str__


def _flat(t):
    # tensor keys are tuples of tuples, so they never collide with monomials
    return {("#",) + k: c for k, c in t.terms.items()}


def split_signs(m, legs):
    """All ways to distribute the letters of ``m`` over ``legs`` tensor legs.

    Yields ``(sign, (m_1, ..., m_legs))``; the sign counts odd letters that
    pass each other when the word is regrouped leg by leg.
    """
    n = len(m)
    for assign in product(range(legs), repeat=n):
        inv = 0
        for i in range(n):
            if m[i].odd:
                for j in range(i + 1, n):
                    if m[j].odd and assign[i] > assign[j]:
                        inv += 1
        parts = tuple(tuple(m[i] for i in range(n) if assign[i] == k) for k in range(legs))
        yield (-1 if inv & 1 else 1), parts


@lru_cache(maxsize=None)
def mono_coproduct(m, legs=2):
    out = {}
    for s, parts in split_signs(m, legs):
        out[parts] = out.get(parts, 0) + s
    return tuple((k, c) for k, c in out.items() if c)


def _coproduct(a, legs):
    out = {}
    for m, c in a.terms.items():
        for k, s in mono_coproduct(m, legs):
            v = c * s
            out[k] = out[k] + v if k in out else v
    return TensorElement(out, legs)


def coproduct(a):
    return _coproduct(a, 2)


def coproduct2(a):
    return _coproduct(a, 3)


def counit(a):
    return a.terms.get(ONE, Fraction(0))


def antipode(a):
    # S is an anti-automorphism with S(g) = -g on primitives; in a
    # supercommutative algebra reversing the factors undoes the Koszul sign,
    # so S acts on a monomial of length n by (-1)^n.
    return Element({m: (c if len(m) % 2 == 0 else -c) for m, c in a.terms.items()})


@lru_cache(maxsize=None)
def mono_d_power(m, n):
    """``D^(n)`` of a monomial via the divided-power Leibniz rule."""
    if n == 0:
        return ((m, Fraction(1)),)
    out = {}
    k = len(m)
    if k == 0:
        return ()
    for split in _compositions(n, k):
        coef = 1
        word = []
        for g, i in zip(m, split):
            coef *= comb(g.ddeg + i, i)
            word.append(Gen(g.name, g.ddeg + i, g.odd))
        r = normalize_word(word)
        if r is None:
            continue
        s, mm = r
        out[mm] = out.get(mm, 0) + s * coef
    return tuple((mm, Fraction(c)) for mm, c in out.items() if c)


def _compositions(n, k):
    if k == 1:
        yield (n,)
        return
    for i in range(n + 1):
        for rest in _compositions(n - i, k - 1):
            yield (i,) + rest


def d_power(a, n):
    if n < 0:
        raise ValueError("divided power order must be non-negative")
    out = {}
    for m, c in a.terms.items():
        for mm, v in mono_d_power(m, n):
            w = c * v
            out[mm] = out[mm] + w if mm in out else w
    return Element(out)


def exp_zD(a, var, M, T=None):
    """``sum_{n<=M} var^n D^(n) a`` with RatFn coefficients."""
    out = Element()
    z = RatFn.var(var, T)
    zn = RatFn.const(1, T)
    for n in range(M + 1):
        out = out + d_power(a, n).map_coeffs(lambda c, zn=zn: zn * c)
        zn = zn * z
    return out


def koszul_flip(x):
    out = {}
    for (m1, m2), c in x.terms.items():
        s = -1 if mono_parity(m1) and mono_parity(m2) else 1
        k = (m2, m1)
        v = c if s > 0 else -c
        out[k] = out[k] + v if k in out else v
    return TensorElement(out, 2)


def koszul_twist(x):
    return TensorElement({(m1, m2): (-c if mono_parity(m1) and mono_parity(m2) else c)
                          for (m1, m2), c in x.terms.items()}, 2)


koszul_sign_twist = koszul_twist


def tensor_mul(x, y):
    """Koszul product ``(a (x) b)(c (x) d) = (-1)^{|b||c|} ac (x) bd`` in any arity."""
    out = {}
    for k1, c1 in x.terms.items():
        for k2, c2 in y.terms.items():
            sign = 1
            # moving leg j of y past legs i > j of x
            for j in range(len(k2)):
                if mono_parity(k2[j]):
                    for i in range(j + 1, len(k1)):
                        if mono_parity(k1[i]):
                            sign = -sign
            legs = []
            for a, b in zip(k1, k2):
                r = mono_mul(a, b)
                if r is None:
                    break
                sign *= r[0]
                legs.append(r[1])
            else:
                k = tuple(legs)
                v = c1 * c2
                if sign < 0:
                    v = -v
                out[k] = out[k] + v if k in out else v
    return TensorElement(out, x.arity)


def apply_leg(x, leg, f):
    """Apply a linear map ``f: Element -> Element`` on one leg (even maps only)."""
    out = TensorElement(arity=x.arity)
    for k, c in x.terms.items():
        img = f(Element.monomial(k[leg]))
        for m, v in img.terms.items():
            nk = k[:leg] + (m,) + k[leg + 1:]
            out = out + TensorElement({nk: c * v}, x.arity)
    return out


def contract(x, f=None):
    """Multiply the legs of ``x`` together into an Element."""
    out = Element()
    for k, c in x.terms.items():
        e = Element.one(c)
        for m in k:
            e = mul(e, Element.monomial(m))
        out = out + e
    return out


def basis(gens, max_len, max_wt):
    """All monomials of length ``<= max_len`` and total ddeg ``<= max_wt``.

    ``gens`` is a sequence of ``(name, odd)`` pairs.
    """
    symbols = sorted(Gen(n, d, o) for n, o in gens for d in range(max_wt + 1))
    out = [ONE]
    for L in range(1, max_len + 1):
        for combo in combinations_with_replacement(symbols, L):
            if sum(g.ddeg for g in combo) > max_wt:
                continue
            if any(a == b and a.odd for a, b in zip(combo, combo[1:])):
                continue
            out.append(tuple(combo))
    return out
