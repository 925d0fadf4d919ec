"""Even bicharacters given on generator pairs and extended to all monomials.

A :class:`Bicharacter` stores one RatFn in ``(z1, z2)`` per parity-matched
pair of generators.  The value on ``D^(k) g (x) D^(l) h`` is

    (1/k! l!) d^k/dz1^k d^l/dz2^l r(g (x) h),

and longer monomials are reduced with the multiplicativity rules

    r(ab (x) c) = sum (-1)^{|b||c'|} r(a (x) c') r(b (x) c'')
    r(a (x) bc) = sum (-1)^{|a''||b|} r(a' (x) b) r(a'' (x) c).

The group operations act on the table; ``tests/test_bichar.py`` certifies
them against the element-level definitions.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import MissingTableEntry
from .fnring import RatFn, W2, S_TAU, membership, shift_vars
from .superhopf import (
    ONE,
    Element,
    antipode,
    basis,
    mono_coproduct,
    mono_parity,
)

CLASSICAL = "ClassicalSuperVA"
EK = "EKQuantumVA"
HD = "HDQuantumVA"

LEFT_FIRST = "left"
RIGHT_FIRST = "right"


@dataclass
class ValidationReport:
    ok: bool = True
    failures: list = field(default_factory=list)
    checked: int = 0

    def fail(self, kind, detail):
        self.ok = False
        self.failures.append((kind, detail))

    def __str__(self):
        if self.ok:
            return f"pass ({self.checked} checks)"
        lines = [f"FAIL ({len(self.failures)} of {self.checked} checks)"]
        lines += [f"  {k}: {d}" for k, d in self.failures[:10]]
        return "\n".join(lines)


class Bicharacter:
    """Generator table ``{(g, h): RatFn}`` plus its multiplicative extension."""

    def __init__(self, gens, table, T=4, profile=W2, name=""):
        self.gens = dict(gens)  # name -> odd
        self.T = T
        self.profile = profile
        self.name = name
        self.table = {}
        for (g, h), v in table.items():
            if g not in self.gens or h not in self.gens:
                raise MissingTableEntry(f"table entry ({g}, {h}) uses an undeclared generator")
            if not isinstance(v, RatFn):
                v = RatFn.const(v, T)
            self.table[(g, h)] = v.truncate(T) if v.T > T else v
        self._gen_cache = {}
        self._cache = {}

    @classmethod
    def identity(cls, gens, T=4, name="identity"):
        gens = dict(gens)
        table = {(g, h): RatFn.const(0, T) for g in gens for h in gens if gens[g] == gens[h]}
        return cls(gens, table, T, name=name)

    def zero(self):
        return RatFn.const(0, self.T)

    def _derived(self, g, h, k, l):
        key = (g, h, k, l)
        v = self._gen_cache.get(key)
        if v is None:
            if k or l:
                v = self._derived(g, h, k - 1, l).derive("z1") * Fraction(1, k) if k else \
                    self._derived(g, h, 0, l - 1).derive("z2") * Fraction(1, l)
            else:
                if self.gens[g] != self.gens[h]:
                    v = self.zero()
                elif (g, h) not in self.table:
                    raise MissingTableEntry(f"no bicharacter entry for ({g}, {h})")
                else:
                    v = self.table[(g, h)]
            self._gen_cache[key] = v
        return v

    def eval_mono(self, m, n, order=LEFT_FIRST):
        key = (m, n, order)
        v = self._cache.get(key)
        if v is None:
            v = self._eval_mono(m, n, order)
            self._cache[key] = v
        return v

    def _eval_mono(self, m, n, order):
        if not m:
            return RatFn.const(1 if not n else 0, self.T)
        if not n:
            return self.zero()
        if len(m) == 1 and len(n) == 1:
            g, h = m[0], n[0]
            return self._derived(g.name, h.name, g.ddeg, h.ddeg)
        peel_left = len(m) > 1 and (order == LEFT_FIRST or len(n) == 1)
        total = self.zero()
        if peel_left:
            a, b = m[:1], m[1:]
            pb = mono_parity(b)
            for (c1, c2), s in mono_coproduct(n):
                x = self.eval_mono(a, c1, order)
                if not x:
                    continue
                y = self.eval_mono(b, c2, order)
                if not y:
                    continue
                if pb and mono_parity(c1):
                    s = -s
                total = total + (x * y if s > 0 else -(x * y))
        else:
            b, c = n[:1], n[1:]
            pb = mono_parity(b)
            for (a1, a2), s in mono_coproduct(m):
                x = self.eval_mono(a1, b, order)
                if not x:
                    continue
                y = self.eval_mono(a2, c, order)
                if not y:
                    continue
                if pb and mono_parity(a2):
                    s = -s
                total = total + (x * y if s > 0 else -(x * y))
        return total

    def eval(self, a, b, order=LEFT_FIRST):
        """Bilinear extension to Elements (scalar or RatFn coefficients)."""
        total = self.zero()
        for m, c in a.terms.items():
            for n, d in b.terms.items():
                v = self.eval_mono(m, n, order)
                if v:
                    total = total + v * (c * d)
        return total

    __call__ = eval

    def same_table(self, other):
        keys = set(self.table) | set(other.table)
        z = self.zero()
        return all(self.table.get(k, z) == other.table.get(k, z) for k in keys)

    def __repr__(self):
        return f"Bicharacter({self.name or 'anonymous'}, {len(self.table)} entries)"


def generator_pairs(r):
    return [(g, h) for g in r.gens for h in r.gens if r.gens[g] == r.gens[h]]


def monomial_basis(r, max_len, max_wt):
    return basis(list(r.gens.items()), max_len, max_wt)


def validate(r, bound, max_wt=None):
    """Extension consistency, evenness and codomain membership up to ``bound``."""
    rep = ValidationReport()
    for g, h in generator_pairs(r):
        rep.checked += 1
        if (g, h) not in r.table:
            rep.fail("missing", f"({g}, {h}) has no entry")
    for (g, h), v in r.table.items():
        rep.checked += 1
        if r.gens[g] != r.gens[h] and v:
            rep.fail("evenness", f"parity-mismatched entry ({g}, {h}) = {v}")
        rep.checked += 1
        if not membership(v, r.profile):
            rep.fail("membership", f"entry ({g}, {h}) = {v} not in {r.profile.name}")
    if not rep.ok:
        return rep
    mons = monomial_basis(r, bound, bound if max_wt is None else max_wt)
    for m in mons:
        for n in mons:
            rep.checked += 1
            left = r.eval_mono(m, n, LEFT_FIRST)
            right = r.eval_mono(m, n, RIGHT_FIRST)
            if left != right:
                rep.fail("consistency", f"{m} (x) {n}: {left} != {right}")
            elif mono_parity(m) != mono_parity(n) and left:
                rep.fail("evenness", f"{m} (x) {n} = {left}")
    return rep


def _with_table(r, table, name, profile=None):
    return Bicharacter(r.gens, table, r.T, profile or r.profile, name)


def convolve(r, s):
    keys = set(r.table) | set(s.table)
    z = r.zero()
    table = {k: r.table.get(k, z) + s.table.get(k, z) for k in keys}
    prof = r.profile if r.profile is s.profile else _wider(r.profile, s.profile)
    return _with_table(r, table, f"({r.name}*{s.name})", prof)


def _wider(p, q):
    order = [W2, S_TAU]
    if p in order and q in order:
        return order[max(order.index(p), order.index(q))]
    return p if len(p.factors) >= len(q.factors) else q


def inverse(r):
    return _with_table(r, {k: -v for k, v in r.table.items()}, f"{r.name}^-1")


def _swap(f):
    return f.substitute({"z1": "z2", "z2": "z1"})


def transpose(r):
    table = {}
    for (g, h) in r.table:
        v = _swap(r.table[(h, g)])
        table[(g, h)] = -v if r.gens[g] and r.gens[h] else v
    return _with_table(r, table, f"{r.name}^t", S_TAU if r.profile is W2 else r.profile)


def braiding(r):
    return convolve(inverse(r), transpose(r))


def shift(r, by="g"):
    """``r_{z1+by, z2+by}``; ``by`` may be a tuple of shift variables."""
    table = {k: shift_vars(v, ["z1", "z2"], by) for k, v in r.table.items()}
    prof = r.profile
    for b in ((by,) if isinstance(by, str) else by):
        prof = prof.shifted(b)
    return _with_table(r, table, f"{r.name}^{by}", prof)


def translation(r, by="g"):
    return convolve(inverse(r), shift(r, by))


def is_symmetric(r):
    return transpose(r).same_table(r)


def is_shift_invariant(r):
    return all((v.derive("z1") + v.derive("z2")).is_zero() for v in r.table.values())


def classify(r):
    if is_shift_invariant(r):
        return CLASSICAL if is_symmetric(r) else EK
    return HD


# ------------------------------------------------ element-level definitions


def convolve_pointwise(r, s, a, b):
    """``sum (-1)^{|a''||b'|} r(a' (x) b') s(a'' (x) b'')`` on monomials."""
    total = r.zero()
    for (a1, a2), sa in mono_coproduct(a):
        for (b1, b2), sb in mono_coproduct(b):
            x = r.eval_mono(a1, b1)
            if not x:
                continue
            y = s.eval_mono(a2, b2)
            if not y:
                continue
            sign = sa * sb * (-1 if mono_parity(a2) and mono_parity(b1) else 1)
            total = total + (x * y if sign > 0 else -(x * y))
    return total


def inverse_pointwise(r, a, b):
    return r.eval(antipode(Element.monomial(a)), Element.monomial(b))


def transpose_pointwise(r, a, b):
    v = _swap(r.eval_mono(b, a))
    return -v if mono_parity(a) and mono_parity(b) else v


def counit_pair(r, a, b):
    return RatFn.const(1 if a == ONE and b == ONE else 0, r.T)
