"""Line-oriented model files.

::

    # charged free fermion
    generator phi odd
    generator psi odd
    bichar phi psi = 1/(z1-z2)
    bichar psi phi = 1/(z1-z2)
    bichar phi phi = 0
    bichar psi psi = 0
    option tTrunc 4

Every parity-matched generator pair needs an explicit ``bichar`` line.
"""

import re
from dataclasses import dataclass, field

from .bichar import Bicharacter, ValidationReport, generator_pairs, validate
from .errors import ExprSyntaxError, QvaError, ValidationFailed
from .expr import parse_ast, parse_expr
from .qva import Model

OPTION_DEFAULTS = {"tTrunc": 4, "dTrunc": 3, "degreeBound": 2, "compose_twist": True}
_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*$")


@dataclass
class ModelDoc:
    generators: list = field(default_factory=list)  # (name, parity)
    entries: list = field(default_factory=list)  # (a, b, expression text)
    options: dict = field(default_factory=dict)

    def option(self, key):
        return self.options.get(key, OPTION_DEFAULTS[key])

    def to_text(self):
        lines = [f"generator {n} {p}" for n, p in self.generators]
        lines += [f"bichar {a} {b} = {e}" for a, b, e in self.entries]
        lines += [f"option {k} {_fmt_opt(v)}" for k, v in self.options.items()]
        return "\n".join(lines) + "\n"


def _fmt_opt(v):
    if isinstance(v, bool):
        return "on" if v else "off"
    return str(v)


def _parse_opt(key, text, lineno):
    if key not in OPTION_DEFAULTS:
        raise ValidationFailed(f"line {lineno}: unknown option {key!r}")
    if key == "compose_twist":
        low = text.lower()
        if low in ("on", "true", "yes", "1"):
            return True
        if low in ("off", "false", "no", "0"):
            return False
        raise ValidationFailed(f"line {lineno}: expected on/off for {key}")
    try:
        val = int(text)
    except ValueError:
        raise ValidationFailed(f"line {lineno}: option {key} needs an integer") from None
    if val < (0 if key == "dTrunc" else 1):
        raise ValidationFailed(f"line {lineno}: option {key} out of range")
    return val


def parse_model(text):
    """Parse model text into a :class:`ModelDoc` (syntax only)."""
    doc = ModelDoc()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "generator":
            parts = rest.split()
            if len(parts) != 2 or not _IDENT.match(parts[0]) or parts[1] not in ("even", "odd"):
                raise ValidationFailed(f"line {lineno}: expected 'generator <name> even|odd'")
            if any(n == parts[0] for n, _ in doc.generators):
                raise ValidationFailed(f"line {lineno}: generator {parts[0]!r} declared twice")
            doc.generators.append((parts[0], parts[1]))
        elif head == "bichar":
            lhs, eq, expr = rest.partition("=")
            names = lhs.split()
            expr = expr.strip()
            if not eq or len(names) != 2 or not expr:
                raise ValidationFailed(f"line {lineno}: expected 'bichar <a> <b> = <expr>'")
            try:
                parse_ast(expr)
            except ExprSyntaxError as exc:
                raise ExprSyntaxError(f"line {lineno}: {exc.args[0].rsplit(' at position', 1)[0]}",
                                      exc.position) from None
            doc.entries.append((names[0], names[1], expr))
        elif head == "option":
            parts = rest.split()
            if len(parts) != 2:
                raise ValidationFailed(f"line {lineno}: expected 'option <key> <value>'")
            doc.options[parts[0]] = _parse_opt(parts[0], parts[1], lineno)
        else:
            raise ValidationFailed(f"line {lineno}: unknown directive {head!r}")
    return doc


def build_bicharacter(doc, name=""):
    T = doc.option("tTrunc")
    gens = {n: p == "odd" for n, p in doc.generators}
    rep = ValidationReport()
    table = {}
    for a, b, text in doc.entries:
        rep.checked += 1
        if a not in gens or b not in gens:
            rep.fail("undeclared", f"bichar {a} {b} uses an undeclared generator")
            continue
        if (a, b) in table:
            rep.fail("duplicate", f"bichar {a} {b} given twice")
            continue
        try:
            table[(a, b)] = parse_expr(text, T)
        except QvaError as exc:
            rep.fail("expression", f"bichar {a} {b}: {exc}")
    if not rep.ok:
        raise ValidationFailed("model rejected:\n" + str(rep), rep)
    r = Bicharacter(gens, table, T, name=name)
    for g, h in generator_pairs(r):
        rep.checked += 1
        if (g, h) not in table:
            rep.fail("missing", f"no entry for ({g}, {h}); declare zeros explicitly")
    if not rep.ok:
        raise ValidationFailed("model rejected:\n" + str(rep), rep)
    return r


def load_model(doc, name="", validate_bound=None):
    """Build and validate a :class:`~qvaforge.qva.Model` from a ModelDoc."""
    r = build_bicharacter(doc, name)
    bound = doc.option("degreeBound") if validate_bound is None else validate_bound
    rep = validate(r, bound)
    if not rep.ok:
        raise ValidationFailed("model rejected:\n" + str(rep), rep)
    return Model(r, r.T, doc.option("dTrunc"), doc.option("degreeBound"),
                 doc.option("compose_twist"), name)


def load_model_file(path, overrides=None):
    with open(path) as fh:
        doc = parse_model(fh.read())
    doc.options.update(overrides or {})
    return load_model(doc, name=str(path))


_FACTOR = re.compile(r"([A-Za-z_][A-Za-z_0-9]*)(?:\[(\d+)\])?$")


def parse_element(text, gens):
    """Parse ``"phi"``, ``"phi*psi[1]"``, ``"2*phi - 1/2*psi[2]"`` or ``"1"``.

    ``gens`` maps generator names to parity (True for odd).  Words are put in
    normal order with the Koszul sign.
    """
    from fractions import Fraction

    from .superhopf import Element, Gen

    src = text.replace(" ", "")
    if not src:
        raise ValidationFailed("empty element")
    terms = re.split(r"(?<=.)(?=[+-])", src)
    out = Element()
    for term in terms:
        sign = 1
        if term[0] in "+-":
            sign = -1 if term[0] == "-" else 1
            term = term[1:]
        coeff = Fraction(sign)
        word = []
        for part in term.split("*"):
            if re.fullmatch(r"\d+(/\d+)?", part):
                coeff *= Fraction(part)
                continue
            m = _FACTOR.match(part)
            if not m:
                raise ValidationFailed(f"cannot read factor {part!r} in {text!r}")
            name, ddeg = m.group(1), int(m.group(2) or 0)
            if name not in gens:
                raise ValidationFailed(f"unknown generator {name!r}")
            word.append(Gen(name, ddeg, gens[name]))
        out = out + Element.word(word, coeff)
    return out
