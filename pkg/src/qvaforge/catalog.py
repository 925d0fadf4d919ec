"""Built-in models: the charged free fermion and three deformations of it.

All four share two odd generators ``phi`` and ``psi`` and the vanishing
entries on ``(phi, phi)`` and ``(psi, psi)``.  They are written in the model
language itself, so loading them exercises the same parser as user files.
"""

from math import factorial

from .errors import ValidationFailed

_HEADER = """\
generator phi odd
generator psi odd
bichar phi phi = 0
bichar psi psi = 0
"""


def _essential(T):
    # e^{t/(z1-z2)} truncated below t^T, constant term included
    terms = ["1"] + [f"t^{k}/({factorial(k)}*(z1-z2)^{k})" for k in range(1, T)]
    return " + ".join(terms)


SOURCES = {
    "charged_free_fermion": lambda T: _HEADER + """\
bichar phi psi = 1/(z1-z2)
bichar psi phi = 1/(z1-z2)
""",
    "fermion_ek": lambda T: _HEADER + """\
bichar phi psi = 1/(z1-z2-t)
bichar psi phi = 1/(z1-z2-t)
""",
    "fermion_hd": lambda T: _HEADER + """\
bichar phi psi = 1/(z1-z2) + t/z1
bichar psi phi = 1/(z1-z2)
""",
    "fermion_essential": lambda T: _HEADER + f"""\
bichar phi psi = {_essential(T)}
bichar psi phi = {_essential(T)}
""",
}

NAMES = tuple(SOURCES)


def source(name, T=4):
    try:
        return SOURCES[name](T)
    except KeyError:
        raise ValidationFailed(f"unknown built-in model {name!r}") from None


def builtin(name, T=4, M=3, degree_bound=2, compose_twist=True, validate_bound=None):
    from .modelio import load_model, parse_model
    doc = parse_model(source(name, T))
    doc.options.update({"tTrunc": T, "dTrunc": M, "degreeBound": degree_bound,
                        "compose_twist": compose_twist})
    return load_model(doc, name=name, validate_bound=validate_bound)
