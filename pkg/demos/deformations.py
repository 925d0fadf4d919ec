"""Deformed fermions: braidings, translations and the classification labels."""

from qvaforge.bichar import classify
from qvaforge.catalog import NAMES, builtin
from qvaforge.modelio import parse_element
from qvaforge.qva import ope, s_gamma, s_tau

for name in NAMES:
    model = builtin(name, T=3)
    phi, psi = (parse_element(g, model.gens) for g in ("phi", "psi"))
    print(f"== {name}: {classify(model.r)}")
    print("  r(phi, psi)  =", model.r.eval_mono(*[next(iter(e.terms)) for e in (phi, psi)]))
    print("  ope(phi, psi) =", ope(model, phi, psi))
    print("  S^tau(phi, psi)   =", s_tau(model, phi, psi))
    print("  S^tau untwisted   =", s_tau(model, phi, psi, twist=False))
    print("  S^gamma(phi, psi) =", s_gamma(model, phi, psi))
