"""Charged free fermion: OPEs, normal ordering and the Heisenberg field phi psi."""

from qvaforge.catalog import builtin
from qvaforge.qva import nop, ope, residue, simplify
from qvaforge.superhopf import Element
from qvaforge.modelio import parse_element

model = builtin("charged_free_fermion", T=2)


def el(text):
    return parse_element(text, model.gens)


for a, b in (("phi", "psi"), ("psi", "phi"), ("phi", "phi"), ("phi*psi", "phi*psi")):
    print(f"{a}(z) {b}(w) ~ {ope(model, el(a), el(b))}")

print(":phi psi: =", simplify(nop(model, el("phi"), el("psi"))))

# the n-th product a_(n) b is the residue at z = w against the vacuum, up to z2
ab = el("phi*psi")
for n in range(3):
    r = residue(model, ab, ab, Element.one(), n)
    print(f"(phi psi)_({n})(phi psi) =", simplify(r.map_coeffs(lambda f: f.specialize("z2"))))
