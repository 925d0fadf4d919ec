"""Locality exponents, and which braiding convention each axiom wants."""

from qvaforge import axioms as ax
from qvaforge.catalog import builtin
from qvaforge.modelio import parse_element


def mono(model, text):
    return next(iter(parse_element(text, model.gens).terms))


for name, T in (("charged_free_fermion", 1), ("fermion_hd", 1), ("fermion_ek", 3), ("fermion_essential", 3)):
    model = builtin(name, T=T)
    phi, psi, one = (mono(model, s) for s in ("phi", "psi", "1"))
    for k in range(1, T + 1):
        print(ax.check_locality(model, phi, psi, one, k=k)[0])

# locality needs the sign twist composed into S^tau ...
plain = builtin("charged_free_fermion", T=1, compose_twist=False)
print(ax.check_locality(plain, mono(plain, "phi"), mono(plain, "psi"), mono(plain, "1"))[0])

# ... while the group law for S^tau only holds without it once R is nontrivial
hd = builtin("fermion_hd", T=2)
phi, psi = mono(hd, "phi"), mono(hd, "psi")
print(ax.check_group_tau(hd, phi, psi)[0])
print(ax.check_group_tau(hd, phi, psi, twist=False)[0])
