"""Bicharacter constructions of quantum vertex algebras, computed exactly."""

from .bichar import Bicharacter, braiding, classify, convolve, inverse, shift, translation, transpose
from .catalog import builtin
from .fnring import RatFn, diagonal_expand, iota_expand, residue_diagonal
from .modelio import load_model, load_model_file, parse_element, parse_model
from .qva import Model, nop, ope, residue, s_gamma, s_tau, x2, x3, y_apply
from .superhopf import Element, Gen, TensorElement, antipode, coproduct, counit

__all__ = [
    "Bicharacter", "braiding", "classify", "convolve", "inverse", "shift", "translation",
    "transpose", "builtin", "RatFn", "diagonal_expand", "iota_expand", "residue_diagonal",
    "load_model", "load_model_file", "parse_element", "parse_model", "Model", "nop", "ope",
    "residue", "s_gamma", "s_tau", "x2", "x3", "y_apply", "Element", "Gen", "TensorElement",
    "antipode", "coproduct", "counit",
]
