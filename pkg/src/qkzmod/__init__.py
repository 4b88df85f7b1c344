"""Polynomial solutions of the sl2 rational qKZ equations modulo an integer."""
from .diffcalc import ModParams, RSequence, compute_params
from .exactpoly import LinearForm, Polynomial, VarSpace
from .hyperqkz import solve_r, verify_qkz, verify_singular, verify_symmetric_qkz
from .kzlimit import compare_top_degree, solve_kz_r, verify_kz_mod_n
from .tensorrep import VectorPolynomial, VerificationReport

__all__ = [
    "LinearForm",
    "ModParams",
    "Polynomial",
    "RSequence",
    "VarSpace",
    "VectorPolynomial",
    "VerificationReport",
    "compare_top_degree",
    "compute_params",
    "solve_kz_r",
    "solve_r",
    "verify_kz_mod_n",
    "verify_qkz",
    "verify_singular",
    "verify_symmetric_qkz",
]
