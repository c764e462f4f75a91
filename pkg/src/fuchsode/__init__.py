"""Exact-arithmetic solver for Fuchsian-type linear ODEs with polynomial
coefficients, expanding square-integrable solutions over rational
wavepackets psi_{k,a}(x) = (x+i)^-(k+1) ((x-i)/(x+i))^a.
"""

from .arith import GaussianInteger, GaussianRational, decimal_render, gauss_round
from .basis import bilateral_index, check_recursion_identities, psi_eval, unilateral_index
from .operator import ODEOperator, compute_beta, matrix_element, validate_operator
from .solver import Problem, load_problem, parse_problem, solve

__version__ = "0.1.0"

__all__ = [
    "GaussianInteger",
    "GaussianRational",
    "decimal_render",
    "gauss_round",
    "bilateral_index",
    "unilateral_index",
    "psi_eval",
    "check_recursion_identities",
    "ODEOperator",
    "compute_beta",
    "matrix_element",
    "validate_operator",
    "Problem",
    "load_problem",
    "parse_problem",
    "solve",
]
