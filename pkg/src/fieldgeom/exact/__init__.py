"""Exact arithmetic: polynomials, rational functions, and polynomial-matrix rank."""
from .matrix import FFMatrix, matrix_rank_ff
from .parsing import ExprSyntaxError, parse_expr
from .poly import MPoly, NVarsMismatch, poly_ops
from .ratfunc import RatFunc, ratfunc_normalize


def partial_derivative(f: RatFunc, j: int) -> RatFunc:
    """Derivative of ``f`` in variable ``t_j`` (1-based, like the expression grammar)."""
    if not 1 <= j <= f.nvars:
        raise IndexError(f"variable index {j} out of range 1..{f.nvars}")
    return f.diff(j - 1)


__all__ = [
    "ExprSyntaxError",
    "FFMatrix",
    "MPoly",
    "NVarsMismatch",
    "RatFunc",
    "matrix_rank_ff",
    "parse_expr",
    "partial_derivative",
    "poly_ops",
    "ratfunc_normalize",
]
