# rtv: relative-total-variation structure/texture decomposition.

from rtv.decompose import (
    RtvConfig,
    RtvResult,
    rtv_decompose,
    rtv_decompose_detailed,
    rtv_objective,
)
from rtv.linear_solver import SolveInfo, solve_spd

__all__ = [
    "RtvConfig",
    "RtvResult",
    "SolveInfo",
    "rtv_decompose",
    "rtv_decompose_detailed",
    "rtv_objective",
    "solve_spd",
]
