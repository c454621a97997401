"""colpim: column-parallel digital processing-in-memory evaluation toolkit.

Functional simulation of bit-serial arithmetic on binary crossbars plus the
analytical throughput/energy models used to compare memristive and DRAM
in-memory computing against GPU rooflines.
"""

from .grid import (Gate, ColumnOp, ExecutionStats, Grid, MEMRISTIVE_GATES,
                   new_grid, active_backend, available_backends, set_backend)
from .formats import NumberFormat, fixed, half, single, load_operands, read_results

__version__ = "0.1.0"

__all__ = [
    "Gate", "ColumnOp", "ExecutionStats", "Grid", "MEMRISTIVE_GATES",
    "new_grid", "active_backend", "available_backends", "set_backend",
    "NumberFormat", "fixed", "half", "single", "load_operands", "read_results",
    "__version__",
]
