"""ODE right-hand sides and the adaptive integrator."""

from .solver import integrate_adaptive
from .systems import Branch, OdeSystem, branch_power, make_system, rhs
from .consistency import third_order_consistency

__all__ = [
    "Branch",
    "OdeSystem",
    "branch_power",
    "integrate_adaptive",
    "make_system",
    "rhs",
    "third_order_consistency",
]
