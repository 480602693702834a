from .bound import bound
from .facts import verify_facts
from .planning import plan_cfk, plan_cfm
from .propagate import propagate
from .reach import invert, reach

__all__ = [
    "bound",
    "invert",
    "plan_cfk",
    "plan_cfm",
    "propagate",
    "reach",
    "verify_facts",
]
