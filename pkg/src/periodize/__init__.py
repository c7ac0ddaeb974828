"""Isochronous modifications of ODEs and PDEs via complexified time."""

from .core import (
    BasinGrid,
    DomainError,
    EquationSpec,
    PeriodClassification,
    SingularityError,
    Status,
    Trajectory,
    UnsupportedError,
    Verdict,
    period_T,
)

__version__ = "0.1.0"
