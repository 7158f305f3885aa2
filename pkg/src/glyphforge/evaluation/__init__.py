from .experiment import (
    REFERENCE_EPOCHS,
    ExperimentConfig,
    ExperimentResult,
    make_descriptor,
    run_experiment,
)
from .metrics import Metrics, evaluate
from .report import STYLES, ReportBundle, render_report

__all__ = [
    "REFERENCE_EPOCHS",
    "ExperimentConfig",
    "ExperimentResult",
    "Metrics",
    "ReportBundle",
    "STYLES",
    "evaluate",
    "make_descriptor",
    "render_report",
    "run_experiment",
]
