"""
Spinor GP lab

Numerical lab for pseudo-spinor condensates: coupled Gross-Pitaevskii
dynamics, exact small-N bosons on a ring, two-body scattering and the
counting operators used to track condensation.
"""

from spinorgp.__version__ import __version__

# High-level API exports
from spinorgp.config import get_config, load_experiment
from spinorgp.counting import run_suite
from spinorgp.protocol import run_experiment

__all__ = [
    "__version__",
    "get_config",
    "load_experiment",
    "run_suite",
    "run_experiment",
]
