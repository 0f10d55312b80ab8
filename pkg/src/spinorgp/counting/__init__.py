"""Counting operators around a condensate orbital, convergence indicators and property suites."""

from spinorgp.counting.projector import CondensateProjector, apply_pk, householder
from spinorgp.counting.weights import DEFAULT_XI, WeightFunction
from spinorgp.counting.operators import (
    M_VARIANTS,
    CountingOperator,
    apply_counting,
    build_m_variants,
    variant_norm_bounds,
)
from spinorgp.counting.two_slot import TwoSlotSpace, apply_r12
from spinorgp.counting.indicators import (
    IndicatorReport,
    alpha_full,
    alpha_less,
    alpha_tilde,
    delta_a,
    dressed_norm,
    dressed_norm_bound,
)
from spinorgp.counting.suites import SUITES, Check, SuiteReport, run_suite

__all__ = [
    "CondensateProjector",
    "apply_pk",
    "householder",
    "DEFAULT_XI",
    "WeightFunction",
    "M_VARIANTS",
    "CountingOperator",
    "apply_counting",
    "build_m_variants",
    "variant_norm_bounds",
    "TwoSlotSpace",
    "apply_r12",
    "IndicatorReport",
    "alpha_full",
    "alpha_less",
    "alpha_tilde",
    "delta_a",
    "dressed_norm",
    "dressed_norm_bound",
    "SUITES",
    "Check",
    "SuiteReport",
    "run_suite",
]
