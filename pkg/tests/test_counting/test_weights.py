import numpy as np
import pytest

from spinorgp.counting.operators import (
    CountingOperator,
    build_m_variants,
    combination,
    M_VARIANTS,
    variant_norm_bounds,
)
from spinorgp.counting.projector import CondensateProjector
from spinorgp.counting.weights import DEFAULT_XI, WeightFunction
from spinorgp.manybody.basis import build_basis
from spinorgp.manybody.states import random_orbital, random_state
from spinorgp.utils.errors import ConfigurationError, StructuralError


def test_n_weight_is_square_root():
    w = WeightFunction.n_weight(16)
    assert np.allclose(w.values(), np.sqrt(np.arange(17) / 16))
    assert w(-1) == 0.0


def test_m_weight_switches_at_crossover():
    n = 100
    w = WeightFunction.m_weight(n)
    assert w.xi == DEFAULT_XI
    assert np.isclose(w.crossover, n ** 0.8)
    assert np.isclose(w(0), 0.5 * n ** -0.1)
    assert np.isclose(w(50), np.sqrt(0.5))
    assert np.isclose(w(1), 0.5 * (n ** -0.9 + n ** -0.1))


def test_shifted_weights():
    builtin = WeightFunction.n_weight(4)
    assert np.isclose(builtin.shifted(2)[-1], np.sqrt(6 / 4))
    table = WeightFunction.custom([1.0, 2.0, 3.0])
    assert np.allclose(table.shifted(1), [2.0, 3.0, 0.0])


def test_weight_validation():
    with pytest.raises(ConfigurationError):
        WeightFunction("z", 4)
    with pytest.raises(ConfigurationError):
        WeightFunction("n", 0)
    with pytest.raises(ConfigurationError):
        WeightFunction("m", 4, xi=0.0)
    with pytest.raises(ConfigurationError):
        WeightFunction("custom", 3, table=[1.0])


def make_projector(n=3, seed=0):
    return CondensateProjector(random_orbital(2, np.random.default_rng(seed)), n)


def test_operator_algebra_acts_on_coefficients():
    proj = make_projector()
    f = CountingOperator(proj, [1.0, 2.0, 3.0, 4.0], "f")
    g = CountingOperator(proj, [0.5, 0.5, -1.0, 2.0], "g")
    assert np.allclose((f * g).coefficients, [0.5, 1.0, -3.0, 8.0])
    assert np.allclose((f - g).coefficients, [0.5, 1.5, 4.0, 2.0])
    assert (f + g).label == "f+g"
    assert f.operator_norm() == 4.0


def test_product_operator_equals_composition():
    proj = make_projector(seed=5)
    psi = random_state(build_basis(2, 3), np.random.default_rng(5))
    f = CountingOperator(proj, [1.0, -2.0, 0.5, 3.0])
    g = CountingOperator(proj, [0.2, 1.0, 1.5, -1.0])
    composed = f.apply(g.apply(psi))
    assert np.allclose((f * g).apply(psi).amplitudes, composed.amplitudes, atol=1e-12)


def test_expectation_of_n_weight_is_nonnegative():
    proj = make_projector(seed=2)
    op = CountingOperator.from_weight(WeightFunction.n_weight(3), proj)
    psi = random_state(build_basis(2, 3), np.random.default_rng(2))
    assert op.expectation(psi) >= 0.0
    assert op.label == "n"


def test_operator_checks():
    proj = make_projector()
    with pytest.raises(StructuralError):
        CountingOperator(proj, [1.0, 2.0])
    with pytest.raises(ConfigurationError):
        CountingOperator.from_weight(WeightFunction.n_weight(5), proj)
    with pytest.raises(ConfigurationError):
        CountingOperator(proj, np.ones(4)) * CountingOperator(make_projector(seed=1), np.ones(4))
    with pytest.raises(ConfigurationError):
        build_m_variants(WeightFunction.n_weight(3), proj)


def test_m_variants_are_shift_differences():
    w = WeightFunction.m_weight(3)
    variants = build_m_variants(w, make_projector())
    assert sorted(variants) == sorted(M_VARIANTS)
    assert np.allclose(variants["a"].coefficients, w.values() - w.shifted(1))
    assert np.allclose(variants["c"].coefficients, combination(w, M_VARIANTS["c"]))
    bounds = variant_norm_bounds(w)
    assert np.isclose(bounds["norm_a"], variants["a"].operator_norm())
