"""Functional representation: evaluation, quadrature, reproducing kernels."""

from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from circle_cs.bargmann import (
    BARGMANN_OPERATOR_KINDS,
    Quadrature,
    apply_op_bargmann,
    basis_function,
    covariant_symbol,
    evaluate,
    from_bargmann,
    inner_quadrature,
    kernel_identity_check,
    reproducing_apply,
    to_bargmann,
)
from circle_cs.coherent import PhasePoint, coherent_state
from circle_cs.errors import DomainError, ParityError
from circle_cs.hilbert import (
    Sector,
    Truncation,
    apply_operator,
    apply_time_reversal,
    inner,
    make_state,
    operator_matrix,
)

TR = Truncation(40)
QUAD = Quadrature(40, 64)


def _random_state(sector, seed):
    rng = np.random.default_rng(seed)
    size = TR.size(sector)
    return make_state(sector, TR, rng.normal(size=size) + 1j * rng.normal(size=size))


def test_round_trip_preserves_everything():
    s = _random_state(Sector.FERMION, 1)
    back = from_bargmann(to_bargmann(s))
    assert back.sector is s.sector
    assert np.array_equal(back.coeffs, s.coeffs)


def test_basis_function_point_value():
    f = basis_function(Sector.BOSON, 1.0, Truncation(8))
    val = evaluate(f, PhasePoint(0.3, 0.9))
    assert val == pytest.approx(cmath.exp(complex(0.3, 0.9) - 0.5), rel=1e-14)


def test_evaluate_agrees_with_coherent_overlap():
    for sector in (Sector.BOSON, Sector.FERMION):
        s = _random_state(sector, 2)
        f = to_bargmann(s)
        p = PhasePoint(-0.4, 2.2)
        assert abs(evaluate(f, p) - inner(coherent_state(p, sector, TR), s)) < 1e-12


def test_quadrature_validation():
    with pytest.raises(DomainError):
        Quadrature(1, 64)
    with pytest.raises(DomainError):
        Quadrature(40, 63)
    with pytest.raises(DomainError):
        Quadrature(40, 2)


def test_orthonormality_small_indices():
    for sector in (Sector.BOSON, Sector.FERMION):
        js = (-1.0, 0.0, 1.0) if sector is Sector.BOSON else (-0.5, 0.5, 1.5)
        for j in js:
            for k in js:
                val = inner_quadrature(
                    basis_function(sector, j, TR), basis_function(sector, k, TR), QUAD
                )
                target = 1.0 if j == k else 0.0
                assert abs(val - target) < 1e-8


def test_inner_quadrature_requires_matching_sector():
    f = basis_function(Sector.BOSON, 0.0, TR)
    g = basis_function(Sector.FERMION, 0.5, TR)
    with pytest.raises(DomainError):
        inner_quadrature(f, g, QUAD)


def test_operator_table_matches_state_actions():
    for sector in (Sector.BOSON, Sector.FERMION):
        s = _random_state(sector, 3)
        for kind in BARGMANN_OPERATOR_KINDS:
            if kind == "T":
                expected = to_bargmann(apply_time_reversal(s))
            else:
                expected = to_bargmann(apply_operator(kind, s))
            got = apply_op_bargmann(kind, to_bargmann(s))
            assert np.max(np.abs(got.coeffs - expected.coeffs)) < 1e-13


def test_unknown_bargmann_operator():
    f = basis_function(Sector.BOSON, 0.0, TR)
    with pytest.raises(DomainError):
        apply_op_bargmann("N", f)


def test_shift_leakage_is_tracked():
    f = basis_function(Sector.BOSON, float(TR.j_values(Sector.BOSON)[-1]), TR)
    shifted = apply_op_bargmann("U", f)
    assert shifted.leakage == 1.0


def test_functional_form_of_U():
    # (U f)(xi*) = f(xi* / e) / (sqrt(e) xi*)
    f = to_bargmann(_random_state(Sector.BOSON, 4))
    p = PhasePoint(0.2, 1.0)
    lhs = evaluate(apply_op_bargmann("U", f), p)
    rhs = (
        evaluate(f, PhasePoint(p.l - 1.0, p.phi))
        * cmath.exp(complex(p.l, p.phi))
        * math.exp(-0.5)
    )
    assert abs(lhs - rhs) < 1e-12


def test_functional_form_of_Xdag_is_multiplication():
    f = to_bargmann(_random_state(Sector.FERMION, 5))
    p = PhasePoint(-0.3, 2.6)
    lhs = evaluate(apply_op_bargmann("Xdag", f), p)
    rhs = evaluate(f, p) * cmath.exp(complex(-p.l, -p.phi))
    assert abs(lhs - rhs) < 1e-12


def test_kernel_identity_at_origin():
    res = kernel_identity_check(PhasePoint(0, 0), PhasePoint(0, 0), Sector.BOSON, QUAD)
    assert res["lhs"].real == pytest.approx(1.772637204826652, rel=1e-13)
    assert abs(res["rhs"] - res["lhs"]) < 1e-6
    res = kernel_identity_check(PhasePoint(0, 0), PhasePoint(0, 0), Sector.FERMION, QUAD)
    assert res["lhs"].real == pytest.approx(1.7722704969843799, rel=1e-13)
    assert abs(res["rhs"] - res["lhs"]) < 1e-6


def test_kernel_identity_generic_points():
    rng = np.random.default_rng(17)
    for sector in (Sector.BOSON, Sector.FERMION):
        for _ in range(5):
            p1 = PhasePoint(rng.uniform(-1, 1), rng.uniform(0, 2 * math.pi))
            p2 = PhasePoint(rng.uniform(-1, 1), rng.uniform(0, 2 * math.pi))
            res = kernel_identity_check(p1, p2, sector, QUAD)
            assert abs(res["rhs"] - res["lhs"]) < 1e-5


def test_reproducing_property_on_basis_functions():
    for sector in (Sector.BOSON, Sector.FERMION):
        j = 1.0 if sector is Sector.BOSON else 1.5
        f = basis_function(sector, j, TR)
        p = PhasePoint(0.3, 1.1)
        got = reproducing_apply(f, p, sector, QUAD)
        assert abs(got - evaluate(f, p)) < 1e-7


def test_kernel_annihilates_the_opposite_sector():
    f = basis_function(Sector.FERMION, 0.5, TR)
    val = reproducing_apply(f, PhasePoint(0.2, 0.9), Sector.BOSON, QUAD)
    assert abs(val) < 1e-7
    g = basis_function(Sector.BOSON, 1.0, TR)
    val = reproducing_apply(g, PhasePoint(0.2, 0.9), Sector.FERMION, QUAD)
    assert abs(val) < 1e-7


def test_covariant_symbol_of_identity_is_one():
    for sector in (Sector.BOSON, Sector.FERMION):
        n = TR.size(sector)
        res = covariant_symbol(np.eye(n), PhasePoint(0.4, 1.3), sector)
        assert abs(res["symbol"] - 1.0) < 1e-12


def test_covariant_symbol_of_X_is_the_label():
    p = PhasePoint(-0.6, 2.0)
    for sector in (Sector.BOSON, Sector.FERMION):
        x = operator_matrix("X", sector, TR)
        res = covariant_symbol(x, p, sector)
        assert abs(res["symbol"] - p.xi) < 1e-12


def test_covariant_symbol_of_J_at_unit_radius():
    jmat = operator_matrix("J", Sector.BOSON, TR)
    res = covariant_symbol(jmat, PhasePoint(1.0, 0.0), Sector.BOSON)
    assert abs(res["symbol"] - 1.0) < 1e-12


def test_covariant_symbol_window_parity():
    # boson windows have odd size; an even matrix cannot be boson
    with pytest.raises(ParityError):
        covariant_symbol(np.eye(4), PhasePoint(0, 0), Sector.BOSON)
    with pytest.raises(ParityError):
        covariant_symbol(np.eye(5), PhasePoint(0, 0), Sector.FERMION)
    with pytest.raises(DomainError):
        covariant_symbol(np.ones((3, 4)), PhasePoint(0, 0), Sector.BOSON)


def test_kernel_symmetry_under_argument_swap():
    from circle_cs.theta import gaussian_lattice_sum

    p1 = PhasePoint(0.7, 1.9)
    p2 = PhasePoint(-0.2, 5.1)
    for half in (False, True):
        k12 = complex(gaussian_lattice_sum(complex(-(p1.l + p2.l), p2.phi - p1.phi), half=half))
        k21 = complex(gaussian_lattice_sum(complex(-(p1.l + p2.l), p1.phi - p2.phi), half=half))
        assert k12 == k21.conjugate()
