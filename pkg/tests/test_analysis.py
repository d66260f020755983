import math

import pytest
from hypothesis import given, settings, strategies as st

from fracseries.analysis import (
    AsymptoticRegime,
    ClosedForm,
    RatioClass,
    RegimeClass,
    ScaleTransform,
    Side,
    asymptotic_replacement,
    classify_regime,
    closed_form,
    closed_form_value,
    mean_value_point,
    mean_value_residual,
    order_limit,
    order_sensitivity,
    periodic_drift,
    rl_derivative_by_quadrature,
    scale_origin_eval,
    scale_transform_eval,
    singularity_slope,
    time_shift_eval,
)
from fracseries.errors import DomainError, RegimeError, UnsupportedError
from fracseries.fracops import eval_series_initial
from fracseries.funcmodel import Combination, Exponential, Heaviside, Polynomial, Power, Sinusoid, constant
from fracseries.operators import OperatorKind, OperatorSpec, Representation
from fracseries.oracle import quad_fixed_memory, quad_rl_derivative, quad_rl_integral

from .strategies import close, entire_functions, fractional_orders, initial_instants, kinds, spans

RL_INT = OperatorKind.RL_INTEGRAL
RL_DER = OperatorKind.RL_DERIVATIVE
CAPUTO = OperatorKind.CAPUTO_DERIVATIVE
E2 = Exponential(2.0)
FAMILIES = [E2, Sinusoid(1.0, 0.3), Polynomial((1.0, 0.0, 3.0))]


def series(f, kind, alpha, a, t, N=60):
    return eval_series_initial(f, OperatorSpec(kind, alpha, a), t, N).value


def finite_difference(f, kind, alpha, a, t, h=1e-5):
    return (series(f, kind, alpha + h, a, t) - series(f, kind, alpha - h, a, t)) / (2.0 * h)


class TestOrderSensitivity:
    def test_integral_of_one(self):
        # (t^alpha / Gamma(alpha+1)) (ln t - psi(alpha+1)) at alpha = 0.5, t = 2
        value = order_sensitivity(constant(1.0), OperatorSpec(RL_INT, 0.5, 0.0), 2.0)
        assert value == pytest.approx(1.0478732937424237, rel=1e-13)

    def test_exponential_derivative(self):
        value = order_sensitivity(E2, OperatorSpec(RL_DER, 0.5, 0.0), 0.5, 60)
        assert value == pytest.approx(finite_difference(E2, RL_DER, 0.5, 0.0, 0.5), rel=1e-5)

    def test_square_caputo(self):
        f = Polynomial((0.0, 0.0, 1.0))
        value = order_sensitivity(f, OperatorSpec(CAPUTO, 0.5, 0.0), 1.0)
        assert value == pytest.approx(finite_difference(f, CAPUTO, 0.5, 0.0, 1.0), rel=1e-6)

    @pytest.mark.parametrize("kind", list(OperatorKind))
    @pytest.mark.parametrize("f", FAMILIES, ids=["exp", "sin", "poly"])
    @pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75, 1.5])
    def test_matches_finite_difference(self, kind, f, alpha):
        value = order_sensitivity(f, OperatorSpec(kind, alpha, 0.2), 0.9, 60)
        fd = finite_difference(f, kind, alpha, 0.2, 0.9)
        assert value == pytest.approx(fd, rel=1e-4, abs=1e-10)

    def test_integer_order_rejected(self):
        with pytest.raises(DomainError):
            order_sensitivity(E2, OperatorSpec(RL_DER, 1.0, 0.0), 1.0)


class TestOrderLimit:
    def test_classical_first_derivative(self):
        assert order_limit(Exponential(1.0), RL_DER, 1, Side.FROM_BELOW, 0.0, 1.0) == pytest.approx(math.e, rel=1e-14)

    def test_caputo_jump(self):
        value = order_limit(Exponential(1.0), CAPUTO, 1, Side.FROM_ABOVE, 0.0, 1.0)
        assert value == pytest.approx(math.e - 1.0, rel=1e-14)

    def test_classical_integral_of_one(self):
        assert order_limit(constant(1.0), RL_INT, 1, Side.FROM_BELOW, 0.0, 2.0) == pytest.approx(2.0, rel=1e-15)

    @pytest.mark.parametrize("kind", [RL_DER, RL_INT, CAPUTO])
    @pytest.mark.parametrize("n", [1, 2])
    @pytest.mark.parametrize("f", FAMILIES, ids=["exp", "sin", "poly"])
    def test_continuous_from_below(self, kind, n, f):
        limit = order_limit(f, kind, n, Side.FROM_BELOW, 0.2, 1.1)
        assert abs(series(f, kind, n - 1e-6, 0.2, 1.1) - limit) <= 1e-4

    @pytest.mark.parametrize("n", [1, 2])
    @pytest.mark.parametrize("f", FAMILIES, ids=["exp", "sin", "poly"])
    def test_rl_derivative_from_above(self, n, f):
        limit = order_limit(f, RL_DER, n, Side.FROM_ABOVE, 0.2, 1.1)
        assert limit == pytest.approx(f.derivative_at(n - 1, 1.1), abs=1e-12)
        assert abs(series(f, RL_DER, n - 1 + 1e-6, 0.2, 1.1) - limit) <= 1e-4

    @pytest.mark.parametrize("n", [1, 2])
    @pytest.mark.parametrize("f", FAMILIES, ids=["exp", "sin", "poly"])
    def test_caputo_from_above_jumps_by_initial_value(self, n, f):
        a, t = 0.2, 1.1
        limit = order_limit(f, CAPUTO, n, Side.FROM_ABOVE, a, t)
        jump = limit - f.derivative_at(n - 1, t)
        assert jump == pytest.approx(-f.derivative_at(n - 1, a), abs=1e-4)
        assert abs(series(f, CAPUTO, n - 1 + 1e-6, a, t) - limit) <= 1e-4

    def test_rejects_zero(self):
        with pytest.raises(DomainError):
            order_limit(E2, RL_DER, 0, Side.FROM_BELOW, 0.0, 1.0)


scale_factors = st.floats(0.2, 3.0)
offsets = st.floats(-1.0, 1.0)


class TestScaleTransform:
    def test_identity_transform_is_exact(self):
        lhs, rhs = scale_transform_eval(E2, ScaleTransform(1.0, 0.0), 0.5, 0.0, 1.0)
        assert lhs == rhs

    def test_exponential_scaling(self):
        lhs, rhs = scale_origin_eval(E2, 2.0, 0.5, 1.0)
        assert close(lhs, rhs, 1e-8)

    def test_time_shift(self):
        lhs, rhs = time_shift_eval(Sinusoid(1.0, 0.2), 0.5, 0.7, 1.5)
        assert close(lhs, rhs, 1e-8)

    def test_mapping(self):
        st_ = ScaleTransform(2.0, -1.0)
        assert (st_.c(0.5), st_.x(1.5)) == (0.0, 2.0)

    def test_zero_scale_rejected(self):
        with pytest.raises(DomainError):
            ScaleTransform(0.0)

    def test_negative_scale_rejected(self):
        with pytest.raises(DomainError):
            scale_transform_eval(E2, ScaleTransform(-1.0), 0.5, 0.0, 1.0)

    @given(entire_functions, scale_factors, offsets, fractional_orders, kinds, initial_instants, st.floats(0.1, 1.0))
    @settings(max_examples=60)
    def test_identity(self, f, lam, shift, alpha, kind, a, h):
        lhs, rhs = scale_transform_eval(f, ScaleTransform(lam, shift), alpha, a, a + h, 60, kind)
        assert close(lhs, rhs, 1e-8)

    @given(entire_functions, fractional_orders, kinds, initial_instants, spans)
    @settings(max_examples=30)
    def test_shift(self, f, alpha, kind, a, h):
        lhs, rhs = time_shift_eval(f, alpha, a, a + h, 60, kind)
        assert close(lhs, rhs, 1e-8)


class TestRegimes:
    @pytest.mark.parametrize(
        "a,t,expected",
        [
            (1.0, 100.0, AsymptoticRegime(RegimeClass.FINITE_A_LARGE_T)),
            (0.0, 1.0, AsymptoticRegime(RegimeClass.FINITE_A_LARGE_T)),
            (-1e4, 1.0, AsymptoticRegime(RegimeClass.LARGE_NEG_A_FINITE_T)),
            (-1e3, 1e3, AsymptoticRegime(RegimeClass.BOTH_LARGE, RatioClass.ONE)),
            (-5e3, 1e4, AsymptoticRegime(RegimeClass.BOTH_LARGE, RatioClass.BELOW_ONE)),
            (-2e4, 1e4, AsymptoticRegime(RegimeClass.BOTH_LARGE, RatioClass.ABOVE_ONE)),
        ],
    )
    def test_classification(self, a, t, expected):
        assert classify_regime(a, t) == expected

    @pytest.mark.parametrize("a,t", [(-1.0, 2.0), (5.0, 6.0), (-50.0, 1e3)])
    def test_unclassified(self, a, t):
        with pytest.raises(RegimeError):
            classify_regime(a, t)

    @given(st.floats(-1e6, 1e6), st.floats(1e-3, 1e6))
    def test_at_most_one_class(self, a, t):
        try:
            r = classify_regime(a, t)
        except RegimeError:
            return
        assert (r.ratio is None) == (r.classification is not RegimeClass.BOTH_LARGE)

    def test_zero_initial_value_has_no_correction(self):
        r = asymptotic_replacement(Sinusoid(1.0), 0.5, 1.0, 200.0)
        assert r.correction == 0.0

    def test_far_initial_instant(self):
        f = Sinusoid(1.0)
        r = asymptotic_replacement(f, 0.5, -1e4, 1.0)
        assert r.regime.classification is RegimeClass.LARGE_NEG_A_FINITE_T
        full = rl_derivative_by_quadrature(f, 0.5, -1e4, 1.0)
        assert abs(full - r.replacement_value) <= 2.0 * abs(r.correction)

    @pytest.mark.parametrize("f", [constant(1.0), Exponential(0.001), Polynomial((2.0, 0.001))], ids=str)
    @pytest.mark.parametrize("alpha", [0.3, 0.5, 1.5])
    def test_far_correction_is_leading_term(self, f, alpha):
        # for slowly varying operands full = replacement + correction to leading order
        r = asymptotic_replacement(f, alpha, -1e4, 1.0)
        full = rl_derivative_by_quadrature(f, alpha, -1e4, 1.0)
        assert full - r.replacement_value == pytest.approx(r.correction, rel=1e-2)

    def test_finite_initial_instant(self):
        f = Exponential(-1.0)
        a, t = 0.5, 60.0
        r = asymptotic_replacement(f, 0.5, a, t)
        full = rl_derivative_by_quadrature(f, 0.5, a, t)
        assert abs(full - r.replacement_value) <= 2.0 * abs(r.correction)

    @pytest.mark.parametrize("f", [constant(1.0), Exponential(-0.001)], ids=str)
    @pytest.mark.parametrize("a,t", [(0.5, 60.0), (-0.5, 100.0), (1.0, 1000.0)])
    def test_finite_correction_is_leading_term(self, f, a, t):
        r = asymptotic_replacement(f, 0.5, a, t)
        full = rl_derivative_by_quadrature(f, 0.5, a, t)
        assert full - r.replacement_value == pytest.approx(r.correction, rel=2e-2)

    def test_balanced_case_uses_origin(self):
        f = Exponential(-1.0)
        r = asymptotic_replacement(f, 0.5, -1e3, 1e3)
        assert r.regime.ratio is RatioClass.ONE
        assert r.replacement_value == pytest.approx(rl_derivative_by_quadrature(f, 0.5, 0.0, 1e3))

    def test_quadrature_rl_derivative(self):
        value = rl_derivative_by_quadrature(E2, 0.5, 0.0, 0.5)
        assert value == pytest.approx(4.0374210965144508, rel=1e-9)


class TestClosedForms:
    def test_heaviside_after_initial_instant(self):
        value = closed_form(ClosedForm.HEAVISIDE, {"step": 1.0}, OperatorSpec(RL_DER, 0.5, 0.0), 3.0)
        assert value == pytest.approx(0.39894228040143268, rel=1e-14)

    @pytest.mark.parametrize("step", [1.0, -1.0])
    @pytest.mark.parametrize("kind", [RL_DER, RL_INT])
    def test_heaviside_by_quadrature(self, step, kind):
        spec = OperatorSpec(kind, 0.5, 0.0)
        value = closed_form(ClosedForm.HEAVISIDE, {"step": step}, spec, 3.0)
        quad = quad_rl_derivative if kind is RL_DER else quad_rl_integral
        assert abs(value - quad(Heaviside(step), 0.5, 0.0, 3.0).value) <= 1e-8

    def test_heaviside_before_step(self):
        assert closed_form(ClosedForm.HEAVISIDE, {"step": 2.0}, OperatorSpec(RL_DER, 0.5, 0.0), 1.0) == 0.0

    def test_heaviside_caputo_inside_unsupported(self):
        with pytest.raises(UnsupportedError):
            closed_form(ClosedForm.HEAVISIDE, {"step": 1.0}, OperatorSpec(CAPUTO, 0.5, 0.0), 3.0)

    def test_exponential_values(self):
        spec = OperatorSpec(RL_DER, 0.5, 0.0)
        assert closed_form(ClosedForm.EXP, {"lam": 2.0}, spec, 0.5) == pytest.approx(4.0374210965144508, rel=1e-13)
        caputo = closed_form(ClosedForm.EXP, {"lam": 2.0}, OperatorSpec(CAPUTO, 0.5, 0.0), 0.5)
        assert caputo == pytest.approx(3.2395365357115854, rel=1e-13)

    @given(st.floats(-2.0, 2.0), fractional_orders, kinds, initial_instants, spans)
    @settings(max_examples=60)
    def test_exponential_matches_series(self, lam, alpha, kind, a, h):
        spec = OperatorSpec(kind, alpha, a)
        value = closed_form(ClosedForm.EXP, {"lam": lam}, spec, a + h)
        assert close(value, series(Exponential(lam), kind, alpha, a, a + h, 80), 1e-10)

    @given(st.floats(0.1, 2.0), fractional_orders, kinds, initial_instants, spans)
    @settings(max_examples=60)
    def test_gstar_matches_mittag_leffler(self, lam, alpha, kind, a, h):
        spec = OperatorSpec(kind, alpha, a)
        p = {"lam": lam}
        assert close(closed_form(ClosedForm.EXP_GSTAR, p, spec, a + h), closed_form(ClosedForm.EXP, p, spec, a + h), 1e-10)

    def test_gstar_tends_to_exponential(self):
        value = closed_form(ClosedForm.EXP_GSTAR, {"lam": 1.0}, OperatorSpec(RL_DER, 0.5, 0.0), 30.0)
        assert value / math.exp(30.0) == pytest.approx(1.0, rel=1e-2)

    @pytest.mark.parametrize("t", [0.0, 1.0, 2.5, 4.0, 2.0 * math.pi])
    def test_sinusoid_idealization(self, t):
        f = Sinusoid(1.0)
        value = closed_form(ClosedForm.SIN, {"lam": 1.0, "phase": 0.0}, OperatorSpec(RL_DER, 0.5, -math.inf), t)
        assert abs(value - rl_derivative_by_quadrature(f, 0.5, -1e4, t)) <= 1e-3

    def test_sinusoid_integral(self):
        value = closed_form(ClosedForm.SIN, {"lam": 2.0, "phase": 0.1}, OperatorSpec(RL_INT, 0.5, -math.inf), 1.0)
        assert value == pytest.approx(2.0**-0.5 * math.sin(2.1 - math.pi / 4.0), rel=1e-14)

    def test_integer_order_is_classical(self):
        value = closed_form(ClosedForm.EXP, {"lam": 2.0}, OperatorSpec(RL_DER, 1.0, 0.0), 0.5)
        assert value == pytest.approx(2.0 * math.e)

    def test_dispatch(self):
        f = Combination(((2.0, E2), (-1.0, Polynomial((0.0, 1.0)))))
        spec = OperatorSpec(RL_INT, 0.7, 0.0)
        ev = closed_form_value(f, spec, 1.5)
        assert ev.representation is Representation.CLOSED_FORM
        assert ev.value == pytest.approx(series(f, RL_INT, 0.7, 0.0, 1.5), rel=1e-12)

    def test_dispatch_polynomial_is_exact(self):
        # RL integral of 2t of order 0.5 at t = 1 is 2 / Gamma(2.5)
        ev = closed_form_value(Polynomial((0.0, 2.0)), OperatorSpec(RL_INT, 0.5, 0.0), 1.0)
        assert ev.value == pytest.approx(1.5045055561273501, rel=1e-14)

    def test_dispatch_unsupported(self):
        with pytest.raises(UnsupportedError):
            closed_form_value(Power(0.5, 0.0), OperatorSpec(RL_INT, 0.5, 0.0), 1.0)
        with pytest.raises(UnsupportedError):
            closed_form_value(Sinusoid(1.0), OperatorSpec(RL_INT, 0.5, 0.0), 1.0)


class TestMeanValue:
    @pytest.mark.parametrize(
        "f,alpha",
        [
            (Polynomial((0.0, 1.0)), 0.5),
            (Polynomial((0.0, 0.0, 1.0)), 0.5),
            (E2, 1.5),
            (Sinusoid(1.0, 0.4), 0.3),
        ],
        ids=["linear", "square", "exp", "sin"],
    )
    def test_residual(self, f, alpha):
        xi = mean_value_point(f, alpha, 0.0, 1.0)
        assert 0.0 < xi <= 1.0
        assert abs(mean_value_residual(f, alpha, 0.0, 1.0, xi)) < 1e-8

    def test_constant(self):
        f = constant(2.0)
        xi = mean_value_point(f, 0.3, 0.0, 1.0)
        assert mean_value_residual(f, 0.3, 0.0, 1.0, xi) == 0.0

    def test_domain(self):
        with pytest.raises(DomainError):
            mean_value_point(E2, 0.5, 1.0, 1.0)
        with pytest.raises(DomainError):
            mean_value_point(E2, 1.0, 0.0, 1.0)


class TestPeriodicDrift:
    def test_gap_value(self):
        gap, predicted = periodic_drift(Sinusoid(1.0), 0.5, 0.0, 20.0 * math.pi + 1.0)
        assert gap == pytest.approx(7.251976909305384e-05, rel=1e-6)
        assert predicted < 0.0

    def test_gap_decays(self):
        near, _ = periodic_drift(Sinusoid(1.0), 0.5, 0.0, 20.0 * math.pi + 1.0)
        far, _ = periodic_drift(Sinusoid(1.0), 0.5, 0.0, 200.0 * math.pi + 1.0)
        assert abs(far) < abs(near)

    def test_constant_has_no_gap(self):
        assert periodic_drift(constant(3.0), 0.5, 0.0, 5.0) == (0.0, 0.0)

    def test_fixed_memory_is_periodic(self):
        f = Sinusoid(1.0, 0.2)
        L, t = 3.0, 7.0
        v0 = quad_fixed_memory(f, 0.5, L, t, 1e-12).value
        v1 = quad_fixed_memory(f, 0.5, L, t + f.period, 1e-12).value
        assert abs(v1 - v0) <= 1e-10

    def test_needs_sinusoid(self):
        with pytest.raises(DomainError):
            periodic_drift(E2, 0.5, 0.0, 5.0)


class TestSingularity:
    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
    def test_rl_blows_up(self, alpha):
        slope = singularity_slope(E2, OperatorSpec(RL_DER, alpha, 0.0))
        assert slope == pytest.approx(-alpha, abs=0.05)

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 1.5])
    def test_caputo_vanishes(self, alpha):
        slope = singularity_slope(E2, OperatorSpec(CAPUTO, alpha, 0.0))
        assert slope == pytest.approx(math.ceil(alpha) - alpha, abs=0.05)
