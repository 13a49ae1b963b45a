import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alzer.expr import X, Const, Interval, parse, substitute, sub
from alzer.ineq import (
    PERIODIC_INTERVAL,
    SHARPNESS_TOL,
    audit_sharpness,
    check_alzer,
    check_cor1_decreasing,
    check_higher_order,
    check_thm3_convex,
    check_thm4_increasing,
    check_thm5_endpoint_max,
    check_thm6_general,
    check_wirtinger,
    evaluate_hypotheses,
    extremal_function,
    higher_order_constants,
    run_check,
    thm4_extremal_constant,
    vanishing_identity,
    vanishing_integral_residual,
)
from alzer.search import GeneratorSpec, generate
from alzer.special import beta_int, beta_int_exact

UNIT = Interval(0.0, 1.0)
QUADRATIC = "6*x^2 - 6*x + 1"


def alzer_extremal(c):
    return parse(f"{c!r}*(3*((x - pi)/pi)^2 - 1)")


def affine(f, source, target):
    """f moved from source onto target by x -> source.a + (x - target.a) * source.width / target.width."""
    inner = Const(source.a) + Const(source.width / target.width) * sub(X, Const(target.a))
    return substitute(f, inner)


class TestWirtinger:
    def test_equality_case(self):
        r = check_wirtinger(parse("sin(x)"))
        assert r.lhs == pytest.approx(math.pi, abs=1e-9)
        assert r.rhs == pytest.approx(math.pi, abs=1e-9)
        assert r.sharpness_ratio == pytest.approx(1.0, abs=1e-9)
        assert r.satisfied and r.hypotheses_met

    def test_second_harmonic(self):
        r = check_wirtinger(parse("sin(2*x)"))
        assert r.lhs == pytest.approx(math.pi, abs=1e-9)
        assert r.rhs == pytest.approx(4 * math.pi, abs=1e-9)
        assert r.satisfied

    def test_zero(self):
        r = check_wirtinger(parse("0"))
        assert r.lhs == 0.0 and r.rhs == 0.0 and r.satisfied

    def test_general_equality_family(self):
        r = check_wirtinger(parse("3*cos(x) - 2*sin(x)"))
        assert r.sharpness_ratio == pytest.approx(1.0, abs=1e-9)


class TestAlzer:
    @pytest.mark.parametrize("c", [1.0, 2.0, -3.0, 0.25])
    def test_extremal(self, c):
        r = check_alzer(alzer_extremal(c))
        assert r.lhs == pytest.approx(6 / math.pi * (2 * c) ** 2, rel=1e-10)
        assert r.rhs == pytest.approx(24 * c**2 / math.pi, rel=1e-10)
        assert abs(r.sharpness_ratio - 1.0) <= 1e-8

    def test_max_rule_recorded(self):
        assert check_alzer(alzer_extremal(2.0)).details["max_rule"] == "signed_max"
        assert check_alzer(alzer_extremal(-3.0)).details["max_rule"] == "abs_max"

    def test_sine(self):
        r = check_alzer(parse("sin(x)"))
        assert r.lhs == pytest.approx(6 / math.pi, rel=1e-12)
        assert r.rhs == pytest.approx(math.pi, rel=1e-10)
        assert r.satisfied

    def test_zero(self):
        r = check_alzer(parse("0"))
        assert r.lhs == 0.0 and r.rhs == 0.0 and r.satisfied


class TestThm3:
    def test_quadratic_extremal(self):
        r = check_thm3_convex(parse(QUADRATIC), UNIT)
        assert r.lhs == pytest.approx(1.0, abs=1e-12)
        assert r.rhs == pytest.approx(1.0, abs=1e-10)
        assert r.sharpness_ratio == pytest.approx(1.0, abs=1e-10)
        flags = r.hypotheses
        assert flags.convex and flags.mean_zero and flags.endpoint_product_positive
        assert flags.min_second_derivative == 12.0
        assert r.quadrature_budget["integral_df_squared"]["value"] == pytest.approx(12.0, abs=1e-10)

    def test_linear(self):
        r = check_thm3_convex(parse("x - 0.5"), UNIT)
        assert r.lhs == -0.25
        assert r.rhs == pytest.approx(1 / 12, abs=1e-12)
        assert r.satisfied
        assert r.hypotheses.endpoint_product_positive is False
        assert not r.hypotheses_met

    @given(a=st.floats(-50, 50), width=st.floats(1e-2, 100))
    @settings(max_examples=40, deadline=None)
    def test_affine_invariance(self, a, width):
        target = Interval(a, a + width)
        base = check_thm3_convex(parse(QUADRATIC), UNIT)
        moved = check_thm3_convex(affine(parse(QUADRATIC), UNIT, target), target)
        assert moved.lhs == pytest.approx(base.lhs, rel=1e-8)
        assert moved.rhs == pytest.approx(base.rhs, rel=1e-8)

    def test_affine_invariance_generic(self):
        f = parse("exp(x) - 1.7182818284590453 + 0.3*x^4 - 0.06")
        base = check_thm3_convex(f, UNIT)
        for target in (Interval(-3.0, 5.0), Interval(10.0, 10.5)):
            moved = check_thm3_convex(affine(f, UNIT, target), target)
            assert moved.lhs == pytest.approx(base.lhs, rel=1e-8)
            assert moved.rhs == pytest.approx(base.rhs, rel=1e-8)


def thm4_oracle(c):
    """Exact sides for f = 4c^2 x^3 + 12 c x - c^2 - 6c on [0, 1].

    f' = 12 c^2 x^2 + 12 c, int f'^2 = 144 c^4 / 5 + 96 c^3 + 144 c^2.
    """
    fa = -(c**2) - 6 * c
    fb = 4 * c**2 + 12 * c - c**2 - 6 * c
    lhs = (2 * fa - fb) * fb
    rhs = (144 * c**4 / 5 + 96 * c**3 + 144 * c**2) / 12
    return lhs, rhs


class TestThm4:
    def test_claimed_extremal(self):
        c = thm4_extremal_constant()
        f, _ = extremal_function("thm4")
        r = check_thm4_increasing(f, UNIT)
        lhs, rhs = thm4_oracle(c)
        assert abs(r.hypotheses.mean_residual) <= 1e-9
        assert r.hypotheses.increasing
        assert r.lhs == pytest.approx(lhs, rel=1e-12)
        assert r.rhs == pytest.approx(rhs, rel=1e-10)
        assert r.sharpness_ratio == pytest.approx(lhs / rhs, rel=1e-10)
        assert r.sharpness_ratio < 0

    def test_linear(self):
        r = check_thm4_increasing(parse("x - 0.5"), UNIT)
        assert r.lhs == -0.75
        assert r.rhs == pytest.approx(1 / 12, abs=1e-12)
        assert r.satisfied and r.hypotheses_met

    def test_zero(self):
        r = check_thm4_increasing(parse("0"), UNIT)
        assert r.lhs == 0.0 and r.rhs == 0.0 and r.satisfied


class TestCor1:
    def test_linear(self):
        r = check_cor1_decreasing(parse("0.5 - x"), UNIT)
        assert r.lhs == -0.75
        assert r.satisfied and r.hypotheses.decreasing

    def test_zero(self):
        r = check_cor1_decreasing(parse("0"), UNIT)
        assert r.lhs == 0.0 and r.rhs == 0.0 and r.satisfied

    def test_reflection_oracle(self):
        interval = Interval(-1.0, 2.0)
        spec = GeneratorSpec(targets={"increasing", "mean-zero"}, seed=5, trials=12, interval=interval)
        for f in generate(spec):
            reflected = substitute(f, Const(interval.a + interval.b) - X)
            inc = check_thm4_increasing(f, interval)
            dec = check_cor1_decreasing(reflected, interval)
            assert dec.lhs == pytest.approx(inc.lhs, rel=1e-12, abs=1e-12)
            assert dec.rhs == pytest.approx(inc.rhs, rel=1e-9)
            assert dec.hypotheses.decreasing and dec.hypotheses.mean_zero


class TestThm5:
    def test_quadratic(self):
        r = check_thm5_endpoint_max(parse(QUADRATIC), UNIT)
        assert r.lhs == pytest.approx(1.0, abs=1e-12)
        assert r.rhs == pytest.approx(1.0, abs=1e-10)
        assert r.hypotheses.endpoints_are_max and r.hypotheses_met

    def test_reduces_to_alzer(self):
        # with a = 0, b = 2 pi: lhs = (2c)^2, rhs = (2 pi / 12)(24 c^2 / pi) = 4 c^2
        r = check_thm5_endpoint_max(alzer_extremal(1.0), PERIODIC_INTERVAL)
        assert r.lhs == pytest.approx(4.0, rel=1e-12)
        assert r.rhs == pytest.approx(4.0, rel=1e-10)
        assert abs(r.sharpness_ratio - 1) <= 1e-9

    def test_zero(self):
        r = check_thm5_endpoint_max(parse("0"), UNIT)
        assert r.lhs == 0.0 and r.rhs == 0.0 and r.satisfied


class TestThm6:
    def test_quadratic(self):
        r = check_thm6_general(parse(QUADRATIC), UNIT)
        assert r.details["t_rap"] == pytest.approx(1.0, abs=1e-12)
        assert r.lhs == pytest.approx(1.0, abs=1e-12)
        assert r.rhs == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("k", [3.0, -2.0, 0.5])
    def test_constant(self, k):
        r = check_thm6_general(Const(k), UNIT)
        assert r.details["t_rap"] == pytest.approx(0.0, abs=1e-14)
        assert r.lhs == pytest.approx(-(k**2), rel=1e-12)
        assert r.rhs == 0.0 and r.satisfied
        assert r.sharpness_ratio is None

    def test_linear(self):
        # T = (0.5 - 0.5)/2 * 1 - 0 = 0, max f = 1/2, lhs = (0 - 1/2) * 1/2
        r = check_thm6_general(parse("x - 0.5"), UNIT)
        assert r.details["t_rap"] == pytest.approx(0.0, abs=1e-14)
        assert r.lhs == pytest.approx(-0.25, abs=1e-12)
        assert r.rhs == pytest.approx(1 / 12, abs=1e-12)
        assert r.hypotheses_met


class TestHigherOrder:
    def test_quadratic(self):
        r = check_higher_order(parse(QUADRATIC), UNIT, 1)
        assert r.lhs == pytest.approx(1.0, abs=1e-12)
        assert r.rhs == pytest.approx(1.0, abs=1e-10)
        assert abs(r.sharpness_ratio - 1) <= 1e-9

    def test_sine_violation(self):
        r = check_higher_order(parse("sin(x)"), PERIODIC_INTERVAL, 1)
        assert r.lhs == pytest.approx(1.0, abs=1e-12)
        assert r.rhs == pytest.approx(math.pi / 6 * math.sqrt(math.pi), rel=1e-10)
        assert not r.satisfied
        assert r.hypotheses_met

    def test_zero(self):
        r = check_higher_order(parse("0"), UNIT, 2)
        assert r.lhs == 0.0 and r.rhs == 0.0 and r.satisfied

    def test_n2(self):
        # f = x^4 - 1/5 on [0, 1]: f'''' = 24, ||f''''||_2 = 24, rhs = 24 / 144
        r = check_higher_order(parse("x^4 - 0.2"), UNIT, 2)
        assert r.lhs == pytest.approx(0.8, abs=1e-12)
        assert r.rhs == pytest.approx(24 / 144, rel=1e-12)
        assert not r.satisfied

    def test_rejects_abs(self):
        from alzer.expr import DifferentiationError

        with pytest.raises(DifferentiationError):
            check_higher_order(parse("abs(x - 0.5) - 0.25"), UNIT, 1)


class TestVanishingIntegral:
    def test_quadratic_is_two(self):
        # by parts: (b - a)(f(a) + f(b)) - 2 int f = 1 * (1 + 1) - 0
        assert vanishing_integral_residual(parse(QUADRATIC), UNIT, 1) == pytest.approx(2.0, abs=1e-9)

    def test_odd_linear(self):
        assert vanishing_integral_residual(parse("x - 0.5"), UNIT, 1) == pytest.approx(0.0, abs=1e-12)

    def test_sine(self):
        assert vanishing_integral_residual(parse("sin(x)"), PERIODIC_INTERVAL, 1) == pytest.approx(0.0, abs=1e-9)

    def test_identity_on_corpus(self):
        specs = [
            GeneratorSpec(targets={"convex", "mean-zero"}, seed=1, trials=15),
            GeneratorSpec(family="trig-polynomial", degree=4, seed=2, trials=15),
            GeneratorSpec(family="exp-mixture", degree=3, seed=3, trials=15, interval=Interval(-1.0, 1.5)),
        ]
        for spec in specs:
            for f in generate(spec):
                residual = vanishing_integral_residual(f, spec.interval, 1)
                assert residual == pytest.approx(vanishing_identity(f, spec.interval), abs=1e-8)

    def test_report_carries_residual(self):
        r = check_higher_order(parse(QUADRATIC), UNIT, 1)
        assert r.details["vanishing_residual"] == pytest.approx(2.0, abs=1e-9)
        assert abs(r.details["identity_gap"]) <= 1e-8


class TestConstants:
    def test_beta_n1_exact(self):
        c = higher_order_constants(1, UNIT)
        assert c.beta == 1 / 30
        assert c.beta == float(Fraction(2 * 2, 120))

    @pytest.mark.parametrize("n", range(1, 11))
    def test_beta_matches_exact_rational(self, n):
        exact = beta_int_exact(2 * n + 1, 2 * n + 1)
        assert exact == Fraction(math.factorial(2 * n) ** 2, math.factorial(4 * n + 1))
        assert abs(beta_int(2 * n + 1, 2 * n + 1) - float(exact)) <= 1e-14 * float(exact)

    def test_log_factorial_route(self):
        # above the exact-arithmetic limit the log-factorial route is used
        value = beta_int(100, 90)
        exact = float(beta_int_exact(100, 90))
        assert value == pytest.approx(exact, rel=1e-12)

    def test_alpha(self):
        interval = Interval(0.0, 2.0)
        c = higher_order_constants(2, interval)
        assert c.alpha == pytest.approx(12**2 * 2.0 ** (-2.5) / math.sqrt(c.beta), rel=1e-15)


class TestAudit:
    @pytest.mark.parametrize("theorem", ["thm2", "thm3", "thm5", "thm6"])
    def test_confirmed(self, theorem):
        r = audit_sharpness(theorem)
        assert r.sharp_confirmed
        assert abs(r.sharpness_ratio - 1) <= SHARPNESS_TOL

    def test_thm4_not_confirmed(self):
        r = audit_sharpness("thm4")
        c = thm4_extremal_constant()
        lhs, rhs = thm4_oracle(c)
        assert r.sharp_confirmed is False
        assert r.sharpness_ratio == pytest.approx(lhs / rhs, rel=1e-10)

    def test_moved_interval(self):
        r = audit_sharpness("thm3", Interval(-2.0, 7.0))
        assert r.sharp_confirmed
        assert r.interval == (-2.0, 7.0)

    def test_unknown(self):
        with pytest.raises(ValueError):
            audit_sharpness("thm7")


def test_run_check_dispatch():
    r = run_check("thm3", parse(QUADRATIC), UNIT)
    assert r.theorem_id == "thm3"
    with pytest.raises(ValueError):
        run_check("nope", parse("x"), UNIT)


def test_flags_carry_witnesses():
    flags = evaluate_hypotheses(
        parse("x^3"),
        Interval(-1.0, 1.0),
        ["mean_zero", "convex", "increasing", "decreasing", "endpoint_product_positive", "endpoints_are_max", "periodic_match"],
    )
    assert flags.mean_zero and abs(flags.mean_residual) < 1e-12
    assert flags.convex is False and flags.min_second_derivative == pytest.approx(-6.0)
    assert flags.increasing and flags.min_first_derivative == pytest.approx(0.0, abs=1e-12)
    assert flags.decreasing is False and flags.max_first_derivative == pytest.approx(3.0)
    assert flags.endpoint_product_positive is False and flags.endpoint_product == -1.0
    assert flags.endpoints_are_max is False and flags.endpoint_max_gap == pytest.approx(2.0)
    assert flags.periodic_match is False and flags.periodic_gap == 2.0


CORPORA = [
    (GeneratorSpec(targets={"convex", "mean-zero", "positive-endpoint-product"}, seed=11, trials=25), ["thm3", "thm6", "higher"]),
    (GeneratorSpec(targets={"endpoint-max", "mean-zero"}, seed=12, trials=25), ["thm5", "thm6"]),
    (GeneratorSpec(family="trig-polynomial", degree=5, targets={"mean-zero"}, seed=13, trials=25), ["wirtinger", "alzer"]),
]


@pytest.mark.parametrize("spec, theorems", CORPORA)
def test_report_invariants(spec, theorems):
    for f in generate(spec):
        for theorem in theorems:
            r = run_check(theorem, f, spec.interval)
            tol = 1e-9 + 1e-9 * abs(r.rhs)
            assert r.satisfied == (r.lhs <= r.rhs + tol)
            assert r.margin == r.rhs - r.lhs
            if r.satisfied and r.rhs > tol:
                assert r.sharpness_ratio <= 1 + SHARPNESS_TOL
            if theorem != "higher":
                assert r.satisfied, (theorem, r.function)
