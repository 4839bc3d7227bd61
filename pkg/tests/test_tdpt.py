import math
import random
from fractions import Fraction

import pytest

from confluent_dbt import tdpt, verify
from confluent_dbt.classical import jacobi
from confluent_dbt.exactalg import ExactPoly, RationalFn, TrigGauged, wronskian

ONE_MINUS = ExactPoly([1, -1])
ONE_PLUS = ExactPoly([1, 1])


# -- the cumulative-norm polynomial Q -----------------------------------------


@pytest.mark.parametrize("n", range(4))
@pytest.mark.parametrize("N,M", [(1, 1), (2, 1), (1, 3), (2, 2)])
def test_q_derivative_is_minus_half_weight(n, N, M):
    # Q' = -(1/2)(1-z)^N (1+z)^M P_n^2 exactly; Q is therefore strictly
    # decreasing across (-1, 1)
    q = tdpt.q_poly(n, N, M)
    p = jacobi(n, N, M)
    expected = ONE_MINUS**N * ONE_PLUS**M * p * p * Fraction(-1, 2)
    assert q.derivative() == expected


@pytest.mark.parametrize("n", range(6))
@pytest.mark.parametrize("N", range(1, 5))
@pytest.mark.parametrize("M", range(1, 5))
def test_q_endpoints(n, N, M):
    q = tdpt.q_poly(n, N, M)
    assert q(Fraction(-1)) == 0
    assert q(Fraction(1)) == tdpt.q_at_one(n, N, M)
    assert tdpt.q_at_one(n, N, M) < 0


@pytest.mark.parametrize("n", range(1, 5))
@pytest.mark.parametrize("N,M", [(1, 1), (2, 1), (3, 2)])
def test_q_endpoint_recurrence(n, N, M):
    assert tdpt.q_recurrence_holds(n, N, M)


def test_threshold_two_thirds_for_ground_level():
    for N, M in [(1, 1), (2, 1), (1, 2)]:
        assert tdpt.regularity_threshold(0, N, M) == Fraction(2, 3)


# -- regularity of lambda1 + Q -------------------------------------------------


def test_regularity_predicate_matches_sturm_certificate():
    rng = random.Random(20240818)
    specs = [(0, 1, 1), (1, 1, 1), (2, 2, 1), (1, 2, 3)]
    for n, N, M in specs:
        thr = tdpt.regularity_threshold(n, N, M)
        for _ in range(50):
            # hit all three regimes: negative, inside (0, thr], above
            lam = Fraction(rng.randint(-60, 60), rng.randint(1, 40)) * thr
            predicted = tdpt.is_regular(n, N, M, lam)
            spec = tdpt.TdptSpec(n, N, M, lam)
            certified, witness = tdpt.certify_regularity(spec)
            assert predicted == certified, (n, N, M, lam)
            if not certified:
                assert witness.count >= 1


def test_forbidden_window_boundary_cases():
    n, N, M = 1, 1, 1
    thr = tdpt.regularity_threshold(n, N, M)
    assert tdpt.is_regular(n, N, M, 0)
    assert not tdpt.is_regular(n, N, M, thr)  # denominator vanishes at z = 1
    assert tdpt.is_regular(n, N, M, thr + Fraction(1, 10**6))
    assert tdpt.is_regular(n, N, M, Fraction(-1, 10**6))


def test_extended_potential_rejects_forbidden_lambda1():
    thr = tdpt.regularity_threshold(1, 1, 1)
    bad = tdpt.TdptSpec(1, 1, 1, thr / 2)
    with pytest.raises(ValueError):
        tdpt.extended_potential(bad)


def test_lambda1_shift_preserves_regularity_regime():
    # the shifted constant is regular for (n-1, N+1, M+1) exactly when the
    # original is regular for (n, N, M); the thresholds obey the same scaling
    rng = random.Random(7)
    for n, N, M in [(1, 1, 1), (2, 1, 2), (3, 2, 2)]:
        thr = tdpt.regularity_threshold(n, N, M)
        thr_shift = tdpt.regularity_threshold(n - 1, N + 1, M + 1)
        assert tdpt.lambda1_shifted(n, N, M, thr) == thr_shift
        for _ in range(25):
            lam = Fraction(rng.randint(-50, 50), rng.randint(1, 30)) * thr
            lam2 = tdpt.lambda1_shifted(n, N, M, lam)
            assert tdpt.is_regular(n, N, M, lam) == tdpt.is_regular(
                n - 1, N + 1, M + 1, lam2
            )


# -- Wronskians and the exceptional family -------------------------------------


@pytest.mark.parametrize("n,k", [(0, 1), (0, 2), (1, 0), (1, 2), (2, 3)])
def test_wronskian_closed_form(n, k):
    N, M = 2, 1
    base = tdpt.TdptSpec(0, N, M, 0).base
    w = wronskian([base.eigenstate(n), base.eigenstate(k)])
    expected = TrigGauged(
        Fraction(N + 1),
        Fraction(M + 1),
        RationalFn(-tdpt.wronskian_pair_poly(n, N, M, k)),
    )
    assert w == expected


def test_wronskian_pair_poly_antisymmetric():
    for n, k in [(0, 1), (1, 2), (0, 3)]:
        a = tdpt.wronskian_pair_poly(n, 1, 2, k)
        b = tdpt.wronskian_pair_poly(k, 1, 2, n)
        assert a == -1 * b


def test_p_tilde_degree_and_surviving_level():
    spec = tdpt.TdptSpec(1, 1, 1, 1)
    n, N, M = spec.n, spec.N, spec.M
    for k in range(5):
        pt = tdpt.p_tilde(spec, k)
        if k == n:
            # the restored level keeps the plain Jacobi polynomial
            assert pt == jacobi(n, N, M)
        else:
            assert pt.degree() == N + M + 2 * n + 1 + k
    with pytest.raises(ValueError):
        tdpt.p_tilde(spec, -1)


@pytest.mark.parametrize(
    "spec",
    [tdpt.TdptSpec(0, 1, 1, 1), tdpt.TdptSpec(0, 2, 1, 1), tdpt.TdptSpec(1, 1, 1, -1)],
)
@pytest.mark.parametrize("k", range(5))
def test_extension_eigenfunctions_solve_the_ode_exactly(spec, k):
    pot = tdpt.extended_potential(spec)
    psi = tdpt.eigenfunction(spec, k)
    res = verify.exact_ode_residual(psi, pot.z_form, spec.base.energy(k))
    assert res.is_zero


def test_measure_weight_positive_inside_interval():
    spec = tdpt.TdptSpec(1, 1, 1, -2)
    w = tdpt.measure_weight(spec)
    for z in [-0.9, -0.3, 0.0, 0.4, 0.95]:
        assert w(z) > 0


def test_exceptional_family_contents():
    spec = tdpt.TdptSpec(1, 1, 1, 1)
    fam = tdpt.exceptional_family(spec, 4)
    assert len(fam.polys) == 5
    assert fam.polys[1] == jacobi(1, 1, 1)
    assert fam.weight_value(0.0) > 0
    with pytest.raises(ValueError):
        tdpt.exceptional_family(spec, -1)


def test_family_orthogonality_under_weight():
    # Gram matrix of the gauged eigenfunctions over (0, pi/2); relative
    # off-diagonal mass must vanish to quadrature accuracy
    spec = tdpt.TdptSpec(0, 1, 1, 1)
    fns = [tdpt.eigenfunction(spec, k) for k in range(5)]
    lo, hi = verify.tdpt_domain(1e-8)
    vals, _ = verify.gram_matrix([f.eval_x for f in fns], lo, hi)
    assert verify.max_offdiagonal_relative(vals) < 1e-10


# -- shape invariance ------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("N", [1, 2, 3])
@pytest.mark.parametrize("M", [1, 2, 3])
def test_shape_invariance_all_27(n, N, M):
    assert tdpt.shape_invariance_holds(n, N, M, Fraction(5, 3))
    assert tdpt.shape_invariance_holds(n, N, M, -7)


def test_shape_invariance_worked_case():
    # n = N = M = 1: C = 1, lambda1' = lambda1, and the cross term is
    # z (1 - z^2)^2 / 2
    residual, c, lam2 = tdpt.shape_invariance_residual(1, 1, 1, Fraction(1))
    assert residual.is_zero
    assert c == 1
    assert lam2 == 1
    cross = (
        ONE_MINUS**2 * ONE_PLUS**2 * jacobi(1, 1, 1) * jacobi(0, 2, 2) * Fraction(1, 4)
    )
    assert cross == ExactPoly([0, Fraction(1, 2), 0, -1, 0, Fraction(1, 2)])


def test_shape_invariance_negative_control():
    residual, c, _ = tdpt.shape_invariance_residual(1, 1, 1, 1)
    assert residual.is_zero
    broken, _, _ = tdpt.shape_invariance_residual(1, 1, 1, 1, c_factor=c + 1)
    assert not broken.is_zero


def test_shape_invariance_needs_positive_n():
    with pytest.raises(ValueError):
        tdpt.shape_invariance_residual(0, 1, 1, 1)


# -- potential and spectrum -------------------------------------------------------


def test_extension_correction_vanishes_nowhere_special():
    # the correction is a genuine rational perturbation: nonzero, decaying
    # at neither endpoint in general, and exactly V-ext - V-base
    spec = tdpt.TdptSpec(0, 1, 1, 1)
    pot = tdpt.extended_potential(spec)
    assert not pot.correction.is_zero
    assert pot.z_form == spec.base.v_zform() + pot.correction


def test_extension_potential_x_form_matches_z_form():
    spec = tdpt.TdptSpec(1, 2, 1, -2)
    pot = tdpt.extended_potential(spec)
    for x in [0.2, 0.7, 1.1, 1.5]:
        z = math.cos(2 * x)
        assert pot.v(x) == pytest.approx(pot.z_form(z), rel=1e-14)


def test_isospectrality_witness_smoke():
    spec = tdpt.TdptSpec(0, 1, 1, 1)
    result, expected = tdpt.isospectrality_witness(spec, 3, grid_n=1500)
    assert expected == [0.0, 16.0, 40.0]
    for got, want in zip(result.energies, expected):
        assert got == pytest.approx(want, rel=2e-4, abs=2e-4)
    assert result.node_counts == (0, 1, 2)


# -- parameter validation ----------------------------------------------------------


def test_spec_validation():
    with pytest.raises(ValueError):
        tdpt.TdptSpec(-1, 1, 1, 0)
    with pytest.raises(ValueError):
        tdpt.TdptSpec(0, 0, 1, 0)
    with pytest.raises(ValueError):
        tdpt.TdptSpec(0, 1, 0, 0)
    with pytest.raises(TypeError):
        tdpt.TdptSpec(0, 1, 1, 0.25)
    d = tdpt.TdptSpec(2, 1, 3, Fraction(-7, 2)).as_dict()
    assert d == {"n": 2, "N": 1, "M": 3, "lambda1": "-7/2"}
