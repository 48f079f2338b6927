"""Rayleigh-quotient calculus and the correction strategies.

The cross-method checks lean on one analytic fact: with an exact solve,
every projected or constrained correction points along
-x + eta*(A - lam I)^{-1} x, so the methods must agree pairwise and the
augmented span {x, t} must capture the inverse-iteration direction.
"""

import numpy as np
import pytest

from conftest import (
    rand_hermitian,
    rand_symmetric_real,
    rand_unit,
    sin_angle,
    sin_angle_span,
)
from subeig.core import lstsq_minnorm
from subeig.corrections import (
    KINDS,
    CorrectionInput,
    StrategyConfig,
    grad_rq,
    hess_rq,
    rayleigh_quotient,
    solve_bordered,
    solve_correction,
    solve_davidson,
    solve_generalized,
    solve_iigd,
    solve_iigdm,
    solve_jd,
    solve_jdm,
    solve_n1,
    solve_n2,
)
from subeig.driver import rqi_direction
from subeig.errors import BreakdownError, SingularDiagonalError
from subeig.matio import ModelSpec, gen_model
from subeig.rng import SplitMix64


def _perturbed_eigvec(a, seed, eps=3e-2, which=0):
    """Unit vector near the chosen eigenvector of a Hermitian matrix."""
    w, v = np.linalg.eigh(a)
    x = v[:, which] + eps * SplitMix64(seed).uniform(a.shape[0])
    return x / np.linalg.norm(x), w


def _input_at_rq(a, x):
    lam = rayleigh_quotient(a, x)
    r = a @ x - lam * x
    return CorrectionInput(a, x, lam, r)


def _input_at_shift(a, x, lam):
    r = a @ x - lam * x
    return CorrectionInput(a, x, complex(lam), r)


class TestRayleighCalculus:
    def test_quotient_of_eigenvector(self):
        a = np.diag([3.0, 1.0, 2.0])
        assert rayleigh_quotient(a, np.array([0.0, 1.0, 0.0])) == 1.0

    def test_quotient_rejects_zero_vector(self):
        with pytest.raises(ValueError):
            rayleigh_quotient(np.eye(2), np.zeros(2))

    def test_gradient_matches_finite_differences(self):
        h = 1e-6
        for seed in range(5):
            a = rand_symmetric_real(12, seed=seed).real
            x = rand_unit(12, seed=seed + 40, real=True).real * 1.3
            g = grad_rq(a, x).real
            fd = np.empty_like(g)
            for i in range(12):
                e = np.zeros(12)
                e[i] = h
                fd[i] = (rayleigh_quotient(a, x + e).real
                         - rayleigh_quotient(a, x - e).real) / (2 * h)
            err = np.max(np.abs(g - fd)) / np.max(np.abs(g))
            assert err <= 1e-6

    def test_gradient_vanishes_at_eigenvector(self):
        a = rand_hermitian(10, seed=2)
        _, v = np.linalg.eigh(a)
        g = grad_rq(a, v[:, 3])
        assert np.linalg.norm(g) <= 1e-12 * np.linalg.norm(a)

    def test_gradient_rejects_nonhermitian(self):
        a = np.array([[0.0, 1.0], [0.0, 0.0]])
        with pytest.raises(ValueError):
            grad_rq(a, np.ones(2))

    def test_hessian_matches_finite_differences_of_gradient(self):
        h = 1e-5
        for seed in range(3):
            a = rand_symmetric_real(10, seed=seed + 7).real
            x = rand_unit(10, seed=seed + 70, real=True).real
            hess = hess_rq(a, x).real
            fd = np.empty((10, 10))
            for j in range(10):
                e = np.zeros(10)
                e[j] = h
                fd[:, j] = (grad_rq(a, x + e).real - grad_rq(a, x - e).real) / (2 * h)
            err = np.max(np.abs(hess - fd)) / np.max(np.abs(hess))
            assert err <= 1e-5

    def test_hessian_needs_unit_vector(self):
        a = rand_hermitian(6, seed=1)
        with pytest.raises(ValueError):
            hess_rq(a, np.full(6, 2.0))


class TestOperatorIdentities:
    """Dense identities behind the correction operators, at n = 50."""

    N = 50

    def setup_method(self):
        self.a = rand_hermitian(self.N, seed=11)
        self.x = rand_unit(self.N, seed=12)
        self.fnorm = np.linalg.norm(self.a)
        self.tol = 1e-12 * self.fnorm

    def test_projected_operator_expansion(self):
        a, x = self.a, self.x
        lam = rayleigh_quotient(a, x)
        p = np.outer(x, x.conj())
        eye = np.eye(self.N)
        lhs = (eye - p) @ (a - lam * eye) @ (eye - p)
        rhs = a - lam * eye - np.outer(x, x.conj() @ a) - np.outer(a @ x, x.conj()) \
            + 2.0 * lam * p
        assert np.linalg.norm(lhs - rhs) <= self.tol

    def test_rank_two_identity(self):
        a, x = self.a, self.x
        lam = rayleigh_quotient(a, x)
        r = a @ x - lam * x
        lhs = np.outer(a @ x, x.conj()) + np.outer(x, (a @ x).conj()) \
            - 2.0 * lam.real * np.outer(x, x.conj())
        rhs = np.outer(r, x.conj()) + np.outer(x, r.conj())
        assert np.linalg.norm(lhs - rhs) <= self.tol

    def test_reflector_is_involutory(self):
        g = np.eye(self.N) - 2.0 * np.outer(self.x, self.x.conj())
        assert np.linalg.norm(g @ g - np.eye(self.N)) <= 1e-12 * self.N

    def test_hessian_equals_scaled_rank_two_shift(self):
        a, x = self.a, self.x
        lam = rayleigh_quotient(a, x).real
        r = a @ x - lam * x
        shifted = a - lam * np.eye(self.N) \
            - 2.0 * (np.outer(r, x.conj()) + np.outer(x, r.conj()))
        assert np.linalg.norm(hess_rq(a, x) - 2.0 * shifted) <= self.tol


class TestDavidson:
    def test_entrywise_diagonal_solve(self):
        a = np.diag([5.0, 2.0, -1.0])
        x = rand_unit(3, seed=4)
        inp = _input_at_shift(a, x, 1.0)
        t = solve_davidson(inp)
        np.testing.assert_allclose(t, -inp.r / (np.diag(a) - 1.0), atol=1e-15)

    def test_singular_diagonal_names_the_entry(self):
        a = np.diag([3.0, 1.0, 2.0])
        x = rand_unit(3, seed=5)
        with pytest.raises(SingularDiagonalError) as exc:
            solve_davidson(_input_at_shift(a, x, 2.0))
        assert exc.value.index == 2


class TestProjectedSolves:
    def test_jd_solution_lies_in_orthogonal_complement(self):
        a = rand_hermitian(16, seed=21)
        x, _ = _perturbed_eigvec(a, seed=22)
        inp = _input_at_rq(a, x)
        t = solve_jd(inp)
        assert abs(np.vdot(x, t)) <= 1e-10 * np.linalg.norm(t)

    def test_jd_solves_the_projected_system(self):
        a = rand_hermitian(16, seed=23)
        x, _ = _perturbed_eigvec(a, seed=24)
        inp = _input_at_rq(a, x)
        t = solve_jd(inp)
        p = np.outer(x, x.conj())
        b = (np.eye(16) - p) @ (a - inp.lam * np.eye(16)) @ (np.eye(16) - p)
        rhs_reachable = -(inp.r - x * np.vdot(x, inp.r))
        assert np.linalg.norm(b @ t - rhs_reachable) <= 1e-10 * np.linalg.norm(a)

    def test_jdm_is_orthogonal_and_parallel_to_jd(self):
        a = rand_hermitian(16, seed=25)
        x, _ = _perturbed_eigvec(a, seed=26)
        inp = _input_at_rq(a, x)
        t_m = solve_jdm(inp)
        assert abs(np.vdot(x, t_m)) <= 1e-12 * np.linalg.norm(t_m)
        assert sin_angle(t_m, solve_jd(inp)) <= 1e-10

    def test_jdm_minnorm_solve_matches_projected_rhs(self):
        # the one-sided operator maps onto the orthogonal complement of
        # x, so the least-squares residual is exactly the x component
        a = rand_hermitian(16, seed=27)
        x, _ = _perturbed_eigvec(a, seed=28)
        inp = _input_at_rq(a, x)
        p = np.outer(x, x.conj())
        b = (np.eye(16) - p) @ (a - inp.lam * np.eye(16))
        t0 = lstsq_minnorm(b, -inp.r)
        want = -(inp.r - x * np.vdot(x, inp.r))
        assert np.linalg.norm(b @ t0 - want) <= 1e-10 * np.linalg.norm(a)

    def test_jd_handles_exact_eigenvalue_shift(self):
        a = np.diag([4.0, 1.0, 0.5])
        x = np.array([1.0, 0.0, 0.0])
        inp = _input_at_shift(a, x, 4.0)
        t = solve_jd(inp)
        assert np.all(np.isfinite(t))


class TestInverseIterationForms:
    def test_two_solve_form_is_orthogonal_by_construction(self):
        a = rand_hermitian(14, seed=31)
        x, _ = _perturbed_eigvec(a, seed=32)
        inp = _input_at_rq(a, x)
        t = solve_iigd(inp)
        assert abs(np.vdot(x, t)) <= 1e-11 * max(1.0, np.linalg.norm(t))

    def test_one_solve_form_explicit_example(self):
        a = np.diag([3.0, 1.0])
        x = np.array([1.0, 0.0])
        inp = _input_at_shift(a, x, 0.0)
        t = solve_iigdm(inp)
        np.testing.assert_array_equal(t, np.zeros(2))

    def test_one_solve_orthogonality_enforced(self):
        for seed in range(6):
            a = rand_hermitian(14, seed=seed + 40)
            x, _ = _perturbed_eigvec(a, seed=seed + 50)
            t = solve_iigdm(_input_at_rq(a, x))
            assert abs(np.vdot(x, t)) <= 1e-12

    def test_breakdown_when_x_orthogonal_to_resolvent_image(self):
        a = np.diag([3.0, 1.0])
        x = np.array([1.0, 1.0]) / np.sqrt(2.0)
        inp = _input_at_shift(a, x, 2.0)
        with pytest.raises(BreakdownError):
            solve_iigdm(inp)
        with pytest.raises(BreakdownError):
            solve_iigd(inp)


class TestNewtonForms:
    def test_rank_two_form_matches_dense_oracle(self):
        a = rand_hermitian(12, seed=61)
        x, _ = _perturbed_eigvec(a, seed=62)
        inp = _input_at_rq(a, x)
        t = solve_n1(inp, StrategyConfig("n1"))
        m = a - inp.lam * np.eye(12) \
            - 2.0 * (np.outer(inp.r, x.conj()) + np.outer(x, inp.r.conj()))
        t_np = np.linalg.lstsq(m, -inp.r, rcond=None)[0]
        np.testing.assert_allclose(t, t_np, rtol=1e-8, atol=1e-10)

    def test_reflected_form_matches_dense_oracle(self):
        a = rand_hermitian(12, seed=63)
        x, _ = _perturbed_eigvec(a, seed=64)
        inp = _input_at_rq(a, x)
        t = solve_n2(inp, StrategyConfig("n2"))
        g = np.eye(12) - 2.0 * np.outer(x, x.conj())
        b = g @ (a - inp.lam * np.eye(12)) @ g
        np.testing.assert_allclose(t, np.linalg.solve(b, -inp.r), rtol=1e-8, atol=1e-10)

    def test_reflected_form_survives_singular_operator(self):
        a = np.diag([4.0, 1.0, 0.5])
        x = np.array([1.0, 0.0, 0.0])
        inp = _input_at_shift(a, x, 4.0)
        t = solve_n2(inp, StrategyConfig("n2"))
        assert np.all(np.isfinite(t))

    def test_diagonal_preconditioned_variants(self):
        a = rand_hermitian(12, seed=65)
        x, _ = _perturbed_eigvec(a, seed=66)
        inp = _input_at_rq(a, x)
        cfg = StrategyConfig("n1", diag_precond=True)
        t = solve_n1(inp, cfg)
        m = np.diag(np.diag(a)) - inp.lam * np.eye(12) \
            - 2.0 * (np.outer(inp.r, x.conj()) + np.outer(x, inp.r.conj()))
        t_np = np.linalg.lstsq(m, -inp.r, rcond=None)[0]
        np.testing.assert_allclose(t, t_np, rtol=1e-8, atol=1e-10)
        cfg2 = StrategyConfig("n2", diag_precond=True)
        t2 = solve_n2(inp, cfg2)
        g = np.eye(12) - 2.0 * np.outer(x, x.conj())
        b = g @ (np.diag(np.diag(a)) - inp.lam * np.eye(12)) @ g
        np.testing.assert_allclose(t2, np.linalg.solve(b, -inp.r), rtol=1e-8, atol=1e-10)

    def test_hermitian_gate(self):
        a = np.array([[1.0, 2.0], [0.0, 1.0]])
        x = np.array([1.0, 0.0])
        inp = _input_at_shift(a, x, 0.3)
        for solver in (solve_n1, solve_n2):
            with pytest.raises(ValueError):
                solver(inp, StrategyConfig("n1"))
        t = solve_n1(inp, StrategyConfig("n1", allow_nonhermitian=True))
        assert np.all(np.isfinite(t))

    def test_real_ritz_value_gate(self):
        a = rand_hermitian(8, seed=67)
        x = rand_unit(8, seed=68)
        inp = _input_at_shift(a, x, 0.5 + 0.2j)
        with pytest.raises(ValueError):
            solve_n1(inp, StrategyConfig("n1"))


class TestConstrainedFamily:
    def test_bordered_solution_satisfies_both_equations(self):
        a = rand_hermitian(15, seed=71)
        x, _ = _perturbed_eigvec(a, seed=72)
        inp = _input_at_rq(a, x)
        t, eta = solve_bordered(inp)
        lhs = (a - inp.lam * np.eye(15)) @ t - eta * x
        assert np.linalg.norm(lhs + inp.r) <= 1e-11 * np.linalg.norm(a)
        assert abs(np.vdot(x, t)) <= 1e-12 * np.linalg.norm(t)

    def test_bordered_multiplier_matches_resolvent_formula(self):
        a = rand_hermitian(15, seed=73)
        x, _ = _perturbed_eigvec(a, seed=74)
        inp = _input_at_rq(a, x)
        _, eta = solve_bordered(inp)
        s = np.linalg.solve(a - inp.lam * np.eye(15), x)
        assert abs(eta - 1.0 / np.vdot(x, s)) <= 1e-8 * abs(eta)

    def test_generalized_direction_is_parameter_free(self):
        a = rand_hermitian(15, seed=75)
        x, _ = _perturbed_eigvec(a, seed=76)
        inp = _input_at_rq(a, x)
        base = solve_generalized(inp, 1.0, 0.0)
        for alpha in (1.0, 2.0, 5.0):
            for beta in (0.0, 1.0, 3.0):
                t = solve_generalized(inp, alpha, beta)
                assert sin_angle(base, t) <= 1e-12
                assert abs(np.vdot(x, t)) <= 1e-12 * np.linalg.norm(t)

    def test_generalized_rejects_zero_alpha(self):
        a = rand_hermitian(6, seed=77)
        x = rand_unit(6, seed=78)
        with pytest.raises(ValueError):
            solve_generalized(_input_at_rq(a, x), 0.0, 1.0)
        with pytest.raises(ValueError):
            StrategyConfig("generalized", alpha=0.0)


class TestCrossMethodAgreement:
    def test_exact_solve_directions_coincide(self):
        for seed in range(4):
            a = rand_hermitian(20, seed=seed + 80)
            x, _ = _perturbed_eigvec(a, seed=seed + 90)
            inp = _input_at_rq(a, x)
            t_ref = solve_jd(inp)
            others = [
                solve_jdm(inp),
                solve_iigd(inp),
                solve_iigdm(inp),
                solve_bordered(inp)[0],
                solve_generalized(inp, 2.0, 1.0),
            ]
            for t in others:
                assert sin_angle(t_ref, t) <= 1e-8

    def test_augmented_span_contains_inverse_iteration_direction(self):
        # shifted away from the quotient so the unconstrained Newton
        # forms keep a nonzero component along the new direction
        a = gen_model(ModelSpec("laplace1d", 50)).real
        w, v = np.linalg.eigh(a)
        x = v[:, 0] + 3e-2 * SplitMix64(3).uniform(50)
        x = x / np.linalg.norm(x)
        lam = w[0] - 2e-2
        assert np.min(np.abs(w - lam)) >= 1e-3
        inp = _input_at_shift(a.astype(complex), x.astype(complex), lam)
        x_r = rqi_direction(a, lam, x)
        candidates = {
            "jd": solve_jd(inp),
            "jdm": solve_jdm(inp),
            "iigd": solve_iigd(inp),
            "iigdm": solve_iigdm(inp),
            "n2": solve_n2(inp, StrategyConfig("n2")),
            "bordered": solve_bordered(inp)[0],
            "generalized": solve_generalized(inp, 5.0, 3.0),
        }
        for name, t in candidates.items():
            assert sin_angle_span([inp.x, t], x_r) <= 1e-8, name


class TestDispatchAndConfig:
    def test_dispatch_covers_every_kind(self):
        a = rand_hermitian(10, seed=96)
        x, _ = _perturbed_eigvec(a, seed=97)
        inp = _input_at_rq(a, x)
        for kind in KINDS:
            cfg = StrategyConfig(kind)
            t = solve_correction(inp, cfg)
            assert t.shape == (10,)
            assert np.all(np.isfinite(t))

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            StrategyConfig("power-iteration")

    def test_enforced_orthogonality_invariant(self):
        a = gen_model(ModelSpec("laplace1d", 30)).real
        w, v = np.linalg.eigh(a)
        x = v[:, 0] + 3e-2 * SplitMix64(5).uniform(30)
        x = x / np.linalg.norm(x)
        lam = w[0] - 1e-2
        inp = _input_at_shift(a.astype(complex), x.astype(complex), lam)
        for kind in KINDS:
            cfg = StrategyConfig(kind, enforce_orth=True)
            t = solve_correction(inp, cfg)
            assert abs(np.vdot(x, t)) <= 1e-8 * np.linalg.norm(t), kind

    def test_input_requires_unit_vector(self):
        a = rand_hermitian(5, seed=98)
        with pytest.raises(ValueError):
            CorrectionInput(a, np.full(5, 0.9), 1.0, np.zeros(5))

    def test_config_label_falls_back_to_kind(self):
        assert StrategyConfig("jd").name == "jd"
        assert StrategyConfig("generalized", alpha=2, label="general:2:0").name \
            == "general:2:0"
