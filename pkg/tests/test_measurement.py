import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from helpers import BASELINE, KD, WAVELENGTH, scene_for
from superres import (GridError, Interferometer, OutcomeDist, PsfModel,
                      classical_fisher_info, classical_relative_entropy,
                      classical_relative_entropy_variance, cre_of_measurement,
                      di_fisher_info, di_relative_entropy, fringe_probs,
                      hypothesis_probs, maximize_cre, optimal_alpha,
                      outcome_probs, qre_exact)

SIGMA_AUTO = 0.42 * WAVELENGTH / 5.3e-3  # 6.72158e-5 rad


class TestOutcomeProbs:

    def test_bright_and_dark_fringe(self):
        ifo = Interferometer(alpha=0.0, nu=1.0)
        assert outcome_probs([(1.0, 0.0)], ifo) == OutcomeDist(1.0, 0.0)
        dark = outcome_probs([(1.0, math.pi)], ifo)
        assert dark.p_a == pytest.approx(0.0, abs=1e-15)

    def test_zero_visibility_is_coin_flip(self):
        ifo = Interferometer(alpha=0.7, nu=0.0)
        assert outcome_probs([(1.0, 1.3)], ifo) == OutcomeDist(0.5, 0.5)

    def test_mixture_is_weighted_average(self):
        ifo = Interferometer(alpha=0.2, nu=0.9)
        sources = [(0.7, 0.5), (0.3, -1.1)]
        got = outcome_probs(sources, ifo)
        want = sum(w * 0.5 * (1.0 + 0.9 * math.cos(phi + 0.2))
                   for w, phi in sources)
        assert got.p_a == pytest.approx(want, rel=1e-14)

    def test_weight_validation(self):
        ifo = Interferometer(0.0, 1.0)
        with pytest.raises(ValueError):
            outcome_probs([(0.5, 0.0), (0.6, 1.0)], ifo)
        with pytest.raises(ValueError):
            outcome_probs([(-0.1, 0.0), (1.1, 1.0)], ifo)
        with pytest.raises(ValueError):
            outcome_probs([], ifo)

    def test_visibility_validation(self):
        with pytest.raises(ValueError):
            Interferometer(0.0, 1.2)
        with pytest.raises(ValueError):
            Interferometer(0.0, -0.1)


def test_outcome_dist_validation():
    with pytest.raises(ValueError):
        OutcomeDist(0.6, 0.6)
    with pytest.raises(ValueError):
        OutcomeDist(-0.1, 1.1)


def test_fringe_probs_match_equal_pair_mixture():
    # the +/-phi equal mixture collapses to a single fringe with factor
    # nu*cos(alpha)
    for alpha, nu, phi in [(0.0, 1.0, 0.4), (0.3, 0.9, 1.1), (1.2, 0.5, 2.7)]:
        mix = outcome_probs([(0.5, phi), (0.5, -phi)],
                            Interferometer(alpha, nu))
        direct = fringe_probs(phi, nu * math.cos(alpha))
        assert mix.p_a == pytest.approx(direct.p_a, abs=1e-15)


def test_fringe_probs_frozen_example():
    dist = fringe_probs(0.6715648, 0.981)
    assert dist.p_b == pytest.approx(0.5 * (1 - 0.981 * math.cos(0.6715648)),
                                     rel=1e-15)
    assert dist.p_b == pytest.approx(0.11601257, rel=1e-6)
    with pytest.raises(ValueError):
        fringe_probs(0.1, 1.2)


class TestClassicalRelativeEntropy:

    def test_frozen_example(self):
        p = OutcomeDist(0.9, 0.1)
        q = OutcomeDist(0.8, 0.2)
        want = 0.9 * math.log(0.9 / 0.8) + 0.1 * math.log(0.1 / 0.2)
        assert classical_relative_entropy(p, q) == pytest.approx(want,
                                                                 rel=1e-15)
        assert classical_relative_entropy(p, q) == pytest.approx(0.036690014,
                                                                 rel=1e-7)

    def test_identical_is_exactly_zero(self):
        p = OutcomeDist(0.37, 0.63)
        assert classical_relative_entropy(p, p) == 0.0

    def test_support_violation(self):
        p = OutcomeDist(1.0, 0.0)
        q = OutcomeDist(0.8, 0.2)
        assert classical_relative_entropy(q, p) == math.inf
        assert math.isfinite(classical_relative_entropy(p, q))

    def test_nonnegative_property(self):
        rng = np.random.default_rng(23)
        for _ in range(100):
            pa, qa = rng.random(2)
            d = classical_relative_entropy(OutcomeDist(pa, 1 - pa),
                                           OutcomeDist(qa, 1 - qa))
            assert d >= 0.0

    def test_variance_matches_direct_sum(self):
        p = OutcomeDist(0.9, 0.1)
        q = OutcomeDist(0.8, 0.2)
        d = classical_relative_entropy(p, q)
        want = (0.9 * math.log(0.9 / 0.8) ** 2
                + 0.1 * math.log(0.1 / 0.2) ** 2 - d * d)
        assert classical_relative_entropy_variance(p, q) == pytest.approx(
            want, rel=1e-12)
        assert classical_relative_entropy_variance(p, p) == 0.0


class TestMeasuredEntropy:

    def test_never_exceeds_quantum_value(self):
        # data processing: the binary readout cannot beat the state distance
        for kd_theta, eps in [(0.1, 1e-3), (0.1, 1e-1), (0.6, 0.5),
                              (2.3, 0.1)]:
            scene = scene_for(kd_theta, eps)
            qre = qre_exact(scene, BASELINE)
            for alpha in np.linspace(-math.pi, math.pi, 64, endpoint=False):
                for nu in (1.0, 0.9, 0.5):
                    cre = cre_of_measurement(scene, BASELINE,
                                             Interferometer(alpha, nu))
                    assert cre <= qre + 1e-9

    def test_analytic_alpha_nearly_saturates_for_faint_secondary(self):
        scene = scene_for(0.1, 1e-4)
        alpha = optimal_alpha(scene, BASELINE)
        cre = cre_of_measurement(scene, BASELINE, Interferometer(alpha, 1.0))
        qre = qre_exact(scene, BASELINE)
        assert cre == pytest.approx(2.4961144e-07, rel=1e-6)
        assert cre / qre > 0.99

    def test_maximized_ratio_frozen_values(self):
        for eps, want in [(1e-2, 0.9135690), (1e-3, 0.9883518),
                          (1e-4, 0.9985921)]:
            scene = scene_for(0.1, eps)
            _, d_star = maximize_cre(scene, BASELINE, 1.0)
            ratio = d_star / qre_exact(scene, BASELINE)
            assert ratio == pytest.approx(want, rel=1e-4)
        # monotone approach to saturation as the secondary fades
        r1 = maximize_cre(scene_for(0.1, 1e-2), BASELINE, 1.0)[1]
        r2 = maximize_cre(scene_for(0.1, 1e-3), BASELINE, 1.0)[1]
        r3 = maximize_cre(scene_for(0.1, 1e-4), BASELINE, 1.0)[1]
        q1 = qre_exact(scene_for(0.1, 1e-2), BASELINE)
        q2 = qre_exact(scene_for(0.1, 1e-3), BASELINE)
        q3 = qre_exact(scene_for(0.1, 1e-4), BASELINE)
        assert r1 / q1 < r2 / q2 < r3 / q3

    def test_maximize_beats_analytic_and_random_settings(self):
        rng = np.random.default_rng(4)
        for kd_theta, eps, nu in [(0.1, 1e-3, 1.0), (0.5, 0.2, 0.95),
                                  (2.3, 0.1, 1.0)]:
            scene = scene_for(kd_theta, eps)
            alpha_star, d_star = maximize_cre(scene, BASELINE, nu)
            analytic = cre_of_measurement(
                scene, BASELINE, Interferometer(optimal_alpha(scene, BASELINE),
                                                nu))
            assert d_star >= analytic - 1e-9
            for alpha in rng.uniform(-math.pi, math.pi, 32):
                other = cre_of_measurement(scene, BASELINE,
                                           Interferometer(float(alpha), nu))
                assert d_star >= other - 1e-9

    def test_maximize_is_deterministic(self):
        scene = scene_for(0.3, 0.05)
        first = maximize_cre(scene, BASELINE, 0.98)
        second = maximize_cre(scene, BASELINE, 0.98)
        assert first == second

    def test_maximize_degenerate_scenes(self):
        flat = scene_for(0.0, 0.3)
        alpha, value = maximize_cre(flat, BASELINE, 1.0)
        assert value == 0.0
        assert alpha == optimal_alpha(flat, BASELINE)
        no_secondary = scene_for(0.4, 0.0)
        assert maximize_cre(no_secondary, BASELINE, 1.0)[1] == 0.0

    def test_maximize_input_validation(self):
        scene = scene_for(0.1, 0.1)
        with pytest.raises(ValueError):
            maximize_cre(scene, BASELINE, 1.0, grid_points=4)
        with pytest.raises(ValueError):
            maximize_cre(scene, BASELINE, 1.0, tol=0.0)


class TestClassicalFisher:

    def test_unit_fringe_factor_saturates_exactly(self):
        for theta in (0.0, 1e-6, 1.5e-5, 7e-5):
            assert classical_fisher_info(theta, 1.0, KD) == 0.25 * KD * KD

    def test_frozen_example(self):
        got = classical_fisher_info(1.5e-5, 0.975, KD)
        phi = 0.5 * KD * 1.5e-5
        want = (0.25 * KD**2 * 0.975**2 * math.sin(phi)**2
                / (1.0 - 0.975**2 * math.cos(phi)**2))
        assert got == pytest.approx(want, rel=1e-12)
        assert got == pytest.approx(238361004.11, rel=1e-9)
        assert got / (0.25 * KD**2) == pytest.approx(0.6185578, rel=1e-6)

    def test_information_collapses_without_fringe(self):
        assert classical_fisher_info(1.5e-5, 0.0, KD) == 0.0
        assert classical_fisher_info(0.0, 0.9, KD) == 0.0

    def test_small_separation_falloff(self):
        # for r < 1 the information vanishes quadratically with separation
        f1 = classical_fisher_info(1e-7, 0.9, KD)
        f2 = classical_fisher_info(2e-7, 0.9, KD)
        assert f2 / f1 == pytest.approx(4.0, rel=1e-3)

    def test_fringe_factor_validation(self):
        with pytest.raises(ValueError):
            classical_fisher_info(1e-5, 1.01, KD)


class TestDirectImaging:

    def test_psf_validation(self):
        with pytest.raises(ValueError):
            PsfModel(sigma=0.0)
        with pytest.raises(ValueError):
            PsfModel(sigma=1e-5, half_width=4.0)
        with pytest.raises(ValueError):
            PsfModel(sigma=1e-5, n_points=1024)

    def test_auto_width_rule(self):
        scene = scene_for(0.1, 0.5)
        psf = PsfModel.from_baseline(scene, BASELINE)
        assert psf.sigma == pytest.approx(SIGMA_AUTO, rel=1e-12)
        assert psf.sigma == pytest.approx(6.7215849e-5, rel=1e-7)

    def test_grid_underresolution_error(self):
        psf = PsfModel(sigma=1e-5, half_width=200.0)
        with pytest.raises(GridError):
            di_relative_entropy(1e-5, 0.1, psf)

    def test_divergence_example_at_one_sigma(self):
        psf = PsfModel(SIGMA_AUTO)
        approx, numeric = di_relative_entropy(SIGMA_AUTO, 0.01, psf)
        assert approx == pytest.approx(0.5 * 1e-4 * math.expm1(1.0), rel=1e-12)
        assert approx == pytest.approx(8.591409e-5, rel=1e-6)
        # the closed form overshoots the integral by a few percent here
        assert numeric == pytest.approx(8.1889e-5, rel=1e-3)
        assert abs(numeric / approx - 1.0) < 0.10

    def test_divergence_numeric_ratio_shrinks_with_epsilon(self):
        psf = PsfModel(SIGMA_AUTO)
        theta = 5.9e-5
        ratios = []
        for eps, want in [(1e-3, 0.9968), (1e-2, 0.9704), (1e-1, 0.8112)]:
            approx, numeric = di_relative_entropy(theta, eps, psf)
            assert numeric < approx
            assert numeric / approx == pytest.approx(want, rel=1e-2)
            ratios.append(numeric / approx)
        assert ratios[0] > ratios[1] > ratios[2]

    def test_divergence_epsilon_squared_scaling(self):
        psf = PsfModel(SIGMA_AUTO)
        _, d1 = di_relative_entropy(3e-5, 1e-4, psf)
        _, d2 = di_relative_entropy(3e-5, 2e-4, psf)
        assert d2 / d1 == pytest.approx(4.0, rel=1e-3)

    def test_epsilon_validation(self):
        psf = PsfModel(SIGMA_AUTO)
        with pytest.raises(ValueError):
            di_relative_entropy(1e-5, 1.5, psf)
        with pytest.raises(ValueError):
            di_relative_entropy(-1e-5, 0.1, psf)

    def test_fisher_saturates_when_resolved(self):
        psf = PsfModel(SIGMA_AUTO)
        limit = 1.0 / (4.0 * SIGMA_AUTO**2)
        wide = di_fisher_info(4.0 * SIGMA_AUTO, psf)
        assert wide / limit == pytest.approx(0.97834, rel=1e-3)
        assert abs(wide / limit - 1.0) < 0.05

    def test_fisher_collapses_when_unresolved(self):
        psf = PsfModel(SIGMA_AUTO)
        narrow = di_fisher_info(0.01 * SIGMA_AUTO, psf)
        assert narrow < 1e-2 / (4.0 * SIGMA_AUTO**2)

    def test_fisher_monotone_in_separation(self):
        psf = PsfModel(SIGMA_AUTO)
        thetas = np.linspace(0.05, 4.0, 12) * SIGMA_AUTO
        vals = [di_fisher_info(float(t), psf) for t in thetas]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_fisher_against_maximum_likelihood_simulation(self):
        # independent check: the inverse variance of the ML estimator over
        # repeated image realizations should approach n * F
        sigma = SIGMA_AUTO
        theta_true = 4.0 * sigma
        psf = PsfModel(sigma)
        f_num = di_fisher_info(theta_true, psf)
        rng = np.random.default_rng(5)
        m, n = 160, 20000
        estimates = np.empty(m)
        for j in range(m):
            side = rng.integers(0, 2, n) * 2 - 1
            x = side * theta_true / 2 + rng.normal(0.0, sigma, n)

            def nll(th):
                return -np.sum(np.log(
                    0.5 * (np.exp(-0.5 * ((x - th / 2) / sigma) ** 2)
                           + np.exp(-0.5 * ((x + th / 2) / sigma) ** 2))))

            estimates[j] = minimize_scalar(nll, bounds=(2 * sigma, 6 * sigma),
                                           method="bounded").x
        ratio = 1.0 / (n * np.var(estimates)) / f_num
        assert 0.6 < ratio < 1.5


def test_hypothesis_probs_compose_phases_and_weights():
    scene = scene_for(2.3163782663936065, 0.1)  # s = 59 um
    alpha = optimal_alpha(scene, BASELINE)
    p0, p1 = hypothesis_probs(scene, BASELINE, Interferometer(alpha, 1.0))
    # primary sits on axis, so its phase is zero and p0 follows cos(alpha)
    assert p0.p_a == pytest.approx(0.5 * (1 + math.cos(alpha)), rel=1e-12)
    phi = 2.3163782663936065
    want_p1a = (0.9 * 0.5 * (1 + math.cos(alpha))
                + 0.1 * 0.5 * (1 + math.cos(phi + alpha)))
    assert p1.p_a == pytest.approx(want_p1a, rel=1e-12)
    assert p0.p_a == pytest.approx(0.98664585, rel=1e-8)
    assert p1.p_b == pytest.approx(0.10346601, rel=1e-7)
