import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from squeezesim import (
    BELL_SINGLET_ALPHA,
    SEPARABLE_UNIFORM_ALPHA,
    SampleBatch,
    analytic_moments,
    bogoliubov_transform,
    empirical_moments,
    impropriety,
    impropriety_isotropic,
    load_xi_file,
    log_density,
    log_density_isotropic,
    mix_seed,
    polar_decompose,
    sample_vacuum,
    separability_threshold,
    symmetric_two_mode_squeezing,
    two_photon_squeezing,
)
from squeezesim.linalg import PolarForm

from helpers import random_symmetric, random_symmetric_unitary, rng_for

N_MC = 1 << 18


def moment_scales(exact):
    """Per-entry standard-deviation scales of the moment estimators.

    For a zero-mean complex Gaussian, var of the (j,k) covariance estimate is
    (G_jj G_kk + |C_jk|^2)/n and of the pseudo-covariance estimate
    (G_jj G_kk + |G_jk|^2)/n; multiplied by sqrt(n) these give the 1-sigma
    scales used in the 5/sqrt(n) bands.
    """
    diag = np.sqrt(np.outer(np.diag(exact.cov).real, np.diag(exact.cov).real))
    return (np.sqrt(diag**2 + np.abs(exact.pseudo_cov) ** 2),
            np.sqrt(diag**2 + np.abs(exact.cov) ** 2))


class TestMixSeed:
    def test_matches_splitmix64_reference(self):
        # first outputs of the reference SplitMix64 stream seeded with 0
        assert mix_seed(0, 0) == 0xE220A8397B1DCDAF
        assert mix_seed(0, 1) == 0x6E789E6AA1B965F4

    def test_independent_of_order(self):
        values = {mix_seed(123, i) for i in range(1000)}
        assert len(values) == 1000


class TestSampleVacuum:
    def test_second_moments(self):
        sigma2 = 0.5
        batch = sample_vacuum(3, N_MC, sigma2, seed=42)
        tol = 5.0 / math.sqrt(N_MC)
        power = np.mean(np.abs(batch.amplitudes) ** 2, axis=0)
        assert np.abs(power - sigma2).max() < tol
        pseudo = np.mean(batch.amplitudes**2, axis=0)
        assert np.abs(pseudo).max() < tol

    def test_deterministic(self):
        a = sample_vacuum(4, 100_000, 0.5, seed=7)
        b = sample_vacuum(4, 100_000, 0.5, seed=7)
        assert np.array_equal(a.amplitudes, b.amplitudes)

    def test_seed_changes_stream(self):
        a = sample_vacuum(2, 100, 0.5, seed=1)
        b = sample_vacuum(2, 100, 0.5, seed=2)
        assert not np.array_equal(a.amplitudes, b.amplitudes)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            sample_vacuum(0, 10, 0.5, seed=0)
        with pytest.raises(ValueError):
            sample_vacuum(2, 0, 0.5, seed=0)
        with pytest.raises(ValueError):
            sample_vacuum(2, 10, 0.0, seed=0)


class TestBogoliubovTransform:
    def test_zero_squeezing_is_identity(self):
        batch = sample_vacuum(4, 1000, 0.5, seed=3)
        polar = polar_decompose(np.zeros((4, 4)))
        out = bogoliubov_transform(batch, polar)
        assert np.array_equal(out.amplitudes, batch.amplitudes)
        assert out.seed == batch.seed

    def test_singlet_component_structure(self):
        # for the Bell singlet the four output modes mix specific partners:
        #   out_AH = cosh(rho) a_AH + sinh(rho) conj(a_BV)
        #   out_AV = cosh(rho) a_AV - sinh(rho) conj(a_BH)
        #   out_BH = cosh(rho) a_BH - sinh(rho) conj(a_AV)
        #   out_BV = cosh(rho) a_BV + sinh(rho) conj(a_AH)
        # with rho = r / sqrt(2)
        r = 0.9
        rho = r / math.sqrt(2.0)
        batch = sample_vacuum(4, 512, 0.5, seed=5)
        spec = two_photon_squeezing(BELL_SINGLET_ALPHA, r)
        out = bogoliubov_transform(batch, polar_decompose(spec.matrix)).amplitudes
        a = batch.amplitudes
        ch, sh = math.cosh(rho), math.sinh(rho)
        expect = np.column_stack([
            ch * a[:, 0] + sh * a[:, 3].conj(),
            ch * a[:, 1] - sh * a[:, 2].conj(),
            ch * a[:, 2] - sh * a[:, 1].conj(),
            ch * a[:, 3] + sh * a[:, 0].conj(),
        ])
        assert np.abs(out - expect).max() < 1e-12

    def test_dimension_mismatch(self):
        batch = sample_vacuum(2, 10, 0.5, seed=1)
        with pytest.raises(ValueError, match="modes"):
            bogoliubov_transform(batch, polar_decompose(np.zeros((3, 3))))

    def test_empirical_moments_match_analytic(self):
        sigma2 = 0.5
        xi = random_symmetric(rng_for(31), 4, 1.4)
        polar = polar_decompose(xi)
        exact = analytic_moments(polar, sigma2)
        batch = bogoliubov_transform(sample_vacuum(4, N_MC, sigma2, seed=13), polar)
        est = empirical_moments(batch)
        scale_cov, scale_pc = moment_scales(exact)
        assert np.abs(est.cov - exact.cov).max() < 5.0 / math.sqrt(N_MC) * scale_cov.max()
        assert (np.abs(est.cov - exact.cov) < 5.0 / math.sqrt(N_MC) * scale_cov).all()
        assert (np.abs(est.pseudo_cov - exact.pseudo_cov)
                < 5.0 / math.sqrt(N_MC) * scale_pc).all()


class TestAnalyticMoments:
    def test_unsqueezed_vacuum_is_proper(self):
        polar = polar_decompose(np.zeros((3, 3)))
        moments = analytic_moments(polar, 0.5)
        assert np.abs(moments.cov - 0.5 * np.eye(3)).max() < 1e-12
        assert np.abs(moments.pseudo_cov).max() == 0.0

    def test_isotropic_pseudo_covariance(self):
        # psd factor r*I with symmetric unitary pairing gives
        # pseudo-covariance sigma2 * sinh(2r) * Q
        r, sigma2 = 0.8, 0.7
        q = random_symmetric_unitary(rng_for(37), 3)
        moments = analytic_moments(PolarForm(psd=r * np.eye(3), unitary=q), sigma2)
        assert np.abs(moments.pseudo_cov - sigma2 * math.sinh(2 * r) * q).max() < 1e-10

    def test_uniform_superposition_has_singular_pseudo_covariance(self):
        spec = two_photon_squeezing(SEPARABLE_UNIFORM_ALPHA, 1.2)
        moments = analytic_moments(polar_decompose(spec.matrix), 0.5)
        assert abs(np.linalg.det(moments.pseudo_cov)) < 1e-9
        assert np.linalg.norm(moments.pseudo_cov) > 0.1

    def test_pseudo_covariance_exactly_symmetric(self):
        xi = random_symmetric(rng_for(41), 5, 1.0)
        moments = analytic_moments(polar_decompose(xi), 1.3)
        assert np.array_equal(moments.pseudo_cov, moments.pseudo_cov.T)


class TestEmpiricalMoments:
    def test_identical_rows(self):
        v = np.array([1.0 + 2.0j, -0.5j, 0.25])
        batch = SampleBatch(amplitudes=np.tile(v, (8, 1)), seed=0)
        est = empirical_moments(batch)
        assert np.abs(est.cov - np.outer(v, v.conj())).max() < 1e-12
        assert np.abs(est.pseudo_cov - np.outer(v, v)).max() < 1e-12

    def test_vacuum_is_proper(self):
        sigma2 = 0.5
        est = empirical_moments(sample_vacuum(4, N_MC, sigma2, seed=99))
        tol = 5.0 * sigma2 / math.sqrt(N_MC)
        assert np.abs(est.cov - sigma2 * np.eye(4)).max() < tol
        assert np.abs(est.pseudo_cov).max() < tol

    def test_exact_structure(self):
        batch = sample_vacuum(3, 1000, 0.5, seed=11)
        est = empirical_moments(batch)
        assert np.array_equal(est.cov, est.cov.conj().T)
        assert np.array_equal(est.pseudo_cov, est.pseudo_cov.T)

    def test_rejects_tiny_batch(self):
        with pytest.raises(ValueError):
            empirical_moments(SampleBatch(amplitudes=np.ones((1, 2), dtype=complex), seed=0))


class TestImpropriety:
    def test_proper_vector_scores_zero(self):
        moments = analytic_moments(polar_decompose(np.zeros((3, 3))), 0.5)
        assert impropriety(moments) == 0.0

    def test_matches_closed_form(self):
        for d in (1, 2, 4):
            for r in (0.1, 0.5, 1.0, 2.0):
                q = random_symmetric_unitary(rng_for(1000 + d), d)
                moments = analytic_moments(PolarForm(psd=r * np.eye(d), unitary=q), 0.5)
                assert impropriety(moments) == pytest.approx(
                    impropriety_isotropic(r, d), abs=1e-9)

    def test_separable_superposition_scores_zero(self):
        spec = two_photon_squeezing(SEPARABLE_UNIFORM_ALPHA, 1.0)
        moments = analytic_moments(polar_decompose(spec.matrix), 0.5)
        assert impropriety(moments) < 1e-9
        assert np.linalg.norm(moments.pseudo_cov) > 0.1

    def test_closed_form_basics(self):
        assert impropriety_isotropic(0.0, 3) == 0.0
        assert 1.0 - impropriety_isotropic(20.0, 1) < 1e-10
        with pytest.raises(ValueError):
            impropriety_isotropic(-0.1, 2)

    def test_closed_form_monotone(self):
        grid = np.linspace(1e-3, 5.0, 200)
        values = [impropriety_isotropic(r, 2) for r in grid]
        assert all(b > a for a, b in zip(values, values[1:]))


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(1, 5),
       sigma2=st.floats(0.5, 2.0), norm=st.floats(0.01, 2.0))
def test_impropriety_bounds_property(seed, d, sigma2, norm):
    xi = random_symmetric(rng_for(seed), d, norm)
    moments = analytic_moments(polar_decompose(xi), sigma2)
    assert 0.0 <= impropriety(moments) <= 1.0
    # covariance dominates the source variance: cosh(2R) >= I
    assert np.linalg.eigvalsh(moments.cov).min() >= sigma2 - 1e-9
    scale = 1.0 + np.linalg.norm(moments.pseudo_cov)
    assert np.linalg.norm(moments.pseudo_cov - moments.pseudo_cov.T) <= 1e-9 * scale


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), r=st.floats(0.0, 2.5),
       sigma2=st.floats(0.5, 2.0), d=st.integers(1, 4))
def test_impropriety_closed_form_property(seed, r, sigma2, d):
    q = random_symmetric_unitary(rng_for(seed), d)
    moments = analytic_moments(PolarForm(psd=r * np.eye(d), unitary=q), sigma2)
    assert impropriety(moments) == pytest.approx(impropriety_isotropic(r, d), abs=1e-9)


class TestLogDensity:
    def test_proper_peak_value(self):
        sigma2 = 0.5
        d = 3
        moments = analytic_moments(polar_decompose(np.zeros((d, d))), sigma2)
        assert log_density(np.zeros(d), moments) == pytest.approx(
            -d * math.log(math.pi * sigma2), abs=1e-12)

    def test_matches_isotropic_closed_form(self):
        rng = rng_for(53)
        for r in (0.3, 1.0):
            d = 3
            sigma2 = 0.5
            q = random_symmetric_unitary(rng, d)
            moments = analytic_moments(polar_decompose(r * q), sigma2)
            beta = rng.standard_normal((50, d)) + 1j * rng.standard_normal((50, d))
            general = log_density(beta, moments)
            closed = log_density_isotropic(beta, r, q, sigma2)
            assert np.abs(general - closed).max() < 1e-9

    def test_quadrature_normalization(self):
        # integrate the density over the complex plane (d = 1)
        moments = analytic_moments(polar_decompose(0.6 * np.eye(1)), 0.5)
        sd = math.sqrt((moments.cov[0, 0].real + abs(moments.pseudo_cov[0, 0])) / 2)
        half_width = 8.0 * sd
        m = 801
        xs = np.linspace(-half_width, half_width, m)
        step = xs[1] - xs[0]
        re, im = np.meshgrid(xs, xs, indexing="ij")
        beta = (re + 1j * im).reshape(-1, 1)
        total = np.exp(log_density(beta, moments)).sum() * step * step
        assert total == pytest.approx(1.0, abs=1e-3)

    def test_rejects_singular_augmented_covariance(self):
        moments = empirical_moments(
            SampleBatch(amplitudes=np.tile([1.0 + 0j, 2.0], (4, 1)), seed=0))
        with pytest.raises(ValueError, match="singular"):
            log_density(np.zeros(2), moments)


class TestSeparabilityThreshold:
    def test_vacuum_always_entangled(self):
        verdict = separability_threshold(0.5, 1e-9)
        assert verdict.entangled
        assert verdict.threshold_r == 0.0
        assert not separability_threshold(0.5, 0.0).entangled

    def test_thermal_state(self):
        assert not separability_threshold(1.0, 0.3).entangled
        assert separability_threshold(1.0, 0.5).entangled
        assert separability_threshold(1.0, 0.0).threshold_r == pytest.approx(
            0.5 * math.log(2.0))

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            separability_threshold(0.0, 1.0)
        with pytest.raises(ValueError):
            separability_threshold(1.0, -0.1)


class TestConstructors:
    def test_singlet_polar_form(self):
        r = 1.1
        spec = two_photon_squeezing(BELL_SINGLET_ALPHA, r)
        psd, unitary = polar_decompose(spec.matrix)
        assert np.abs(psd - (r / math.sqrt(2.0)) * np.eye(4)).max() < 1e-12
        assert np.abs(psd @ unitary - spec.matrix).max() < 1e-12

    def test_alpha_renormalized(self):
        spec = two_photon_squeezing((2.0, 0.0, 0.0, 0.0), 1.0)
        assert spec.matrix[0, 2] == pytest.approx(1.0)

    def test_zero_alpha_rejected(self):
        with pytest.raises(ValueError, match="nonzero"):
            two_photon_squeezing((0.0, 0.0, 0.0, 0.0), 1.0)

    def test_zero_strength(self):
        spec = two_photon_squeezing(BELL_SINGLET_ALPHA, 0.0)
        assert not spec.matrix.any()
        psd, unitary = polar_decompose(spec.matrix)
        assert not psd.any()
        assert np.array_equal(unitary, np.eye(4))

    def test_two_mode_matrix(self):
        assert not symmetric_two_mode_squeezing(0.0).matrix.any()
        spec = symmetric_two_mode_squeezing(1.0, 0.0)
        from squeezesim import svd
        assert np.abs(svd(spec.matrix).s - 1.0).max() < 1e-12

    def test_two_mode_impropriety(self):
        r = 0.7
        spec = symmetric_two_mode_squeezing(r, 0.4)
        moments = analytic_moments(polar_decompose(spec.matrix), 0.5)
        assert impropriety(moments) == pytest.approx(
            impropriety_isotropic(r, 2), abs=1e-9)


class TestXiFileFormat:
    def test_round_trip(self, tmp_path):
        spec = two_photon_squeezing(BELL_SINGLET_ALPHA, 0.9)
        path = tmp_path / "xi.json"
        path.write_text(json.dumps(spec.to_json_dict()))
        loaded = load_xi_file(path)
        assert np.abs(loaded.matrix - spec.matrix).max() < 1e-15

    def test_rejects_asymmetric(self, tmp_path):
        doc = {"d": 2, "entries": [[0, 0], [1, 0], [0.5, 0], [0, 0]]}
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(ValueError, match="symmetric"):
            load_xi_file(path)

    def test_rejects_malformed(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ValueError, match="JSON"):
            load_xi_file(path)
        path.write_text(json.dumps({"d": 2, "entries": [[0, 0]]}))
        with pytest.raises(ValueError, match="entries"):
            load_xi_file(path)
