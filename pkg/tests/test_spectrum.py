import math

import numpy as np
import pytest
import scipy.sparse as sp
from scipy.linalg import eig_banded

from sgweyl import _banded
from sgweyl.errors import OutOfWindowError, ValidationError
from sgweyl.spectrum import (
    DiscretizationConfig,
    SpectralData,
    assemble_model_matrix,
    compute_spectrum,
    counting_function,
    load_spectrum,
    model_lambda_at_count,
    save_spectrum,
    smoothed_counting,
)
from sgweyl.spectrum import _bands_1d, _lowest_eigenvalues


class TestConfigValidation:
    def test_rejects_d3(self):
        with pytest.raises(ValidationError):
            DiscretizationConfig(3, 10.0, 64)

    def test_rejects_small_grid(self):
        with pytest.raises(ValidationError):
            DiscretizationConfig(1, 10.0, 4)

    def test_rejects_nonpositive_width(self):
        with pytest.raises(ValidationError):
            DiscretizationConfig(1, 0.0, 64)

    def test_confinement_check(self):
        with pytest.raises(ValidationError, match="confinement"):
            DiscretizationConfig(1, 8.0, 64, lambda_max_target=100.0)
        DiscretizationConfig(1, 300.0, 64, lambda_max_target=100.0)  # fine

    def test_roundtrip_dict(self):
        cfg = DiscretizationConfig(2, 6.0, 48, scheme_order=2, operator="harmonic")
        assert DiscretizationConfig.from_dict(cfg.to_dict()) == cfg


class TestAssembly:
    def test_small_matrix_symmetric(self):
        a = assemble_model_matrix(DiscretizationConfig(1, 1.0, 8))
        assert a.shape == (8, 8)
        assert abs(a - a.T).max() == 0.0

    def test_d2_matrix_symmetric(self):
        a = assemble_model_matrix(DiscretizationConfig(2, 3.0, 12))
        assert a.shape == (144, 144)
        assert abs(a - a.T).max() == 0.0

    def test_bands_match_sparse(self):
        cfg = DiscretizationConfig(1, 5.0, 64)
        diag, sub1, sub2 = _bands_1d(cfg)
        a = assemble_model_matrix(cfg).toarray()
        assert np.allclose(np.diag(a), diag, rtol=0, atol=0)
        assert np.allclose(np.diag(a, -1), sub1[:63], rtol=0, atol=0)
        assert np.allclose(np.diag(a, -2), sub2[:62], rtol=0, atol=0)

    def test_dirichlet_laplacian_oracle(self):
        # unit-weight hook, scheme 2: eigenvalues 1 + (pi k / 2L)^2 + O(h^2)
        cfg = DiscretizationConfig(1, math.pi / 2, 2048, scheme_order=2, operator="unit_weight")
        vals = _lowest_eigenvalues(cfg, 5)
        exact = 1.0 + np.arange(1, 6) ** 2
        assert np.max(np.abs(vals - exact) / exact) < 1e-5

    def test_harmonic_oracle_d1(self):
        cfg = DiscretizationConfig(1, 12.0, 2048, operator="harmonic")
        vals = _lowest_eigenvalues(cfg, 20)
        exact = 2.0 * np.arange(20) + 1.0
        assert np.max(np.abs(vals - exact) / exact) < 1e-3

    def test_harmonic_oracle_d2(self):
        # -Laplacian + |x|^2 in 2d: eigenvalues 2(k1+k2+1)
        cfg = DiscretizationConfig(2, 8.0, 48, operator="harmonic")
        vals = _lowest_eigenvalues(cfg, 6)
        exact = np.array([2.0, 4.0, 4.0, 6.0, 6.0, 6.0])
        assert np.max(np.abs(vals - exact) / exact) < 5e-3

    def test_similarity_with_nonsymmetric_form(self):
        # eigenvalues of the plain product discretization <x>^2 (1 - Lap_h)
        # coincide with the symmetric conjugate up to roundoff
        cfg = DiscretizationConfig(1, 3.0, 96)
        sym_vals = _lowest_eigenvalues(cfg, 96)
        x = cfg.axis()
        lap = assemble_model_matrix(
            DiscretizationConfig(1, 3.0, 96, operator="unit_weight")
        ).toarray()
        q = np.diag(1.0 + x * x) @ lap
        direct = np.sort(np.linalg.eigvals(q).real)
        assert np.max(np.abs(sym_vals - direct) / direct) < 1e-8


class TestBandedBisection:
    def test_against_lapack(self, rng):
        n, count = 1500, 200
        cfg = DiscretizationConfig(1, 20.0, n)
        diag, sub1, sub2 = _bands_1d(cfg)
        ours = _banded.lowest_eigenvalues(diag, sub1, sub2, count)
        ab = np.zeros((3, n))
        ab[0], ab[1, : n - 1], ab[2, : n - 2] = diag, sub1[: n - 1], sub2[: n - 2]
        ref = eig_banded(ab, lower=True, eigvals_only=True, select="i", select_range=(0, count - 1))
        assert np.max(np.abs(ours - ref) / np.abs(ref)) < 1e-10

    def test_indefinite_random_band(self, rng):
        # full spectrum of a random symmetric pentadiagonal vs dense solver
        n = 300
        diag = rng.normal(size=n)
        sub1 = rng.normal(size=n)
        sub2 = rng.normal(size=n)
        sub1[-1] = sub2[-2:] = 0.0
        a = (
            sp.diags([diag, sub1[:-1], sub1[:-1], sub2[:-2], sub2[:-2]], [0, -1, 1, -2, 2])
            .toarray()
        )
        ref = np.linalg.eigvalsh(a)
        ours = _banded.lowest_eigenvalues(diag, sub1, sub2, n)
        assert np.max(np.abs(ours - ref)) < 1e-9 * max(1.0, np.abs(ref).max())

    def test_count_below_matches_rank(self):
        cfg = DiscretizationConfig(1, 5.0, 128)
        diag, sub1, sub2 = _bands_1d(cfg)
        vals = _banded.lowest_eigenvalues(diag, sub1, sub2, 128)
        for sigma in (1.5, 4.0, 30.0):
            expected = int(np.sum(vals < sigma))
            got = int(_banded.count_below(diag, sub1, sub2, np.array([sigma]))[0])
            assert got == expected


class TestComputeSpectrum:
    def test_trust_protocol_harmonic(self):
        cfg = DiscretizationConfig(1, 12.0, 1024, operator="harmonic")
        spec = compute_spectrum(cfg, 20)
        assert spec.trusted_count == 20
        assert np.all(np.diff(spec.eigenvalues) > 0)

    def test_untrusted_tail_detected(self):
        # a deliberately coarse grid cannot certify high modes
        cfg = DiscretizationConfig(1, 40.0, 256, operator="model")
        spec = compute_spectrum(cfg, 200)
        assert 0 < spec.trusted_count < 200

    def test_empty_request(self):
        spec = compute_spectrum(DiscretizationConfig(1, 5.0, 64), 0)
        assert len(spec) == 0 and spec.trusted_count == 0

    def test_count_validation(self):
        with pytest.raises(ValidationError):
            compute_spectrum(DiscretizationConfig(1, 5.0, 64), 100)

    def test_model_positivity(self, model_d1_medium):
        assert np.all(model_d1_medium.eigenvalues >= 1.0 - 1e-6)


class TestCounting:
    def fixture(self):
        return SpectralData(np.array([1.0, 2.0, 3.0]), None, 3)

    def test_examples(self):
        spec = self.fixture()
        assert counting_function(spec, 2.5) == 2
        assert counting_function(spec, 2.0) == 1  # strict inequality
        assert counting_function(spec, 0.5) == 0

    def test_monotone_piecewise_constant(self, model_d1_medium):
        spec = model_d1_medium
        grid = np.linspace(1.0, spec.window_max, 400)
        counts = np.array([counting_function(spec, float(l)) for l in grid])
        assert np.all(np.diff(counts) >= 0)

    def test_jump_equals_multiplicity(self):
        spec = SpectralData(np.array([1.0, 2.0, 2.0, 3.0]), None, 4)
        eps = 1e-9
        assert counting_function(spec, 2.0 + eps) - counting_function(spec, 2.0 - eps) == 2

    def test_out_of_window(self):
        spec = SpectralData(np.array([1.0, 2.0, 3.0]), None, 2)
        with pytest.raises(OutOfWindowError):
            counting_function(spec, 2.5)
        cfg = DiscretizationConfig(1, 12.0, 1024, operator="harmonic")
        computed = compute_spectrum(cfg, 10)
        with pytest.raises(OutOfWindowError):
            counting_function(computed, computed.window_max * 2.0)


class TestSmoothedCounting:
    def test_empty(self):
        spec = SpectralData(np.empty(0), None, 0)
        assert smoothed_counting(spec, 5.0, 0.0) == 0.0

    def test_total_mass(self):
        spec = SpectralData(np.array([1.0]), None, 1)
        assert smoothed_counting(spec, 1.0, 1e9) == pytest.approx(1.0, abs=1e-12)

    def test_concentrates_to_sharp_count(self):
        spec = SpectralData(np.array([1.0, 2.0, 3.0]), None, 3)
        assert smoothed_counting(spec, 1e8, 2.5) == pytest.approx(2.0, abs=1e-12)

    def test_rejects_bad_width(self):
        spec = SpectralData(np.array([1.0]), None, 1)
        with pytest.raises(ValidationError):
            smoothed_counting(spec, 0.0, 0.5)


class TestSerialization:
    def test_round_trip_bit_exact(self, tmp_path, model_d1_medium):
        csv = tmp_path / "spec.csv"
        save_spectrum(model_d1_medium, csv)
        back = load_spectrum(csv)
        assert np.array_equal(back.eigenvalues, model_d1_medium.eigenvalues)
        assert back.trusted_count == model_d1_medium.trusted_count
        assert back.config == model_d1_medium.config

    def test_synthetic_round_trip(self, tmp_path):
        spec = SpectralData(np.array([1.0, math.pi, 1e300 * 1e-290]), None, 3)
        csv = tmp_path / "synthetic.csv"
        save_spectrum(spec, csv)
        back = load_spectrum(csv)
        assert np.array_equal(back.eigenvalues, spec.eigenvalues)
        assert back.config is None


def test_model_lambda_at_count_inverts_law():
    from sgweyl.traces import gamma1_closed, gamma2_closed

    lam = model_lambda_at_count(1, 500.0)
    n = gamma2_closed(1) * lam * math.log(lam) + gamma1_closed(1) * lam
    assert n == pytest.approx(500.0, abs=1e-6)


def test_spectral_data_validation():
    with pytest.raises(ValidationError):
        SpectralData(np.array([2.0, 1.0]), None, 1)
    with pytest.raises(ValidationError):
        SpectralData(np.array([-1.0, 1.0]), None, 1)
    with pytest.raises(ValidationError):
        SpectralData(np.array([1.0]), None, 2)
