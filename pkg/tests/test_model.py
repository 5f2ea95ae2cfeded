import numpy as np
import pytest

from majorana_pt import (
    BLOCK_GRAM,
    ModelParams,
    build_block_transform,
    build_majorana_ring,
    build_ssh,
    decompose_blocks,
    fit_block_scale,
    gamma_ep,
    parity_matrix,
    pt_deviation,
    staggered_signs,
)

# Explicit six-site chains with fully worked spectra.
M1 = np.array(
    [
        [0.25j, 1, 0, 0, 0, 0],
        [1, 0, 2, 0, 0, 0],
        [0, 2, 0, 1, 0, 0],
        [0, 0, 1, 0, 2, 0],
        [0, 0, 0, 2, 0, 1],
        [0, 0, 0, 0, 1, -0.25j],
    ],
    dtype=complex,
)
M2 = np.array(
    [
        [4j, 1, 0, 0, 0, 0],
        [1, 0, 0.5, 0, 0, 0],
        [0, 0.5, 0, 1, 0, 0],
        [0, 0, 1, 0, 0.5, 0],
        [0, 0, 0, 0.5, 0, 1],
        [0, 0, 0, 0, 1, -4j],
    ],
    dtype=complex,
)


class TestGammaEp:
    def test_mu_2_n_6(self):
        assert gamma_ep(2.0, 6) == 0.25

    def test_mu_half_n_6(self):
        assert gamma_ep(0.5, 6) == 4.0

    def test_uniform_chain(self):
        assert gamma_ep(1.0, 8) == 1.0

    @pytest.mark.parametrize("mu", [0.0, -1.0, float("nan")])
    def test_rejects_bad_mu(self, mu):
        with pytest.raises(ValueError):
            gamma_ep(mu, 6)

    @pytest.mark.parametrize("n", [5, 7, 2, 0])
    def test_rejects_bad_n(self, n):
        with pytest.raises(ValueError):
            gamma_ep(2.0, n)


class TestBuildSsh:
    def test_matches_six_site_mu2(self):
        assert np.array_equal(build_ssh(6, 2.0, 0.25), M1)

    def test_matches_six_site_mu_half(self):
        assert np.array_equal(build_ssh(6, 0.5, 4.0), M2)

    def test_hermitian_limit(self):
        h = build_ssh(4, 1.0, 0.0)
        assert np.array_equal(h, h.conj().T)
        assert h[0, 0] == 0
        values = np.sort(np.linalg.eigvalsh(h))
        assert np.allclose(values, -values[::-1], atol=1e-14)

    @pytest.mark.parametrize("n,mu,gamma", [(6, 2.0, 0.25), (12, 0.7, 0.9), (30, 3.0, 0.0)])
    def test_sparsity(self, n, mu, gamma):
        h = build_ssh(n, mu, gamma)
        off = h - np.diag(np.diag(h))
        assert np.count_nonzero(off) == 2 * (n - 1)
        assert np.count_nonzero(np.diag(h)) <= 2

    @pytest.mark.parametrize("n", range(6, 32, 2))
    @pytest.mark.parametrize("mu", [0.3, 0.8, 1.5, 3.0])
    def test_pt_covariance_is_exact(self, n, mu):
        h = build_ssh(n, mu, gamma_ep(mu, n))
        assert pt_deviation(h) == 0.0

    def test_rejects_invalid_parameters(self):
        with pytest.raises(ValueError):
            build_ssh(5, 2.0, 0.1)
        with pytest.raises(ValueError):
            build_ssh(6, -2.0, 0.1)
        with pytest.raises(ValueError):
            build_ssh(6, 2.0, float("inf"))


class TestModelParams:
    def test_pt_defaults(self):
        p = ModelParams(n=6, mu=2.0, gamma=0.25)
        assert p.mu_left == 0.25j
        assert p.mu_right == -0.25j
        assert p.is_pt_configuration
        assert p.is_symmetric_pairing
        assert p.gamma_at_ep() == 0.25

    def test_general_impurities_are_not_pt(self):
        p = ModelParams(n=6, mu=2.0, gamma=0.0, mu_left=0.0, mu_right=2.0)
        assert not p.is_pt_configuration

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(n=5, mu=1.0),
            dict(n=2, mu=1.0),
            dict(n=6, mu=0.0),
            dict(n=6, mu=-1.0),
            dict(n=6, mu=1.0, gamma=-0.5),
            dict(n=6, mu=1.0, t=float("nan")),
        ],
    )
    def test_rejects_invalid(self, kwargs):
        with pytest.raises((ValueError, TypeError)):
            ModelParams(**kwargs)


class TestMajoranaRing:
    def test_hermitian_limit_real_spectrum(self):
        p = ModelParams(n=4, t=1.0, delta=1.0, mu=1.0, gamma=0.0)
        h = build_majorana_ring(p)
        assert h.shape == (8, 8)
        assert np.max(np.abs(h - h.conj().T)) == 0.0
        assert np.max(np.abs(np.linalg.eigvals(h).imag)) < 1e-14

    def test_spectrum_is_scaled_union_of_ssh_pair(self):
        # cross-check against the dense solve of the six-site chain
        p = ModelParams(n=6, mu=2.0, gamma=0.25)
        ring_values = np.linalg.eigvals(build_majorana_ring(p))
        ssh_values = np.linalg.eigvals(M1)
        union = 0.5 * np.concatenate([ssh_values, ssh_values.conj()])
        for z in union:
            assert np.min(np.abs(ring_values - z)) < 1e-7  # EP pairs split at sqrt(eps)

    def test_open_chain_when_left_dimer_removed(self):
        n, t, mu = 6, 1.0, 2.0
        p = ModelParams(n=n, t=t, delta=t, mu=mu, gamma=0.0, mu_left=0.0, mu_right=mu)
        h = build_majorana_ring(p)
        assert h[0, 1] == 0 and h[1, 0] == 0
        # oracle: path 2,3,...,2n,1 with couplings alternating t, mu, ..., t
        couplings = [t if i % 2 == 0 else mu for i in range(2 * n - 1)]
        tri = np.diag(couplings, 1)
        oracle = np.sort(np.linalg.eigvalsh(0.5 * (tri + tri.T)))
        values = np.sort(np.linalg.eigvals(h).real)
        assert np.max(np.abs(np.linalg.eigvals(h).imag)) < 1e-14
        assert np.allclose(values, oracle, atol=1e-12)

    def test_open_chain_has_edge_modes_above_one(self):
        # a 2n-site chain with weak-strong dimerization hosts near-zero levels
        p = ModelParams(n=8, mu=2.0, gamma=0.0, mu_left=0.0, mu_right=2.0)
        values = np.abs(np.linalg.eigvals(build_majorana_ring(p)))
        assert np.sort(values)[1] < 1e-2

    def test_asymmetric_pairing_uniform_ring_hermitian(self):
        p = ModelParams(n=6, t=1.0, delta=0.7, mu=1.3, gamma=0.0,
                        mu_left=1.3, mu_right=1.3)
        h = build_majorana_ring(p)
        assert np.max(np.abs(h - h.conj().T)) == 0.0


class TestBlockTransform:
    def test_first_plus_column_support(self):
        v = build_block_transform(6)
        col = v[:, 0]
        nonzero = np.nonzero(np.abs(col) > 0)[0]
        assert set(nonzero) == {0, 1}  # sites 2 and 2n+3-2 == 1, 0-based rows 1 and 0

    @pytest.mark.parametrize("n", [4, 6, 10, 14])
    def test_gram_constant(self, n):
        v = build_block_transform(n)
        gram = v.conj().T @ v
        assert np.max(np.abs(gram - BLOCK_GRAM * np.eye(2 * n))) < 1e-15

    def test_explicit_inverse_matches_gram_scaling(self):
        v = build_block_transform(8)
        assert np.allclose(np.linalg.inv(v), v.conj().T / BLOCK_GRAM, atol=1e-13)


class TestDecomposeBlocks:
    @pytest.mark.parametrize("n,mu", [(6, 2.0), (6, 0.5), (10, 1.5), (14, 0.5)])
    def test_blocks_are_conjugate_ssh_pair(self, n, mu):
        gamma = gamma_ep(mu, n)
        p = ModelParams(n=n, mu=mu, gamma=gamma)
        ring = build_majorana_ring(p)
        blocks = decompose_blocks(ring, n)
        assert blocks.leakage < 1e-14 * np.max(np.abs(ring))
        norm = np.max(np.abs(ring).sum(axis=1))
        assert blocks.commutator <= 1e-13 * norm**2
        # entrywise: h_plus is half the staggered-sign conjugation of build_ssh
        s = staggered_signs(n)
        reference = 0.5 * (s[:, None] * build_ssh(n, mu, gamma) * s[None, :])
        assert np.max(np.abs(blocks.h_plus - reference)) < 1e-14
        assert np.max(np.abs(blocks.h_minus - blocks.h_plus.conj().T)) < 1e-14

    def test_six_site_block_matches_explicit_matrix(self):
        p = ModelParams(n=6, mu=2.0, gamma=0.25)
        blocks = decompose_blocks(build_majorana_ring(p), 6)
        s = staggered_signs(6)
        assert np.max(np.abs(blocks.h_plus - 0.5 * (s[:, None] * M1 * s[None, :]))) < 1e-15

    def test_fitted_scale_is_half(self):
        p = ModelParams(n=10, mu=0.5, gamma=gamma_ep(0.5, 10))
        blocks = decompose_blocks(build_majorana_ring(p), 10)
        scale = fit_block_scale(blocks.h_plus, 10, 0.5, gamma_ep(0.5, 10))
        assert abs(scale - 0.5) < 1e-12

    def test_hermitian_blocks_at_gamma_zero(self):
        p = ModelParams(n=6, mu=2.0, gamma=0.0)
        blocks = decompose_blocks(build_majorana_ring(p), 6)
        assert np.max(np.abs(blocks.h_plus - blocks.h_plus.conj().T)) < 1e-15

    def test_rejects_non_ring_input(self):
        rng = np.random.default_rng(7)
        noise = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
        with pytest.raises(ValueError):
            decompose_blocks(noise, 6)

    def test_rejects_wrong_shape(self):
        with pytest.raises(ValueError):
            decompose_blocks(np.eye(10), 6)


class TestHelpers:
    def test_parity_matrix_reverses(self):
        p = parity_matrix(4)
        assert np.array_equal(p @ np.array([1, 2, 3, 4.0]), [4, 3, 2, 1])

    def test_staggered_signs_pattern(self):
        assert np.array_equal(staggered_signs(8), [1, 1, -1, -1, 1, 1, -1, -1])

    def test_staggered_conjugation_flips_even_bonds(self):
        n, mu, gamma = 8, 1.7, 0.3
        s = staggered_signs(n)
        flipped = s[:, None] * build_ssh(n, mu, gamma) * s[None, :]
        assert flipped[1, 2] == -mu and flipped[0, 1] == 1.0
        assert flipped[0, 0] == 1j * gamma
