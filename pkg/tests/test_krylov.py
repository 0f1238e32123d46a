import numpy as np
import pytest

from conftest import assert_lanczos_structure
from kchaos import (
    ComplexityCurve,
    DegenerateSpectrumError,
    NumericalError,
    StateVector,
    build_goe,
    build_ising_full,
    complexity_curve,
    complexity_values,
    default_time_grid,
    eigendecompose,
    hamiltonian_from_matrix,
    krylov_amplitudes,
    lanczos_full_orth,
    parity_basis,
    project_to_sector,
    saturation,
    state_all_up,
    state_eigenstate,
    state_random,
    state_uniform_eigenbasis,
    tight_binding_propagate,
    time_average_complexity,
)


def two_level():
    ham = hamiltonian_from_matrix(np.diag([0.0, 1.0]))
    spec = eigendecompose(ham)
    psi = StateVector(np.array([1.0, 1.0]) / np.sqrt(2))
    return ham, spec, psi


class TestLanczos:
    def test_two_level_hand_recursion(self):
        # a_0 = 1/2, candidate (H-1/2)psi has norm 1/2, K_1 = (-1,1)/sqrt2
        ham, spec, psi = two_level()
        lan = lanczos_full_orth(ham, psi, spec=spec)
        assert np.allclose(lan.a, [0.5, 0.5], atol=1e-15)
        assert np.allclose(lan.b, [0.5], atol=1e-15)
        assert np.allclose(lan.basis[:, 1], [-1, 1] / np.sqrt(2))
        assert lan.krylov_dim == 2 and not lan.halted_early

    def test_eigenstate_halts_immediately(self):
        ham = hamiltonian_from_matrix(np.diag([0.0, 1.0]))
        spec = eigendecompose(ham)
        psi = StateVector(np.array([1.0, 0.0]))
        lan = lanczos_full_orth(ham, psi, spec=spec)
        assert lan.krylov_dim == 1
        assert lan.a.shape == (1,) and lan.b.shape == (0,)
        assert lan.halted_early and lan.halt_index == 1

    def test_structure_on_random_matrices(self):
        for seed in (0, 1, 2):
            ham = build_goe(48, seed)
            spec = eigendecompose(ham)
            psi = state_random(48, 100 + seed)
            lan = lanczos_full_orth(ham, psi, spec=spec)
            assert_lanczos_structure(ham, spec, lan)

    def test_structure_on_halted_run(self):
        # state supported on four eigenvectors spans a 4-dim invariant
        # subspace; roundoff leakage stays below the halt tolerance only for
        # small supports, so this probes genuine early breakdown
        ham = build_goe(24, 5)
        spec = eigendecompose(ham)
        coeffs = np.zeros(24)
        coeffs[:4] = np.random.default_rng(8).standard_normal(4)
        psi = StateVector(spec.eigenvectors @ (coeffs / np.linalg.norm(coeffs)))
        lan = lanczos_full_orth(ham, psi, spec=spec)
        assert lan.krylov_dim == 4 and lan.halted_early
        assert_lanczos_structure(ham, spec, lan, expect_full=False)

    def test_rejects_unnormalized(self):
        ham, spec, _ = two_level()
        with pytest.raises(ValueError, match="normalized"):
            lanczos_full_orth(ham, StateVector(np.array([1.0, 1.0])), spec=spec)

    def test_degeneracy_gate(self):
        ham = hamiltonian_from_matrix(np.diag([1.0, 1.0, 2.0]))
        spec = eigendecompose(ham)
        psi = state_random(3, 0)
        with pytest.raises(DegenerateSpectrumError):
            lanczos_full_orth(ham, psi, spec=spec)
        lan = lanczos_full_orth(ham, psi, spec=spec, allow_degenerate=True)
        assert lan.krylov_dim == 2  # two distinct eigenvalues reachable

    def test_orthogonality_check_enforced(self):
        # any finite-precision run carries ~1e-15 Gram residual, so an
        # absurdly tight tolerance must trip the post-run check
        from kchaos import OrthogonalityLossError

        ham = build_goe(32, 3)
        spec = eigendecompose(ham)
        psi = state_random(32, 2)
        with pytest.raises(OrthogonalityLossError):
            lanczos_full_orth(ham, psi, spec=spec, ortho_tol=1e-17)

    def test_complex_seed_supported(self):
        ham = build_goe(16, 9)
        spec = eigendecompose(ham)
        rng = np.random.default_rng(10)
        v = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        psi = StateVector(v / np.linalg.norm(v))
        lan = lanczos_full_orth(ham, psi, spec=spec)
        assert lan.krylov_dim == 16
        assert_lanczos_structure(ham, spec, lan)


class TestAmplitudes:
    def test_localized_at_time_zero(self):
        ham, spec, psi = two_level()
        lan = lanczos_full_orth(ham, psi, spec=spec)
        amps = krylov_amplitudes(spec, lan, psi, np.array([0.0]))
        assert np.allclose(amps[:, 0], [1.0, 0.0], atol=1e-14)

    def test_two_level_closed_form(self):
        ham, spec, psi = two_level()
        lan = lanczos_full_orth(ham, psi, spec=spec)
        ts = np.linspace(0.0, 12.0, 97)
        amps = krylov_amplitudes(spec, lan, psi, ts)
        assert np.allclose(amps[0], (1 + np.exp(-1j * ts)) / 2, atol=1e-14)
        assert np.allclose(amps[1], (-1 + np.exp(-1j * ts)) / 2, atol=1e-14)

    def test_unitarity_ising(self):
        basis = parity_basis(6, "even")
        ham = project_to_sector(build_ising_full(6, 1.02), basis)
        spec = eigendecompose(ham)
        psi = state_all_up(basis)
        lan = lanczos_full_orth(ham, psi, spec=spec)
        ts = np.random.default_rng(3).uniform(0.0, 50.0, 100)
        amps = krylov_amplitudes(spec, lan, psi, ts)
        norms = np.sum(np.abs(amps) ** 2, axis=0)
        assert np.max(np.abs(norms - 1.0)) <= 1e-10

    def test_wrong_seed_rejected(self):
        ham, spec, psi = two_level()
        lan = lanczos_full_orth(ham, psi, spec=spec)
        other = StateVector(np.array([0.0, 1.0]))
        with pytest.raises(ValueError, match="seed"):
            krylov_amplitudes(spec, lan, other, np.array([0.0]))


class TestTightBinding:
    def test_two_level_closed_form(self):
        ham, spec, psi = two_level()
        lan = lanczos_full_orth(ham, psi, spec=spec)
        times, out = tight_binding_propagate(lan, 10.0, 1e-3)
        assert np.max(np.abs(out[0] - (1 + np.exp(-1j * times)) / 2)) < 1e-6
        assert np.max(np.abs(out[1] - (-1 + np.exp(-1j * times)) / 2)) < 1e-6

    def test_norm_conserved(self):
        ham, spec, psi = two_level()
        lan = lanczos_full_orth(ham, psi, spec=spec)
        _, out = tight_binding_propagate(lan, 10.0, 1e-3)
        assert np.max(np.abs(np.sum(np.abs(out) ** 2, axis=0) - 1.0)) < 1e-6

    def test_oversized_step_suggests_dt(self):
        ham = build_goe(24, 2)
        spec = eigendecompose(ham)
        psi = state_random(24, 1)
        lan = lanczos_full_orth(ham, psi, spec=spec)
        with pytest.raises(NumericalError, match="dt"):
            tight_binding_propagate(lan, 20.0, 0.5)

    @pytest.mark.parametrize("dim,seed", [(16, 0), (40, 1), (64, 2)])
    def test_matches_spectral_method(self, dim, seed):
        ham = build_goe(dim, seed)
        spec = eigendecompose(ham)
        psi = state_random(dim, 10 + seed)
        lan = lanczos_full_orth(ham, psi, spec=spec)
        dt = min(1e-3, 0.05 / spec.spectral_range)
        times, ode = tight_binding_propagate(lan, 5.0, dt)
        spectral = krylov_amplitudes(spec, lan, psi, times)
        assert np.max(np.abs(ode - spectral)) < 1e-6


class TestComplexity:
    def test_two_level_curve(self):
        ham, spec, psi = two_level()
        lan = lanczos_full_orth(ham, psi, spec=spec)
        ts = np.linspace(0.0, 2 * np.pi, 65)
        curve = complexity_curve(krylov_amplitudes(spec, lan, psi, ts), ts)
        assert np.allclose(curve.values, (1 - np.cos(ts)) / 2, atol=1e-14)
        at_pi = complexity_curve(krylov_amplitudes(spec, lan, psi, np.array([np.pi])), [np.pi])
        assert at_pi.values[0] == pytest.approx(1.0, abs=1e-14)

    def test_zero_at_time_zero_and_bounded(self):
        ham = build_goe(20, 4)
        spec = eigendecompose(ham)
        psi = state_random(20, 5)
        lan = lanczos_full_orth(ham, psi, spec=spec)
        ts = np.linspace(0.0, 30.0, 300)
        curve = complexity_curve(krylov_amplitudes(spec, lan, psi, ts), ts)
        assert curve.values[0] == pytest.approx(0.0, abs=1e-20)
        assert np.all(curve.values <= lan.krylov_dim - 1)
        assert np.all(curve.values >= 0)

    def test_chunked_matches_direct(self):
        ham = build_goe(20, 4)
        spec = eigendecompose(ham)
        psi = state_random(20, 5)
        lan = lanczos_full_orth(ham, psi, spec=spec)
        ts = np.linspace(0.0, 30.0, 1001)
        direct = complexity_curve(krylov_amplitudes(spec, lan, psi, ts), ts)
        chunked = complexity_values(spec, lan, psi, ts, chunk_size=100)
        # chunk width changes BLAS summation order, so exact equality is not
        # guaranteed, only agreement at rounding level
        assert np.allclose(direct.values, chunked.values, rtol=0, atol=1e-12)


class TestSaturation:
    def test_eigenstate_zero(self, goe32):
        ham, spec = goe32
        psi = state_eigenstate(spec, 11)
        lan = lanczos_full_orth(ham, psi, spec=spec)
        rep = saturation(spec, lan, psi)
        assert rep.c_bar == 0.0
        assert rep.q0n[0] == pytest.approx(1.0, abs=1e-12)

    def test_uniform_exact(self, goe32):
        ham, spec = goe32
        psi = state_uniform_eigenbasis(spec)
        lan = lanczos_full_orth(ham, psi, spec=spec)
        rep = saturation(spec, lan, psi)
        assert rep.c_bar == pytest.approx(15.5, rel=1e-12)
        assert rep.c_bar_normalized == pytest.approx(1.0, rel=1e-12)

    def test_matches_time_average_small(self):
        # brute-force oracle: trapezoidal average of the actual curve
        for seed in range(3):
            ham = build_goe(3, 60 + seed)
            spec = eigendecompose(ham)
            psi = state_random(3, 70 + seed)
            lan = lanczos_full_orth(ham, psi, spec=spec)
            rep = saturation(spec, lan, psi)
            mean_spacing = spec.spectral_range / (spec.dim - 1)
            horizon = 1e4 / mean_spacing
            ts = np.arange(0.0, horizon, 0.2 / spec.spectral_range)
            curve = complexity_values(spec, lan, psi, ts)
            avg = time_average_complexity(curve, horizon)
            assert abs(avg - rep.c_bar) / rep.c_bar < 0.01

    def test_q0n_marginals(self, goe32):
        ham, spec = goe32
        psi = state_random(32, 8)
        lan = lanczos_full_orth(ham, psi, spec=spec)
        rep = saturation(spec, lan, psi)
        assert np.sum(rep.q0n) == pytest.approx(1.0, abs=1e-10)
        assert np.all(rep.q0n >= 0)
        overlaps = lan.basis.T @ spec.eigenvectors
        assert np.allclose(np.sum(overlaps**2, axis=0), 1.0, atol=1e-10)

    def test_phase_invariance(self, goe32):
        # re-phasing eigenvectors and a global phase on psi0 change nothing
        ham, spec = goe32
        psi = state_random(32, 9)
        lan = lanczos_full_orth(ham, psi, spec=spec)
        base = saturation(spec, lan, psi).c_bar
        signs = np.random.default_rng(5).choice([-1.0, 1.0], size=32)
        flipped = type(spec)(
            eigenvalues=spec.eigenvalues,
            eigenvectors=spec.eigenvectors * signs[None, :],
            min_spacing=spec.min_spacing,
            near_degenerate=spec.near_degenerate,
            degeneracy_tol=spec.degeneracy_tol,
        )
        assert saturation(flipped, lan, psi).c_bar == pytest.approx(base, rel=1e-12)
        rephased = StateVector(psi.amplitudes * np.exp(1j * 0.73))
        lan2 = lanczos_full_orth(ham, rephased, spec=spec)
        assert saturation(spec, lan2, rephased).c_bar == pytest.approx(base, rel=1e-10)

    def test_degenerate_gate(self):
        ham = hamiltonian_from_matrix(np.diag([1.0, 1.0, 2.0]))
        spec = eigendecompose(ham)
        psi = state_random(3, 0)
        lan = lanczos_full_orth(ham, psi, spec=spec, allow_degenerate=True)
        with pytest.raises(DegenerateSpectrumError):
            saturation(spec, lan, psi)


class TestTimeAverage:
    def test_cosine_oracle(self):
        ts = np.arange(0.0, 2 * np.pi * 1000 + 1e-3, 1e-3)
        curve = ComplexityCurve(times=ts, values=(1 - np.cos(ts)) / 2)
        assert time_average_complexity(curve, ts[-1]) == pytest.approx(0.5, abs=1e-3)

    def test_constant_curve(self):
        ts = np.linspace(0.0, 10.0, 11)
        curve = ComplexityCurve(times=ts, values=np.full(11, 3.25))
        assert time_average_complexity(curve, 10.0) == pytest.approx(3.25, rel=1e-14)

    def test_converges_to_saturation_ising(self):
        basis = parity_basis(6, "even")
        ham = project_to_sector(build_ising_full(6, 1.02), basis)
        spec = eigendecompose(ham)
        psi = state_all_up(basis)
        lan = lanczos_full_orth(ham, psi, spec=spec)
        rep = saturation(spec, lan, psi)
        horizon = 1e3 * spec.dim / spec.spectral_range
        ts = np.arange(0.0, horizon, 0.2 / spec.spectral_range)
        curve = complexity_values(spec, lan, psi, ts)
        avg = time_average_complexity(curve, horizon, fastest_phase=spec.spectral_range)
        assert abs(avg - rep.c_bar) / rep.c_bar < 0.01

    def test_undersampled_warning(self):
        ts = np.linspace(0.0, 100.0, 11)
        curve = ComplexityCurve(times=ts, values=np.ones(11))
        with pytest.warns(UserWarning, match="undersample"):
            time_average_complexity(curve, 100.0, fastest_phase=50.0)


def test_default_time_grid_shape():
    grid = default_time_grid(10.0, 64, n_points=100)
    assert grid[0] == 0.0
    assert np.all(np.diff(grid) > 0)
    heisenberg = 2 * np.pi * 63 / 10.0
    assert grid[-1] == pytest.approx(10 * heisenberg)
