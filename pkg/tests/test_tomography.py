import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrealism import interferometer as itf
from qrealism.qmath import DensityOperator, random_density
from qrealism.tomography import (
    CSV_COLUMNS,
    NoiseModel,
    format_number,
    monte_carlo_realism,
    pauli_expectations,
    perturb,
    project_physical,
    project_simplex,
    reconstruct,
    reports_to_csv,
)

from .conftest import AB

I, X, Y, Z = range(4)


def _trace_oracle(rho, i, j):
    # independent evaluation: explicit Pauli matrices, explicit trace
    s = [np.eye(2), np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.diag([1, -1])]
    return np.trace(rho @ np.kron(s[i], s[j])).real


class TestPauliExpectations:
    def test_maximally_mixed(self):
        c = pauli_expectations(np.eye(4) / 4)
        want = np.zeros((4, 4))
        want[I, I] = 1
        np.testing.assert_allclose(c, want, atol=1e-15)

    def test_zero_zero(self):
        c = pauli_expectations(DensityOperator.from_ket([1, 0, 0, 0], AB))
        want = np.zeros((4, 4))
        want[I, I] = want[Z, I] = want[I, Z] = want[Z, Z] = 1
        np.testing.assert_allclose(c, want, atol=1e-15)

    def test_bell(self, bell):
        c = pauli_expectations(bell)
        assert (c[X, X], c[Y, Y], c[Z, Z]) == pytest.approx((1, -1, 1), abs=1e-15)
        mask = np.ones((4, 4), bool)
        mask[[I, X, Y, Z], [I, X, Y, Z]] = False
        assert np.max(np.abs(c[mask])) <= 1e-15

    def test_matches_trace_oracle(self, rng):
        rho = random_density(AB, rng)
        c = pauli_expectations(rho)
        for i in range(4):
            for j in range(4):
                assert c[i, j] == pytest.approx(_trace_oracle(rho.matrix, i, j), abs=1e-14)

    def test_wrong_dimension(self):
        with pytest.raises(ValueError):
            pauli_expectations(np.eye(2) / 2)


class TestReconstruct:
    def test_roundtrip(self):
        rng = np.random.default_rng(7)
        for k in range(100):
            rho = random_density(AB, rng, rank=(4, 2, 1)[k % 3])
            back = reconstruct(pauli_expectations(rho), AB)
            assert np.max(np.abs(back.matrix - rho.matrix)) <= 1e-12

    def test_identity_only(self):
        c = np.zeros((4, 4))
        c[I, I] = 1
        np.testing.assert_allclose(reconstruct(c).matrix, np.eye(4) / 4, atol=1e-15)

    def test_noisy_pure_state_is_flagged(self):
        c = pauli_expectations(DensityOperator.from_ket([1, 0, 0, 1], AB))
        noise = NoiseModel(0.01, 1, 3)
        flagged = [not reconstruct(perturb(c, noise, k)).is_psd for k in range(20)]
        assert sum(flagged) >= 15
        raw = reconstruct(perturb(c, noise, 0))
        assert abs(np.trace(raw.matrix) - 1) <= 1e-12
        assert np.allclose(raw.matrix, raw.matrix.conj().T)


class TestPerturb:
    def test_zero_sigma(self, bell):
        c = pauli_expectations(bell)
        np.testing.assert_array_equal(perturb(c, NoiseModel(0.0), 5), c)

    def test_deterministic(self, bell):
        c = pauli_expectations(bell)
        n = NoiseModel(0.01, seed=42)
        np.testing.assert_array_equal(perturb(c, n, 3), perturb(c, n, 3))
        assert not np.array_equal(perturb(c, n, 3), perturb(c, n, 4))
        assert not np.array_equal(perturb(c, n, 3), perturb(c, NoiseModel(0.01, seed=43), 3))

    def test_identity_untouched(self):
        c = np.zeros((4, 4))
        c[I, I] = 1
        assert perturb(c, NoiseModel(0.5), 0)[I, I] == 1

    def test_sample_std(self):
        c = np.zeros((4, 4))
        n = NoiseModel(0.01, seed=11)
        draws = np.array([perturb(c, n, k)[X, Y] for k in range(10_000)])
        assert 0.0097 <= draws.std(ddof=1) <= 0.0103

    def test_invalid_noise(self):
        with pytest.raises(ValueError):
            NoiseModel(-0.1)
        with pytest.raises(ValueError):
            NoiseModel(0.01, samples=0)


class TestProjection:
    def test_example_spectrum(self):
        np.testing.assert_allclose(project_simplex([1.02, 0.01, -0.02, -0.01]), [1, 0, 0, 0], atol=1e-15)
        np.testing.assert_allclose(project_physical(np.diag([1.02, 0.01, -0.02, -0.01])).matrix,
                                   np.diag([1, 0, 0, 0]), atol=1e-15)

    def test_physical_spectrum_unchanged(self):
        np.testing.assert_allclose(project_simplex([0.6, 0.4, 0.0, 0.0]), [0.6, 0.4, 0, 0], atol=1e-15)

    def test_simplex_against_qp(self):
        # brute-force oracle: minimise |p - v|^2 over the simplex with SLSQP
        from scipy.optimize import minimize

        rng = np.random.default_rng(3)
        for _ in range(20):
            v = rng.normal(0.25, 0.3, 4)
            res = minimize(lambda p: np.sum((p - v) ** 2), np.full(4, 0.25), method="SLSQP",
                           bounds=[(0, 1)] * 4, constraints={"type": "eq", "fun": lambda p: p.sum() - 1},
                           options={"ftol": 1e-14})
            np.testing.assert_allclose(project_simplex(v), res.x, atol=1e-6)

    def test_physical_unchanged(self, rng):
        rho = random_density(AB, rng)
        assert np.max(np.abs(project_physical(rho).matrix - rho.matrix)) <= 1e-12

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.floats(0.0, 0.2))
    def test_idempotent_and_contractive(self, seed, sigma):
        rng = np.random.default_rng(seed)
        c = perturb(pauli_expectations(random_density(AB, rng, rank=1)), NoiseModel(sigma, seed=seed), 0)
        raw = reconstruct(c, AB)
        once = project_physical(raw)
        twice = project_physical(once)
        assert once.is_psd
        assert abs(np.trace(once.matrix) - 1) <= 1e-12
        assert np.max(np.abs(twice.matrix - once.matrix)) <= 1e-12
        d1 = np.linalg.norm(once.matrix - raw.matrix)
        d2 = np.linalg.norm(twice.matrix - raw.matrix)
        assert d2 <= d1 + 1e-12


class TestMonteCarlo:
    def test_zero_noise(self):
        rep = monte_carlo_realism("qcre", itf.CircuitParams(1.1, 0.4), NoiseModel(0.0, 4, 0))
        for q, s in rep.stats.items():
            assert s.std == 0
            assert s.mean == pytest.approx(rep.ideal[q], abs=1e-12)

    def test_ideal_values(self):
        rep = monte_carlo_realism("qcre", itf.CircuitParams(np.pi / 2, 0.0), NoiseModel(0.0, 1, 0))
        assert rep.ideal["wave_realism"] == pytest.approx(0.188722, abs=1e-6)
        assert rep.ideal["visibility"] == pytest.approx(0.5, abs=1e-9)
        assert rep.ideal["p0"] == pytest.approx(0.75, abs=1e-12)

    @pytest.mark.parametrize("alpha", [0.0, np.pi / 3, np.pi / 2, np.pi])
    def test_qdce_envelope(self, alpha):
        rep = monte_carlo_realism("qdce", itf.CircuitParams(alpha, 0.0), NoiseModel(0.01, 100, 0))
        assert rep["wave_realism"].mean >= 0.95
        assert rep["particle_realism"].mean <= 0.1
        assert rep["wave_realism"].std > 0

    def test_ranges(self):
        rep = monte_carlo_realism("qcre", itf.CircuitParams(0.0, 0.0), NoiseModel(0.05, 30, 2))
        for s in rep.stats.values():
            assert 0 <= s.mean <= 1
            assert s.std >= 0

    def test_converges_as_noise_shrinks(self):
        p = itf.CircuitParams(np.pi / 2, 0.0)
        errs = []
        for sigma in (0.02, 0.01, 0.005):
            rep = monte_carlo_realism("qcre", p, NoiseModel(sigma, 100, 0))
            errs.append(abs(rep["wave_realism"].mean - rep.ideal["wave_realism"]))
        assert errs[0] > errs[1] > errs[2]

    def test_deterministic(self):
        p = itf.CircuitParams(0.7, 1.3)
        a = monte_carlo_realism("qcre", p, NoiseModel(0.01, 20, 9))
        b = monte_carlo_realism("qcre", p, NoiseModel(0.01, 20, 9))
        assert a == b
        assert reports_to_csv([a]) == reports_to_csv([b])


class TestCsv:
    def test_format_number(self):
        assert format_number(0.1 + 0.2) == "0.3"
        assert format_number(-3e-14) == "0"
        assert format_number(1 / 3) == "0.333333333333"
        assert format_number(2.0) == "2"

    def test_layout(self):
        rep = monte_carlo_realism("qcre", itf.CircuitParams(np.pi / 2, 0.0), NoiseModel(0.0, 2, 5))
        lines = reports_to_csv([rep]).splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 5
        first = lines[1].split(",")
        assert first[2] == "wave_realism"
        assert first[-2:] == ["2", "5"]
        assert float(first[3]) == pytest.approx(0.188722, abs=1e-6)
