import numpy as np
import pytest
from pydantic import ValidationError

from qtradeoff.qcore import (
    BinaryMeasurement,
    Direction,
    GeneralPovm,
    QubitState,
    SamplerConfig,
    effects,
    eigensystem_hermitian,
    haar_bloch_vectors,
    l1_coherence,
    measure_probabilities,
    operator_norm,
    random_measurements,
    sample_haar_pure,
    spawn,
    sqrtm_psd,
    unsharpness_luders,
    unsharpness_uncertainty,
)


def _povm(s, n=(0.0, 0.0, 1.0)):
    return GeneralPovm.from_measurement(BinaryMeasurement.along(s, n))


def _random_hermitian(rng, n):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (a + a.conj().T)


# --- measurements ---

def test_effects_sharp_z_measurement_is_projective():
    plus, minus = effects(BinaryMeasurement.along(1.0, (0, 0, 1)))
    assert np.allclose(plus, np.diag([1, 0]), atol=1e-15)
    assert np.allclose(minus, np.diag([0, 1]), atol=1e-15)


def test_effects_trivial_measurement_is_half_identity():
    plus, minus = effects(BinaryMeasurement.along(0.0, (0.6, 0.8, 0.0)))
    assert np.allclose(plus, np.eye(2) / 2)
    assert np.allclose(minus, np.eye(2) / 2)


def test_effects_unsharp_x_measurement():
    plus, minus = effects(BinaryMeasurement.along(0.85, (1, 0, 0)))
    assert np.allclose(plus, 0.5 * np.array([[1, 0.85], [0.85, 1]]), atol=1e-15)
    assert np.allclose(plus + minus, np.eye(2), atol=1e-15)
    assert np.trace(plus).real == pytest.approx(1.0)


def test_measure_probabilities():
    m = BinaryMeasurement.along(0.85, (1, 0, 0))
    plus, minus = measure_probabilities(m, QubitState(bloch=[1, 0, 0]))
    assert plus == pytest.approx(0.925, abs=1e-12)
    assert minus == pytest.approx(0.075, abs=1e-12)

    eigen = measure_probabilities(BinaryMeasurement.along(1.0, (0, 0, 1)), QubitState(bloch=[0, 0, 1]))
    assert eigen == pytest.approx((1.0, 0.0), abs=1e-12)
    noisy = measure_probabilities(BinaryMeasurement.along(0.0, (0, 0, 1)), QubitState(bloch=[0.3, 0.1, 0.2]))
    assert noisy == pytest.approx((0.5, 0.5))


@pytest.mark.parametrize("s, uncertainty, luders", [(1.0, 0.0, 0.0), (0.0, 1.0, 0.5), (0.6, 0.64, 0.32)])
def test_unsharpness_of_binary_measurements(s, uncertainty, luders):
    povm = _povm(s, (0.0, 0.6, 0.8))
    assert unsharpness_uncertainty(povm) == pytest.approx(uncertainty, abs=1e-12)
    assert unsharpness_luders(povm) == pytest.approx(luders, abs=1e-12)


def test_unsharpness_on_random_measurements():
    s, dirs = random_measurements(SamplerConfig(seed=3, count=50))
    for si, ni in zip(s, dirs):
        povm = _povm(float(si), ni)
        assert unsharpness_uncertainty(povm) == pytest.approx(1 - si * si, abs=1e-12)
        assert unsharpness_luders(povm) == pytest.approx(0.5 * (1 - si * si), abs=1e-12)


def test_unsharpness_decreases_with_sharpness():
    grid = np.linspace(0.0, 1.0, 100)
    povms = [_povm(float(s), (0.48, 0.6, 0.64)) for s in grid]
    uncertainty = np.array([unsharpness_uncertainty(p) for p in povms])
    luders = np.array([unsharpness_luders(p) for p in povms])
    assert np.all(np.diff(uncertainty) < 0)
    assert np.all(np.diff(luders) < 0)
    assert uncertainty[-1] == pytest.approx(0.0, abs=1e-12)
    assert luders[0] == pytest.approx(0.5, abs=1e-12)


def test_general_povm_rejects_effects_not_summing_to_identity():
    with pytest.raises(ValidationError):
        GeneralPovm(effects=[np.diag([1.0, 0.0]), np.diag([0.0, 0.5])])


def test_general_povm_rejects_negative_effect():
    with pytest.raises(ValidationError):
        GeneralPovm(effects=[np.diag([1.2, 0.0]), np.diag([-0.2, 1.0])])


def test_general_povm_three_outcomes():
    trine = [np.eye(2) / 3.0] * 3
    povm = GeneralPovm(effects=trine)
    assert povm.dimension == 2
    assert unsharpness_luders(povm) == pytest.approx(1 - 3 / 9)


# --- value types ---

def test_direction_renormalises_small_deviation():
    d = Direction(n=[1 + 5e-7, 0, 0])
    assert np.linalg.norm(d.n) == pytest.approx(1.0, abs=1e-15)
    assert d.principal_axis == 0


def test_direction_rejects_non_unit_vector():
    with pytest.raises(ValidationError):
        Direction(n=[2, 0, 0])


def test_direction_principal_axis_is_none_for_generic_vector():
    assert Direction(n=np.ones(3) / np.sqrt(3)).principal_axis is None


def test_qubit_state_rejects_bloch_vector_outside_ball():
    with pytest.raises(ValidationError):
        QubitState(bloch=[1.0, 0.1, 0.0])


def test_qubit_state_density_matrix_round_trip():
    state = QubitState(bloch=[0.3, -0.2, 0.5])
    rho = state.density_matrix()
    assert np.trace(rho).real == pytest.approx(1.0)
    assert np.allclose(QubitState.from_density_matrix(rho).bloch, state.bloch)


def test_measurement_rejects_sharpness_above_one():
    with pytest.raises(ValidationError):
        BinaryMeasurement.along(1.1, (0, 0, 1))


def test_sampler_config_validation():
    with pytest.raises(ValidationError):
        SamplerConfig(seed=-1, count=1)
    with pytest.raises(ValidationError):
        SamplerConfig(seed=1, count=0)


# --- sampling ---

def test_haar_stream_is_deterministic_and_normalised():
    cfg = SamplerConfig(seed=42, count=1)
    first = list(sample_haar_pure(cfg))
    again = list(sample_haar_pure(cfg))
    assert len(first) == 1
    assert np.linalg.norm(first[0].bloch) == pytest.approx(1.0, abs=1e-12)
    assert np.array_equal(first[0].bloch, again[0].bloch)


def test_haar_stream_is_centred():
    r = haar_bloch_vectors(SamplerConfig(seed=42, count=100_000))
    assert np.all(np.abs(r.mean(axis=0)) <= 0.013)
    assert np.allclose(np.linalg.norm(r, axis=1), 1.0, atol=1e-12)


def test_spawn_gives_distinct_reproducible_children():
    cfg = SamplerConfig(seed=7, count=10)
    children = spawn(cfg, 4)
    assert len({c.seed for c in children}) == 4
    assert [c.seed for c in children] == [c.seed for c in spawn(cfg, 4)]
    assert all(c.count == 10 for c in children)
    assert spawn(cfg, 2, count=3)[0].count == 3


# --- linear algebra ---

def test_eigensystem_matches_numpy_on_random_hermitian_matrices():
    rng = np.random.default_rng(0)
    for n in (2, 3, 4):
        for _ in range(5):
            a = _random_hermitian(rng, n)
            values, u = eigensystem_hermitian(a)
            assert np.all(np.diff(values) <= 1e-12)
            assert np.allclose(values, np.linalg.eigvalsh(a)[::-1], atol=1e-10)
            assert np.allclose(u.conj().T @ u, np.eye(n), atol=1e-10)
            assert np.allclose(a @ u, u * values, atol=1e-10)


def test_eigensystem_handles_degenerate_spectrum():
    rng = np.random.default_rng(1)
    q, _ = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
    a = q @ np.diag([2.0, 2.0, -1.0, -1.0]) @ q.conj().T
    values, u = eigensystem_hermitian(a)
    assert np.allclose(values, [2, 2, -1, -1], atol=1e-10)
    assert np.allclose(u.conj().T @ u, np.eye(4), atol=1e-10)
    assert np.allclose(a @ u, u * values, atol=1e-10)


def test_eigensystem_of_identity():
    values, u = eigensystem_hermitian(np.eye(3))
    assert np.allclose(values, 1.0)
    assert np.allclose(u.conj().T @ u, np.eye(3), atol=1e-12)


def test_eigensystem_rejects_non_hermitian_input():
    with pytest.raises(ValueError):
        eigensystem_hermitian(np.array([[0, 1], [0, 0]], dtype=complex))


def test_sqrtm_psd_squares_back():
    rng = np.random.default_rng(2)
    b = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    a = b @ b.conj().T
    root = sqrtm_psd(a)
    assert np.allclose(root @ root, a, atol=1e-9)


def test_sqrtm_psd_rejects_indefinite_matrix():
    with pytest.raises(ValueError):
        sqrtm_psd(np.diag([1.0, -0.5]))


def test_operator_norm_and_coherence():
    assert operator_norm(np.diag([0.5, -2.0])) == pytest.approx(2.0)
    plus = QubitState(bloch=[1, 0, 0]).density_matrix()
    assert l1_coherence(plus) == pytest.approx(1.0)
    assert l1_coherence(np.eye(2) / 2) == pytest.approx(0.0)
