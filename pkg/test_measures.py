import numpy as np
import pytest
from pydantic import ValidationError

from qtradeoff.channels import (
    PauliProbabilities,
    UnitalChannel,
    choi_state,
    choi_state_unital,
    random_rotation,
    uniform_simplex,
)
from qtradeoff.measures import (
    COHERENCE_NORMALIZATION,
    PValues,
    avg_fidelity_mc,
    avg_fidelity_pauli,
    avg_fidelity_unital,
    coherence_sq_bloch,
    corrected_fidelity_pauli,
    corrected_fidelity_unital,
    fibonacci_sphere,
    haar_coherence_normalization,
    lqu_direct,
    lqu_pauli,
    measure_report,
    measure_report_unital,
    p_max_sorted,
    p_max_sorted_array,
    p_values,
    p_values_array,
    quantumness_array,
    quantumness_numerical,
    quantumness_pauli,
    t_values,
    t_values_array,
    w_matrix,
)
from qtradeoff.qcore import SamplerConfig

EXAMPLE = PauliProbabilities(p=[0.4, 0.3, 0.2, 0.1])
CENTER = PauliProbabilities(p=np.full(4, 0.25))
IDENTITY = PauliProbabilities.vertex(0)


@pytest.fixture
def random_p():
    return uniform_simplex(SamplerConfig(seed=123, count=100_000))


# --- P-values ---

def test_p_values_examples():
    assert np.allclose(p_values(IDENTITY).values, 0.0)
    assert np.allclose(p_values(CENTER).values, 1.0)
    assert np.allclose(p_values(EXAMPLE).values, [0.975663, 0.912096, 0.889898], atol=1e-6)
    assert p_values(EXAMPLE).argmax == 0


def test_p_values_rejects_out_of_range():
    with pytest.raises(ValidationError):
        PValues(values=[0.5, 1.1, 0.0])
    with pytest.raises(ValidationError):
        PValues(values=[0.5, 0.5])


def test_p_values_stay_in_unit_interval(random_p):
    pv = p_values_array(random_p)
    assert pv.min() >= 0.0
    assert pv.max() <= 1.0 + 1e-12


def test_p_max_from_sorted_probabilities_matches_max(random_p):
    assert np.array_equal(p_values_array(random_p).max(axis=1), p_max_sorted_array(random_p))
    assert p_max_sorted(EXAMPLE) == pytest.approx(p_values(EXAMPLE).p_max, abs=1e-15)


def test_sharpness_identity_holds_on_random_channels(random_p):
    p_max = p_max_sorted_array(random_p)
    t = t_values_array(random_p)
    rhs = quantumness_array(random_p) + 0.5 * (t[:, 1] ** 2 + t[:, 2] ** 2)
    assert np.abs(1.0 - p_max**2 - rhs).max() <= 1e-12


def test_t_values_of_example_channel():
    t1, t2, t3 = t_values(EXAMPLE)
    assert (t1, t2, t3) == pytest.approx((0.409978, 0.219275, -0.089898), abs=1e-6)
    assert t1 == pytest.approx(2 * (np.sqrt(0.12) - np.sqrt(0.02)), abs=1e-15)
    p_max = p_values(EXAMPLE).p_max
    assert 1 - p_max**2 == pytest.approx(quantumness_pauli(EXAMPLE) + 0.5 * (t2**2 + t3**2), abs=1e-12)
    # sorting makes the values independent of the labelling
    assert t_values(PauliProbabilities(p=[0.1, 0.2, 0.4, 0.3])) == pytest.approx((t1, t2, t3), abs=1e-15)


# --- fidelity ---

@pytest.mark.parametrize(
    "p, fidelity",
    [((1, 0, 0, 0), 1.0), ((0.25, 0.25, 0.25, 0.25), 0.5), ((0.7, 0.3, 0, 0), 0.8)],
)
def test_avg_fidelity_pauli(p, fidelity):
    assert avg_fidelity_pauli(PauliProbabilities(p=p)) == pytest.approx(fidelity, abs=1e-12)


@pytest.mark.parametrize(
    "p, fidelity",
    [((1, 0, 0, 0), 1.0), ((0, 1, 0, 0), 1.0), ((0.1, 0.2, 0.3, 0.4), 0.6)],
)
def test_corrected_fidelity_pauli(p, fidelity):
    p = PauliProbabilities(p=p)
    assert corrected_fidelity_pauli(p) == pytest.approx(fidelity, abs=1e-12)
    assert corrected_fidelity_pauli(p) >= avg_fidelity_pauli(p)


def test_unital_fidelity_reduces_to_pauli_form():
    for p in (IDENTITY, CENTER, EXAMPLE):
        c = UnitalChannel.pauli(p)
        assert avg_fidelity_unital(c) == pytest.approx(avg_fidelity_pauli(p), abs=1e-12)
        assert corrected_fidelity_unital(c) == pytest.approx(corrected_fidelity_pauli(p), abs=1e-12)


def test_avg_fidelity_mc_of_identity_is_exact():
    estimate = avg_fidelity_mc(UnitalChannel.pauli(IDENTITY), SamplerConfig(seed=9, count=1000))
    assert estimate.mean == pytest.approx(1.0, abs=1e-12)
    assert estimate.count == 1000


@pytest.mark.parametrize("p, fidelity", [((0.25, 0.25, 0.25, 0.25), 0.5), ((0.7, 0.3, 0, 0), 0.8)])
def test_avg_fidelity_mc_converges(p, fidelity):
    estimate = avg_fidelity_mc(UnitalChannel.pauli(PauliProbabilities(p=p)), SamplerConfig(seed=42, count=100_000))
    assert estimate.mean == pytest.approx(fidelity, abs=0.005)


def test_avg_fidelity_mc_is_deterministic_and_single_sample_has_no_error_bar():
    c = UnitalChannel.pauli(EXAMPLE)
    cfg = SamplerConfig(seed=4, count=40_000)
    assert avg_fidelity_mc(c, cfg) == avg_fidelity_mc(c, cfg)
    assert avg_fidelity_mc(c, SamplerConfig(seed=4, count=1)).stderr == 0.0


def test_avg_fidelity_mc_agrees_with_closed_form_within_error_bars():
    rng = np.random.default_rng(8)
    for k in range(20):
        c = UnitalChannel.compose(random_rotation(rng), PauliProbabilities(p=rng.dirichlet(np.ones(4))), random_rotation(rng))
        estimate = avg_fidelity_mc(c, SamplerConfig(seed=100 + k, count=20_000))
        assert abs(estimate.mean - avg_fidelity_unital(c)) <= 4 * estimate.stderr + 1e-12


# --- quantumness ---

@pytest.mark.parametrize(
    "p, q",
    [((1, 0, 0, 0), 1.0), ((0.5, 0.5, 0, 0), 0.0), ((0.4, 0.3, 0.2, 0.1), 0.02)],
)
def test_quantumness_pauli(p, q):
    assert quantumness_pauli(PauliProbabilities(p=p)) == pytest.approx(q, abs=1e-12)


def test_quantumness_is_permutation_invariant():
    assert quantumness_pauli(PauliProbabilities(p=[0.1, 0.3, 0.4, 0.2])) == pytest.approx(0.02, abs=1e-12)


def test_haar_normalization_is_two_thirds():
    assert haar_coherence_normalization(SamplerConfig(seed=42, count=100_000)) == pytest.approx(2 / 3, abs=0.01)
    assert COHERENCE_NORMALIZATION == 1.5


def test_fibonacci_sphere_points_are_unit_vectors():
    dirs = fibonacci_sphere(64)
    assert dirs.shape == (64, 3)
    assert np.allclose(np.linalg.norm(dirs, axis=1), 1.0)


def test_coherence_in_rotated_basis():
    assert coherence_sq_bloch([1.0, 0, 0], [0, 0, 1.0]) == pytest.approx(1.0)
    assert coherence_sq_bloch([1.0, 0, 0], [1.0, 0, 0]) == pytest.approx(0.0)


@pytest.mark.parametrize("p, q, tol", [((1, 0, 0, 0), 1.0, 0.03), ((0.25, 0.25, 0.25, 0.25), 0.0, 0.01), ((0.4, 0.3, 0.2, 0.1), 0.02, 0.02)])
def test_quantumness_numerical_examples(p, q, tol):
    c = UnitalChannel.pauli(PauliProbabilities(p=p))
    assert quantumness_numerical(c, SamplerConfig(seed=42, count=50_000), basis_grid=8) == pytest.approx(q, abs=tol)


def test_quantumness_numerical_is_unitarily_invariant():
    rng = np.random.default_rng(21)
    for k in range(10):
        p = PauliProbabilities(p=rng.dirichlet(np.ones(4)))
        c = UnitalChannel.compose(random_rotation(rng), p, random_rotation(rng))
        value = quantumness_numerical(c, SamplerConfig(seed=k, count=20_000), basis_grid=8)
        assert value == pytest.approx(quantumness_pauli(p), abs=0.03)


def test_quantumness_numerical_rejects_coarse_grid():
    with pytest.raises(ValueError):
        quantumness_numerical(UnitalChannel.pauli(EXAMPLE), SamplerConfig(seed=1, count=10), basis_grid=7)


# --- local quantum uncertainty ---

@pytest.mark.parametrize(
    "p, lqu",
    [((1, 0, 0, 0), 1.0), ((0.25, 0.25, 0.25, 0.25), 0.0), ((0.4, 0.3, 0.2, 0.1), 0.024337)],
)
def test_lqu_pauli(p, lqu):
    assert lqu_pauli(PauliProbabilities(p=p)) == pytest.approx(lqu, abs=1e-6)


def test_lqu_direct_examples():
    assert lqu_direct(choi_state(IDENTITY)) == pytest.approx(1.0, abs=1e-9)
    assert lqu_direct(choi_state(CENTER)) == pytest.approx(0.0, abs=1e-9)
    assert lqu_direct(choi_state(EXAMPLE)) == pytest.approx(lqu_pauli(EXAMPLE), abs=1e-9)


def test_w_matrix_of_pauli_channel_is_diagonal_p_values():
    rng = np.random.default_rng(5)
    for _ in range(20):
        p = PauliProbabilities(p=rng.dirichlet(np.ones(4)))
        assert np.allclose(w_matrix(choi_state(p)), np.diag(p_values(p).values), atol=1e-9)


def test_lqu_direct_is_unitarily_invariant():
    rng = np.random.default_rng(6)
    for _ in range(20):
        p = PauliProbabilities(p=rng.dirichlet(np.ones(4)))
        c = UnitalChannel.compose(random_rotation(rng), p, random_rotation(rng))
        assert lqu_direct(choi_state_unital(c)) == pytest.approx(lqu_pauli(p), abs=1e-9)


# --- reports ---

def test_measure_report_of_example_channel():
    report = measure_report(EXAMPLE)
    assert report.avg_fidelity == pytest.approx(0.6)
    assert report.corrected_fidelity == pytest.approx(0.6)
    assert report.quantumness == pytest.approx(0.02)
    assert report.lqu == pytest.approx(0.024337, abs=1e-6)
    assert report.p_max == pytest.approx(0.975663, abs=1e-6)
    assert report.t_values == pytest.approx(t_values(EXAMPLE), abs=1e-15)


def test_measure_report_unital_keeps_invariant_measures():
    rng = np.random.default_rng(3)
    c = UnitalChannel.compose(random_rotation(rng), EXAMPLE, random_rotation(rng))
    report = measure_report_unital(c)
    assert report.quantumness == pytest.approx(0.02)
    assert report.lqu == pytest.approx(0.024337, abs=1e-6)
    assert 1 / 3 <= report.avg_fidelity <= 1.0
