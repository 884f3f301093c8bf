# qtradeoff/workflows/verification_workflow.py
"""Verification suites: algebraic identities, theorem certificates and numerical oracles.

Each check is a pure function of VerifySettings returning a CheckResult with
the observed extremal residual; the workflow fans checks out to worker
threads and reports them in registration order.
"""
from typing import Callable, Dict, List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveInt

from .. import config
from ..channels import (
    PauliProbabilities,
    UnitalChannel,
    Unitary2,
    apply_pauli,
    apply_unital,
    canonical_decompose,
    choi_state,
    choi_state_unital,
    lambdas_from_p,
    p_from_lambdas,
    partial_trace,
    random_rotation,
    rotation_from_unitary,
    uniform_simplex,
    unitary_from_rotation,
)
from ..compat import (
    CompatibilityPolytope,
    criterion_lhs,
    distance_to_polytope_edges,
    ellipsoid_contains,
    ellipsoid_semiaxes,
    is_compatible_pauli,
    is_compatible_unital,
    polytope_contains_array,
    polytope_contains_hull,
    remark1_channels,
    sample_compatible,
    sample_compatible_random,
    sharp_direction_constraints,
    sharpest_measurement,
)
from ..exceptions import UsageError
from ..measures import (
    avg_fidelity_pauli,
    avg_fidelity_mc,
    fibonacci_sphere,
    haar_coherence_normalization,
    lqu_direct,
    lqu_pauli,
    p_values,
    p_values_array,
    quantumness_array,
    quantumness_numerical,
    quantumness_pauli,
    t_values_array,
    w_matrix,
)
from ..qcore import (
    BinaryMeasurement,
    Direction,
    GeneralPovm,
    QubitState,
    SamplerConfig,
    effects,
    generator,
    haar_bloch_vectors,
    random_measurements,
    spawn,
    unsharpness_luders,
    unsharpness_uncertainty,
)
from ..schemas import CheckResult, VerificationReport
from ..tradeoffs import (
    SearchConfig,
    best_fidelity_search,
    best_fidelity_unital_closed,
    best_lqu_search,
    best_lqu_unital_closed,
    best_quantumness_search,
    best_quantumness_unital_closed,
    compatible_candidates,
    counterexample_pm_below_half,
    fidelity_sharpness_residual,
    fidelity_disturbance_lhs,
    fidelity_disturbance_lhs_array,
    quantumness_disturbance_arrays,
)
from .base_workflow import BaseWorkflow

SUITES = ("all", "identities", "theorems", "oracles")

_S_STEPS = np.linspace(0.0, 1.0, 11)
_LQU_ORACLE_CAP = 10_000
_HULL_POINTS_CAP = 1_000
_FIDELITY_CHANNELS = 100
_QUANTUMNESS_CHANNELS = 20
_QUANTUMNESS_SAMPLES = 10_000
_QUANTUMNESS_BASIS_GRID = 32
_SHARP_DIRECTIONS = 20
_PROPERTY_SAMPLES = 1_000
_CHOI_CHANNELS = 200
_ELLIPSOID_CHANNELS = 10_000
_EDGE_SEARCH_CAP = 1_000_000
_INVARIANCE_CHANNELS = 10
_GENERIC_DIRECTION = np.ones(3) / np.sqrt(3.0)


class VerifySettings(BaseModel):
    model_config = ConfigDict(frozen=True)

    seed: int = Field(default=config.DEFAULT_SEED, ge=0, lt=2**64)
    samples: PositiveInt = config.VERIFY_SAMPLES
    search: SearchConfig = Field(default_factory=SearchConfig)

    def sampler(self, index: int, count: int = 0) -> SamplerConfig:
        """Sub-stream `index` of the run seed, so checks never share samples."""
        child = spawn(SamplerConfig(seed=self.seed), index + 1, count=count or self.samples)[index]
        return child


def _result(name: str, observed: float, tolerance: float, passed: bool, detail: str = "") -> CheckResult:
    return CheckResult(name=name, passed=bool(passed), observed=float(observed), tolerance=tolerance, detail=detail)


############################
# IDENTITIES
############################
def check_p_max_quantumness_identity(v: VerifySettings) -> CheckResult:
    p = uniform_simplex(v.sampler(0))
    p_max = p_values_array(p).max(axis=1)
    t = t_values_array(p)
    residual = np.abs(1.0 - p_max ** 2 - quantumness_array(p) - 0.5 * (t[:, 1] ** 2 + t[:, 2] ** 2))
    worst = float(residual.max())
    return _result("identity_p_max_quantumness", worst, 1e-12, worst <= 1e-12, f"{len(p)} simplex samples")


def check_fidelity_sharpness_identity(v: VerifySettings) -> CheckResult:
    worst = max(abs(fidelity_sharpness_residual(float(s))) for s in np.linspace(0.0, 1.0, 101))
    return _result("identity_fidelity_sharpness", worst, 1e-14, worst <= 1e-14, "101 sharpness values")


def check_isotropic_p_values(v: VerifySettings) -> CheckResult:
    worst = 0.0
    for s in np.linspace(0.0, 1.0, 100):
        for q in remark1_channels(float(s)):
            worst = max(worst, float(np.abs(p_values(q).values - s).max()))
    return _result("isotropic_channels_p_values", worst, 1e-10, worst <= 1e-10, "P_i = s for 100 values of s")


def check_unsharpness(v: VerifySettings) -> CheckResult:
    s, dirs = random_measurements(v.sampler(1, count=1000))
    worst = 0.0
    for si, ni in zip(s, dirs):
        povm = GeneralPovm.from_measurement(BinaryMeasurement.along(float(si), ni))
        worst = max(
            worst,
            abs(unsharpness_uncertainty(povm) - (1.0 - si * si)),
            abs(unsharpness_luders(povm) - 0.5 * (1.0 - si * si)),
        )
    return _result("general_povm_unsharpness", worst, 1e-12, worst <= 1e-12, f"{len(s)} random measurements")


def check_lqu_closed_form(v: VerifySettings) -> CheckResult:
    q_slack, lqu_residual = quantumness_disturbance_arrays(uniform_simplex(v.sampler(2)))
    worst = float(lqu_residual.max())
    return _result("identity_lqu_sharpness", worst, 1e-12, worst <= 1e-12, "L + P_max = 1")


def check_canonical_decomposition(v: VerifySettings) -> CheckResult:
    cfg = v.sampler(3, count=min(v.samples, 1000))
    points = uniform_simplex(cfg)
    rng = generator(cfg)
    worst = 0.0
    for p in points:
        channel = UnitalChannel.compose(random_rotation(rng), PauliProbabilities(p=p), random_rotation(rng))
        recovered = canonical_decompose(channel.bloch_matrix)
        worst = max(worst, float(np.abs(recovered.bloch_matrix - channel.bloch_matrix).max()))
        worst = max(worst, abs(quantumness_pauli(recovered.p) - quantumness_pauli(channel.p)))
    return _result("canonical_decomposition", worst, 1e-9, worst <= 1e-9, f"{len(points)} random unital channels")


def check_lambda_round_trip(v: VerifySettings) -> CheckResult:
    p = uniform_simplex(v.sampler(50))
    worst = float(np.abs(p_from_lambdas(lambdas_from_p(p)) - p).max())
    return _result("lambda_round_trip", worst, 1e-14, worst <= 1e-14, f"p -> lambda -> p on {len(p)} samples")


def check_rotation_homomorphism(v: VerifySettings) -> CheckResult:
    cfg = v.sampler(51, count=min(v.samples, _PROPERTY_SAMPLES))
    rng = generator(cfg)
    worst = 0.0
    for _ in range(cfg.count):
        u = unitary_from_rotation(random_rotation(rng))
        w = unitary_from_rotation(random_rotation(rng))
        product = rotation_from_unitary(Unitary2(matrix=u.matrix @ w.matrix)).matrix
        separate = rotation_from_unitary(u).matrix @ rotation_from_unitary(w).matrix
        worst = max(worst, float(np.abs(product - separate).max()))
    return _result("rotation_homomorphism", worst, 1e-10, worst <= 1e-10, f"R(UV) = R(U) R(V) on {cfg.count} pairs")


def check_apply_unital_composition(v: VerifySettings) -> CheckResult:
    cfg = v.sampler(52, count=min(v.samples, _PROPERTY_SAMPLES))
    channel_cfg, state_cfg = spawn(cfg, 2)
    rng = generator(cfg)
    radii = rng.uniform(0.0, 1.0, cfg.count)
    worst = 0.0
    for row, bloch, radius in zip(uniform_simplex(channel_cfg), haar_bloch_vectors(state_cfg), radii):
        p = PauliProbabilities(p=row)
        c = UnitalChannel.compose(random_rotation(rng), p, random_rotation(rng))
        rho = QubitState(bloch=radius * bloch)
        staged = c.r_out.apply(apply_pauli(p, QubitState(bloch=c.r_in.apply(rho.bloch))).bloch)
        worst = max(worst, float(np.linalg.norm(apply_unital(c, rho).bloch - staged)))
    return _result(
        "apply_unital_composition", worst, 1e-10, worst <= 1e-10, f"r_out . E_p . r_in on {cfg.count} states"
    )


def check_choi_marginals(v: VerifySettings) -> CheckResult:
    cfg = v.sampler(53, count=min(v.samples, _CHOI_CHANNELS))
    rng = generator(cfg)
    half = 0.5 * np.eye(2)
    worst = 0.0
    for row in uniform_simplex(cfg):
        p = PauliProbabilities(p=row)
        decorated = UnitalChannel.compose(random_rotation(rng), p, random_rotation(rng))
        for choi in (choi_state(p), choi_state_unital(decorated)):
            for keep in (0, 1):
                worst = max(worst, float(np.abs(partial_trace(choi.matrix, keep) - half).max()))
    return _result("choi_marginals", worst, 1e-12, worst <= 1e-12, f"Pauli and decorated channels, {cfg.count} each")


def check_effects_sum(v: VerifySettings) -> CheckResult:
    s, dirs = random_measurements(v.sampler(54, count=min(v.samples, _PROPERTY_SAMPLES)))
    worst = 0.0
    for si, ni in zip(s, dirs):
        plus, minus = effects(BinaryMeasurement.along(float(si), ni))
        worst = max(worst, float(np.abs(plus + minus - np.eye(2)).max()))
    return _result("effects_sum_to_identity", worst, 1e-15, worst <= 1e-15, f"{len(s)} random measurements")


def check_unsharpness_monotone(v: VerifySettings) -> CheckResult:
    grid = np.linspace(0.0, 1.0, 100)
    povms = [GeneralPovm.from_measurement(BinaryMeasurement.along(float(s), (0.0, 0.6, 0.8))) for s in grid]
    steps = np.concatenate([
        np.diff([unsharpness_uncertainty(m) for m in povms]),
        np.diff([unsharpness_luders(m) for m in povms]),
    ])
    worst = float(steps.max())
    return _result("unsharpness_monotone", worst, 0.0, worst < 0.0, "largest step on a 100-point sharpness grid")


############################
# THEOREMS
############################
def _search_gap(name: str, closed: Callable[[float], float], search, tol: float) -> CheckResult:
    worst_gap, worst_excess = 0.0, -np.inf
    for s in _S_STEPS:
        gap = closed(float(s)) - search(float(s))
        worst_gap = max(worst_gap, gap)
        worst_excess = max(worst_excess, -gap)
    passed = worst_gap <= tol and worst_excess <= 1e-9
    return _result(name, worst_gap, tol, passed, f"largest search excess over closed form {worst_excess:.3g}")


def check_fidelity_search(v: VerifySettings) -> CheckResult:
    search = lambda s: best_fidelity_search(BinaryMeasurement.along(s, (1, 0, 0)), v.search)
    return _search_gap("fidelity_tradeoff_search", best_fidelity_unital_closed, search, 0.02)


def check_quantumness_search(v: VerifySettings) -> CheckResult:
    search = lambda s: best_quantumness_search(BinaryMeasurement.along(s, (1, 0, 0)), v.search)
    return _search_gap("quantumness_tradeoff_search", best_quantumness_unital_closed, search, 0.01)


def check_quantumness_vertices(v: VerifySettings) -> CheckResult:
    worst = 0.0
    for s in _S_STEPS:
        vertices = CompatibilityPolytope(s=float(s)).vertices()
        worst = max(worst, float(np.abs(quantumness_array(vertices) - (1.0 - s * s)).max()))
    return _result("quantumness_vertex_attainment", worst, 1e-12, worst <= 1e-12, "all 12 polytope vertices")


def check_quantumness_generic_direction(v: VerifySettings) -> CheckResult:
    n = np.ones(3) / np.sqrt(3.0)
    worst = -np.inf
    for s in _S_STEPS:
        m = BinaryMeasurement.along(float(s), n)
        worst = max(worst, best_quantumness_search(m, v.search, restrict_to_pauli=True) - (1.0 - s * s))
    return _result("quantumness_generic_direction", worst, 1e-9, worst <= 1e-9, "Pauli channels only")


def check_lqu_search(v: VerifySettings) -> CheckResult:
    search = lambda s: best_lqu_search(BinaryMeasurement.along(s, (1, 0, 0)), v.search)
    return _search_gap("lqu_tradeoff_search", best_lqu_unital_closed, search, 1e-10)


def check_fidelity_disturbance_bound(v: VerifySettings) -> CheckResult:
    p = uniform_simplex(v.sampler(4))
    p = p[p.max(axis=1) >= 0.5]
    worst = float(fidelity_disturbance_lhs_array(p).max()) if len(p) else 0.0
    return _result("fidelity_disturbance_bound", worst, 1.0 + 1e-12, worst <= 1.0 + 1e-12, f"{len(p)} samples with p_m >= 1/2")


def check_fidelity_disturbance_saturation(v: VerifySettings) -> CheckResult:
    a = np.linspace(0.5, 1.0, 101)
    family = np.stack([a, 1.0 - a, np.zeros_like(a), np.zeros_like(a)], axis=1)
    worst = float(np.abs(fidelity_disturbance_lhs_array(family) - 1.0).max())
    return _result("fidelity_disturbance_saturation", worst, 1e-12, worst <= 1e-12, "family (a, 1 - a, 0, 0)")


def check_fidelity_disturbance_counterexample(v: VerifySettings) -> CheckResult:
    lhs = fidelity_disturbance_lhs(counterexample_pm_below_half())
    return _result("fidelity_disturbance_needs_pm_half", lhs, 1.0, lhs > 1.0, "p = (0.4, 0.4, 0.1, 0.1)")


def check_quantumness_disturbance_bound(v: VerifySettings) -> CheckResult:
    q_slack, _ = quantumness_disturbance_arrays(uniform_simplex(v.sampler(5)))
    worst = float(q_slack.min())
    return _result("quantumness_disturbance_bound", worst, -1e-12, worst >= -1e-12, "1 - Q - P_max^2 >= 0")


def check_polytope_membership(v: VerifySettings) -> CheckResult:
    sample = sample_compatible_random(v.sampler(6))
    caps = 0.5 * (1.0 + np.sqrt(np.clip(1.0 - sample.s ** 2, 0.0, None)))
    excess = sample.points.max(axis=1) - caps if len(sample.points) else np.zeros(1)
    worst = float(excess.max())
    return _result(
        "compatible_channels_in_polytope",
        worst,
        1e-12,
        worst <= 1e-12,
        f"{len(sample.points)} compatible triples, acceptance {sample.acceptance_rate:.3f}",
    )


def check_sharpness_bound(v: VerifySettings) -> CheckResult:
    sample = sample_compatible_random(v.sampler(7))
    excess = sample.s - p_values_array(sample.points).max(axis=1) if len(sample.points) else np.zeros(1)
    worst = float(excess.max())
    return _result("sharpness_below_p_max", worst, 1e-12, worst <= 1e-12, f"{len(sample.points)} compatible triples")


def check_hull_equivalence(v: VerifySettings) -> CheckResult:
    points = uniform_simplex(v.sampler(8, count=min(v.samples, _HULL_POINTS_CAP)))
    mismatches = 0
    for s in np.linspace(0.05, 0.95, 10):
        poly = CompatibilityPolytope(s=float(s))
        halfspace = polytope_contains_array(poly, points)
        hull = np.array([polytope_contains_hull(poly, p) for p in points])
        # points within rounding of a facet may land either way
        near_facet = np.abs(points.max(axis=1) - poly.cap) < 1e-9
        mismatches += int(np.sum((halfspace != hull) & ~near_facet))
    return _result("polytope_halfspace_vs_hull", mismatches, 0, mismatches == 0, f"{len(points)} points x 10 sharpness values")


def check_sharpness_tightness(v: VerifySettings) -> CheckResult:
    points = uniform_simplex(v.sampler(9, count=100))
    failures = 0
    for row in points:
        p = PauliProbabilities(p=row)
        best = sharpest_measurement(p)
        if not is_compatible_pauli(p, best).compatible:
            failures += 1
        if best.s + 1e-6 <= 1.0:
            sharper = BinaryMeasurement(s=best.s + 1e-6, direction=best.direction)
            if is_compatible_pauli(p, sharper).compatible:
                failures += 1
    return _result("sharpness_p_max_tight", failures, 0, failures == 0, f"{len(points)} random channels")


def check_sharp_classicality(v: VerifySettings) -> CheckResult:
    dirs = np.vstack([np.eye(3), fibonacci_sphere(_SHARP_DIRECTIONS - 3)])
    worst = 0.0
    for n in dirs:
        points = compatible_candidates(BinaryMeasurement.along(1.0, n), v.search)
        if len(points):
            worst = max(worst, float(quantumness_array(points).max()))
            worst = max(worst, float((1.0 - p_values_array(points).max(axis=1)).max()))
    return _result("sharp_measurement_classical", worst, 0.01, worst <= 0.01, f"{len(dirs)} directions at s = 1")


def check_sharp_geometry(v: VerifySettings) -> CheckResult:
    line = compatible_candidates(BinaryMeasurement.along(1.0, (1, 0, 0)), v.search)
    line_dev = np.maximum(np.abs(line[:, 0] - line[:, 1]), np.abs(line[:, 2] - line[:, 3]))
    centre = compatible_candidates(BinaryMeasurement.along(1.0, np.array([1.0, 1.0, 0.0]) / np.sqrt(2.0)), v.search)
    centre_dev = np.abs(centre - 0.25).max(axis=1)
    worst = float(max(line_dev.max(), centre_dev.max()))
    return _result("sharp_measurement_geometry", worst, 1e-6, worst <= 1e-6, f"{len(line)} line points, {len(centre)} centre points")


def check_compatibility_monotone(v: VerifySettings) -> CheckResult:
    count = min(v.samples, _ELLIPSOID_CHANNELS)
    pv = p_values_array(uniform_simplex(v.sampler(55, count=count)))
    s, dirs = random_measurements(v.sampler(56, count=count))
    compatible = criterion_lhs(pv, s, dirs) <= 1.0 + config.BOUNDARY_TOL
    violations = 0
    for fraction in np.linspace(0.0, 1.0, 10):
        lhs = criterion_lhs(pv[compatible], fraction * s[compatible], dirs[compatible])
        violations += int(np.sum(lhs > 1.0 + config.BOUNDARY_TOL))
    return _result(
        "compatibility_monotone_in_sharpness",
        violations,
        0,
        violations == 0,
        f"{int(compatible.sum())} compatible triples x 10 smaller sharpness values",
    )


def check_sharp_nesting(v: VerifySettings) -> CheckResult:
    dirs = np.vstack([np.eye(3), fibonacci_sphere(_SHARP_DIRECTIONS - 3)])
    violations = checked = 0
    for n in dirs:
        direction = Direction(n=n)
        points = np.array([q.p for q in sharp_direction_constraints(direction).channels()])
        pv = p_values_array(points)
        for s in _S_STEPS:
            violations += int(np.sum(criterion_lhs(pv, float(s), direction.n) > 1.0 + config.BOUNDARY_TOL))
        checked += len(points)
    return _result(
        "sharp_compatible_sets_nested",
        violations,
        0,
        violations == 0,
        f"{checked} channels compatible at s = 1 over {len(dirs)} directions, checked at 11 sharpness values",
    )


def check_edge_touching(v: VerifySettings) -> CheckResult:
    # halfway between the vertices (cap, 1 - cap, 0, 0) and (1 - cap, cap, 0, 0)
    midpoint = np.array([0.5, 0.5, 0.0, 0.0])
    touching, midpoint_ok = 0.0, True
    for s in _S_STEPS:
        m = BinaryMeasurement.along(float(s), (1, 0, 0))
        midpoint_ok &= is_compatible_pauli(PauliProbabilities(p=midpoint), m).compatible
        touching = max(touching, float(distance_to_polytope_edges(CompatibilityPolytope(s=float(s)), midpoint)[0]))
    count = min(10 * v.samples, _EDGE_SEARCH_CAP)
    closest, found = np.inf, 0
    for k, s in enumerate((0.5, 0.85)):
        sample = sample_compatible(s, Direction(n=_GENERIC_DIRECTION), v.sampler(57 + k, count=count))
        found += len(sample.points)
        if len(sample.points):
            closest = min(closest, float(distance_to_polytope_edges(CompatibilityPolytope(s=s), sample.points).min()))
    passed = midpoint_ok and touching <= 1e-12 and closest > 1e-6
    return _result(
        "edge_touching_principal_axis_only",
        min(closest, 1.0),
        1e-6,
        passed,
        f"principal-axis edge distance {touching:.3g}; {found} generic-direction channels out of {2 * count}",
    )


def check_ellipsoid_membership(v: VerifySettings) -> CheckResult:
    cfg = v.sampler(59, count=min(v.samples, _ELLIPSOID_CHANNELS))
    channel_cfg, measurement_cfg = spawn(cfg, 2)
    rng = generator(cfg)
    s, dirs = random_measurements(measurement_cfg)
    mismatches = 0
    for row, si, ni in zip(uniform_simplex(channel_cfg), s, dirs):
        c = UnitalChannel.compose(random_rotation(rng), PauliProbabilities(p=row), random_rotation(rng))
        verdict = is_compatible_unital(c, BinaryMeasurement.along(float(si), ni))
        # points within rounding of the surface may land either way
        if abs(verdict.lhs - 1.0) < 1e-9:
            continue
        axes, rotation = ellipsoid_semiaxes(c)
        mismatches += int(ellipsoid_contains(axes, rotation, si * ni) != verdict.compatible)
    return _result("ellipsoid_matches_criterion", mismatches, 0, mismatches == 0, f"{cfg.count} random unital channels")


############################
# ORACLES
############################
def check_fidelity_mc(v: VerifySettings) -> CheckResult:
    channels = uniform_simplex(v.sampler(10, count=_FIDELITY_CHANNELS))
    children = spawn(v.sampler(43), _FIDELITY_CHANNELS + 1, count=v.samples)
    worst = 0.0
    for row, cfg in zip(channels, children):
        p = PauliProbabilities(p=row)
        estimate = avg_fidelity_mc(UnitalChannel.pauli(p), cfg)
        z = abs(estimate.mean - avg_fidelity_pauli(p)) / max(estimate.stderr, 1e-15)
        worst = max(worst, z)
    identity = avg_fidelity_mc(UnitalChannel.pauli(PauliProbabilities.vertex(0)), children[-1])
    identity_ok = abs(identity.mean - 1.0) <= 1e-12
    return _result(
        "fidelity_monte_carlo",
        worst,
        4.0,
        worst <= 4.0 and identity_ok,
        f"largest deviation in standard errors over {len(channels)} channels; identity {identity.mean:.12g}",
    )


def check_quantumness_oracle(v: VerifySettings) -> CheckResult:
    count = min(v.samples, _QUANTUMNESS_SAMPLES)
    channels = uniform_simplex(v.sampler(11, count=_QUANTUMNESS_CHANNELS))
    worst = 0.0
    for i, row in enumerate(channels):
        p = PauliProbabilities(p=row)
        numeric = quantumness_numerical(UnitalChannel.pauli(p), v.sampler(12 + i, count=count), _QUANTUMNESS_BASIS_GRID)
        worst = max(worst, abs(numeric - quantumness_pauli(p)))
    identity = quantumness_numerical(
        UnitalChannel.pauli(PauliProbabilities.vertex(0)), v.sampler(40, count=count), _QUANTUMNESS_BASIS_GRID
    )
    norm = 1.5 * haar_coherence_normalization(v.sampler(41, count=count))
    passed = worst <= 0.02 and abs(identity - 1.0) <= 0.03 and abs(norm - 1.0) <= 0.03
    return _result(
        "quantumness_numerical",
        worst,
        0.02,
        passed,
        f"identity map {identity:.4f}, normalisation {norm:.4f}",
    )


def check_lqu_oracle(v: VerifySettings) -> CheckResult:
    count = max(10, min(_LQU_ORACLE_CAP, v.samples // 10))
    points = uniform_simplex(v.sampler(42, count=count))
    worst = 0.0
    for row in points:
        p = PauliProbabilities(p=row)
        choi = choi_state(p)
        worst = max(worst, abs(lqu_direct(choi) - lqu_pauli(p)))
        worst = max(worst, float(np.abs(np.diag(w_matrix(choi)) - p_values(p).values).max()))
    return _result("lqu_choi_state", worst, 1e-9, worst <= 1e-9, f"{len(points)} random channels")


def check_unitary_invariance(v: VerifySettings) -> CheckResult:
    cfg = v.sampler(60, count=max(10, min(_PROPERTY_SAMPLES, v.samples // 100)))
    rng = generator(cfg)
    decorate = lambda p: UnitalChannel.from_unitaries(
        unitary_from_rotation(random_rotation(rng)), p, unitary_from_rotation(random_rotation(rng))
    )
    lqu_worst = 0.0
    for row in uniform_simplex(cfg):
        p = PauliProbabilities(p=row)
        lqu_worst = max(lqu_worst, abs(lqu_direct(choi_state_unital(decorate(p))) - lqu_pauli(p)))
    count = min(v.samples, _QUANTUMNESS_SAMPLES)
    q_worst = 0.0
    for i, row in enumerate(uniform_simplex(v.sampler(61, count=_INVARIANCE_CHANNELS))):
        p = PauliProbabilities(p=row)
        numeric = quantumness_numerical(decorate(p), v.sampler(62 + i, count=count), _QUANTUMNESS_BASIS_GRID)
        q_worst = max(q_worst, abs(numeric - quantumness_pauli(p)))
    return _result(
        "unitary_invariance",
        q_worst,
        0.02,
        q_worst <= 0.02 and lqu_worst <= 1e-9,
        f"quantumness on {_INVARIANCE_CHANNELS} decorated channels; LQU deviation {lqu_worst:.3g} on {cfg.count}",
    )


SUITE_CHECKS: Dict[str, List[Tuple[str, Callable[[VerifySettings], CheckResult]]]] = {
    "identities": [
        ("identity_p_max_quantumness", check_p_max_quantumness_identity),
        ("identity_fidelity_sharpness", check_fidelity_sharpness_identity),
        ("identity_lqu_sharpness", check_lqu_closed_form),
        ("isotropic_channels_p_values", check_isotropic_p_values),
        ("general_povm_unsharpness", check_unsharpness),
        ("canonical_decomposition", check_canonical_decomposition),
        ("lambda_round_trip", check_lambda_round_trip),
        ("rotation_homomorphism", check_rotation_homomorphism),
        ("apply_unital_composition", check_apply_unital_composition),
        ("choi_marginals", check_choi_marginals),
        ("effects_sum_to_identity", check_effects_sum),
        ("unsharpness_monotone", check_unsharpness_monotone),
    ],
    "theorems": [
        ("fidelity_tradeoff_search", check_fidelity_search),
        ("quantumness_tradeoff_search", check_quantumness_search),
        ("quantumness_vertex_attainment", check_quantumness_vertices),
        ("quantumness_generic_direction", check_quantumness_generic_direction),
        ("lqu_tradeoff_search", check_lqu_search),
        ("fidelity_disturbance_bound", check_fidelity_disturbance_bound),
        ("fidelity_disturbance_saturation", check_fidelity_disturbance_saturation),
        ("fidelity_disturbance_needs_pm_half", check_fidelity_disturbance_counterexample),
        ("quantumness_disturbance_bound", check_quantumness_disturbance_bound),
        ("compatible_channels_in_polytope", check_polytope_membership),
        ("sharpness_below_p_max", check_sharpness_bound),
        ("polytope_halfspace_vs_hull", check_hull_equivalence),
        ("sharpness_p_max_tight", check_sharpness_tightness),
        ("sharp_measurement_classical", check_sharp_classicality),
        ("sharp_measurement_geometry", check_sharp_geometry),
        ("compatibility_monotone_in_sharpness", check_compatibility_monotone),
        ("sharp_compatible_sets_nested", check_sharp_nesting),
        ("edge_touching_principal_axis_only", check_edge_touching),
        ("ellipsoid_matches_criterion", check_ellipsoid_membership),
    ],
    "oracles": [
        ("fidelity_monte_carlo", check_fidelity_mc),
        ("quantumness_numerical", check_quantumness_oracle),
        ("lqu_choi_state", check_lqu_oracle),
        ("unitary_invariance", check_unitary_invariance),
    ],
}


def checks_for(suite: str) -> List[Tuple[str, Callable[[VerifySettings], CheckResult]]]:
    if suite == "all":
        return [c for name in ("identities", "theorems", "oracles") for c in SUITE_CHECKS[name]]
    if suite not in SUITE_CHECKS:
        raise UsageError(f"unknown suite '{suite}', expected one of {', '.join(SUITES)}")
    return SUITE_CHECKS[suite]


class VerificationWorkflow(BaseWorkflow):
    """Runs a verification suite and collects a VerificationReport."""

    async def run(self, suite: str, settings: VerifySettings) -> VerificationReport:
        checks = checks_for(suite)
        await self.emit_event("verification_started", {"suite": suite, "seed": settings.seed, "samples": settings.samples})

        def execute(entry):
            _, fn = entry
            try:
                return fn(settings), None
            except Exception as e:
                return None, e

        outcomes = await self.map_ordered(execute, checks)
        results = []
        for (name, _), (result, error) in zip(checks, outcomes):
            if error is not None:
                # a crashing check counts as a violation, not a usage error
                await self.handle_error(error, name)
                result = CheckResult(
                    name=name, passed=False, observed=float("nan"), tolerance=0.0,
                    detail=f"raised {type(error).__name__}: {error}",
                )
            results.append(result)
            await self.emit_event("check_completed", result.model_dump())
            if not result.passed:
                self.logger.warning(f"Check {result.name} failed: observed {result.observed} (tolerance {result.tolerance})")

        report = VerificationReport(suite=suite, seed=settings.seed, samples=settings.samples, checks=results)
        self.ctx.set_data("report", report)
        await self.emit_event("verification_completed", {"passed": report.passed, "failures": len(report.failures)})
        return report
