import math

import numpy as np
import pytest

from qtradeoff.exceptions import UsageError
from qtradeoff.schemas import CheckResult
from qtradeoff.tradeoffs import SearchConfig
from qtradeoff.workflows import BaseWorkflow, WorkflowContext
from qtradeoff.workflows import verification_workflow
from qtradeoff.workflows.scan_workflow import RegionRequest, ScanRequest, ScanWorkflow
from qtradeoff.workflows.verification_workflow import (
    SUITE_CHECKS,
    VerificationWorkflow,
    VerifySettings,
    checks_for,
)
from qtradeoff.qcore import BinaryMeasurement

SETTINGS = VerifySettings(seed=42, samples=2000, search=SearchConfig(simplex_grid=20))


@pytest.fixture
def workflow():
    return VerificationWorkflow(workers=2)


def test_context_stores_data_and_events():
    ctx = WorkflowContext()
    ctx.set_data("answer", 42)
    assert ctx.get_data("answer") == 42
    assert ctx.get_data("missing", "default") == "default"


@pytest.mark.asyncio
async def test_base_workflow_requires_run():
    with pytest.raises(NotImplementedError):
        await BaseWorkflow().run()


@pytest.mark.asyncio
async def test_map_ordered_keeps_input_order():
    results = await BaseWorkflow(workers=3).map_ordered(lambda x: x * x, list(range(10)))
    assert results == [x * x for x in range(10)]


def test_samplers_are_disjoint_and_stable():
    a = SETTINGS.sampler(0)
    b = SETTINGS.sampler(1)
    assert a.seed != b.seed
    assert SETTINGS.sampler(3).seed == VerifySettings(seed=42, samples=5).sampler(3).seed
    assert SETTINGS.sampler(2, count=7).count == 7
    assert SETTINGS.sampler(2).count == 2000


def test_checks_for_suites():
    assert [name for name, _ in checks_for("identities")] == [name for name, _ in SUITE_CHECKS["identities"]]
    assert len(checks_for("all")) == sum(len(v) for v in SUITE_CHECKS.values())
    with pytest.raises(UsageError):
        checks_for("everything")


@pytest.mark.asyncio
async def test_identities_suite_passes(workflow):
    report = await workflow.run("identities", SETTINGS)
    assert report.passed, [c for c in report.checks if not c.passed]
    assert [c.name for c in report.checks] == [name for name, _ in SUITE_CHECKS["identities"]]
    assert workflow.ctx.get_data("report") is report
    assert len(workflow.ctx.get_events_by_type("check_completed")) == len(report.checks)


@pytest.mark.asyncio
async def test_theorems_suite_passes(workflow):
    report = await workflow.run("theorems", SETTINGS)
    assert report.passed, [c for c in report.checks if not c.passed]
    by_name = {c.name: c for c in report.checks}
    assert by_name["fidelity_disturbance_needs_pm_half"].observed == pytest.approx(1.04)
    assert by_name["lqu_tradeoff_search"].observed <= 1e-10
    assert by_name["ellipsoid_matches_criterion"].observed == 0
    assert by_name["sharp_compatible_sets_nested"].observed == 0
    assert by_name["edge_touching_principal_axis_only"].observed > 1e-6


@pytest.mark.asyncio
async def test_oracles_suite_reports_every_check(workflow):
    settings = VerifySettings(seed=7, samples=5000, search=SearchConfig(simplex_grid=20))
    report = await workflow.run("oracles", settings)
    by_name = {c.name: c for c in report.checks}
    assert set(by_name) == {
        "fidelity_monte_carlo", "quantumness_numerical", "lqu_choi_state", "unitary_invariance",
    }
    assert by_name["lqu_choi_state"].passed
    assert "identity 1" in by_name["fidelity_monte_carlo"].detail
    assert "decorated channels" in by_name["unitary_invariance"].detail


@pytest.mark.asyncio
async def test_crashing_check_becomes_a_failure(workflow, monkeypatch):
    def broken(settings):
        raise RuntimeError("boom")

    def fine(settings):
        return CheckResult(name="fine", passed=True, observed=0.0, tolerance=1.0)

    monkeypatch.setitem(SUITE_CHECKS, "identities", [("broken", broken), ("fine", fine)])
    report = await workflow.run("identities", SETTINGS)
    assert not report.passed
    assert [c.name for c in report.failures] == ["broken"]
    assert math.isnan(report.checks[0].observed)
    assert "RuntimeError" in report.checks[0].detail
    errors = workflow.ctx.get_events_by_type("error")
    assert len(errors) == 1
    assert errors[0].event_data["step"] == "broken"
    assert "boom" in errors[0].event_data["traceback"]


@pytest.mark.asyncio
async def test_unknown_suite_is_a_usage_error(workflow):
    with pytest.raises(UsageError):
        await workflow.run("nonsense", SETTINGS)


def test_single_check_is_deterministic():
    first = verification_workflow.check_p_max_quantumness_identity(SETTINGS)
    again = verification_workflow.check_p_max_quantumness_identity(SETTINGS)
    assert first == again


# --- scans ---

@pytest.mark.asyncio
async def test_scan_workflow_rows_are_ordered():
    request = ScanRequest(kind="lqu", s_steps=6, search=SearchConfig(simplex_grid=20))
    points = await ScanWorkflow(workers=3).run(request)
    assert [p.s for p in points] == pytest.approx(list(np.linspace(0.0, 1.0, 6)))
    assert points[0].closed_form == 1.0
    assert all(p.gap <= 1e-9 for p in points)


@pytest.mark.asyncio
async def test_region_contains_expected_channels():
    request = RegionRequest(measurement=BinaryMeasurement.along(0.85, (1, 0, 0)), grid=20)
    result = await ScanWorkflow().run(request)
    assert len(result.points) == 1771
    half = np.flatnonzero(np.all(np.isclose(result.points, [0.5, 0.5, 0, 0]), axis=1))
    assert result.compatible[half].all()
    assert np.all(result.in_polytope[result.compatible])


@pytest.mark.asyncio
async def test_region_for_sharp_generic_measurement_is_the_center():
    request = RegionRequest(measurement=BinaryMeasurement.along(1.0, np.ones(3) / np.sqrt(3)), grid=20)
    result = await ScanWorkflow().run(request)
    assert np.allclose(result.points[result.compatible], 0.25)


@pytest.mark.asyncio
async def test_region_trivial_measurement_accepts_everything():
    request = RegionRequest(measurement=BinaryMeasurement.along(0.0, (0, 0, 1)), grid=10)
    result = await ScanWorkflow().run(request)
    assert result.compatible.all()


@pytest.mark.asyncio
async def test_scan_workflow_rejects_unknown_request():
    with pytest.raises(TypeError):
        await ScanWorkflow().run("scan")


# --- structural checks ---

def test_structural_identities_are_registered():
    names = [name for name, _ in SUITE_CHECKS["identities"]]
    for name in (
        "lambda_round_trip", "rotation_homomorphism", "apply_unital_composition",
        "choi_marginals", "effects_sum_to_identity", "unsharpness_monotone",
    ):
        assert name in names


def test_rotation_homomorphism_check():
    result = verification_workflow.check_rotation_homomorphism(SETTINGS)
    assert result.passed
    assert result.observed <= 1e-10
    assert "1000 pairs" in result.detail


def test_choi_marginals_check():
    result = verification_workflow.check_choi_marginals(SETTINGS)
    assert result.passed
    assert result.observed <= 1e-12


def test_unsharpness_monotone_check():
    result = verification_workflow.check_unsharpness_monotone(SETTINGS)
    assert result.passed
    assert result.observed < 0.0


def test_edge_touching_check_passes():
    settings = VerifySettings(seed=3, samples=20_000)
    result = verification_workflow.check_edge_touching(settings)
    assert result.passed, result.detail
    assert result.observed > 1e-6
