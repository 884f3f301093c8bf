# qtradeoff/workflows/scan_workflow.py
from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveInt

from .. import config
from ..compat import CompatibilityPolytope, criterion_lhs, polytope_contains_array
from ..measures import p_values_array
from ..qcore import ArrayModel, BinaryMeasurement, frozen_array
from ..tradeoffs import SearchConfig, TradeoffKind, TradeoffPoint, simplex_lattice, tradeoff_point
from .base_workflow import BaseWorkflow


############################
# MODELS
############################
class ScanRequest(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: TradeoffKind
    s_steps: PositiveInt = 11
    search: SearchConfig = Field(default_factory=SearchConfig)

    def s_values(self) -> np.ndarray:
        if self.s_steps == 1:
            return np.zeros(1)
        return np.linspace(0.0, 1.0, self.s_steps)


class RegionRequest(BaseModel):
    model_config = ConfigDict(frozen=True)

    measurement: BinaryMeasurement
    grid: PositiveInt = config.SIMPLEX_GRID


class RegionResult(ArrayModel):
    points: np.ndarray
    lhs: np.ndarray
    compatible: np.ndarray
    in_polytope: np.ndarray


############################
# THE WORKFLOW
############################
class ScanWorkflow(BaseWorkflow):
    """Tradeoff-curve scans and compatible-region grids."""

    async def scan(self, request: ScanRequest) -> List[TradeoffPoint]:
        s_values = request.s_values()
        await self.emit_event("scan_started", {"kind": request.kind, "s_steps": request.s_steps})
        points = await self.map_ordered(
            lambda s: tradeoff_point(request.kind, float(s), request.search), list(s_values)
        )
        worst = max(p.gap for p in points)
        await self.emit_event("scan_completed", {"kind": request.kind, "largest_gap": worst})
        self.ctx.set_data("points", points)
        return points

    async def region(self, request: RegionRequest) -> RegionResult:
        m = request.measurement
        await self.emit_event("region_started", {"s": m.s, "n": m.direction.n.tolist(), "grid": request.grid})

        def evaluate(_):
            points = simplex_lattice(request.grid)
            lhs = criterion_lhs(p_values_array(points), m.s, m.direction.n)
            compatible = lhs <= 1.0 + config.BOUNDARY_TOL
            in_polytope = polytope_contains_array(CompatibilityPolytope(s=m.s), points)
            return RegionResult(
                points=frozen_array(points),
                lhs=frozen_array(lhs),
                compatible=frozen_array(compatible, bool),
                in_polytope=frozen_array(in_polytope, bool),
            )

        (result,) = await self.map_ordered(evaluate, [None])
        outside = int(np.sum(result.compatible & ~result.in_polytope))
        if outside:
            self.logger.warning(f"{outside} compatible grid points fall outside the polytope")
        await self.emit_event(
            "region_completed",
            {"points": len(result.points), "compatible": int(result.compatible.sum()), "outside_polytope": outside},
        )
        return result

    async def run(self, request):
        if isinstance(request, ScanRequest):
            return await self.scan(request)
        if isinstance(request, RegionRequest):
            return await self.region(request)
        raise TypeError(f"unsupported request {type(request).__name__}")
