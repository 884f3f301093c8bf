# qtradeoff/tradeoffs.py
"""Best achievable fidelity, quantumness and LQU for a given measurement sharpness.

Closed forms come with grid searches over the compatible Pauli channels that
certify them. The search lattice is seeded with the polytope vertices and the
isotropic channels, which are the known maximisers.
"""
import itertools
import logging
from typing import Callable, Dict, Iterable, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveInt

from . import config
from .channels import PauliProbabilities, UnitalChannel
from .compat import CompatibilityPolytope, criterion_lhs, remark1_channels
from .exceptions import TheoremHypothesisError
from .measures import (
    fibonacci_sphere,
    p_max_sorted_array,
    p_values_array,
    quantumness_array,
)
from .qcore import BinaryMeasurement, Direction

logger = logging.getLogger(__name__)

TradeoffKind = Literal["fidelity", "quantumness", "lqu"]
Objective = Callable[[np.ndarray], np.ndarray]

_MAX_CLIMB = 256
# moves p + delta (e_a - e_b) for a != b
_MOVES = np.array([np.eye(4)[a] - np.eye(4)[b] for a in range(4) for b in range(4) if a != b])


class SearchConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    simplex_grid: PositiveInt = config.SIMPLEX_GRID
    direction_grid: PositiveInt = config.DIRECTION_GRID
    refine_steps: int = Field(default=config.REFINE_STEPS, ge=0)
    sweep_directions: bool = False


class TradeoffPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    s: float
    closed_form: float
    searched: float
    gap: float
    grid_resolution: int


class SearchResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float
    p: PauliProbabilities
    direction: Direction


############################
# CLOSED FORMS
############################
def _check_sharpness(s: float) -> None:
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"sharpness must lie in [0, 1], got {s}")


def best_fidelity_unital_closed(s: float) -> float:
    _check_sharpness(s)
    return (2.0 + np.sqrt(1.0 - s * s)) / 3.0


def best_quantumness_unital_closed(s: float) -> float:
    _check_sharpness(s)
    return 1.0 - s * s


def best_lqu_unital_closed(s: float) -> float:
    _check_sharpness(s)
    return 1.0 - s


def fidelity_sharpness_residual(s: float) -> float:
    """(3 F - 2)^2 + s^2 - 1 at the best fidelity; zero up to rounding."""
    return (3.0 * best_fidelity_unital_closed(s) - 2.0) ** 2 + s * s - 1.0


CLOSED_FORMS: Dict[str, Callable[[float], float]] = {
    "fidelity": best_fidelity_unital_closed,
    "quantumness": best_quantumness_unital_closed,
    "lqu": best_lqu_unital_closed,
}


############################
# OBJECTIVES
############################
def _fidelity_objective(p: np.ndarray) -> np.ndarray:
    return (1.0 + 2.0 * p.max(axis=-1)) / 3.0


def _lqu_objective(p: np.ndarray) -> np.ndarray:
    return 1.0 - p_values_array(p).max(axis=-1)


OBJECTIVES: Dict[str, Objective] = {
    "fidelity": _fidelity_objective,
    "quantumness": quantumness_array,
    "lqu": _lqu_objective,
}


############################
# GRID SEARCH
############################
def simplex_lattice(k: int) -> np.ndarray:
    """All points of the simplex with coordinates in (1/k) Z, in lexicographic order of bars."""
    if k < 1:
        raise ValueError(f"lattice resolution must be positive, got {k}")
    bars = np.array(list(itertools.combinations(range(k + 3), 3)))
    edges = np.hstack([np.full((len(bars), 1), -1), bars, np.full((len(bars), 1), k + 3)])
    return (np.diff(edges, axis=1) - 1) / k


def candidate_channels(s: float, simplex_grid: int) -> np.ndarray:
    """Lattice points plus the 12 polytope vertices and the 4 isotropic channels."""
    injected = [CompatibilityPolytope(s=s).vertices()]
    injected.append(np.array([q.p for q in remark1_channels(s)]))
    return np.vstack([simplex_lattice(simplex_grid)] + injected)


def compatible_mask(points: np.ndarray, s: float, n: np.ndarray) -> np.ndarray:
    return criterion_lhs(p_values_array(points), s, n) <= 1.0 + config.BOUNDARY_TOL


def compatible_candidates(m: BinaryMeasurement, cfg: SearchConfig) -> np.ndarray:
    points = candidate_channels(m.s, cfg.simplex_grid)
    return points[compatible_mask(points, m.s, m.direction.n)]


def _pick_best(points: np.ndarray, values: np.ndarray) -> int:
    """Index of the maximum; ties go to the lexicographically largest p."""
    tied = np.flatnonzero(values == values.max())
    if len(tied) == 1:
        return int(tied[0])
    sub = points[tied]
    order = np.lexsort(sub.T[::-1])
    return int(tied[order[-1]])


def _refine(p: np.ndarray, value: float, objective: Objective, s: float, n: np.ndarray, cfg: SearchConfig):
    delta = 1.0 / cfg.simplex_grid
    for _ in range(cfg.refine_steps):
        delta *= 0.5
        for _ in range(_MAX_CLIMB):
            neighbours = p + delta * _MOVES
            neighbours = neighbours[neighbours.min(axis=1) >= 0.0]
            neighbours = neighbours[compatible_mask(neighbours, s, n)]
            if len(neighbours) == 0:
                break
            values = objective(neighbours)
            best = _pick_best(neighbours, values)
            if values[best] <= value:
                break
            p, value = neighbours[best], float(values[best])
    return p, value


def maximize_compatible(objective: Objective, m: BinaryMeasurement, cfg: SearchConfig) -> SearchResult:
    """Grid maximum of an objective over Pauli channels compatible with m, then local refinement."""
    n = m.direction.n
    points = compatible_candidates(m, cfg)
    if len(points) == 0:
        # never reached: the depolarizing centre is compatible with everything
        raise ValueError(f"no compatible candidate for s={m.s}")
    values = objective(points)
    best = _pick_best(points, values)
    p, value = _refine(points[best], float(values[best]), objective, m.s, n, cfg)
    logger.debug(f"Search at s={m.s}: {len(points)} compatible candidates, best {value:.12g}")
    return SearchResult(value=value, p=PauliProbabilities(p=p), direction=m.direction)


def _sweep_directions(cfg: SearchConfig) -> List[Direction]:
    axes = [Direction.axis(i) for i in range(3)]
    if not cfg.sweep_directions:
        return axes[:1]
    return axes + [Direction(n=v) for v in fibonacci_sphere(cfg.direction_grid)]


def _best_over_directions(objective: Objective, s: float, cfg: SearchConfig) -> SearchResult:
    results = [
        maximize_compatible(objective, BinaryMeasurement(s=s, direction=d), cfg)
        for d in _sweep_directions(cfg)
    ]
    # first maximum wins, so principal axes take precedence
    return max(results, key=lambda r: r.value)


def best_fidelity_search(m: BinaryMeasurement, cfg: SearchConfig) -> float:
    """Best corrected fidelity over channels compatible with (s, m) for some direction m."""
    return _best_over_directions(_fidelity_objective, m.s, cfg).value


def best_quantumness_search(m: BinaryMeasurement, cfg: SearchConfig, restrict_to_pauli: bool = False) -> float:
    """Best quantumness over compatible channels.

    Unrestricted, the measurement direction is first rotated onto a principal
    axis, which a unital decoration always allows. Restricted to Pauli
    channels the given direction is kept.
    """
    if restrict_to_pauli:
        return maximize_compatible(quantumness_array, m, cfg).value
    return _best_over_directions(quantumness_array, m.s, cfg).value


def best_lqu_search(m: BinaryMeasurement, cfg: SearchConfig) -> float:
    return maximize_compatible(_lqu_objective, m, cfg).value


def tradeoff_point(kind: TradeoffKind, s: float, cfg: SearchConfig) -> TradeoffPoint:
    closed = CLOSED_FORMS[kind](s)
    m = BinaryMeasurement.along(s, (1.0, 0.0, 0.0))
    if kind == "fidelity":
        searched = best_fidelity_search(m, cfg)
    elif kind == "quantumness":
        searched = best_quantumness_search(m, cfg)
    else:
        searched = best_lqu_search(m, cfg)
    return TradeoffPoint(
        s=s,
        closed_form=closed,
        searched=searched,
        gap=closed - searched,
        grid_resolution=cfg.simplex_grid,
    )


def scan_tradeoff(kind: TradeoffKind, s_values: Iterable[float], cfg: SearchConfig) -> List[TradeoffPoint]:
    return [tradeoff_point(kind, float(s), cfg) for s in s_values]


############################
# DISTURBANCE CHECKS
############################
def fidelity_disturbance_lhs_array(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    return (2.0 * p.max(axis=-1) - 1.0) ** 2 + p_values_array(p).max(axis=-1) ** 2


def fidelity_disturbance_lhs(p: PauliProbabilities) -> float:
    """(2 p_m - 1)^2 + P_max^2, no hypothesis check."""
    return float(fidelity_disturbance_lhs_array(p.p))


def theorem3_check(p: PauliProbabilities) -> Tuple[float, bool]:
    p_m = float(p.p.max())
    if p_m < 0.5 - config.PROB_TOL:
        raise TheoremHypothesisError(
            f"the fidelity-disturbance tradeoff assumes the largest probability is at least 1/2, got {p_m:.12g}"
        )
    lhs = fidelity_disturbance_lhs(p)
    return lhs, lhs <= 1.0 + config.BOUNDARY_TOL


def fidelity_disturbance_check_unital(c: UnitalChannel) -> Tuple[float, bool]:
    return theorem3_check(c.p)


def quantumness_disturbance_arrays(p) -> Tuple[np.ndarray, np.ndarray]:
    """(q_slack, lqu_residual) on (..., 4) arrays."""
    p = np.asarray(p, dtype=float)
    p_max = p_values_array(p).max(axis=-1)
    q_slack = 1.0 - quantumness_array(p) - p_max ** 2
    lqu_residual = np.abs(_lqu_objective(p) + p_max_sorted_array(p) - 1.0)
    return q_slack, lqu_residual


def theorem4_check(p: PauliProbabilities) -> Tuple[float, float]:
    q_slack, lqu_residual = quantumness_disturbance_arrays(p.p)
    return float(q_slack), float(lqu_residual)


def quantumness_disturbance_check_unital(c: UnitalChannel) -> Tuple[float, float]:
    return theorem4_check(c.p)


def counterexample_pm_below_half(x: float = 0.1) -> PauliProbabilities:
    """p = (1/2 - x, 1/2 - x, x, x): P_max = 1 yet the fidelity-disturbance left side exceeds 1."""
    if not 0.0 <= x <= 0.25:
        raise ValueError(f"x must lie in [0, 1/4], got {x}")
    return PauliProbabilities(p=np.array([0.5 - x, 0.5 - x, x, x]))


def search_config_from(
    simplex_grid: Optional[int] = None,
    direction_grid: Optional[int] = None,
    refine_steps: Optional[int] = None,
    sweep_directions: bool = False,
) -> SearchConfig:
    updates = {
        "simplex_grid": simplex_grid,
        "direction_grid": direction_grid,
        "refine_steps": refine_steps,
    }
    return SearchConfig(sweep_directions=sweep_directions, **{k: v for k, v in updates.items() if v is not None})
