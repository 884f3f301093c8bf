# qtradeoff/compat.py
"""Compatibility of unbiased binary qubit measurements with unital channels.

A measurement (s, n) is compatible with the Pauli channel p iff
sum_i (s n_i)^2 / P_i^2 <= 1, a term with P_i = 0 being allowed only when
its numerator vanishes. Unital channels reduce to this through their
canonical decomposition: the input rotation carries n to r_in n.
"""
import logging
from typing import List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field
from scipy.optimize import nnls

from . import config
from .channels import PauliProbabilities, Rotation3, UnitalChannel, uniform_simplex
from .measures import PValues, p_values, p_values_array
from .qcore import (
    ArrayModel,
    BinaryMeasurement,
    Direction,
    SamplerConfig,
    frozen_array,
    random_measurements,
    spawn,
)

logger = logging.getLogger(__name__)

_MAX_REJECTION_BATCHES = 64


############################
# MODELS
############################
class CompatVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    compatible: bool
    lhs: float
    p_values: PValues


class CompatibilityPolytope(BaseModel):
    """Truncated Pauli tetrahedron {p : max_i p_i <= (1 + sqrt(1 - s^2)) / 2}."""

    model_config = ConfigDict(frozen=True)

    s: float = Field(ge=0.0, le=1.0)

    @computed_field
    @property
    def cap(self) -> float:
        return 0.5 * (1.0 + np.sqrt(max(0.0, 1.0 - self.s * self.s)))

    def vertices(self) -> np.ndarray:
        """The 12 placements of (cap, 1 - cap) on two distinct coordinates."""
        rows = []
        for i in range(4):
            for j in range(4):
                if i != j:
                    v = np.zeros(4)
                    v[i] = self.cap
                    v[j] = 1.0 - self.cap
                    rows.append(v)
        return np.array(rows)

    def edges(self) -> List[Tuple[np.ndarray, np.ndarray]]:
        """The 6 segments on tetrahedron edges and the 12 truncation-triangle edges."""
        verts = {(i, j): v for (i, j), v in zip(
            [(i, j) for i in range(4) for j in range(4) if i != j], self.vertices()
        )}
        segments = []
        for i in range(4):
            for j in range(i + 1, 4):
                segments.append((verts[(i, j)], verts[(j, i)]))
        for i in range(4):
            others = [j for j in range(4) if j != i]
            for a in range(3):
                for b in range(a + 1, 3):
                    segments.append((verts[(i, others[a])], verts[(i, others[b])]))
        return segments


class SharpConstraint(BaseModel):
    """Compatible Pauli channels of a sharp (s = 1) measurement."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["line", "center"]
    axis: Optional[int] = None
    description: str

    def channels(self, num: int = 11) -> List[PauliProbabilities]:
        if self.kind == "center":
            return [PauliProbabilities(p=np.full(4, 0.25))]
        i = self.axis + 1
        result = []
        for t in np.linspace(0.0, 0.5, num):
            p = np.full(4, 0.5 - t)
            p[0] = p[i] = t
            result.append(PauliProbabilities(p=p))
        return result


class RejectionSample(ArrayModel):
    points: np.ndarray
    s: np.ndarray
    directions: np.ndarray
    lhs: np.ndarray
    acceptance_rate: float


############################
# CRITERION
############################
def criterion_lhs(pv, s, n) -> np.ndarray:
    """sum_i (s n_i)^2 / P_i^2 on broadcast arrays, +inf on a forbidden zero-P term."""
    pv = np.asarray(pv, dtype=float)
    num = np.asarray(s, dtype=float)[..., None] * np.asarray(n, dtype=float)
    zero_p = pv < config.ZERO_P_TOL
    zero_num = np.abs(num) < config.ZERO_P_TOL
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(zero_p, np.where(zero_num, 0.0, np.inf), np.where(zero_num, 0.0, num * num / (pv * pv)))
    return terms.sum(axis=-1)


def is_compatible_pauli(p: PauliProbabilities, m: BinaryMeasurement) -> CompatVerdict:
    pv = p_values(p)
    lhs = float(criterion_lhs(pv.values, m.s, m.direction.n))
    return CompatVerdict(compatible=lhs <= 1.0 + config.BOUNDARY_TOL, lhs=lhs, p_values=pv)


def is_compatible_unital(c: UnitalChannel, m: BinaryMeasurement) -> CompatVerdict:
    rotated = BinaryMeasurement(s=m.s, direction=Direction(n=c.r_in.apply(m.direction.n)))
    return is_compatible_pauli(c.p, rotated)


def max_sharpness(p: PauliProbabilities) -> float:
    return p_values(p).p_max


def max_sharpness_unital(c: UnitalChannel) -> float:
    return max_sharpness(c.p)


def sharpest_measurement(p: PauliProbabilities) -> BinaryMeasurement:
    """Sharpness P_max along the principal axis maximising P_i."""
    pv = p_values(p)
    return BinaryMeasurement(s=min(1.0, pv.p_max), direction=Direction.axis(pv.argmax))


def sharpest_measurement_unital(c: UnitalChannel) -> BinaryMeasurement:
    best = sharpest_measurement(c.p)
    return BinaryMeasurement(s=best.s, direction=Direction(n=c.r_in.matrix.T @ best.direction.n))


def remark1_channels(s: float) -> List[PauliProbabilities]:
    """Four channels with P_1 = P_2 = P_3 = s, compatible with every direction at sharpness s."""
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"sharpness must lie in [0, 1], got {s}")
    p1 = (1.0 + s - np.sqrt(max(0.0, 1.0 + 2.0 * s - 3.0 * s * s))) / 8.0
    p0 = 1.0 - 3.0 * p1
    result = []
    for k in range(4):
        p = np.full(4, p1)
        p[k] = p0
        result.append(PauliProbabilities(p=p))
    return result


############################
# POLYTOPE
############################
def polytope_contains_array(poly: CompatibilityPolytope, p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    in_simplex = (p.min(axis=-1) >= -config.PROB_TOL) & (np.abs(p.sum(axis=-1) - 1.0) <= config.PROB_TOL)
    return in_simplex & (p.max(axis=-1) <= poly.cap + config.BOUNDARY_TOL)


def polytope_contains(poly: CompatibilityPolytope, p: PauliProbabilities) -> bool:
    return bool(polytope_contains_array(poly, p.p))


def polytope_contains_hull(poly: CompatibilityPolytope, p, tol: float = 1e-9) -> bool:
    """Vertex-hull membership: is p a convex combination of the 12 vertices?"""
    vertices = poly.vertices()
    a = np.vstack([vertices.T, np.ones((1, len(vertices)))])
    b = np.append(np.asarray(getattr(p, "p", p), dtype=float), 1.0)
    _, residual = nnls(a, b)
    return bool(residual <= tol)


def facet_point(s: float, w: Sequence[float]) -> PauliProbabilities:
    """w_1 q_1 + w_2 q_2 + w_3 q_3 on the truncation facet next to the identity vertex."""
    w = _check_weights(w)
    cap = CompatibilityPolytope(s=s).cap
    return PauliProbabilities(p=np.concatenate([[cap], (1.0 - cap) * w]))


def facet_p_values(s: float, w: Sequence[float]) -> PValues:
    """P_i = s sqrt(w_i) + (1 - sqrt(1 - s^2)) sqrt(w_j w_k)."""
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"sharpness must lie in [0, 1], got {s}")
    w = _check_weights(w)
    root = np.sqrt(w)
    pairs = np.array([root[1] * root[2], root[0] * root[2], root[0] * root[1]])
    return PValues(values=np.clip(s * root + (1.0 - np.sqrt(1.0 - s * s)) * pairs, 0.0, 1.0))


def _check_weights(w) -> np.ndarray:
    w = np.asarray(w, dtype=float).reshape(-1)
    if w.shape != (3,) or w.min() < -config.PROB_TOL or abs(w.sum() - 1.0) > config.PROB_TOL:
        raise ValueError(f"facet weights {w.tolist()} are not a probability triple")
    return np.clip(w, 0.0, None)


def distance_to_polytope_edges(poly: CompatibilityPolytope, p) -> np.ndarray:
    """Euclidean distance (in p-coordinates) from each point to the nearest edge of the polytope."""
    x = np.atleast_2d(np.asarray(p, dtype=float))
    best = np.full(len(x), np.inf)
    for a, b in poly.edges():
        d = b - a
        length_sq = float(d @ d)
        t = np.zeros(len(x)) if length_sq == 0.0 else np.clip((x - a) @ d / length_sq, 0.0, 1.0)
        dist = np.linalg.norm(x - a - t[:, None] * d, axis=1)
        best = np.minimum(best, dist)
    return best


############################
# ELLIPSOID AND SHARP GEOMETRY
############################
def ellipsoid_semiaxes(c: UnitalChannel) -> Tuple[PValues, Rotation3]:
    """Semi-axes P_i and the rotation whose columns are the principal axes in the Bloch ball."""
    return p_values(c.p), Rotation3(matrix=c.r_in.matrix.T)


def ellipsoid_contains(semiaxes: PValues, rotation: Rotation3, point) -> bool:
    """x^T R diag(P^-2) R^T x <= 1; a zero semi-axis flattens the ellipsoid onto its other axes."""
    x = np.asarray(point, dtype=float)
    axes = rotation.matrix
    live = semiaxes.values >= config.ZERO_P_TOL
    if np.any(np.abs(axes[:, ~live].T @ x) >= config.ZERO_P_TOL):
        return False
    local = axes[:, live].T @ x / semiaxes.values[live]
    return bool(local @ local <= 1.0 + config.BOUNDARY_TOL)


def sharp_direction_constraints(n: Direction) -> SharpConstraint:
    axis = n.principal_axis
    if axis is None:
        return SharpConstraint(
            kind="center",
            description="only the maximally depolarizing channel p = (1/4, 1/4, 1/4, 1/4)",
        )
    i = axis + 1
    j, k = [x for x in (1, 2, 3) if x != i]
    return SharpConstraint(
        kind="line",
        axis=axis,
        description=f"p0 = p{i}, p{j} = p{k}, p0 + p{j} = 1/2",
    )


############################
# REJECTION SAMPLING
############################
def sample_compatible(s: float, n: Direction, cfg: SamplerConfig) -> RejectionSample:
    """Uniform Pauli channels filtered by the criterion for the fixed measurement (s, n)."""
    points = uniform_simplex(cfg)
    lhs = criterion_lhs(p_values_array(points), s, n.n)
    keep = lhs <= 1.0 + config.BOUNDARY_TOL
    rate = float(keep.mean())
    logger.debug(f"Rejection sampling at s={s}: acceptance rate {rate:.4f}")
    return RejectionSample(
        points=frozen_array(points[keep]),
        s=frozen_array(np.full(int(keep.sum()), s)),
        directions=frozen_array(np.tile(n.n, (int(keep.sum()), 1))),
        lhs=frozen_array(lhs[keep]),
        acceptance_rate=rate,
    )


def sample_compatible_random(cfg: SamplerConfig) -> RejectionSample:
    """Exactly cfg.count compatible triples: uniform channels paired with uniform random measurements.

    Batches of cfg.count candidates are drawn from sub-streams of cfg.seed
    until enough have been accepted, so the output depends only on (seed, count).
    """
    batches = spawn(cfg, _MAX_REJECTION_BATCHES)
    kept: List[Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]] = []
    accepted = drawn = 0
    for batch in batches:
        channel_cfg, measurement_cfg = spawn(batch, 2)
        points = uniform_simplex(channel_cfg)
        s, dirs = random_measurements(measurement_cfg)
        lhs = criterion_lhs(p_values_array(points), s, dirs)
        keep = lhs <= 1.0 + config.BOUNDARY_TOL
        kept.append((points[keep], s[keep], dirs[keep], lhs[keep]))
        accepted += int(keep.sum())
        drawn += len(points)
        if accepted >= cfg.count:
            break
    else:
        raise RuntimeError(f"accepted {accepted} of {cfg.count} compatible triples after {drawn} draws")

    points, s, dirs, lhs = (np.concatenate(parts)[: cfg.count] for parts in zip(*kept))
    logger.debug(f"Rejection sampling of random triples: {accepted}/{drawn} accepted")
    return RejectionSample(
        points=frozen_array(points),
        s=frozen_array(s),
        directions=frozen_array(dirs),
        lhs=frozen_array(lhs),
        acceptance_rate=accepted / drawn,
    )
