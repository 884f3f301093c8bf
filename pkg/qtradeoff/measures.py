# qtradeoff/measures.py
"""Fidelity, quantumness and local quantum uncertainty of qubit channels.

Each measure has a closed form for Pauli/unital channels and an independent
numerical path used as an oracle.
"""
import logging
import math
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from . import config
from .channels import ChoiState, PauliProbabilities, UnitalChannel
from .qcore import (
    I2,
    PAULI_VECTOR,
    ArrayModel,
    SamplerConfig,
    eigensystem_hermitian,
    frozen_array,
    haar_bloch_vectors,
    spawn,
    sqrtm_psd,
)

logger = logging.getLogger(__name__)

# Haar average of the squared l1 coherence is 2/3 for the identity map
COHERENCE_NORMALIZATION = 1.5
_REFINE_POINTS = 9


class PValues(ArrayModel):
    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def _check_range(cls, value):
        v = np.asarray(value, dtype=float).reshape(-1)
        if v.shape != (3,):
            raise ValueError("P-values come as a triple")
        if v.min() < -config.PROB_TOL or v.max() > 1.0 + config.PROB_TOL:
            raise ValueError(f"P-values {v.tolist()} outside [0, 1]")
        return frozen_array(v)

    @property
    def p_max(self) -> float:
        return float(self.values.max())

    @property
    def argmax(self) -> int:
        return int(np.argmax(self.values))


class MeasureReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    avg_fidelity: float
    corrected_fidelity: float
    quantumness: float
    lqu: float
    p_values: PValues
    p_max: float
    t_values: Tuple[float, float, float]


class FidelityEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    mean: float
    stderr: float
    count: int


############################
# P-VALUES
############################
def p_values_array(p) -> np.ndarray:
    """P_i = 2(sqrt(p0 p_i) + sqrt(p_j p_k)) on (..., 4) arrays."""
    sq = np.sqrt(np.clip(np.asarray(p, dtype=float), 0.0, None))
    s0, s1, s2, s3 = sq[..., 0], sq[..., 1], sq[..., 2], sq[..., 3]
    return 2.0 * np.stack([s0 * s1 + s2 * s3, s0 * s2 + s1 * s3, s0 * s3 + s1 * s2], axis=-1)


def p_max_sorted_array(p) -> np.ndarray:
    """P_max from the non-increasingly sorted probabilities."""
    sq = np.sqrt(np.clip(-np.sort(-np.asarray(p, dtype=float), axis=-1), 0.0, None))
    return 2.0 * (sq[..., 0] * sq[..., 1] + sq[..., 2] * sq[..., 3])


def t_values_array(p) -> np.ndarray:
    """T_i = 2(sqrt(p0 p_i) - sqrt(p_j p_k)) on sorted probabilities."""
    sq = np.sqrt(np.clip(-np.sort(-np.asarray(p, dtype=float), axis=-1), 0.0, None))
    s0, s1, s2, s3 = sq[..., 0], sq[..., 1], sq[..., 2], sq[..., 3]
    return 2.0 * np.stack([s0 * s1 - s2 * s3, s0 * s2 - s1 * s3, s0 * s3 - s1 * s2], axis=-1)


def quantumness_array(p) -> np.ndarray:
    ps = -np.sort(-np.asarray(p, dtype=float), axis=-1)
    return (ps[..., 0] - ps[..., 1]) ** 2 + (ps[..., 2] - ps[..., 3]) ** 2


def p_values(p: PauliProbabilities) -> PValues:
    return PValues(values=np.clip(p_values_array(p.p), 0.0, 1.0))


def p_max_sorted(p: PauliProbabilities) -> float:
    return float(p_max_sorted_array(p.p))


def t_values(p: PauliProbabilities) -> Tuple[float, float, float]:
    t1, t2, t3 = t_values_array(p.p)
    return float(t1), float(t2), float(t3)


############################
# FIDELITY
############################
def avg_fidelity_pauli(p: PauliProbabilities) -> float:
    return (1.0 + 2.0 * float(p.p[0])) / 3.0


def corrected_fidelity_pauli(p: PauliProbabilities) -> float:
    return (1.0 + 2.0 * float(p.p.max())) / 3.0


def avg_fidelity_unital(c: UnitalChannel) -> float:
    return 0.5 * (1.0 + float(np.trace(c.bloch_matrix)) / 3.0)


def corrected_fidelity_unital(c: UnitalChannel) -> float:
    return corrected_fidelity_pauli(c.p)


def avg_fidelity_mc(c: UnitalChannel, cfg: SamplerConfig) -> FidelityEstimate:
    """Haar average of <psi|E(psi)|psi> = (1 + r.Tr)/2 over sub-seeded chunks."""
    n_chunks = math.ceil(cfg.count / config.MC_CHUNK)
    children = spawn(cfg, n_chunks, count=config.MC_CHUNK)
    total = 0.0
    total_sq = 0.0
    remaining = cfg.count
    for child in children:
        size = min(config.MC_CHUNK, remaining)
        remaining -= size
        r = haar_bloch_vectors(child.model_copy(update={"count": size}))
        f = 0.5 * (1.0 + np.einsum("ki,ki->k", r, r @ c.bloch_matrix.T))
        total += float(f.sum())
        total_sq += float((f * f).sum())
    mean = total / cfg.count
    if cfg.count > 1:
        variance = max(0.0, (total_sq - cfg.count * mean * mean) / (cfg.count - 1))
        stderr = math.sqrt(variance / cfg.count)
    else:
        stderr = 0.0
    return FidelityEstimate(mean=mean, stderr=stderr, count=cfg.count)


############################
# QUANTUMNESS
############################
def quantumness_pauli(p: PauliProbabilities) -> float:
    return float(quantumness_array(p.p))


def fibonacci_sphere(n: int) -> np.ndarray:
    """n near-uniform unit vectors on a golden-angle spiral."""
    i = np.arange(n) + 0.5
    z = 1.0 - 2.0 * i / n
    rho = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    phi = np.pi * (3.0 - np.sqrt(5.0)) * np.arange(n)
    return np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=1)


def coherence_sq_bloch(r, m) -> np.ndarray:
    """Squared l1 coherence of Bloch vectors r in the basis whose z-axis is m."""
    r = np.asarray(r, dtype=float)
    return np.einsum("...i,...i->...", r, r) - (r @ np.asarray(m, dtype=float)) ** 2


def _average_coherence(second_moment: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    return np.trace(second_moment) - np.einsum("ki,ij,kj->k", dirs, second_moment, dirs)


def _tangent_basis(m: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    helper = np.eye(3)[int(np.argmin(np.abs(m)))]
    u = np.cross(m, helper)
    u /= np.linalg.norm(u)
    return u, np.cross(m, u)


def quantumness_numerical(c: UnitalChannel, cfg: SamplerConfig, basis_grid: int) -> float:
    """N_C times the basis-minimised Haar average of C^2(E(rho)).

    Bases are labelled by their z-axis on the Bloch sphere: a Fibonacci grid
    of basis_grid**2 axes, then one local refinement pass around the best.
    """
    if basis_grid < 8:
        raise ValueError(f"basis_grid must be >= 8, got {basis_grid}")
    outputs = haar_bloch_vectors(cfg) @ c.bloch_matrix.T
    second_moment = outputs.T @ outputs / cfg.count

    dirs = fibonacci_sphere(basis_grid * basis_grid)
    values = _average_coherence(second_moment, dirs)
    best = int(np.argmin(values))
    m, best_value = dirs[best], float(values[best])

    spacing = math.sqrt(4.0 * math.pi / len(dirs))
    u, v = _tangent_basis(m)
    offsets = np.linspace(-spacing, spacing, _REFINE_POINTS)
    a, b = np.meshgrid(offsets, offsets, indexing="ij")
    local = m + a.reshape(-1, 1) * u + b.reshape(-1, 1) * v
    local /= np.linalg.norm(local, axis=1, keepdims=True)
    local_values = _average_coherence(second_moment, local)
    best_value = min(best_value, float(local_values.min()))
    return COHERENCE_NORMALIZATION * best_value


def haar_coherence_normalization(cfg: SamplerConfig) -> float:
    """Haar average of r_x^2 + r_y^2, the identity map's average C^2 (2/3)."""
    r = haar_bloch_vectors(cfg)
    return float(np.mean(r[:, 0] ** 2 + r[:, 1] ** 2))


############################
# LOCAL QUANTUM UNCERTAINTY
############################
def lqu_pauli(p: PauliProbabilities) -> float:
    return 1.0 - float(p_values_array(p.p).max())


def w_matrix(choi: ChoiState) -> np.ndarray:
    """W_ij = Tr(sqrt(rho) (sigma_i x I) sqrt(rho) (sigma_j x I))."""
    root = sqrtm_psd(choi.matrix)
    local = [np.kron(sigma, I2) for sigma in PAULI_VECTOR]
    sandwiched = [root @ a @ root for a in local]
    w = np.array([[np.trace(s @ b).real for b in local] for s in sandwiched])
    return 0.5 * (w + w.T)


def lqu_direct(choi: ChoiState) -> float:
    values, _ = eigensystem_hermitian(w_matrix(choi))
    return 1.0 - float(values[0])


############################
# REPORTS
############################
def measure_report(p: PauliProbabilities) -> MeasureReport:
    pv = p_values(p)
    return MeasureReport(
        avg_fidelity=avg_fidelity_pauli(p),
        corrected_fidelity=corrected_fidelity_pauli(p),
        quantumness=quantumness_pauli(p),
        lqu=lqu_pauli(p),
        p_values=pv,
        p_max=pv.p_max,
        t_values=t_values(p),
    )


def measure_report_unital(c: UnitalChannel) -> MeasureReport:
    # quantumness and LQU are invariant under the unitary decoration
    pv = p_values(c.p)
    return MeasureReport(
        avg_fidelity=avg_fidelity_unital(c),
        corrected_fidelity=corrected_fidelity_unital(c),
        quantumness=quantumness_pauli(c.p),
        lqu=lqu_pauli(c.p),
        p_values=pv,
        p_max=pv.p_max,
        t_values=t_values(c.p),
    )
