# qtradeoff/qcore.py
"""Dense linear-algebra kernel and the basic qubit objects.

States, directions and measurements are immutable pydantic values. Arrays
held by them are copied on construction and marked read-only.
"""
import logging
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PositiveInt,
    field_validator,
    model_validator,
)
from typing_extensions import Self

from . import config

logger = logging.getLogger(__name__)

ComplexMatrix = np.ndarray


def frozen_array(value, dtype=float) -> np.ndarray:
    arr = np.array(value, dtype=dtype)
    arr.setflags(write=False)
    return arr


I2 = frozen_array(np.eye(2), complex)
SIGMA_X = frozen_array([[0, 1], [1, 0]], complex)
SIGMA_Y = frozen_array([[0, -1j], [1j, 0]], complex)
SIGMA_Z = frozen_array([[1, 0], [0, -1]], complex)
PAULI = (I2, SIGMA_X, SIGMA_Y, SIGMA_Z)
PAULI_VECTOR = frozen_array(np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z]), complex)

_MAX_SWEEPS = 60


class ArrayModel(BaseModel):
    """Immutable value object holding numpy arrays."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


############################
# LINEAR ALGEBRA
############################
def hermitian_deviation(a: ComplexMatrix) -> float:
    a = np.asarray(a)
    return float(np.abs(a - a.conj().T).max())


def is_hermitian(a: ComplexMatrix, tol: float = config.HERMITIAN_TOL) -> bool:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return hermitian_deviation(a) <= tol * max(1.0, float(np.abs(a).max()))


def _jacobi_symmetric(s: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi sweeps on a real symmetric matrix."""
    a = np.array(s, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    scale = max(1.0, float(np.abs(a).max()))
    for sweep in range(_MAX_SWEEPS):
        off = float(np.sqrt(np.sum(np.triu(a, 1) ** 2)))
        if off <= config.JACOBI_TOL * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                sn = t * c
                # A <- R^T A R, V <- V R with R = [[c, s], [-s, c]] on (p, q)
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p], a[:, q] = c * ap - sn * aq, sn * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :], a[q, :] = c * ap - sn * aq, sn * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p], v[:, q] = c * vp - sn * vq, sn * vp + c * vq
    else:
        logger.warning(f"Jacobi did not converge in {_MAX_SWEEPS} sweeps (off-diagonal {off:.3e})")
    return np.diag(a).copy(), v


def _pivoted_gram_schmidt(candidates: np.ndarray, basis: List[np.ndarray], k: int) -> List[np.ndarray]:
    residual = candidates.copy()
    if basis:
        q = np.stack(basis, axis=1)
        residual = residual - q @ (q.conj().T @ residual)
    picked = []
    for _ in range(k):
        norms = np.linalg.norm(residual, axis=0)
        j = int(np.argmax(norms))
        w = residual[:, j] / norms[j]
        picked.append(w)
        residual = residual - np.outer(w, w.conj() @ residual)
    return picked


def eigensystem_hermitian(a: ComplexMatrix) -> Tuple[np.ndarray, ComplexMatrix]:
    """Eigenvalues (descending) and unitary eigenvector matrix of a Hermitian matrix.

    The complex problem is embedded as the real symmetric matrix
    [[Re A, -Im A], [Im A, Re A]] and diagonalised with cyclic Jacobi. Each
    complex eigenvalue appears twice in the embedding; complex eigenvectors
    are recovered per eigenvalue cluster by pivoted Gram-Schmidt.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not is_hermitian(a):
        raise ValueError(
            f"matrix is not Hermitian: max |A - A^H| = {hermitian_deviation(a):.3e}"
        )
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    embedded = np.block([[a.real, -a.imag], [a.imag, a.real]])
    values, vectors = _jacobi_symmetric(embedded)
    order = np.argsort(-values, kind="stable")
    values = values[order]
    candidates = vectors[:n, order] + 1j * vectors[n:, order]

    tol = 1e-11 * max(1.0, float(np.abs(values).max()))
    basis: List[np.ndarray] = []
    start = 0
    while start < 2 * n:
        stop = start + 1
        while stop < 2 * n and values[stop - 1] - values[stop] <= tol:
            stop += 1
        k = max(1, int(round((stop - start) / 2)))
        k = min(k, n - len(basis))
        basis.extend(_pivoted_gram_schmidt(candidates[:, start:stop], basis, k))
        start = stop
        if len(basis) == n:
            break
    if len(basis) != n:
        raise RuntimeError(f"recovered {len(basis)} eigenvectors for a {n}x{n} matrix")

    u = np.stack(basis, axis=1)
    eigenvalues = np.real(np.einsum("ij,ik,kj->j", u.conj(), a, u))
    order = np.argsort(-eigenvalues, kind="stable")
    return eigenvalues[order], u[:, order]


def sqrtm_psd(a: ComplexMatrix) -> ComplexMatrix:
    values, u = eigensystem_hermitian(a)
    if values.min() < -config.PSD_TOL:
        raise ValueError(f"matrix is not positive semidefinite: min eigenvalue {values.min():.3e}")
    roots = np.sqrt(np.clip(values, 0.0, None))
    return (u * roots) @ u.conj().T


def operator_norm(a: ComplexMatrix) -> float:
    values, _ = eigensystem_hermitian(a)
    return float(np.abs(values).max())


def is_psd(a: ComplexMatrix, tol: float = config.PSD_TOL) -> bool:
    if not is_hermitian(a):
        return False
    values, _ = eigensystem_hermitian(a)
    return bool(values.min() >= -tol)


def l1_coherence(rho: ComplexMatrix) -> float:
    """l1-norm of coherence in the computational basis."""
    rho = np.asarray(rho)
    return float(np.abs(rho).sum() - np.abs(np.diag(rho)).sum())


############################
# STATES AND MEASUREMENTS
############################
class QubitState(ArrayModel):
    bloch: np.ndarray

    @field_validator("bloch", mode="before")
    @classmethod
    def _check_bloch(cls, value):
        r = np.asarray(value, dtype=float).reshape(-1)
        if r.shape != (3,) or not np.all(np.isfinite(r)):
            raise ValueError("Bloch vector must be 3 finite reals")
        norm = float(np.linalg.norm(r))
        if norm > 1.0 + config.UNIT_TOL:
            raise ValueError(f"Bloch vector norm {norm:.15g} exceeds 1")
        return frozen_array(r)

    def density_matrix(self) -> ComplexMatrix:
        return 0.5 * (I2 + np.einsum("i,ijk->jk", self.bloch, PAULI_VECTOR))

    @classmethod
    def from_density_matrix(cls, rho: ComplexMatrix) -> Self:
        rho = np.asarray(rho, dtype=complex)
        return cls(bloch=np.real(np.einsum("ijk,kj->i", PAULI_VECTOR, rho)))


class Direction(ArrayModel):
    """Unit vector; inputs within 1e-6 of unit norm are renormalised."""

    n: np.ndarray

    @field_validator("n", mode="before")
    @classmethod
    def _normalize(cls, value):
        vec = np.asarray(value, dtype=float).reshape(-1)
        if vec.shape != (3,) or not np.all(np.isfinite(vec)):
            raise ValueError("direction must be 3 finite reals")
        norm = float(np.linalg.norm(vec))
        if abs(norm - 1.0) > config.DIRECTION_RENORM_TOL:
            raise ValueError(f"direction norm {norm:.9g} is not within 1e-6 of 1")
        return frozen_array(vec / norm)

    @classmethod
    def axis(cls, i: int) -> Self:
        return cls(n=np.eye(3)[i])

    @property
    def principal_axis(self) -> Optional[int]:
        """Index of the principal axis this direction lies on, if any."""
        nonzero = np.flatnonzero(np.abs(self.n) > config.UNIT_TOL)
        return int(nonzero[0]) if nonzero.size == 1 else None


class BinaryMeasurement(BaseModel):
    model_config = ConfigDict(frozen=True)

    s: float = Field(ge=0.0, le=1.0)
    direction: Direction

    @classmethod
    def along(cls, s: float, n: Sequence[float]) -> Self:
        return cls(s=s, direction=Direction(n=n))

    @property
    def bloch_point(self) -> np.ndarray:
        return self.s * self.direction.n


class GeneralPovm(ArrayModel):
    effects: Tuple[np.ndarray, ...]

    @field_validator("effects", mode="before")
    @classmethod
    def _freeze(cls, value):
        return tuple(frozen_array(m, complex) for m in value)

    @model_validator(mode="after")
    def _check_povm(self):
        if not self.effects:
            raise ValueError("a POVM needs at least one effect")
        d = self.effects[0].shape[0]
        if d > 4:
            raise ValueError(f"dimension {d} exceeds the supported maximum of 4")
        for i, m in enumerate(self.effects):
            if m.shape != (d, d):
                raise ValueError(f"effect {i} has shape {m.shape}, expected {(d, d)}")
            if not is_psd(m):
                raise ValueError(f"effect {i} is not positive semidefinite")
        deviation = float(np.abs(sum(self.effects) - np.eye(d)).max())
        if deviation > config.PROB_TOL:
            raise ValueError(f"effects do not sum to the identity (deviation {deviation:.3e})")
        return self

    @property
    def dimension(self) -> int:
        return self.effects[0].shape[0]

    @classmethod
    def from_measurement(cls, m: BinaryMeasurement) -> Self:
        return cls(effects=effects(m))


def effects(m: BinaryMeasurement) -> Tuple[ComplexMatrix, ComplexMatrix]:
    """M+- = (I +- s n.sigma) / 2."""
    n_sigma = np.einsum("i,ijk->jk", m.direction.n, PAULI_VECTOR)
    plus = 0.5 * (I2 + m.s * n_sigma)
    minus = I2 - plus
    return plus, minus


def measure_probabilities(m: BinaryMeasurement, rho: QubitState) -> Tuple[float, float]:
    plus = float(np.clip(0.5 * (1.0 + m.s * float(m.direction.n @ rho.bloch)), 0.0, 1.0))
    return plus, 1.0 - plus


def unsharpness_uncertainty(p: GeneralPovm) -> float:
    """l1-norm of F(M) with r_ij = (delta_ij Tr M_i - Tr M_i M_j) / d."""
    d = p.dimension
    traces = np.array([np.trace(m).real for m in p.effects])
    overlaps = np.array([[np.trace(mi @ mj).real for mj in p.effects] for mi in p.effects])
    r = (np.diag(traces) - overlaps) / d
    return float(np.abs(r).sum())


def unsharpness_luders(p: GeneralPovm) -> float:
    """Operator norm of I - sum_i M_i^2."""
    residual = np.eye(p.dimension) - sum(m @ m for m in p.effects)
    return operator_norm(residual)


############################
# SAMPLING
############################
class SamplerConfig(BaseModel):
    """Seed and size of a deterministic sample stream.

    Streams come from numpy's Philox4x64 counter-based generator seeded
    through SeedSequence, so a (seed, count) pair pins the stream.
    """

    model_config = ConfigDict(frozen=True)

    seed: int = Field(default=config.DEFAULT_SEED, ge=0, lt=2**64)
    count: PositiveInt = 1


def generator(cfg: SamplerConfig) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(cfg.seed))


def spawn(cfg: SamplerConfig, n: int, count: Optional[int] = None) -> List[SamplerConfig]:
    """n disjoint child configurations derived from cfg.seed."""
    children = np.random.SeedSequence(cfg.seed).spawn(n)
    return [
        SamplerConfig(seed=int(child.generate_state(1, dtype=np.uint64)[0]), count=count or cfg.count)
        for child in children
    ]


def haar_bloch_vectors(cfg: SamplerConfig) -> np.ndarray:
    """(count, 3) unit vectors, uniform on the sphere (normalised Gaussians)."""
    g = generator(cfg).standard_normal((cfg.count, 3))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def sample_haar_pure(cfg: SamplerConfig) -> Iterator[QubitState]:
    for r in haar_bloch_vectors(cfg):
        yield QubitState(bloch=r)


def random_measurements(cfg: SamplerConfig) -> Tuple[np.ndarray, np.ndarray]:
    """Sharpness values uniform on [0, 1] and Haar directions, both of length count."""
    rng = generator(cfg)
    s = rng.uniform(0.0, 1.0, cfg.count)
    g = rng.standard_normal((cfg.count, 3))
    return s, g / np.linalg.norm(g, axis=1, keepdims=True)
