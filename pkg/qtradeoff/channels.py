# qtradeoff/channels.py
"""Pauli and unital qubit channels.

A unital qubit channel acts on Bloch vectors as r -> T r. Every such T
factors as r_out . diag(lambda(p)) . r_in with proper rotations and a Pauli
probability vector p (the channel V2 o E_p o V1).
"""
import itertools
import logging
from typing import Sequence, Tuple

import numpy as np
from pydantic import field_validator, model_validator
from scipy.spatial.transform import Rotation
from typing_extensions import Self

from . import config
from .exceptions import ChannelValidationError
from .qcore import (
    I2,
    PAULI,
    PAULI_VECTOR,
    ArrayModel,
    ComplexMatrix,
    QubitState,
    SamplerConfig,
    eigensystem_hermitian,
    frozen_array,
    generator,
)

logger = logging.getLogger(__name__)

_LAMBDA_FROM_P = frozen_array(
    [[1, 1, -1, -1],
     [1, -1, 1, -1],
     [1, -1, -1, 1]]
)
_SIGN_FOLDS = ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1))
# Sign pattern (+X, -Y, +Z) of |psi+><psi+| in the Pauli product basis
_BELL_SIGNS = frozen_array([1.0, -1.0, 1.0])


def lambdas_from_p(p) -> np.ndarray:
    """(..., 4) probabilities -> (..., 3) Bloch contraction factors."""
    return np.asarray(p, dtype=float) @ _LAMBDA_FROM_P.T


def p_from_lambdas(lam) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    l1, l2, l3 = lam[..., 0], lam[..., 1], lam[..., 2]
    return 0.25 * np.stack(
        [1 + l1 + l2 + l3, 1 + l1 - l2 - l3, 1 - l1 + l2 - l3, 1 - l1 - l2 + l3], axis=-1
    )


############################
# MODELS
############################
class PauliProbabilities(ArrayModel):
    p: np.ndarray

    @field_validator("p", mode="before")
    @classmethod
    def _check_simplex(cls, value):
        p = np.asarray(value, dtype=float).reshape(-1)
        if p.shape != (4,) or not np.all(np.isfinite(p)):
            raise ValueError("Pauli probabilities must be 4 finite reals")
        if p.min() < -config.PROB_TOL:
            raise ValueError(f"negative probability {p.min():.3e}")
        if abs(p.sum() - 1.0) > config.PROB_TOL:
            raise ValueError(f"probabilities sum to {p.sum():.15g}, not 1")
        return frozen_array(p)

    @classmethod
    def from_vector(cls, values: Sequence[float], atol: float = config.CLI_PROB_TOL) -> Self:
        """Validate with a looser tolerance, then renormalise (logged, never silent)."""
        p = np.asarray(values, dtype=float).reshape(-1)
        if p.shape != (4,) or not np.all(np.isfinite(p)):
            raise ValueError("Pauli probabilities must be 4 finite reals")
        if p.min() < -atol:
            raise ValueError(f"probability p{int(np.argmin(p))} = {p.min():.12g} is negative")
        if abs(p.sum() - 1.0) > atol:
            raise ValueError(f"probabilities sum to {p.sum():.12g}, not 1 within {atol:g}")
        fixed = np.clip(p, 0.0, None)
        fixed = fixed / fixed.sum()
        if np.abs(fixed - p).max() > 0.0:
            logger.info(f"Renormalised probability vector {p.tolist()} -> {fixed.tolist()}")
        return cls(p=fixed)

    @classmethod
    def vertex(cls, k: int) -> Self:
        return cls(p=np.eye(4)[k])

    @property
    def lambdas(self) -> np.ndarray:
        return lambdas_from_p(self.p)


class Rotation3(ArrayModel):
    matrix: np.ndarray

    @field_validator("matrix", mode="before")
    @classmethod
    def _check_rotation(cls, value):
        r = np.asarray(value, dtype=float)
        if r.shape != (3, 3) or not np.all(np.isfinite(r)):
            raise ValueError("rotation must be a finite 3x3 matrix")
        orth = float(np.abs(r.T @ r - np.eye(3)).max())
        if orth > config.ROTATION_TOL:
            raise ValueError(f"matrix is not orthogonal (max |R^T R - I| = {orth:.3e})")
        det = float(np.linalg.det(r))
        if abs(det - 1.0) > config.ROTATION_TOL:
            raise ValueError(f"rotation determinant is {det:.12g}, expected +1")
        return frozen_array(r)

    @classmethod
    def identity(cls) -> Self:
        return cls(matrix=np.eye(3))

    @classmethod
    def from_axis_angle(cls, axis: Sequence[float], angle: float) -> Self:
        axis = np.asarray(axis, dtype=float)
        return cls(matrix=Rotation.from_rotvec(angle * axis / np.linalg.norm(axis)).as_matrix())

    def apply(self, v) -> np.ndarray:
        return self.matrix @ np.asarray(v, dtype=float)


class Unitary2(ArrayModel):
    matrix: np.ndarray

    @field_validator("matrix", mode="before")
    @classmethod
    def _check_unitary(cls, value):
        u = np.asarray(value, dtype=complex)
        if u.shape != (2, 2):
            raise ValueError("expected a 2x2 matrix")
        dev = float(np.abs(u.conj().T @ u - I2).max())
        if dev > config.ROTATION_TOL:
            raise ValueError(f"matrix is not unitary (max |U^H U - I| = {dev:.3e})")
        return frozen_array(u, complex)

    @classmethod
    def from_axis_angle(cls, axis: Sequence[float], angle: float) -> Self:
        """exp(-i angle n.sigma / 2)."""
        n = np.asarray(axis, dtype=float)
        n = n / np.linalg.norm(n)
        n_sigma = np.einsum("i,ijk->jk", n, PAULI_VECTOR)
        return cls(matrix=np.cos(angle / 2) * I2 - 1j * np.sin(angle / 2) * n_sigma)


class UnitalChannel(ArrayModel):
    """Bloch matrix T with its canonical factors T = r_out . diag(lambda(p)) . r_in."""

    bloch_matrix: np.ndarray
    r_out: Rotation3
    p: PauliProbabilities
    r_in: Rotation3

    @field_validator("bloch_matrix", mode="before")
    @classmethod
    def _freeze(cls, value):
        t = np.asarray(value, dtype=float)
        if t.shape != (3, 3):
            raise ValueError("Bloch matrix must be 3x3")
        return frozen_array(t)

    @model_validator(mode="after")
    def _check_factors(self):
        rebuilt = self.r_out.matrix @ np.diag(self.p.lambdas) @ self.r_in.matrix
        residual = float(np.abs(rebuilt - self.bloch_matrix).max())
        if residual > config.ROTATION_TOL:
            raise ValueError(f"canonical factors do not reproduce the Bloch matrix (residual {residual:.3e})")
        return self

    @classmethod
    def compose(cls, r_out: Rotation3, p: PauliProbabilities, r_in: Rotation3) -> Self:
        t = r_out.matrix @ np.diag(p.lambdas) @ r_in.matrix
        return cls(bloch_matrix=t, r_out=r_out, p=p, r_in=r_in)

    @classmethod
    def pauli(cls, p: PauliProbabilities) -> Self:
        return cls.compose(Rotation3.identity(), p, Rotation3.identity())

    @classmethod
    def from_unitaries(cls, v_out: Unitary2, p: PauliProbabilities, v_in: Unitary2) -> Self:
        """The channel V_out o E_p o V_in."""
        return cls.compose(rotation_from_unitary(v_out), p, rotation_from_unitary(v_in))


class ChoiState(ArrayModel):
    matrix: np.ndarray

    @field_validator("matrix", mode="before")
    @classmethod
    def _check_state(cls, value):
        rho = np.asarray(value, dtype=complex)
        if rho.shape != (4, 4):
            raise ValueError("a two-qubit Choi state must be 4x4")
        dev = float(np.abs(rho - rho.conj().T).max())
        if dev > config.HERMITIAN_TOL:
            raise ValueError(f"Choi matrix is not Hermitian (deviation {dev:.3e})")
        trace = complex(np.trace(rho))
        if abs(trace - 1.0) > config.ROTATION_TOL:
            raise ValueError(f"Choi matrix has trace {trace:.12g}, expected 1")
        values, _ = eigensystem_hermitian(rho)
        if values.min() < -config.PSD_TOL:
            raise ValueError(f"Choi matrix is not positive semidefinite (min eigenvalue {values.min():.3e})")
        marginal = partial_trace(rho, keep=1)
        if np.abs(marginal - I2 / 2).max() > config.ROTATION_TOL:
            raise ValueError("Choi matrix marginal on the reference side is not I/2")
        return frozen_array(rho, complex)


############################
# OPERATIONS
############################
def partial_trace(rho: ComplexMatrix, keep: int) -> ComplexMatrix:
    """Reduced state of a two-qubit matrix; keep=0 keeps the first factor."""
    t = np.asarray(rho).reshape(2, 2, 2, 2)
    if keep == 0:
        return np.einsum("abcb->ac", t)
    return np.einsum("abad->bd", t)


def apply_pauli(p: PauliProbabilities, rho: QubitState) -> QubitState:
    return QubitState(bloch=p.lambdas * rho.bloch)


def apply_pauli_matrix(p: PauliProbabilities, rho: ComplexMatrix) -> ComplexMatrix:
    """Kraus form sum_j p_j sigma_j rho sigma_j."""
    rho = np.asarray(rho, dtype=complex)
    return sum(pj * s @ rho @ s for pj, s in zip(p.p, PAULI))


def apply_unital(c: UnitalChannel, rho: QubitState) -> QubitState:
    return QubitState(bloch=c.bloch_matrix @ rho.bloch)


def rotation_from_unitary(v: Unitary2) -> Rotation3:
    """R_ij = Tr(sigma_i V sigma_j V^H) / 2."""
    u = v.matrix
    r = 0.5 * np.real(np.einsum("iab,bc,jcd,da->ij", PAULI_VECTOR, u, PAULI_VECTOR, u.conj().T))
    return Rotation3(matrix=r)


def unitary_from_rotation(r: Rotation3) -> Unitary2:
    """SU(2) preimage of r, phased so its first nonzero entry is real and positive."""
    x, y, z, w = Rotation.from_matrix(r.matrix).as_quat()
    u = w * I2 - 1j * (x * PAULI[1] + y * PAULI[2] + z * PAULI[3])
    flat = u.reshape(-1)
    lead = flat[np.flatnonzero(np.abs(flat) > 1e-12)[0]]
    return Unitary2(matrix=u * (np.conj(lead) / abs(lead)))


def _order_ties(o1: np.ndarray, sigma: np.ndarray, o2: np.ndarray):
    """Among column permutations within tied singular values, keep the one with o1 closest to I."""
    best = (0, 1, 2)
    best_dist = float(np.linalg.norm(o1 - np.eye(3)))
    for perm in itertools.permutations(range(3)):
        perm = list(perm)
        if np.abs(sigma[perm] - sigma).max() > 1e-12:
            continue
        dist = float(np.linalg.norm(o1[:, perm] - np.eye(3)))
        if dist < best_dist - 1e-15:
            best, best_dist = tuple(perm), dist
    best = list(best)
    return o1[:, best], sigma[best], o2[:, best]


def canonical_decompose(t) -> UnitalChannel:
    """Factor a unital Bloch matrix into (rotation, Pauli channel, rotation)."""
    t = np.asarray(t, dtype=float)
    if t.shape != (3, 3) or not np.all(np.isfinite(t)):
        raise ValueError("Bloch matrix must be a finite 3x3 real matrix")

    o1, sigma, o2t = np.linalg.svd(t)
    o1, sigma, o2 = _order_ties(o1, sigma.copy(), o2t.T)
    if np.linalg.det(o1) < 0:
        o1[:, 2] *= -1
        sigma[2] *= -1
    if np.linalg.det(o2) < 0:
        o2[:, 2] *= -1
        sigma[2] *= -1

    for signs in _SIGN_FOLDS:
        signs = np.asarray(signs, dtype=float)
        p = p_from_lambdas(sigma * signs)
        if p.min() >= -config.CP_TOL:
            break
    else:
        raise ChannelValidationError(
            f"Bloch matrix is not completely positive: signed singular values "
            f"({sigma[0]:.12g}, {sigma[1]:.12g}, {sigma[2]:.12g}) give p = {np.round(p, 12).tolist()}",
            lambdas=sigma,
        )

    p = np.clip(p, 0.0, None)
    p = PauliProbabilities(p=p / p.sum())
    r_out = Rotation3(matrix=o1 * signs)
    r_in = Rotation3(matrix=o2.T)
    channel = UnitalChannel.compose(r_out, p, r_in)
    residual = float(np.abs(channel.bloch_matrix - t).max())
    if residual > config.ROTATION_TOL:
        logger.info(f"Clipped boundary probabilities; reconstruction residual {residual:.3e}")
    return channel


def choi_state(p: PauliProbabilities) -> ChoiState:
    """(E_p x I)|psi+><psi+| with |psi+> = (|00> + |11>)/sqrt(2)."""
    p0, p1, p2, p3 = p.p
    rho = 0.5 * np.array(
        [[p0 + p3, 0, 0, p0 - p3],
         [0, p1 + p2, p1 - p2, 0],
         [0, p1 - p2, p1 + p2, 0],
         [p0 - p3, 0, 0, p0 + p3]],
        dtype=complex,
    )
    return ChoiState(matrix=rho)


def choi_state_unital(c: UnitalChannel) -> ChoiState:
    """(E x I)|psi+><psi+| = (I x I + sum_ij T_ij c_j sigma_i x sigma_j) / 4."""
    coeff = c.bloch_matrix * _BELL_SIGNS
    correlations = np.einsum("ij,iab,jcd->acbd", coeff, PAULI_VECTOR, PAULI_VECTOR).reshape(4, 4)
    return ChoiState(matrix=0.25 * (np.eye(4) + correlations))


############################
# SAMPLING
############################
def random_rotation(rng: np.random.Generator) -> Rotation3:
    return Rotation3(matrix=Rotation.random(None, rng).as_matrix())


def uniform_simplex(cfg: SamplerConfig) -> np.ndarray:
    """(count, 4) probability vectors, uniform on the simplex (ordered uniform spacings)."""
    u = np.sort(generator(cfg).uniform(0.0, 1.0, (cfg.count, 3)), axis=1)
    edges = np.concatenate([np.zeros((cfg.count, 1)), u, np.ones((cfg.count, 1))], axis=1)
    return np.diff(edges, axis=1)
