"""Bipartite states and the predicates used to reason about their entanglement."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import DimensionError, InvalidStateError, UnsupportedDimensionsError
from .linalg import Tolerance, as_tolerance, frobenius

logger = logging.getLogger(__name__)

#: Deviations of a pure state's norm from 1 below this are left alone.
NORM_SLACK = 1e-12
#: Deviations at or above this are rejected instead of renormalized.
NORM_REJECT = 0.5

# subsystem sizes for which a positive partial transpose implies separability
_PPT_EXACT = {(2, 2), (2, 3), (3, 2)}


def _dims(dims) -> tuple[int, int]:
    try:
        dA, dB = (int(d) for d in dims)
    except (TypeError, ValueError):
        raise DimensionError(f"dims must be a pair of positive integers, got {dims!r}")
    if dA < 1 or dB < 1:
        raise DimensionError(f"dims must be a pair of positive integers, got {dims!r}")
    return dA, dB


@dataclass(frozen=True, eq=False)
class PureState:
    """A normalized bipartite state vector.

    Vectors whose norm is off by more than ``NORM_SLACK`` but less than
    ``NORM_REJECT`` are rescaled, and a note is recorded in ``warnings``.
    """

    amplitudes: np.ndarray
    dims: tuple[int, int]
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        dims = _dims(self.dims)
        vec = np.asarray(self.amplitudes, dtype=np.complex128).ravel().copy()
        if vec.size != dims[0] * dims[1]:
            raise DimensionError(f"{vec.size} amplitudes do not match dims {dims}")
        if not np.all(np.isfinite(vec)):
            raise InvalidStateError("amplitudes contain NaN or Inf")
        norm = float(np.linalg.norm(vec))
        notes = list(self.warnings)
        deviation = abs(norm - 1.0)
        if deviation >= NORM_REJECT:
            raise InvalidStateError(f"state vector norm {norm:.6g} is too far from 1 to renormalize")
        if deviation > NORM_SLACK:
            vec = vec / norm
            msg = f"state vector had norm {norm:.12g}; renormalized"
            logger.info(msg)
            notes.append(msg)
        vec.setflags(write=False)
        object.__setattr__(self, "amplitudes", vec)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "warnings", tuple(notes))

    def density_matrix(self) -> np.ndarray:
        return linalg.projector(self.amplitudes)

    def to_state(self, tol=None) -> "BipartiteState":
        return BipartiteState(self.density_matrix(), self.dims, tol=tol, pure=self.amplitudes)

    @classmethod
    def product(cls, a, b) -> "PureState":
        a = np.asarray(a, dtype=np.complex128).ravel()
        b = np.asarray(b, dtype=np.complex128).ravel()
        return cls(np.kron(a, b), (a.size, b.size))


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """A validated density matrix on A (x) B.

    ``pure`` optionally keeps the state vector the matrix was built from,
    so that pure members survive a save/load cycle in vector form.
    """

    rho: np.ndarray
    dims: tuple[int, int]
    tol: Tolerance | float | None = field(default=None, repr=False)
    pure: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        dims = _dims(self.dims)
        rho = linalg.as_matrix(self.rho).copy()
        if rho.shape[0] != dims[0] * dims[1]:
            raise DimensionError(f"matrix of size {rho.shape[0]} does not match dims {dims}")
        tol = as_tolerance(self.tol)
        if not linalg.is_density_matrix(rho, tol):
            raise InvalidStateError(_diagnose(rho, tol))
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "tol", tol)
        if self.pure is not None:
            vec = np.asarray(self.pure, dtype=np.complex128).ravel().copy()
            vec.setflags(write=False)
            object.__setattr__(self, "pure", vec)

    @classmethod
    def from_vector(cls, amplitudes, dims, tol=None) -> "BipartiteState":
        return PureState(amplitudes, dims).to_state(tol)

    @classmethod
    def product(cls, rho_a, rho_b, tol=None) -> "BipartiteState":
        rho_a, rho_b = linalg.as_matrix(rho_a), linalg.as_matrix(rho_b)
        return cls(linalg.tensor_product(rho_a, rho_b), (rho_a.shape[0], rho_b.shape[0]), tol=tol)

    def marginal(self, party: str) -> np.ndarray:
        return linalg.partial_trace(self.rho, self.dims, keep=party)

    def __repr__(self):
        return f"BipartiteState(dims={self.dims}, rho=\n{np.array2string(self.rho, precision=4)})"


def _diagnose(rho: np.ndarray, tol: Tolerance) -> str:
    scale = frobenius(rho)
    herm = frobenius(rho - linalg.dagger(rho))
    if not tol.accepts(herm, scale):
        return f"not Hermitian (anti-Hermitian part {herm:.3e})"
    tr = np.trace(rho)
    if not tol.accepts(abs(tr - 1.0), 1.0):
        return f"trace is {tr.real:.12g}, expected 1"
    lam = linalg.jacobi_eigh(rho)[0][0]
    return f"not positive semidefinite (minimum eigenvalue {lam:.3e})"


def _as_state(s) -> BipartiteState:
    if isinstance(s, BipartiteState):
        return s
    if isinstance(s, PureState):
        return s.to_state()
    raise TypeError(f"expected a BipartiteState or PureState, got {type(s).__name__}")


def marginals(s: BipartiteState) -> tuple[np.ndarray, np.ndarray]:
    """Reduced density matrices ``(tr_B rho, tr_A rho)``."""
    s = _as_state(s)
    return s.marginal("A"), s.marginal("B")


def pt_eigenvalues(s: BipartiteState, which: str = "B") -> np.ndarray:
    s = _as_state(s)
    return linalg.jacobi_eigh(linalg.partial_transpose(s.rho, s.dims, which))[0]


def is_ppt(s: BipartiteState, tol=None, which: str = "B") -> bool:
    tol = as_tolerance(tol)
    s = _as_state(s)
    return bool(pt_eigenvalues(s, which)[0] >= -tol.bound(frobenius(s.rho)))


def negativity(s: BipartiteState) -> float:
    """Sum of the magnitudes of the negative eigenvalues of the partial transpose."""
    lam = pt_eigenvalues(s)
    return float(np.clip(-lam, 0.0, None).sum())


def ppt_is_exact(dims) -> bool:
    dA, dB = _dims(dims)
    return dA == 1 or dB == 1 or (dA, dB) in _PPT_EXACT


def is_separable(s: BipartiteState, tol=None) -> bool:
    """Separability via the PPT criterion.

    Raises:
        UnsupportedDimensionsError: outside 2x2, 2x3 and 3x2, where a positive
            partial transpose no longer guarantees separability. Use
            :func:`is_ppt` there as a necessary condition only.
    """
    s = _as_state(s)
    if not ppt_is_exact(s.dims):
        raise UnsupportedDimensionsError(
            f"PPT is not sufficient for separability at dims {s.dims}; use is_ppt"
        )
    return is_ppt(s, tol)


def product_deviation(s: BipartiteState) -> float:
    s = _as_state(s)
    rho_a, rho_b = marginals(s)
    return frobenius(s.rho - linalg.tensor_product(rho_a, rho_b))


def is_product(s: BipartiteState, tol=None) -> bool:
    tol = as_tolerance(tol)
    s = _as_state(s)
    return tol.accepts(product_deviation(s), frobenius(s.rho))


def is_maximally_entangled(p, tol=None) -> bool:
    """True iff a pure state's A marginal is the maximally mixed state 1/n.

    Accepts a :class:`PureState`, or a :class:`BipartiteState` which must
    then also be pure (purity 1 within tolerance).
    """
    tol = as_tolerance(tol)
    if isinstance(p, PureState):
        dims, rho = p.dims, p.density_matrix()
    else:
        p = _as_state(p)
        dims, rho = p.dims, p.rho
        purity = float(np.trace(rho @ rho).real)
        if not tol.accepts(abs(purity - 1.0), 1.0):
            return False
    dA, dB = dims
    if dA != dB:
        raise UnsupportedDimensionsError(f"maximal entanglement needs dA == dB, got {dims}")
    rho_a = linalg.partial_trace(rho, dims, keep="A")
    return tol.accepts(frobenius(rho_a - np.eye(dA) / dA), 1.0)
