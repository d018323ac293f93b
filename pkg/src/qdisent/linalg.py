"""Small dense complex linear algebra for bipartite density matrices.

Every matrix is a ``numpy.ndarray`` of dtype ``complex128``.  Bipartite
indices follow the A-major convention: basis state ``|i>_A |k>_B`` sits at
row ``i * dB + k``, so a two-qubit matrix has rows ``|00>, |01>, |10>, |11>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError, NonCommutingError, NonHermitianError

PARTIES = ("A", "B")


@dataclass(frozen=True)
class Tolerance:
    """Absolute floor plus a relative part scaled by a Frobenius norm."""

    absolute: float = 1e-9
    relative: float = 1e-9

    def __post_init__(self):
        if not (self.absolute >= 0 and self.relative >= 0):
            raise ValueError("tolerances must be non-negative")

    @classmethod
    def uniform(cls, value: float) -> "Tolerance":
        return cls(absolute=value, relative=value)

    def bound(self, scale: float = 0.0) -> float:
        return self.absolute + self.relative * scale

    def accepts(self, residual: float, scale: float = 0.0) -> bool:
        return bool(residual <= self.bound(scale))


DEFAULT_TOL = Tolerance()


def as_tolerance(tol) -> Tolerance:
    if tol is None:
        return DEFAULT_TOL
    if isinstance(tol, Tolerance):
        return tol
    return Tolerance.uniform(float(tol))


def as_matrix(a, square: bool = True) -> np.ndarray:
    """Coerce ``a`` to a finite 2-d complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionError(f"expected a matrix, got array of shape {m.shape}")
    if square and m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains NaN or Inf entries")
    return m


def frobenius(a) -> float:
    return float(np.linalg.norm(a))


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=np.complex128)
    v[index] = 1.0
    return v


def projector(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=np.complex128).ravel()
    return np.outer(v, v.conj())


def _check_party(party: str) -> str:
    if party not in PARTIES:
        raise ValueError(f"party must be 'A' or 'B', got {party!r}")
    return party


def _check_bipartite(rho, dims) -> tuple[np.ndarray, int, int]:
    m = as_matrix(rho)
    dA, dB = (int(d) for d in dims)
    if dA < 1 or dB < 1:
        raise DimensionError(f"subsystem dimensions must be positive, got {dims}")
    if m.shape[0] != dA * dB:
        raise DimensionError(
            f"matrix of size {m.shape[0]} does not match dims ({dA}, {dB})"
        )
    return m, dA, dB


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product with ``a``'s indices major."""
    return np.kron(as_matrix(a, square=False), as_matrix(b, square=False))


def trace_out(rho, dims: Sequence[int], index: int) -> np.ndarray:
    """Trace out subsystem ``index`` of a multipartite operator.

    ``dims`` lists the subsystem sizes in tensor order.
    """
    m = as_matrix(rho)
    dims = [int(d) for d in dims]
    n = len(dims)
    if m.shape[0] != math.prod(dims):
        raise DimensionError(f"matrix of size {m.shape[0]} does not match dims {dims}")
    if not 0 <= index < n:
        raise DimensionError(f"subsystem index {index} out of range for {n} parties")
    t = m.reshape(dims + dims)
    t = np.trace(t, axis1=index, axis2=index + n)
    rest = math.prod(d for i, d in enumerate(dims) if i != index)
    return t.reshape(rest, rest)


def partial_trace(rho, dims: Sequence[int], keep: str) -> np.ndarray:
    """Reduced density matrix of party ``keep`` ('A' gives tr_B rho)."""
    m, dA, dB = _check_bipartite(rho, dims)
    drop = 1 if _check_party(keep) == "A" else 0
    return trace_out(m, (dA, dB), drop)


def partial_transpose(rho, dims: Sequence[int], which: str = "B") -> np.ndarray:
    """Transpose the indices of one subsystem only."""
    m, dA, dB = _check_bipartite(rho, dims)
    t = m.reshape(dA, dB, dA, dB)
    if _check_party(which) == "B":
        t = t.transpose(0, 3, 2, 1)
    else:
        t = t.transpose(2, 1, 0, 3)
    return np.ascontiguousarray(t).reshape(dA * dB, dA * dB)


def swap_subsystems(rho, dims: Sequence[int]) -> np.ndarray:
    """Reorder an operator on A (x) B as one on B (x) A."""
    m, dA, dB = _check_bipartite(rho, dims)
    t = m.reshape(dA, dB, dA, dB).transpose(1, 0, 3, 2)
    return np.ascontiguousarray(t).reshape(dA * dB, dA * dB)


def jacobi_eigh(a, max_sweeps: int = 64) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi eigensolver for a Hermitian matrix.

    Rotations sweep the strict upper triangle row by row, so the result is
    deterministic.  Each rotation first removes the phase of ``a[p, q]`` and
    then applies the real symmetric Jacobi rotation.  The sweeps run on plain
    Python complex numbers: for the matrix sizes used here (n <= 16) that is
    several times faster than numpy slicing.

    Returns:
        (eigenvalues, V) with eigenvalues ascending and ``a = V diag(w) V^H``.
    """
    m = as_matrix(a)
    m = 0.5 * (m + dagger(m))
    n = m.shape[0]
    A = m.tolist()
    V = np.eye(n, dtype=np.complex128).tolist()
    scale = frobenius(m)
    eps = np.finfo(float).eps
    tiny = eps * eps * scale

    for _ in range(max_sweeps if n > 1 and scale > 0 else 0):
        off2 = sum(abs(A[i][j]) ** 2 for i in range(n) for j in range(n) if i != j)
        if math.sqrt(off2) <= eps * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p][q]
                r = abs(apq)
                if r <= tiny:
                    continue
                phase = (apq / r).conjugate()
                theta = (A[q][q].real - A[p][p].real) / (2.0 * r)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # columns: new_p = c*col_p - s*phase*col_q, new_q = s*col_p + c*phase*col_q
                sp, cp = s * phase, c * phase
                for row in A:
                    xp, xq = row[p], row[q]
                    row[p] = c * xp - sp * xq
                    row[q] = s * xp + cp * xq
                for row in V:
                    xp, xq = row[p], row[q]
                    row[p] = c * xp - sp * xq
                    row[q] = s * xp + cp * xq
                # rows: apply the conjugate transpose from the left
                sp_c, cp_c = sp.conjugate(), cp.conjugate()
                Ap, Aq = A[p], A[q]
                for k in range(n):
                    xp, xq = Ap[k], Aq[k]
                    Ap[k] = c * xp - sp_c * xq
                    Aq[k] = s * xp + cp_c * xq
                Ap[q] = Aq[p] = 0j
                Ap[p] = complex(Ap[p].real, 0.0)
                Aq[q] = complex(Aq[q].real, 0.0)
    w = np.array([A[i][i].real for i in range(n)])
    V = np.array(V, dtype=np.complex128).reshape(n, n)
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def is_hermitian(a, tol=None) -> bool:
    tol = as_tolerance(tol)
    m = as_matrix(a)
    return tol.accepts(frobenius(m - dagger(m)), frobenius(m))


def hermitian_eigensystem(a, tol=None) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and unitary eigenvector matrix of a Hermitian matrix.

    Raises:
        NonHermitianError: if ``a`` is not Hermitian within ``tol``.
    """
    tol = as_tolerance(tol)
    m = as_matrix(a)
    if not is_hermitian(m, tol):
        raise NonHermitianError(
            f"matrix is not Hermitian (anti-Hermitian part {frobenius(m - dagger(m)):.3e})"
        )
    return jacobi_eigh(m)


def eigvalsh(a, tol=None) -> np.ndarray:
    return hermitian_eigensystem(a, tol)[0]


def commutes(a, b, tol=None) -> bool:
    """True iff ``||ab - ba||_F`` is within tolerance relative to ``||a|| ||b||``."""
    tol = as_tolerance(tol)
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return tol.accepts(frobenius(a @ b - b @ a), frobenius(a) * frobenius(b))


def is_density_matrix(a, tol=None) -> bool:
    tol = as_tolerance(tol)
    try:
        m = as_matrix(a)
    except (ValueError, DimensionError):
        return False
    scale = frobenius(m)
    if not tol.accepts(frobenius(m - dagger(m)), scale):
        return False
    if not tol.accepts(abs(np.trace(m) - 1.0), 1.0):
        return False
    return jacobi_eigh(m)[0][0] >= -tol.bound(scale)


def simultaneous_diagonalizer(mats, tol=None, seed: int = 20000518, attempts: int = 5):
    """Unitary ``V`` such that ``V^H m V`` is diagonal for every ``m`` in ``mats``.

    Diagonalizes a random real combination of the inputs; a new combination is
    drawn when an accidental degeneracy leaves some input non-diagonal.

    Raises:
        NonCommutingError: when some pair of inputs does not commute.
    """
    tol = as_tolerance(tol)
    mats = [as_matrix(m) for m in mats]
    if not mats:
        raise ValueError("need at least one matrix")
    shape = mats[0].shape
    for m in mats:
        if m.shape != shape:
            raise DimensionError(f"shape mismatch {m.shape} vs {shape}")
        if not is_hermitian(m, tol):
            raise NonHermitianError("simultaneous diagonalization needs Hermitian inputs")
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            if not commutes(mats[i], mats[j], tol):
                c = mats[i] @ mats[j] - mats[j] @ mats[i]
                raise NonCommutingError((i, j), frobenius(c))

    rng = np.random.default_rng(seed)
    for _ in range(attempts):
        coeffs = rng.uniform(0.5, 1.5, size=len(mats))
        combo = sum(c * m for c, m in zip(coeffs, mats))
        _, V = jacobi_eigh(combo)
        if all(_is_diagonalized(V, m, tol) for m in mats):
            return V
    raise np.linalg.LinAlgError(
        f"no common eigenbasis found after {attempts} random combinations"
    )


def _is_diagonalized(V, m, tol: Tolerance) -> bool:
    d = dagger(V) @ m @ V
    off = d - np.diag(d.diagonal())
    return frobenius(off) <= 10 * tol.bound(frobenius(m))
