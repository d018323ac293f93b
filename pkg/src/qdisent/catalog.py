"""Named state sets with known disentanglement verdicts, and random test states."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .disentangle import StateSet
from .entanglement import BipartiteState, PureState

KET0 = np.array([1, 0], dtype=np.complex128)
KET1 = np.array([0, 1], dtype=np.complex128)
KET_PLUS = np.array([1, 1], dtype=np.complex128) / math.sqrt(2)

# claim kinds, used by the demo to judge agreement
CLAIM_PRODUCT = "product"  # can be disentangled into product states
CLAIM_SEPARABLE_ONLY = "separable-only"  # separable yes, product no
CLAIM_NOT_PRODUCT = "not-product"  # no disentanglement into product states
CLAIM_IMPOSSIBLE = "impossible"  # no disentanglement at all


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    set: StateSet
    claim: str
    claim_kind: str
    notes: tuple[str, ...] = ()


def _two(*amps) -> np.ndarray:
    return np.array(amps, dtype=np.complex128)


def eq3_pair(theta: float, phi: float) -> StateSet:
    """Two superpositions of rotated product states.

    psi0 = cos(phi) |u>|u> + sin(phi) |u'>|u'> with u = (cos t, sin t),
    u' = (sin t, -cos t); psi1 is the same with the sign of sin(t) flipped.
    The two terms of each state are orthogonal, so both are unit vectors.
    """
    ct, st = math.cos(theta), math.sin(theta)
    cp, sp = math.cos(phi), math.sin(phi)
    u0, w0 = _two(ct, st), _two(st, -ct)
    u1, w1 = _two(ct, -st), _two(st, ct)
    psi0 = cp * np.kron(u0, u0) + sp * np.kron(w0, w0)
    psi1 = cp * np.kron(u1, u1) + sp * np.kron(w1, w1)
    return StateSet.from_states(
        f"eq3(theta={theta:.6g}, phi={phi:.6g})",
        [("psi0", PureState(psi0, (2, 2))), ("psi1", PureState(psi1, (2, 2)))],
    )


# The literal second state "(1/sqrt2)|00> + |11>" has norm sqrt(3/2);
# the bracketed form of the same vector in the four-state set is used.
EQ4_PSI2_LITERAL = _two(1 / math.sqrt(2), 0, 0, 1)
EQ4_PSI2_NOTE = (
    "psi2 literal (1/sqrt2)|00> + |11> has norm sqrt(3/2); "
    "read as (1/sqrt2)(|00> + |11>)"
)
# Literal "(1/sqrt2)|++>" has norm 1/sqrt2; renormalized to |++>.
EQ5_PSI3_LITERAL = np.kron(KET_PLUS, KET_PLUS) / math.sqrt(2)


def _phi_plus() -> np.ndarray:
    return _two(1, 0, 0, 1) / math.sqrt(2)


def eq4_set() -> StateSet:
    s = StateSet.from_states(
        "eq4",
        [
            ("psi0", PureState(np.kron(KET0, KET0), (2, 2))),
            ("psi1", PureState(np.kron(KET1, KET1), (2, 2))),
            ("psi2", PureState(_phi_plus(), (2, 2))),
        ],
    )
    return StateSet(s.name, s.dims, s.members, s.warnings + (EQ4_PSI2_NOTE,))


def eq5_set() -> StateSet:
    return StateSet.from_states(
        "eq5",
        [
            ("psi0", PureState(np.kron(KET0, KET0), (2, 2))),
            ("psi1", PureState(np.kron(KET1, KET1), (2, 2))),
            ("psi2", PureState(_phi_plus(), (2, 2))),
            ("psi3", PureState(EQ5_PSI3_LITERAL, (2, 2))),
        ],
    )


def bell_vectors() -> dict[str, np.ndarray]:
    r = 1 / math.sqrt(2)
    return {
        "phi+": _two(r, 0, 0, r),
        "phi-": _two(r, 0, 0, -r),
        "psi+": _two(0, r, r, 0),
        "psi-": _two(0, r, -r, 0),
    }


def bell_states() -> StateSet:
    return StateSet.from_states(
        "bell", [(k, PureState(v, (2, 2))) for k, v in bell_vectors().items()]
    )


def maxent_pair(alpha: float = math.pi / 5) -> StateSet:
    """Phi+ and (1 (x) exp(-i alpha Z)) Phi+, maximally entangled with overlap cos(alpha)."""
    phase = np.diag([np.exp(-1j * alpha), np.exp(1j * alpha)])
    rotated = np.kron(np.eye(2), phase) @ _phi_plus()
    return StateSet.from_states(
        f"maxent-pair(alpha={alpha:.6g})",
        [("phi+", PureState(_phi_plus(), (2, 2))), ("phi+rot", PureState(rotated, (2, 2)))],
    )


def entries() -> dict[str, CatalogEntry]:
    """All named sets, keyed by the names the command line accepts."""
    eq3 = eq3_pair(math.pi / 8, math.pi / 3)
    return {
        "eq3": CatalogEntry(
            "eq3", eq3,
            "no marginal-preserving map to product states",
            CLAIM_NOT_PRODUCT,
            ("evaluated at theta=pi/8, phi=pi/3",),
        ),
        "eq4": CatalogEntry(
            "eq4", eq4_set(),
            "separable outputs reachable, product outputs not",
            CLAIM_SEPARABLE_ONLY,
            (EQ4_PSI2_NOTE,),
        ),
        "eq5": CatalogEntry(
            "eq5", eq5_set(),
            "no marginal-preserving map to separable states",
            CLAIM_IMPOSSIBLE,
            ("psi3 literal (1/sqrt2)|++> has norm 1/sqrt2; renormalized to |++>",),
        ),
        "bell": CatalogEntry(
            "bell", bell_states(),
            "maximally entangled members map to products",
            CLAIM_PRODUCT,
        ),
        "maxent-pair": CatalogEntry(
            "maxent-pair", maxent_pair(),
            "two maximally entangled members map to products, overlap allowed",
            CLAIM_PRODUCT,
            ("overlap cos(pi/5) between the two members",),
        ),
    }


def get(name: str) -> CatalogEntry:
    table = entries()
    try:
        return table[name]
    except KeyError:
        raise KeyError(f"unknown catalog set {name!r}; have {sorted(table)}") from None


def names() -> list[str]:
    return ["eq3", "eq4", "eq5", "bell", "maxent-pair"]


# -- random states ----------------------------------------------------------


def random_density_matrix(rng: np.random.Generator, n: int = 4, rank: int | None = None) -> np.ndarray:
    """Ginibre-ensemble density matrix G G^H / tr(G G^H)."""
    k = n if rank is None else rank
    g = rng.normal(size=(n, k)) + 1j * rng.normal(size=(n, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng: np.random.Generator, n: int = 2) -> np.ndarray:
    """Haar-random unitary via QR with the phase fix on R's diagonal."""
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = r.diagonal()
    return q * (d / np.abs(d))


def random_pure_state(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def random_prop2_state(seed: int) -> BipartiteState:
    """Random two-qubit state whose B marginal is diagonal.

    A Ginibre state is rotated on B by the eigenbasis of its own B marginal.
    Unlike dephasing, this keeps the B-coherences generic, so the broadcast
    still has something to remove.
    """
    rng = np.random.default_rng(seed)
    rho = random_density_matrix(rng, 4)
    _, V = linalg.jacobi_eigh(linalg.partial_trace(rho, (2, 2), keep="B"))
    W = np.kron(np.eye(2), V)
    rho = linalg.dagger(W) @ rho @ W
    rho = 0.5 * (rho + linalg.dagger(rho))
    return BipartiteState(rho, (2, 2))
