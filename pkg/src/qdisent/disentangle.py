"""State-dependent disentanglement machines.

A machine is built for a known, finite set of bipartite states and is then
handed one member without being told which.  Its output must keep both
reduced density matrices of that member while removing the entanglement.

Three sufficient conditions are checked, in this order of preference:

* the members are perfectly distinguishable: identify the member, then
  prepare the product of its marginals (``MeasurePrepare``);
* all members share both marginals: prepare that product regardless of
  the input (``BilocalPrepare``);
* one party's marginals commute: broadcast that party's qubit onto an
  ancilla in the common eigenbasis and discard the ancilla
  (``LocalBroadcastB`` / ``LocalBroadcastA``).  The output is separable
  but generally not a product state.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import linalg
from .entanglement import (
    BipartiteState,
    PureState,
    is_ppt,
    is_product,
    is_separable,
    negativity,
    ppt_is_exact,
)
from .errors import (
    AmbiguousMatchError,
    DimensionError,
    NoMatchError,
    NonUnitaryError,
    PreconditionViolated,
    UnsupportedDimensionsError,
)
from .linalg import Tolerance, as_tolerance, frobenius

# Offsets of the B-coherences in a two-qubit density matrix: the entries the
# broadcast removes.  (0, 1) and (2, 3) must be opposite for B's marginal to
# be diagonal.
_B_COHERENCES = ((0, 1), (0, 3), (1, 2), (2, 3))


class Machine(str, enum.Enum):
    MEASURE_PREPARE = "MeasurePrepare"
    BILOCAL_PREPARE = "BilocalPrepare"
    LOCAL_BROADCAST_B = "LocalBroadcastB"
    LOCAL_BROADCAST_A = "LocalBroadcastA"
    NONE = "None"

    @property
    def yields_product(self) -> bool:
        return self in (Machine.MEASURE_PREPARE, Machine.BILOCAL_PREPARE)

    @property
    def party(self) -> str | None:
        return {Machine.LOCAL_BROADCAST_B: "B", Machine.LOCAL_BROADCAST_A: "A"}.get(self)


#: CLI method names for each machine.
METHODS = {
    "prop1a": (Machine.MEASURE_PREPARE,),
    "prop1b": (Machine.BILOCAL_PREPARE,),
    "prop2": (Machine.LOCAL_BROADCAST_B, Machine.LOCAL_BROADCAST_A),
    "auto": tuple(m for m in Machine if m is not Machine.NONE),
}


@dataclass(frozen=True, eq=False)
class StateSet:
    """Named, ordered collection of labelled states sharing subsystem dims."""

    name: str
    dims: tuple[int, int]
    members: tuple[tuple[str, BipartiteState], ...]
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        members = tuple((str(label), state) for label, state in self.members)
        if not members:
            raise ValueError(f"state set {self.name!r} has no members")
        dims = tuple(int(d) for d in self.dims)
        labels = [label for label, _ in members]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate labels in state set {self.name!r}: {labels}")
        for label, state in members:
            if not isinstance(state, BipartiteState):
                raise TypeError(f"member {label!r} is not a BipartiteState")
            if state.dims != dims:
                raise DimensionError(f"member {label!r} has dims {state.dims}, set has {dims}")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "warnings", tuple(self.warnings))

    @classmethod
    def from_states(cls, name: str, states, dims=None, tol=None) -> "StateSet":
        """Build a set from ``(label, state)`` pairs or a mapping.

        States may be :class:`BipartiteState`, :class:`PureState` or raw
        matrices (which then need ``dims``).  Normalization warnings of
        pure states are collected on the set.
        """
        items = states.items() if hasattr(states, "items") else states
        members, notes = [], []
        for label, st in items:
            if isinstance(st, PureState):
                notes.extend(f"{label}: {w}" for w in st.warnings)
                st = st.to_state(tol)
            elif not isinstance(st, BipartiteState):
                if dims is None:
                    raise ValueError("dims are required for raw matrices")
                st = BipartiteState(st, dims, tol=tol)
            members.append((label, st))
        dims = members[0][1].dims if members else dims
        return cls(name, dims, tuple(members), tuple(notes))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[tuple[str, BipartiteState]]:
        return iter(self.members)

    @property
    def labels(self) -> list[str]:
        return [label for label, _ in self.members]

    @property
    def states(self) -> list[BipartiteState]:
        return [s for _, s in self.members]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no state labelled {label!r} in {self.name!r}; have {self.labels}") from None

    def __getitem__(self, label: str) -> BipartiteState:
        return self.members[self.index(label)][1]


@dataclass(frozen=True)
class Classification:
    perfectly_distinguishable: bool
    identical_marginals: bool
    commuting_marginals_A: bool
    commuting_marginals_B: bool
    selected_machine: Machine
    # informational only; never changes the selected machine
    all_members_separable: bool | None = None

    def admits(self, machine: Machine) -> bool:
        return {
            Machine.MEASURE_PREPARE: self.perfectly_distinguishable,
            Machine.BILOCAL_PREPARE: self.identical_marginals,
            Machine.LOCAL_BROADCAST_B: self.commuting_marginals_B,
            Machine.LOCAL_BROADCAST_A: self.commuting_marginals_A,
            Machine.NONE: False,
        }[machine]


@dataclass(frozen=True, eq=False)
class DisentanglementReport:
    input_label: str
    machine: Machine | None
    output: BipartiteState
    marginal_deviation_A: float
    marginal_deviation_B: float
    output_is_product: bool
    output_is_separable: bool
    ppt_margin: float
    notes: tuple[str, ...] = field(default=())

    def marginals_preserved(self, tol=None) -> bool:
        tol = as_tolerance(tol)
        return tol.accepts(self.marginal_deviation_A) and tol.accepts(self.marginal_deviation_B)


# -- predicates -------------------------------------------------------------


def overlap(a: BipartiteState, b: BipartiteState) -> float:
    """Hilbert-Schmidt overlap tr(rho_a rho_b)."""
    return float(np.trace(a.rho @ b.rho).real)


def are_perfectly_distinguishable(states: StateSet, tol=None) -> bool:
    """Members have pairwise orthogonal supports: tr(rho_i rho_j) = 0 for i != j."""
    tol = as_tolerance(tol)
    st = states.states
    return all(
        tol.accepts(abs(overlap(st[i], st[j])), frobenius(st[i].rho) * frobenius(st[j].rho))
        for i in range(len(st))
        for j in range(i + 1, len(st))
    )


def have_identical_marginals(states: StateSet, tol=None) -> bool:
    tol = as_tolerance(tol)
    for party in ("A", "B"):
        ref = states.states[0].marginal(party)
        for s in states.states[1:]:
            m = s.marginal(party)
            if not tol.accepts(frobenius(m - ref), frobenius(ref)):
                return False
    return True


def commuting_marginals(states: StateSet, party: str, tol=None) -> bool:
    tol = as_tolerance(tol)
    margs = [s.marginal(party) for s in states.states]
    return all(
        linalg.commutes(margs[i], margs[j], tol)
        for i in range(len(margs))
        for j in range(i + 1, len(margs))
    )


def classify(states: StateSet, tol=None) -> Classification:
    """Evaluate every sufficient condition and pick the preferred machine.

    Broadcasting machines are only offered for two-qubit sets.
    """
    tol = as_tolerance(tol)
    two_qubit = states.dims == (2, 2)
    flags = dict(
        perfectly_distinguishable=are_perfectly_distinguishable(states, tol),
        identical_marginals=have_identical_marginals(states, tol),
        commuting_marginals_A=two_qubit and commuting_marginals(states, "A", tol),
        commuting_marginals_B=two_qubit and commuting_marginals(states, "B", tol),
    )
    order = (
        (Machine.MEASURE_PREPARE, "perfectly_distinguishable"),
        (Machine.BILOCAL_PREPARE, "identical_marginals"),
        (Machine.LOCAL_BROADCAST_B, "commuting_marginals_B"),
        (Machine.LOCAL_BROADCAST_A, "commuting_marginals_A"),
    )
    selected = next((m for m, key in order if flags[key]), Machine.NONE)
    all_sep = None
    if ppt_is_exact(states.dims):
        all_sep = all(is_separable(s, tol) for s in states.states)
    return Classification(**flags, selected_machine=selected, all_members_separable=all_sep)


def identify(states: StateSet, state: BipartiteState, tol=None) -> int:
    """Index of the unique member equal to ``state`` within tolerance.

    Raises:
        NoMatchError: no member matches.
        AmbiguousMatchError: several members match, which means the tolerance
            is too loose for this set.
    """
    tol = as_tolerance(tol)
    if state.dims != states.dims:
        raise DimensionError(f"state dims {state.dims} do not match set dims {states.dims}")
    hits = [
        i
        for i, member in enumerate(states.states)
        if tol.accepts(frobenius(state.rho - member.rho), frobenius(member.rho))
    ]
    if not hits:
        raise NoMatchError(f"state is not a member of {states.name!r}")
    if len(hits) > 1:
        labels = [states.labels[i] for i in hits]
        raise AmbiguousMatchError(f"state matches several members of {states.name!r}: {labels}")
    return hits[0]


def fits_general_form(state: BipartiteState, tol=None) -> bool:
    """Two-qubit state whose B marginal is diagonal: rho[0,1] + rho[2,3] = 0."""
    tol = as_tolerance(tol)
    if state.dims != (2, 2):
        raise UnsupportedDimensionsError(f"general form is defined for two qubits, got {state.dims}")
    r = state.rho
    return tol.accepts(abs(r[0, 1] + r[2, 3]), frobenius(r))


# -- broadcasting -----------------------------------------------------------


def broadcast_unitary() -> np.ndarray:
    """Controlled-NOT with the first qubit as control: |b>|c> -> |b>|b xor c>."""
    return np.array(
        [[1, 0, 0, 0],
         [0, 1, 0, 0],
         [0, 0, 0, 1],
         [0, 0, 1, 0]],
        dtype=np.int64,
    )


_ANCILLA = np.array([[1, 0], [0, 0]], dtype=np.complex128)


def broadcast(rho, basis=None) -> np.ndarray:
    """Copy a qubit's statistics onto a fresh ancilla.

    ``rho`` is appended to the ancilla ``|0><0|`` and the pair is conjugated by
    :func:`broadcast_unitary`, in the eigenbasis given by ``basis`` (columns).
    When ``rho`` is diagonal in that basis both one-qubit marginals of the
    returned 4x4 state equal ``rho``.
    """
    rho = linalg.as_matrix(rho)
    V = np.eye(2) if basis is None else linalg.as_matrix(basis)
    VV = np.kron(V, V)
    U = broadcast_unitary()
    in_basis = linalg.dagger(V) @ rho @ V
    out = U @ np.kron(in_basis, _ANCILLA) @ U.T
    return VV @ out @ linalg.dagger(VV)


def _check_unitary(V, tol: Tolerance) -> np.ndarray:
    V = linalg.as_matrix(V)
    if V.shape != (2, 2):
        raise DimensionError(f"local basis must be 2x2, got {V.shape}")
    if not tol.accepts(frobenius(linalg.dagger(V) @ V - np.eye(2)), 1.0):
        raise NonUnitaryError("local basis change is not unitary")
    return V


def local_broadcast(
    state: BipartiteState,
    party: str = "B",
    tol=None,
    basis=None,
    discard: str = "ancilla",
) -> BipartiteState:
    """Broadcast one party's qubit onto a local ancilla and discard one copy.

    The qubit is rotated into ``basis`` (the columns of a 2x2 unitary; the
    computational basis by default), joined with an ancilla in ``|0><0|``,
    conjugated by the controlled-NOT with the party's qubit as control, and
    rotated back after the ancilla (``discard="ancilla"``) or the original
    qubit (``discard="party"``) is traced out. Both choices give the same
    state.

    Raises:
        UnsupportedDimensionsError: for anything other than two qubits.
        NonUnitaryError: if ``basis`` is not unitary.
    """
    tol = as_tolerance(tol)
    if state.dims != (2, 2):
        raise UnsupportedDimensionsError(f"local broadcasting is implemented for two qubits, got {state.dims}")
    if discard not in ("ancilla", "party"):
        raise ValueError(f"discard must be 'ancilla' or 'party', got {discard!r}")
    V = _check_unitary(np.eye(2) if basis is None else basis, tol)
    if party == "A":
        swapped = BipartiteState(linalg.swap_subsystems(state.rho, state.dims), state.dims, tol=tol)
        out = local_broadcast(swapped, "B", tol, V, discard)
        return BipartiteState(linalg.swap_subsystems(out.rho, out.dims), out.dims, tol=tol)
    if party != "B":
        raise ValueError(f"party must be 'A' or 'B', got {party!r}")

    W = np.kron(np.eye(2), V)
    rho = linalg.dagger(W) @ state.rho @ W
    joint = np.kron(rho, _ANCILLA)  # A, B, C
    UU = np.kron(np.eye(2), broadcast_unitary())
    joint = UU @ joint @ UU.T
    reduced = linalg.trace_out(joint, (2, 2, 2), 2 if discard == "ancilla" else 1)
    return BipartiteState(W @ reduced @ linalg.dagger(W), state.dims, tol=tol)


def broadcast_closed_form(rho) -> np.ndarray:
    """Output of the computational-basis broadcast written down directly.

    Every coherence between different B basis states is dropped; the other
    six independent entries are copied.
    """
    out = linalg.as_matrix(rho).copy()
    if out.shape != (4, 4):
        raise DimensionError("closed form is for two-qubit matrices")
    for i, j in _B_COHERENCES:
        out[i, j] = out[j, i] = 0.0
    return out


# -- machines ---------------------------------------------------------------


class ProductMachine:
    """Measure-and-prepare or bilocal preparation; always outputs a product state."""

    def __init__(self, states: StateSet, kind: Machine, tol=None):
        if not kind.yields_product:
            raise ValueError(f"{kind.value} is not a product machine")
        self.states = states
        self.kind = kind
        self.tol = as_tolerance(tol)
        self._targets = [
            linalg.tensor_product(s.marginal("A"), s.marginal("B")) for s in states.states
        ]

    def apply(self, state: BipartiteState) -> BipartiteState:
        if state.dims != self.states.dims:
            raise DimensionError(f"input dims {state.dims} do not match set dims {self.states.dims}")
        if self.kind is Machine.MEASURE_PREPARE:
            target = self._targets[identify(self.states, state, self.tol)]
        else:
            target = self._targets[0]
        return BipartiteState(target, self.states.dims, tol=self.tol)


class BroadcastMachine:
    """Oblivious local broadcast in the common eigenbasis of one party's marginals.

    Any two-qubit input is accepted; marginal preservation is only guaranteed
    for inputs whose marginal on ``party`` is diagonal in that basis.
    """

    def __init__(self, states: StateSet, kind: Machine, tol=None):
        if kind.party is None:
            raise ValueError(f"{kind.value} is not a broadcasting machine")
        if states.dims != (2, 2):
            raise UnsupportedDimensionsError(f"broadcasting machines need two qubits, got {states.dims}")
        self.states = states
        self.kind = kind
        self.party = kind.party
        self.tol = as_tolerance(tol)
        self.basis = linalg.simultaneous_diagonalizer(
            [s.marginal(self.party) for s in states.states], self.tol
        )

    def apply(self, state: BipartiteState) -> BipartiteState:
        return local_broadcast(state, self.party, self.tol, basis=self.basis)


def build_machine(states: StateSet, method: str | Machine = "auto", tol=None, classification=None):
    """Construct the machine for ``states``.

    ``method`` is one of ``auto``, ``prop1a`` (measure and prepare),
    ``prop1b`` (bilocal preparation), ``prop2`` (local broadcasting, B side
    preferred), or a :class:`Machine` member.

    Raises:
        PreconditionViolated: if the requested machine's condition fails.
    """
    tol = as_tolerance(tol)
    cls = classification or classify(states, tol)
    if isinstance(method, Machine):
        candidates = (method,)
    else:
        try:
            candidates = METHODS[method]
        except KeyError:
            raise ValueError(f"unknown method {method!r}; choose from {sorted(METHODS)}") from None
    chosen = next((m for m in candidates if cls.admits(m)), None)
    if chosen is None:
        wanted = "/".join(m.value for m in candidates)
        raise PreconditionViolated(
            f"set {states.name!r} satisfies no condition for {wanted} "
            f"(selected machine: {cls.selected_machine.value})"
        )
    if chosen.yields_product:
        return ProductMachine(states, chosen, tol)
    return BroadcastMachine(states, chosen, tol)


def disentangle_to_product(states: StateSet, state: BipartiteState, tol=None, method: str = "auto"):
    """Map ``state`` to the product of the appropriate member's marginals.

    ``method`` may be ``auto``, ``prop1a`` or ``prop1b``.
    """
    if method not in ("auto", "prop1a", "prop1b"):
        raise ValueError(f"{method!r} does not produce product states")
    cls = classify(states, tol)
    if method == "auto":
        method = "prop1a" if cls.perfectly_distinguishable else "prop1b"
    return build_machine(states, method, tol, cls).apply(state)


def disentangle_to_separable(states: StateSet, state: BipartiteState, tol=None, party: str | None = None):
    """Run the local broadcasting machine of ``states`` on ``state``.

    ``party`` forces the broadcasting side; by default B is used when its
    marginals commute, otherwise A.
    """
    method = {None: "prop2", "B": Machine.LOCAL_BROADCAST_B, "A": Machine.LOCAL_BROADCAST_A}[party]
    return build_machine(states, method, tol).apply(state)


def verify(
    original: BipartiteState,
    output: BipartiteState,
    tol=None,
    label: str = "",
    machine: Machine | None = None,
) -> DisentanglementReport:
    """Measure how well ``output`` disentangles ``original``."""
    tol = as_tolerance(tol)
    if original.dims != output.dims:
        raise DimensionError(f"dims differ: {original.dims} vs {output.dims}")
    notes = []
    dev_a = frobenius(original.marginal("A") - output.marginal("A"))
    dev_b = frobenius(original.marginal("B") - output.marginal("B"))
    product = is_product(output, tol)
    if ppt_is_exact(output.dims):
        separable = is_separable(output, tol)
    else:
        # PPT certifies nothing here; only a product output counts
        separable = product
        notes.append(f"PPT is only necessary for separability at dims {output.dims}")
    return DisentanglementReport(
        input_label=label,
        machine=machine,
        output=output,
        marginal_deviation_A=dev_a,
        marginal_deviation_B=dev_b,
        output_is_product=product,
        output_is_separable=separable or product,
        ppt_margin=negativity(output),
        notes=tuple(notes),
    )


def run(states: StateSet, label: str, method: str = "auto", tol=None) -> DisentanglementReport:
    """Disentangle the member ``label`` of ``states`` and verify the result."""
    tol = as_tolerance(tol)
    machine = build_machine(states, method, tol)
    original = states[label]
    return verify(original, machine.apply(original), tol, label=label, machine=machine.kind)


def run_all(states: StateSet, method: str = "auto", tol=None) -> list[DisentanglementReport]:
    tol = as_tolerance(tol)
    machine = build_machine(states, method, tol)
    return [verify(s, machine.apply(s), tol, label=lbl, machine=machine.kind) for lbl, s in states]
