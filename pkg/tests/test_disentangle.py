import math

import numpy as np
import pytest

from oracles import ptrace_by_index, random_density
from qdisent import catalog, linalg
from qdisent.disentangle import (
    Classification,
    Machine,
    StateSet,
    are_perfectly_distinguishable,
    broadcast,
    broadcast_closed_form,
    broadcast_unitary,
    build_machine,
    classify,
    commuting_marginals,
    disentangle_to_product,
    disentangle_to_separable,
    fits_general_form,
    have_identical_marginals,
    identify,
    local_broadcast,
    run,
    verify,
)
from qdisent.entanglement import BipartiteState, PureState, is_product, is_separable
from qdisent.errors import (
    AmbiguousMatchError,
    NoMatchError,
    NonUnitaryError,
    PreconditionViolated,
    UnsupportedDimensionsError,
)
from qdisent.linalg import Tolerance

R = 1 / math.sqrt(2)


def pure(*amps):
    return BipartiteState.from_vector(amps, (2, 2))


def two_set(name, **states):
    return StateSet.from_states(name, states)


KET00, KET11 = pure(1, 0, 0, 0), pure(0, 0, 0, 1)
PHI_PLUS = pure(R, 0, 0, R)
PLUSPLUS = pure(0.5, 0.5, 0.5, 0.5)
ORTHO = two_set("ortho", k00=KET00, k11=KET11)


# -- set construction -------------------------------------------------------


def test_state_set_validation():
    with pytest.raises(ValueError):
        StateSet("empty", (2, 2), ())
    with pytest.raises(ValueError):
        StateSet("dup", (2, 2), (("a", KET00), ("a", KET11)))
    q = BipartiteState(np.eye(6) / 6, (2, 3))
    with pytest.raises(ValueError):
        StateSet("mixed dims", (2, 2), (("a", KET00), ("b", q)))


def test_state_set_lookup():
    assert ORTHO.labels == ["k00", "k11"]
    assert ORTHO["k11"] is ORTHO.states[1]
    with pytest.raises(KeyError):
        ORTHO["nope"]


# -- predicates -------------------------------------------------------------


def test_distinguishable_examples():
    assert are_perfectly_distinguishable(ORTHO)
    assert are_perfectly_distinguishable(catalog.bell_states())
    s = catalog.eq4_set()
    assert np.trace(s["psi0"].rho @ s["psi2"].rho).real == pytest.approx(0.5)
    assert not are_perfectly_distinguishable(s)


def test_distinguishable_mixed_orthogonal_supports():
    a = BipartiteState(np.diag([0.5, 0.5, 0, 0]), (2, 2))
    b = BipartiteState(np.diag([0, 0, 0.3, 0.7]), (2, 2))
    assert are_perfectly_distinguishable(two_set("mixed", a=a, b=b))


def test_identical_marginals_examples():
    assert have_identical_marginals(catalog.bell_states())
    assert not have_identical_marginals(ORTHO)


def test_identical_marginals_eq3_against_oracle():
    s = catalog.eq3_pair(math.pi / 8, math.pi / 3)
    psi0, psi1 = (st.rho for st in s.states)
    # index-sum oracle; frozen reference value for the shared diagonal entry
    a0, a1 = ptrace_by_index(psi0, 2, 2, "A"), ptrace_by_index(psi1, 2, 2, "A")
    b0, b1 = ptrace_by_index(psi0, 2, 2, "B"), ptrace_by_index(psi1, 2, 2, "B")
    assert a0[0, 0].real == pytest.approx(0.3232233047, abs=1e-9)
    assert a0[0, 1].real == pytest.approx(-0.1767766953, abs=1e-9)
    assert a1[0, 1].real == pytest.approx(+0.1767766953, abs=1e-9)
    expected = np.allclose(a0, a1, atol=1e-9) and np.allclose(b0, b1, atol=1e-9)
    assert expected is False
    assert have_identical_marginals(s) is expected


def test_commuting_marginals_examples():
    eq4 = catalog.eq4_set()
    assert commuting_marginals(eq4, "B")
    assert commuting_marginals(eq4, "A")
    assert not commuting_marginals(catalog.eq5_set(), "B")
    assert commuting_marginals(two_set("one", only=PHI_PLUS), "B")


# -- classification ---------------------------------------------------------


def test_classify_bell():
    c = classify(catalog.bell_states())
    assert c.perfectly_distinguishable and c.identical_marginals
    assert c.selected_machine is Machine.MEASURE_PREPARE


def test_classify_eq4():
    c = classify(catalog.eq4_set())
    assert not c.perfectly_distinguishable and not c.identical_marginals
    assert c.commuting_marginals_A and c.commuting_marginals_B
    assert c.selected_machine is Machine.LOCAL_BROADCAST_B


def test_classify_eq5():
    c = classify(catalog.eq5_set())
    assert c == Classification(False, False, False, False, Machine.NONE, all_members_separable=False)


def test_classify_single_member_is_vacuous():
    c = classify(two_set("one", only=PHI_PLUS))
    assert c.perfectly_distinguishable and c.identical_marginals
    assert c.selected_machine is Machine.MEASURE_PREPARE


def test_classify_only_a_side_commutes():
    # B marginals |0><0| and |+><+| do not commute; A marginals are both |0><0|
    s = two_set("a-side", x=KET00, y=pure(R, R, 0, 0))
    c = classify(s)
    assert not c.commuting_marginals_B and c.commuting_marginals_A
    assert not c.perfectly_distinguishable and not c.identical_marginals
    assert c.selected_machine is Machine.LOCAL_BROADCAST_A


def test_priority_distinguishable_wins():
    rng = np.random.default_rng(8)
    for _ in range(50):
        q, _ = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
        k = rng.integers(1, 5)
        s = StateSet.from_states("onb", [(f"v{i}", PureState(q[:, i], (2, 2))) for i in range(k)])
        c = classify(s)
        assert c.perfectly_distinguishable
        assert c.selected_machine is Machine.MEASURE_PREPARE


def test_all_separable_note():
    c = classify(catalog.eq5_set())
    assert c.all_members_separable is False
    c = classify(two_set("seps", a=KET00, b=PLUSPLUS))
    assert c.all_members_separable is True


# -- identification ---------------------------------------------------------


def test_identify_examples():
    bell = catalog.bell_states()
    assert identify(bell, bell["psi-"]) == bell.index("psi-")
    assert identify(ORTHO, KET11) == 1
    with pytest.raises(NoMatchError):
        identify(bell, BipartiteState(np.eye(4) / 4, (2, 2)))


def test_identify_ambiguous_with_loose_tolerance():
    with pytest.raises(AmbiguousMatchError):
        identify(catalog.bell_states(), PHI_PLUS, Tolerance(absolute=10.0, relative=0.0))


# -- product machines -------------------------------------------------------


def test_product_bell_phi_plus():
    out = disentangle_to_product(catalog.bell_states(), PHI_PLUS)
    np.testing.assert_allclose(out.rho, np.eye(4) / 4, atol=1e-15)


def test_product_orthogonal_product_state_unchanged():
    out = disentangle_to_product(ORTHO, KET00)
    np.testing.assert_array_equal(out.rho, KET00.rho)


def test_bilocal_set_output_independent_of_input():
    t = math.pi / 7
    c, s = math.cos(t), math.sin(t)
    members = {
        "plus": PureState([c, 0, 0, s], (2, 2)),
        "minus": PureState([c, 0, 0, -s], (2, 2)),
        "phase": PureState([c, 0, 0, 1j * s], (2, 2)),
    }
    st = StateSet.from_states("bilocal", members)
    cls = classify(st)
    assert cls.identical_marginals and not cls.perfectly_distinguishable
    assert cls.selected_machine is Machine.BILOCAL_PREPARE
    # hand value: both marginals diag(c^2, s^2)
    m = np.diag([c * c, s * s])
    expected = np.kron(m, m)
    for member in st.states:
        np.testing.assert_allclose(disentangle_to_product(st, member).rho, expected, atol=1e-15)


def test_product_precondition():
    with pytest.raises(PreconditionViolated):
        disentangle_to_product(catalog.eq4_set(), PHI_PLUS)
    with pytest.raises(PreconditionViolated):
        disentangle_to_product(catalog.eq5_set(), PHI_PLUS, method="prop1b")


def test_product_machine_output_is_exact_product():
    rng = np.random.default_rng(21)
    for _ in range(30):
        q, _ = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
        st = StateSet.from_states("onb", [(f"v{i}", PureState(q[:, i], (2, 2))) for i in range(4)])
        for member in st.states:
            out = disentangle_to_product(st, member)
            assert is_product(out, Tolerance.uniform(1e-12))


# -- broadcasting unitary and primitive ------------------------------------


def test_broadcast_unitary_exact():
    U = broadcast_unitary()
    assert U.dtype.kind == "i"
    np.testing.assert_array_equal(U, U.T.conj())
    np.testing.assert_array_equal(U @ U, np.eye(4, dtype=int))


def test_broadcast_unitary_action():
    U = broadcast_unitary()
    e = np.eye(4, dtype=int)  # rows |00>, |01>, |10>, |11>
    np.testing.assert_array_equal(U @ e[0], e[0])
    np.testing.assert_array_equal(U @ e[2], e[3])
    np.testing.assert_array_equal(U @ e[1], e[1])


@pytest.mark.parametrize("p", [0.0, 0.25, 0.5, 0.9, 1.0])
def test_broadcast_marginal_law(p):
    rho = np.diag([p, 1 - p])
    out = broadcast(rho)
    np.testing.assert_allclose(linalg.partial_trace(out, (2, 2), "A"), rho, atol=1e-12)
    np.testing.assert_allclose(linalg.partial_trace(out, (2, 2), "B"), rho, atol=1e-12)


def test_broadcast_in_rotated_basis():
    rng = np.random.default_rng(4)
    V = catalog.random_unitary(rng, 2)
    rho = V @ np.diag([0.3, 0.7]) @ V.conj().T
    out = broadcast(rho, V)
    np.testing.assert_allclose(linalg.partial_trace(out, (2, 2), "A"), rho, atol=1e-12)
    np.testing.assert_allclose(linalg.partial_trace(out, (2, 2), "B"), rho, atol=1e-12)


def test_broadcast_noncommuting_state_is_not_copied():
    rho = np.full((2, 2), 0.5)  # |+><+| is not diagonal in the computational basis
    out = broadcast(rho)
    assert np.linalg.norm(linalg.partial_trace(out, (2, 2), "B") - rho) > 0.1


# -- local broadcast --------------------------------------------------------


def test_local_broadcast_phi_plus():
    out = local_broadcast(PHI_PLUS)
    np.testing.assert_allclose(out.rho, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)


def test_local_broadcast_fixed_point():
    np.testing.assert_array_equal(local_broadcast(KET11).rho, KET11.rho)


def _general_form(a, e, h, b, c, d, f, g):
    s = 1 - a - e - h
    cj = np.conj
    return np.array([
        [a, b, c, d],
        [cj(b), e, f, g],
        [cj(c), cj(f), h, -b],
        [cj(d), cj(g), -cj(b), s],
    ])


def test_local_broadcast_general_form_entries():
    rho = _general_form(0.3, 0.25, 0.2, 0.05 + 0.02j, 0.04 - 0.01j, 0.06j, 0.03, 0.02 + 0.02j)
    st = BipartiteState(rho, (2, 2))
    assert fits_general_form(st)
    out = local_broadcast(st).rho
    # b, d, f (and the -b at (2,3)) removed; a, c, e, g, h, s kept
    expected = _general_form(0.3, 0.25, 0.2, 0, 0.04 - 0.01j, 0, 0, 0.02 + 0.02j)
    np.testing.assert_allclose(out, expected, atol=1e-15)
    np.testing.assert_allclose(broadcast_closed_form(rho), expected, atol=0)


def test_local_broadcast_discard_either_copy():
    rng = np.random.default_rng(6)
    for _ in range(20):
        st = BipartiteState(random_density(rng, 4), (2, 2))
        np.testing.assert_allclose(
            local_broadcast(st, discard="party").rho, local_broadcast(st, discard="ancilla").rho, atol=1e-15
        )


def test_local_broadcast_party_a_mirrors_b():
    rng = np.random.default_rng(9)
    for _ in range(20):
        rho = random_density(rng, 4)
        st = BipartiteState(rho, (2, 2))
        swapped = BipartiteState(linalg.swap_subsystems(rho, (2, 2)), (2, 2))
        a_side = local_broadcast(st, "A").rho
        b_side = local_broadcast(swapped, "B").rho
        np.testing.assert_allclose(a_side, linalg.swap_subsystems(b_side, (2, 2)), atol=1e-15)


def test_local_broadcast_errors():
    q = BipartiteState(np.eye(6) / 6, (2, 3))
    with pytest.raises(UnsupportedDimensionsError):
        local_broadcast(q)
    with pytest.raises(NonUnitaryError):
        local_broadcast(PHI_PLUS, basis=np.diag([1.0, 2.0]))


def test_local_broadcast_preserves_marginals_after_own_diagonalization():
    rng = np.random.default_rng(77)
    for _ in range(1000):
        st = BipartiteState(random_density(rng, 4), (2, 2))
        _, V = linalg.jacobi_eigh(st.marginal("B"))
        out = local_broadcast(st, "B", basis=V)
        assert np.linalg.norm(out.marginal("A") - st.marginal("A")) <= 1e-9
        assert np.linalg.norm(out.marginal("B") - st.marginal("B")) <= 1e-9
        assert is_separable(out)


# -- general form -----------------------------------------------------------


def test_fits_general_form_examples():
    assert fits_general_form(PHI_PLUS)
    assert abs(PLUSPLUS.rho[0, 1] + PLUSPLUS.rho[2, 3]) == pytest.approx(0.5)
    assert not fits_general_form(PLUSPLUS)
    assert fits_general_form(BipartiteState(np.diag([0.1, 0.2, 0.3, 0.4]), (2, 2)))
    with pytest.raises(UnsupportedDimensionsError):
        fits_general_form(BipartiteState(np.eye(6) / 6, (2, 3)))


# -- separable machine ------------------------------------------------------


def test_separable_eq4_psi2():
    s = catalog.eq4_set()
    out = disentangle_to_separable(s, s["psi2"])
    np.testing.assert_allclose(out.rho, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)
    assert is_separable(out) and not is_product(out)


def test_separable_eq4_psi0_unchanged():
    s = catalog.eq4_set()
    np.testing.assert_allclose(disentangle_to_separable(s, s["psi0"]).rho, KET00.rho, atol=1e-15)


def test_separable_maximally_entangled_pair():
    s = two_set("pair", a=PHI_PLUS, b=pure(R, 0, 0, -R))  # (1 x Z) Phi+
    for member in s.states:
        out = disentangle_to_separable(s, member)
        assert is_separable(out)
        np.testing.assert_allclose(out.marginal("A"), np.eye(2) / 2, atol=1e-12)
        np.testing.assert_allclose(out.marginal("B"), np.eye(2) / 2, atol=1e-12)


def test_separable_precondition():
    with pytest.raises(PreconditionViolated):
        disentangle_to_separable(catalog.eq5_set(), PLUSPLUS)


def test_separable_machine_is_oblivious():
    machine = build_machine(catalog.eq4_set(), "prop2")
    # non-members are processed too, by the same fixed channel
    out = machine.apply(PLUSPLUS)
    # |+><+| on A, B dephased to 1/2
    np.testing.assert_allclose(out.rho, np.kron(np.full((2, 2), 0.5), np.eye(2) / 2), atol=1e-15)


# -- verification -----------------------------------------------------------


def test_verify_bell_to_identity():
    r = verify(PHI_PLUS, BipartiteState(np.eye(4) / 4, (2, 2)))
    assert r.marginal_deviation_A == pytest.approx(0, abs=1e-15)
    assert r.marginal_deviation_B == pytest.approx(0, abs=1e-15)
    assert r.output_is_product and r.output_is_separable


def test_verify_psi2_to_classical_mixture():
    r = verify(PHI_PLUS, BipartiteState(np.diag([0.5, 0, 0, 0.5]), (2, 2)))
    assert r.marginals_preserved()
    assert not r.output_is_product and r.output_is_separable


def test_verify_identity_map_fails():
    r = verify(PHI_PLUS, PHI_PLUS)
    assert r.marginals_preserved()
    assert not r.output_is_separable
    assert r.ppt_margin == pytest.approx(0.5, abs=1e-12)


def test_run_reports_machine():
    r = run(catalog.bell_states(), "phi-")
    assert r.machine is Machine.MEASURE_PREPARE
    assert r.input_label == "phi-"
    assert r.output_is_product and r.marginals_preserved()
