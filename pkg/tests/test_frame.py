import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qspir.frame import BellLink, FrameState, frame_swap_update
from qspir.pauli import IDENTITY, LABELS, SIGNED_WEYLS, SignedWeyl, WeylLabel
from qspir.state import QuantumRegister, apply_weyl, bell_pvm_outcomes, make_bell_pair


def test_swap_update_examples():
    a = BellLink("A", "B")
    b = BellLink("C", "D")
    assert frame_swap_update(a, b, WeylLabel(0, 0)) == BellLink("A", "D", IDENTITY)
    shifted = BellLink("C", "D", SignedWeyl(0, WeylLabel(1, 0)))
    assert frame_swap_update(a, shifted, WeylLabel(0, 1)).frame.label == WeylLabel(1, 1)
    with pytest.raises(ValueError):
        frame_swap_update(a, BellLink("B", "E"), WeylLabel(0, 0))


def test_swap_update_matches_dense_exactly():
    for f1 in SIGNED_WEYLS:
        for f2 in SIGNED_WEYLS:
            l1, l2 = BellLink("A", "B", f1), BellLink("C", "D", f2)
            reg = l1.register().tensor(l2.register())
            for o in bell_pvm_outcomes(reg, "B", "C"):
                assert o.probability == pytest.approx(0.25, abs=1e-12)
                expected = frame_swap_update(l1, l2, o.outcome).register()
                assert o.state.allclose(expected, atol=1e-12)


def test_link_validation_and_orientation():
    with pytest.raises(ValueError):
        BellLink("A", "A")
    link = BellLink("A", "B", SignedWeyl(0, WeylLabel(1, 1)))
    assert link.oriented("B").register().allclose(link.register())
    with pytest.raises(KeyError):
        link.oriented("C")
    with pytest.raises(ValueError):
        FrameState([BellLink("A", "B"), BellLink("B", "C")])


def test_apply_on_either_endpoint_matches_dense():
    for frame in SIGNED_WEYLS:
        link = BellLink("A", "B", frame)
        for op in SIGNED_WEYLS:
            for q in "AB":
                assert link.apply(q, op).register().allclose(apply_weyl(link.register(), q, op), atol=1e-12)


def test_measuring_both_ends_moves_phase_to_global_sign():
    fs = FrameState([BellLink("A", "B", SignedWeyl(1, WeylLabel(1, 1)))])
    ((label, p, after),) = fs.measure("B", "A")
    dense = {o.outcome: o for o in bell_pvm_outcomes(fs.register(), "B", "A")}
    assert dense[label].probability == pytest.approx(1)
    assert p == 1
    np.testing.assert_allclose(after.register().amplitudes, dense[label].state.amplitudes, atol=1e-12)


NAMES = [f"q{i}" for i in range(8)]


@st.composite
def programs(draw):
    ops = []
    for _ in range(draw(st.integers(1, 8))):
        if draw(st.booleans()):
            ops.append(("apply", draw(st.integers(0, 7)), draw(st.sampled_from(SIGNED_WEYLS))))
        else:
            i, j = draw(st.lists(st.integers(0, 7), min_size=2, max_size=2, unique=True))
            ops.append(("measure", i, j, draw(st.integers(0, 3))))
    return ops


@settings(max_examples=150, deadline=None)
@given(programs())
def test_frame_state_tracks_dense_state_exactly(program):
    pairs = [(NAMES[i], NAMES[i + 1]) for i in range(0, 8, 2)]
    fs = FrameState.from_pairs(pairs)
    reg = QuantumRegister.empty()
    for a, b in pairs:
        reg = reg.tensor(make_bell_pair(a, b))
    for step in program:
        alive = list(fs.qubits)
        if step[0] == "apply":
            q = alive[step[1] % len(alive)] if alive else None
            if q is None:
                continue
            fs, reg = fs.apply(q, step[2]), apply_weyl(reg, q, step[2])
        else:
            if len(alive) < 2:
                continue
            q1, q2 = alive[step[1] % len(alive)], alive[step[2] % len(alive)]
            if q1 == q2:
                continue
            frame_branches = fs.measure(q1, q2)
            dense = {o.outcome: o for o in bell_pvm_outcomes(reg, q1, q2)}
            assert {g for g, _, _ in frame_branches} == {g for g, o in dense.items() if o.state is not None}
            for g, p, _ in frame_branches:
                assert float(p) == pytest.approx(dense[g].probability, abs=1e-12)
            label, _, fs = frame_branches[step[3] % len(frame_branches)]
            reg = dense[label].state
        np.testing.assert_allclose(fs.register(reg.qubits).amplitudes, reg.amplitudes, atol=1e-12)


def test_frame_state_repr_and_accessors():
    fs = FrameState.from_pairs([("a", "b"), ("c", "d")])
    assert set(fs.qubits) == {"a", "b", "c", "d"}
    assert len(fs.links) == 2
    assert "a~b" in repr(fs)
    with pytest.raises(KeyError):
        fs.link("z")
    with pytest.raises(ValueError):
        fs.measure("a", "a")
    assert all(p == 0.25 for _, p, _ in fs.measure("b", "c"))
    assert [g for g, _, _ in fs.measure("b", "c")] == list(LABELS)
