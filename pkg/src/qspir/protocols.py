"""Protocol choreography: teleportation with an operation, two-sum
transmission, the (N-1)-private QSPIR protocol and the classical XOR scheme.

Every QSPIR block is described once as a list of steps (local Weyl
operations, Bell measurements, snapshots) and executed on either backend:

* ``dense``: ``QuantumRegister`` state vectors with exact phases;
* ``frame``: ``FrameState`` Bell links with signed Weyl frames.

Blocks never interact, so each of the ``l`` blocks runs on its own register.
Query subsets are F-bit masks: bit ``i - 1`` set means file ``i`` is in the
subset.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from functools import reduce
from math import prod
from typing import Callable, Iterator, NamedTuple, Sequence, Union

import numpy as np

from . import _validation as _v
from .exceptions import CapacityError
from .frame import FrameState
from .pauli import LABELS, LabelVector, SignedWeyl, WeylLabel
from .state import MAX_QUBITS, QuantumRegister, apply_weyl, bell_pvm_outcomes, make_bell_pair

__all__ = [
    "BACKENDS",
    "MODES",
    "VARIANTS",
    "QUERY_RULES",
    "MAX_ENUMERATED_BRANCHES",
    "Layout",
    "ProtocolConfig",
    "QuerySet",
    "ProtocolTranscript",
    "BlockBranch",
    "TeleportBranch",
    "teleport_branches",
    "teleport_with_operation",
    "two_sum_branches",
    "two_sum_transmit",
    "make_queries",
    "query_distribution",
    "server_answer",
    "run_block",
    "run_qspir",
    "run_qspir_three_server",
    "run_classical_baseline",
    "download_cost",
]

BACKENDS = ("dense", "frame")
MODES = ("sample", "enumerate")
# Deliberately broken variants used to show that the verifiers detect leaks.
VARIANTS = ("standard", "skip_correction", "cleartext_h2")
QUERY_RULES = ("uniform", "leaky")
MAX_ENUMERATED_BRANCHES = 4**10

Probability = Union[Fraction, float]


# ---------------------------------------------------------------------------
# Layout of one block


@dataclass(frozen=True)
class Layout:
    """Qubit names and Bell-pair wiring of one block for ``n_servers`` servers."""

    n_servers: int

    def __post_init__(self):
        _v.check_int(self.n_servers, "n_servers", 2)

    @property
    def middle(self) -> range:
        return range(2, self.n_servers)

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        """Server pairs ``(2j, 2j + 1)`` that run two-sum transmission."""
        return tuple((2 * j, 2 * j + 1) for j in range(1, self.n_servers // 2))

    @property
    def classical_server(self) -> int | None:
        """Middle server that ships its outcome as two classical bits (odd N only)."""
        n = self.n_servers
        return n - 1 if n % 2 and n >= 3 else None

    def has_m(self, t: int) -> bool:
        return 2 <= t <= 2 * (self.n_servers // 2) - 1

    def qubit(self, t: int, p: int = 0, side: str = "") -> str:
        return f"H{t}{side}_p{p}"

    def chain(self, p: int = 0) -> list[tuple[str, str]]:
        n = self.n_servers
        ends = [self.qubit(1, p)]
        for t in self.middle:
            ends += [self.qubit(t, p, "L"), self.qubit(t, p, "R")]
        ends.append(self.qubit(n, p))
        return [(ends[i], ends[i + 1]) for i in range(0, len(ends), 2)]

    def m_pairs(self, p: int = 0) -> list[tuple[str, str]]:
        return [(self.qubit(s, p, "M"), self.qubit(s2, p, "M")) for s, s2 in self.pairs]

    def received_qubits(self, p: int = 0) -> list[str]:
        """Qubits shipped to the user, in canonical order."""
        out = [self.qubit(1, p), self.qubit(self.n_servers, p)]
        for a, b in self.m_pairs(p):
            out += [a, b]
        return out

    def download(self) -> tuple[int, int]:
        """Per-block raw download ``(qubits, classical bits)``."""
        qubits = 2 + 2 * len(self.pairs)
        return qubits, 2 if self.classical_server else 0


def download_cost(n_servers: int, blocks: int) -> tuple[int, int, int]:
    """``(qubits, cbits, qubit_equivalents)`` downloaded over all blocks."""
    q, c = Layout(n_servers).download()
    return q * blocks, c * blocks, (q + c) * blocks


# ---------------------------------------------------------------------------
# Configuration, queries, transcripts


@dataclass(frozen=True)
class ProtocolConfig:
    n_servers: int
    n_files: int
    blocks: int
    query_index: int
    files: tuple[LabelVector, ...]
    backend: str = "frame"
    rng_seed: int | None = 0
    mode: str = "sample"

    def __post_init__(self):
        _v.check_int(self.n_servers, "n_servers", 2)
        _v.check_int(self.n_files, "n_files", 2)
        _v.check_int(self.blocks, "blocks", 1)
        _v.check_query_index(self.query_index, self.n_files)
        object.__setattr__(self, "files", _v.check_files(self.files, self.n_files, self.blocks))
        _v.check_choice(self.backend, "backend", BACKENDS)
        _v.check_choice(self.mode, "mode", MODES)

    @classmethod
    def random(cls, n_servers: int, n_files: int, blocks: int, query_index: int, rng=None, **kw) -> ProtocolConfig:
        """Config with files drawn uniformly from ``rng``."""
        rng = np.random.default_rng(rng)
        files = [LabelVector.from_ints(rng.integers(0, 4, size=blocks)) for _ in range(n_files)]
        return cls(n_servers, n_files, blocks, query_index, tuple(files), **kw)

    @property
    def layout(self) -> Layout:
        return Layout(self.n_servers)

    def to_dict(self) -> dict:
        return {
            "n_servers": self.n_servers,
            "n_files": self.n_files,
            "blocks": self.blocks,
            "query_index": self.query_index,
            "files": [f.to_ints() for f in self.files],
            "backend": self.backend,
            "rng_seed": self.rng_seed,
            "mode": self.mode,
        }


@dataclass(frozen=True)
class QuerySet:
    """Queries ``Q_1..Q_N`` as F-bit masks whose XOR is ``{K}``."""

    masks: tuple[int, ...]
    n_files: int
    query_index: int
    rule: str = "uniform"

    def __post_init__(self):
        masks = tuple(int(m) for m in self.masks)
        object.__setattr__(self, "masks", masks)
        for m in masks:
            if not 0 <= m < 1 << self.n_files:
                raise ValueError(f"query mask {m} out of range for {self.n_files} files")
        if reduce(lambda x, y: x ^ y, masks, 0) != 1 << (self.query_index - 1):
            raise ValueError(f"queries {masks} do not XOR to {{{self.query_index}}}")

    @property
    def n_servers(self) -> int:
        return len(self.masks)

    @property
    def subsets(self) -> list[frozenset[int]]:
        return [frozenset(i + 1 for i in range(self.n_files) if m >> i & 1) for m in self.masks]

    def complement(self, t: int) -> tuple[int, ...]:
        """Masks of every server except ``t`` (1-based)."""
        return self.masks[: t - 1] + self.masks[t:]


class BlockBranch(NamedTuple):
    probability: Probability
    outcomes: dict
    snapshots: dict
    state: object


@dataclass(frozen=True, eq=False)
class ProtocolTranscript:
    """One run of a protocol along one measurement branch."""

    config: ProtocolConfig
    queries: QuerySet
    answers: tuple[LabelVector, ...]
    output: LabelVector
    middle_outcomes: dict[int, tuple[WeylLabel, ...]]
    two_sum_outputs: dict[tuple[int, int], tuple[WeylLabel, ...]]
    corrections: tuple[WeylLabel, ...]
    uploaded_bits: int
    downloaded_qubits: int
    downloaded_cbits: int
    probability: Probability
    protocol: str = "qspir"
    states: tuple[dict, ...] | None = field(default=None, repr=False)

    @property
    def downloaded_qubit_equivalents(self) -> int:
        return self.downloaded_qubits + self.downloaded_cbits

    @property
    def rate(self) -> Fraction:
        return Fraction(2 * self.config.blocks, self.downloaded_qubit_equivalents)

    @property
    def correct(self) -> bool:
        return self.output == self.config.files[self.config.query_index - 1]

    def to_dict(self) -> dict:
        return {
            "protocol": self.protocol,
            "config": self.config.to_dict(),
            "queries": list(self.queries.masks),
            "answers": [[list(b) for b in h] for h in self.answers],
            "middle_outcomes": {str(t): [list(g) for g in gs] for t, gs in sorted(self.middle_outcomes.items())},
            "two_sum_outputs": {f"{a},{b}": [list(g) for g in gs] for (a, b), gs in sorted(self.two_sum_outputs.items())},
            "corrections": [list(g) for g in self.corrections],
            "output": [list(b) for b in self.output],
            "uploaded_bits": self.uploaded_bits,
            "downloaded_qubits": self.downloaded_qubits,
            "downloaded_cbits": self.downloaded_cbits,
            "branch_probability": _decimal_string(self.probability),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _decimal_string(p: Probability) -> str:
    if isinstance(p, Fraction):
        # Branch probabilities are dyadic, so the decimal expansion terminates.
        return str(Decimal(p.numerator) / Decimal(p.denominator))
    return repr(float(p))


# ---------------------------------------------------------------------------
# Backend adapters and the step executor


class _Op(NamedTuple):
    qubit: str
    op: Callable[[dict], SignedWeyl]


class _Measure(NamedTuple):
    q1: str
    q2: str
    key: tuple


class _Snapshot(NamedTuple):
    key: str


class _Dense:
    __slots__ = ("reg",)

    def __init__(self, reg: QuantumRegister):
        self.reg = reg

    def apply(self, qubit, op):
        return _Dense(apply_weyl(self.reg, qubit, op))

    def measure(self, q1, q2):
        return [(o.outcome, o.probability, _Dense(o.state)) for o in bell_pvm_outcomes(self.reg, q1, q2) if o.state is not None]

    def snapshot(self):
        return self.reg


class _Frame:
    __slots__ = ("fs",)

    def __init__(self, fs: FrameState):
        self.fs = fs

    def apply(self, qubit, op):
        return _Frame(self.fs.apply(qubit, op))

    def measure(self, q1, q2):
        return [(g, p, _Frame(s)) for g, p, s in self.fs.measure(q1, q2)]

    def snapshot(self):
        return self.fs


def _initial_state(backend: str, pairs: Sequence[tuple[str, str]]):
    if backend == "frame":
        return _Frame(FrameState.from_pairs(pairs))
    if 2 * len(pairs) > MAX_QUBITS:
        raise CapacityError(f"a block needs {2 * len(pairs)} qubits; the dense backend holds at most {MAX_QUBITS}")
    reg = QuantumRegister.empty()
    for a, b in pairs:
        reg = reg.tensor(make_bell_pair(a, b))
    return _Dense(reg)


def _execute(state, steps, ctx: dict, rng) -> list[BlockBranch]:
    """Run ``steps``; branch on measurements (enumerate) or sample them (``rng``)."""
    out: list[BlockBranch] = []
    one = Fraction(1) if isinstance(state, _Frame) else 1.0
    stack = [(state, 0, dict(ctx), {}, one)]
    while stack:
        st, i, c, snaps, prob = stack.pop()
        while i < len(steps):
            step = steps[i]
            i += 1
            if isinstance(step, _Op):
                st = st.apply(step.qubit, step.op(c))
            elif isinstance(step, _Snapshot):
                snaps = {**snaps, step.key: st.snapshot()}
            else:
                branches = st.measure(step.q1, step.q2)
                if rng is None:
                    # Reverse so the canonical (lowest label first) branch is explored first.
                    for lab, p, new in reversed(branches[1:]):
                        stack.append((new, i, {**c, step.key: lab}, snaps, prob * p))
                    lab, p, st = branches[0]
                else:
                    weights = np.array([float(b[1]) for b in branches])
                    lab, p, st = branches[int(rng.choice(len(branches), p=weights / weights.sum()))]
                c = {**c, step.key: lab}
                prob = prob * p
        out.append(BlockBranch(prob, c, snaps, st.snapshot()))
    return out


# ---------------------------------------------------------------------------
# Protocol 1: teleportation with an operation


class TeleportBranch(NamedTuple):
    outcome: WeylLabel
    probability: float
    before_correction: QuantumRegister
    after_correction: QuantumRegister


def teleport_branches(
    input_state: QuantumRegister,
    cd: WeylLabel,
    payload: str = "H1",
    channel: tuple[str, str] = ("H2", "H3"),
    reverse_order: bool = False,
) -> list[TeleportBranch]:
    """All measurement branches of teleportation with the operation ``W(cd)``.

    Bob's operation ``W(cd)`` on the receiving qubit and Alice's Bell
    measurement of (payload, channel[0]) are applied in that order, or
    swapped when ``reverse_order``. The states returned are on the
    reference qubits followed by ``channel[1]``.
    """
    input_state.index(payload)
    sender, receiver = channel
    reg = input_state.tensor(make_bell_pair(sender, receiver))
    op = SignedWeyl(0, cd)
    if reverse_order:
        branches = [(o.outcome, o.probability, o.state) for o in bell_pvm_outcomes(reg, payload, sender) if o.state is not None]
        branches = [(ab, p, apply_weyl(s, receiver, op)) for ab, p, s in branches]
    else:
        reg = apply_weyl(reg, receiver, op)
        branches = [(o.outcome, o.probability, o.state) for o in bell_pvm_outcomes(reg, payload, sender) if o.state is not None]
    return [TeleportBranch(ab, p, s, apply_weyl(s, receiver, ab)) for ab, p, s in branches]


def teleport_with_operation(
    input_state: QuantumRegister,
    cd: WeylLabel,
    rng=None,
    payload: str = "H1",
    channel: tuple[str, str] = ("H2", "H3"),
) -> tuple[WeylLabel, QuantumRegister]:
    """Sample one run; returns Alice's outcome and the corrected state."""
    rng = np.random.default_rng(rng)
    branches = teleport_branches(input_state, cd, payload, channel)
    probs = np.array([b.probability for b in branches])
    pick = branches[int(rng.choice(len(branches), p=probs / probs.sum()))]
    return pick.outcome, pick.after_correction


# ---------------------------------------------------------------------------
# Protocol 2: two-sum transmission


def two_sum_branches(ab: WeylLabel, cd: WeylLabel):
    """Carol's Bell-PVM branches after Alice applies ``W(ab)`` and Bob ``W(cd)``."""
    reg = make_bell_pair("A", "B")
    reg = apply_weyl(apply_weyl(reg, "A", ab), "B", cd)
    return bell_pvm_outcomes(reg, "A", "B")


def two_sum_transmit(ab: WeylLabel, cd: WeylLabel, rng=None) -> WeylLabel:
    rng = np.random.default_rng(rng)
    branches = two_sum_branches(ab, cd)
    probs = np.array([b.probability for b in branches])
    return branches[int(rng.choice(4, p=probs / probs.sum()))].outcome


# ---------------------------------------------------------------------------
# Queries and server answers


def _query_set(free: Sequence[int], n_files: int, k: int, rule: str) -> QuerySet:
    last = reduce(lambda x, y: x ^ y, free, 0) ^ (1 << (k - 1))
    return QuerySet(tuple(free) + (last,), n_files, k, rule)


def make_queries(n: int, f: int, k: int, rng=None, rule: str = "uniform") -> QuerySet:
    """Draw ``Q_1..Q_{N-1}`` and set ``Q_N`` so that all N queries XOR to ``{k}``.

    ``rule="leaky"`` replaces ``Q_1`` with ``{k}``, a deliberately insecure
    choice for exercising the user-secrecy check.
    """
    _v.check_int(n, "n", 2)
    _v.check_int(f, "f", 1)
    k = _v.check_query_index(k, f)
    _v.check_choice(rule, "rule", QUERY_RULES)
    rng = np.random.default_rng(rng)
    free = [int(x) for x in rng.integers(0, 1 << f, size=n - 1)]
    if rule == "leaky":
        free[0] = 1 << (k - 1)
    return _query_set(free, f, k, rule)


def query_distribution(n: int, f: int, k: int, rule: str = "uniform") -> Iterator[tuple[QuerySet, Fraction]]:
    """Every query set ``make_queries`` can return for ``k``, with its exact probability."""
    _v.check_choice(rule, "rule", QUERY_RULES)
    k = _v.check_query_index(k, f)
    n_free = n - 1 if rule == "uniform" else n - 2
    weight = Fraction(1, 1 << (f * n_free))
    for free in itertools.product(range(1 << f), repeat=n_free):
        if rule == "leaky":
            free = (1 << (k - 1),) + free
        yield _query_set(free, f, k, rule), weight


def server_answer(files: Sequence[LabelVector], q) -> LabelVector:
    """Blockwise Z_2^2 sum of the files selected by ``q`` (mask or 1-based indices)."""
    if not files:
        raise ValueError("no files")
    if isinstance(q, (int, np.integer)):
        if q < 0 or q >> len(files):
            raise IndexError(f"query mask {q} selects files beyond {len(files)}")
        chosen = [i for i in range(len(files)) if q >> i & 1]
    else:
        chosen = []
        for i in q:
            if not 1 <= i <= len(files):
                raise IndexError(f"file index {i} out of range 1..{len(files)}")
            chosen.append(i - 1)
    total = LabelVector.zeros(len(files[0]))
    for i in chosen:
        total = total + files[i]
    return total


# ---------------------------------------------------------------------------
# QSPIR protocol


def _block_steps(layout: Layout, p: int, h: Sequence[WeylLabel], server_order, variant: str, until: str):
    n = layout.n_servers
    q = layout.qubit
    steps: list = []
    for t in server_order:
        if t == 1 or t == n:
            steps.append(_Op(q(t, p), lambda c, lab=h[t - 1]: SignedWeyl(0, lab)))
            continue
        steps.append(_Op(q(t, p, "L"), lambda c, lab=h[t - 1]: SignedWeyl(0, lab)))
        steps.append(_Measure(q(t, p, "L"), q(t, p, "R"), ("G", t)))
        if layout.has_m(t):
            steps.append(_Op(q(t, p, "M"), lambda c, t=t: SignedWeyl(0, c[("G", t)])))
    if until == "download":
        return steps
    for j, (s, s2) in enumerate(layout.pairs, 1):
        steps.append(_Measure(q(s, p, "M"), q(s2, p, "M"), ("S", j)))
    steps.append(_Snapshot("pre"))
    if variant != "skip_correction":
        steps.append(_Op(q(n, p), lambda c: SignedWeyl(0, _user_correction(layout, c))))
    steps.append(_Snapshot("post"))
    steps.append(_Measure(q(1, p), q(n, p), ("out",)))
    return steps


def _user_correction(layout: Layout, ctx: dict) -> WeylLabel:
    corr = LABELS[0]
    for j in range(1, len(layout.pairs) + 1):
        corr = corr + ctx[("S", j)]
    if layout.classical_server:
        corr = corr + ctx[("G", layout.classical_server)]
    return corr


def run_block(
    n_servers: int,
    h: Sequence[WeylLabel],
    backend: str = "frame",
    rng=None,
    *,
    block: int = 0,
    variant: str = "standard",
    server_order: Sequence[int] | None = None,
    until: str = "output",
) -> list[BlockBranch]:
    """Run one block given the servers' answer labels ``h[t - 1]``.

    With ``rng=None`` every measurement branch is enumerated; otherwise one
    branch is sampled. ``until="download"`` stops once all servers have
    acted, leaving the state the user receives.
    """
    layout = Layout(n_servers)
    if len(h) != n_servers:
        raise ValueError(f"need {n_servers} answer labels, got {len(h)}")
    _v.check_choice(backend, "backend", BACKENDS)
    _v.check_choice(variant, "variant", VARIANTS)
    order = tuple(server_order) if server_order is not None else tuple(range(1, n_servers + 1))
    if sorted(order) != list(range(1, n_servers + 1)):
        raise ValueError(f"server_order {order} is not a permutation of 1..{n_servers}")
    steps = _block_steps(layout, block, h, order, variant, until)
    state = _initial_state(backend, layout.chain(block) + layout.m_pairs(block))
    return _execute(state, steps, {}, None if rng is None else np.random.default_rng(rng))


def _check_enumeration(n: int, blocks: int) -> None:
    nominal = 4 ** ((n - 2) * blocks + len(Layout(n).pairs) * blocks + blocks)
    if nominal > MAX_ENUMERATED_BRANCHES:
        raise CapacityError(f"enumerating N={n}, l={blocks} spans {nominal} nominal branches (cap {MAX_ENUMERATED_BRANCHES})")


def run_qspir(
    config: ProtocolConfig,
    queries: QuerySet | None = None,
    *,
    variant: str = "standard",
    server_order: Sequence[int] | None = None,
    record_states: bool = False,
) -> list[ProtocolTranscript]:
    """Run the (N-1)-private QSPIR protocol.

    Sample mode returns one transcript; enumerate mode returns every
    nonzero-probability branch in canonical order.
    """
    n, f, ell = config.n_servers, config.n_files, config.blocks
    layout = config.layout
    rng = np.random.default_rng(config.rng_seed)
    if queries is None:
        queries = make_queries(n, f, config.query_index, rng)
    elif queries.n_servers != n or queries.n_files != f:
        raise ValueError("query set does not match the configuration")
    answers = tuple(server_answer(config.files, m) for m in queries.masks)
    enumerate_ = config.mode == "enumerate"
    if enumerate_:
        _check_enumeration(n, ell)

    per_block = []
    for p in range(ell):
        h = [answers[t].blocks[p] for t in range(n)]
        per_block.append(
            run_block(n, h, config.backend, None if enumerate_ else rng, block=p, variant=variant, server_order=server_order)
        )

    q_bits, c_bits, _ = download_cost(n, ell)
    transcripts = []
    for combo in itertools.product(*per_block):
        transcripts.append(
            ProtocolTranscript(
                config=config,
                queries=queries,
                answers=answers,
                output=LabelVector(tuple(b.outcomes[("out",)] for b in combo)),
                middle_outcomes={t: tuple(b.outcomes[("G", t)] for b in combo) for t in layout.middle},
                two_sum_outputs={
                    pair: tuple(b.outcomes[("S", j)] for b in combo) for j, pair in enumerate(layout.pairs, 1)
                },
                corrections=tuple(
                    LABELS[0] if variant == "skip_correction" else _user_correction(layout, b.outcomes) for b in combo
                ),
                uploaded_bits=n * f,
                downloaded_qubits=q_bits,
                downloaded_cbits=c_bits,
                probability=prod((b.probability for b in combo), start=Fraction(1) if config.backend == "frame" else 1.0),
                states=tuple(b.snapshots for b in combo) if record_states else None,
            )
        )
    return transcripts


def run_qspir_three_server(config: ProtocolConfig, queries: QuerySet | None = None) -> list[ProtocolTranscript]:
    """The three-server, one-block protocol, written out step by step.

    Independent of ``run_block``: servers 1 and 3 apply ``W(H_1)``, ``W(H_3)``
    to their halves, server 2 applies ``W(H_2)`` and Bell-measures its two
    qubits, and the user corrects with ``W(a, b)`` before measuring.
    Transcripts always carry the dense or frame snapshots ``before_pvm``,
    ``pre`` and ``post``.
    """
    if config.n_servers != 3 or config.blocks != 1:
        raise ValueError("the three-server protocol needs n_servers=3 and blocks=1")
    rng = np.random.default_rng(config.rng_seed)
    if queries is None:
        queries = make_queries(3, config.n_files, config.query_index, rng)
    answers = tuple(server_answer(config.files, m) for m in queries.masks)
    h1, h2, h3 = (SignedWeyl(0, a.blocks[0]) for a in answers)

    branches: list[tuple[WeylLabel, WeylLabel, Probability, dict]] = []
    if config.backend == "dense":
        reg = make_bell_pair("H1", "H2L").tensor(make_bell_pair("H2R", "H3"))
        reg = apply_weyl(apply_weyl(apply_weyl(reg, "H1", h1), "H3", h3), "H2L", h2)
        for o in bell_pvm_outcomes(reg, "H2L", "H2R"):
            if o.state is None:
                continue
            corrected = apply_weyl(o.state, "H3", o.outcome)
            final = [x for x in bell_pvm_outcomes(corrected, "H1", "H3") if x.probability > 0.5]
            branches.append((o.outcome, final[0].outcome, o.probability, {"before_pvm": reg, "pre": o.state, "post": corrected}))
    else:
        fs = FrameState.from_pairs([("H1", "H2L"), ("H2R", "H3")])
        fs = fs.apply("H1", h1).apply("H3", h3).apply("H2L", h2)
        for ab, p, after in fs.measure("H2L", "H2R"):
            corrected = after.apply("H3", ab)
            ((out, _, _),) = corrected.measure("H1", "H3")
            branches.append((ab, out, p, {"before_pvm": fs, "pre": after, "post": corrected}))

    if config.mode == "sample":
        probs = np.array([float(b[2]) for b in branches])
        branches = [branches[int(rng.choice(len(branches), p=probs / probs.sum()))]]
        branches = [(ab, out, Fraction(1) if config.backend == "frame" else 1.0, s) for ab, out, _, s in branches]

    return [
        ProtocolTranscript(
            config=config,
            queries=queries,
            answers=answers,
            output=LabelVector((out,)),
            middle_outcomes={2: (ab,)},
            two_sum_outputs={},
            corrections=(ab,),
            uploaded_bits=3 * config.n_files,
            downloaded_qubits=2,
            downloaded_cbits=2,
            probability=p,
            protocol="qspir3",
            states=(snaps,),
        )
        for ab, out, p, snaps in branches
    ]


def run_classical_baseline(config: ProtocolConfig, queries: QuerySet | None = None) -> ProtocolTranscript:
    """XOR scheme: servers return ``H_t`` in the clear and the user folds them.

    The backend setting is ignored. The user learns every ``H_t``, so this
    scheme gives no server secrecy.
    """
    n, f, ell = config.n_servers, config.n_files, config.blocks
    if queries is None:
        queries = make_queries(n, f, config.query_index, np.random.default_rng(config.rng_seed))
    answers = tuple(server_answer(config.files, m) for m in queries.masks)
    output = reduce(lambda x, y: x + y, answers)
    return ProtocolTranscript(
        config=config,
        queries=queries,
        answers=answers,
        output=output,
        middle_outcomes={},
        two_sum_outputs={},
        corrections=(),
        uploaded_bits=n * f,
        downloaded_qubits=0,
        downloaded_cbits=2 * n * ell,
        probability=Fraction(1),
        protocol="classical",
    )
