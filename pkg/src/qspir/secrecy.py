"""Brute-force security measures for small protocol families.

What the user (or any coalition of N-1 servers) receives is a set of
Bell-linked qubit pairs plus classical labels, so each view is diagonal in
the product Bell basis. The verifier therefore works with per-block
*kernels*: for every tuple of server answers ``(H_1..H_N)`` the distribution
of the view labels (or of the decoded output), obtained by enumerating every
measurement branch of the frame backend. ``dense_user_view`` rebuilds the
same states as genuine density matrices for cross-checks.

Averages over files, query index and queries are then exhaustive numpy
enumerations over these kernels. Blocks are independent given the queries,
so for ``l > 1`` the per-block results are combined exactly (``beta``
is additive, ``alpha`` uses the per-query product); small cases can be
forced through a joint enumeration over whole files with ``method="joint"``.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import _validation as _v
from .exceptions import CapacityError
from .frame import FrameState
from .pauli import LABELS, WeylLabel
from .protocols import QUERY_RULES, VARIANTS, Layout, query_distribution, run_block
from .state import (
    DensityMatrix,
    bell_vector,
    classical_holevo,
    holevo_information,
    partial_trace,
    random_pure_state,
    trace_power,
)

__all__ = [
    "PROTOCOLS",
    "ProtocolFamily",
    "ExactMI",
    "UserSecrecy",
    "Lemma1Result",
    "Prop4Result",
    "SecurityReport",
    "output_kernel",
    "view_kernel",
    "error_measure",
    "user_secrecy",
    "server_secrecy",
    "lemma1_check",
    "prop4_check",
    "dense_user_view",
    "bell_view_state",
    "evaluate",
    "format_real",
]

PROTOCOLS = ("qspir", "qspir3", "classical")
METHODS = ("auto", "blockwise", "joint")
# Largest joint enumeration (queries x file assignments x view outcomes) tried in "auto".
JOINT_LIMIT = 1 << 22
_CHUNK = 256


def format_real(x) -> str:
    """Exact rationals as ``p/q``; floats to 12 significant digits."""
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return f"{float(x):.12g}"


@dataclass(frozen=True)
class ProtocolFamily:
    """All runs of one protocol over uniform files, uniform K and random queries."""

    protocol: str = "qspir"
    n_servers: int = 3
    n_files: int = 2
    blocks: int = 1
    variant: str = "standard"
    query_rule: str = "uniform"

    def __post_init__(self):
        _v.check_choice(self.protocol, "protocol", PROTOCOLS)
        _v.check_int(self.n_servers, "n_servers", 2)
        _v.check_int(self.n_files, "n_files", 2)
        _v.check_int(self.blocks, "blocks", 1)
        _v.check_choice(self.variant, "variant", VARIANTS)
        _v.check_choice(self.query_rule, "query_rule", QUERY_RULES)
        if self.protocol == "qspir3" and (self.n_servers != 3 or self.blocks != 1):
            raise ValueError("qspir3 requires n_servers=3 and blocks=1")
        if self.protocol == "classical" and self.variant != "standard":
            raise ValueError("variants apply to the quantum protocols only")
        if self.variant == "cleartext_h2" and self.n_servers < 2:
            raise ValueError("cleartext_h2 needs a second server")

    @property
    def layout(self) -> Layout:
        return Layout(self.n_servers)

    @property
    def slots(self) -> tuple[str, ...]:
        """Labelled components of everything the user receives, per block."""
        n = self.n_servers
        if self.protocol == "classical":
            return tuple(f"H{t}" for t in range(1, n + 1))
        out = ["link"] + [f"S{j}" for j in range(1, len(self.layout.pairs) + 1)]
        if self.layout.classical_server:
            out.append(f"G{self.layout.classical_server}")
        if self.variant == "cleartext_h2":
            out.append("clear_H2")
        return tuple(out)

    def slot_owners(self, slot: str) -> tuple[int, ...]:
        """Servers that sent (part of) ``slot``."""
        n = self.n_servers
        if slot == "link":
            return (1, n)
        if slot == "clear_H2":
            return (2,)
        if slot[0] in "HG":
            return (int(slot[1:]),)
        return self.layout.pairs[int(slot[1:]) - 1]

    def complement_slots(self, t: int) -> tuple[str, ...]:
        """Slots held entirely by servers other than ``t``.

        A Bell pair with one half at server ``t`` leaves the other half
        maximally mixed whatever the files, so it is dropped.
        """
        _v.check_int(t, "t", 1, self.n_servers)
        return tuple(s for s in self.slots if t not in self.slot_owners(s))

    def query_masks(self, k: int) -> np.ndarray:
        """``(n_queries, N)`` masks; all equally likely for this rule."""
        return np.array([qs.masks for qs, _ in query_distribution(self.n_servers, self.n_files, k, self.query_rule)])

    def to_dict(self) -> dict:
        return {
            "protocol": self.protocol,
            "n": self.n_servers,
            "f": self.n_files,
            "blocks": self.blocks,
            "variant": self.variant,
            "query_rule": self.query_rule,
        }


# ---------------------------------------------------------------------------
# Kernels


def _h_index(h: Sequence[WeylLabel]) -> int:
    return sum(int(lab) << (2 * t) for t, lab in enumerate(h))


def _answer_tuples(n: int) -> Iterable[tuple[WeylLabel, ...]]:
    for idx in range(4**n):
        yield tuple(WeylLabel.from_int((idx >> (2 * t)) & 3) for t in range(n))


def _kernel_n(protocol: str, n: int) -> int:
    return 3 if protocol == "qspir3" else n


@lru_cache(maxsize=None)
def output_kernel(protocol: str, n: int, variant: str = "standard") -> tuple[np.ndarray, int]:
    """Decoder output distribution per answer tuple.

    Returns ``(counts, denom)``: ``counts[h, g] / denom`` is the probability
    that the user decodes label ``g`` in a block whose answers have index
    ``h = sum_t int(H_t) << 2(t-1)``.
    """
    n = _kernel_n(protocol, n)
    counts = np.zeros((4**n, 4), dtype=np.int64)
    if protocol == "classical":
        for h in _answer_tuples(n):
            total = LABELS[0]
            for lab in h:
                total = total + lab
            counts[_h_index(h), int(total)] = 1
        return counts, 1
    denom = 4 ** (n - 2 + len(Layout(n).pairs))
    for h in _answer_tuples(n):
        for b in run_block(n, h, "frame", variant=variant):
            counts[_h_index(h), int(b.outcomes[("out",)])] += int(b.probability * denom)
    if np.any(counts.sum(axis=1) != denom):
        raise ArithmeticError("output kernel rows do not sum to one")
    return counts, denom


def _view_labels(family_slots: Sequence[str], layout: Layout, h, branch) -> tuple[int, ...]:
    fs: FrameState = branch.state
    out = []
    for slot in family_slots:
        if slot == "link":
            q = layout.qubit(1)
            out.append(int(fs.link(q).oriented(q).frame.label))
        elif slot == "clear_H2":
            out.append(int(h[1]))
        elif slot[0] == "G":
            out.append(int(branch.outcomes[("G", int(slot[1:]))]))
        else:
            q = layout.qubit(layout.pairs[int(slot[1:]) - 1][0], 0, "M")
            out.append(int(fs.link(q).oriented(q).frame.label))
    return tuple(out)


@lru_cache(maxsize=None)
def view_kernel(protocol: str, n: int, variant: str = "standard") -> np.ndarray:
    """Distribution of the user's received labels per answer tuple.

    Shape ``(4**N,) + (4,) * len(slots)``, axes in ``ProtocolFamily.slots``
    order. Built by enumerating every branch up to the end of the download.
    """
    family = ProtocolFamily(protocol, _kernel_n(protocol, n), 2, 1, variant)
    n = family.n_servers
    slots = family.slots
    kernel = np.zeros((4**n,) + (4,) * len(slots))
    for h in _answer_tuples(n):
        row = kernel[_h_index(h)]
        if protocol == "classical":
            row[tuple(int(x) for x in h)] = 1.0
            continue
        for b in run_block(n, h, "frame", variant=variant, until="download"):
            row[_view_labels(slots, family.layout, h, b)] += float(b.probability)
    return kernel


def _marginal_kernel(family: ProtocolFamily, keep: Sequence[str]) -> np.ndarray:
    kernel = view_kernel(family.protocol, family.n_servers, family.variant)
    slots = family.slots
    unknown = set(keep) - set(slots)
    if unknown:
        raise KeyError(f"unknown view slots {sorted(unknown)}")
    drop = tuple(1 + i for i, s in enumerate(slots) if s not in keep)
    marg = kernel.sum(axis=drop) if drop else kernel
    return marg.reshape(marg.shape[0], -1)


def _file_values(f: int) -> np.ndarray:
    """All ``4**F`` per-block file assignments; row ``w`` has file ``i`` at ``(w >> 2i) & 3``."""
    w = np.arange(4**f)
    return np.stack([(w >> (2 * i)) & 3 for i in range(f)], axis=1)


def _answer_index(masks: np.ndarray, wvals: np.ndarray) -> np.ndarray:
    """Kernel row index for each (query set, file assignment) pair."""
    idx = np.zeros((masks.shape[0], wvals.shape[0]), dtype=np.int64)
    for t in range(masks.shape[1]):
        h = np.zeros_like(idx)
        for i in range(wvals.shape[1]):
            h ^= ((masks[:, t] >> i) & 1)[:, None] * wvals[None, :, i]
        idx += h << (2 * t)
    return idx


def _conditional_on_file(p: np.ndarray, f: int, i: int) -> np.ndarray:
    """``(nq, 4**F, D)`` -> ``(nq, 4, D)``: average over every file except ``i``."""
    shaped = p.reshape((p.shape[0],) + (4,) * f + (p.shape[-1],))
    # C-order reshape puts file F-1 on axis 1 and file j on axis F - j.
    return shaped.mean(axis=tuple(f - j for j in range(f) if j != i))


def _choose_method(method: str, size: int, blocks: int) -> str:
    _v.check_choice(method, "method", METHODS)
    if method == "auto":
        return "blockwise" if blocks == 1 or size > JOINT_LIMIT else "joint"
    if method == "joint" and size > JOINT_LIMIT:
        raise CapacityError(f"joint enumeration of size {size} exceeds {JOINT_LIMIT}")
    return method


def _joint_blocks(cond: np.ndarray, blocks: int) -> np.ndarray:
    """``(nq, 4, D)`` per block -> ``(nq, 4**l, D**l)`` for ``l`` independent blocks."""
    out = cond
    for _ in range(blocks - 1):
        nq, a, d = out.shape
        out = np.einsum("qax,qby->qabxy", out, cond).reshape(nq, a * 4, d * cond.shape[-1])
    return out


# ---------------------------------------------------------------------------
# alpha


def error_measure(family: ProtocolFamily, method: str = "auto") -> Fraction:
    """``E_{W,K,Q}(1 - Pr[decoded W_K = W_K])``, exactly.

    Uniform K, uniform files and every branch are enumerated. ``blockwise``
    uses that blocks succeed independently given the queries; ``joint``
    enumerates whole ``l``-block file sets.
    """
    f, ell = family.n_files, family.blocks
    counts, denom = output_kernel(family.protocol, family.n_servers, family.variant)
    wvals = _file_values(f)
    total = Fraction(0)
    for k in range(1, f + 1):
        masks = family.query_masks(k)
        hit = counts[_answer_index(masks, wvals), wvals[None, :, k - 1]]
        size = len(masks) * len(wvals) ** ell
        if _choose_method(method, size, ell) == "joint":
            joint = hit.astype(object)
            for _ in range(ell - 1):
                joint = (joint[:, :, None] * hit[:, None, :].astype(object)).reshape(len(masks), -1)
            ok = Fraction(int(joint.sum()), len(masks) * (denom * len(wvals)) ** ell)
        else:
            per_q = hit.sum(axis=1)
            ok = Fraction(sum(int(s) ** ell for s in per_q), len(masks) * (denom * len(wvals)) ** ell)
        total += ok
    return 1 - total / f


# ---------------------------------------------------------------------------
# gamma


@dataclass(frozen=True)
class ExactMI:
    """Mutual information ``sum_r mass_r * log2(r)`` with exact rational ratios.

    ``terms`` lists ``(ratio, mass)`` for every ratio
    ``p(x, y) / (p(x) p(y)) != 1``; it is empty exactly when the variables
    are independent.
    """

    terms: tuple[tuple[Fraction, Fraction], ...]

    @classmethod
    def from_joint(cls, joint: dict) -> ExactMI:
        px: dict = defaultdict(Fraction)
        py: dict = defaultdict(Fraction)
        for (x, y), p in joint.items():
            px[x] += p
            py[y] += p
        if sum(px.values()) != 1:
            raise ValueError("joint distribution does not sum to 1")
        grouped: dict = defaultdict(Fraction)
        for (x, y), p in joint.items():
            if p:
                ratio = p / (px[x] * py[y])
                if ratio != 1:
                    grouped[ratio] += p
        return cls(tuple(sorted(grouped.items())))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def bits(self) -> float:
        return math.fsum(float(m) * math.log2(r) for r, m in self.terms)

    def symbolic(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{format_real(m)}*log2({format_real(r)})" if m != 1 else f"log2({format_real(r)})" for r, m in self.terms)


@dataclass(frozen=True)
class UserSecrecy:
    exact: dict[int, ExactMI]
    holevo: dict[int, float]

    @property
    def per_server_gamma(self) -> dict[int, float]:
        return {t: mi.bits for t, mi in self.exact.items()}

    @property
    def gamma_bits(self) -> float:
        return max(self.per_server_gamma.values())

    @property
    def max_discrepancy(self) -> float:
        return max(abs(self.exact[t].bits - self.holevo[t]) for t in self.exact)


def user_secrecy(family: ProtocolFamily, holevo_dense_limit: int = 256) -> UserSecrecy:
    """``I(K; Q_t')`` for every server ``t``, K uniform.

    Computed from exact joint counts, then again as a Holevo quantity of the
    diagonal states ``rho_k`` over ``Q_t'``. The second evaluation uses
    ``holevo_information`` on explicit density matrices when the register has
    at most ``holevo_dense_limit`` values, ``classical_holevo`` otherwise.
    """
    n, f = family.n_servers, family.n_files
    joints: dict[int, dict] = {t: defaultdict(Fraction) for t in range(1, n + 1)}
    for k in range(1, f + 1):
        for qs, weight in query_distribution(n, f, k, family.query_rule):
            for t in joints:
                joints[t][(k, qs.complement(t))] += weight / f
    exact = {t: ExactMI.from_joint(j) for t, j in joints.items()}
    holevo = {}
    for t, joint in joints.items():
        values = sorted({y for _, y in joint})
        pos = {y: i for i, y in enumerate(values)}
        cond = np.zeros((f, len(values)))
        for (k, y), p in joint.items():
            cond[k - 1, pos[y]] = float(p * f)
        if len(values) <= holevo_dense_limit:
            holevo[t] = float(holevo_information([(1.0 / f, DensityMatrix.from_probabilities(row)) for row in cond]))
        else:
            holevo[t] = float(classical_holevo(cond))
    return UserSecrecy(exact, holevo)


# ---------------------------------------------------------------------------
# beta


def server_secrecy(
    family: ProtocolFamily,
    *,
    include_queries: bool = True,
    slots: Sequence[str] | None = None,
    method: str = "auto",
) -> dict[tuple[int, int], float]:
    """``I(W_i; user view | K = k)`` in bits for every ``i != k``.

    The view holds the received labels in ``slots`` (default: all) and,
    with ``include_queries``, the user's own query sets. Queries are
    independent of the files, so then the value is the query-average of
    the per-query Holevo quantity.
    """
    f, ell = family.n_files, family.blocks
    keep = family.slots if slots is None else tuple(slots)
    kernel = _marginal_kernel(family, keep)
    wvals = _file_values(f)
    out = {}
    for k in range(1, f + 1):
        masks = family.query_masks(k)
        d = kernel.shape[1]
        size = len(masks) * 4 ** (f * ell) * d**ell
        how = _choose_method(method, size, ell)
        if not include_queries and ell > 1 and how != "joint":
            raise CapacityError("without queries in the view, blocks are correlated; joint enumeration is too large")
        conds = {i: [] for i in range(f) if i != k - 1}
        for start in range(0, len(masks), _CHUNK):
            p = kernel[_answer_index(masks[start : start + _CHUNK], wvals)]
            for i in conds:
                conds[i].append(_conditional_on_file(p, f, i))
        for i, parts in conds.items():
            cond = np.concatenate(parts)
            if how == "joint":
                cond = _joint_blocks(cond, ell)
            if include_queries:
                chi = float(classical_holevo(cond).mean())
            else:
                chi = float(classical_holevo(cond.mean(axis=0)))
            out[(i + 1, k)] = chi * (ell if how == "blockwise" else 1)
    return out


# ---------------------------------------------------------------------------
# File independence of colluding views


@dataclass(frozen=True)
class Lemma1Result:
    max_distance: float
    per_server: dict[int, float]
    exact_bound: bool = True


def lemma1_check(family: ProtocolFamily, method: str = "auto", servers: Iterable[int] | None = None) -> Lemma1Result:
    """Dependence of the other servers' transmissions on ``W_k``.

    For each server ``t``, query index ``k``, query set and value ``w`` of
    ``W_k``: the trace distance between the state the other N-1 servers send
    given ``W_k = w`` (other files averaged) and its average over ``w``. All
    states are diagonal in the Bell-product basis, so the trace distance is
    half the l1 distance of label distributions. ``blockwise`` reports the
    subadditive bound ``l * (one-block distance)``; ``exact_bound`` is False
    in that case.
    """
    f, ell = family.n_files, family.blocks
    wvals = _file_values(f)
    per_server = {}
    exact = True
    for t in servers if servers is not None else range(1, family.n_servers + 1):
        kernel = _marginal_kernel(family, family.complement_slots(t))
        worst = 0.0
        for k in range(1, f + 1):
            masks = family.query_masks(k)
            size = len(masks) * 4 ** (f * ell) * kernel.shape[1] ** ell
            how = _choose_method(method, size, ell)
            exact &= how == "joint" or ell == 1
            for start in range(0, len(masks), _CHUNK):
                cond = _conditional_on_file(kernel[_answer_index(masks[start : start + _CHUNK], wvals)], f, k - 1)
                if how == "joint":
                    cond = _joint_blocks(cond, ell)
                avg = cond.mean(axis=1, keepdims=True)
                dist = 0.5 * np.abs(cond - avg).sum(axis=-1).max()
                worst = max(worst, float(dist) * (ell if how == "blockwise" else 1))
        per_server[t] = min(worst, 1.0)
    return Lemma1Result(max(per_server.values()), per_server, exact)


# ---------------------------------------------------------------------------
# Reduced-state trace bound


@dataclass(frozen=True)
class Prop4Result:
    min_slack: float
    cases: int
    worst: tuple[int, int, float] | None = None


def prop4_check(
    n_states: int = 200,
    s_values: Sequence[float] = (0.25, 0.5, 0.75),
    rng=0,
    max_dim: int = 8,
) -> Prop4Result:
    """``Tr rho_1^s <= min(d1, d2)^(1-s)`` on random bipartite pure states.

    Returns the smallest slack ``min(d1, d2)^(1-s) - Tr rho_1^s`` seen.
    """
    rng = np.random.default_rng(rng)
    worst, worst_case, cases = math.inf, None, 0
    for _ in range(n_states):
        d1, d2 = (int(x) for x in rng.integers(2, max_dim + 1, size=2))
        psi = random_pure_state(d1 * d2, rng)
        rho = DensityMatrix(("A", "B"), np.outer(psi, psi.conj()), (d1, d2))
        rho1 = partial_trace(rho, {"A"})
        for s in s_values:
            slack = min(d1, d2) ** (1 - s) - trace_power(rho1, s)
            cases += 1
            if slack < worst:
                worst, worst_case = slack, (d1, d2, float(s))
    return Prop4Result(float(worst), cases, worst_case)


# ---------------------------------------------------------------------------
# Dense cross-check


def dense_user_view(n_servers: int, h: Sequence[WeylLabel], variant: str = "standard") -> DensityMatrix:
    """Everything the user holds before decoding, as a density matrix.

    Runs the dense backend to the end of the download and averages over the
    middle servers' outcomes. Classical labels become 4-level registers
    after the received qubits.
    """
    family = ProtocolFamily("qspir", n_servers, 2, 1, variant)
    layout = family.layout
    qubits = layout.received_qubits()
    classical = [s for s in family.slots if s[0] == "G" or s == "clear_H2"]
    dims = (2,) * len(qubits) + (4,) * len(classical)
    total = None
    for b in run_block(n_servers, h, "dense", variant=variant, until="download"):
        rho = b.state.permuted(qubits).density_matrix().matrix
        for s in classical:
            reg = np.zeros((4, 4))
            lab = h[1] if s == "clear_H2" else b.outcomes[("G", int(s[1:]))]
            reg[int(lab), int(lab)] = 1.0
            rho = np.kron(rho, reg)
        total = b.probability * rho if total is None else total + b.probability * rho
    return DensityMatrix(tuple(qubits) + tuple(classical), total, dims)


def bell_view_state(n_servers: int, probs: np.ndarray, variant: str = "standard") -> DensityMatrix:
    """Density matrix of a diagonal view ``probs`` (one kernel row), in
    ``dense_user_view`` subsystem order."""
    family = ProtocolFamily("qspir", n_servers, 2, 1, variant)
    slots = family.slots
    probs = np.asarray(probs).reshape((4,) * len(slots))
    qubit_slots = [s for s in slots if s == "link" or s[0] == "S"]
    classical = [s for s in slots if s not in qubit_slots]
    dim = 4 ** len(slots)
    total = np.zeros((dim, dim), dtype=complex)
    for labels in itertools.product(range(4), repeat=len(slots)):
        p = probs[labels]
        if not p:
            continue
        by_slot = dict(zip(slots, labels))
        vec = np.ones(1, dtype=complex)
        for s in qubit_slots:
            vec = np.kron(vec, bell_vector(WeylLabel.from_int(by_slot[s])))
        for s in classical:
            vec = np.kron(vec, np.eye(4)[by_slot[s]])
        total += p * np.outer(vec, vec.conj())
    qubits = family.layout.received_qubits()
    return DensityMatrix(tuple(qubits) + tuple(classical), total, (2,) * len(qubits) + (4,) * len(classical))


# ---------------------------------------------------------------------------
# Report


@dataclass(frozen=True)
class SecurityReport:
    family: ProtocolFamily
    alpha: Fraction | None = None
    per_pair_beta: dict[tuple[int, int], float] | None = None
    per_server_gamma: dict[int, ExactMI] | None = None
    gamma_holevo: dict[int, float] | None = None
    lemma1: Lemma1Result | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        for name, values in (("beta", self.per_pair_beta), ("gamma", self.gamma_holevo)):
            if values and min(values.values()) < -1e-9:
                raise ArithmeticError(f"negative {name} entry {min(values.values())!r}")

    @property
    def beta_bits(self) -> float | None:
        if not self.per_pair_beta:
            return None
        return max(0.0, max(self.per_pair_beta.values()))

    @property
    def gamma_bits(self) -> float | None:
        if not self.per_server_gamma:
            return None
        return max(0.0, max(mi.bits for mi in self.per_server_gamma.values()))

    @property
    def gamma_exact(self) -> str | None:
        if not self.per_server_gamma:
            return None
        return max(self.per_server_gamma.values(), key=lambda mi: mi.bits).symbolic()

    def to_dict(self) -> dict:
        out = {"family": self.family.to_dict()}
        out["alpha"] = None if self.alpha is None else format_real(self.alpha)
        if self.per_pair_beta is not None:
            out["beta_bits"] = format_real(self.beta_bits) if self.per_pair_beta else None
            out["per_pair_beta"] = {f"{i},{k}": format_real(max(0.0, v)) for (i, k), v in sorted(self.per_pair_beta.items())}
        if self.per_server_gamma is not None:
            out["gamma_bits"] = format_real(self.gamma_bits)
            out["gamma_exact"] = self.gamma_exact
            out["per_server_gamma"] = {str(t): mi.symbolic() for t, mi in sorted(self.per_server_gamma.items())}
            out["per_server_gamma_holevo"] = {str(t): format_real(v) for t, v in sorted(self.gamma_holevo.items())}
        if self.lemma1 is not None:
            out["lemma1_max_trace_distance"] = format_real(self.lemma1.max_distance)
            out["lemma1_exact"] = self.lemma1.exact_bound
        out.update(self.extra)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def evaluate(family: ProtocolFamily, checks: Iterable[str] = ("error", "user", "server", "lemma1")) -> SecurityReport:
    """Run the requested measures on ``family``."""
    checks = set(checks)
    unknown = checks - {"error", "user", "server", "lemma1"}
    if unknown:
        raise ValueError(f"unknown checks {sorted(unknown)}")
    alpha = error_measure(family) if "error" in checks else None
    beta = server_secrecy(family) if "server" in checks else None
    gamma = user_secrecy(family) if "user" in checks else None
    lemma = lemma1_check(family) if "lemma1" in checks and family.protocol != "classical" else None
    return SecurityReport(
        family,
        alpha,
        beta,
        None if gamma is None else gamma.exact,
        None if gamma is None else gamma.holevo,
        lemma,
    )
