"""Symbolic Bell-frame backend.

Every two-qubit state the protocols create is a Bell pair with a Weyl
operator on one side, ``(I (x) F)|Phi>``. A ``BellLink`` records the two
endpoints and the signed frame ``F``; entanglement swapping and local Weyl
operations only update frames, so whole protocol runs reduce to Z_2
arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .pauli import IDENTITY, LABELS, SignedWeyl, WeylLabel, bell_transfer, compose
from .state import QuantumRegister, bell_vector

__all__ = ["BellLink", "FrameState", "frame_swap_update"]

_QUARTER = Fraction(1, 4)


@dataclass(frozen=True, slots=True)
class BellLink:
    """The state ``(I (x) frame)|Phi>`` on ``(endpoint_a, endpoint_b)``."""

    endpoint_a: str
    endpoint_b: str
    frame: SignedWeyl = IDENTITY

    def __post_init__(self):
        if self.endpoint_a == self.endpoint_b:
            raise ValueError(f"link endpoints must differ, got {self.endpoint_a!r} twice")

    @property
    def endpoints(self) -> tuple[str, str]:
        return (self.endpoint_a, self.endpoint_b)

    def flipped(self) -> BellLink:
        # (I (x) F)|Phi>_AB equals (I (x) F^T)|Phi>_BA, and F^T is bell_transfer(F).
        return BellLink(self.endpoint_b, self.endpoint_a, bell_transfer(self.frame))

    def oriented(self, first: str) -> BellLink:
        if first == self.endpoint_a:
            return self
        if first == self.endpoint_b:
            return self.flipped()
        raise KeyError(f"{first!r} is not an endpoint of {self}")

    def apply(self, qubit: str, op: SignedWeyl) -> BellLink:
        if qubit == self.endpoint_b:
            return BellLink(self.endpoint_a, self.endpoint_b, compose(op, self.frame))
        if qubit == self.endpoint_a:
            return self.flipped().apply(qubit, op).flipped()
        raise KeyError(f"{qubit!r} is not an endpoint of {self}")

    def register(self) -> QuantumRegister:
        """Dense realization, for cross-checks."""
        vec = bell_vector(self.frame.label)
        return QuantumRegister(self.endpoints, -vec if self.frame.sign else vec)

    def __str__(self) -> str:
        return f"{self.endpoint_a}~{self.endpoint_b}[{self.frame}]"


def frame_swap_update(link1: BellLink, link2: BellLink, outcome: WeylLabel) -> BellLink:
    """Outer link left after a Bell measurement of ``link1.endpoint_b`` and ``link2.endpoint_a``.

    With frames ``F1`` and ``F2`` and measured label ``g``, the normalized
    post-measurement state is ``(I (x) F2 W(g) F1)|Phi>`` on
    ``(link1.endpoint_a, link2.endpoint_b)``, phase included.
    """
    if set(link1.endpoints) & set(link2.endpoints):
        raise ValueError(f"links {link1} and {link2} share an endpoint")
    frame = compose(compose(link2.frame, SignedWeyl(0, outcome)), link1.frame)
    return BellLink(link1.endpoint_a, link2.endpoint_b, frame)


class FrameState:
    """A product of Bell links plus an accumulated global sign.

    ``sign`` collects the phases of links that were measured out completely,
    so that ``(-1)^sign`` times the product of link vectors equals the
    dense simulation's state exactly.
    """

    __slots__ = ("_links", "sign")

    def __init__(self, links: Iterable[BellLink] = (), sign: int = 0):
        table: dict[str, BellLink] = {}
        for link in links:
            for q in link.endpoints:
                if q in table:
                    raise ValueError(f"qubit {q!r} appears in two links")
                table[q] = link
        self._links = table
        self.sign = sign

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> FrameState:
        return cls(BellLink(a, b) for a, b in pairs)

    @property
    def links(self) -> tuple[BellLink, ...]:
        seen, out = set(), []
        for link in self._links.values():
            if link.endpoints not in seen:
                seen.add(link.endpoints)
                out.append(link)
        return tuple(out)

    @property
    def qubits(self) -> tuple[str, ...]:
        return tuple(self._links)

    def link(self, qubit: str) -> BellLink:
        try:
            return self._links[qubit]
        except KeyError:
            raise KeyError(f"unknown qubit {qubit!r}") from None

    def _with(self, remove: Iterable[BellLink], add: Iterable[BellLink], sign: int | None = None) -> FrameState:
        new = FrameState.__new__(FrameState)
        table = dict(self._links)
        for link in remove:
            for q in link.endpoints:
                del table[q]
        for link in add:
            for q in link.endpoints:
                table[q] = link
        new._links = table
        new.sign = self.sign if sign is None else sign
        return new

    def apply(self, qubit: str, op: SignedWeyl | WeylLabel) -> FrameState:
        if isinstance(op, WeylLabel):
            op = SignedWeyl(0, op)
        link = self.link(qubit)
        return self._with([link], [link.apply(qubit, op)])

    def measure(self, q1: str, q2: str) -> list[tuple[WeylLabel, Fraction, FrameState]]:
        """Nonzero branches of the Bell PVM on ``(q1, q2)``."""
        if q1 == q2:
            raise ValueError("Bell measurement needs two distinct qubits")
        l1, l2 = self.link(q1), self.link(q2)
        if l1 is l2:
            link = l1.oriented(q1)
            # <v_g| (-1)^s v_g = (-1)^s: deterministic outcome, phase moves to the global sign.
            return [(link.frame.label, Fraction(1), self._with([l1], [], self.sign ^ link.frame.sign))]
        left = l1.oriented(q1).flipped()
        right = l2.oriented(q2)
        return [(g, _QUARTER, self._with([l1, l2], [frame_swap_update(left, right, g)])) for g in LABELS]

    def register(self, order: Iterable[str] | None = None) -> QuantumRegister:
        """Dense realization of the whole frame state, for cross-checks."""
        reg = QuantumRegister.empty(-1.0 if self.sign else 1.0)
        for link in self.links:
            reg = reg.tensor(link.register())
        return reg.permuted(tuple(order)) if order is not None else reg

    def __repr__(self) -> str:
        body = ", ".join(str(link) for link in self.links)
        return f"FrameState({body}; sign={self.sign})"
