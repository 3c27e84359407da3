"""Signed qubit Weyl operators.

A qubit Weyl operator is ``W(a, b) = X^a Z^b`` with ``a, b`` in Z_2. Products
of Weyl operators only ever pick up a real sign, so the group generated by
them is the 8-element set ``{(-1)^s W(a, b)}``. Signs are tracked as Z_2
exponents; no complex phases are involved.

Matrix realizations are provided for cross-checking against the dense
simulator and are never used on the symbolic fast path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "WeylLabel",
    "SignedWeyl",
    "LabelVector",
    "IDENTITY",
    "LABELS",
    "SIGNED_WEYLS",
    "compose",
    "adjoint",
    "commutation_sign",
    "matrix",
    "bell_transfer",
]

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_I = np.eye(2, dtype=complex)


@dataclass(frozen=True, order=True, slots=True)
class WeylLabel:
    """Element ``(a, b)`` of Z_2^2, labelling ``W(a, b) = X^a Z^b``."""

    a: int = 0
    b: int = 0

    def __post_init__(self):
        if self.a not in (0, 1) or self.b not in (0, 1):
            raise ValueError(f"Weyl label bits must be 0 or 1, got ({self.a}, {self.b})")

    def __add__(self, other: WeylLabel) -> WeylLabel:
        return WeylLabel(self.a ^ other.a, self.b ^ other.b)

    def __int__(self) -> int:
        return (self.a << 1) | self.b

    @classmethod
    def from_int(cls, value: int) -> WeylLabel:
        if not 0 <= value < 4:
            raise ValueError(f"Weyl label index must be in [0, 4), got {value}")
        return _LABEL_TABLE[value]

    def __iter__(self) -> Iterator[int]:
        yield self.a
        yield self.b

    def __str__(self) -> str:
        return f"({self.a},{self.b})"


_LABEL_TABLE = tuple(WeylLabel(v >> 1, v & 1) for v in range(4))
LABELS: tuple[WeylLabel, ...] = _LABEL_TABLE


@dataclass(frozen=True, order=True, slots=True)
class SignedWeyl:
    """The operator ``(-1)^sign W(label)``."""

    sign: int = 0
    label: WeylLabel = WeylLabel()

    def __post_init__(self):
        if self.sign not in (0, 1):
            raise ValueError(f"sign exponent must be 0 or 1, got {self.sign}")

    @classmethod
    def of(cls, a: int, b: int, sign: int = 0) -> SignedWeyl:
        return cls(sign, WeylLabel(a, b))

    def __matmul__(self, other: SignedWeyl) -> SignedWeyl:
        return compose(self, other)

    def __str__(self) -> str:
        return f"{'-' if self.sign else '+'}W{self.label}"


IDENTITY = SignedWeyl()
SIGNED_WEYLS: tuple[SignedWeyl, ...] = tuple(SignedWeyl(s, lab) for s in (0, 1) for lab in LABELS)


def compose(x: SignedWeyl, y: SignedWeyl) -> SignedWeyl:
    """Operator product ``x * y`` (apply ``y`` first)."""
    sign = x.sign ^ y.sign ^ (x.label.b & y.label.a)
    return SignedWeyl(sign, x.label + y.label)


def adjoint(x: SignedWeyl) -> SignedWeyl:
    """Conjugate transpose; ``W(a,b)^dagger = (-1)^{ab} W(a,b)``."""
    return SignedWeyl(x.sign ^ (x.label.a & x.label.b), x.label)


def commutation_sign(x: WeylLabel, y: WeylLabel) -> int:
    """Exponent ``s`` with ``W(x) W(y) = (-1)^s W(y) W(x)``."""
    return (x.b & y.a) ^ (x.a & y.b)


def matrix(x: SignedWeyl | WeylLabel) -> np.ndarray:
    """Explicit 2x2 matrix ``(-1)^sign X^a Z^b``."""
    if isinstance(x, WeylLabel):
        x = SignedWeyl(0, x)
    m = (_X if x.label.a else _I) @ (_Z if x.label.b else _I)
    return -m if x.sign else m.copy()


def bell_transfer(x: SignedWeyl) -> SignedWeyl:
    """Move an operator across ``|Phi>``.

    Returns ``y`` with ``(I (x) x)|Phi> = (y (x) I)|Phi>``. Since Weyl
    matrices are real, ``y`` is the transpose of ``x``, which is also the
    adjoint.
    """
    return SignedWeyl(x.sign ^ (x.label.a & x.label.b), x.label)


@dataclass(frozen=True, slots=True)
class LabelVector:
    """A 2l-bit file or answer, split into ``l`` blocks of Z_2^2.

    Addition is blockwise Z_2^2 addition. ``int(v)`` packs block ``p`` into
    bits ``2p`` and ``2p + 1``; Python integers have no width limit so the
    packing works for any number of blocks.
    """

    blocks: tuple[WeylLabel, ...]

    def __post_init__(self):
        if len(self.blocks) < 1:
            raise ValueError("a LabelVector needs at least one block")
        if not all(isinstance(b, WeylLabel) for b in self.blocks):
            object.__setattr__(self, "blocks", tuple(_as_label(b) for b in self.blocks))

    @classmethod
    def zeros(cls, n_blocks: int) -> LabelVector:
        return cls((LABELS[0],) * n_blocks)

    @classmethod
    def from_ints(cls, values: Iterable[int]) -> LabelVector:
        """Build from per-block integers ``2a + b``."""
        return cls(tuple(WeylLabel.from_int(int(v)) for v in values))

    @classmethod
    def from_int(cls, packed: int, n_blocks: int) -> LabelVector:
        if packed < 0 or packed >> (2 * n_blocks):
            raise ValueError(f"{packed} does not fit in {n_blocks} blocks")
        return cls(tuple(WeylLabel.from_int((packed >> (2 * p)) & 3) for p in range(n_blocks)))

    def __int__(self) -> int:
        out = 0
        for p, lab in enumerate(self.blocks):
            out |= int(lab) << (2 * p)
        return out

    def to_ints(self) -> list[int]:
        return [int(b) for b in self.blocks]

    def __len__(self) -> int:
        return len(self.blocks)

    def __getitem__(self, p: int) -> WeylLabel:
        return self.blocks[p]

    def __iter__(self) -> Iterator[WeylLabel]:
        return iter(self.blocks)

    def __add__(self, other: LabelVector) -> LabelVector:
        if len(other) != len(self):
            raise ValueError(f"block count mismatch: {len(self)} vs {len(other)}")
        return LabelVector(tuple(x + y for x, y in zip(self.blocks, other.blocks)))

    def __str__(self) -> str:
        return "[" + " ".join(str(b) for b in self.blocks) + "]"


def _as_label(value: WeylLabel | Sequence[int] | int) -> WeylLabel:
    if isinstance(value, WeylLabel):
        return value
    if isinstance(value, (int, np.integer)):
        return WeylLabel.from_int(int(value))
    a, b = value
    return WeylLabel(int(a), int(b))
