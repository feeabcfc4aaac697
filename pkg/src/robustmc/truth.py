"""The five-valued truth domain B4 and its da Costa algebra.

Values form the chain 0000 < 0001 < 0011 < 0111 < 1111.  Internally a value
is its rank 0..4; the bit rendering is derived from the rank.
"""
from __future__ import annotations

from functools import total_ordering

__all__ = [
    "TruthValue", "FALSE", "V0001", "V0011", "V0111", "TRUE", "VALUES",
    "NONZERO", "meet", "join", "implies", "negate", "bit_threshold",
]

_RENDER = ("0000", "0001", "0011", "0111", "1111")


@total_ordering
class TruthValue:
    """One of the five monotone bit vectors b1 <= b2 <= b3 <= b4."""

    __slots__ = ("rank",)
    _cache: dict = {}

    def __new__(cls, rank: int):
        try:
            return cls._cache[rank]
        except KeyError:
            pass
        if not isinstance(rank, int) or not 0 <= rank <= 4:
            raise ValueError(f"truth value rank must be 0..4, got {rank!r}")
        obj = super().__new__(cls)
        object.__setattr__(obj, "rank", rank)
        cls._cache[rank] = obj
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("TruthValue is immutable")

    def __reduce__(self):
        return TruthValue, (self.rank,)

    @classmethod
    def parse(cls, text: str) -> "TruthValue":
        try:
            return cls(_RENDER.index(text.strip()))
        except ValueError:
            raise ValueError(
                f"not a truth value: {text!r} (expected one of {', '.join(_RENDER)})"
            ) from None

    @classmethod
    def from_bits(cls, bits) -> "TruthValue":
        bits = tuple(int(b) for b in bits)
        if len(bits) != 4 or any(b not in (0, 1) for b in bits):
            raise ValueError(f"expected four binary digits, got {bits!r}")
        if any(bits[i] > bits[i + 1] for i in range(3)):
            raise ValueError(f"bit vector {bits!r} is not monotone")
        return cls(sum(bits))

    @property
    def bits(self) -> tuple:
        return tuple(1 if 4 - i <= self.rank else 0 for i in range(4))

    def bit(self, k: int) -> int:
        """The k-th bit (1-based, most significant first)."""
        if not 1 <= k <= 4:
            raise ValueError(f"bit index must be 1..4, got {k}")
        return 1 if self.rank >= 5 - k else 0

    def __eq__(self, other):
        if isinstance(other, TruthValue):
            return self.rank == other.rank
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, TruthValue):
            return self.rank < other.rank
        return NotImplemented

    def __hash__(self):
        return hash(("TruthValue", self.rank))

    def __str__(self):
        return _RENDER[self.rank]

    def __repr__(self):
        return f"TruthValue({_RENDER[self.rank]})"


FALSE = TruthValue(0)
V0001 = TruthValue(1)
V0011 = TruthValue(2)
V0111 = TruthValue(3)
TRUE = TruthValue(4)
VALUES = (FALSE, V0001, V0011, V0111, TRUE)
# Nonzero values in the order the checker fills rows: 1111 down to 0001.
NONZERO = (TRUE, V0111, V0011, V0001)


def meet(a: TruthValue, b: TruthValue) -> TruthValue:
    return a if a <= b else b


def join(a: TruthValue, b: TruthValue) -> TruthValue:
    return a if a >= b else b


def implies(a: TruthValue, b: TruthValue) -> TruthValue:
    """Residuated implication: the largest c with meet(c, a) <= b."""
    return TRUE if a <= b else b


def negate(a: TruthValue) -> TruthValue:
    """da Costa negation: true goes to false, every shade of false to true."""
    return FALSE if a is TRUE else TRUE


def bit_threshold(k: int) -> TruthValue:
    """The least value whose k-th bit is set (1 -> 1111, ..., 4 -> 0001).

    ``v.bit(k) == 1`` iff ``v >= bit_threshold(k)``.
    """
    if not 1 <= k <= 4:
        raise ValueError(f"bit index must be 1..4, got {k}")
    return TruthValue(5 - k)
