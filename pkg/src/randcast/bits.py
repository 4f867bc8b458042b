"""Finite binary strings: situations and realized path prefixes.

A situation is a finite sequence of outcomes in {0,1}; the empty situation
has length 0.  The same immutable value type serves both for situations
(betting positions) and for realized prefixes of a path under analysis.
Bits are packed into a single integer, with bit k of the mask holding the
(k+1)-th outcome, so appending an outcome is O(1) arithmetic.

Text format (.bits): ASCII '0'/'1' digits, all whitespace ignored,
'#' starts a comment running to end of line.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator


class BitsParseError(ValueError):
    """Bad character in a bitstream; carries the byte offset."""

    def __init__(self, offset: int, char: str) -> None:
        super().__init__(f"invalid character {char!r} at byte offset {offset}")
        self.offset = offset
        self.char = char


@dataclass(frozen=True)
class Bits:
    """Immutable packed bit sequence; equality is length + content."""

    length: int
    mask: int

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("negative length")
        if self.mask < 0 or self.mask >> self.length:
            raise ValueError("mask has bits beyond declared length")

    @staticmethod
    def empty() -> "Bits":
        return Bits(0, 0)

    @staticmethod
    def from_bits(seq) -> "Bits":
        mask = 0
        n = 0
        for b in seq:
            if b not in (0, 1):
                raise ValueError(f"bit must be 0 or 1, got {b!r}")
            mask |= b << n
            n += 1
        return Bits(n, mask)

    @staticmethod
    def from_string(text: str) -> "Bits":
        return parse_bits(text)

    def append(self, bit: int) -> "Bits":
        if bit not in (0, 1):
            raise ValueError(f"bit must be 0 or 1, got {bit!r}")
        return Bits(self.length + 1, self.mask | (bit << self.length))

    def bit(self, index: int) -> int:
        """Outcome at 0-based index (the (index+1)-th revealed bit)."""
        if not 0 <= index < self.length:
            raise IndexError(index)
        return (self.mask >> index) & 1

    def prefix(self, n: int) -> "Bits":
        if not 0 <= n <= self.length:
            raise IndexError(n)
        return Bits(n, self.mask & ((1 << n) - 1))

    def is_prefix_of(self, other: "Bits") -> bool:
        return self.length <= other.length and other.prefix(self.length) == self

    def ends_with(self, pattern: "Bits") -> bool:
        if pattern.length > self.length:
            return False
        return (self.mask >> (self.length - pattern.length)) == pattern.mask

    def ones(self) -> int:
        return self.mask.bit_count()

    def tolist(self) -> list:
        """Outcome list in order; O(n) total, unlike repeated bit()."""
        if self.length == 0:
            return []
        text = bin(self.mask)[2:].zfill(self.length)
        return [1 if c == "1" else 0 for c in reversed(text)]

    def __len__(self) -> int:
        return self.length

    def __iter__(self) -> Iterator[int]:
        m = self.mask
        for _ in range(self.length):
            yield m & 1
            m >>= 1

    def __str__(self) -> str:
        return "".join(str(b) for b in self)

    def __repr__(self) -> str:
        if self.length <= 32:
            return f"Bits('{self}')"
        return f"Bits(length={self.length})"


def parse_bits(text: str) -> Bits:
    """Parse the .bits text format; raises BitsParseError with byte offset."""
    mask = 0
    n = 0
    in_comment = False
    for offset, ch in enumerate(text):
        if in_comment:
            if ch == "\n":
                in_comment = False
            continue
        if ch == "#":
            in_comment = True
        elif ch == "1":
            mask |= 1 << n
            n += 1
        elif ch == "0":
            n += 1
        elif not ch.isspace():
            raise BitsParseError(offset, ch)
    return Bits(n, mask)


class SituationView:
    """Read-only situation over a shared append-only outcome buffer.

    Scanning drivers (capital replay, stochasticity statistics, path
    constructions) walk a single growing buffer and hand out views so that
    per-step situation access stays O(1); strategies and selections read
    situations through the same interface as Bits (length, bit, ends_with).
    """

    __slots__ = ("_buf", "length")

    def __init__(self, buf: list, length: int) -> None:
        self._buf = buf
        self.length = length

    def bit(self, index: int) -> int:
        if not 0 <= index < self.length:
            raise IndexError(index)
        return self._buf[index]

    def ends_with(self, pattern: Bits) -> bool:
        n = pattern.length
        if n > self.length:
            return False
        base = self.length - n
        m = pattern.mask
        for i in range(n):
            if self._buf[base + i] != (m >> i) & 1:
                return False
        return True

    def ones(self) -> int:
        return sum(self._buf[: self.length])

    def to_bits(self) -> Bits:
        return Bits.from_bits(self._buf[: self.length])

    def __len__(self) -> int:
        return self.length

    def __repr__(self) -> str:
        return f"SituationView(length={self.length})"


def serialize_bits(bits: Bits, width: int = 64) -> str:
    """Render as lines of at most `width` digits; parse(serialize(x)) == x."""
    s = str(bits)
    if not s:
        return ""
    lines = [s[i : i + width] for i in range(0, len(s), width)]
    return "\n".join(lines) + "\n"
