"""Block messages and the rules for splitting byte streams into blocks."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

REDACTED = None


@dataclass(frozen=True)
class BlockMessage:
    """An ordered sequence of byte blocks; a ``None`` entry is a redacted block."""

    blocks: tuple[bytes | None, ...]

    def __init__(self, blocks: Iterable[bytes | None]):
        blocks = tuple(blocks)
        if not blocks:
            raise ValueError("a message has at least one block")
        for b in blocks:
            if b is not None and not isinstance(b, (bytes, bytearray)):
                raise TypeError(f"blocks must be bytes, got {type(b).__name__}")
        object.__setattr__(self, "blocks", tuple(None if b is None else bytes(b) for b in blocks))

    def __len__(self) -> int:
        return len(self.blocks)

    def __getitem__(self, j: int) -> bytes | None:
        return self.blocks[j]

    def __iter__(self):
        return iter(self.blocks)

    @property
    def n(self) -> int:
        return len(self.blocks)

    @property
    def redacted(self) -> frozenset[int]:
        return frozenset(j for j, b in enumerate(self.blocks) if b is None)

    def join(self) -> bytes:
        """The unsplit byte stream; undefined once a block is redacted."""
        if self.redacted:
            raise ValueError("a redacted message has no byte stream")
        return b"".join(self.blocks)

    def replace(self, changes: dict[int, bytes | None]) -> "BlockMessage":
        blocks = list(self.blocks)
        for j, b in changes.items():
            blocks[j] = b
        return BlockMessage(blocks)


def diff(m: Sequence[bytes | None], m2: Sequence[bytes | None]) -> set[int]:
    if len(m) != len(m2):
        raise ValueError("diff is defined only for messages with equal block counts")
    return {j for j, (a, b) in enumerate(zip(m, m2)) if a != b}


def split_fixed(data: bytes, size: int) -> BlockMessage:
    """Consecutive blocks of ``size`` bytes; the last one may be shorter."""
    if size < 1:
        raise ValueError("block size must be >= 1 byte")
    if not data:
        return BlockMessage([b""])
    return BlockMessage(data[i : i + size] for i in range(0, len(data), size))


def split_delimiter(data: bytes, delimiter: int) -> BlockMessage:
    """Blocks ending with (and including) the delimiter byte.

    Any bytes after the last delimiter form a final block, so joining the
    blocks gives back ``data`` exactly.
    """
    if not 0 <= delimiter <= 255:
        raise ValueError("delimiter must be a byte value")
    blocks, start = [], 0
    for i, b in enumerate(data):
        if b == delimiter:
            blocks.append(data[start : i + 1])
            start = i + 1
    if start < len(data) or not blocks:
        blocks.append(data[start:])
    return BlockMessage(blocks)
