"""Redactable signatures with total privacy.

Each row digest is signed on its own, tied to the other entries of the
same signature by a random string r and to its position by id(i, t+1).
Redacting a block erases the block, every entry whose row contains it,
and the whole-message entry; nothing derived from the block survives.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable

from .cff import CffMatrix, Outcome, cff_decode
from .crypto import CryptoSuite, block_digest
from .errors import AlreadyRedacted, BlockCountMismatch, MalformedSignature, TooManyBlocks, TooManyRedactions
from .message import BlockMessage
from .signature import SignatureHeader, SplitMode, VerifyOutcome, id_bytes

R_BITS = 128


@dataclass(frozen=True)
class Scheme3Signature:
    header: SignatureHeader
    r: bytes
    entries: tuple[bytes | None, ...]  # t row entries then the whole-message entry

    @property
    def redacted_entries(self) -> frozenset[int]:
        return frozenset(i for i, e in enumerate(self.entries) if e is None)


def _tuple_entry(digest: bytes, r: bytes, i: int, t: int) -> bytes:
    return digest + r + id_bytes(i + 1, t + 1)


def sign(
    message,
    sk: bytes,
    suite: CryptoSuite,
    matrix: CffMatrix,
    split: tuple[SplitMode, int] = (SplitMode.NONE, 0),
    r: bytes | None = None,
) -> Scheme3Signature:
    m = message if isinstance(message, BlockMessage) else BlockMessage(message)
    if m.redacted:
        raise ValueError("cannot sign a message with redacted blocks")
    if m.n > matrix.n:
        raise TooManyBlocks(f"{m.n} blocks but {matrix!r} has only {matrix.n} columns")
    r = suite.random_string(R_BITS) if r is None else r
    if len(r) * 8 != R_BITS:
        raise ValueError(f"r must be {R_BITS} bits")
    header = SignatureHeader.for_matrix(3, suite, matrix, m.n, 0, split)
    work = matrix.truncate(m.n)
    h, t = suite.hash, work.t
    digests = [block_digest(h, b) for b in m]
    payloads = [
        _tuple_entry(h(b"".join(digests[j] for j in members)), r, i, t)
        for i, members in enumerate(work.row_members)
    ]
    payloads.append(_tuple_entry(h(m.join()), r, t, t))
    return Scheme3Signature(header, r, tuple(suite.cdss.sign(p, sk) for p in payloads))


def verify(message, sig: Scheme3Signature, pk: bytes, suite: CryptoSuite | None = None,
           matrix: CffMatrix | None = None) -> VerifyOutcome:
    """Accept with the set of modified or redacted blocks, or reject.

    A rejection carries no index set.
    """
    m = message if isinstance(message, BlockMessage) else BlockMessage(message)
    hd = sig.header
    h = hd.resolve_hash(suite)
    cdss = hd.resolve_cdss(suite)
    if m.n != hd.n:
        raise BlockCountMismatch(f"message has {m.n} blocks, signature expects {hd.n}")
    if len(sig.entries) != hd.t + 1 or len(sig.r) * 8 != R_BITS:
        raise MalformedSignature("scheme 3 signature has the wrong shape")
    work = hd.matrix(matrix)
    t = work.t

    whole = sig.entries[t]
    if whole is not None and not m.redacted:
        if cdss.verify(_tuple_entry(h(m.join()), sig.r, t, t), whole, pk):
            return VerifyOutcome(True, frozenset())

    digests = [None if b is None else block_digest(h, b) for b in m]
    outcomes = []
    for i, members in enumerate(work.row_members):
        entry = sig.entries[i]
        if entry is None:
            outcomes.append(Outcome.UNAVAILABLE)
        elif any(digests[j] is None for j in members):
            outcomes.append(Outcome.FAIL)
        else:
            payload = _tuple_entry(h(b"".join(digests[j] for j in members)), sig.r, i, t)
            outcomes.append(Outcome.PASS if cdss.verify(payload, entry, pk) else Outcome.FAIL)
    outcomes = tuple(outcomes)
    modified = frozenset(cff_decode(work, outcomes))
    if len(modified) <= hd.d:
        return VerifyOutcome(True, modified, outcomes=outcomes)
    return VerifyOutcome(False, None, outcomes=outcomes)


def redact(message, sig: Scheme3Signature, blocks: Iterable[int],
           matrix: CffMatrix | None = None) -> tuple[BlockMessage, Scheme3Signature]:
    """Erase ``blocks`` (0-based) from the message and the signature."""
    m = message if isinstance(message, BlockMessage) else BlockMessage(message)
    targets = set(blocks)
    if not targets:
        return m, sig
    hd = sig.header
    if len(targets) > hd.d:
        raise TooManyRedactions(f"{len(targets)} blocks requested, at most {hd.d} allowed")
    bad = [j for j in targets if not 0 <= j < m.n]
    if bad:
        raise IndexError(f"block indices out of range: {sorted(bad)}")
    already = targets & m.redacted
    if already:
        raise AlreadyRedacted(f"blocks already redacted: {sorted(already)}")
    work = hd.matrix(matrix)
    entries = list(sig.entries)
    entries[work.t] = None
    for j in targets:
        for i in work.column_support(j):
            entries[int(i)] = None
    return m.replace({j: None for j in targets}), replace(sig, entries=tuple(entries))
