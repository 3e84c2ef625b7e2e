"""Modification-locating signatures.

The signer hashes every block, hashes the concatenation of block digests
selected by each CFF row, and signs the tuple of row digests together
with the digest of the whole message.  A verifier holding a message with
at most d modified blocks learns exactly which blocks changed.
"""
from __future__ import annotations

from dataclasses import dataclass

from .cff import CffMatrix, Outcome, cff_decode
from .crypto import CryptoSuite, HashFn, block_digest
from .errors import BlockCountMismatch, MalformedSignature, TooManyBlocks
from .message import BlockMessage
from .signature import SignatureHeader, SplitMode, VerifyOutcome


@dataclass(frozen=True)
class Scheme1Signature:
    header: SignatureHeader
    digests: tuple[bytes, ...]
    h_star: bytes
    cdss_sig: bytes

    def signed_bytes(self) -> bytes:
        """Canonical serialisation of (T[1..t], h*) covered by the signature."""
        return b"".join(self.digests) + self.h_star


def _as_message(m) -> BlockMessage:
    return m if isinstance(m, BlockMessage) else BlockMessage(m)


def row_digests(h: HashFn, matrix: CffMatrix, block_digests: list[bytes]) -> list[bytes]:
    return [h(b"".join(block_digests[j] for j in members)) for members in matrix.row_members]


def sign(
    message,
    sk: bytes,
    suite: CryptoSuite,
    matrix: CffMatrix,
    s: int = 0,
    split: tuple[SplitMode, int] = (SplitMode.NONE, 0),
) -> Scheme1Signature:
    """Sign a block message.

    With ``s > 0`` every block must fit in s bits and the signature is
    marked correctable (see :mod:`mtss.scheme2`).
    """
    m = _as_message(message)
    if m.redacted:
        raise ValueError("cannot sign a message with redacted blocks")
    if m.n > matrix.n:
        raise TooManyBlocks(f"{m.n} blocks but {matrix!r} has only {matrix.n} columns")
    if s and any(8 * len(b) > s for b in m):
        raise ValueError(f"a block exceeds the {s}-bit bound")
    header = SignatureHeader.for_matrix(2 if s else 1, suite, matrix, m.n, s, split)
    work = matrix.truncate(m.n)
    h = suite.hash
    digests = tuple(row_digests(h, work, [block_digest(h, b) for b in m]))
    h_star = h(m.join())
    body = b"".join(digests) + h_star
    return Scheme1Signature(header, digests, h_star, suite.cdss.sign(body, sk))


def check_shape(sig: Scheme1Signature, h: HashFn) -> None:
    hd = sig.header
    if len(sig.digests) != hd.t:
        raise MalformedSignature(f"expected {hd.t} row digests, found {len(sig.digests)}")
    if any(len(x) != h.digest_size for x in (*sig.digests, sig.h_star)):
        raise MalformedSignature("digest length does not match the hash function")


def locate(message, sig: Scheme1Signature, pk: bytes, suite: CryptoSuite | None = None,
           matrix: CffMatrix | None = None) -> tuple[VerifyOutcome, list[bytes] | None]:
    """Verification plus the block digests it computed (None if none were)."""
    m = _as_message(message)
    hd = sig.header
    h = hd.resolve_hash(suite)
    cdss = hd.resolve_cdss(suite)
    if m.n != hd.n:
        raise BlockCountMismatch(f"message has {m.n} blocks, signature expects {hd.n}")
    check_shape(sig, h)
    work = hd.matrix(matrix)

    if not cdss.verify(sig.signed_bytes(), sig.cdss_sig, pk):
        return VerifyOutcome(False, None), None
    if h(m.join()) == sig.h_star:
        return VerifyOutcome(True, frozenset()), None

    block_digests = [block_digest(h, b) for b in m]
    fresh = row_digests(h, work, block_digests)
    outcomes = tuple(
        Outcome.PASS if a == b else Outcome.FAIL for a, b in zip(sig.digests, fresh)
    )
    modified = frozenset(cff_decode(work, outcomes))
    accepted = len(modified) <= hd.d
    return VerifyOutcome(accepted, modified, outcomes=outcomes), block_digests


def verify(message, sig: Scheme1Signature, pk: bytes, suite: CryptoSuite | None = None,
           matrix: CffMatrix | None = None) -> VerifyOutcome:
    """Verify and locate modified blocks.

    Rejections after a valid classical signature still carry the index
    set: every block outside it is guaranteed unmodified.
    """
    return locate(message, sig, pk, suite, matrix)[0]
