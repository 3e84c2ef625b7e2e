"""Types shared by the three signature schemes."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .cff import CffMatrix, Construction, Outcome, cff_from_tag, literal_digest
from .crypto import CryptoSuite, HashFn, get_hash, get_provider
from .errors import MalformedSignature
from .message import BlockMessage


class SplitMode(enum.IntEnum):
    NONE = 0
    FIXED = 1
    DELIMITER = 2


@dataclass(frozen=True)
class SignatureHeader:
    """Everything a verifier needs besides the message, body and public key.

    ``s`` is the block-size bound in bits (0 when unbounded).  The split
    fields record how the signer cut the byte stream into blocks.
    """

    scheme: int
    hash_id: str
    cdss_id: str
    d: int
    t: int
    n: int
    s: int
    construction: Construction
    q: int = 0
    k: int = 0
    literal_digest: bytes = b""
    split_mode: SplitMode = SplitMode.NONE
    split_value: int = 0

    @classmethod
    def for_matrix(cls, scheme: int, suite: CryptoSuite, matrix: CffMatrix, n: int, s: int = 0,
                   split: tuple[SplitMode, int] = (SplitMode.NONE, 0)) -> "SignatureHeader":
        digest = literal_digest(matrix) if matrix.construction is Construction.LITERAL else b""
        t = n if matrix.construction is Construction.IDENTITY else matrix.t
        return cls(scheme, suite.hash.id, suite.cdss.id, matrix.d, t, n, s,
                   matrix.construction, matrix.q, matrix.k, digest, SplitMode(split[0]), split[1])

    def matrix(self, supplied: CffMatrix | None = None) -> CffMatrix:
        """The signer's matrix truncated to n columns.

        Literal matrices cannot be rebuilt and must be supplied; a supplied
        matrix is checked against the recorded construction.
        """
        if supplied is None:
            if self.construction is Construction.LITERAL:
                raise MalformedSignature("signature uses a literal matrix; supply it")
            m = cff_from_tag(self.construction, self.q, self.k, self.n, self.d)
        else:
            if supplied.construction is not self.construction or supplied.d != self.d:
                raise MalformedSignature(f"{supplied!r} does not match the signature")
            if self.construction is Construction.LITERAL:
                if literal_digest(supplied) != self.literal_digest:
                    raise MalformedSignature("literal matrix digest mismatch")
            elif (supplied.q, supplied.k) != (self.q, self.k):
                raise MalformedSignature(f"{supplied!r} does not match the signature")
            if supplied.n < self.n:
                raise MalformedSignature("matrix has fewer columns than the message")
            m = supplied.truncate(self.n)
        if m.t != self.t:
            raise MalformedSignature(f"header t={self.t} but matrix has {m.t} rows")
        return m

    def resolve_hash(self, suite: CryptoSuite | None) -> HashFn:
        if suite is None:
            return get_hash(self.hash_id)
        if suite.hash.id != self.hash_id:
            raise MalformedSignature(f"signature uses {self.hash_id}, suite has {suite.hash.id}")
        return suite.hash

    def resolve_cdss(self, suite: CryptoSuite | None):
        if suite is None:
            return get_provider(self.cdss_id)
        if suite.cdss.id != self.cdss_id:
            raise MalformedSignature(f"signature uses {self.cdss_id}, suite has {suite.cdss.id}")
        return suite.cdss


@dataclass(frozen=True)
class BlockCorrection:
    """Per-block result of the correction search."""

    index: int
    status: str  # "corrected" | "collision" | "uncorrectable"
    value: bytes | None = None
    candidates: tuple[bytes, ...] = ()


@dataclass(frozen=True)
class VerifyOutcome:
    """Result of verification.

    ``modified`` is None when the classical signature itself failed (or,
    for redactable signatures, on any rejection).  ``corrected`` is set
    only by the correcting verifier; ``correction_failed`` marks the
    second-preimage case where verification accepts but no correction is
    returned.
    """

    accepted: bool
    modified: frozenset[int] | None
    corrected: BlockMessage | None = None
    correction_failed: bool = False
    outcomes: tuple[Outcome, ...] | None = field(default=None, repr=False)
    corrections: tuple[BlockCorrection, ...] = field(default=(), repr=False)


def id_bytes(i: int, total: int) -> bytes:
    """Position tag binding entry i (1-based) of a tuple of ``total`` entries."""
    return i.to_bytes(4, "big") + total.to_bytes(4, "big")
