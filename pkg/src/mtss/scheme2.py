"""Correction of located modifications by exhaustive search.

For each modified block k an isolating row is chosen (it contains k and
no other modified block).  Every candidate block of at most s bits is
substituted into that row until the row digest matches the signed one.
Two matching candidates mean a second preimage: verification still
accepts but no corrected message is returned.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .cff import CffMatrix, cff_isolating_row
from .crypto import CryptoSuite, HashFn, encode_bits, iter_bitstrings, iter_byte_strings
from .errors import MalformedSignature
from .message import BlockMessage
from .scheme1 import Scheme1Signature, locate
from .signature import BlockCorrection, VerifyOutcome


@dataclass(frozen=True)
class CorrectionConfig:
    """Search settings.

    granularity:
        ``"byte"`` enumerates byte strings of up to s // 8 bytes, which are
        the only values a signed block can take.  ``"bit"`` enumerates all
        2**(s+1) - 1 bit strings of length 0..s.
    fast:
        stop at the first match.  Only sound when ``hash_precheck`` is set,
        i.e. :func:`mtss.crypto.check_injective_upto` passed for s.
    partial:
        keep searching the remaining blocks after a collision so the
        per-block report is complete.
    """

    s: int
    hash_precheck: bool = False
    fast: bool = False
    granularity: str = "byte"
    partial: bool = False

    def __post_init__(self):
        if self.s < 1:
            raise ValueError("s must be >= 1")
        if self.granularity not in ("byte", "bit"):
            raise ValueError("granularity is 'byte' or 'bit'")
        if self.fast and not self.hash_precheck:
            raise ValueError("fast mode requires a passed injectivity precheck")


class _Candidates:
    """Lazily enumerated candidates with their digests, shared across blocks."""

    def __init__(self, h: HashFn, cfg: CorrectionConfig):
        self.h = h
        if cfg.granularity == "byte":
            self._source: Iterator[tuple[bytes | None, bytes]] = (
                (b, b + (8 * len(b)).to_bytes(4, "big")) for b in iter_byte_strings(cfg.s // 8)
            )
        else:
            self._source = (
                (packed if nbits % 8 == 0 else None, encode_bits(packed, nbits))
                for packed, nbits in iter_bitstrings(cfg.s)
            )
        self._memo: list[tuple[bytes | None, bytes, bytes]] = []

    def __iter__(self):
        i = 0
        while True:
            if i < len(self._memo):
                yield self._memo[i]
            else:
                try:
                    value, encoded = next(self._source)
                except StopIteration:
                    return
                entry = (value, encoded, self.h(encoded))
                self._memo.append(entry)
                yield entry
            i += 1


def hash_budget(n: int, t: int, d: int, s: int) -> int:
    """Worst-case hash invocations: n + t to locate, then d(2**(s+1) - 1) + n
    to correct (block digests are cached, not recomputed per row)."""
    locate_cost = n + t
    if d <= 0:
        return locate_cost
    return locate_cost + d * ((1 << (s + 1)) - 1) + n


def _search(cands: _Candidates, h: HashFn, prefix: bytes, suffix: bytes, target: bytes,
            cfg: CorrectionConfig) -> list[tuple[bytes | None, bytes]]:
    matches = []
    for value, encoded, digest in cands:
        if h(prefix + digest + suffix) == target:
            matches.append((value, encoded))
            if cfg.fast or len(matches) == 2:
                break
    return matches


def verify_correct(
    message,
    sig: Scheme1Signature,
    pk: bytes,
    cfg: CorrectionConfig,
    suite: CryptoSuite | None = None,
    matrix: CffMatrix | None = None,
) -> VerifyOutcome:
    """Verify, locate and correct up to d modified blocks."""
    hd = sig.header
    if hd.s and cfg.s < hd.s:
        raise MalformedSignature(f"signature allows {hd.s}-bit blocks, search covers only {cfg.s}")
    res, block_digests = locate(message, sig, pk, suite, matrix)
    m = message if isinstance(message, BlockMessage) else BlockMessage(message)
    if not res.accepted:
        return res
    if not res.modified:
        return VerifyOutcome(True, frozenset(), corrected=m)

    h = hd.resolve_hash(suite)
    work = hd.matrix(matrix)
    cands = _Candidates(h, cfg)
    report: list[BlockCorrection] = []
    fixes: dict[int, bytes] = {}
    failed = False
    for k in sorted(res.modified):
        row = cff_isolating_row(work, res.modified, k)
        members = work.row_members[row]
        pos = members.index(k)
        prefix = b"".join(block_digests[j] for j in members[:pos])
        suffix = b"".join(block_digests[j] for j in members[pos + 1:])
        matches = _search(cands, h, prefix, suffix, sig.digests[row], cfg)
        if len(matches) == 1 and matches[0][0] is not None:
            fixes[k] = matches[0][0]
            report.append(BlockCorrection(k, "corrected", matches[0][0]))
            continue
        failed = True
        if len(matches) > 1:
            report.append(BlockCorrection(k, "collision", candidates=tuple(e for _, e in matches)))
        else:
            report.append(BlockCorrection(k, "uncorrectable"))
        if not cfg.partial:
            break

    if failed:
        return VerifyOutcome(True, res.modified, None, True, res.outcomes, tuple(report))
    return VerifyOutcome(True, res.modified, m.replace(fixes), False, res.outcomes, tuple(report))
