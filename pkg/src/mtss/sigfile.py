"""Binary file formats.

Signature file (all integers unsigned big-endian)::

    "MTSS"  version:u8=1  scheme:u8 (1, 2 or 3)
    hash id:   u32 length + ASCII
    cdss id:   u32 length + ASCII
    d:u32  t:u32  n:u32  s:u32          (s = 0 when block size is unbounded)
    split mode:u8 (0 none, 1 fixed bytes, 2 delimiter)  split value:u32
    construction:u8 (0 identity, 1 polynomial, 2 literal)
        identity/polynomial: q:u32 k:u32
        literal:             u32 length + SHA-256 of the matrix text
    body, schemes 1/2:  t+1 digests of l/8 bytes (T[1..t] then h*)
                        u32 length + classical signature
    body, scheme 3:     r (16 bytes)
                        presence bitmap over t+1 entries (MSB first)
                        u32 length + signature, for each present entry

Redacted message container::

    "MTSR"  version:u8=1  n:u32  presence bitmap over n blocks
    u32 length + bytes, for each present block

Framing (length prefixes, bitmap) is excluded from the payload sizes
reported by :func:`payload_bits`.
"""
from __future__ import annotations

import struct

from .cff import Construction
from .crypto import get_hash
from .errors import ParseError, UnsupportedParameter
from .message import BlockMessage
from .scheme1 import Scheme1Signature
from .scheme3 import R_BITS, Scheme3Signature
from .signature import SignatureHeader, SplitMode

MAGIC = b"MTSS"
REDACTED_MAGIC = b"MTSR"
VERSION = 1


def _bitmap(flags: list[bool]) -> bytes:
    out = bytearray((len(flags) + 7) // 8)
    for i, f in enumerate(flags):
        if f:
            out[i // 8] |= 0x80 >> (i % 8)
    return bytes(out)


def _unbitmap(data: bytes, count: int) -> list[bool]:
    return [bool(data[i // 8] & (0x80 >> (i % 8))) for i in range(count)]


def _lp(data: bytes) -> bytes:
    return struct.pack(">I", len(data)) + data


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, size: int) -> bytes:
        if size < 0 or self.pos + size > len(self.data):
            raise ParseError(f"truncated input at offset {self.pos}")
        out = self.data[self.pos : self.pos + size]
        self.pos += size
        return out

    def u8(self) -> int:
        return self.take(1)[0]

    def u32(self) -> int:
        return struct.unpack(">I", self.take(4))[0]

    def lp(self) -> bytes:
        return self.take(self.u32())

    def ascii(self) -> str:
        try:
            return self.lp().decode("ascii")
        except UnicodeDecodeError as exc:
            raise ParseError("identifier is not ASCII") from exc

    def end(self) -> None:
        if self.pos != len(self.data):
            raise ParseError(f"{len(self.data) - self.pos} trailing bytes")


def _dump_header(hd: SignatureHeader) -> bytes:
    out = [MAGIC, bytes([VERSION, hd.scheme])]
    out += [_lp(hd.hash_id.encode("ascii")), _lp(hd.cdss_id.encode("ascii"))]
    out.append(struct.pack(">IIII", hd.d, hd.t, hd.n, hd.s))
    out.append(struct.pack(">BI", hd.split_mode, hd.split_value))
    out.append(bytes([hd.construction]))
    if hd.construction is Construction.LITERAL:
        out.append(_lp(hd.literal_digest))
    else:
        out.append(struct.pack(">II", hd.q, hd.k))
    return b"".join(out)


def _load_header(rd: _Reader) -> SignatureHeader:
    if rd.take(4) != MAGIC:
        raise ParseError("not an MTSS signature file")
    version, scheme = rd.u8(), rd.u8()
    if version != VERSION:
        raise ParseError(f"unsupported version {version}")
    if scheme not in (1, 2, 3):
        raise ParseError(f"unknown scheme id {scheme}")
    hash_id, cdss_id = rd.ascii(), rd.ascii()
    d, t, n, s = (rd.u32() for _ in range(4))
    try:
        split_mode = SplitMode(rd.u8())
    except ValueError as exc:
        raise ParseError("unknown split mode") from exc
    split_value = rd.u32()
    try:
        construction = Construction(rd.u8())
    except ValueError as exc:
        raise ParseError("unknown construction") from exc
    q = k = 0
    digest = b""
    if construction is Construction.LITERAL:
        digest = rd.lp()
    else:
        q, k = rd.u32(), rd.u32()
    return SignatureHeader(scheme, hash_id, cdss_id, d, t, n, s, construction, q, k,
                           digest, split_mode, split_value)


def dumps(sig: Scheme1Signature | Scheme3Signature) -> bytes:
    head = _dump_header(sig.header)
    if isinstance(sig, Scheme1Signature):
        return head + b"".join(sig.digests) + sig.h_star + _lp(sig.cdss_sig)
    present = [e is not None for e in sig.entries]
    return head + sig.r + _bitmap(present) + b"".join(_lp(e) for e in sig.entries if e is not None)


def loads(data: bytes) -> Scheme1Signature | Scheme3Signature:
    rd = _Reader(data)
    hd = _load_header(rd)
    if hd.scheme in (1, 2):
        try:
            size = get_hash(hd.hash_id).digest_size
        except UnsupportedParameter as exc:
            raise ParseError(str(exc)) from exc
        digests = tuple(rd.take(size) for _ in range(hd.t))
        h_star = rd.take(size)
        sig = Scheme1Signature(hd, digests, h_star, rd.lp())
    else:
        r = rd.take(R_BITS // 8)
        present = _unbitmap(rd.take((hd.t + 8) // 8), hd.t + 1)
        entries = tuple(rd.lp() if p else None for p in present)
        sig = Scheme3Signature(hd, r, entries)
    rd.end()
    return sig


def header_size(sig: Scheme1Signature | Scheme3Signature) -> int:
    return len(_dump_header(sig.header))


def payload_bits(sig: Scheme1Signature | Scheme3Signature) -> int:
    """Signature size without header and framing: digests plus classical
    signature, or surviving signatures plus r."""
    if isinstance(sig, Scheme1Signature):
        return 8 * (sum(map(len, sig.digests)) + len(sig.h_star) + len(sig.cdss_sig))
    return 8 * (len(sig.r) + sum(len(e) for e in sig.entries if e is not None))


def dumps_message(m: BlockMessage) -> bytes:
    present = [b is not None for b in m]
    body = b"".join(_lp(b) for b in m if b is not None)
    return REDACTED_MAGIC + bytes([VERSION]) + struct.pack(">I", m.n) + _bitmap(present) + body


def loads_message(data: bytes) -> BlockMessage:
    rd = _Reader(data)
    if rd.take(4) != REDACTED_MAGIC:
        raise ParseError("not a redacted message container")
    if rd.u8() != VERSION:
        raise ParseError("unsupported container version")
    n = rd.u32()
    if n < 1:
        raise ParseError("container holds no blocks")
    present = _unbitmap(rd.take((n + 7) // 8), n)
    blocks = [rd.lp() if p else None for p in present]
    rd.end()
    return BlockMessage(blocks)
