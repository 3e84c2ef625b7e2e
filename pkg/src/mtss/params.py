"""Choosing a CFF for (n, d) and predicting signature sizes."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .cff import CffMatrix, Construction, cff_identity, cff_polynomial
from .errors import NoConstruction
from .ff import MAX_ORDER, field_of_order

IDENTITY_MAX_BLOCKS = 2**24
NOT_IMPLEMENTED = (
    "t = O(d^2 log n) family (random-code based): not implemented",
    "t = d*sqrt(n) family: not implemented",
)


def size_scheme12(digest_bits: int, t: int, cdss_bits: int) -> int:
    """Bits in a locating/correcting signature: t+1 digests and one signature."""
    return digest_bits * (t + 1) + cdss_bits


def size_scheme3(cdss_bits: int, t: int, r_bits: int) -> int:
    """Bits in a redactable signature: t+1 signatures and the random string."""
    return cdss_bits * (t + 1) + r_bits


@lru_cache(maxsize=None)
def prime_powers(limit: int = MAX_ORDER) -> tuple[int, ...]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    out = []
    for p in range(2, limit + 1):
        if sieve[p]:
            pe = p
            while pe <= limit:
                out.append(pe)
                pe *= p
    return tuple(sorted(out))


@dataclass(frozen=True)
class PlanRequest:
    d: int
    n: int | None = None
    size_bits: int | None = None
    block_bits: int | None = None
    digest_bits: int = 256
    cdss_bits: int = 2048
    r_bits: int = 128
    scheme: int = 1

    @property
    def blocks(self) -> int:
        if self.n is not None:
            return self.n
        if self.size_bits is None or not self.block_bits:
            raise ValueError("give either n or both size_bits and block_bits")
        return -(-self.size_bits // self.block_bits)


@dataclass(frozen=True)
class Plan:
    construction: Construction
    t: int
    d: int
    n: int
    columns: int
    size_bits: int
    q: int = 0
    k: int = 0
    notes: tuple[str, ...] = field(default=NOT_IMPLEMENTED)

    def matrix(self) -> CffMatrix:
        if self.construction is Construction.IDENTITY:
            return cff_identity(self.n, self.d)
        return cff_polynomial(field_of_order(self.q), self.k)

    def as_dict(self) -> dict:
        return {
            "construction": self.construction.name.lower(),
            "q": self.q,
            "k": self.k,
            "t": self.t,
            "d": self.d,
            "n": self.n,
            "columns": self.columns,
            "size_bits": self.size_bits,
            "size_bytes": self.size_bits // 8,
        }

    def render(self) -> str:
        rows = [(k, str(v)) for k, v in self.as_dict().items()]
        width = max(len(k) for k, _ in rows)
        lines = [f"{k.ljust(width)}  {v}" for k, v in rows]
        return "\n".join(lines + [f"note: {n}" for n in self.notes])


def _polynomial_candidate(n: int, d: int) -> tuple[int, int] | None:
    """Smallest q (hence smallest t = q**2) with some k <= (q-1)/d reaching
    q**(k+1) >= n; for that q the smallest such k (least padding)."""
    for q in prime_powers():
        kmax = (q - 1) // d
        if kmax < 1:
            continue
        k = 1
        while q ** (k + 1) < n and k < kmax:
            k += 1
        if q ** (k + 1) >= n:
            return q, k
    return None


def plan(req: PlanRequest) -> Plan:
    if req.d < 1:
        raise ValueError("d must be >= 1")
    n = req.blocks
    if n < 1:
        raise ValueError("need at least one block")
    poly = _polynomial_candidate(n, req.d)
    if poly is not None and poly[0] ** 2 < n:
        q, k = poly
        construction, t, d, columns = Construction.POLYNOMIAL, q * q, (q - 1) // k, q ** (k + 1)
    elif n <= IDENTITY_MAX_BLOCKS:
        q = k = 0
        construction, t, d, columns = Construction.IDENTITY, n, max(n - 1, req.d), n
    else:
        raise NoConstruction(f"no supported construction for n={n}, d={req.d}")
    if req.scheme == 3:
        size = size_scheme3(req.cdss_bits, t, req.r_bits)
    else:
        size = size_scheme12(req.digest_bits, t, req.cdss_bits)
    return Plan(construction, t, d, n, columns, size, q, k)
