"""Hash functions, classical signature providers and randomness.

Two real signature algorithms are bound (Ed25519 and RSA-PSS) plus a
deterministic HMAC-based test double.  The test double is symmetric
(its "public" key equals its secret key) and must never be used outside
tests; it exists because the redaction privacy tests need byte-identical
signatures across runs.
"""
from __future__ import annotations

import hashlib
import hmac
import math
import random
import secrets
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np
from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives import hashes, serialization
from cryptography.hazmat.primitives.asymmetric import ed25519, padding, rsa

from .errors import BudgetExceeded, MalformedKey, MalformedSignature, UnsupportedParameter

MAX_INJECTIVITY_BITS = 24


# -- hashes -------------------------------------------------------------


class HashFn:
    """A named, fixed-length hash function over bytes."""

    def __init__(self, id: str, digest_bits: int, fn: Callable[[bytes], bytes]):
        self.id = id
        self.digest_bits = digest_bits
        self._fn = fn

    @property
    def digest_size(self) -> int:
        return self.digest_bits // 8

    def __call__(self, data: bytes) -> bytes:
        return self._fn(data)

    def __repr__(self) -> str:
        return f"HashFn({self.id!r}, {self.digest_bits})"


def _hashlib_fn(name: str) -> Callable[[bytes], bytes]:
    def fn(data: bytes) -> bytes:
        return hashlib.new(name, data).digest()

    return fn


HASHES = {
    "sha256": HashFn("sha256", 256, lambda b: hashlib.sha256(b).digest()),
    "sha384": HashFn("sha384", 384, _hashlib_fn("sha384")),
    "sha512": HashFn("sha512", 512, _hashlib_fn("sha512")),
    "sha3-256": HashFn("sha3-256", 256, _hashlib_fn("sha3_256")),
}


def get_hash(id: str) -> HashFn:
    try:
        return HASHES[id]
    except KeyError:
        raise UnsupportedParameter(f"unknown hash {id!r}") from None


class TruncatedHash(HashFn):
    """Keep only the first ``bits`` bits of another hash (tests, demos)."""

    def __init__(self, base: HashFn, bits: int):
        if bits % 8 or not 0 < bits <= base.digest_bits:
            raise ValueError("truncation must be a positive whole number of bytes")
        nbytes = bits // 8
        super().__init__(f"{base.id}/{bits}", bits, lambda b: base(b)[:nbytes])


class CountingHash(HashFn):
    """Wrap a hash and count invocations."""

    def __init__(self, base: HashFn):
        super().__init__(base.id, base.digest_bits, self._count)
        self.base = base
        self.calls = 0

    def _count(self, data: bytes) -> bytes:
        self.calls += 1
        return self.base(data)


def hash(h: HashFn, m: bytes) -> bytes:
    return h(m)


# -- bit strings --------------------------------------------------------


def encode_bits(packed: bytes, nbits: int) -> bytes:
    """Unambiguous hash input for a bit string.

    ``packed`` holds the bits MSB-first in ceil(nbits/8) bytes with zero
    padding; a 32-bit big-endian bit length is appended so that e.g. the
    1-bit string "0" and the 2-bit string "00" encode differently.
    """
    if len(packed) != (nbits + 7) // 8:
        raise ValueError("packed length does not match bit length")
    return packed + nbits.to_bytes(4, "big")


def block_digest(h: HashFn, block: bytes) -> bytes:
    """Digest of a whole-byte block, consistent with :func:`encode_bits`."""
    return h(block + (8 * len(block)).to_bytes(4, "big"))


def pack_bits(value: int, nbits: int) -> bytes:
    nbytes = (nbits + 7) // 8
    return (value << (8 * nbytes - nbits)).to_bytes(nbytes, "big")


def iter_bitstrings(s: int) -> Iterator[tuple[bytes, int]]:
    """All bit strings of length 0..s, by length then value, as (packed, nbits)."""
    for nbits in range(s + 1):
        for v in range(1 << nbits):
            yield pack_bits(v, nbits), nbits


def iter_byte_strings(max_bytes: int) -> Iterator[bytes]:
    """All byte strings of length 0..max_bytes, by length then value."""
    for length in range(max_bytes + 1):
        for v in range(256**length):
            yield v.to_bytes(length, "big")


def check_injective_upto(h: HashFn, s: int) -> bool:
    """True iff h (through :func:`encode_bits`) is injective on all bit
    strings of length 0..s; that is 2**(s+1) - 1 inputs."""
    if s > MAX_INJECTIVITY_BITS:
        raise BudgetExceeded(f"s={s} exceeds the {MAX_INJECTIVITY_BITS}-bit limit")
    if s < 0:
        raise ValueError("s must be >= 0")
    count = (1 << (s + 1)) - 1
    width = min(8, h.digest_size)
    keys = np.empty(count, dtype=np.uint64)
    for i, (packed, nbits) in enumerate(iter_bitstrings(s)):
        keys[i] = int.from_bytes(h(encode_bits(packed, nbits))[:width], "big")
    order = np.argsort(keys, kind="stable")
    ks = keys[order]
    dup = np.flatnonzero(ks[1:] == ks[:-1])
    if dup.size == 0:
        return True
    if width == h.digest_size:
        return False
    # prefix clash only: compare full digests within each clashing group
    suspects = np.unique(np.concatenate([order[dup], order[dup + 1]]))
    seen: dict[bytes, int] = {}
    for i in suspects.tolist():
        nbits = (i + 1).bit_length() - 1
        packed = pack_bits(i + 1 - (1 << nbits), nbits)
        digest = h(encode_bits(packed, nbits))
        if digest in seen:
            return False
        seen[digest] = i
    return True


def collision_probability(s: int, l: int) -> float:
    """Birthday estimate 1 - exp(-2**(2s - l + 1)) for 2**(s+1) inputs
    into an l-bit digest space."""
    exponent = 2 * s - l + 1
    if exponent > 1023:
        return 1.0
    return -math.expm1(-math.ldexp(1.0, exponent))


def random_string(bits: int, rng: random.Random | None = None) -> bytes:
    if bits % 8:
        raise ValueError("bits must be a multiple of 8")
    if rng is None:
        return secrets.token_bytes(bits // 8)
    return rng.randbytes(bits // 8)


# -- classical signatures -----------------------------------------------


@dataclass(frozen=True)
class KeyPair:
    sk: bytes = field(repr=False)
    pk: bytes


class CdssProvider:
    id: str = ""
    security_levels: tuple[int, ...] = ()

    def keygen(self, level: int = 128, seed: bytes | None = None) -> KeyPair:
        raise NotImplementedError

    def sign(self, m: bytes, sk: bytes) -> bytes:
        raise NotImplementedError

    def verify(self, m: bytes, sig: bytes, pk: bytes) -> bool:
        raise NotImplementedError

    def _check_level(self, level: int) -> None:
        if level not in self.security_levels:
            raise UnsupportedParameter(
                f"{self.id} supports security levels {self.security_levels}, not {level}"
            )

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.id}>"


def _seed_bytes(label: bytes, seed: bytes | int, size: int = 32) -> bytes:
    if isinstance(seed, int):
        seed = seed.to_bytes(16, "big", signed=True)
    return hashlib.sha256(label + seed).digest()[:size]


class Ed25519Provider(CdssProvider):
    id = "ed25519"
    security_levels = (128,)

    def keygen(self, level: int = 128, seed: bytes | int | None = None) -> KeyPair:
        self._check_level(level)
        if seed is None:
            key = ed25519.Ed25519PrivateKey.generate()
        else:
            key = ed25519.Ed25519PrivateKey.from_private_bytes(
                _seed_bytes(b"mtss-ed25519", seed)
            )
        sk = key.private_bytes(
            serialization.Encoding.Raw,
            serialization.PrivateFormat.Raw,
            serialization.NoEncryption(),
        )
        pk = key.public_key().public_bytes(
            serialization.Encoding.Raw, serialization.PublicFormat.Raw
        )
        return KeyPair(sk, pk)

    def sign(self, m: bytes, sk: bytes) -> bytes:
        try:
            key = ed25519.Ed25519PrivateKey.from_private_bytes(sk)
        except ValueError as exc:
            raise MalformedKey(str(exc)) from exc
        return key.sign(m)

    def verify(self, m: bytes, sig: bytes, pk: bytes) -> bool:
        try:
            key = ed25519.Ed25519PublicKey.from_public_bytes(pk)
        except ValueError as exc:
            raise MalformedKey(str(exc)) from exc
        try:
            key.verify(sig, m)
        except InvalidSignature:
            return False
        return True


class RsaPssProvider(CdssProvider):
    """RSA-PSS over SHA-256; level 112 uses a 2048-bit modulus, 128 uses 3072."""

    id = "rsa-pss-sha256"
    security_levels = (112, 128)
    _modulus = {112: 2048, 128: 3072}
    _padding = padding.PSS(mgf=padding.MGF1(hashes.SHA256()), salt_length=32)

    def keygen(self, level: int = 112, seed: bytes | int | None = None) -> KeyPair:
        self._check_level(level)
        if seed is not None:
            raise UnsupportedParameter("RSA key generation cannot be seeded")
        key = rsa.generate_private_key(65537, self._modulus[level])
        sk = key.private_bytes(
            serialization.Encoding.DER,
            serialization.PrivateFormat.PKCS8,
            serialization.NoEncryption(),
        )
        pk = key.public_key().public_bytes(
            serialization.Encoding.DER, serialization.PublicFormat.SubjectPublicKeyInfo
        )
        return KeyPair(sk, pk)

    def sign(self, m: bytes, sk: bytes) -> bytes:
        try:
            key = serialization.load_der_private_key(sk, None)
        except ValueError as exc:
            raise MalformedKey(str(exc)) from exc
        if not isinstance(key, rsa.RSAPrivateKey):
            raise MalformedKey("not an RSA private key")
        return key.sign(m, self._padding, hashes.SHA256())

    def verify(self, m: bytes, sig: bytes, pk: bytes) -> bool:
        try:
            key = serialization.load_der_public_key(pk)
        except ValueError as exc:
            raise MalformedKey(str(exc)) from exc
        if not isinstance(key, rsa.RSAPublicKey):
            raise MalformedKey("not an RSA public key")
        try:
            key.verify(sig, m, self._padding, hashes.SHA256())
        except InvalidSignature:
            return False
        return True


class TestHmacProvider(CdssProvider):
    """Deterministic keyed-tag stand-in for a signature scheme.  Tests only."""

    __test__ = False
    id = "test-hmac-sha256"
    security_levels = (128, 256)

    def keygen(self, level: int = 128, seed: bytes | int | None = None) -> KeyPair:
        self._check_level(level)
        key = secrets.token_bytes(32) if seed is None else _seed_bytes(b"mtss-test", seed)
        return KeyPair(key, key)

    def _key(self, k: bytes) -> bytes:
        if len(k) != 32:
            raise MalformedKey("test keys are 32 bytes")
        return k

    def sign(self, m: bytes, sk: bytes) -> bytes:
        return hmac.new(self._key(sk), m, hashlib.sha256).digest()

    def verify(self, m: bytes, sig: bytes, pk: bytes) -> bool:
        if len(sig) != 32:
            raise MalformedSignature("test signatures are 32 bytes")
        return hmac.compare_digest(self.sign(m, pk), sig)


PROVIDERS: dict[str, CdssProvider] = {
    p.id: p for p in (Ed25519Provider(), RsaPssProvider(), TestHmacProvider())
}


def get_provider(id: str) -> CdssProvider:
    try:
        return PROVIDERS[id]
    except KeyError:
        raise UnsupportedParameter(f"unknown signature algorithm {id!r}") from None


def keygen(provider: CdssProvider, level: int = 128, seed: bytes | int | None = None) -> KeyPair:
    return provider.keygen(level, seed)


def cdss_sign(provider: CdssProvider, m: bytes, sk: bytes) -> bytes:
    return provider.sign(m, sk)


def cdss_verify(provider: CdssProvider, m: bytes, sig: bytes, pk: bytes) -> bool:
    return provider.verify(m, sig, pk)


@dataclass
class CryptoSuite:
    """A hash function, a signature provider and a randomness source.

    Pass a seeded ``random.Random`` as ``rng`` only in tests.
    """

    hash: HashFn
    cdss: CdssProvider
    rng: random.Random | None = None

    @classmethod
    def named(cls, hash_id: str = "sha256", cdss_id: str = "ed25519", seed: int | None = None):
        rng = None if seed is None else random.Random(seed)
        return cls(get_hash(hash_id), get_provider(cdss_id), rng)

    def random_string(self, bits: int) -> bytes:
        return random_string(bits, self.rng)
