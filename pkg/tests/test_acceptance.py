"""Acceptance criteria, one marked group per criterion.

A PASS/FAIL line per criterion is printed in the terminal summary (see
conftest.py).
"""
import itertools
import random
import time
from dataclasses import replace

import mpmath
import numpy as np
import pytest

from mtss import scheme1, scheme3, sigfile
from mtss.cff import Outcome, cff_decode, cff_identity, cff_literal, cff_polynomial, cff_spot_check, cff_validate
from mtss.crypto import CountingHash, CryptoSuite, HashFn, check_injective_upto, collision_probability, get_hash, get_provider
from mtss.ff import field_of_order
from mtss.message import BlockMessage, diff
from mtss.params import size_scheme3, size_scheme12
from mtss.scheme2 import CorrectionConfig, hash_budget, verify_correct

from conftest import GOLDEN_ROWS

SHA256 = get_hash("sha256")
ED = get_provider("ed25519")
HMAC = get_provider("test-hmac-sha256")


def criterion(num, title):
    return pytest.mark.criterion(num, title)


def change(rng, m, indices, size):
    out = {}
    for j in indices:
        new = m[j]
        while new == m[j]:
            new = rng.randbytes(size)
        out[j] = new
    return m.replace(out)


def flip_bit(data: bytes, rng) -> bytes:
    i = rng.randrange(8 * len(data))
    b = bytearray(data)
    b[i // 8] ^= 0x80 >> (i % 8)
    return bytes(b)


# -- 1 ------------------------------------------------------------------


@criterion(1, "golden 2-CFF(9,12): validates at d=2, decodes {3,12}, < 1 s")
def test_c1_golden_vector():
    start = time.perf_counter()
    m = cff_literal(GOLDEN_ROWS, d=2)
    assert cff_validate(m, 2)
    outcomes = [Outcome.FAIL if i in (3, 5, 7, 8, 9) else Outcome.PASS for i in range(1, 10)]
    assert {j + 1 for j in cff_decode(m, outcomes)} == {3, 12}
    assert time.perf_counter() - start < 1.0


# -- 2 ------------------------------------------------------------------


@criterion(2, "polynomial CFFs: exhaustive (9,9),(25,125); GF(25),k=6 t=625 d=4, 1e6 spot check")
@pytest.mark.parametrize("q,k,t,n", [(3, 1, 9, 9), (5, 2, 25, 125)])
def test_c2_exhaustive(q, k, t, n):
    m = cff_polynomial(field_of_order(q), k)
    assert (m.t, m.n, m.d) == (t, n, 2)
    assert cff_validate(m)


@criterion(2, "polynomial CFFs: exhaustive (9,9),(25,125); GF(25),k=6 t=625 d=4, 1e6 spot check")
@pytest.mark.slow
def test_c2_gf25_spot_check():
    m = cff_polynomial(field_of_order(25), 6)
    assert (m.t, m.d, m.n) == (625, 4, 25**7)
    assert cff_spot_check(m, 10**6, np.random.default_rng(2024)) == 0


# -- 3 ------------------------------------------------------------------

LOCATION_MATRICES = {
    "identity12": lambda: cff_identity(12, 2),
    "gf3k1": lambda: cff_polynomial(field_of_order(3), 1),
    "gf5k2": lambda: cff_polynomial(field_of_order(5), 2),
}


@criterion(3, "location exact for |D|<=d (1000 trials/matrix); beyond-d sound (500 trials)")
@pytest.mark.parametrize("name", sorted(LOCATION_MATRICES))
def test_c3_location_exact(name):
    matrix = LOCATION_MATRICES[name]()
    suite = CryptoSuite(SHA256, ED)
    kp = ED.keygen(seed=3)
    rng = random.Random(name)
    for _ in range(1000):
        m = BlockMessage(rng.randbytes(16) for _ in range(matrix.n))
        sig = scheme1.sign(m, kp.sk, suite, matrix)
        D = set(rng.sample(range(matrix.n), rng.randint(0, 2)))
        m2 = change(rng, m, D, 16)
        res = scheme1.verify(m2, sig, kp.pk, suite)
        assert res.accepted and res.modified == D


@criterion(3, "location exact for |D|<=d (1000 trials/matrix); beyond-d sound (500 trials)")
@pytest.mark.parametrize("name", ["gf3k1", "gf5k2"])
def test_c3_beyond_d(name):
    matrix = LOCATION_MATRICES[name]()
    suite = CryptoSuite(SHA256, ED)
    kp = ED.keygen(seed=4)
    rng = random.Random(name + "+")
    rejected = 0
    for _ in range(500):
        m = BlockMessage(rng.randbytes(16) for _ in range(matrix.n))
        sig = scheme1.sign(m, kp.sk, suite, matrix)
        D = set(rng.sample(range(matrix.n), matrix.d + 1))
        m2 = change(rng, m, D, 16)
        res = scheme1.verify(m2, sig, kp.pk, suite)
        assert not res.accepted and res.modified is not None
        assert D <= res.modified
        assert all(m2[j] == m[j] for j in range(matrix.n) if j not in res.modified)
        rejected += 1
    assert rejected == 500


# -- 4 ------------------------------------------------------------------


@criterion(4, "correction: injective s=8,16; 500 trials recover m; hashes <= budget; s=16 < 60 s; lambda")
@pytest.mark.slow
@pytest.mark.parametrize("s", [8, 16])
def test_c4_correction(s):
    assert check_injective_upto(SHA256, s)
    matrix = cff_polynomial(field_of_order(3), 1)
    counter = CountingHash(SHA256)
    suite = CryptoSuite(counter, HMAC)
    kp = HMAC.keygen(seed=8)
    rng = random.Random(s)
    budget = hash_budget(matrix.n, matrix.t, matrix.d, s)
    worst = 0.0
    for _ in range(500):
        m = BlockMessage(rng.randbytes(rng.randint(0, s // 8)) for _ in range(matrix.n))
        sig = scheme1.sign(m, kp.sk, suite, matrix, s=s)
        D = rng.sample(range(matrix.n), rng.randint(1, matrix.d))
        changes = {}
        for j in D:
            new = m[j]
            while new == m[j]:
                new = rng.randbytes(rng.randint(0, s // 8))
            changes[j] = new
        m2 = m.replace(changes)
        counter.calls = 0
        start = time.perf_counter()
        res = verify_correct(m2, sig, kp.pk, CorrectionConfig(s), suite)
        worst = max(worst, time.perf_counter() - start)
        assert res.accepted and res.modified == set(D)
        assert res.corrected == m and res.corrected.join() == m.join()
        assert counter.calls <= budget
    assert worst < 60


class PlantedHash(HashFn):
    def __init__(self, a: bytes, b: bytes):
        enc = lambda x: x + (8 * len(x)).to_bytes(4, "big")
        alias = {enc(b): SHA256(enc(a))}
        super().__init__("sha256", 256, lambda data: alias.get(data) or SHA256(data))


@criterion(4, "correction: injective s=8,16; 500 trials recover m; hashes <= budget; s=16 < 60 s; lambda")
def test_c4_lambda_outcome():
    h = PlantedHash(b"\x42", b"\x99")
    suite = CryptoSuite(h, HMAC)
    assert not check_injective_upto(h, 8)
    kp = HMAC.keygen(seed=8)
    matrix = cff_polynomial(field_of_order(3), 1)
    m = BlockMessage([b"\x42"] + [bytes([i]) for i in range(8)])
    sig = scheme1.sign(m, kp.sk, suite, matrix, s=8)
    res = verify_correct(m.replace({0: b"\x00\x00"}), sig, kp.pk, CorrectionConfig(8), suite)
    assert res.accepted and res.correction_failed and res.corrected is None


# -- 5 ------------------------------------------------------------------


@criterion(5, "sha256 injective on all bit strings up to 20 bits")
@pytest.mark.slow
def test_c5_injective_s20():
    assert check_injective_upto(SHA256, 20)


# -- 6 ------------------------------------------------------------------


@criterion(6, "size formulas exact; t=625 serialized bodies 20288 / 160272 bytes")
@pytest.mark.slow
def test_c6_sizes():
    assert size_scheme12(256, 625, 2048) == 162304
    assert size_scheme3(2048, 625, 128) == 1282176
    rsa = get_provider("rsa-pss-sha256")
    kp = rsa.keygen(112)
    suite = CryptoSuite(SHA256, rsa)
    matrix = cff_polynomial(field_of_order(25), 6)
    rng = random.Random(6)
    m = BlockMessage(rng.randbytes(32) for _ in range(1000))

    s1 = scheme1.sign(m, kp.sk, suite, matrix)
    assert s1.header.t == 625
    raw = sigfile.dumps(s1)
    body = len(raw) - sigfile.header_size(s1) - 4  # one length prefix
    assert body == sigfile.payload_bits(s1) // 8 == 162304 // 8 == 20288
    assert scheme1.verify(m, sigfile.loads(raw), kp.pk).accepted

    s3 = scheme3.sign(m, kp.sk, suite, matrix)
    raw = sigfile.dumps(s3)
    framing = 4 * 626 + (626 + 7) // 8
    body = len(raw) - sigfile.header_size(s3) - framing
    assert body == sigfile.payload_bits(s3) // 8 == 1282176 // 8 == 160272
    assert scheme3.verify(m, sigfile.loads(raw), kp.pk).accepted


# -- 7 ------------------------------------------------------------------


@criterion(7, "redaction: all 78 subsets |R|<=2 of the golden matrix; 100 privacy triples")
def test_c7_redaction_exhaustive():
    golden = cff_literal(GOLDEN_ROWS, 2)
    suite = CryptoSuite.named("sha256", "test-hmac-sha256", seed=77)
    kp = HMAC.keygen(seed=77)
    rng = random.Random(77)
    m = BlockMessage(rng.randbytes(8) for _ in range(12))
    sig = scheme3.sign(m, kp.sk, suite, golden)
    subsets = [set(c) for r in (1, 2) for c in itertools.combinations(range(12), r)]
    assert len(subsets) == 78
    for R in subsets:
        m2, sig2 = scheme3.redact(m, sig, R, golden)
        res = scheme3.verify(m2, sig2, kp.pk, suite, golden)
        assert res.accepted and res.modified == R


@criterion(7, "redaction: all 78 subsets |R|<=2 of the golden matrix; 100 privacy triples")
def test_c7_privacy():
    golden = cff_literal(GOLDEN_ROWS, 2)
    kp = HMAC.keygen(seed=78)
    rng = random.Random(78)
    for trial in range(100):
        R = set(rng.sample(range(12), rng.randint(1, 2)))
        m1 = BlockMessage(rng.randbytes(rng.randint(0, 12)) for _ in range(12))
        m2 = change(rng, m1, R, 9)
        assert diff(m1, m2) == R
        outs = []
        for m in (m1, m2):
            suite = CryptoSuite.named("sha256", "test-hmac-sha256", seed=trial)
            sig = scheme3.sign(m, kp.sk, suite, golden)
            mr, sr = scheme3.redact(m, sig, R, golden)
            outs.append((sigfile.dumps_message(mr), sigfile.dumps(sr)))
        assert outs[0] == outs[1]


# -- 8 ------------------------------------------------------------------

TAMPER_TITLE = "tamper: bit flips in sigma', T, r and entry swap/reorder rejected (500 each)"


@pytest.fixture(scope="module")
def tamper_setup():
    golden = cff_literal(GOLDEN_ROWS, 2)
    suite = CryptoSuite(SHA256, ED, random.Random(88))
    kp = ED.keygen(seed=88)
    return golden, suite, kp


@criterion(8, TAMPER_TITLE)
def test_c8_flip_sigma(tamper_setup):
    golden, suite, kp = tamper_setup
    rng = random.Random(1)
    for _ in range(500):
        m = BlockMessage(rng.randbytes(8) for _ in range(12))
        sig = scheme1.sign(m, kp.sk, suite, golden)
        bad = replace(sig, cdss_sig=flip_bit(sig.cdss_sig, rng))
        res = scheme1.verify(m, bad, kp.pk, suite, golden)
        assert not res.accepted and res.modified is None


@criterion(8, TAMPER_TITLE)
def test_c8_flip_T(tamper_setup):
    golden, suite, kp = tamper_setup
    rng = random.Random(2)
    for _ in range(500):
        m = BlockMessage(rng.randbytes(8) for _ in range(12))
        sig = scheme1.sign(m, kp.sk, suite, golden)
        i = rng.randrange(10)
        if i == 9:
            bad = replace(sig, h_star=flip_bit(sig.h_star, rng))
        else:
            digests = list(sig.digests)
            digests[i] = flip_bit(digests[i], rng)
            bad = replace(sig, digests=tuple(digests))
        assert not scheme1.verify(m, bad, kp.pk, suite, golden).accepted


@criterion(8, TAMPER_TITLE)
def test_c8_flip_r(tamper_setup):
    golden, suite, kp = tamper_setup
    rng = random.Random(3)
    for _ in range(500):
        m = BlockMessage(rng.randbytes(8) for _ in range(12))
        sig = scheme3.sign(m, kp.sk, suite, golden)
        res = scheme3.verify(m, replace(sig, r=flip_bit(sig.r, rng)), kp.pk, suite, golden)
        assert not res.accepted and res.modified is None


@criterion(8, TAMPER_TITLE)
def test_c8_entry_swap(tamper_setup):
    golden, suite, kp = tamper_setup
    rng = random.Random(4)
    for _ in range(500):
        m1 = BlockMessage(rng.randbytes(8) for _ in range(12))
        m2 = BlockMessage(rng.randbytes(8) for _ in range(12))
        s1 = scheme3.sign(m1, kp.sk, suite, golden)
        s2 = scheme3.sign(m2, kp.sk, suite, golden)
        # whole tuple moved onto the other signature's r
        for m in (m1, m2):
            assert not scheme3.verify(m, replace(s1, entries=s2.entries), kp.pk, suite, golden).accepted
        # partial splice: every foreign entry fails, foreign blocks never certified
        moved = set(rng.sample(range(9), rng.randint(1, 9)))
        entries = tuple(s2.entries[i] if i in moved else e for i, e in enumerate(s1.entries))
        mixed = m1.replace({j: m2[j] for j in range(12) if rng.random() < 0.5})
        res = scheme3.verify(mixed, replace(s1, entries=entries), kp.pk, suite, golden)
        assert all(res.outcomes[i] is Outcome.FAIL for i in moved)
        suspects = set(range(12)) if res.modified is None else res.modified
        certified = set(range(12)) - suspects
        assert all(mixed[j] == m1[j] for j in certified)


@criterion(8, TAMPER_TITLE)
def test_c8_reorder(tamper_setup):
    golden, suite, kp = tamper_setup
    rng = random.Random(5)
    for _ in range(500):
        m = BlockMessage(rng.randbytes(8) for _ in range(12))
        sig = scheme3.sign(m, kp.sk, suite, golden)
        perm = list(range(10))
        while any(i == p for i, p in enumerate(perm)):
            rng.shuffle(perm)
        bad = replace(sig, entries=tuple(sig.entries[p] for p in perm))
        res = scheme3.verify(m, bad, kp.pk, suite, golden)
        assert not res.accepted and res.modified is None


# -- 9 ------------------------------------------------------------------

PAIRS = [(127, 255), (20, 256), (0, 1), (1, 3), (8, 16), (8, 18), (16, 32), (10, 22), (30, 64), (40, 80),
         (60, 128), (64, 128), (63, 128), (100, 210), (5, 12), (12, 20), (32, 60), (3, 4), (2, 9), (50, 110)]


@criterion(9, "collision probability matches 1-exp(-2^(2s-l+1)) to 12 digits at 20 pairs")
def test_c9_collision_probability():
    assert len(set(PAIRS)) == 20
    assert any(2 * s - l + 1 == 0 for s, l in PAIRS)
    # enough digits that 1 - exp(-x) keeps 12 significant ones for x ~ 2**-215
    with mpmath.workdps(400):
        for s, l in PAIRS:
            ref = 1 - mpmath.exp(-mpmath.mpf(2) ** (2 * s - l + 1))
            got = collision_probability(s, l)
            assert abs(mpmath.mpf(got) - ref) <= abs(ref) * mpmath.mpf("5e-13"), (s, l)
    assert collision_probability(127, 255) == pytest.approx(float(1 - mpmath.exp(-1)), rel=1e-12)
