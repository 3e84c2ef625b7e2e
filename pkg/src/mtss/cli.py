"""Command line interface: ``mtss keygen|sign|verify|redact|plan|cff``.

Exit codes: 0 accept/success, 1 malformed input or usage error, 2 reject
(or refused redaction), 3 accepted but correction failed.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import scheme1, scheme2, scheme3, sigfile
from .cff import CffMatrix, cff_identity, cff_polynomial, cff_validate, dumps_literal, loads_literal
from .crypto import CryptoSuite, check_injective_upto, get_hash, get_provider
from .errors import MalformedKey, MtssError, TooManyRedactions
from .ff import field_of_order
from .message import BlockMessage, split_delimiter, split_fixed
from .params import PlanRequest, plan
from .signature import SignatureHeader, SplitMode, VerifyOutcome

EXIT_OK, EXIT_ERROR, EXIT_REJECT, EXIT_CORRECTION_FAILED = 0, 1, 2, 3


class UsageError(MtssError):
    pass


# -- key files ----------------------------------------------------------


def write_key(path: Path, kind: str, alg: str, key: bytes) -> None:
    path.write_text(f"MTSS {kind} KEY {alg}\n{key.hex()}\n")


def read_key(path: Path, kind: str) -> tuple[str, bytes]:
    lines = Path(path).read_text().split()
    if len(lines) != 5 or lines[:3] != ["MTSS", kind, "KEY"]:
        raise MalformedKey(f"{path} is not an MTSS {kind.lower()} key file")
    try:
        return lines[3], bytes.fromhex(lines[4])
    except ValueError as exc:
        raise MalformedKey(f"{path}: bad hex") from exc


# -- helpers ------------------------------------------------------------


def parse_block_spec(spec: str) -> tuple[SplitMode, int]:
    mode, _, value = spec.partition(":")
    try:
        v = int(value, 0)
    except ValueError:
        raise UsageError(f"bad block spec {spec!r}") from None
    if mode == "fixed" and v >= 1:
        return SplitMode.FIXED, v
    if mode == "delim" and 0 <= v <= 255:
        return SplitMode.DELIMITER, v
    raise UsageError(f"bad block spec {spec!r}; use fixed:<bytes> or delim:<byte>")


def split(data: bytes, mode: SplitMode, value: int) -> BlockMessage:
    if mode is SplitMode.FIXED:
        return split_fixed(data, value)
    if mode is SplitMode.DELIMITER:
        return split_delimiter(data, value)
    raise UsageError("signature does not record how to split the message")


def load_matrix_file(path: str | None) -> CffMatrix | None:
    return None if path is None else loads_literal(Path(path).read_text())


def load_message(path: str, hd: SignatureHeader) -> BlockMessage:
    data = Path(path).read_bytes()
    if hd.scheme == 3 and data.startswith(sigfile.REDACTED_MAGIC):
        return sigfile.loads_message(data)
    return split(data, hd.split_mode, hd.split_value)


def fmt_blocks(indices) -> str:
    return "[" + ", ".join(str(j + 1) for j in sorted(indices)) + "]"


def report(res: VerifyOutcome) -> str:
    if res.accepted and not res.modified:
        return "VALID, 0 modified"
    if res.accepted:
        return f"VALID, MODIFIED blocks: {fmt_blocks(res.modified)}"
    if res.modified is None:
        return "INVALID"
    return f"INVALID, more than d modified; suspect blocks: {fmt_blocks(res.modified)}"


# -- commands -----------------------------------------------------------


def cmd_keygen(args) -> int:
    provider = get_provider(args.algorithm)
    level = args.level or provider.security_levels[0]
    seed = None if args.seed is None else int(args.seed)
    kp = provider.keygen(level, seed)
    write_key(Path(args.out + ".key"), "SECRET", provider.id, kp.sk)
    write_key(Path(args.out + ".pub"), "PUBLIC", provider.id, kp.pk)
    print(f"wrote {args.out}.key and {args.out}.pub ({provider.id}, level {level})")
    return EXIT_OK


def cmd_sign(args) -> int:
    alg, sk = read_key(Path(args.key), "SECRET")
    suite = CryptoSuite(get_hash(args.hash), get_provider(alg))
    if args.seed is not None:
        import random

        suite.rng = random.Random(args.seed)
    mode, value = parse_block_spec(args.block)
    message = split(Path(args.message).read_bytes(), mode, value)
    s = args.max_bits or 0
    if s:
        if args.scheme != 1:
            raise UsageError("--max-bits applies to scheme 1 only")
        if mode is not SplitMode.FIXED or s % 8 or 8 * value > s:
            raise UsageError("correctable signatures need fixed:<bytes> blocks of at most s bits")

    matrix = load_matrix_file(args.cff_file)
    if matrix is None:
        p = plan(PlanRequest(args.d, n=message.n, scheme=args.scheme))
        matrix = p.matrix()
        print(f"plan: {p.construction.name.lower()} q={p.q} k={p.k} t={p.t} d={p.d} "
              f"size={p.size_bits} bits (n={message.n})")
    else:
        if matrix.d < args.d:
            raise UsageError(f"matrix file has d={matrix.d} < requested {args.d}")
        print(f"plan: literal t={matrix.t} d={matrix.d} (n={message.n})")

    if args.scheme == 1:
        sig = scheme1.sign(message, sk, suite, matrix, s, (mode, value))
    else:
        sig = scheme3.sign(message, sk, suite, matrix, (mode, value))
    data = sigfile.dumps(sig)
    Path(args.out).write_bytes(data)
    print(f"wrote {args.out} ({len(data)} bytes)")
    return EXIT_OK


def cmd_verify(args) -> int:
    sig = sigfile.loads(Path(args.signature).read_bytes())
    hd = sig.header
    alg, pk = read_key(Path(args.pub), "PUBLIC")
    if alg != hd.cdss_id:
        raise MalformedKey(f"key is for {alg}, signature uses {hd.cdss_id}")
    matrix = load_matrix_file(args.cff_file)
    message = load_message(args.message, hd)

    if hd.scheme == 3:
        if args.correct:
            raise UsageError("redactable signatures cannot be corrected")
        res = scheme3.verify(message, sig, pk, matrix=matrix)
        print(report(res))
        return EXIT_OK if res.accepted else EXIT_REJECT

    if not args.correct:
        res = scheme1.verify(message, sig, pk, matrix=matrix)
        print(report(res))
        return EXIT_OK if res.accepted else EXIT_REJECT

    s = args.max_bits or hd.s
    if not s:
        raise UsageError("signature has no block-size bound; pass --max-bits")
    precheck = bool(args.fast) and check_injective_upto(get_hash(hd.hash_id), s)
    cfg = scheme2.CorrectionConfig(s, hash_precheck=precheck, fast=precheck, partial=True)
    res = scheme2.verify_correct(message, sig, pk, cfg, matrix=matrix)
    print(report(res))
    if not res.accepted:
        return EXIT_REJECT
    for c in res.corrections:
        print(f"block {c.index + 1}: {c.status}")
    if res.correction_failed:
        print("CORRECTION FAILED (collision)")
        return EXIT_CORRECTION_FAILED
    if args.out:
        Path(args.out).write_bytes(res.corrected.join())
        print(f"corrected message written to {args.out}")
    return EXIT_OK


def cmd_redact(args) -> int:
    sig = sigfile.loads(Path(args.signature).read_bytes())
    hd = sig.header
    if hd.scheme != 3:
        raise UsageError("only scheme 3 signatures are redactable")
    try:
        targets = {int(b) - 1 for b in args.blocks.split(",") if b.strip()}
    except ValueError:
        raise UsageError(f"bad block list {args.blocks!r}") from None
    message = load_message(args.message, hd)
    try:
        m2, sig2 = scheme3.redact(message, sig, targets, load_matrix_file(args.cff_file))
    except TooManyRedactions as exc:
        print(f"error: TooManyRedactions: {exc}", file=sys.stderr)
        return EXIT_REJECT
    Path(args.out + ".mtsr").write_bytes(sigfile.dumps_message(m2))
    Path(args.out + ".sig").write_bytes(sigfile.dumps(sig2))
    print(f"redacted blocks {fmt_blocks(targets)}; wrote {args.out}.mtsr and {args.out}.sig")
    return EXIT_OK


def cmd_plan(args) -> int:
    req = PlanRequest(
        args.d, n=args.n, size_bits=args.size_bits, block_bits=args.block_bits,
        digest_bits=args.digest_bits, cdss_bits=args.cdss_bits, r_bits=args.r_bits,
        scheme=args.scheme,
    )
    p = plan(req)
    if args.format == "kv":
        for k, v in p.as_dict().items():
            print(f"{k}={v}")
    else:
        print(p.render())
    return EXIT_OK


def cmd_cff(args) -> int:
    if args.make:
        kind, _, rest = args.make.partition(":")
        if kind == "poly":
            q, k = (int(v) for v in rest.split(","))
            m = cff_polynomial(field_of_order(q), k)
        elif kind == "identity":
            m = cff_identity(int(rest))
        else:
            raise UsageError("use --make poly:q,k or --make identity:n")
        if args.columns:
            m = m.truncate(args.columns)
        text = dumps_literal(m)
        if args.out:
            Path(args.out).write_text(text)
            print(f"wrote {args.out}: t={m.t} n={m.n} d={m.d}")
        else:
            sys.stdout.write(text)
        return EXIT_OK
    m = loads_literal(Path(args.check).read_text())
    d = m.d if args.d is None else args.d
    ok = cff_validate(m, d)
    print(f"{'VALID' if ok else 'INVALID'} {d}-CFF({m.t}, {m.n})")
    return EXIT_OK if ok else EXIT_REJECT


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mtss", description="Modification-tolerant signatures")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate a key pair")
    p.add_argument("--algorithm", default="ed25519")
    p.add_argument("--level", type=int)
    p.add_argument("--seed", help="deterministic key (ed25519 and test keys only)")
    p.add_argument("--out", required=True, help="output prefix")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("sign", help="sign a file")
    p.add_argument("message")
    p.add_argument("--key", required=True)
    p.add_argument("--scheme", type=int, choices=(1, 3), default=1)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--block", required=True, help="fixed:<bytes> or delim:<byte>")
    p.add_argument("--out", required=True)
    p.add_argument("--hash", default="sha256")
    p.add_argument("--cff-file")
    p.add_argument("--max-bits", type=int, help="block bound s, makes scheme 1 correctable")
    p.add_argument("--seed", type=int, help="seed the random string (testing only)")
    p.set_defaults(func=cmd_sign)

    p = sub.add_parser("verify", help="verify, locate and optionally correct")
    p.add_argument("message")
    p.add_argument("signature")
    p.add_argument("--pub", required=True)
    p.add_argument("--cff-file")
    p.add_argument("--correct", action="store_true")
    p.add_argument("--max-bits", type=int)
    p.add_argument("--fast", action="store_true", help="precheck injectivity, stop at first match")
    p.add_argument("--out", help="where to write the corrected message")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("redact", help="redact blocks under a scheme 3 signature")
    p.add_argument("message")
    p.add_argument("signature")
    p.add_argument("--blocks", required=True, help="1-based indices, comma separated")
    p.add_argument("--out", required=True, help="output prefix")
    p.add_argument("--cff-file")
    p.set_defaults(func=cmd_redact)

    p = sub.add_parser("plan", help="choose a CFF and report signature size")
    p.add_argument("--n", type=int)
    p.add_argument("--size-bits", type=int)
    p.add_argument("--block-bits", type=int)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--scheme", type=int, choices=(1, 2, 3), default=1)
    p.add_argument("--digest-bits", type=int, default=256)
    p.add_argument("--cdss-bits", type=int, default=2048)
    p.add_argument("--r-bits", type=int, default=128)
    p.add_argument("--format", choices=("table", "kv"), default="table")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("cff", help="make or check matrix files")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--make", help="poly:q,k or identity:n")
    g.add_argument("--check", help="matrix file to validate")
    p.add_argument("--d", type=int)
    p.add_argument("--columns", type=int, help="keep only the first n columns")
    p.add_argument("--out")
    p.set_defaults(func=cmd_cff)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (MtssError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
