"""Modification-tolerant signatures built on cover-free families.

Sign a message split into blocks so that a verifier can locate up to d
modified blocks (:mod:`mtss.scheme1`), correct them when blocks are small
(:mod:`mtss.scheme2`), or redact them with no residual information
(:mod:`mtss.scheme3`).
"""
from .cff import CffMatrix, Outcome, cff_decode, cff_identity, cff_isolating_row, cff_literal, cff_polynomial, cff_validate
from .crypto import CryptoSuite, KeyPair, check_injective_upto, collision_probability, keygen
from .ff import FieldSpec, field_make
from .message import BlockMessage
from .params import PlanRequest, plan, size_scheme3, size_scheme12
from .signature import VerifyOutcome

__version__ = "0.1.0"

__all__ = [
    "BlockMessage", "CffMatrix", "CryptoSuite", "FieldSpec", "KeyPair", "Outcome",
    "PlanRequest", "VerifyOutcome", "cff_decode", "cff_identity", "cff_isolating_row",
    "cff_literal", "cff_polynomial", "cff_validate", "check_injective_upto",
    "collision_probability", "field_make", "keygen", "plan", "size_scheme12", "size_scheme3",
]
