"""Arithmetic in GF(q) for prime powers q <= 2**16.

Elements are plain ints in ``range(q)``.  The base-p digits of an element,
least significant first, are its coefficients in the polynomial basis
1, x, x**2, ... modulo the field's reduction polynomial.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import FieldTooLargeError, NotPrimeError

MAX_ORDER = 2**16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, e)`` with ``p**e == q`` or None if q is not a prime power."""
    if q < 2:
        return None
    p = next(f for f in range(2, q + 1) if q % f == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    return (p, e) if r == 1 else None


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """Remainder of a divided by b over GF(p); both low-to-high, b nonzero."""
    r = _poly_trim(list(a))
    b = _poly_trim(list(b))
    lead_inv = pow(b[-1], p - 2, p)
    while len(r) >= len(b):
        c = r[-1] * lead_inv % p
        shift = len(r) - len(b)
        for i, bc in enumerate(b):
            r[shift + i] = (r[shift + i] - c * bc) % p
        _poly_trim(r)
    return r


def _digits(v: int, p: int, width: int) -> list[int]:
    out = []
    for _ in range(width):
        v, r = divmod(v, p)
        out.append(r)
    return out


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    poly = _poly_trim(list(poly))
    deg = len(poly) - 1
    if deg < 1:
        return False
    for k in range(1, deg // 2 + 1):
        for v in range(p**k):
            divisor = _digits(v, p, k) + [1]
            if not _poly_mod(poly, divisor, p):
                return False
    return True


def smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree e over GF(p).

    Candidates are ordered by their value as a base-p integer, so the
    higher-degree coefficients are compared first.
    """
    for v in range(p**e):
        cand = _digits(v, p, e) + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("an irreducible polynomial of every degree exists")


@dataclass(frozen=True)
class FieldSpec:
    p: int
    e: int
    reduction: tuple[int, ...] = field(compare=False)

    @property
    def q(self) -> int:
        return self.p**self.e

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.e})" if self.e > 1 else f"GF({self.p})"

    # -- representation -------------------------------------------------

    def coeffs(self, a: int) -> list[int]:
        return _digits(a, self.p, self.e)

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        out = 0
        for c in reversed(list(coeffs)):
            out = out * self.p + c % self.p
        return out

    def elements(self) -> range:
        return range(self.q)

    # -- tables ---------------------------------------------------------

    def _mulmod(self, a: int, b: int) -> int:
        """Schoolbook multiply then reduce; used only to build tables."""
        p, e = self.p, self.e
        ac, bc = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(ac):
            if x:
                for j, y in enumerate(bc):
                    prod[i + j] = (prod[i + j] + x * y) % p
        return self.from_coeffs(_poly_mod(prod, self.reduction, p))

    @cached_property
    def _exp_log(self) -> tuple[np.ndarray, np.ndarray]:
        q = self.q
        for g in range(1, q):
            exp = np.zeros(2 * (q - 1), dtype=np.int64)
            x = 1
            for i in range(q - 1):
                if i and x == 1:
                    break
                exp[i] = x
                x = self._mulmod(x, g)
            else:
                if x != 1:
                    continue
                exp[q - 1:] = exp[: q - 1]
                log = np.zeros(q, dtype=np.int64)
                log[exp[: q - 1]] = np.arange(q - 1)
                return exp, log
        raise AssertionError("multiplicative group of a field is cyclic")

    @property
    def generator(self) -> int:
        return int(self._exp_log[0][1]) if self.q > 2 else 1

    # -- scalar arithmetic ----------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self.from_coeffs(
            [x + y for x, y in zip(self.coeffs(a), self.coeffs(b))]
        )

    def neg(self, a: int) -> int:
        return self.from_coeffs([-x for x in self.coeffs(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        exp, log = self._exp_log
        return int(exp[log[a] + log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in " + repr(self))
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        exp, log = self._exp_log
        return int(exp[(self.q - 1 - log[a]) % (self.q - 1)])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        out = 1
        for _ in range(n):
            out = self.mul(out, a)
        return out

    def poly_eval(self, coeffs: Sequence[int], x: int) -> int:
        """Horner evaluation; coeffs are given constant term first."""
        acc = 0
        for c in reversed(list(coeffs)):
            acc = self.add(self.mul(acc, x), c)
        return acc

    # -- vectorised arithmetic (numpy int arrays) -----------------------

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray] | None:
        """Full addition and multiplication tables for q <= 256."""
        if self.e == 1 or self.q > 256:
            return None
        q = self.q
        a = np.arange(q)[:, None]
        b = np.arange(q)[None, :]
        add = np.array([[self.add(x, y) for y in range(q)] for x in range(q)], dtype=np.int64)
        mul = self._mul_array_log(np.broadcast_to(a, (q, q)), np.broadcast_to(b, (q, q)))
        return add, mul

    def add_array(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self._tables is not None:
            return self._tables[0][a, b]
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return np.bitwise_xor(a, b)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        scale = 1
        for _ in range(self.e):
            out += ((a // scale + b // scale) % self.p) * scale
            scale *= self.p
        return out

    def mul_array(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return (a * b) % self.p
        if self._tables is not None:
            return self._tables[1][a, b]
        return self._mul_array_log(a, b)

    def _mul_array_log(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        exp, log = self._exp_log
        out = exp[log[a] + log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def poly_eval_array(self, coeffs: np.ndarray, xs: np.ndarray) -> np.ndarray:
        """Evaluate many polynomials at many points.

        ``coeffs`` has shape ``(..., k+1)`` (constant term first) and ``xs``
        shape ``(m,)``; the result has shape ``(..., m)``.
        """
        coeffs = np.asarray(coeffs, dtype=np.int64)
        xs = np.asarray(xs, dtype=np.int64)
        acc = np.zeros(coeffs.shape[:-1] + xs.shape, dtype=np.int64)
        for i in range(coeffs.shape[-1] - 1, -1, -1):
            acc = self.add_array(self.mul_array(acc, xs), coeffs[..., i, None])
        return acc


def field_make(p: int, e: int = 1) -> FieldSpec:
    """Build GF(p**e) with the smallest monic irreducible as reduction."""
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    if e < 1:
        raise ValueError("extension degree must be >= 1")
    if p**e > MAX_ORDER:
        raise FieldTooLargeError(f"{p}^{e} exceeds {MAX_ORDER}")
    return FieldSpec(p, e, smallest_irreducible(p, e))


def field_of_order(q: int) -> FieldSpec:
    pe = prime_power(q)
    if pe is None:
        raise NotPrimeError(f"{q} is not a prime power")
    return field_make(*pe)
