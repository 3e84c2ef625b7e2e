"""d-cover-free family matrices: construction, validation and decoding.

A t x n binary matrix is a d-CFF when any d+1 of its columns contain a
(d+1)-dimensional permutation submatrix.  Rows are tests, columns are
message blocks.  All indices here are 0-based.
"""
from __future__ import annotations

import enum
import hashlib
import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, NotFound, ParseError
from .ff import FieldSpec, field_of_order

DEFAULT_BUDGET = 10**7
MAX_DENSE_CELLS = 2**28


class Outcome(enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    UNAVAILABLE = "unavailable"


class Construction(enum.IntEnum):
    IDENTITY = 0
    POLYNOMIAL = 1
    LITERAL = 2


@dataclass(frozen=True)
class CffMatrix:
    """A t x n incidence matrix with a claimed strength d.

    Identity and literal matrices keep a dense boolean array.  Polynomial
    matrices are described by (field, k) and compute columns on demand,
    so a family with 25**7 columns can still be queried and truncated.
    """

    t: int
    n: int
    d: int
    construction: Construction
    field: FieldSpec | None = None
    k: int = 0
    literal: np.ndarray | None = None

    def __post_init__(self):
        if self.literal is not None:
            arr = np.asarray(self.literal, dtype=bool)
            if arr.shape != (self.t, self.n):
                raise ValueError(f"matrix shape {arr.shape} != ({self.t}, {self.n})")
            arr.setflags(write=False)
            object.__setattr__(self, "literal", arr)

    def __repr__(self) -> str:
        tag = self.construction.name.lower()
        if self.construction is Construction.POLYNOMIAL:
            tag += f"(q={self.field.q}, k={self.k})"
        return f"CffMatrix({tag}, t={self.t}, n={self.n}, d={self.d})"

    def __eq__(self, other):
        if not isinstance(other, CffMatrix):
            return NotImplemented
        return self.tag == other.tag and self.n == other.n and self.d == other.d

    def __hash__(self):
        return hash((self.tag, self.n, self.d))

    @property
    def q(self) -> int:
        return self.field.q if self.field is not None else 0

    @cached_property
    def tag(self) -> tuple:
        """Hashable description sufficient to rebuild the matrix."""
        if self.construction is Construction.LITERAL:
            return (self.construction, literal_digest(self))
        return (self.construction, self.q, self.k)

    # -- column access --------------------------------------------------

    def column_values(self, cols: Sequence[int] | np.ndarray) -> np.ndarray:
        """y-values f_j(x) for x in GF(q); polynomial construction only."""
        q, k = self.field.q, self.k
        cols = np.asarray(cols, dtype=np.int64)
        powers = q ** np.arange(k + 1, dtype=np.int64)
        coeffs = (cols[..., None] // powers) % q
        return self.field.poly_eval_array(coeffs, np.arange(q))

    def column_support(self, j: int) -> np.ndarray:
        """Row indices holding a 1 in column j, ascending."""
        if not 0 <= j < self.n:
            raise IndexError(j)
        if self.construction is Construction.IDENTITY:
            return np.array([j])
        if self.construction is Construction.POLYNOMIAL:
            ys = self.column_values([j])[0]
            return np.arange(self.q) * self.q + ys
        return np.flatnonzero(self.literal[:, j])

    @cached_property
    def dense(self) -> np.ndarray:
        """The full t x n boolean matrix (read-only)."""
        if self.literal is not None:
            return self.literal
        if self.t * self.n > MAX_DENSE_CELLS:
            raise BudgetExceeded(f"{self!r} is too large to materialise")
        m = np.zeros((self.t, self.n), dtype=bool)
        if self.construction is Construction.IDENTITY:
            np.fill_diagonal(m, True)
        else:
            ys = self.column_values(np.arange(self.n))
            rows = np.arange(self.q)[None, :] * self.q + ys
            m[rows, np.arange(self.n)[:, None]] = True
        m.setflags(write=False)
        return m

    @cached_property
    def row_members(self) -> tuple[tuple[int, ...], ...]:
        """For every row, the columns it contains in increasing order."""
        return tuple(tuple(int(j) for j in np.flatnonzero(r)) for r in self.dense)

    @cached_property
    def column_masks(self) -> tuple[int, ...]:
        """Column supports as int bitmasks (bit i set when row i contains j)."""
        weights = [1 << i for i in range(self.t)]
        return tuple(
            sum(weights[i] for i in np.flatnonzero(col)) for col in self.dense.T
        )

    def truncate(self, n: int) -> "CffMatrix":
        """Keep the first n columns.  Any column subset of a d-CFF is a d-CFF."""
        if not 1 <= n <= self.n:
            raise ValueError(f"cannot truncate {self.n} columns to {n}")
        if n == self.n:
            return self
        if self.construction is Construction.IDENTITY:
            return cff_identity(n, self.d)
        literal = None if self.literal is None else self.literal[:, :n]
        return CffMatrix(
            self.t, n, self.d, self.construction, self.field, self.k, literal
        )


# -- constructions ------------------------------------------------------


def cff_identity(n: int, d: int | None = None) -> CffMatrix:
    """The n x n identity; a d-CFF for d = n-1 (and vacuously for any larger d)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    d = n - 1 if d is None else d
    if d < n - 1:
        d = n - 1
    return CffMatrix(n, n, d, Construction.IDENTITY)


def cff_polynomial(field: FieldSpec, k: int) -> CffMatrix:
    """Polynomial CFF: rows (x, y) in GF(q)^2, columns the q**(k+1)
    polynomials of degree <= k, entry 1 iff f(x) = y.

    Column j is the polynomial whose coefficient vector is the base-q
    expansion of j (constant term least significant).  Row (x, y) has
    index x*q + y.  Two distinct polynomials agree on at most k points, so
    the family is a floor((q-1)/k)-CFF.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    q = field.q
    return CffMatrix(q * q, q ** (k + 1), (q - 1) // k, Construction.POLYNOMIAL, field, k)


def cff_literal(rows: np.ndarray | Sequence[Sequence[int]], d: int) -> CffMatrix:
    arr = np.asarray(rows, dtype=bool)
    if arr.ndim != 2:
        raise ValueError("literal matrix must be 2-dimensional")
    return CffMatrix(arr.shape[0], arr.shape[1], d, Construction.LITERAL, literal=arr)


def cff_from_tag(construction: Construction, q: int, k: int, n: int, d: int) -> CffMatrix:
    """Rebuild a matrix from a header tag, truncated to n columns."""
    if construction is Construction.IDENTITY:
        return cff_identity(n, d)
    if construction is Construction.POLYNOMIAL:
        return cff_polynomial(field_of_order(q), k).truncate(n)
    raise ValueError("literal matrices cannot be rebuilt from a tag")


# -- literal text format ------------------------------------------------


def dumps_literal(m: CffMatrix) -> str:
    lines = [f"{m.t} {m.n} {m.d}"]
    lines += ["".join("1" if v else "0" for v in row) for row in m.dense]
    return "\n".join(lines) + "\n"


def loads_literal(text: str) -> CffMatrix:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty matrix file")
    try:
        t, n, d = (int(v) for v in lines[0].split())
    except ValueError as exc:
        raise ParseError(f"bad matrix header {lines[0]!r}") from exc
    body = lines[1:]
    if len(body) != t or any(len(r) != n or set(r) - {"0", "1"} for r in body):
        raise ParseError(f"matrix body does not match header {t} x {n}")
    return cff_literal([[c == "1" for c in r] for r in body], d)


def literal_digest(m: CffMatrix) -> bytes:
    return hashlib.sha256(dumps_literal(m).encode("ascii")).digest()


# -- validation ---------------------------------------------------------


def _check_budget(count: int, budget: int) -> None:
    if count > budget:
        raise BudgetExceeded(f"{count} subset checks exceed budget {budget}")


def permutation_check(m: CffMatrix, d: int | None = None, budget: int = DEFAULT_BUDGET) -> bool:
    """Row-wise check: every (d+1)-subset of columns has, for each of its
    columns, a row that is a unit vector on that column."""
    d = m.d if d is None else d
    size = min(d + 1, m.n)
    _check_budget(math.comb(m.n, size), budget)
    dense = m.dense
    combos = itertools.combinations(range(m.n), size)
    chunk = max(1, 2**22 // (m.t * size))
    while True:
        block = np.array(list(itertools.islice(combos, chunk)), dtype=np.int64)
        if block.size == 0:
            return True
        sub = dense[:, block]  # t x B x size
        unit = sub.sum(axis=2) == 1
        present = (sub & unit[:, :, None]).any(axis=0)
        if not present.all():
            return False


def cover_check(m: CffMatrix, d: int | None = None, budget: int = DEFAULT_BUDGET) -> bool:
    """Column-wise check: no column's support lies inside the union of the
    supports of d other columns."""
    d = min(m.d if d is None else d, m.n - 1)
    _check_budget(m.n * math.comb(m.n - 1, d), budget)
    masks = m.column_masks
    for j, mj in enumerate(masks):
        others = masks[:j] + masks[j + 1:]
        for group in itertools.combinations(others, d):
            union = 0
            for g in group:
                union |= g
            if mj & ~union == 0:
                return False
    return True


def cff_validate(m: CffMatrix, d: int | None = None, budget: int = DEFAULT_BUDGET) -> bool:
    """Exhaustively decide whether m is a d-CFF (d defaults to the claim).

    With n <= d every column must escape the union of all the others.

    Raises BudgetExceeded when C(n, d+1) exceeds ``budget``; use
    :func:`cff_spot_check` for larger families.
    """
    d = m.d if d is None else d
    if not m.dense.any(axis=0).all():
        return False
    return permutation_check(m, d, budget)


def find_violation(m: CffMatrix, d: int | None = None, budget: int = DEFAULT_BUDGET) -> tuple[int, ...] | None:
    """Return a (d+1)-subset of columns with no permutation submatrix, if any."""
    d = min(m.d if d is None else d, m.n - 1)
    _check_budget(math.comb(m.n, d + 1), budget)
    masks = m.column_masks
    for combo in itertools.combinations(range(m.n), d + 1):
        for j in combo:
            union = 0
            for o in combo:
                if o != j:
                    union |= masks[o]
            if masks[j] & ~union == 0:
                return combo
    return None


def cff_spot_check(
    m: CffMatrix,
    samples: int,
    rng: np.random.Generator | None = None,
    d: int | None = None,
    chunk: int = 50_000,
) -> int:
    """Check ``samples`` uniformly random (d+1)-subsets of columns.

    Returns the number of violating subsets found.  Zero violations is
    evidence, not proof, that the matrix is a d-CFF.  Polynomial matrices
    are evaluated column by column without materialising the matrix.
    """
    d = m.d if d is None else d
    size = min(d + 1, m.n)
    rng = rng or np.random.default_rng()
    violations = 0
    done = 0
    while done < samples:
        b = min(chunk, samples - done)
        cols = _random_distinct(rng, m.n, b, size)
        if m.construction is Construction.POLYNOMIAL:
            ys = m.column_values(cols)  # B x size x q; row index is (x, y)
            eq = ys[:, :, None, :] == ys[:, None, :, :]
        else:
            sup = m.dense[:, cols].transpose(1, 2, 0)  # B x size x t
            eq = sup[:, :, None, :] & sup[:, None, :, :]
        eye = np.eye(size, dtype=bool)[None, :, :, None]
        covered = (eq & ~eye).any(axis=2)  # B x size x points
        if m.construction is Construction.POLYNOMIAL:
            isolated = (~covered).any(axis=2)
        else:
            isolated = (sup & ~covered).any(axis=2)
        violations += int((~isolated.all(axis=1)).sum())
        done += b
    return violations


def _random_distinct(rng: np.random.Generator, n: int, b: int, size: int) -> np.ndarray:
    cols = rng.integers(0, n, size=(b, size), dtype=np.int64)
    while True:
        s = np.sort(cols, axis=1)
        bad = (s[:, 1:] == s[:, :-1]).any(axis=1)
        if not bad.any():
            return cols
        cols[bad] = rng.integers(0, n, size=(int(bad.sum()), size), dtype=np.int64)


# -- decoding -----------------------------------------------------------


def cff_decode(m: CffMatrix, outcomes: Sequence[Outcome]) -> set[int]:
    """Columns not contained in any passing row.

    Unavailable rows contribute nothing, exactly as failing rows.
    """
    if len(outcomes) != m.t:
        raise ValueError(f"expected {m.t} outcomes, got {len(outcomes)}")
    passing = np.array([o is Outcome.PASS for o in outcomes], dtype=bool)
    if not passing.any():
        return set(range(m.n))
    verified = m.dense[passing].any(axis=0)
    return {int(j) for j in np.flatnonzero(~verified)}


def outcomes_from_defects(m: CffMatrix, defects: Iterable[int]) -> list[Outcome]:
    """Test results when exactly ``defects`` are bad (bitwise-or of columns)."""
    defects = list(defects)
    fails = m.dense[:, defects].any(axis=1) if defects else np.zeros(m.t, bool)
    return [Outcome.FAIL if f else Outcome.PASS for f in fails]


def cff_isolating_row(m: CffMatrix, suspects: Iterable[int], k: int) -> int:
    """Smallest row containing k and no other suspect."""
    suspects = set(suspects)
    if k not in suspects:
        raise ValueError(f"{k} is not among the suspects")
    others = sorted(suspects - {k})
    dense = m.dense
    ok = dense[:, k] & ~dense[:, others].any(axis=1) if others else dense[:, k]
    rows = np.flatnonzero(ok)
    if rows.size == 0:
        raise NotFound(f"no isolating row for column {k} against {others}")
    return int(rows[0])
