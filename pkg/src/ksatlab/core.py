"""CNF formulas, assignments and clause evaluation.

Literals are signed integers in the DIMACS convention: ``v`` is the positive
literal of variable ``v`` (1-based) and ``-v`` its negation.  A clause is a
tuple of literals sorted by variable index.  A :class:`Formula` keeps its
clauses as a zero-padded ``(m, w)`` int32 array so the numeric kernels can
consume it directly.

Total assignments are uint8 arrays of length ``n`` where entry ``v - 1``
holds the value of variable ``v``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

Clause = tuple[int, ...]


class KsatError(Exception):
    """Base class for errors raised by ksatlab."""


class CapExceeded(KsatError):
    """A size or budget cap would be exceeded."""


class AttemptsExhausted(KsatError):
    """Rejection sampling gave up; the regime is not desk-feasible."""


class RootsNotFound(KsatError):
    def __init__(self, found: int, expected: int = 3):
        super().__init__(f"found {found} sign changes of f', expected {expected}")
        self.found = found


class Status(enum.Enum):
    SATISFIED = "satisfied"
    FALSIFIED = "falsified"
    UNIT = "unit"
    UNRESOLVED = "unresolved"


class ClauseStatus(NamedTuple):
    status: Status
    literal: int | None = None  # the forced literal when status is UNIT


def make_clause(literals: Iterable[int]) -> Clause:
    """Canonical clause: literals sorted by variable index."""
    return tuple(sorted((int(l) for l in literals), key=abs))


@dataclass(frozen=True, eq=False)
class Formula:
    """A CNF formula over variables ``1..n``.

    ``k`` is the clause width contract; ``None`` means mixed widths are
    allowed (hand-built formulas such as ``(x1) & (-x1 | x2)``).  Clause
    order is preserved and duplicates are allowed.
    """

    n: int
    lits: np.ndarray
    k: int | None = None

    def __post_init__(self):
        lits = np.asarray(self.lits, dtype=np.int32)
        if lits.ndim != 2:
            raise ValueError("lits must be a 2-d array")
        lits.setflags(write=False)
        object.__setattr__(self, "lits", lits)

    @classmethod
    def from_clauses(cls, n: int, clauses: Iterable[Sequence[int]], k: int | None = None) -> "Formula":
        rows = [make_clause(c) for c in clauses]
        w = max((len(r) for r in rows), default=k or 0)
        arr = np.zeros((len(rows), w), dtype=np.int32)
        for i, r in enumerate(rows):
            arr[i, : len(r)] = r
        return cls(n, arr, k)

    @property
    def m(self) -> int:
        return self.lits.shape[0]

    @property
    def clauses(self) -> list[Clause]:
        return [tuple(int(l) for l in row if l != 0) for row in self.lits]

    def __len__(self) -> int:
        return self.m

    def __eq__(self, other):
        if not isinstance(other, Formula):
            return NotImplemented
        return (
            self.n == other.n
            and self.k == other.k
            and self.lits.shape == other.lits.shape
            and bool(np.array_equal(self.lits, other.lits))
        )

    def __hash__(self):
        return hash((self.n, self.k, self.lits.shape, self.lits.tobytes()))

    def __repr__(self):
        return f"Formula(n={self.n}, k={self.k}, m={self.m})"

    @cached_property
    def widths(self) -> np.ndarray:
        return np.count_nonzero(self.lits, axis=1).astype(np.int32)

    @cached_property
    def occurrences(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """CSR occurrence lists: ``(ptr, clause_index, literal)`` grouped by variable."""
        m, w = self.lits.shape
        flat = self.lits.ravel()
        owner = np.repeat(np.arange(m, dtype=np.int32), w)
        keep = flat != 0
        flat, owner = flat[keep], owner[keep]
        var = np.abs(flat) - 1
        order = np.argsort(var, kind="stable")
        ptr = np.zeros(self.n + 1, dtype=np.int64)
        np.add.at(ptr, var + 1, 1)
        return np.cumsum(ptr), owner[order], flat[order].astype(np.int32)

    @cached_property
    def masks(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-clause ``(positive, negative)`` variable bitmasks; bit ``v-1`` is variable ``v``."""
        if self.n > 62:
            raise CapExceeded(f"bitmask form needs n <= 62, got {self.n}")
        shift = np.maximum(np.abs(self.lits).astype(np.int64) - 1, 0)
        bits = np.where(self.lits != 0, np.int64(1) << shift, 0)
        pos = np.where(self.lits > 0, bits, 0).sum(axis=1).astype(np.int64)
        neg = np.where(self.lits < 0, bits, 0).sum(axis=1).astype(np.int64)
        return pos, neg


def as_assignment(values: Iterable[int] | np.ndarray, n: int | None = None) -> np.ndarray:
    a = np.asarray(values, dtype=np.int64)
    if n is not None and a.shape != (n,):
        raise ValueError(f"expected an assignment of length {n}, got shape {a.shape}")
    if a.size and not np.isin(a, (0, 1)).all():
        raise ValueError("a total assignment holds only 0/1 values")
    return a.astype(np.uint8)


class PartialAssignment:
    """Tri-state assignment used during one PPZ pass.

    Values are stored as int8 with ``-1`` meaning unset.  A variable can be
    set once; setting it again raises ``ValueError``.
    """

    UNSET = -1

    def __init__(self, n: int, values: Iterable[int | None] | None = None):
        self.n = n
        self.values = np.full(n, self.UNSET, dtype=np.int8)
        if values is not None:
            for i, v in enumerate(values):
                if v is not None and v != self.UNSET:
                    self.values[i] = 1 if v else 0

    def __getitem__(self, var: int) -> int | None:
        v = self.values[var - 1]
        return None if v == self.UNSET else int(v)

    def is_set(self, var: int) -> bool:
        return self.values[var - 1] != self.UNSET

    def set(self, var: int, value: int | bool) -> None:
        if self.values[var - 1] != self.UNSET:
            raise ValueError(f"variable {var} is already assigned")
        self.values[var - 1] = 1 if value else 0

    def is_total(self) -> bool:
        return bool((self.values != self.UNSET).all())

    def to_assignment(self) -> np.ndarray:
        if not self.is_total():
            raise ValueError("assignment has unset variables")
        return self.values.astype(np.uint8)

    def copy(self) -> "PartialAssignment":
        pa = PartialAssignment(self.n)
        pa.values = self.values.copy()
        return pa

    def __repr__(self):
        shown = "".join("?" if v < 0 else str(int(v)) for v in self.values)
        return f"PartialAssignment({shown})"


def literal_value(lit: int, values: np.ndarray) -> int:
    """1 if satisfied, 0 if falsified, -1 if unset; ``values`` uses -1 for unset."""
    v = int(values[abs(lit) - 1])
    if v < 0:
        return -1
    return int(v == (1 if lit > 0 else 0))


def clause_status(clause: Sequence[int], pa: PartialAssignment | np.ndarray) -> ClauseStatus:
    values = pa.values if isinstance(pa, PartialAssignment) else np.asarray(pa)
    unset = None
    n_unset = 0
    for lit in clause:
        if lit == 0:
            continue
        v = literal_value(lit, values)
        if v == 1:
            return ClauseStatus(Status.SATISFIED)
        if v < 0:
            n_unset += 1
            unset = lit
    if n_unset == 0:
        return ClauseStatus(Status.FALSIFIED)
    if n_unset == 1:
        return ClauseStatus(Status.UNIT, unset)
    return ClauseStatus(Status.UNRESOLVED)


def satisfied_clauses(F: Formula, a: np.ndarray) -> np.ndarray:
    """Boolean vector: which clauses of ``F`` the total assignment ``a`` satisfies."""
    a = as_assignment(a, F.n)
    if F.m == 0:
        return np.zeros(0, dtype=bool)
    vals = a[np.abs(F.lits) - 1] == 1
    hit = (F.lits != 0) & (vals == (F.lits > 0))
    return hit.any(axis=1)


def eval_formula(F: Formula, a) -> bool:
    """True iff the total assignment ``a`` satisfies every clause of ``F``.

    Raises ``ValueError`` for a partial assignment.
    """
    if isinstance(a, PartialAssignment):
        a = a.to_assignment()
    return bool(satisfied_clauses(F, a).all())


@dataclass(frozen=True)
class Violation:
    clause_index: int
    reason: str

    def __str__(self):
        return f"clause {self.clause_index}: {self.reason}"


def validate_formula(F: Formula) -> Violation | None:
    """Return the first invariant violation of ``F``, or ``None`` when well formed."""
    for idx, clause in enumerate(F.clauses):
        vars_ = [abs(l) for l in clause]
        if any(v < 1 or v > F.n for v in vars_):
            return Violation(idx, "variable out of range")
        if len(set(vars_)) != len(vars_):
            return Violation(idx, "repeated variable")
        if F.k is not None and len(clause) != F.k:
            return Violation(idx, "wrong width")
        if vars_ != sorted(vars_):
            return Violation(idx, "literals not sorted by variable")
    return None


def check_formula(F: Formula) -> None:
    bad = validate_formula(F)
    if bad is not None:
        raise ValueError(f"malformed formula: {bad}")
