"""DIMACS CNF with an optional planted certificate.

The certificate travels as a comment before the header so ordinary SAT
tools still accept the file::

    c planted 1 -2 3
    p cnf 3 2
    1 -2 0
    -1 3 0
"""

from __future__ import annotations

import numpy as np

from .core import Formula, KsatError, as_assignment, validate_formula


class DimacsError(KsatError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def dimacs_write(F: Formula, planted=None) -> str:
    lines = []
    if planted is not None:
        sigma = as_assignment(planted, F.n)
        lits = [str(v + 1 if b else -(v + 1)) for v, b in enumerate(sigma)]
        lines.append("c planted " + " ".join(lits))
    lines.append(f"p cnf {F.n} {F.m}")
    for clause in F.clauses:
        lines.append(" ".join(map(str, clause)) + " 0")
    return "\n".join(lines) + "\n"


def dimacs_read(text: str, k: int | None = None) -> tuple[Formula, np.ndarray | None]:
    """Parse DIMACS text into ``(formula, planted_sigma_or_None)``.

    If ``k`` is given every clause must have exactly ``k`` literals.  Without
    it, a formula whose clauses share one width records that width.  Clauses
    may span lines; the header counts are enforced.
    """
    n = m = None
    sigma = None
    clauses: list[list[int]] = []
    current: list[int] = []
    header_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) >= 2 and parts[0] == "c" and parts[1] == "planted":
                try:
                    sigma = [int(t) for t in parts[2:]]
                except ValueError:
                    raise DimacsError(lineno, "planted certificate must be integers") from None
                if sorted(abs(l) for l in sigma) != list(range(1, len(sigma) + 1)):
                    raise DimacsError(lineno, "planted certificate must list each variable once, in order")
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if n is not None:
                raise DimacsError(lineno, "duplicate header")
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(lineno, "expected 'p cnf <n> <m>'")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(lineno, "header counts must be integers") from None
            if n < 0 or m < 0:
                raise DimacsError(lineno, "header counts must be non-negative")
            header_line = lineno
            continue
        if n is None:
            raise DimacsError(lineno, "clause before 'p cnf' header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(lineno, f"bad literal {tok!r}") from None
            if lit == 0:
                if k is not None and len(current) != k:
                    raise DimacsError(lineno, f"clause of width {len(current)}, expected {k}")
                clauses.append(current)
                current = []
            else:
                if abs(lit) > n:
                    raise DimacsError(lineno, f"variable {abs(lit)} exceeds n={n}")
                current.append(lit)
    if n is None:
        raise DimacsError(0, "missing 'p cnf' header")
    if current:
        raise DimacsError(len(text.splitlines()), "last clause is not terminated by 0")
    if len(clauses) != m:
        raise DimacsError(header_line, f"header declares {m} clauses, found {len(clauses)}")
    if k is None:
        widths = {len(c) for c in clauses}
        k = widths.pop() if len(widths) == 1 else None
    F = Formula.from_clauses(n, clauses, k)
    bad = validate_formula(F)
    if bad is not None:
        raise DimacsError(header_line, f"malformed formula, {bad}")
    planted = None
    if sigma is not None:
        if len(sigma) != n:
            raise DimacsError(0, f"planted certificate has {len(sigma)} literals, expected {n}")
        planted = np.array([1 if l > 0 else 0 for l in sigma], dtype=np.uint8)
    return F, planted


def read_file(path, k: int | None = None):
    with open(path, encoding="utf-8") as fh:
        return dimacs_read(fh.read(), k)


def write_file(path, F: Formula, planted=None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dimacs_write(F, planted))
