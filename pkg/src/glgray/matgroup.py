"""Invertible matrices over F_q and the row-operation generators ops(T).

A matrix is a tuple of row tuples of field element reps.  Row indices in
:class:`RowOp` are 1-based, matching the text format ``"A i j +"``.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, NamedTuple, Sequence

from .gf import Field
from .instrument import tick

Row = tuple[int, ...]
Matrix = tuple[Row, ...]


class RankDeficient(ValueError):
    pass


class RowOp(NamedTuple):
    kind: str  # "A" (row j += sign * row i) or "M" (row i *= alpha or /= alpha)
    i: int
    j: int
    sign: str  # "+"/"-" for A, "*"/"/" for M

    def __str__(self) -> str:
        return format_op(self)


def add_row(i: int, j: int, sign: str = "+") -> RowOp:
    if i == j:
        raise ValueError("AddRow needs distinct rows")
    return RowOp("A", i, j, sign)


def mul_row(i: int, direction: str = "*") -> RowOp:
    return RowOp("M", i, 0, direction)


def inverse_op(op: RowOp, q: int | None = None) -> RowOp:
    if op.kind == "A":
        if q == 2:
            return op
        return op._replace(sign="-" if op.sign == "+" else "+")
    return op._replace(sign="/" if op.sign == "*" else "*")


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if c == r else 0 for c in range(n)) for r in range(n))


def zero(n: int) -> Matrix:
    return tuple((0,) * n for _ in range(n))


# --- vector helpers ---

def vec_add(field: Field, a: Row, b: Row) -> Row:
    t = field.add_t
    if t is not None:
        return tuple(t[x][y] for x, y in zip(a, b))
    return tuple(field.add(x, y) for x, y in zip(a, b))


def vec_sub(field: Field, a: Row, b: Row) -> Row:
    neg = field.neg_t
    return vec_add(field, a, tuple(neg[y] for y in b))


def vec_scale(field: Field, c: int, a: Row) -> Row:
    return tuple(field.mul(c, x) for x in a)


def dot(field: Field, a: Row, b: Row) -> int:
    s = 0
    at, mt = field.add_t, field.mul_t
    if at is not None and mt is not None:
        for x, y in zip(a, b):
            if x and y:
                s = at[s][mt[x][y]]
        return s
    for x, y in zip(a, b):
        if x and y:
            s = field.add(s, field.mul(x, y))
    return s


def apply(field: Field, op: RowOp, X: Matrix) -> Matrix:
    n = len(X)
    tick(n)
    if op.kind == "A":
        src, dst = op.i - 1, op.j - 1
        r = X[src] if op.sign == "+" else tuple(field.neg_t[x] for x in X[src])
        new = vec_add(field, X[dst], r)
        return X[:dst] + (new,) + X[dst + 1:]
    row = op.i - 1
    c = field.alpha if op.sign == "*" else field.alpha_inv
    return X[:row] + (vec_scale(field, c, X[row]),) + X[row + 1:]


def apply_all(field: Field, ops: Iterable[RowOp], X: Matrix) -> Matrix:
    for op in ops:
        X = apply(field, op, X)
    return X


def ops_set(T, field: Field) -> list[RowOp]:
    """Generators of G(n, q, T) in canonical order.

    Additions along sorted edges first (both signs unless q = 2), then row
    multiplications/divisions by alpha for q > 2.
    """
    out = []
    signs = ("+",) if field.q == 2 else ("+", "-")
    for (i, j) in sorted(T.edges):
        for s in signs:
            out.append(RowOp("A", i, j, s))
    if field.q > 2:
        for i in range(1, T.n + 1):
            out.append(RowOp("M", i, 0, "*"))
            out.append(RowOp("M", i, 0, "/"))
    return out


def op_matrix(field: Field, op: RowOp, n: int) -> Matrix:
    return apply(field, op, identity(n))


def group_order(n: int, q: int, limit: int | None = 2**63 - 1) -> int:
    """|GL(n, q)| via a_n = (q^n - 1) q^(n-1) a_(n-1), a_1 = q - 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    a = q - 1
    for m in range(2, n + 1):
        a = (q**m - 1) * q ** (m - 1) * a
    if limit is not None and a > limit:
        raise OverflowError(f"|GL({n},{q})| = {a} exceeds {limit}")
    return a


def rref(field: Field, rows: Sequence[Row]) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    M = [list(r) for r in rows]
    if not M:
        return M, []
    ncols = len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((k for k in range(r, len(M)) if M[k][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = field.inv(M[r][c])
        M[r] = [field.mul(inv, x) for x in M[r]]
        for k in range(len(M)):
            if k != r and M[k][c]:
                f = field.neg(M[k][c])
                M[k] = [field.add(x, field.mul(f, y)) for x, y in zip(M[k], M[r])]
        tick(len(M) * ncols)
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rank(field: Field, rows: Sequence[Row]) -> int:
    return len(rref(field, rows)[1])


def is_invertible(field: Field, X: Matrix) -> bool:
    return len(X) > 0 and all(len(r) == len(X) for r in X) and rank(field, X) == len(X)


def nullspace(field: Field, rows: Sequence[Row], ncols: int) -> list[Row]:
    """Basis of {u : r . u = 0 for every row r}, one vector per free column."""
    M, pivots = rref(field, rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        u = [0] * ncols
        u[f] = 1
        for r, pc in enumerate(pivots):
            u[pc] = field.neg(M[r][f])
        basis.append(tuple(u))
    return basis


def normalize(field: Field, u: Row) -> Row:
    """Scale so the first nonzero coordinate is 1."""
    lead = next(x for x in u if x)
    if lead == 1:
        return tuple(u)
    return vec_scale(field, field.inv(lead), u)


def kernel_vector(field: Field, R: Sequence[Row]) -> Row:
    """Normalized spanning vector of the kernel of an (n-1) x n matrix of rank n-1."""
    n = len(R[0]) if R else 1
    basis = nullspace(field, R, n)
    if len(basis) != 1:
        raise RankDeficient("rows are dependent")
    return normalize(field, basis[0])


def mat_mul(field: Field, A: Matrix, B: Matrix) -> Matrix:
    n, m = len(A), len(B[0])
    tick(n * m * len(B))
    cols = list(zip(*B))
    return tuple(tuple(dot(field, A[r], cols[c]) for c in range(m)) for r in range(n))


def mat_inv(field: Field, A: Matrix) -> Matrix:
    n = len(A)
    aug = [tuple(A[r]) + tuple(1 if c == r else 0 for c in range(n)) for r in range(n)]
    M, pivots = rref(field, aug)
    if pivots[:n] != list(range(n)):
        raise RankDeficient("matrix is singular")
    return tuple(tuple(M[r][n:]) for r in range(n))


def scalar_mul(field: Field, c: int, X: Matrix) -> Matrix:
    return tuple(vec_scale(field, c, r) for r in X)


def op_between(field: Field, X: Matrix, Y: Matrix, ops: Iterable[RowOp]) -> RowOp | None:
    """First op in ``ops`` with apply(op, X) == Y, or None."""
    diff = [r for r in range(len(X)) if X[r] != Y[r]]
    if len(diff) != 1:
        return None
    row = diff[0] + 1
    for op in ops:
        if (op.kind == "A" and op.j == row) or (op.kind == "M" and op.i == row):
            if apply(field, op, X) == Y:
                return op
    return None


def all_matrices(q: int, n: int) -> Iterable[Matrix]:
    for flat in product(range(q), repeat=n * n):
        yield tuple(tuple(flat[r * n:(r + 1) * n]) for r in range(n))


def all_invertible(field: Field, n: int) -> list[Matrix]:
    return [X for X in all_matrices(field.q, n) if is_invertible(field, X)]


# --- text formats ---

def format_matrix(X: Matrix) -> str:
    return ";".join(",".join(str(x) for x in row) for row in X)


def parse_matrix(text: str, q: int | None = None) -> Matrix:
    rows = tuple(tuple(int(x) for x in part.split(",")) for part in text.strip().split(";"))
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError(f"not a square matrix: {text!r}")
    if q is not None and any(not 0 <= x < q for r in rows for x in r):
        raise ValueError(f"entry out of range for q={q}: {text!r}")
    return rows


def format_op(op: RowOp) -> str:
    if op.kind == "A":
        return f"A {op.i} {op.j} {op.sign}"
    return f"M {op.i} {op.sign}"


def parse_op(text: str) -> RowOp:
    parts = text.split()
    if len(parts) == 4 and parts[0] == "A" and parts[3] in "+-":
        return add_row(int(parts[1]), int(parts[2]), parts[3])
    if len(parts) == 3 and parts[0] == "M" and parts[2] in "*/":
        return mul_row(int(parts[1]), parts[2])
    raise ValueError(f"bad row operation: {text!r}")
