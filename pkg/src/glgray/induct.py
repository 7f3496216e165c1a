"""Hamilton paths in G(n, q, T) for bypass T, by induction on n.

An invertible matrix is split as (first n-1 rows, last row).  The first n-1
rows span the hyperplane orthogonal to a line <u>; with u normalised (first
nonzero entry 1) this gives the key ``idx(X)``.  Four nested partitions:

level 4  all matrices, parts (S_u, *) by u; joined along edges A_nj
level 3  (S_u, *), parts (S_u, <v>) by the line of the last row; joined along A_in
level 2  (S_u, <v>) = (S_u, v) x C_{q-1}, the cycle generated by M_n
level 1  (S_u, v) = G(n-1, q, T-n), by deleting column ``lead(u)``

Here j is the smallest out-neighbour and i the smallest in-neighbour of
vertex n in T.  The bases are GL(2, q) for q >= 3 and GL(3, 2).
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache
from itertools import product
from typing import Iterator

from .base2q import gl2q_ham_path, gl32_ham_path
from .gf import Field, make_field
from .gridpaths import ham_path_product_cycle
from .instrument import frame, tick
from .joining import PartitionedView, join
from .matgroup import (
    Matrix,
    Row,
    RowOp,
    apply,
    dot,
    identity,
    is_invertible,
    kernel_vector,
    nullspace,
    ops_set,
    rank,
    vec_add,
    vec_scale,
    vec_sub,
)
from .transitions import TransitionGraph, is_bypass


class UnsupportedCase(ValueError):
    pass


class BadTransition(ValueError):
    pass


class NotInSu(ValueError):
    pass


def idx(field: Field, X: Matrix) -> Row:
    """Normalised u with <first n-1 rows of X> = <u>^perp."""
    return kernel_vector(field, X[:-1])


def lead(u: Row) -> int:
    return next(k for k, x in enumerate(u) if x)


def su_project(field: Field, u: Row, R) -> Matrix:
    """Drop column lead(u) from the (n-1) x n matrix R, giving an element of GL(n-1, q)."""
    i0 = lead(u)
    if any(dot(field, r, u) for r in R):
        raise NotInSu("rows are not orthogonal to u")
    tick(len(R) * len(u))
    return tuple(r[:i0] + r[i0 + 1:] for r in R)


def su_lift(field: Field, u: Row, g: Matrix) -> tuple[Row, ...]:
    """Inverse of :func:`su_project`: refill column lead(u) so each row is orthogonal to u."""
    i0 = lead(u)
    rest = u[:i0] + u[i0 + 1:]
    out = []
    for r in g:
        s = field.neg_t[dot(field, rest, r)]
        out.append(r[:i0] + (s,) + r[i0:])
    tick(len(g) * (len(g) + 1))
    return tuple(out)


def lines(field: Field, n: int) -> Iterator[Row]:
    """Normalised representatives of the lines of F_q^n in lexicographic order."""
    q = field.q
    for p in range(n - 1, -1, -1):
        for tail in product(range(q), repeat=n - 1 - p):
            yield (0,) * p + (1,) + tail


def default_end(field: Field, T: TransitionGraph, x: Matrix) -> Matrix:
    """Endpoint used when none is given: the last generator applied to x."""
    return apply(field, ops_set(T, field)[-1], x)


class FullView(PartitionedView):
    """Level 4: parts (S_u, *)."""

    kind = "Full"

    def __init__(self, g: "GLGraph"):
        self.g, self.field, self.lazy = g, g.field, g.lazy
        self.n = g.n

    def part_order(self):
        return lines(self.field, self.n)

    def num_parts(self):
        q = self.field.q
        return (q ** self.n - 1) // (q - 1)

    def part_of(self, X):
        return idx(self.field, X)

    def part_path(self, u, s, t):
        return join(SuStarView(self.g, u), s, t)

    def outside_neighbors(self, X):
        f, n = self.field, self.n
        for j in self.g.T.out_nbrs(n):
            for s in self.g.signs:
                yield apply(f, RowOp("A", n, j, s), X)

    def cross_edges(self, u, u2):
        yield from conn_edges(self.field, self.n, self.g.j, u, u2)


def conn_edges(field: Field, n: int, j: int, u: Row, u2: Row):
    """Three disjoint edges (X, A_nj X) with X in (S_u, *) and A_nj X in (S_u2, *)."""
    W = nullspace(field, [u, u2], n)  # basis of <u, u2>^perp, dimension n - 2
    ku, ku2 = nullspace(field, [u], n), nullspace(field, [u2], n)
    vu = next(v for v in ku if dot(field, v, u2))
    vu2 = next(v for v in ku2 if dot(field, v, u))
    last = vec_sub(field, vu2, vu)
    bases = []
    if len(W) >= 2:
        r1, r2 = W[0], W[1]
        bases = [
            (list(W), vu, last),
            ([vec_add(field, r1, r2)] + list(W[1:]), vu, last),
            ([r1, vec_add(field, r2, r1)] + list(W[2:]), vu, last),
        ]
    elif field.q >= 4:
        a = field.alpha
        w = W[0]
        bases = [([w], vu, last), ([vec_scale(field, a, w)], vu, last),
                 ([vec_scale(field, field.mul(a, a), w)], vu, last)]
    else:
        # n = 3, q = 3: only two bases (w), (2w) of the line; scale the other rows instead
        w = W[0]
        two = field.neg(1)
        bases = [([w], vu, last), ([vec_scale(field, two, w)], vu, last),
                 ([w], vec_scale(field, two, vu), vec_scale(field, two, last))]
    for B, v, lr in bases:
        rows = list(B)
        rows.insert(j - 1, v)
        X = tuple(rows) + (lr,)
        yield X, apply(field, RowOp("A", n, j, "+"), X)


class SuStarView(PartitionedView):
    """Level 3: (S_u, *) split into classes (S_u, <v>), v normalised by v.u = 1."""

    kind = "ExceptLast"

    def __init__(self, g: "GLGraph", u: Row):
        self.g, self.field, self.lazy, self.u = g, g.field, g.lazy, u
        self.n = g.n
        self.i0 = lead(u)

    def part_order(self):
        f, u, i0, n = self.field, self.u, self.i0, self.n
        for free in product(range(f.q), repeat=n - 1):
            v = list(free[:i0]) + [0] + list(free[i0:])
            s = 0
            for k in range(n):
                if k != i0 and v[k] and u[k]:
                    s = f.add(s, f.mul(u[k], v[k]))
            v[i0] = f.sub(1, s)
            yield tuple(v)

    def num_parts(self):
        return self.field.q ** (self.n - 1)

    def part_of(self, X):
        f = self.field
        c = dot(f, X[-1], self.u)
        return vec_scale(f, f.inv(c), X[-1]) if c != 1 else X[-1]

    def part_path(self, v, s, t):
        return self.g.line_path(self.u, v, s, t)

    def outside_neighbors(self, X):
        f, n = self.field, self.n
        for i in self.g.T.in_nbrs(n):
            for s in self.g.signs:
                yield apply(f, RowOp("A", i, n, s), X)

    def cross_edges(self, v, v2):
        f, n, i = self.field, self.n, self.g.i
        x = vec_sub(f, v2, v)
        # a basis of <u>^perp with x as row i
        basis = [x]
        for w in nullspace(f, [self.u], n):
            if len(basis) == n - 1:
                break
            if rank(f, basis + [w]) == len(basis) + 1:
                basis.append(w)
        others = basis[1:]
        rows = others[: i - 1] + [x] + others[i - 1:]
        pos = [p for p in range(n - 1) if p != i - 1]
        l = pos[0]
        if f.q >= 3:
            variants = [rows[l], vec_scale(f, f.alpha, rows[l]), vec_add(f, rows[l], x)]
        else:
            m = pos[1]
            variants = [rows[l], vec_add(f, rows[l], x), vec_add(f, rows[l], rows[m])]
        for r in variants:
            R = list(rows)
            R[l] = r
            X = tuple(R) + (v,)
            yield X, apply(f, RowOp("A", i, n, "+"), X)


class GLGraph:
    """Hamilton-connected G(n, q, T); ``path(x, y)`` lists all of GL(n, q) from x to y."""

    def __init__(self, field: Field, T: TransitionGraph, lazy: bool = True):
        if not is_bypass(T):
            raise BadTransition(f"{T} is not a bypass transition graph")
        self.field, self.T, self.lazy = field, T, lazy
        self.n = n = T.n
        self.q = field.q
        self.signs = ("+",) if field.q == 2 else ("+", "-")
        self.ops = ops_set(T, field)
        self.sub = None
        if self._inductive():
            self.sub = GLGraph(field, T.remove_last(), lazy)
            self.i = T.in_nbrs(n)[0]
            self.j = T.out_nbrs(n)[0]
            self.sub_ops = self.sub.ops

    def _inductive(self) -> bool:
        return (self.q >= 3 and self.n >= 3) or (self.q == 2 and self.n >= 4)

    def path(self, x: Matrix, y: Matrix):
        f, n = self.field, self.n
        if x == y:
            raise ValueError("endpoints must differ")
        if n == 1 or (n == 2 and self.q == 2):
            gen = self._cycle_walk(x, y)
        elif n == 2:
            gen = gl2q_ham_path(f, x, y, self.lazy)
        elif n == 3 and self.q == 2:
            gen = _base_part(gl32_ham_path(self.T, x, y, self.lazy), x, y)
        else:
            gen = join(FullView(self), x, y)
        return gen if self.lazy else list(gen)

    def _cycle_walk(self, x, y):
        # G is a cycle here; only neighbours on the cycle can be joined
        f = self.field
        nb = [apply(f, op, x) for op in self.ops]
        if y not in nb:
            what = "6-cycle" if self.n == 2 else f"{self.q - 1}-cycle"
            raise UnsupportedCase(f"not Hamilton connected: {what}")
        out = [x]
        if len(set(nb)) == 1:  # a 2-cycle
            return iter([x, y])
        prev, cur = y, x
        while True:
            nxt = next(w for w in (apply(f, op, cur) for op in self.ops) if w != prev and w != cur)
            if nxt == y:
                break
            out.append(nxt)
            prev, cur = cur, nxt
        out.append(y)
        return iter(out)

    def line_path(self, u: Row, v: Row, s: Matrix, t: Matrix):
        """Level 2 and 1: Hamilton s-t path of (S_u, <v>)."""
        f = self.field
        sub = self.sub

        def split(X):
            c = dot(f, X[-1], u)
            return su_project(f, u, X[:-1]), f.dlog(c)

        def base(g1, g2):
            return sub.path(g1, g2)

        def pick(avoid):
            return _bfs_pick(f, self.sub_ops, avoid)

        k = self.q - 1
        vpow = [vec_scale(f, f.power(e), v) for e in range(k)]
        gen = (su_lift(f, u, g) + (vpow[c],) for g, c in ham_path_product_cycle(base, pick, k, split(s), split(t)))
        return gen if self.lazy else list(gen)


def _base_part(it, x, y):
    with frame("BasePart", x, y):
        yield from it


def _bfs_pick(field: Field, ops, avoid):
    """First vertex not in ``avoid`` in breadth-first order from avoid[0]."""
    start = avoid[0]
    seen = {start}
    todo = deque([start])
    while todo:
        X = todo.popleft()
        for op in ops:
            Y = apply(field, op, X)
            if Y in avoid:
                if Y not in seen:
                    seen.add(Y)
                    todo.append(Y)
                continue
            return Y
    raise ValueError("base graph too small")


@lru_cache(maxsize=64)
def graph_for(q: int, T: TransitionGraph, lazy: bool) -> GLGraph:
    return GLGraph(make_field(q), T, lazy)


def check_endpoints(field: Field, n: int, x: Matrix, y: Matrix) -> None:
    for X in (x, y):
        if len(X) != n or any(len(r) != n for r in X) or any(not 0 <= e < field.q for r in X for e in r):
            raise ValueError(f"not an {n}x{n} matrix over F_{field.q}")
        if not is_invertible(field, X):
            raise ValueError("matrix is singular")


def ham_path(n: int, q: int, T: TransitionGraph, x: Matrix | None = None, y: Matrix | None = None) -> list[Matrix]:
    """Batch construction of a Hamilton x-y path of G(n, q, T) as a list of matrices."""
    if T.n != n:
        raise ValueError(f"transition graph has {T.n} vertices, expected {n}")
    field = make_field(q)
    x = identity(n) if x is None else x
    if n == 1 and q == 2:
        return [x]  # the trivial group
    if y is None:
        y = default_end(field, T, x)
    check_endpoints(field, n, x, y)
    return graph_for(q, T, False).path(x, y)
