"""Base cases of the induction: GL(2, q) for q >= 3 and GL(3, 2).

GL(2, q)
--------
H(q) is the component of I in G(2, q) once the "add row 2 to row 1" edges
are dropped.  Its vertices are the lower triangular matrices

    [[a^i, 0], [a^j c, a^j]]        (a = alpha)

written here as triples ``(i, j, c)``.  Row multiplications move i or j by
one, so for fixed c the vertices form the torus V_c = C_{q-1} x C_{q-1}; row
additions 1 -> 2 move between tori: ``(i, j, c) ~ (i, j, c +- a^(i-j))``.
A vertex is blue when i + j is even, red otherwise.

The whole group splits into q + 1 copies of H(q), one per line through the
first row; copy u is the image of H(q) under X -> XA for any A with first row
u, and right multiplication preserves all edge labels.

GL(3, 2)
--------
A Hamilton path from I to every other vertex is found by search once per
transition graph; a path x -> y is the table path I -> y x^-1 translated by x.
"""

from __future__ import annotations

import os
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Iterator

from .gf import Field, make_field
from .gridpaths import ham_path_prism, ham_path_torus
from .instrument import frame, tick
from .joining import PartitionedView, join
from .matgroup import (
    Matrix,
    RowOp,
    apply,
    format_matrix,
    identity,
    mat_inv,
    mat_mul,
    parse_matrix,
    parse_op,
    format_op,
    scalar_mul,
    vec_sub,
)
from .transitions import TransitionGraph

HVertex = tuple[int, int, int]
BLUE, RED = "blue", "red"


class NotInH(ValueError):
    pass


class EqualVertices(ValueError):
    pass


class BadResidue(ValueError):
    pass


class SameComponent(ValueError):
    pass


class SameColor(ValueError):
    pass


class NotStructured(RuntimeError):
    pass


class SearchExhausted(RuntimeError):
    pass


# --- H(q) vertices and colours ---

def h_decode(field: Field, v: HVertex) -> Matrix:
    i, j, c = v
    ai, aj = field.power(i), field.power(j)
    return ((ai, 0), (field.mul(aj, c), aj))


def h_encode(field: Field, X: Matrix) -> HVertex:
    (x00, x01), (x10, x11) = X
    if x01 != 0 or x00 == 0 or x11 == 0:
        raise NotInH(format_matrix(X))
    return field.dlog(x00), field.dlog(x11), field.div(x10, x11)


def h_vertices(field: Field) -> Iterator[HVertex]:
    m = field.q - 1
    for c in range(field.q):
        for i in range(m):
            for j in range(m):
                yield (i, j, c)


def vertex_color(v: HVertex) -> str:
    return BLUE if (v[0] + v[1]) % 2 == 0 else RED


def kbar_color(field: Field, a: int, b: int) -> str:
    """Colour of edge ab of the complete graph on F_q: red iff dlog(a - b) is odd."""
    if a == b:
        raise EqualVertices(f"{a} = {b}")
    return RED if field.dlog(field.sub(a, b)) % 2 else BLUE


def h_neighbors(field: Field, v: HVertex) -> list[HVertex]:
    """Neighbours in H(q): four inside the torus, then the row-addition ones."""
    m = field.q - 1
    i, j, c = v
    out = [((i + 1) % m, j, c), ((i - 1) % m, j, c), (i, (j + 1) % m, c), (i, (j - 1) % m, c)]
    d = field.power(i - j)
    out.append((i, j, field.add(c, d)))
    if field.p != 2:
        out.append((i, j, field.sub(c, d)))
    return out


def h_cross_edges(field: Field, c: int, d: int) -> Iterator[tuple[HVertex, HVertex]]:
    """All edges between V_c and V_d, as (vertex in V_c, vertex in V_d)."""
    m = field.q - 1
    zs = [field.dlog(field.sub(c, d))]
    z2 = field.dlog(field.sub(d, c))
    if z2 != zs[0]:
        zs.append(z2)
    for z in zs:
        for i in range(m):
            yield ((i + z) % m, i, c), ((i + z) % m, i, d)


# --- alternating Hamilton paths of the coloured complete graph ---

def _cycle_vertices(field: Field) -> list[int]:
    """v_i = 1 + a + ... + a^i for i = 0..q-2; consecutive differences are a^(i+1)."""
    out, s = [], 0
    for i in range(field.q - 1):
        s = field.add(s, field.power(i))
        out.append(s)
    return out


def missing_vertex(field: Field) -> int:
    """The one element of F_q not on the cycle: -(a - 1)^-1."""
    return field.neg(field.inv(field.sub(field.alpha, 1)))


def _wheel_path(field: Field, w: int) -> list[int]:
    """Alternating Hamilton path from the hub u to w != u."""
    cyc = _cycle_vertices(field)
    m = len(cyc)
    u = missing_vertex(field)
    i = cyc.index(w)
    nxt = cyc[(i + 1) % m]
    hub = kbar_color(field, u, nxt)
    if kbar_color(field, w, nxt) == hub:
        return [u] + [cyc[(i + 1 + k) % m] for k in range(m)]
    return [u] + [cyc[(i - 1 - k) % m] for k in range(m)]


def alternating_ham_path(field: Field, a: int, b: int, c: str) -> list[int]:
    """Hamilton a-b path of the coloured complete graph, alternating, first edge colour c."""
    if field.q % 4 != 1:
        raise BadResidue(f"q = {field.q} is not 1 mod 4")
    if a == b:
        raise EqualVertices(f"{a} = {b}")
    u = missing_vertex(field)
    # translate so the hub lands on b, then reverse
    sh = field.sub(b, u)
    p = [field.add(x, sh) for x in _wheel_path(field, field.sub(a, sh))][::-1]
    if kbar_color(field, p[0], p[1]) != c:
        sh = field.sub(a, u)
        p = [field.add(x, sh) for x in _wheel_path(field, field.sub(b, sh))]
    tick(field.q)
    assert kbar_color(field, p[0], p[1]) == c
    return p


def is_alternating(field: Field, seq: list[int]) -> bool:
    cols = [kbar_color(field, a, b) for a, b in zip(seq, seq[1:])]
    return all(x != y for x, y in zip(cols, cols[1:]))


# --- blocks: a torus or a torus x interval slab inside one V_c ---

class Block:
    """``kind`` is "full", "i" (i in an interval, j free) or "j" (the reverse)."""

    def __init__(self, m: int, kind: str = "full", start: int = 0, length: int = 0):
        self.m, self.kind, self.start, self.length = m, kind, start % m, length

    def contains(self, i: int, j: int) -> bool:
        if self.kind == "full":
            return True
        k = i if self.kind == "i" else j
        return (k - self.start) % self.m < self.length

    def complement(self) -> "Block":
        return Block(self.m, self.kind, self.start + self.length, self.m - self.length)

    def cells(self) -> Iterator[tuple[int, int]]:
        for i in range(self.m):
            for j in range(self.m):
                if self.contains(i, j):
                    yield i, j

    def path(self, s: tuple[int, int], t: tuple[int, int]) -> list[tuple[int, int]]:
        m = self.m
        if self.kind == "full":
            return ham_path_torus(m, m, s, t)
        st = self.start
        if self.kind == "i":
            p = ham_path_prism(self.length, m, ((s[0] - st) % m, s[1]), ((t[0] - st) % m, t[1]))
            return [((st + r) % m, c) for r, c in p]
        p = ham_path_prism(self.length, m, ((s[1] - st) % m, s[0]), ((t[1] - st) % m, t[0]))
        return [(c, (st + r) % m) for r, c in p]

    def __repr__(self) -> str:
        return f"Block({self.kind}, {self.start}, {self.length})"


def _full_blocks(field: Field) -> dict[int, Block]:
    return {c: Block(field.q - 1) for c in range(field.q)}


def _colored_edge(field, blocks, c, d, color):
    for e, f in h_cross_edges(field, c, d):
        if vertex_color(e) == color and blocks[c].contains(e[0], e[1]) and blocks[d].contains(f[0], f[1]):
            return e, f
    raise NotStructured(f"no {color} edge between blocks {c} and {d}")


def _has_colored_edge(field, blocks, c, d, color) -> bool:
    try:
        _colored_edge(field, blocks, c, d, color)
        return True
    except NotStructured:
        return False


def _block_order(field: Field, blocks: dict[int, Block], a: int, b: int) -> list[int]:
    """Order of the blocks from a to b so that connecting edges can alternate blue, red, ...

    For q = 1 mod 4 all edges between two tori share one colour and the order
    is an alternating path of the coloured complete graph.  For q = 3 mod 4
    both colours usually occur, but a half i-slab facing a half j-slab may
    miss one, so the order is found by a depth-first search that tries
    blocks in ascending order.
    """
    if field.q % 4 == 1:
        return alternating_ham_path(field, a, b, BLUE)
    q = field.q
    order = [a]
    used = {a, b}

    def ok(c, d, k):
        return _has_colored_edge(field, blocks, c, d, BLUE if k % 2 == 0 else RED)

    def rec() -> bool:
        k = len(order) - 1
        if len(order) == q - 1:
            return ok(order[-1], b, k)
        for c in range(q):
            if c not in used and ok(order[-1], c, k):
                used.add(c)
                order.append(c)
                if rec():
                    return True
                order.pop()
                used.discard(c)
        return False

    if not rec():
        raise NotStructured(f"no admissible block order from {a} to {b}")
    return order + [b]


def structured_plan(field: Field, blocks: dict[int, Block], x: HVertex, y: HVertex):
    """Segments (block, s, t) of a Hamilton x-y path through a structured subgraph."""
    if x[2] == y[2]:
        raise SameComponent(f"{x} and {y} both in V_{x[2]}")
    if vertex_color(x) == vertex_color(y):
        raise SameColor(f"{x} and {y} share a colour")
    if vertex_color(x) == BLUE:
        return [(c, t, s) for c, s, t in reversed(structured_plan(field, blocks, y, x))]
    order = _block_order(field, blocks, x[2], y[2])
    plan = []
    cur = x
    for k in range(len(order) - 1):
        color = BLUE if k % 2 == 0 else RED
        e, f = _colored_edge(field, blocks, order[k], order[k + 1], color)
        plan.append((order[k], cur, e))
        cur = f
    plan.append((order[-1], cur, y))
    return plan


def _run_plan(field: Field, blocks: dict[int, Block], plan) -> Iterator[HVertex]:
    for c, s, t in plan:
        p = blocks[c].path((s[0], s[1]), (t[0], t[1]))
        yield from ((i, j, c) for i, j in p)


def structured_ham_path(field: Field, blocks: dict[int, Block], x: HVertex, y: HVertex) -> Iterator[HVertex]:
    plan = structured_plan(field, blocks, x, y)
    with frame("Structured", x, y):
        yield from _run_plan(field, blocks, plan)


# --- H(q) Hamilton connectivity ---

class _HEvenView(PartitionedView):
    """Even q: the tori V_c are odd, hence Hamilton connected; join them."""

    kind = "HJoin"

    def __init__(self, field: Field, lazy: bool = True):
        self.field, self.lazy = field, lazy
        self.m = field.q - 1

    def part_order(self):
        return range(self.field.q)

    def num_parts(self):
        return self.field.q

    def part_of(self, v):
        return v[2]

    def part_path(self, c, s, t):
        return [(i, j, c) for i, j in ham_path_torus(self.m, self.m, s[:2], t[:2])]

    def cross_edges(self, c, d):
        return h_cross_edges(self.field, c, d)

    def outside_neighbors(self, v):
        i, j, c = v
        return [(i, j, self.field.add(c, self.field.power(i - j)))]


_SQUARE = {(0, 0): 0, (1, 0): 1, (1, 1): 2, (0, 1): 3}
_SQUARE_INV = {v: k for k, v in _SQUARE.items()}


def _exit_vertex(field, block, c, color, avoid):
    """First (i, j) of ``block`` in V_c with ``color`` and a row-addition neighbour outside ``avoid``."""
    for i, j in block.cells():
        if vertex_color((i, j, c)) != color:
            continue
        d = field.power(i - j)
        for c2 in (field.add(c, d), field.sub(c, d)):
            if c2 not in avoid:
                return (i, j, c), (i, j, c2)
    raise NotStructured(f"no {color} exit from {block} in V_{c}")


def _slab_axis(x: HVertex, y: HVertex) -> str:
    return "i" if x[0] != y[0] else "j"


def h_ham_path(field: Field, x: HVertex, y: HVertex, lazy: bool = True) -> Iterator[HVertex]:
    """Hamilton x-y path of H(q), q >= 3."""
    q = field.q
    if x == y:
        raise EqualVertices(str(x))
    if q == 3:
        return _h3_path(x, y)
    if q % 2 == 0:
        return join(_HEvenView(field, lazy), x, y)
    return _h_odd(field, x, y)


def _h3_path(x, y):
    # H(3) is C_4 x C_3: the square coordinate is (i, j), the triangle one is c
    def enc(v):
        return _SQUARE[(v[0], v[1])], v[2]

    for s, c in ham_path_torus(4, 3, enc(x), enc(y)):
        i, j = _SQUARE_INV[s]
        yield (i, j, c)


def _h_odd(field: Field, x: HVertex, y: HVertex) -> Iterator[HVertex]:
    m = field.q - 1
    h = m // 2
    a, b = x[2], y[2]
    same_color = vertex_color(x) == vertex_color(y)
    with frame("HOdd", x, y):
        if a != b and not same_color:
            yield from _run_plan(field, _full_blocks(field), structured_plan(field, _full_blocks(field), x, y))
            return
        other = RED if vertex_color(x) == BLUE else BLUE
        if a != b:
            # peel the j-slab of V_a starting at x's column, leave through a third torus
            slab = Block(m, "j", x[1], h)
            yo, xo = _exit_vertex(field, slab, a, other, {a, b})
            blocks = _full_blocks(field)
            blocks[a] = slab.complement()
            plan = structured_plan(field, blocks, xo, y)
            yield from ((i, j, a) for i, j in slab.path(x[:2], yo[:2]))
            yield from _run_plan(field, blocks, plan)
            return
        axis = _slab_axis(x, y)
        k0 = x[0] if axis == "i" else x[1]
        k1 = y[0] if axis == "i" else y[1]
        start = _split_start(m, h, k0, k1)
        s1 = Block(m, axis, start, h)
        if same_color:
            yo, xo = _exit_vertex(field, s1, a, other, {a})
            blocks = _full_blocks(field)
            blocks[a] = s1.complement()
            plan = structured_plan(field, blocks, xo, y)
            yield from ((i, j, a) for i, j in s1.path(x[:2], yo[:2]))
            yield from _run_plan(field, blocks, plan)
            return
        # x, y in V_a with different colours: two slabs, then the rest
        y1, x2 = _exit_vertex(field, s1, a, other, {a})
        c = x2[2]
        axis2 = "j" if axis == "i" else "i"
        s2 = Block(m, axis2, x2[1] if axis2 == "j" else x2[0], h)
        y2, x3 = _exit_vertex(field, s2, c, vertex_color(x), {a, c})
        blocks = _full_blocks(field)
        blocks[a] = s1.complement()
        blocks[c] = s2.complement()
        plan = structured_plan(field, blocks, x3, y)
        yield from ((i, j, a) for i, j in s1.path(x[:2], y1[:2]))
        yield from ((i, j, c) for i, j in s2.path(x2[:2], y2[:2]))
        yield from _run_plan(field, blocks, plan)


def _split_start(m: int, h: int, k0: int, k1: int) -> int:
    """Start of a cyclic interval of length h containing k0 but not k1."""
    for d in range(h):
        st = (k0 - d) % m
        if (k1 - st) % m >= h:
            return st
    raise AssertionError("coordinates coincide")


# --- GL(2, q) ---

def _line_key(field: Field, r: tuple[int, int]) -> tuple[int, int]:
    if r[1] == 0:
        return (1, 0)
    return (field.div(r[0], r[1]), 1)


def _transport(field: Field, u: tuple[int, int]) -> Matrix:
    if u == (1, 0):
        return identity(2)
    return ((u[0], 1), (1, 0))


class GL2View(PartitionedView):
    """G(2, q) split into the q + 1 images of H(q), keyed by the line of the first row."""

    kind = "GL2"

    def __init__(self, field: Field, lazy: bool = True):
        self.field, self.lazy = field, lazy
        q = field.q
        self.keys = [(1, 0)] + [(c, 1) for c in range(q)]
        self.A = {u: _transport(field, u) for u in self.keys}
        self.Ainv = {u: mat_inv(field, A) for u, A in self.A.items()}
        self.ops = [RowOp("A", 2, 1, "+")] + ([RowOp("A", 2, 1, "-")] if field.p != 2 else [])

    def part_order(self):
        return self.keys

    def num_parts(self):
        return len(self.keys)

    def part_of(self, X):
        return _line_key(self.field, X[0])

    def part_path(self, u, s, t):
        f = self.field
        A, Ai = self.A[u], self.Ainv[u]
        hs = h_encode(f, mat_mul(f, s, Ai))
        ht = h_encode(f, mat_mul(f, t, Ai))
        gen = (mat_mul(f, h_decode(f, v), A) for v in h_ham_path(f, hs, ht, self.lazy))
        return gen if self.lazy else list(gen)

    def cross_edges(self, u, u2):
        f = self.field
        d1 = vec_sub(f, u2, u)
        rows = [d1]
        if f.p != 2:
            rows.append(vec_sub(f, u, u2))
        for d in rows:
            for i in range(f.q - 1):
                c = f.power(i)
                yield scalar_mul(f, c, (u, d)), scalar_mul(f, c, (u2, d))

    def outside_neighbors(self, X):
        return [apply(self.field, op, X) for op in self.ops]


def gl2q_ham_path(field: Field, x: Matrix, y: Matrix, lazy: bool = True) -> Iterator[Matrix]:
    if field.q < 3:
        raise ValueError("GL(2, 2) is a 6-cycle")
    return join(GL2View(field, lazy), x, y)


# --- GL(3, 2) ---

CACHE_HEADER = "GL32CACHE v1; T="


def _cache_file(T: TransitionGraph) -> Path | None:
    d = os.environ.get("GLGRAY_CACHE_DIR")
    if not d:
        return None
    tag = "_".join(f"{i}{j}" for i, j in sorted(T.edges))
    return Path(d) / f"gl32_{tag}.txt"


def dump_table(T: TransitionGraph, table: dict) -> str:
    lines = [CACHE_HEADER + ",".join(f"({i},{j})" for i, j in sorted(T.edges))]
    for Y in sorted(table):
        lines.append(format_matrix(Y) + ": " + " / ".join(format_op(op) for op in table[Y]))
    return "\n".join(lines) + "\n"


def load_table(T: TransitionGraph, text: str) -> dict:
    lines = text.splitlines()
    want = CACHE_HEADER + ",".join(f"({i},{j})" for i, j in sorted(T.edges))
    if not lines or lines[0].strip() != want:
        raise ValueError("cache header does not match transition graph")
    table = {}
    for line in lines[1:]:
        if not line.strip():
            continue
        mat, ops = line.split(":", 1)
        table[parse_matrix(mat)] = [parse_op(o) for o in ops.split("/")]
    return table


@lru_cache(maxsize=None)
def gl32_table(T: TransitionGraph) -> dict:
    """Op sequences of Hamilton paths from I to each of the 167 other matrices."""
    from .verify import NotFound, build_cayley_graph, brute_force_ham_path

    path = _cache_file(T)
    if path is not None and path.exists():
        try:
            table = load_table(T, path.read_text())
            if len(table) == 167:
                return table
        except ValueError:
            pass
    field = make_field(2)
    g = build_cayley_graph(3, 2, T)
    adj = [g.neighbors(v) for v in range(len(g.vertices))]
    lab = [{w: op for w, op in nb} for nb in g.adj]
    I = identity(3)
    s = g.index[I]
    table: dict = {}
    for t in range(len(g.vertices)):
        Y = g.vertices[t]
        if t == s or Y in table:
            continue
        try:
            p = brute_force_ham_path(adj, s, t)
        except NotFound as e:
            raise SearchExhausted(str(e)) from None
        ops = [lab[a][b] for a, b in zip(p, p[1:])]
        table[Y] = ops
        # reversing and translating by Y^-1 gives a path I -> Y^-1
        Yi = mat_inv(field, Y)
        if Yi not in table:
            table[Yi] = ops[::-1]
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dump_table(T, table))
    return table


def gl32_ham_path(T: TransitionGraph, x: Matrix, y: Matrix, lazy: bool = True) -> Iterable[Matrix]:
    field = make_field(2)
    target = mat_mul(field, y, mat_inv(field, x))
    ops = gl32_table(T)[target]
    gen = _walk(field, ops, x)
    return gen if lazy else list(gen)


def _walk(field: Field, ops, X: Matrix) -> Iterator[Matrix]:
    yield X
    for op in ops:
        X = apply(field, op, X)
        yield X
