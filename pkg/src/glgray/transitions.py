"""Transition graphs: which row may be added to which.

Vertices are 1..n; an edge ``(i, j)`` allows adding/subtracting row i to/from
row j.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from itertools import product

from .matgroup import RowOp


class NotStronglyConnected(ValueError):
    pass


@dataclass(frozen=True)
class TransitionGraph:
    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset(self.edges))
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"self-loop at {i}")
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"edge {(i, j)} outside 1..{self.n}")

    def out_nbrs(self, i: int) -> list[int]:
        return sorted(j for a, j in self.edges if a == i)

    def in_nbrs(self, j: int) -> list[int]:
        return sorted(i for i, b in self.edges if b == j)

    def remove_last(self) -> "TransitionGraph":
        """T - n."""
        n = self.n
        return TransitionGraph(n - 1, frozenset((i, j) for i, j in self.edges if i != n and j != n))

    def __str__(self) -> str:
        es = ",".join(f"({i},{j})" for i, j in sorted(self.edges))
        return f"n={self.n}; edges={es}"


def path_graph(n: int) -> TransitionGraph:
    """Bidirectional path 1 <-> 2 <-> ... <-> n."""
    es = set()
    for i in range(1, n):
        es |= {(i, i + 1), (i + 1, i)}
    return TransitionGraph(n, frozenset(es))


def complete_graph(n: int) -> TransitionGraph:
    return TransitionGraph(n, frozenset((i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j))


def star_in_out(n: int) -> TransitionGraph:
    """Every vertex k >= 2 attached to vertex 1 in both directions."""
    es = set()
    for k in range(2, n + 1):
        es |= {(1, k), (k, 1)}
    return TransitionGraph(n, frozenset(es))


PRESETS = {"path": path_graph, "complete": complete_graph, "star-in-out": star_in_out}

_EDGE_RE = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def parse_graph(text: str, n: int | None = None) -> TransitionGraph:
    """Parse a preset name (needs ``n``) or ``"n=<n>; edges=(i,j),..."``."""
    text = text.strip()
    if text in PRESETS:
        if n is None:
            raise ValueError(f"preset {text!r} needs n")
        return PRESETS[text](n)
    m = re.fullmatch(r"n\s*=\s*(\d+)\s*;\s*edges\s*=\s*(.*)", text)
    if not m:
        raise ValueError(f"cannot parse transition graph {text!r}")
    gn = int(m.group(1))
    es = frozenset((int(a), int(b)) for a, b in _EDGE_RE.findall(m.group(2)))
    if n is not None and gn != n:
        raise ValueError(f"graph has n={gn}, expected {n}")
    return TransitionGraph(gn, es)


def is_bypass(T: TransitionGraph) -> bool:
    while T.n > 1:
        n = T.n
        if not any(j == n and i < n for i, j in T.edges):
            return False
        if not any(i == n and j < n for i, j in T.edges):
            return False
        T = T.remove_last()
    return True


def _reach(n: int, adj: dict[int, list[int]], start: int) -> set[int]:
    seen = {start}
    todo = [start]
    while todo:
        v = todo.pop()
        for w in adj.get(v, ()):
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def is_strongly_connected(T: TransitionGraph) -> bool:
    if T.n <= 1:
        return True
    fwd: dict[int, list[int]] = {}
    bwd: dict[int, list[int]] = {}
    for i, j in T.edges:
        fwd.setdefault(i, []).append(j)
        bwd.setdefault(j, []).append(i)
    return len(_reach(T.n, fwd, 1)) == T.n and len(_reach(T.n, bwd, 1)) == T.n


def shortest_path(T: TransitionGraph, a: int, b: int) -> list[int] | None:
    """BFS path a -> b, neighbours explored in increasing order."""
    prev = {a: None}
    todo = deque([a])
    while todo:
        v = todo.popleft()
        if v == b:
            break
        for w in T.out_nbrs(v):
            if w not in prev:
                prev[w] = v
                todo.append(w)
    if b not in prev:
        return None
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return path[::-1]


def simulate_row_add(T: TransitionGraph, a: int, b: int, sign: str = "+") -> list[RowOp]:
    """Row operations along edges of T whose composite is ``r_b <- sign*r_a + r_b``.

    Uses a shortest directed path v_1 = a, ..., v_k = b.  The v_2 row is
    restored in the second phase with the opposite of ``sign``.
    """
    if a == b:
        raise ValueError("a and b must differ")
    if not is_strongly_connected(T):
        raise NotStronglyConnected(str(T))
    v = shortest_path(T, a, b)
    k = len(v)
    if k == 2:
        return [RowOp("A", a, b, sign)]
    neg = "-" if sign == "+" else "+"

    def A(x: int, s: str) -> RowOp:  # row v_{x+1} += s * row v_x  (1-based x)
        return RowOp("A", v[x - 1], v[x], s)

    seq = [A(1, sign)]
    seq += [A(i, "+") for i in range(2, k)]
    seq += [A(i, "-") for i in range(k - 2, 1, -1)]
    seq.append(A(1, neg))
    seq += [A(i, "+") for i in range(2, k - 1)]
    seq.append(A(k - 1, "-"))
    seq += [A(i, "-") for i in range(k - 2, 1, -1)]
    return seq


def all_digraphs(n: int):
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    for mask in product((0, 1), repeat=len(pairs)):
        yield TransitionGraph(n, frozenset(p for p, m in zip(pairs, mask) if m))


def enumerate_bypass_graphs(n: int, minimal: bool = True):
    """Bypass graphs on 1..n.

    With ``minimal`` every added vertex k gets exactly one in-edge (i, k) and
    one out-edge (k, j); otherwise all edge sets passing :func:`is_bypass`.
    """
    if not minimal:
        for T in all_digraphs(n):
            if is_bypass(T):
                yield T
        return
    if n == 1:
        yield TransitionGraph(1, frozenset())
        return
    for base in enumerate_bypass_graphs(n - 1, True):
        for i in range(1, n):
            for j in range(1, n):
                yield TransitionGraph(n, base.edges | {(i, n), (n, j)})
