"""Stitching per-part Hamilton paths into a Hamilton path of the whole graph.

A :class:`PartitionedView` describes a graph whose vertex set is split into
Hamilton-connected parts with at least three disjoint edges between any two
parts and an outside neighbour for every vertex.  :func:`join` walks the
three cases of the construction:

1. endpoints in different parts: visit the parts one after another;
2. same part, two parts in total: leave the part once along a path edge ``ab``
   whose outside neighbours differ, cover the other part, come back;
3. same part, more parts: as in 2, but the excursion is a case-1 walk over
   all remaining parts.

Every "choose" is resolved as the first admissible candidate in the view's
iteration order, so output is deterministic.

In lazy mode the within-part path is suspended, not materialised, during an
excursion: it resumes at the far end of the excursion edge, so every step
costs the same whether or not an excursion happened before it.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Iterator

from .instrument import frame, tick


class CrossEdgeDeficit(RuntimeError):
    pass


class OracleFailure(RuntimeError):
    pass


class PartitionedView:
    """Interface consumed by :func:`join`; subclasses fill in the graph."""

    kind = "Join"
    lazy = True

    def part_order(self) -> Iterable[Hashable]:
        raise NotImplementedError

    def num_parts(self) -> int:
        raise NotImplementedError

    def part_of(self, v) -> Hashable:
        raise NotImplementedError

    def part_path(self, part, s, t) -> Iterable:
        raise NotImplementedError

    def cross_edges(self, pa, pb) -> Iterable[tuple]:
        """Edges (a, b) with a in part pa and b in part pb."""
        raise NotImplementedError

    def outside_neighbors(self, v) -> Iterable:
        raise NotImplementedError


def part_sequence(view: PartitionedView, first, last, skip=None) -> Iterator:
    """``first``, then the canonical order minus first/last/skip, then ``last``."""
    yield first
    for p in view.part_order():
        if p != first and p != last and p != skip:
            yield p
    yield last


def _connector(view, cur, nxt, x_cur, avoid_end):
    for c, d in view.cross_edges(cur, nxt):
        if c != x_cur and d != avoid_end:
            return c, d
    raise CrossEdgeDeficit(f"no usable edge between parts {cur!r} and {nxt!r}")


def chain(view: PartitionedView, x, y, parts: Iterable) -> Iterator:
    """Case 1: traverse ``parts`` in order, from x (in the first) to y (in the last)."""
    it = iter(parts)
    cur = next(it)
    nxt = next(it, None)
    xi = x
    while nxt is not None:
        after = next(it, None)
        c, d = _connector(view, cur, nxt, xi, y if after is None else None)
        yield from _checked(view.part_path(cur, xi, c), xi, c)
        xi, cur, nxt = d, nxt, after
    yield from _checked(view.part_path(cur, xi, y), xi, y)


def _checked(path: Iterable, s, t) -> Iterator:
    first = last = None
    for k, v in enumerate(path):
        if k == 0:
            first = v
            if v != s:
                raise OracleFailure(f"part path starts at {v!r}, expected {s!r}")
        last = v
        tick(1)
        yield v
    if last != t or first is None:
        raise OracleFailure(f"part path ends at {last!r}, expected {t!r}")


def _excursion_pair(view: PartitionedView, a, b, many: bool):
    for a2 in view.outside_neighbors(a):
        for b2 in view.outside_neighbors(b):
            if many:
                if view.part_of(a2) != view.part_of(b2):
                    return a2, b2
            elif a2 != b2:
                return a2, b2
    return None


def _excursion(view: PartitionedView, home, a2, b2, many: bool) -> Iterator:
    if not many:
        return _checked(view.part_path(view.part_of(a2), a2, b2), a2, b2)
    seq = part_sequence(view, view.part_of(a2), view.part_of(b2), skip=home)
    return chain(view, a2, b2, seq)


def join(view: PartitionedView, x, y) -> Iterator:
    """Hamilton x-y path of the partitioned graph."""
    if x == y:
        raise ValueError("endpoints must differ")
    px, py = view.part_of(x), view.part_of(y)
    with frame(view.kind, x, y):
        if px != py:
            yield from chain(view, x, y, part_sequence(view, px, py))
            return
        many = view.num_parts() > 2
        if not view.lazy:
            yield from _join_same_eager(view, px, x, y, many)
        else:
            yield from _join_same_lazy(view, px, x, y, many)


def _join_same_eager(view, home, x, y, many):
    P = list(_checked(view.part_path(home, x, y), x, y))
    for k in range(len(P) - 1):
        pair = _excursion_pair(view, P[k], P[k + 1], many)
        if pair is not None:
            yield from P[: k + 1]
            yield from _excursion(view, home, pair[0], pair[1], many)
            yield from P[k + 1:]
            return
    raise CrossEdgeDeficit("no path edge admits an excursion")


def _join_same_lazy(view, home, x, y, many):
    gen = iter(_checked(view.part_path(home, x, y), x, y))
    a = next(gen)
    yield a
    for b in gen:
        pair = _excursion_pair(view, a, b, many)
        if pair is not None:
            break
        yield b
        a = b
    else:
        raise CrossEdgeDeficit("no path edge admits an excursion")
    # the home path stays suspended at b while the excursion runs
    yield from _excursion(view, home, pair[0], pair[1], many)
    yield b
    yield from gen
