"""Resumable enumeration of a Hamilton path of G(n, q, T), one matrix per call.

The stream drives the same construction as :func:`glgray.induct.ham_path`
through nested generators.  Only the generators on the current branch of
the recursion are alive (plus a suspended home path per pending excursion),
so memory is a stack of frames, not the listing.
Every ``next()`` runs under its own :class:`~glgray.instrument.Tracker`,
which records the elementary operations spent and the live frame depth.
"""

from __future__ import annotations

import time

from .base2q import gl32_table
from .gf import make_field
from .induct import check_endpoints, default_end, graph_for
from .instrument import Tracker, activate
from .matgroup import Matrix, RowOp, group_order, identity, op_between, ops_set
from .transitions import TransitionGraph

END = None


class StreamExhausted(RuntimeError):
    pass


class NoPredecessor(LookupError):
    pass


class PathStream:
    def __init__(self, n: int, q: int, T: TransitionGraph, x: Matrix | None = None, y: Matrix | None = None):
        if T.n != n:
            raise ValueError(f"transition graph has {T.n} vertices, expected {n}")
        t0 = time.perf_counter()
        self.n, self.q, self.T = n, q, T
        self.field = f = make_field(q)
        self.x = identity(n) if x is None else x
        self.ops = ops_set(T, f)
        self.total = group_order(n, q, limit=None)
        if n == 1 and q == 2:
            self.y = self.x
            self._it = iter([self.x])
        else:
            self.y = default_end(f, T, self.x) if y is None else y
            check_endpoints(f, n, self.x, self.y)
            if self.x == self.y:
                raise ValueError("endpoints must differ")
            self._warm()
            self._it = None
        self.tracker = Tracker()
        self.emitted = 0
        self.prev: Matrix | None = None
        self.current: Matrix | None = None
        self.done = False
        self.last_ops = 0
        self.max_ops = 0
        self.max_depth = 0
        self.step_ops: list[int] = []
        self.preprocess_seconds = time.perf_counter() - t0

    def _warm(self):
        # the GL(3, 2) base tables are the only preprocessing
        if self.q == 2 and self.n >= 3:
            T = self.T
            while T.n > 3:
                T = T.remove_last()
            gl32_table(T)

    def _start(self):
        g = graph_for(self.q, self.T, True)
        return iter(g.path(self.x, self.y))

    def next(self):
        """The next matrix, or END once the listing is finished."""
        if self.done:
            raise StreamExhausted("stream already ended")
        tr = self.tracker
        tr.ops = 0
        with activate(tr):
            if self._it is None:
                self._it = self._start()
            try:
                X = next(self._it)
            except StopIteration:
                X = END
            depth = len(tr.frames)
        self.last_ops = tr.ops
        self.step_ops.append(tr.ops)
        self.max_ops = max(self.max_ops, tr.ops)
        self.max_depth = max(self.max_depth, tr.max_depth, depth)
        if X is END:
            self.done = True
            return END
        self.prev, self.current = self.current, X
        self.emitted += 1
        return X

    def emit_delta(self) -> RowOp:
        """Row operation taking the previously emitted matrix to the current one."""
        if self.prev is None:
            raise NoPredecessor("no matrix before the stream head")
        op = op_between(self.field, self.prev, self.current, self.ops)
        assert op is not None
        return op

    def __iter__(self):
        while True:
            X = self.next()
            if X is END:
                return
            yield X


def open_stream(n: int, q: int, T: TransitionGraph, x: Matrix | None = None, y: Matrix | None = None) -> PathStream:
    return PathStream(n, q, T, x, y)


open = open_stream  # noqa: A001 - mirrors the documented operation name
