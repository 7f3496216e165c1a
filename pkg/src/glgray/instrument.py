"""Operation counting and frame tracking for delay measurements.

Hot paths call :func:`tick` with the number of elementary operations they
perform (field operations, grid steps, table reads).  Recursive path
generators register a :class:`Frame` for as long as they are alive.  Both
are no-ops unless a :class:`Tracker` is active, which a stream activates for
the duration of each ``next()`` call.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any


@dataclass
class Frame:
    kind: str
    x: Any = None
    y: Any = None
    info: dict = field(default_factory=dict)


class Tracker:
    def __init__(self) -> None:
        self.ops = 0
        self.frames: list[Frame] = []
        self.max_depth = 0


_active: Tracker | None = None


def tick(k: int = 1) -> None:
    if _active is not None:
        _active.ops += k


@contextmanager
def frame(kind: str, x=None, y=None, **info):
    """Register a frame while the enclosing generator is alive."""
    t = _active
    if t is None:
        yield None
        return
    f = Frame(kind, x, y, info)
    t.frames.append(f)
    if len(t.frames) > t.max_depth:
        t.max_depth = len(t.frames)
    try:
        yield f
    finally:
        # the generator may be finalized while a different tracker is active
        for k in range(len(t.frames) - 1, -1, -1):
            if t.frames[k] is f:
                del t.frames[k]
                break


@contextmanager
def activate(tracker: Tracker):
    global _active
    prev = _active
    _active = tracker
    try:
        yield tracker
    finally:
        _active = prev


def counting():
    return activate(Tracker())


def current() -> Tracker | None:
    return _active
