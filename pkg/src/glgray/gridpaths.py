"""Hamilton paths in the product graphs P_k x C_m, C_m x C_n and G x C_k.

Grid vertices are coordinate tuples.  In ``P_k x C_m`` a vertex is ``(r, c)``
with ``0 <= r < k`` on the path factor and ``c`` taken mod ``m`` on the cycle
factor.  The prism and torus constructors return lists; the product with a
cycle is a generator so that its base paths can be streamed.
"""

from __future__ import annotations

from typing import Callable, Hashable, Iterable, Iterator, Sequence

from .instrument import frame, tick

GridVertex = tuple[int, int]


class ParityViolation(ValueError):
    pass


class BaseTooSmall(ValueError):
    pass


def _cycle_path(m: int, r: int, c0: int, c1: int) -> list[GridVertex]:
    """Hamilton path of the cycle {r} x C_m between adjacent c0, c1 (long way round)."""
    step = -1 if (c1 - c0) % m == 1 else 1
    if m > 2 and (c1 - c0) % m not in (1, m - 1):
        raise ValueError("endpoints on a cycle must be adjacent")
    return [(r, (c0 + step * i) % m) for i in range(m)]


def _prism2_normal(m: int, r: int, d: int) -> list[GridVertex]:
    """P_2 x C_m path from (0, 0) to (r, d) where r + d is odd."""
    path = [(0, 0)]
    # columns d+1, ..., m-1, 0 travelled backwards on row 0, forwards on row 1
    arc = [(d + 1 + i) % m for i in range(m - d)]
    arc = arc[:-1]  # drop the trailing column 0, already the start
    path += [(0, c) for c in reversed(arc)]
    path += [(1, c) for c in arc]
    path.append((1, 0))
    # snake through columns 1..d starting on row 1
    row = 1
    for c in range(1, d + 1):
        path.append((row, c))
        row ^= 1
        path.append((row, c))
    assert path[-1] == (r, d), (m, r, d, path)
    return path


def _prism2(m: int, s: GridVertex, t: GridVertex) -> list[GridVertex]:
    rs, cs = s
    r, d = t[0] ^ rs, (t[1] - cs) % m
    flip = False
    if (r + d) % 2 == 0:
        if m % 2 == 0:
            raise ParityViolation(f"P_2 x C_{m}: {s} and {t} share a colour")
        d = (m - d) % m
        flip = True
    tick(2 * m)
    out = []
    for rr, cc in _prism2_normal(m, r, d):
        if flip:
            cc = -cc
        out.append((rr ^ rs, (cc + cs) % m))
    return out


def _prism(k: int, m: int, s: GridVertex, t: GridVertex) -> list[GridVertex]:
    if k == 1:
        return _cycle_path(m, 0, s[1], t[1])
    if k == 2:
        return _prism2(m, s, t)
    if s[0] > t[0]:
        return _prism(k, m, t, s)[::-1]
    last = k - 1
    if s[0] == 0 and t[0] == last:
        # peel row k-1: walk it from t to a neighbour t', enter row k-2 below t'
        ct = t[1]
        tp = (last, (ct + 1) % m)
        tpp = (last - 1, tp[1])
        rest = _prism(k - 1, m, s, tpp)
        tail = _cycle_path(m, last, tp[1], ct)
        tick(len(tail))
        return rest + tail
    if t[0] < last:
        rest = _prism(k - 1, m, s, t)
        for p in range(len(rest) - 1):
            a, b = rest[p], rest[p + 1]
            if a[0] == last - 1 and b[0] == last - 1:
                break
        else:  # pragma: no cover - impossible for m >= 3
            raise AssertionError("no edge on row k-2")
        detour = _cycle_path(m, last, a[1], b[1])
        tick(len(rest) + len(detour))
        return rest[: p + 1] + detour + rest[p + 1:]
    # t on the last row, s strictly inside: mirror the rows
    mir = lambda v: (last - v[0], v[1])  # noqa: E731
    path = _prism(k, m, mir(t), mir(s))
    return [mir(v) for v in reversed(path)]


def check_prism_endpoints(k: int, m: int, s: GridVertex, t: GridVertex) -> None:
    if s == t:
        raise ValueError("endpoints must differ")
    for r, c in (s, t):
        if not (0 <= r < k and 0 <= c < m):
            raise ValueError(f"vertex {(r, c)} outside P_{k} x C_{m}")
    if m % 2 == 0 and (sum(s) - sum(t)) % 2 == 0:
        raise ParityViolation(f"P_{k} x C_{m} is bipartite; {s} and {t} share a colour")
    if k == 1 and (s[1] - t[1]) % m not in (1, m - 1):
        raise ValueError("P_1 x C_m is a cycle; endpoints must be adjacent")


def ham_path_prism(k: int, m: int, s: GridVertex, t: GridVertex) -> list[GridVertex]:
    """Hamilton s-t path in P_k x C_m (m >= 3).

    Laceable for even m, Hamilton connected for odd m (k >= 2).
    """
    if m < 3:
        raise ValueError("cycle factor needs length >= 3")
    check_prism_endpoints(k, m, s, t)
    return _prism(k, m, s, t)


def ham_path_torus(m: int, n: int, s: GridVertex, t: GridVertex) -> list[GridVertex]:
    """Hamilton s-t path in C_m x C_n using the spanning prism P_m x C_n or P_n x C_m."""
    if m < 2 or n < 2 or max(m, n) < 3:
        raise ValueError("torus factors must be >= 2 with one >= 3")
    if s == t:
        raise ValueError("endpoints must differ")
    if m % 2 == 0 and n % 2 == 0 and (sum(s) - sum(t)) % 2 == 0:
        raise ParityViolation(f"C_{m} x C_{n} is bipartite; {s} and {t} share a colour")
    if n >= 3 and (n % 2 == 1 or m % 2 == 0):
        return _prism(m, n, s, t)
    sw = lambda v: (v[1], v[0])  # noqa: E731
    return [sw(v) for v in _prism(n, m, sw(s), sw(t))]


def ham_path_product_cycle(
    base_path: Callable[[Hashable, Hashable], Iterable],
    pick: Callable[[Sequence], Hashable],
    k: int,
    s: tuple,
    t: tuple,
) -> Iterator[tuple]:
    """Hamilton s-t path in G x C_k, vertices ``(g, c)`` with ``c`` mod k.

    ``base_path(a, b)`` yields a Hamilton a-b path of the Hamilton-connected
    base G; ``pick(avoid)`` returns a base vertex not in ``avoid``.  Copies
    from s's copy up to t's copy are chained first; the remaining copies are
    each spliced in at the last edge of the previous copy's segment, so only
    one base path is ever open at a time.
    """
    (gs, cs), (gt, ct) = s, t
    if k == 1:
        yield from ((g, 0) for g in base_path(gs, gt))
        return
    with frame("ProductCycle", s, t, k=k):
        j = (ct - cs) % k
        x = gs
        for off in range(j):
            y = pick((x, gt) if off == j - 1 else (x,))
            c = (cs + off) % k
            yield from ((g, c) for g in base_path(x, y))
            x = y
        if j == k - 1:
            yield from ((g, ct) for g in base_path(x, gt))
            return
        # copies j, ..., k-1: emit each path but its last vertex gt, whose
        # copies are emitted at the very end walking back along the cycle
        start = x
        for off in range(j, k):
            c = (cs + off) % k
            prev = penult = None
            for g in base_path(start, gt):
                if prev is not None:
                    yield (prev, c)
                penult, prev = prev, g
            assert prev == gt and penult is not None
            start = penult
        for off in range(k - 1, j - 1, -1):
            yield (gt, (cs + off) % k)
