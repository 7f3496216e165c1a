"""Finite fields F_q for prime powers q.

Elements are plain ints in ``[0, q)``; the integer ``sum c_i p**i`` encodes the
polynomial ``sum c_i x**i`` over F_p.  A :class:`Field` carries a fixed
multiplicative generator ``alpha`` and exp/log tables built from it.
"""

from __future__ import annotations

from functools import lru_cache

MAX_ORDER = 1 << 16
_TABLE_LIMIT = 256


class NotAPrimePower(ValueError):
    pass


class DivisionByZero(ZeroDivisionError):
    pass


class DlogOfZero(ValueError):
    pass


def factor_prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, k)`` with ``q == p**k``; raise NotAPrimePower otherwise."""
    if q < 2:
        raise NotAPrimePower(f"{q} is not a prime power")
    p = 2
    while p * p <= q and q % p:
        p += 1
    if q % p:
        p = q
    k = 0
    r = q
    while r % p == 0:
        r //= p
        k += 1
    if r != 1:
        raise NotAPrimePower(f"{q} is not a prime power")
    return p, k


def _prime_factors(m: int) -> list[int]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


# Polynomials over F_p are coefficient lists, low degree first, no trailing zeros.

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def _poly_mulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    return _poly_mod(prod, m, p)


def _monic_polys(p: int, deg: int):
    """Monic polynomials of degree ``deg``, lexicographically by coefficients high-to-low."""
    n = p**deg
    for r in range(n):
        low = []
        for _ in range(deg):
            low.append(r % p)
            r //= p
        # the most significant base-p digit of r is the x**(deg-1) coefficient
        yield low + [1]


def is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(poly) - 1
    if deg <= 0:
        return False
    for d in range(1, deg // 2 + 1):
        for f in _monic_polys(p, d):
            if not _poly_mod(poly, f, p):
                return False
    return True


def smallest_irreducible(p: int, k: int) -> list[int]:
    for cand in _monic_polys(p, k):
        if is_irreducible(cand, p):
            return cand
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class Field:
    """The field F_q with canonical modulus and generator."""

    def __init__(self, q: int):
        if q > MAX_ORDER:
            raise ValueError(f"q={q} exceeds supported maximum {MAX_ORDER}")
        p, k = factor_prime_power(q)
        self.q, self.p, self.k = q, p, k
        self.modulus = tuple(smallest_irreducible(p, k)) if k > 1 else (0, 1)
        self._build_add()
        self.alpha = self._find_generator()
        self._build_exp_log()
        if q <= _TABLE_LIMIT:
            self.mul_t = [[self._mul_slow(a, b) for b in range(q)] for a in range(q)]
        else:
            self.mul_t = None

    # --- encoding helpers ---
    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return _trim(out)

    def _from_digits(self, ds: list[int]) -> int:
        r = 0
        for c in reversed(ds):
            r = r * self.p + c
        return r

    def _build_add(self) -> None:
        q, p = self.q, self.p
        if self.k == 1:
            self.neg_t = [(-a) % p for a in range(q)]
        else:
            self.neg_t = [self._from_digits([(-c) % p for c in self._digits(a)]) for a in range(q)]
        if q <= _TABLE_LIMIT:
            self.add_t = [[self._add_slow(a, b) for b in range(q)] for a in range(q)]
        else:
            self.add_t = None

    def _add_slow(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        p = self.p
        r, place = 0, 1
        while a or b:
            r += ((a % p + b % p) % p) * place
            a //= p
            b //= p
            place *= p
        return r

    def _mul_slow(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        prod = _poly_mulmod(self._digits(a), self._digits(b), list(self.modulus), self.p)
        return self._from_digits(prod)

    def _pow_slow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._mul_slow(r, a)
            a = self._mul_slow(a, a)
            e >>= 1
        return r

    def _find_generator(self) -> int:
        q = self.q
        if q == 2:
            return 1
        rs = _prime_factors(q - 1)
        for g in range(2, q):
            if all(self._pow_slow(g, (q - 1) // r) != 1 for r in rs):
                return g
        raise AssertionError("no generator")  # pragma: no cover

    def _build_exp_log(self) -> None:
        q = self.q
        self.exp_t = [0] * (q - 1)
        self.log_t = [-1] * q
        x = 1
        for e in range(q - 1):
            self.exp_t[e] = x
            self.log_t[x] = e
            x = self._mul_slow(x, self.alpha)
        assert x == 1

    # --- public arithmetic ---
    def add(self, a: int, b: int) -> int:
        if self.add_t is not None:
            return self.add_t[a][b]
        return self._add_slow(a, b)

    def neg(self, a: int) -> int:
        return self.neg_t[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg_t[b])

    def mul(self, a: int, b: int) -> int:
        if self.mul_t is not None:
            return self.mul_t[a][b]
        if a == 0 or b == 0:
            return 0
        return self.exp_t[(self.log_t[a] + self.log_t[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("0 has no inverse")
        return self.exp_t[(-self.log_t[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def power(self, e: int) -> int:
        """alpha**e for any integer e."""
        return self.exp_t[e % (self.q - 1)]

    def dlog(self, x: int) -> int:
        if x == 0:
            raise DlogOfZero("dlog of 0 is undefined")
        return self.log_t[x]

    @property
    def alpha_inv(self) -> int:
        return self.inv(self.alpha)

    def elements(self) -> range:
        return range(self.q)

    def descriptor(self) -> str:
        mod = ",".join(str(c) for c in self.modulus)
        return f"q={self.p}^{self.k};mod={mod};alpha={self.alpha}"

    def __repr__(self) -> str:
        return f"Field({self.descriptor()})"


@lru_cache(maxsize=None)
def make_field(q: int) -> Field:
    return Field(q)


def generator(field: Field) -> int:
    return field.alpha


def dlog(field: Field, x: int) -> int:
    return field.dlog(x)


def field_add(field: Field, a: int, b: int) -> int:
    return field.add(a, b)


def field_sub(field: Field, a: int, b: int) -> int:
    return field.sub(a, b)


def field_mul(field: Field, a: int, b: int) -> int:
    return field.mul(a, b)


def field_inv(field: Field, a: int) -> int:
    return field.inv(a)
