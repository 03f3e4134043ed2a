"""Exact arithmetic in prime fields GF(p) and their extensions GF(p^m).

Scalars are plain Python integers in ``range(p**m)``: the base-p digits of
the integer are the coefficients of the residue polynomial, constant
coefficient first.  For ``m == 1`` a scalar is the usual residue mod p, and
the embedding GF(p) -> GF(p^m) is the identity on encodings.  Keeping
scalars as small integers lets matrices over any of these fields live in
numpy integer arrays.

Extension moduli are picked deterministically: the monic irreducible of the
requested degree whose coefficient vector (c_{m-1}, ..., c_1, c_0) is
lexicographically smallest, i.e. the candidate with the smallest integer
encoding of its tail.

Fields are immutable; all operations are pure functions of their inputs.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator

import numpy as np

MAX_PRIME = 251

# add/mul lookup tables are materialised only while q*q entries stay cheap
TABLE_MAX_Q = 3200


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# tiny univariate polynomial helpers over GF(p), coefficient lists constant
# term first; used only for modulus search and irreducibility testing
# ---------------------------------------------------------------------------


def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _poly_mulmod(f: list[int], g: list[int], mod: list[int], p: int) -> list[int]:
    res = [0] * (len(f) + len(g) - 1) if f and g else []
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    res[i + j] = (res[i + j] + a * b) % p
    return _poly_rem(res, mod, p)


def _poly_rem(f: list[int], mod: list[int], p: int) -> list[int]:
    f = list(f)
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], p - 2, p)
    while len(f) > dm:
        c = f[-1] % p
        if c:
            c = (c * inv_lead) % p
            off = len(f) - 1 - dm
            for i, b in enumerate(mod):
                f[off + i] = (f[off + i] - c * b) % p
        f.pop()
    return _trim(f)


def _poly_gcd(f: list[int], g: list[int], p: int) -> list[int]:
    f, g = _trim(list(f)), _trim(list(g))
    while g:
        f, g = g, _poly_rem(f, g, p)
    return f


def _x_power_pk(k: int, mod: list[int], p: int) -> list[int]:
    """x^(p^k) reduced mod the given polynomial."""
    res = [0, 1]
    for _ in range(k):
        # res <- res^p by repeated squaring of the exponent p
        acc = [1]
        base = res
        e = p
        while e:
            if e & 1:
                acc = _poly_mulmod(acc, base, mod, p)
            base = _poly_mulmod(base, base, mod, p)
            e >>= 1
        res = acc
    return res


def _minus_x(f: list[int], p: int) -> list[int]:
    out = list(f) + [0] * max(0, 2 - len(f))
    out[1] = (out[1] - 1) % p
    return _trim(out)


def _is_irreducible(mod: list[int], p: int) -> bool:
    m = len(mod) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    # Rabin: x^(p^m) == x mod f, and gcd(x^(p^(m/l)) - x, f) == 1 for primes l | m
    if _minus_x(_x_power_pk(m, mod, p), p):
        return False
    for ell in {d for d in range(2, m + 1) if m % d == 0 and is_prime(d)}:
        diff = _minus_x(_x_power_pk(m // ell, mod, p), p)
        if len(_poly_gcd(diff, mod, p)) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Monic irreducible of degree m over GF(p), coefficients constant-first."""
    if m == 1:
        return (0, 1)
    for tail in range(p**m):
        coeffs = []
        t = tail
        for _ in range(m):
            coeffs.append(t % p)
            t //= p
        mod = coeffs + [1]
        if _is_irreducible(mod, p):
            return tuple(mod)
    raise FieldError(f"no irreducible of degree {m} over GF({p})")  # pragma: no cover


class _Tables:
    __slots__ = ("add", "mul", "neg", "inv")

    def __init__(self, add, mul, neg, inv):
        self.add = add
        self.mul = mul
        self.neg = neg
        self.inv = inv


class Field:
    """GF(p^m) with scalars encoded as integers in range(p^m)."""

    __slots__ = ("p", "m", "q", "modulus", "_red", "_tables", "_tables_built")

    def __init__(self, p: int, m: int = 1, modulus: tuple[int, ...] | None = None):
        if not is_prime(p) or not (2 <= p <= MAX_PRIME):
            raise FieldError(f"characteristic must be a prime in [2, {MAX_PRIME}], got {p}")
        if m < 1:
            raise FieldError(f"extension degree must be >= 1, got {m}")
        self.p = p
        self.m = m
        self.q = p**m
        if m == 1:
            self.modulus = None
        else:
            if modulus is None:
                modulus = smallest_irreducible(p, m)
            modulus = tuple(c % p for c in modulus)
            if len(modulus) != m + 1 or modulus[-1] != 1:
                raise FieldError("modulus must be monic of degree m")
            if not _is_irreducible(list(modulus), p):
                raise FieldError("modulus is not irreducible")
            self.modulus = modulus
        # rows of the reduction table: x^(m+i) mod modulus, i = 0..m-2
        if m > 1:
            rows = []
            cur = [(-c) % p for c in self.modulus[:-1]]  # x^m
            rows.append(tuple(cur))
            for _ in range(m - 2):
                nxt = [0] + cur[:-1]
                carry = cur[-1]
                if carry:
                    for i in range(m):
                        nxt[i] = (nxt[i] + carry * rows[0][i]) % p
                rows.append(tuple(nxt))
                cur = nxt
            self._red = rows
        else:
            self._red = []
        self._tables = None
        self._tables_built = False

    # -- encoding -----------------------------------------------------------

    @property
    def is_prime_field(self) -> bool:
        return self.m == 1

    def encode(self, coeffs) -> int:
        a = 0
        for c in reversed(list(coeffs)):
            a = a * self.p + (c % self.p)
        return a

    def decode(self, a: int) -> list[int]:
        out = []
        for _ in range(self.m):
            out.append(a % self.p)
            a //= self.p
        return out

    # -- scalar arithmetic ---------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.m):
            out += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.m):
            out += ((-a) % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        p = self.p
        da = self.decode(a)
        db = self.decode(b)
        conv = [0] * (2 * self.m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    if y:
                        conv[i + j] = (conv[i + j] + x * y) % p
        for k in range(2 * self.m - 2, self.m - 1, -1):
            c = conv[k]
            if c:
                conv[k] = 0
                row = self._red[k - self.m]
                for i in range(self.m):
                    conv[i] = (conv[i] + c * row[i]) % p
        return self.encode(conv[: self.m])

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.m == 1:
            return pow(a, e, self.p)
        acc = 1
        base = a
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        t = self.tables()
        if t is not None:
            return int(t.inv[a])
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def elements(self) -> range:
        return range(self.q)

    def subfield_degree(self, a: int) -> int:
        """Degree over GF(p) of the subfield generated by a."""
        b = self.frobenius(a)
        d = 1
        while b != a:
            b = self.frobenius(b)
            d += 1
        return d

    # -- lookup tables --------------------------------------------------------

    def tables(self) -> _Tables | None:
        """Vectorised add/mul/neg/inv tables, or None for large fields."""
        if self.m == 1 or self.q > TABLE_MAX_Q:
            return None
        if not self._tables_built:
            self._tables = self._build_tables()
            self._tables_built = True
        return self._tables

    def _build_tables(self) -> _Tables:
        p, m, q = self.p, self.m, self.q
        powers = p ** np.arange(m, dtype=np.int64)
        digits = (np.arange(q, dtype=np.int64)[:, None] // powers[None, :]) % p
        neg = (((-digits) % p) @ powers).astype(np.int32)
        add = np.empty((q, q), dtype=np.int32)
        step = max(1, (1 << 22) // (q * m))
        for lo in range(0, q, step):
            hi = min(q, lo + step)
            block = (digits[lo:hi, None, :] + digits[None, :, :]) % p
            add[lo:hi] = block @ powers
        # multiplication through a discrete-log table on a primitive element
        g = self._find_primitive()
        exp = np.empty(q - 1, dtype=np.int64)
        cur = 1
        for i in range(q - 1):
            exp[i] = cur
            cur = self.mul(cur, g)
        log = np.empty(q, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        mul = np.zeros((q, q), dtype=np.int32)
        idx = (log[1:, None] + log[None, 1:]) % (q - 1)
        mul[1:, 1:] = exp[idx]
        inv = np.zeros(q, dtype=np.int32)
        inv[exp] = exp[(-np.arange(q - 1)) % (q - 1)]
        return _Tables(add, mul.astype(np.int32), neg, inv)

    def _find_primitive(self) -> int:
        n = self.q - 1
        fac = []
        t = n
        d = 2
        while d * d <= t:
            if t % d == 0:
                fac.append(d)
                while t % d == 0:
                    t //= d
            d += 1
        if t > 1:
            fac.append(t)
        for g in range(2, self.q):
            if all(self.pow(g, n // ell) != 1 for ell in fac):
                return g
        raise FieldError("no primitive element found")  # pragma: no cover

    # -- plumbing --------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Field)
            and self.p == other.p
            and self.m == other.m
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.modulus))

    def __repr__(self) -> str:
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m})"


@lru_cache(maxsize=None)
def GF(p: int, m: int = 1) -> Field:
    return Field(p, m)


def frobenius_orbit_reps(field: Field) -> Iterator[int]:
    """One representative per Frobenius orbit of elements of full degree m.

    Representatives are yielded in increasing encoding order; every yielded
    element has minimal polynomial of degree exactly ``field.m`` over GF(p).
    """
    seen = bytearray(field.q)
    for a in range(field.q):
        if seen[a]:
            continue
        orbit = [a]
        b = field.frobenius(a)
        while b != a:
            orbit.append(b)
            b = field.frobenius(b)
        for x in orbit:
            seen[x] = 1
        if len(orbit) == field.m:
            yield a
