"""Dense exact matrices over GF(p^m).

Entries are stored as encoded scalars (see :mod:`jordanstrata.fields`) in an
immutable numpy int64 array.  Three elimination engines sit behind one
interface: vectorised residue arithmetic for prime fields, vectorised
lookup-table arithmetic for small extensions, and a plain scalar fallback
for large extensions.  All results are exact.

Matrices are immutable after construction and safe to share across workers.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .fields import Field


class MatrixError(ValueError):
    pass


class Matrix:
    __slots__ = ("field", "a")

    def __init__(self, field: Field, a: np.ndarray, *, _copy: bool = True):
        if a.ndim != 2:
            raise MatrixError("matrix data must be 2-dimensional")
        arr = np.array(a, dtype=np.int64, copy=_copy)
        if arr.size and (arr.min() < 0 or arr.max() >= field.q):
            raise MatrixError("entries must be encoded scalars in range(q)")
        arr.flags.writeable = False
        self.field = field
        self.a = arr

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence[int]]) -> "Matrix":
        arr = np.array(rows, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if field.is_prime_field:
            arr %= field.p
        return cls(field, arr)

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64), _copy=False)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, np.eye(n, dtype=np.int64), _copy=False)

    @classmethod
    def block_diag(cls, blocks: Sequence["Matrix"]) -> "Matrix":
        if not blocks:
            raise MatrixError("need at least one block")
        field = blocks[0].field
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        out = np.zeros((n, m), dtype=np.int64)
        i = j = 0
        for b in blocks:
            if b.field != field:
                raise MatrixError("blocks over different fields")
            out[i : i + b.rows, j : j + b.cols] = b.a
            i += b.rows
            j += b.cols
        return cls(field, out, _copy=False)

    @classmethod
    def hstack(cls, mats: Sequence["Matrix"]) -> "Matrix":
        field = mats[0].field
        return cls(field, np.hstack([m.a for m in mats]), _copy=False)

    @classmethod
    def vstack(cls, mats: Sequence["Matrix"]) -> "Matrix":
        field = mats[0].field
        return cls(field, np.vstack([m.a for m in mats]), _copy=False)

    # -- basic shape ------------------------------------------------------------

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    def is_zero(self) -> bool:
        return not self.a.any()

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.a.shape == other.a.shape
            and bool((self.a == other.a).all())
        )

    def __hash__(self):
        return hash((self.field, self.a.shape, self.a.tobytes()))

    def __repr__(self) -> str:
        return f"Matrix({self.field}, {self.rows}x{self.cols})"

    def to_lists(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.a]

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.a.T.copy(), _copy=False)

    def column(self, j: int) -> np.ndarray:
        return self.a[:, j].copy()

    def submatrix(self, row_idx, col_idx) -> "Matrix":
        return Matrix(self.field, self.a[np.ix_(row_idx, col_idx)], _copy=False)

    def lift(self, field: Field) -> "Matrix":
        """Reinterpret a prime-field matrix inside an extension of the same p."""
        if field == self.field:
            return self
        if not self.field.is_prime_field or field.p != self.field.p:
            raise MatrixError("can only lift from GF(p) into GF(p^m)")
        return Matrix(field, self.a, _copy=False)

    # -- arithmetic ----------------------------------------------------------------

    def _binop_check(self, other: "Matrix"):
        if self.field != other.field:
            raise MatrixError("field mismatch")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._binop_check(other)
        f = self.field
        if f.is_prime_field:
            return Matrix(f, (self.a + other.a) % f.p, _copy=False)
        t = f.tables()
        if t is not None:
            return Matrix(f, t.add[self.a, other.a].astype(np.int64), _copy=False)
        out = [[f.add(int(x), int(y)) for x, y in zip(r1, r2)] for r1, r2 in zip(self.a, other.a)]
        return Matrix(f, np.array(out, dtype=np.int64).reshape(self.a.shape), _copy=False)

    def __neg__(self) -> "Matrix":
        f = self.field
        if f.is_prime_field:
            return Matrix(f, (-self.a) % f.p, _copy=False)
        t = f.tables()
        if t is not None:
            return Matrix(f, t.neg[self.a].astype(np.int64), _copy=False)
        out = [[f.neg(int(x)) for x in row] for row in self.a]
        return Matrix(f, np.array(out, dtype=np.int64).reshape(self.a.shape), _copy=False)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scalar_mul(self, c: int) -> "Matrix":
        f = self.field
        if f.is_prime_field:
            return Matrix(f, (self.a * (c % f.p)) % f.p, _copy=False)
        t = f.tables()
        if t is not None:
            return Matrix(f, t.mul[c, self.a].astype(np.int64), _copy=False)
        out = [[f.mul(c, int(x)) for x in row] for row in self.a]
        return Matrix(f, np.array(out, dtype=np.int64).reshape(self.a.shape), _copy=False)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._binop_check(other)
        if self.cols != other.rows:
            raise MatrixError("shape mismatch in product")
        f = self.field
        if self.cols == 0 or self.rows == 0 or other.cols == 0:
            return Matrix.zeros(f, self.rows, other.cols)
        if f.is_prime_field:
            return Matrix(f, (self.a @ other.a) % f.p, _copy=False)
        t = f.tables()
        if t is not None:
            prod = t.mul[self.a[:, :, None], other.a[None, :, :]]
            acc = prod[:, 0, :].astype(np.int64)
            for k in range(1, self.cols):
                acc = t.add[acc, prod[:, k, :]].astype(np.int64)
            return Matrix(f, acc, _copy=False)
        out = np.zeros((self.rows, other.cols), dtype=np.int64)
        for i in range(self.rows):
            for j in range(other.cols):
                s = 0
                for k in range(self.cols):
                    s = f.add(s, f.mul(int(self.a[i, k]), int(other.a[k, j])))
                out[i, j] = s
        return Matrix(f, out, _copy=False)

    def kron(self, other: "Matrix") -> "Matrix":
        self._binop_check(other)
        f = self.field
        if f.is_prime_field:
            return Matrix(f, np.kron(self.a, other.a) % f.p, _copy=False)
        t = f.tables()
        if t is not None:
            big = t.mul[self.a[:, None, :, None], other.a[None, :, None, :]]
            out = big.reshape(self.rows * other.rows, self.cols * other.cols)
            return Matrix(f, out.astype(np.int64), _copy=False)
        out = np.zeros((self.rows * other.rows, self.cols * other.cols), dtype=np.int64)
        for i in range(self.rows):
            for j in range(self.cols):
                c = int(self.a[i, j])
                if c:
                    blk = other.scalar_mul(c).a
                    out[
                        i * other.rows : (i + 1) * other.rows,
                        j * other.cols : (j + 1) * other.cols,
                    ] = blk
        return Matrix(f, out, _copy=False)

    def pow_int(self, e: int) -> "Matrix":
        if not self.is_square():
            raise MatrixError("power of a non-square matrix")
        if e < 0:
            raise MatrixError("negative power")
        acc = Matrix.identity(self.field, self.rows)
        for _ in range(e):
            acc = acc @ self
        return acc

    # -- elimination -------------------------------------------------------------

    def rref(self) -> tuple[np.ndarray, list[int]]:
        """Reduced row echelon form and the pivot column list."""
        f = self.field
        if f.is_prime_field:
            return _rref_modp(self.a, f.p)
        t = f.tables()
        if t is not None:
            return _rref_table(self.a, t)
        return _rref_generic(self.a, f)

    def rank(self) -> int:
        if self.a.size == 0:
            return 0
        f = self.field
        if f.is_prime_field:
            return _rank_modp(self.a, f.p)
        t = f.tables()
        if t is not None:
            return _rank_table(self.a, t)
        return len(self.rref()[1])

    def kernel_basis(self) -> "Matrix":
        """Basis of the right null space, one column per basis vector.

        Free coordinates are set to 1 one at a time, in increasing column
        order, so the basis is canonical.
        """
        f = self.field
        n = self.cols
        R, pivots = self.rref()
        pivset = set(pivots)
        free = [c for c in range(n) if c not in pivset]
        out = np.zeros((n, len(free)), dtype=np.int64)
        for k, fc in enumerate(free):
            out[fc, k] = 1
            for i, pc in enumerate(pivots):
                out[pc, k] = f.neg(int(R[i, fc]))
        return Matrix(f, out, _copy=False)

    def solve(self, rhs: "Matrix") -> "Matrix | None":
        """One exact solution of self @ X = rhs, or None if inconsistent."""
        self._binop_check(rhs)
        if rhs.rows != self.rows:
            raise MatrixError("shape mismatch in solve")
        n = self.cols
        aug = Matrix.hstack([self, rhs])
        R, pivots = aug.rref()
        if any(pc >= n for pc in pivots):
            return None
        out = np.zeros((n, rhs.cols), dtype=np.int64)
        for i, pc in enumerate(pivots):
            out[pc] = R[i, n:]
        return Matrix(self.field, out, _copy=False)

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise MatrixError("inverse of non-square matrix")
        sol = self.solve(Matrix.identity(self.field, self.rows))
        if sol is None or self.rank() != self.rows:
            raise MatrixError("matrix is singular")
        return sol

    def rank_chain(self, j_max: int) -> list[int]:
        """Ranks of self^j for j = 1..j_max; trailing zeros once nilpotency bites."""
        out = []
        power = self
        for _ in range(j_max):
            r = power.rank()
            out.append(r)
            if r == 0:
                break
            power = power @ self
        out.extend([0] * (j_max - len(out)))
        return out


# ---------------------------------------------------------------------------
# elimination engines
# ---------------------------------------------------------------------------


def _rank_modp(a: np.ndarray, p: int) -> int:
    # forward elimination only; cheaper than full rref when just counting pivots
    A = np.array(a, dtype=np.int64) % p
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        below = r + 1 + np.nonzero(A[r + 1 :, c])[0]
        if below.size:
            factors = (A[below, c] * inv) % p
            A[below, c:] = (A[below, c:] - np.outer(factors, A[r, c:])) % p
        r += 1
    return r


def _rank_table(a: np.ndarray, t) -> int:
    A = np.array(a, dtype=np.int64)
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = int(t.inv[A[r, c]])
        below = r + 1 + np.nonzero(A[r + 1 :, c])[0]
        if below.size:
            factors = t.mul[inv, A[below, c]]
            delta = t.mul[t.neg[factors][:, None], A[r, c:][None, :]]
            A[below, c:] = t.add[A[below, c:], delta]
        r += 1
    return r


def _rref_modp(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    A = np.array(a, dtype=np.int64) % p
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r] = (A[r] * inv) % p
        others = np.nonzero(A[:, c])[0]
        others = others[others != r]
        if others.size:
            A[others] = (A[others] - np.outer(A[others, c], A[r])) % p
        pivots.append(c)
        r += 1
    return A, pivots


def _rref_table(a: np.ndarray, t) -> tuple[np.ndarray, list[int]]:
    A = np.array(a, dtype=np.int64)
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = int(t.inv[A[r, c]])
        A[r] = t.mul[inv, A[r]]
        others = np.nonzero(A[:, c])[0]
        others = others[others != r]
        if others.size:
            delta = t.mul[t.neg[A[others, c]][:, None], A[r][None, :]]
            A[others] = t.add[A[others], delta]
        pivots.append(c)
        r += 1
    return A, pivots


def _rref_generic(a: np.ndarray, f: Field) -> tuple[np.ndarray, list[int]]:
    A = [[int(x) for x in row] for row in a]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pr = next((i for i in range(r, rows) if A[i][c]), None)
        if pr is None:
            continue
        A[r], A[pr] = A[pr], A[r]
        inv = f.inv(A[r][c])
        A[r] = [f.mul(inv, x) for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                fac = A[i][c]
                A[i] = [f.sub(x, f.mul(fac, y)) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return np.array(A, dtype=np.int64).reshape(rows, cols), pivots
