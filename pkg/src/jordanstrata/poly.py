"""Multivariate polynomials over GF(p) and symbolic rank of polynomial matrices.

Polynomials are sparse dicts from exponent tuples to nonzero residues mod p.
Two exact routes to the rank of a matrix over the rational function field
GF(p)(l1..ln) are provided:

* fraction-free (Bareiss) elimination, pivoting on a lowest-total-degree
  nonzero entry, which never leaves GF(p)[l1..ln]; and

* a deterministic evaluation certificate: the matrix is specialised at
  elements of GF(p^e) whose minimal polynomials are distinct irreducibles of
  degree e.  If a minor of bounded degree vanished at more such points than
  its degree allows, it would be the zero polynomial, so the maximum
  evaluated rank is certified exact once enough points are seen.

The two routes agree everywhere both are feasible; the certificate is what
makes large one-parameter pencils affordable.
"""

from __future__ import annotations

import itertools
from typing import Callable, Sequence

import numpy as np

from .fields import GF, Field, frobenius_orbit_reps, TABLE_MAX_Q
from .matrix import Matrix

# hard guard for minor enumeration; beyond this the ideal is not materialised
MINOR_COUNT_CAP = 20000

# matrices at most this wide go through Bareiss by default
BAREISS_DIM_CAP = 24


class PolyError(ValueError):
    pass


class ComputationTooLarge(PolyError):
    pass


Exponent = tuple[int, ...]


def _deglex_key(e: Exponent) -> tuple:
    return (sum(e), e)


class Poly:
    """Sparse multivariate polynomial over GF(p) in named parameters."""

    __slots__ = ("p", "params", "terms")

    def __init__(self, p: int, params: tuple[str, ...], terms: dict[Exponent, int]):
        self.p = p
        self.params = params
        clean = {}
        for e, c in terms.items():
            c %= p
            if c:
                clean[tuple(e)] = c
        self.terms = clean

    # -- constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, p: int, params: tuple[str, ...]) -> "Poly":
        return cls(p, params, {})

    @classmethod
    def const(cls, p: int, params: tuple[str, ...], c: int) -> "Poly":
        return cls(p, params, {(0,) * len(params): c})

    @classmethod
    def variable(cls, p: int, params: tuple[str, ...], i: int) -> "Poly":
        e = [0] * len(params)
        e[i] = 1
        return cls(p, params, {tuple(e): 1})

    # -- queries -----------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def homogeneous_degree(self) -> int | None:
        """Common total degree of all terms, or None if mixed or zero."""
        degs = {sum(e) for e in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def leading(self) -> tuple[Exponent, int]:
        e = max(self.terms, key=_deglex_key)
        return e, self.terms[e]

    # -- arithmetic -----------------------------------------------------------------

    def _check(self, other: "Poly"):
        if self.p != other.p or self.params != other.params:
            raise PolyError("polynomials over different rings")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = (terms.get(e, 0) + c) % self.p
        return Poly(self.p, self.params, terms)

    def __neg__(self) -> "Poly":
        return Poly(self.p, self.params, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        out: dict[Exponent, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = (out.get(e, 0) + c1 * c2) % self.p
        return Poly(self.p, self.params, out)

    def scale(self, c: int) -> "Poly":
        return Poly(self.p, self.params, {e: k * c for e, k in self.terms.items()})

    def pow(self, n: int) -> "Poly":
        acc = Poly.const(self.p, self.params, 1)
        for _ in range(n):
            acc = acc * self
        return acc

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        _, c = self.leading()
        return self.scale(pow(c, self.p - 2, self.p))

    def evaluate(self, field: Field, values: Sequence[int]) -> int:
        """Exact value at a tuple of encoded scalars of an extension of GF(p)."""
        if field.p != self.p:
            raise PolyError("evaluation field has wrong characteristic")
        if len(values) != len(self.params):
            raise PolyError("wrong number of values")
        maxdeg = [0] * len(self.params)
        for e in self.terms:
            for i, d in enumerate(e):
                maxdeg[i] = max(maxdeg[i], d)
        pows = []
        for v, dmax in zip(values, maxdeg):
            row = [1]
            for _ in range(dmax):
                row.append(field.mul(row[-1], v))
            pows.append(row)
        acc = 0
        for e, c in self.terms.items():
            t = c % self.p
            for i, d in enumerate(e):
                if d:
                    t = field.mul(t, pows[i][d])
            acc = field.add(acc, t)
        return acc

    # -- plumbing ----------------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Poly)
            and self.p == other.p
            and self.params == other.params
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.p, self.params, tuple(sorted(self.terms.items()))))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_deglex_key, reverse=True):
            c = self.terms[e]
            factors = []
            if c != 1 or not any(e):
                factors.append(str(c))
            for name, d in zip(self.params, e):
                if d == 1:
                    factors.append(name)
                elif d > 1:
                    factors.append(f"{name}^{d}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    __repr__ = __str__


def exact_div(f: Poly, g: Poly) -> Poly:
    """Quotient f/g when g divides f exactly; raises otherwise."""
    if g.is_zero():
        raise PolyError("division by zero polynomial")
    p = f.p
    quo: dict[Exponent, int] = {}
    ge, gc = g.leading()
    gc_inv = pow(gc, p - 2, p)
    rem = f
    while not rem.is_zero():
        re, rc = rem.leading()
        e = tuple(a - b for a, b in zip(re, ge))
        if any(d < 0 for d in e):
            raise PolyError("inexact polynomial division")
        c = (rc * gc_inv) % p
        quo[e] = c
        rem = rem - Poly(p, f.params, {e: c}) * g
    return Poly(p, f.params, quo)


class PolyMatrix:
    """Rectangular matrix with Poly entries, all over one parameter list."""

    __slots__ = ("p", "params", "entries")

    def __init__(self, p: int, params: tuple[str, ...], entries: Sequence[Sequence[Poly]]):
        self.p = p
        self.params = tuple(params)
        rows = []
        for row in entries:
            for q in row:
                if q.p != p or q.params != self.params:
                    raise PolyError("entry over a different ring")
            rows.append(tuple(row))
        self.entries = tuple(rows)

    @classmethod
    def from_scalar(cls, m: Matrix, params: tuple[str, ...]) -> "PolyMatrix":
        if not m.field.is_prime_field:
            raise PolyError("scalar lift only from prime fields")
        p = m.field.p
        zero = (0,) * len(params)
        ent = [
            [Poly(p, params, {zero: int(x)} if x else {}) for x in row]
            for row in m.a
        ]
        return cls(p, params, ent)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        ent = [
            [a + b for a, b in zip(r1, r2)]
            for r1, r2 in zip(self.entries, other.entries)
        ]
        return PolyMatrix(self.p, self.params, ent)

    def scale(self, q: Poly) -> "PolyMatrix":
        return PolyMatrix(self.p, self.params, [[q * x for x in row] for row in self.entries])

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise PolyError("shape mismatch")
        zero = Poly.zero(self.p, self.params)
        cols_other = list(zip(*other.entries))
        out = []
        for row in self.entries:
            orow = []
            for col in cols_other:
                acc = zero
                for a, b in zip(row, col):
                    if a.terms and b.terms:
                        acc = acc + a * b
                orow.append(acc)
            out.append(orow)
        return PolyMatrix(self.p, self.params, out)

    def pow_int(self, e: int) -> "PolyMatrix":
        if self.rows != self.cols:
            raise PolyError("power of non-square matrix")
        n = self.rows
        one = Poly.const(self.p, self.params, 1)
        zero = Poly.zero(self.p, self.params)
        acc = PolyMatrix(self.p, self.params, [[one if i == j else zero for j in range(n)] for i in range(n)])
        for _ in range(e):
            acc = acc @ self
        return acc

    def evaluate(self, field: Field, values: Sequence[int]) -> Matrix:
        out = np.zeros((self.rows, self.cols), dtype=np.int64)
        for i, row in enumerate(self.entries):
            for j, q in enumerate(row):
                if q.terms:
                    out[i, j] = q.evaluate(field, values)
        return Matrix(field, out, _copy=False)

    def max_entry_degree(self) -> int:
        return max((q.total_degree() for row in self.entries for q in row), default=-1)

    def common_homogeneous_degree(self) -> int | None:
        """Degree shared by every nonzero entry, if all are homogeneous."""
        deg = None
        for row in self.entries:
            for q in row:
                if q.is_zero():
                    continue
                d = q.homogeneous_degree()
                if d is None:
                    return None
                if deg is None:
                    deg = d
                elif d != deg:
                    return None
        return deg

    def normalize_exponent_gcds(self) -> "PolyMatrix":
        """Divide each variable's exponents by their common gcd.

        Replacing l^g by a fresh variable embeds the entries into the same
        rational function field, so ranks and minor zero-sets over field
        points of the original family are unchanged.
        """
        import math

        n = len(self.params)
        gcds = [0] * n
        for row in self.entries:
            for q in row:
                for e in q.terms:
                    for i, d in enumerate(e):
                        if d:
                            gcds[i] = math.gcd(gcds[i], d)
        if all(g in (0, 1) for g in gcds):
            return self
        gcds = [g if g else 1 for g in gcds]
        ent = [
            [
                Poly(
                    self.p,
                    self.params,
                    {tuple(d // g for d, g in zip(e, gcds)): c for e, c in q.terms.items()},
                )
                for q in row
            ]
            for row in self.entries
        ]
        return PolyMatrix(self.p, self.params, ent)


# ---------------------------------------------------------------------------
# fraction-free elimination
# ---------------------------------------------------------------------------


def _bareiss(pm: PolyMatrix, *, want_det: bool) -> tuple[int, Poly | None]:
    p, params = pm.p, pm.params
    A = [list(row) for row in pm.entries]
    nr, nc = pm.rows, pm.cols
    prev = Poly.const(p, params, 1)
    sign = 1
    r = 0
    for _ in range(min(nr, nc)):
        pivot = None
        best = None
        for i in range(r, nr):
            for j in range(r, nc):
                if A[i][j].is_zero():
                    continue
                key = (A[i][j].total_degree(), i, j)
                if best is None or key < best:
                    best = key
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        if pi != r:
            A[pi], A[r] = A[r], A[pi]
            sign = -sign
        if pj != r:
            for row in A:
                row[pj], row[r] = row[r], row[pj]
            sign = -sign
        piv = A[r][r]
        for i in range(r + 1, nr):
            for j in range(r + 1, nc):
                num = A[i][j] * piv - A[i][r] * A[r][j]
                A[i][j] = exact_div(num, prev)
            A[i][r] = Poly.zero(p, params)
        prev = piv
        r += 1
    if not want_det:
        return r, None
    if r < min(nr, nc):
        return r, Poly.zero(p, params)
    det = prev if sign == 1 else -prev
    return r, det


def bareiss_rank(pm: PolyMatrix) -> int:
    return _bareiss(pm, want_det=False)[0]


def bareiss_det(pm: PolyMatrix) -> Poly:
    if pm.rows != pm.cols:
        raise PolyError("determinant of non-square matrix")
    if pm.rows == 0:
        return Poly.const(pm.p, pm.params, 1)
    return _bareiss(pm, want_det=True)[1]


def minors_ideal(pm: PolyMatrix, size: int, *, cap: int = MINOR_COUNT_CAP) -> list[Poly]:
    """All size x size minors, zero polynomials and duplicates removed.

    Minors are normalised to monic form (the zero set is unchanged) and
    returned sorted by their canonical string, so output is deterministic.
    """
    if size < 1 or size > min(pm.rows, pm.cols):
        raise PolyError(f"minor size {size} out of range for {pm.rows}x{pm.cols}")
    import math

    count = math.comb(pm.rows, size) * math.comb(pm.cols, size)
    if count > cap:
        raise ComputationTooLarge(
            f"{count} minors of size {size} exceed the cap of {cap}"
        )
    seen = set()
    out = []
    for ri in itertools.combinations(range(pm.rows), size):
        for ci in itertools.combinations(range(pm.cols), size):
            sub = PolyMatrix(pm.p, pm.params, [[pm.entries[i][j] for j in ci] for i in ri])
            d = bareiss_det(sub).monic()
            if d.is_zero():
                continue
            key = tuple(sorted(d.terms.items()))
            if key not in seen:
                seen.add(key)
                out.append(d)
    out.sort(key=str)
    return out


# ---------------------------------------------------------------------------
# deterministic evaluation certificate
# ---------------------------------------------------------------------------


def certificate_extension_degree(p: int) -> int:
    """Largest e with p^e within the lookup-table budget (at least 2)."""
    e = 2
    while p ** (e + 1) <= TABLE_MAX_Q:
        e += 1
    return e


def certified_generic_rank(
    p: int,
    evaluate_at: Callable[[Field, int], Matrix],
    minor_degree_bound: Callable[[int], int],
    *,
    rank_ceiling: int | None = None,
    ext_degree: int | None = None,
) -> int:
    """Certified rank over GF(p)(s) of a univariate specialisation family.

    ``evaluate_at(field, s)`` must return the matrix at the point s, and
    ``minor_degree_bound(r)`` must bound the s-degree of every (r+1)-minor.
    Each sample point is a Frobenius-orbit representative of full degree e,
    so a nonzero minor of degree D can vanish on at most D // e of them.
    ``rank_ceiling`` allows an early exit once the structural maximum is hit.
    """
    e = ext_degree or certificate_extension_degree(p)
    field = GF(p, e)
    reps = frobenius_orbit_reps(field)
    ranks: list[int] = []
    r_obs = 0
    while len(ranks) * e <= minor_degree_bound(r_obs):
        if rank_ceiling is not None and r_obs >= rank_ceiling:
            break
        try:
            s = next(reps)
        except StopIteration:  # pragma: no cover - would need a tiny field
            raise ComputationTooLarge(
                f"not enough degree-{e} points over GF({p}^{e}) for the certificate"
            )
        ranks.append(evaluate_at(field, s).rank())
        r_obs = max(r_obs, ranks[-1])
    return r_obs


def symbolic_rank(pm: PolyMatrix) -> int:
    """Rank of the matrix over the rational function field GF(p)(params).

    Equals the maximum rank over all evaluations of the parameters in all
    field extensions.  Small matrices go through fraction-free elimination;
    larger ones use the deterministic evaluation certificate, after reducing
    to one variable by a degree-preserving chart or Kronecker substitution.
    """
    if len(pm.params) < 1:
        raise PolyError("symbolic rank needs at least one parameter")
    if pm.rows == 0 or pm.cols == 0:
        return 0
    norm = pm.normalize_exponent_gcds()
    if max(norm.rows, norm.cols) <= BAREISS_DIM_CAP:
        return bareiss_rank(norm)
    return _certified_rank_of_polymatrix(norm)


def _certified_rank_of_polymatrix(pm: PolyMatrix) -> int:
    p = pm.p
    n = len(pm.params)
    d = max(pm.max_entry_degree(), 0)
    rmax = min(pm.rows, pm.cols)
    homog = pm.common_homogeneous_degree() is not None
    # chart: drop one variable when entries are jointly homogeneous
    active = list(range(n - 1)) if homog and n >= 2 else list(range(n))
    fixed_one = n - 1 if homog and n >= 2 else None
    if len(active) == 0:
        # all entries constant after the chart; evaluate once
        F = GF(p)
        vals = [1] * n
        return pm.evaluate(F, vals).rank()
    K = rmax * d + 1  # Kronecker stride; injective on monomials of a minor
    strides = {v: K**k for k, v in enumerate(active)}

    def evaluate_at(field: Field, s: int) -> Matrix:
        vals = []
        for v in range(n):
            if v == fixed_one:
                vals.append(1)
            else:
                vals.append(field.pow(s, strides[v]))
        return pm.evaluate(field, vals)

    worst_stride = K ** (len(active) - 1)

    def minor_degree_bound(r: int) -> int:
        return min(r + 1, rmax) * d * worst_stride

    return certified_generic_rank(p, evaluate_at, minor_degree_bound, rank_ceiling=rmax)
