"""Modules over small group-algebra families and their probe points.

A module is given by pairwise-commuting p-nilpotent generator matrices, one
per algebra generator of the family.  Probe points substitute a polynomial
with zero constant term into the generators; the Jordan type of the
resulting nilpotent operator is the local invariant everything else is
built from.

Families:

* ``elementary-abelian``     k[x_1..x_r]/(x_i^p), group-like 1 + x_i
* ``additive-infinitesimal`` k[x_1..x_r]/(x_i^p), primitive x_i
* ``sl2-second-frobenius``   two commuting operators probed by s1*x0 + s0^p*x1
* ``gln-restricted``         the standard module probed by explicit
                             p-nilpotent matrices

The first three share the same commutative local algebra; the Hopf flag
only changes duals and tensor products.  Heller shifts use minimal free
covers, valid because these algebras are local and self-injective.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .fields import GF, Field
from .jordan import JordanType, jordan_type_of_matrix
from .matrix import Matrix
from .poly import Poly

FAMILIES = (
    "elementary-abelian",
    "additive-infinitesimal",
    "sl2-second-frobenius",
    "gln-restricted",
)

# families whose probe algebra is k[x_1..x_r]/(x_i^p)
TRUNCATED_POLYNOMIAL_FAMILIES = (
    "elementary-abelian",
    "additive-infinitesimal",
    "sl2-second-frobenius",
)


class ModRepError(ValueError):
    pass


class GroupMismatch(ModRepError):
    pass


class UnsupportedFamily(ModRepError):
    pass


class NotFlat(ModRepError):
    pass


def default_hopf(family: str) -> str:
    return "multiplicative" if family == "elementary-abelian" else "additive"


@dataclass(frozen=True)
class GroupData:
    family: str
    p: int
    r: int
    hopf: str

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UnsupportedFamily(f"unknown family {self.family!r}")
        if self.hopf not in ("additive", "multiplicative"):
            raise ModRepError(f"unknown Hopf flag {self.hopf!r}")

    @property
    def generator_names(self) -> tuple[str, ...]:
        return tuple(f"x{i}" for i in range(self.r))


def elementary_abelian(p: int, r: int) -> GroupData:
    return GroupData("elementary-abelian", p, r, "multiplicative")


def additive_infinitesimal(p: int, r: int) -> GroupData:
    return GroupData("additive-infinitesimal", p, r, "additive")


def sl2_second_frobenius(p: int) -> GroupData:
    return GroupData("sl2-second-frobenius", p, 2, "additive")


def gln_restricted(p: int, n: int) -> GroupData:
    # the probe points carry explicit matrices; no commuting generator list
    return GroupData("gln-restricted", p, 0, "additive")


class ModuleRep:
    """A module: commuting p-nilpotent generator actions on k^dim."""

    __slots__ = ("group", "field", "dim", "generators")

    def __init__(self, group: GroupData, generators: list[Matrix], dim: int | None = None, field: Field | None = None):
        if generators:
            field = field or generators[0].field
            dim = generators[0].rows if dim is None else dim
        elif dim is None or field is None:
            raise ModRepError("generator-free module needs explicit dim and field")
        if len(generators) != group.r:
            raise ModRepError(f"expected {group.r} generators, got {len(generators)}")
        for g in generators:
            if g.field != field or g.rows != dim or g.cols != dim:
                raise ModRepError("generators must be square over one field, same size")
        self.group = group
        self.field = field
        self.dim = dim
        self.generators = list(generators)

    # -- validation -------------------------------------------------------------

    def validate(self) -> list[str]:
        """Empty list when well formed, else human-readable violations."""
        problems = []
        p = self.group.p
        for i, g in enumerate(self.generators):
            if not g.pow_int(p).is_zero():
                problems.append(f"generator {i} is not {p}-nilpotent")
        for i in range(len(self.generators)):
            for j in range(i + 1, len(self.generators)):
                gi, gj = self.generators[i], self.generators[j]
                if gi @ gj != gj @ gi:
                    problems.append(f"generators {i},{j} do not commute")
        return problems

    def require_valid(self):
        problems = self.validate()
        if problems:
            raise ModRepError("; ".join(problems))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ModuleRep)
            and self.group == other.group
            and self.field == other.field
            and self.dim == other.dim
            and self.generators == other.generators
        )

    def __repr__(self) -> str:
        return f"ModuleRep({self.group.family}, p={self.group.p}, dim={self.dim})"

    # -- serialisation -------------------------------------------------------------

    def to_dict(self) -> dict:
        if self.field.is_prime_field:
            gens = [g.to_lists() for g in self.generators]
        else:
            gens = [
                [[self.field.decode(x) for x in row] for row in g.to_lists()]
                for g in self.generators
            ]
        return {
            "p": self.group.p,
            "ext_degree": self.field.m,
            "family": self.group.family,
            "hopf": self.group.hopf,
            "dim": self.dim,
            "generators": gens,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ModuleRep":
        p = int(data["p"])
        m = int(data.get("ext_degree", 1))
        field = GF(p, m)
        family = data["family"]
        hopf = data.get("hopf", default_hopf(family))
        raw = data["generators"]
        gens = []
        for g in raw:
            if m == 1:
                gens.append(Matrix.from_rows(field, g))
            else:
                rows = [[field.encode(entry) for entry in row] for row in g]
                gens.append(Matrix.from_rows(field, rows))
        group = GroupData(family, p, len(gens), hopf)
        return cls(group, gens, dim=int(data["dim"]), field=field)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def loads(cls, text: str) -> "ModuleRep":
        return cls.from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# probe points
# ---------------------------------------------------------------------------


class PiPoint:
    """A probe point: an algebra map t -> image with zero constant term.

    Three payload forms: a polynomial in the generator symbols (prime-field
    coefficients), a linear coefficient vector of encoded scalars of the
    point's field, or an explicit p-nilpotent matrix for the standard
    matrix family.
    """

    __slots__ = ("field", "group", "image", "lin_coeffs", "matrix", "_flat")

    def __init__(
        self,
        group: GroupData,
        field: Field,
        image: Poly | None = None,
        lin_coeffs: list[int] | None = None,
        matrix: Matrix | None = None,
    ):
        payloads = sum(x is not None for x in (image, lin_coeffs, matrix))
        if payloads != 1:
            raise ModRepError("exactly one of image, lin_coeffs, matrix must be given")
        if image is not None:
            zero_exp = (0,) * len(image.params)
            if zero_exp in image.terms:
                raise ModRepError("probe image must have zero constant term")
            if image.params != group.generator_names:
                raise ModRepError("image variables must match the group's generators")
        if lin_coeffs is not None:
            lin_coeffs = [int(c) for c in lin_coeffs]
            if len(lin_coeffs) != group.r:
                raise ModRepError(f"expected {group.r} linear coefficients")
        self.group = group
        self.field = field
        self.image = image
        self.lin_coeffs = lin_coeffs
        self.matrix = matrix
        self._flat: bool | None = None

    def is_flat(self) -> bool:
        if self._flat is None:
            self._flat = _compute_flat(self)
        return self._flat

    def coords(self) -> tuple[int, ...] | None:
        return tuple(self.lin_coeffs) if self.lin_coeffs is not None else None

    def __repr__(self) -> str:
        if self.image is not None:
            core = str(self.image)
        elif self.lin_coeffs is not None:
            core = ",".join(str(c) for c in self.lin_coeffs)
        else:
            core = "matrix"
        return f"PiPoint({core}; {self.field})"


def linear_pi_point(group: GroupData, field: Field, coeffs) -> PiPoint:
    return PiPoint(group, field, lin_coeffs=list(coeffs))


def _compute_flat(pt: PiPoint) -> bool:
    g = pt.group
    if g.family == "gln-restricted":
        m = pt.matrix
        return m is not None and not m.is_zero() and m.pow_int(g.p).is_zero()
    reg = regular_module(g, pt.field)
    theta_reg = theta(reg, pt)
    # free iff the operator has p^(r-1) blocks of size p on the regular module
    return theta_reg.pow_int(g.p - 1).rank() == g.p ** (g.r - 1)


def theta(m: ModuleRep, pt: PiPoint) -> Matrix:
    """The nilpotent operator of the probe point on the module."""
    if pt.group.p != m.group.p:
        raise GroupMismatch("probe point and module over different characteristics")
    field = pt.field
    if pt.matrix is not None:
        if m.group.family != "gln-restricted":
            raise ModRepError("matrix probe points act on standard matrix modules only")
        if pt.matrix.rows != m.dim:
            raise ModRepError("matrix probe point has wrong size")
        return pt.matrix.lift(field) if pt.matrix.field != field else pt.matrix
    gens = [g.lift(field) if g.field != field else g for g in m.generators]
    if pt.lin_coeffs is not None:
        acc = Matrix.zeros(field, m.dim, m.dim)
        for c, g in zip(pt.lin_coeffs, gens):
            if c:
                acc = acc + g.scalar_mul(c)
        return acc
    image = pt.image
    if len(image.params) != len(gens):
        raise ModRepError("image variables must match the module's generators")
    acc = Matrix.zeros(field, m.dim, m.dim)
    powers: list[list[Matrix]] = [[Matrix.identity(field, m.dim)] for _ in gens]

    def gen_power(i: int, e: int) -> Matrix:
        while len(powers[i]) <= e:
            powers[i].append(powers[i][-1] @ gens[i])
        return powers[i][e]

    for exps, c in image.terms.items():
        term = Matrix.identity(field, m.dim).scalar_mul(c)
        for i, e in enumerate(exps):
            if e:
                term = term @ gen_power(i, e)
        acc = acc + term
    return acc


def jtype_at(m: ModuleRep, pt: PiPoint) -> JordanType:
    """Local Jordan type of the module at a flat probe point."""
    if not pt.is_flat():
        raise NotFlat(f"probe point {pt!r} is not flat")
    return jordan_type_of_matrix(m.group.p, theta(m, pt))


def is_flat(pt: PiPoint, group: GroupData | None = None) -> bool:
    if group is not None and group != pt.group:
        raise GroupMismatch("point carries a different group")
    return pt.is_flat()


# ---------------------------------------------------------------------------
# canonical modules
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _regular_generators(p: int, r: int) -> tuple[Matrix, ...]:
    """Left multiplication by x_i on k[x_1..x_r]/(x_i^p), monomial basis."""
    field = GF(p)
    n = p**r
    mats = []
    exps = list(product(range(p), repeat=r))
    index = {e: k for k, e in enumerate(exps)}
    for i in range(r):
        a = np.zeros((n, n), dtype=np.int64)
        for e, k in index.items():
            if e[i] + 1 < p:
                e2 = list(e)
                e2[i] += 1
                a[index[tuple(e2)], k] = 1
        mats.append(Matrix(field, a, _copy=False))
    return tuple(mats)


def _as_commutative(group: GroupData) -> GroupData:
    if group.family not in TRUNCATED_POLYNOMIAL_FAMILIES:
        raise UnsupportedFamily(
            f"family {group.family!r} has no truncated-polynomial probe algebra"
        )
    return group


def regular_module(group: GroupData, field: Field | None = None) -> ModuleRep:
    """The rank-1 free module of the probe algebra k[x_1..x_r]/(x_i^p)."""
    _as_commutative(group)
    field = field or GF(group.p)
    gens = [g.lift(field) if field.m > 1 else g for g in _regular_generators(group.p, group.r)]
    return ModuleRep(group, list(gens))


def trivial_module(group: GroupData) -> ModuleRep:
    field = GF(group.p)
    return ModuleRep(group, [Matrix.zeros(field, 1, 1) for _ in range(group.r)], dim=1, field=field)


def free_module(group: GroupData, rank: int) -> ModuleRep:
    reg = regular_module(group)
    return direct_sum(*([reg] * rank)) if rank > 1 else reg


# ---------------------------------------------------------------------------
# functors
# ---------------------------------------------------------------------------


def direct_sum(*mods: ModuleRep) -> ModuleRep:
    if not mods:
        raise ModRepError("empty direct sum")
    g0 = mods[0].group
    for m in mods[1:]:
        if m.group != g0 or m.field != mods[0].field:
            raise GroupMismatch("direct sum needs one group and one field")
    gens = [
        Matrix.block_diag([m.generators[i] for m in mods]) for i in range(g0.r)
    ]
    return ModuleRep(g0, gens)


def dual(m: ModuleRep) -> ModuleRep:
    """Linear dual with the contragredient action through the antipode."""
    out = []
    for X in m.generators:
        if m.group.hopf == "additive":
            out.append((-X).transpose())
        else:
            eye = Matrix.identity(m.field, m.dim)
            out.append(((eye + X).inverse() - eye).transpose())
    return ModuleRep(m.group, out, dim=m.dim, field=m.field)


def tensor_module(m: ModuleRep, n: ModuleRep) -> ModuleRep:
    """Tensor product with the diagonal action of the Hopf structure."""
    if m.group != n.group or m.field != n.field:
        raise GroupMismatch("tensor needs one group and one field")
    eye_m = Matrix.identity(m.field, m.dim)
    eye_n = Matrix.identity(n.field, n.dim)
    gens = []
    for X, Y in zip(m.generators, n.generators):
        if m.group.hopf == "additive":
            gens.append(X.kron(eye_n) + eye_m.kron(Y))
        else:
            gens.append((eye_m + X).kron(eye_n + Y) - eye_m.kron(eye_n))
    return ModuleRep(m.group, gens, dim=m.dim * n.dim, field=m.field)


# ---------------------------------------------------------------------------
# submodules, quotients, radicals
# ---------------------------------------------------------------------------


def radical_basis(m: ModuleRep) -> Matrix:
    """Column basis of rad M = sum of generator images."""
    if not m.generators:
        return Matrix.zeros(m.field, m.dim, 0)
    stacked = Matrix.hstack(m.generators)
    R, pivots = stacked.rref()
    cols = [stacked.a[:, c] for c in pivots]
    out = np.array(cols, dtype=np.int64).T if cols else np.zeros((m.dim, 0), dtype=np.int64)
    return Matrix(m.field, out.reshape(m.dim, len(cols)), _copy=False)


def head_dim(m: ModuleRep) -> int:
    return m.dim - radical_basis(m).cols


def submodule(m: ModuleRep, basis: Matrix) -> ModuleRep:
    """Module structure on an invariant subspace, in the given basis."""
    gens = []
    for X in m.generators:
        sol = basis.solve(X @ basis)
        if sol is None:
            raise ModRepError("subspace is not invariant")
        gens.append(sol)
    return ModuleRep(m.group, gens, dim=basis.cols, field=m.field)


def quotient_module(m: ModuleRep, basis: Matrix) -> tuple[ModuleRep, Matrix]:
    """Quotient by an invariant subspace; returns (module, projection map).

    The complement is the set of coordinates away from the pivot rows of the
    subspace basis, so the construction is deterministic.
    """
    n = m.dim
    k = basis.cols
    if k == 0:
        return m, Matrix.identity(m.field, n)
    R, pivots = basis.transpose().rref()
    pivot_rows = sorted(pivots)
    free_rows = [i for i in range(n) if i not in set(pivot_rows)]
    # change of basis T = [subspace basis | complement standard vectors]
    comp = np.zeros((n, len(free_rows)), dtype=np.int64)
    for j, i in enumerate(free_rows):
        comp[i, j] = 1
    T = Matrix.hstack([basis, Matrix(m.field, comp, _copy=False)])
    Tinv = T.inverse()
    proj = Matrix(m.field, Tinv.a[k:, :], _copy=False)
    gens = []
    for X in m.generators:
        full = Tinv @ X @ T
        gens.append(Matrix(m.field, full.a[k:, k:], _copy=False))
    q = ModuleRep(m.group, gens, dim=n - k, field=m.field)
    return q, proj


# ---------------------------------------------------------------------------
# Heller shifts
# ---------------------------------------------------------------------------


class OmegaData:
    """Minimal free cover P -> M with its kernel, kept for homological use."""

    __slots__ = ("module", "covered", "cover_gens", "cover_map", "kernel_basis", "head_lifts", "free_rank")

    def __init__(self, module, covered, cover_gens, cover_map, kernel_basis, head_lifts, free_rank):
        self.module = module
        self.covered = covered
        self.cover_gens = cover_gens
        self.cover_map = cover_map
        self.kernel_basis = kernel_basis
        self.head_lifts = head_lifts
        self.free_rank = free_rank


def omega_with_data(m: ModuleRep) -> OmegaData:
    """Kernel of the minimal free cover, with the cover data retained."""
    _as_commutative(m.group)
    field = m.field
    p, r = m.group.p, m.group.r
    rad = radical_basis(m)
    # head lifts: standard vectors on the non-pivot coordinates of rad M
    R, pivots = rad.transpose().rref()
    free_rows = [i for i in range(m.dim) if i not in set(pivots)]
    s = len(free_rows)
    if s == 0:
        raise ModRepError("zero module has no minimal cover")
    lifts = np.zeros((m.dim, s), dtype=np.int64)
    for j, i in enumerate(free_rows):
        lifts[i, j] = 1
    head_lifts = Matrix(field, lifts, _copy=False)
    reg = [g.lift(field) if g.field != field else g for g in _regular_generators(p, r)]
    n_free = s * (p**r)
    eye_s = Matrix.identity(field, s)
    cover_gens = [eye_s.kron(g) for g in reg]
    # cover map: basis (copy i, monomial e) maps to X^e . m_i
    exps = list(product(range(p), repeat=r))
    mono: dict[tuple, Matrix] = {}
    def monomial_action(e: tuple) -> Matrix:
        if e in mono:
            return mono[e]
        if not any(e):
            out = Matrix.identity(field, m.dim)
        else:
            i = next(k for k, v in enumerate(e) if v)
            e2 = list(e)
            e2[i] -= 1
            out = m.generators[i] @ monomial_action(tuple(e2))
        mono[e] = out
        return out
    cols = np.zeros((m.dim, n_free), dtype=np.int64)
    for i in range(s):
        target = head_lifts.a[:, i]
        tv = Matrix(field, target.reshape(m.dim, 1), _copy=False)
        for k, e in enumerate(exps):
            col = monomial_action(e) @ tv
            cols[:, i * (p**r) + k] = col.a[:, 0]
    cover = Matrix(field, cols, _copy=False)
    ker = cover.kernel_basis()
    big = ModuleRep(m.group, cover_gens, dim=n_free, field=field)
    om = submodule(big, ker)
    return OmegaData(om, m, cover_gens, cover, ker, head_lifts, s)


def omega(m: ModuleRep) -> ModuleRep:
    return omega_with_data(m).module


def omega_inverse(m: ModuleRep) -> ModuleRep:
    return dual(omega(dual(m)))


def omega_iterated(m: ModuleRep, n: int) -> ModuleRep:
    """Omega^n for any integer n (negative uses the inverse shift)."""
    cur = m
    for _ in range(abs(n)):
        cur = omega(cur) if n > 0 else omega_inverse(cur)
    return cur
