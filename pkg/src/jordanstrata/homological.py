"""Cohomology classes as stable maps out of Heller shifts, and their loci.

A degree-n class on base N with values in M is a module map
Omega^n(N) -> M taken modulo maps that extend to the minimal free cover of
Omega^(n-1)(N); extending to the cover is the same as factoring through a
free module, so the quotient is the stable hom group.  Extensions are
realised as pushouts along the inclusion Omega(Y) -> P(Y), and all
triviality questions are decided by exact rank comparisons on the
extension module, never by attempting explicit splittings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product

import numpy as np

from .fields import GF
from .jordan import JordanType
from .matrix import Matrix
from .modrep import (
    ModRepError,
    ModuleRep,
    OmegaData,
    PiPoint,
    _regular_generators,
    direct_sum,
    omega_iterated,
    omega_with_data,
    quotient_module,
    submodule,
    theta,
    trivial_module,
)
from .strata import FamilyAnalysis, PiFamily, StrataError


class HomologicalError(ValueError):
    pass


class NotConstantRank(HomologicalError):
    pass


@dataclass
class CohomClass:
    """A class in degree ``degree`` on ``base`` with coefficients in ``target``.

    ``source_data`` is the minimal-cover record of Omega^(degree-1)(base);
    its kernel is the source module Omega^degree(base), and ``hom`` is the
    representing map from that kernel to the target.
    """

    degree: int
    base: ModuleRep
    target: ModuleRep
    source_data: OmegaData
    hom: Matrix

    @property
    def source(self) -> ModuleRep:
        return self.source_data.module

    def __post_init__(self):
        src = self.source
        if self.hom.rows != self.target.dim or self.hom.cols != src.dim:
            raise HomologicalError("hom matrix has the wrong shape")
        for Xs, Xt in zip(src.generators, self.target.generators):
            if Xt @ self.hom != self.hom @ Xs:
                raise HomologicalError("hom does not intertwine the generator actions")

    def is_zero(self) -> bool:
        return self.hom.is_zero()

    def scale(self, c: int) -> "CohomClass":
        return CohomClass(self.degree, self.base, self.target, self.source_data, self.hom.scalar_mul(c))

    def __add__(self, other: "CohomClass") -> "CohomClass":
        if self.source_data is not other.source_data or self.target is not other.target:
            if self.source.dim != other.source.dim or self.target.dim != other.target.dim:
                raise HomologicalError("classes live in different hom groups")
        return CohomClass(self.degree, self.base, self.target, self.source_data, self.hom + other.hom)

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "base": self.base.to_dict(),
            "target": self.target.to_dict(),
            "hom": self.hom.to_lists(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# stable hom bases
# ---------------------------------------------------------------------------


def _vec_kernel_of_intertwiners(src: ModuleRep, target: ModuleRep) -> Matrix:
    """Kernel basis of the intertwining conditions, hom matrices vectorised row-major."""
    t, o = target.dim, src.dim
    field = target.field
    eye_t = Matrix.identity(field, t)
    eye_o = Matrix.identity(field, o)
    blocks = []
    for Xt, Xs in zip(target.generators, src.generators):
        blocks.append(Xt.kron(eye_o) - eye_t.kron(Xs.transpose()))
    if not blocks:
        return Matrix.identity(field, t * o)
    return Matrix.vstack(blocks).kernel_basis()


def _extendable_span(source_data: OmegaData, target: ModuleRep) -> Matrix:
    """Vectorised restrictions to the kernel of maps defined on the whole cover.

    A map from the free cover is determined by arbitrary images of its free
    generators, so the span is indexed by (generator, basis vector of the
    target).
    """
    m = target
    field = m.field
    p, r = m.group.p, m.group.r
    K = source_data.kernel_basis
    s = source_data.free_rank
    reg_dim = p**r
    exps = list(product(range(p), repeat=r))
    # monomial action matrices on the target
    mono: dict[tuple, Matrix] = {}

    def act(e: tuple) -> Matrix:
        if e in mono:
            return mono[e]
        if not any(e):
            out = Matrix.identity(field, m.dim)
        else:
            i = next(k for k, v in enumerate(e) if v)
            e2 = list(e)
            e2[i] -= 1
            out = m.generators[i] @ act(tuple(e2))
        mono[e] = out
        return out

    cols = []
    for i in range(s):
        for w in range(m.dim):
            h_full = np.zeros((m.dim, s * reg_dim), dtype=np.int64)
            for k, e in enumerate(exps):
                col = act(e).a[:, w]
                h_full[:, i * reg_dim + k] = col
            h_res = Matrix(field, h_full, _copy=False) @ K
            cols.append(h_res.a.reshape(-1))
    out = np.array(cols, dtype=np.int64).T
    return Matrix(field, out.reshape(m.dim * K.cols, len(cols)), _copy=False)


def stable_hom_basis(source_data: OmegaData, target: ModuleRep) -> list[Matrix]:
    """Basis of module maps kernel -> target modulo maps extending to the cover."""
    src = source_data.module
    t, o = target.dim, src.dim
    field = target.field
    hom_kernel = _vec_kernel_of_intertwiners(src, target)
    ext_span = _extendable_span(source_data, target)
    stacked = Matrix.hstack([ext_span, hom_kernel])
    _, pivots = stacked.rref()
    out = []
    for c in pivots:
        if c >= ext_span.cols:
            v = hom_kernel.a[:, c - ext_span.cols]
            out.append(Matrix(field, v.reshape(t, o), _copy=False))
    return out


_OMEGA_CACHE: dict[int, OmegaData] = {}


def omega_data_of_trivial(group, n: int = 1) -> OmegaData:
    """Minimal-cover record of Omega^(n-1) of the trivial module (cached)."""
    key = hash((group, n))
    if key not in _OMEGA_CACHE:
        base = trivial_module(group)
        for _ in range(n - 1):
            base = omega_with_data(base).module
        _OMEGA_CACHE[key] = omega_with_data(base)
    return _OMEGA_CACHE[key]


def ext1_basis(m: ModuleRep) -> list[CohomClass]:
    """Basis of degree-one classes on the trivial module with values in m."""
    data = omega_data_of_trivial(m.group, 1)
    k = trivial_module(m.group)
    return [
        CohomClass(1, k, m, data, h) for h in stable_hom_basis(data, m)
    ]


def degree_n_classes_on_trivial(group, n: int) -> list[CohomClass]:
    """Basis of stable maps Omega^n(k) -> k, one class per basis element."""
    data = omega_data_of_trivial(group, n)
    k = trivial_module(group)
    return [CohomClass(n, k, k, data, h) for h in stable_hom_basis(data, k)]


def class_combination(classes: list[CohomClass], coeffs: list[int]) -> CohomClass:
    if len(classes) != len(coeffs) or not classes:
        raise HomologicalError("need one coefficient per class")
    acc = classes[0].scale(coeffs[0])
    for cls, c in zip(classes[1:], coeffs[1:]):
        acc = acc + cls.scale(c)
    return acc


def direct_sum_classes(a: CohomClass, b: CohomClass) -> CohomClass:
    """The class (a, b) with values in the direct sum of the targets."""
    if a.degree != b.degree or a.source_data is not b.source_data:
        if a.source.dim != b.source.dim:
            raise HomologicalError("summands must share the source shift")
    target = direct_sum(a.target, b.target)
    hom = Matrix.vstack([a.hom, b.hom])
    return CohomClass(a.degree, a.base, target, a.source_data, hom)


# ---------------------------------------------------------------------------
# extensions
# ---------------------------------------------------------------------------


@dataclass
class ExtensionData:
    """The pushout extension 0 -> target -> module -> Y -> 0."""

    module: ModuleRep
    include_target: Matrix  # target -> module
    project_base: Matrix  # module -> Y (the cover's base)


def extension_module(z: CohomClass) -> ModuleRep:
    return extension_data(z).module


def extension_data(z: CohomClass) -> ExtensionData:
    """Pushout of the kernel inclusion along the representing map.

    The middle term is (P + M) / {(w, -h(w))}; its size is dim Y + dim M.
    """
    data = z.source_data
    M = z.target
    field = M.field
    K = data.kernel_basis
    n_free = K.rows
    cover_rank = data.free_rank
    om_dim = K.cols
    sub = np.zeros((n_free + M.dim, om_dim), dtype=np.int64)
    sub[:n_free] = K.a
    sub[n_free:] = (-z.hom).a
    big_gens = [
        Matrix.block_diag([g_p, g_m])
        for g_p, g_m in zip(data.cover_gens, M.generators)
    ]
    big = ModuleRep(M.group, big_gens)
    E, q = quotient_module(big, Matrix(field, sub, _copy=False))
    incl = Matrix(field, q.a[:, n_free:], _copy=False)
    # the base projection satisfies proj . q = [cover | 0]
    rhs = np.zeros((n_free + M.dim, data.cover_map.rows), dtype=np.int64)
    rhs[:n_free] = data.cover_map.a.T
    sol = q.transpose().solve(Matrix(field, rhs, _copy=False))
    if sol is None:  # pragma: no cover - the quotient map is surjective
        raise HomologicalError("failed to express the base projection")
    proj = sol.transpose()
    return ExtensionData(E, incl, proj)


# ---------------------------------------------------------------------------
# zero loci
# ---------------------------------------------------------------------------


def _require_constant_rank(m: ModuleRep, f: PiFamily, analysis: FamilyAnalysis | None = None) -> FamilyAnalysis:
    an = analysis or FamilyAnalysis(m, f)
    if not an.is_constant_jrank(1):
        raise NotConstantRank(
            "the coefficient module must have constant rank over the family"
        )
    return an


def z_locus(z: CohomClass, f: PiFamily, *, ext_degree: int = 1):
    """Enumerated points where the class pulls back to zero.

    Triviality at a point is the rank criterion: the extension has the same
    operator rank as its coefficient module exactly when the pulled-back
    sequence splits.
    """
    if z.degree != 1 or z.base.dim != 1:
        raise HomologicalError("zero locus needs a degree-one class on the trivial module")
    _require_constant_rank(z.target, f, FamilyAnalysis(z.target, f, ext_degree))
    E = extension_module(z)
    pts = f.enumerate_points(ext_degree)
    out = []
    for fp in pts:
        r_e = theta(E, fp.pi).rank()
        r_m = theta(z.target, fp.pi).rank()
        if r_e == r_m:
            out.append(fp)
    return out


def is_locally_split(z: CohomClass, f: PiFamily, *, ext_degree: int = 1) -> bool:
    """True when the extension splits at every point, generic one included."""
    pts = f.enumerate_points(ext_degree)
    zpts = z_locus(z, f, ext_degree=ext_degree)
    if len(zpts) != len(pts):
        return False
    E = extension_module(z)
    an_e = FamilyAnalysis(E, f, ext_degree)
    an_m = FamilyAnalysis(z.target, f, ext_degree)
    return an_e.max_jrank(1) == an_m.max_jrank(1)


def split_locus_pointwise(z: CohomClass, f: PiFamily, *, ext_degree: int = 1):
    """Points where the pulled-back sequence literally splits (solver route).

    Used as an independent cross-check of the rank criterion: a splitting is
    a vector of the extension killed by the operator and projecting to 1.
    """
    if z.base.dim != 1:
        raise HomologicalError("pointwise splitting test needs a one-dimensional base")
    ed = extension_data(z)
    out = []
    for fp in f.enumerate_points(ext_degree):
        th = theta(ed.module, fp.pi)
        proj = ed.project_base.lift(th.field) if th.field != ed.project_base.field else ed.project_base
        stacked = Matrix.vstack([th, proj])
        rhs = np.zeros((stacked.rows, 1), dtype=np.int64)
        rhs[-1, 0] = 1
        if stacked.solve(Matrix(th.field, rhs, _copy=False)) is not None:
            out.append(fp)
    return out


# ---------------------------------------------------------------------------
# Carlson modules
# ---------------------------------------------------------------------------


def is_stably_zero(z: CohomClass) -> bool:
    """Whether the representing map extends to the cover of the source."""
    ext_span = _extendable_span(z.source_data, z.target)
    v = z.hom.a.reshape(-1, 1)
    vec = Matrix(z.hom.field, v, _copy=False)
    return ext_span.solve(vec) is not None


def carlson_module(z: CohomClass) -> ModuleRep:
    """Kernel of a nonzero even-degree class on the trivial module."""
    if z.base.dim != 1 or z.target.dim != 1:
        raise HomologicalError("Carlson construction needs a class on the trivial module")
    if z.degree % 2 != 0 or z.degree < 2:
        raise HomologicalError("Carlson construction needs a positive even degree")
    if z.hom.is_zero():
        raise HomologicalError("the zero map has no Carlson kernel")
    if is_stably_zero(z):
        raise HomologicalError("the class is stably trivial; its kernel is not a Carlson module")
    ker = z.hom.kernel_basis()
    return submodule(z.source, ker)


# ---------------------------------------------------------------------------
# shifting representing maps
# ---------------------------------------------------------------------------


def omega_of_hom(
    h: Matrix, src_data: OmegaData, dst_data: OmegaData
) -> Matrix:
    """The induced map on Heller shifts of a map h: src -> dst.

    Lifts h through the minimal covers (solving for images of the free
    generators) and restricts the lift to the kernels.
    """
    src = src_data.module
    dst = dst_data.module
    field = h.field
    if h.rows != dst_data.cover_map.rows or h.cols != src_data.cover_map.rows:
        raise HomologicalError("hom shape does not match the cover data")
    # lift generator images through the cover of dst
    rhs = h @ src_data.head_lifts
    V = dst_data.cover_map.solve(rhs)
    if V is None:  # pragma: no cover - covers are surjective
        raise HomologicalError("failed to lift through the cover")
    p = field.p
    r = dst.group.r
    reg_dim = p**r
    exps = list(product(range(p), repeat=r))
    s_src = src_data.free_rank
    s_dst = dst_data.free_rank
    reg = _regular_generators(p, r)
    mono: dict[tuple, Matrix] = {}

    def act(e: tuple) -> Matrix:
        if e in mono:
            return mono[e]
        if not any(e):
            out = Matrix.identity(GF(p), reg_dim)
        else:
            i = next(k for k, v in enumerate(e) if v)
            e2 = list(e)
            e2[i] -= 1
            out = reg[i] @ act(tuple(e2))
        mono[e] = out
        return out

    H = np.zeros((s_dst * reg_dim, s_src * reg_dim), dtype=np.int64)
    for i in range(s_src):
        vi = V.a[:, i].reshape(s_dst, reg_dim)
        for k, e in enumerate(exps):
            A = act(e).a
            col = (vi @ A.T % p).reshape(-1)
            H[:, i * reg_dim + k] = col
    Hm = Matrix(field, H, _copy=False)
    restricted = Hm @ src_data.kernel_basis
    out = dst_data.kernel_basis.solve(restricted)
    if out is None:
        raise HomologicalError("the lift does not preserve the kernels")
    return out


# ---------------------------------------------------------------------------
# zero loci of general extension classes
# ---------------------------------------------------------------------------


def ext_z_locus(xi: CohomClass, f: PiFamily, *, ext_degree: int = 1):
    """Points where the extension of the shifted base by the target splits.

    Splitting is detected by the local type being the direct-sum type,
    legitimate because both ends have constant local type over the family.
    """
    if xi.degree < 1:
        raise HomologicalError("positive degree required")
    an_m = FamilyAnalysis(xi.target, f, ext_degree)
    if not an_m.is_constant_jtype():
        raise NotConstantRank("the coefficient module must have constant Jordan type")
    shifted_base = xi.source_data.covered  # Omega^(degree-1) of the base
    an_y = FamilyAnalysis(shifted_base, f, ext_degree)
    if not an_y.is_constant_jtype():
        raise NotConstantRank("the shifted base must have constant Jordan type")
    E = extension_module(xi)
    split_type = an_m.types[0] + an_y.types[0]
    out = []
    for fp in f.enumerate_points(ext_degree):
        t = JordanType.from_rank_chain(E.dim, theta(E, fp.pi).rank_chain(E.group.p))
        if t == split_type:
            out.append(fp)
    return out
