"""Probe-point families, generic Jordan types, and rank strata.

A family parameterises probe points by projective coordinates and supports
two kinds of questions: pointwise (enumerate the rational points of the
parameter space over GF(p^m) and evaluate there) and generic (the rank of
every power of the family operator over the rational function field).

Generic ranks are certified deterministically: the pencil is specialised at
Frobenius-orbit representatives of a fixed extension degree, and the count
of sample points is driven by degree bounds on the minors, so the reported
maximum is exact, not a heuristic.  Maximality of enumerated points is
always measured against the certified generic rank when the family supports
it; the nilpotent-orbit family instead enumerates one representative per
conjugacy class, which already realises every attainable type.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field

from .fields import GF, Field, frobenius_orbit_reps
from .jordan import JordanType, jordan_type_of_matrix
from .matrix import Matrix
from .modrep import (
    GroupData,
    ModuleRep,
    PiPoint,
    UnsupportedFamily,
    linear_pi_point,
    theta,
)
from .poly import (
    ComputationTooLarge,
    Poly,
    PolyMatrix,
    certificate_extension_degree,
    minors_ideal,
)

# minor ideals are materialised only under these sizes
IDEAL_DIM_CAP = 24
IDEAL_COUNT_CAP = 2000


class StrataError(ValueError):
    pass


class InternalInconsistency(RuntimeError):
    """The certified generic rank fell below an enumerated rank."""


@dataclass(frozen=True)
class FamilyPoint:
    label: tuple
    pi: PiPoint

    def render(self) -> str:
        return "[" + ":".join(str(c) for c in self.label) + "]"


def _projective_tuples(field: Field, n: int) -> list[tuple[int, ...]]:
    """Points of P^(n-1) over the field, first nonzero coordinate 1, lex order."""
    pts: list[tuple[int, ...]] = []

    def rec(prefix: tuple[int, ...], started: bool):
        if len(prefix) == n:
            if started:
                pts.append(prefix)
            return
        if not started:
            rec(prefix + (0,), False)
            rec(prefix + (1,), True)
        else:
            for a in range(field.q):
                rec(prefix + (a,), True)

    rec((), False)
    return pts


class PiFamily:
    """Base class; see LinearPiFamily, SL2PiFamily, NilpotentOrbitFamily."""

    group: GroupData
    symbolic: bool

    def enumerate_points(self, ext_degree: int = 1) -> list[FamilyPoint]:
        raise NotImplementedError

    def point(self, field: Field, coords) -> FamilyPoint:
        raise NotImplementedError


class PencilPiFamily(PiFamily):
    """Family whose operator is sum_i c_i(params) * X_i on any module.

    ``coeff_polys`` are the coefficient polynomials in the enumeration
    parameters; ``norm_coeff_polys`` are the same after dividing out common
    exponent gcds (used by the generic-rank certificate, where they define
    the same rational function field).
    """

    params: tuple[str, ...]

    def coeff_polys(self) -> list[Poly]:
        raise NotImplementedError

    def norm_coeff_polys(self) -> list[Poly]:
        return self.coeff_polys()

    def coeff_values(self, field: Field, coords) -> list[int]:
        return [c.evaluate(field, coords) for c in self.coeff_polys()]

    def norm_coeff_values(self, field: Field, values) -> list[int]:
        return [c.evaluate(field, values) for c in self.norm_coeff_polys()]

    def specialized_theta(self, m: ModuleRep, field: Field, coeff_values) -> Matrix:
        gens = [g.lift(field) if g.field != field else g for g in m.generators]
        acc = Matrix.zeros(field, m.dim, m.dim)
        for c, g in zip(coeff_values, gens):
            if c:
                acc = acc + g.scalar_mul(c)
        return acc

    def enumerate_points(self, ext_degree: int = 1) -> list[FamilyPoint]:
        field = GF(self.group.p, ext_degree)
        return [self.point(field, t) for t in _projective_tuples(field, len(self.params))]

    def symbolic_theta(self, m: ModuleRep) -> PolyMatrix:
        """The family operator with polynomial entries, native parameters."""
        if not m.field.is_prime_field:
            raise StrataError("symbolic operators need prime-field modules")
        acc = PolyMatrix.from_scalar(Matrix.zeros(m.field, m.dim, m.dim), self.params)
        for c, g in zip(self.coeff_polys(), m.generators):
            acc = acc + PolyMatrix.from_scalar(g, self.params).scale(c)
        return acc


class LinearPiFamily(PencilPiFamily):
    """The standard family t -> l1*x0 + ... + lr*x_{r-1}."""

    symbolic = True

    def __init__(self, group: GroupData):
        if group.r < 1:
            raise StrataError("linear family needs at least one generator")
        self.group = group
        self.params = tuple(f"l{i + 1}" for i in range(group.r))

    def coeff_polys(self) -> list[Poly]:
        return [Poly.variable(self.group.p, self.params, i) for i in range(self.group.r)]

    def point(self, field: Field, coords) -> FamilyPoint:
        coords = tuple(int(c) for c in coords)
        pi = linear_pi_point(self.group, field, coords)
        return FamilyPoint(coords, pi)


class SL2PiFamily(PencilPiFamily):
    """Orbit-representative line for height-two frobenius kernels of sl2.

    The operator at [s0 : s1] is s1 * x0 + s0^p * x1; enumeration follows
    that formula exactly, while the certificate works with s0^p replaced by
    a fresh degree-one parameter (an embedding of rational function fields,
    so generic ranks agree).
    """

    symbolic = True

    def __init__(self, group: GroupData):
        if group.family != "sl2-second-frobenius":
            raise StrataError("SL2PiFamily needs the sl2-second-frobenius family")
        self.group = group
        self.params = ("s0", "s1")

    def coeff_polys(self) -> list[Poly]:
        p = self.group.p
        s0 = Poly.variable(p, self.params, 0)
        s1 = Poly.variable(p, self.params, 1)
        return [s1, s0.pow(p)]

    def norm_coeff_polys(self) -> list[Poly]:
        p = self.group.p
        s0 = Poly.variable(p, self.params, 0)
        s1 = Poly.variable(p, self.params, 1)
        return [s1, s0]

    def point(self, field: Field, coords) -> FamilyPoint:
        coords = tuple(int(c) for c in coords)
        vals = self.coeff_values(field, coords)
        pi = linear_pi_point(self.group, field, vals)
        return FamilyPoint(coords, pi)


def _partitions(n: int, max_part: int):
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


class NilpotentOrbitFamily(PiFamily):
    """One probe point per conjugacy class of p-nilpotent N x N matrices.

    Conjugacy classes of nilpotent matrices are the partitions of N with
    parts at most p, so the enumeration realises every local type exactly
    once; generic data is read off the dominance-maximal class.
    """

    symbolic = False

    def __init__(self, group: GroupData, n: int):
        if group.family != "gln-restricted":
            raise StrataError("orbit family needs the gln-restricted family")
        self.group = group
        self.n = n

    def enumerate_points(self, ext_degree: int = 1) -> list[FamilyPoint]:
        if ext_degree != 1:
            raise StrataError("orbit families enumerate prime-field classes only")
        field = GF(self.group.p)
        out = []
        for part in _partitions(self.n, min(self.n, self.group.p)):
            jt = JordanType.from_blocks(self.group.p, {s: part.count(s) for s in set(part)})
            pi = PiPoint(self.group, field, matrix=jt.nilpotent_matrix())
            out.append(FamilyPoint(part, pi))
        return out

    def point(self, field: Field, coords) -> FamilyPoint:
        part = tuple(sorted((int(c) for c in coords), reverse=True))
        jt = JordanType.from_blocks(self.group.p, {s: part.count(s) for s in set(part)})
        return FamilyPoint(part, PiPoint(self.group, field, matrix=jt.nilpotent_matrix()))


def standard_family(m: ModuleRep, n: int | None = None) -> PiFamily:
    """The natural probe family of a module's group."""
    fam = m.group.family
    if fam in ("elementary-abelian", "additive-infinitesimal"):
        return LinearPiFamily(m.group)
    if fam == "sl2-second-frobenius":
        return SL2PiFamily(m.group)
    if fam == "gln-restricted":
        return NilpotentOrbitFamily(m.group, n if n is not None else m.dim)
    raise UnsupportedFamily(f"no standard family for {fam!r}")  # pragma: no cover


# ---------------------------------------------------------------------------
# certified generic rank chain
# ---------------------------------------------------------------------------


class _ChainPoint:
    __slots__ = ("powers", "ranks")

    def __init__(self, theta1: Matrix, r1: int):
        self.powers = [theta1]
        self.ranks = [r1]

    @property
    def depth(self) -> int:
        return len(self.powers)

    def deepen(self, to_depth: int):
        while len(self.powers) < to_depth:
            nxt = self.powers[-1] @ self.powers[0]
            self.powers.append(nxt)
            self.ranks.append(nxt.rank())


def certified_generic_chain(m: ModuleRep, f: PencilPiFamily) -> list[int]:
    """Certified generic ranks of the family operator's powers 1..p.

    Works in the exponent-normalised parameters.  When the coefficient
    polynomials are jointly homogeneous one parameter is pinned to 1; any
    remaining parameters beyond the first fold into Kronecker powers of a
    single variable, with strides wide enough to keep all relevant minors
    monomial-injective.  The sample count per power j tracks the degree
    bound of (r+1)-minors of the j-th power, measured against the degree of
    the sample points' minimal polynomials.
    """
    if not f.symbolic:
        raise StrataError("family has no symbolic parameterisation")
    p = m.group.p
    j_max = p - 1
    dim = m.dim
    if dim == 0:
        return [0] * p
    coeffs = f.norm_coeff_polys()
    n_params = len(f.params)
    d = max((c.total_degree() for c in coeffs), default=0)
    d = max(d, 0)
    degs = {c.homogeneous_degree() for c in coeffs if not c.is_zero()}
    homogeneous = len(degs) == 1 and None not in degs
    active = n_params - 1 if homogeneous and n_params >= 2 else n_params
    if active == 0:
        field = GF(p)
        th = f.specialized_theta(m, field, f.norm_coeff_values(field, [1] * n_params))
        return th.rank_chain(p)
    K = dim * d * j_max + 1
    stride_max = K ** (active - 1)
    e = certificate_extension_degree(p)
    field = GF(p, e)
    reps = frobenius_orbit_reps(field)

    def values_for(s: int) -> list[int]:
        vals = []
        k = 0
        for i in range(n_params):
            if homogeneous and n_params >= 2 and i == n_params - 1:
                vals.append(1)
            else:
                vals.append(field.pow(s, K**k))
                k += 1
        return vals

    points: list[_ChainPoint] = []
    r_obs = [0] * (j_max + 1)  # index by j

    def demand(j: int) -> int:
        bound = min(r_obs[j] + 1, dim) * j * d * stride_max
        return bound // e + 1

    def new_point(depth: int):
        try:
            s = next(reps)
        except StopIteration:  # pragma: no cover - tiny fields only
            raise ComputationTooLarge(
                f"certificate ran out of degree-{e} points over GF({p}^{e})"
            )
        th = f.specialized_theta(m, field, f.norm_coeff_values(field, values_for(s)))
        cp = _ChainPoint(th, th.rank())
        points.append(cp)
        cp.deepen(depth)
        for jj, r in enumerate(cp.ranks, start=1):
            r_obs[jj] = max(r_obs[jj], r)

    def deepen_existing(j: int) -> bool:
        shallow = [cp for cp in points if cp.depth < j]
        if not shallow:
            return False
        cp = max(shallow, key=lambda c: c.depth)
        cp.deepen(j)
        for jj, r in enumerate(cp.ranks, start=1):
            r_obs[jj] = max(r_obs[jj], r)
        return True

    while True:
        satisfied = True
        for j in range(j_max, 0, -1):
            while sum(1 for cp in points if cp.depth >= j) < demand(j):
                satisfied = False
                if not deepen_existing(j):
                    new_point(j)
        if satisfied:
            break
    return [r_obs[j] for j in range(1, j_max + 1)] + [0]


# ---------------------------------------------------------------------------
# pointwise analysis
# ---------------------------------------------------------------------------


class FamilyAnalysis:
    """Shared per-point rank chains plus the certified generic chain."""

    def __init__(self, m: ModuleRep, f: PiFamily, ext_degree: int = 1, use_symbolic: bool = True, jobs: int = 1):
        self.module = m
        self.family = f
        self.ext_degree = ext_degree
        self.use_symbolic = use_symbolic and f.symbolic
        self.points = f.enumerate_points(ext_degree)
        p = m.group.p
        if jobs > 1 and len(self.points) > 1:
            from concurrent.futures import ThreadPoolExecutor

            def chain_of(fp: FamilyPoint) -> list[int]:
                return theta(m, fp.pi).rank_chain(p)

            with ThreadPoolExecutor(max_workers=jobs) as pool:
                self.chains = list(pool.map(chain_of, self.points))
        else:
            self.chains = [theta(m, fp.pi).rank_chain(p) for fp in self.points]
        self.types = [
            JordanType.from_rank_chain(m.dim, chain) for chain in self.chains
        ]
        self._generic_chain: list[int] | None = None

    def generic_chain(self) -> list[int]:
        if self._generic_chain is None:
            p = self.module.group.p
            enum_max = [
                max((chain[j - 1] for chain in self.chains), default=0)
                for j in range(1, p + 1)
            ]
            if self.use_symbolic:
                cert = certified_generic_chain(self.module, self.family)
                for j in range(1, p + 1):
                    if cert[j - 1] < enum_max[j - 1]:
                        raise InternalInconsistency(
                            f"certified rank {cert[j-1]} below enumerated rank "
                            f"{enum_max[j-1]} at power {j}"
                        )
                self._generic_chain = cert
            else:
                self._generic_chain = enum_max
        return self._generic_chain

    def max_jrank(self, j: int) -> int:
        p = self.module.group.p
        if not (1 <= j < p):
            raise StrataError(f"power {j} out of range 1..{p - 1}")
        return self.generic_chain()[j - 1]

    def generic_type(self) -> JordanType:
        return JordanType.from_rank_chain(self.module.dim, self.generic_chain())

    def gamma_j_points(self, j: int) -> list[FamilyPoint]:
        r = self.max_jrank(j)
        return [fp for fp, chain in zip(self.points, self.chains) if chain[j - 1] < r]

    def gamma_points(self) -> list[FamilyPoint]:
        p = self.module.group.p
        bad_idx = set()
        for j in range(1, p):
            r = self.max_jrank(j)
            for i, chain in enumerate(self.chains):
                if chain[j - 1] < r:
                    bad_idx.add(i)
        return [self.points[i] for i in sorted(bad_idx)]

    def is_constant_jrank(self, j: int) -> bool:
        r = self.max_jrank(j)
        return all(chain[j - 1] == r for chain in self.chains)

    def is_constant_jtype(self) -> bool:
        p = self.module.group.p
        return all(self.is_constant_jrank(j) for j in range(1, p))

    def minor_ideal(self, j: int) -> list[Poly] | None:
        """Defining equations of the non-maximal locus at power j, if feasible."""
        if not isinstance(self.family, PencilPiFamily) or not self.family.symbolic:
            return None
        m = self.module
        if m.dim > IDEAL_DIM_CAP or not m.field.is_prime_field:
            return None
        size = self.max_jrank(j)
        if size == 0:
            # rank below zero is impossible: the locus is empty, cut out by 1
            return [Poly.const(m.group.p, self.family.params, 1)]
        if math.comb(m.dim, size) ** 2 > IDEAL_COUNT_CAP:
            return None
        th = self.family.symbolic_theta(m).pow_int(j)
        try:
            return minors_ideal(th, size, cap=IDEAL_COUNT_CAP)
        except ComputationTooLarge:
            return None


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def generic_jtype(m: ModuleRep, f: PiFamily, *, use_symbolic: bool = True) -> JordanType:
    if isinstance(f, PencilPiFamily) and f.symbolic and use_symbolic:
        return JordanType.from_rank_chain(m.dim, certified_generic_chain(m, f))
    return FamilyAnalysis(m, f, use_symbolic=use_symbolic).generic_type()


def max_jrank(m: ModuleRep, f: PiFamily, j: int, *, ext_degree: int = 1, use_symbolic: bool = True) -> int:
    return FamilyAnalysis(m, f, ext_degree, use_symbolic).max_jrank(j)


def gamma_j(
    m: ModuleRep,
    f: PiFamily,
    j: int,
    *,
    ext_degree: int = 1,
    use_symbolic: bool = True,
    with_ideal: bool = True,
) -> tuple[list[FamilyPoint], list[Poly] | None]:
    an = FamilyAnalysis(m, f, ext_degree, use_symbolic)
    pts = an.gamma_j_points(j)
    ideal = an.minor_ideal(j) if with_ideal else None
    if ideal is not None:
        _check_ideal_matches(an, j, ideal, pts)
    return pts, ideal


def _check_ideal_matches(an: FamilyAnalysis, j: int, ideal: list[Poly], pts: list[FamilyPoint]):
    """On enumerated points the ideal's zero set is the non-maximal locus."""
    fam = an.family
    field = GF(an.module.group.p, an.ext_degree)
    flagged = {fp.label for fp in pts}
    for fp in an.points:
        vanish = all(q.evaluate(field, fp.label) == 0 for q in ideal)
        if vanish != (fp.label in flagged):
            raise InternalInconsistency(
                f"minor ideal disagrees with enumerated locus at {fp.render()}"
            )


def gamma(m: ModuleRep, f: PiFamily, *, ext_degree: int = 1, use_symbolic: bool = True) -> list[FamilyPoint]:
    return FamilyAnalysis(m, f, ext_degree, use_symbolic).gamma_points()


def is_constant_jrank(m: ModuleRep, f: PiFamily, j: int, *, ext_degree: int = 1, use_symbolic: bool = True) -> bool:
    return FamilyAnalysis(m, f, ext_degree, use_symbolic).is_constant_jrank(j)


def is_constant_jtype(m: ModuleRep, f: PiFamily, *, ext_degree: int = 1, use_symbolic: bool = True) -> bool:
    return FamilyAnalysis(m, f, ext_degree, use_symbolic).is_constant_jtype()


@dataclass
class StratumReport:
    module_name: str
    p: int
    ext_degree: int
    generic_type: JordanType
    max_jranks: list[int]
    strata: dict[str, list[FamilyPoint]]
    gamma: dict[int, list[FamilyPoint]]
    minor_ideals: dict[int, list[Poly] | None]
    constant_jrank: dict[int, bool]
    constant_jtype: bool
    point_types: list[tuple[FamilyPoint, JordanType]] = dc_field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "module": self.module_name,
            "p": self.p,
            "ext_degree": self.ext_degree,
            "generic_type": str(self.generic_type),
            "max_jranks": list(self.max_jranks),
            "strata": [
                {"type": t, "points": [list(map(int, fp.label)) for fp in pts]}
                for t, pts in sorted(self.strata.items())
            ],
            "gamma": {
                str(j): {
                    "points": [list(map(int, fp.label)) for fp in pts],
                    "minor_ideal": (
                        None
                        if self.minor_ideals.get(j) is None
                        else [str(q) for q in self.minor_ideals[j]]
                    ),
                }
                for j, pts in sorted(self.gamma.items())
            },
            "constant_jrank": {str(j): v for j, v in sorted(self.constant_jrank.items())},
            "constant_jtype": self.constant_jtype,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def strata(
    m: ModuleRep,
    f: PiFamily,
    *,
    ext_degree: int = 1,
    use_symbolic: bool = True,
    with_ideals: bool = True,
    module_name: str = "module",
    jobs: int = 1,
) -> StratumReport:
    an = FamilyAnalysis(m, f, ext_degree, use_symbolic, jobs=jobs)
    p = m.group.p
    by_type: dict[str, list[FamilyPoint]] = {}
    for fp, t in zip(an.points, an.types):
        by_type.setdefault(str(t), []).append(fp)
    gamma_map: dict[int, list[FamilyPoint]] = {}
    ideal_map: dict[int, list[Poly] | None] = {}
    const_map: dict[int, bool] = {}
    for j in range(1, p):
        pts = an.gamma_j_points(j)
        gamma_map[j] = pts
        ideal = an.minor_ideal(j) if with_ideals else None
        if ideal is not None:
            _check_ideal_matches(an, j, ideal, pts)
        ideal_map[j] = ideal
        const_map[j] = an.is_constant_jrank(j)
    gen = an.generic_type()
    report = StratumReport(
        module_name=module_name,
        p=p,
        ext_degree=ext_degree,
        generic_type=gen,
        max_jranks=[an.max_jrank(j) for j in range(1, p)],
        strata=by_type,
        gamma=gamma_map,
        minor_ideals=ideal_map,
        constant_jrank=const_map,
        constant_jtype=all(const_map.values()),
        point_types=list(zip(an.points, an.types)),
    )
    # the generic type must realise every maximal rank
    for j in range(1, p):
        if gen.rank_of_power(j) != report.max_jranks[j - 1]:
            raise InternalInconsistency("generic type does not attain a maximal rank")
    return report
