"""Named module constructors used as fixtures and command-line presets.

Every builder returns a validated module (plus, where natural, a probe
point or family).  The builders fix explicit bases for objects that are
usually described by pictures or weights, so downstream results are
reproducible byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .fields import GF
from .jordan import JordanType
from .matrix import Matrix
from .modrep import (
    GroupData,
    ModRepError,
    ModuleRep,
    PiPoint,
    additive_infinitesimal,
    elementary_abelian,
    gln_restricted,
    omega_iterated,
    sl2_second_frobenius,
    trivial_module,
)
from .strata import NilpotentOrbitFamily, SL2PiFamily, LinearPiFamily


class GalleryError(ValueError):
    pass


def w_module(p: int) -> ModuleRep:
    """A 13-dimensional zig-zag module over k[x,y]/(x^p, y^p).

    Basis: four top vectors t1..t4, five middle m1..m5, four bottom b1..b4.
    y maps down-left and x maps down-right:

        t_i -> m_i (y),  t_i -> m_{i+1} (x)
        m_j -> b_{j-1} (y, j >= 2),  m_j -> b_j (x, j <= 4)

    Generic local type has four 3-blocks and a 1-block; the pure-x and
    pure-y directions degenerate to three 3-blocks and two 2-blocks.
    """
    if p <= 5:
        raise GalleryError("the zig-zag module needs p > 5")
    field = GF(p)
    n = 13
    t = list(range(0, 4))
    mid = list(range(4, 9))
    b = list(range(9, 13))
    X = np.zeros((n, n), dtype=np.int64)
    Y = np.zeros((n, n), dtype=np.int64)
    for i in range(4):
        Y[mid[i], t[i]] = 1
        X[mid[i + 1], t[i]] = 1
    for j in range(5):
        if j >= 1:
            Y[b[j - 1], mid[j]] = 1
        if j <= 3:
            X[b[j], mid[j]] = 1
    group = additive_infinitesimal(p, 2)
    m = ModuleRep(group, [Matrix(field, X), Matrix(field, Y)])
    m.require_valid()
    return m


def cyclic_quotient(p: int) -> ModuleRep:
    """k[x,y]/(x^p, y^p, x - y^2): y acts as the regular nilpotent, x as y^2."""
    if p % 2 == 0:
        raise GalleryError("the cyclic quotient needs odd p")
    field = GF(p)
    Y = np.zeros((p, p), dtype=np.int64)
    for k in range(p - 1):
        Y[k + 1, k] = 1
    Ym = Matrix(field, Y)
    group = elementary_abelian(p, 2)
    m = ModuleRep(group, [Ym @ Ym, Ym])
    m.require_valid()
    return m


def _sym2_matrix(g: Matrix) -> Matrix:
    """Action on the symmetric square, basis e_a e_b for a <= b (lex order)."""
    field = g.field
    n = g.rows
    pairs = [(a, bb) for a in range(n) for bb in range(a, n)]
    idx = {pr: k for k, pr in enumerate(pairs)}
    out = np.zeros((len(pairs), len(pairs)), dtype=np.int64)
    ga = g.a
    for (i, j), col in idx.items():
        for a in range(n):
            for bb in range(n):
                c = int(ga[a, i]) * int(ga[bb, j]) % field.p
                if not c:
                    continue
                key = (a, bb) if a <= bb else (bb, a)
                out[idx[key], col] = (out[idx[key], col] + c) % field.p
    return Matrix(field, out)


GL3_SUBGROUP_GENERATORS: dict[int, tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]] = {
    # (a, b) specialised to (1, 0) and (0, 1) in each displayed family
    1: (((1, 1, 0), (0, 1, 1), (0, 0, 1)), ((1, 0, 1), (0, 1, 0), (0, 0, 1))),
    2: (((1, 1, 0), (0, 1, 0), (0, 0, 1)), ((1, 0, 1), (0, 1, 0), (0, 0, 1))),
    3: (((1, 0, 0), (0, 1, 1), (0, 0, 1)), ((1, 0, 1), (0, 1, 0), (0, 0, 1))),
}


def gl3_sym2(p: int, subgroup: int) -> ModuleRep:
    """Symmetric square of the standard 3-dimensional representation,
    restricted to one of the three rank-two elementary abelian subgroups of
    unipotent upper-triangular 3x3 matrices."""
    if p <= 3:
        raise GalleryError("the symmetric-square example needs p > 3")
    if subgroup not in GL3_SUBGROUP_GENERATORS:
        raise GalleryError("subgroup index must be 1, 2 or 3")
    field = GF(p)
    eye = Matrix.identity(field, 6)
    gens = []
    for rows in GL3_SUBGROUP_GENERATORS[subgroup]:
        u = Matrix.from_rows(field, [list(r) for r in rows])
        gens.append(_sym2_matrix(u) - eye)
    m = ModuleRep(elementary_abelian(p, 2), gens)
    m.require_valid()
    return m


def gln1_standard(n: int, p: int, x: Matrix) -> tuple[ModuleRep, PiPoint]:
    """The standard n-dimensional module, probed by one p-nilpotent matrix."""
    if x.rows != n or x.cols != n:
        raise GalleryError("probe matrix must be n x n")
    if not x.pow_int(p).is_zero():
        raise GalleryError("probe matrix is not p-nilpotent")
    group = gln_restricted(p, n)
    m = ModuleRep(group, [], dim=n, field=GF(p))
    return m, PiPoint(group, x.field, matrix=x)


def gln1_orbit_family(n: int, p: int) -> tuple[ModuleRep, NilpotentOrbitFamily]:
    group = gln_restricted(p, n)
    m = ModuleRep(group, [], dim=n, field=GF(p))
    return m, NilpotentOrbitFamily(group, n)


def _raising_operator(field, mu: int) -> Matrix:
    """Nilpotent raising action on the degree-mu symmetric power of k^2.

    Basis v_b = x^(mu-b) y^b; the operator sends v_b to b * v_{b-1}.
    """
    a = np.zeros((mu + 1, mu + 1), dtype=np.int64)
    for bcoord in range(1, mu + 1):
        a[bcoord - 1, bcoord] = bcoord % field.p
    return Matrix(field, a)


def sl2_2_simple(lam: int, p: int) -> tuple[ModuleRep, SL2PiFamily]:
    """Simple module of highest weight lam for the height-two sl2 kernel.

    Realised through the twisted tensor factorisation: for
    lam = lam0 + p*lam1 the module is the product of the weight-lam0 power
    and the Frobenius twist of the weight-lam1 power, with commuting
    operators A = e (x) 1 and B = 1 (x) e.  The probe family evaluates
    s1*A + s0^p*B at [s0 : s1].
    """
    if not (0 <= lam <= p * p - 1):
        raise GalleryError(f"weight must lie in 0..{p * p - 1}")
    field = GF(p)
    lam0, lam1 = lam % p, lam // p
    e0 = _raising_operator(field, lam0)
    e1 = _raising_operator(field, lam1)
    i0 = Matrix.identity(field, lam0 + 1)
    i1 = Matrix.identity(field, lam1 + 1)
    A = e0.kron(i1)
    B = i0.kron(e1)
    group = sl2_second_frobenius(p)
    m = ModuleRep(group, [A, B])
    m.require_valid()
    return m, SL2PiFamily(group)


def heller_of_trivial(n: int, r: int, p: int) -> ModuleRep:
    """Iterated Heller shift of the trivial module over k[x_1..x_r]/(x_i^p)."""
    if r != 2:
        raise GalleryError("only rank 2 is wired up for Heller presets")
    if not (0 <= n <= 3):
        raise GalleryError("shift bounded by 3 at desk scale")
    return omega_iterated(trivial_module(additive_infinitesimal(p, r)), n)


# ---------------------------------------------------------------------------
# registry for the command line
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GalleryEntry:
    name: str
    build: Callable[..., ModuleRep]
    arguments: str
    description: str


def _build_w(p: int, **kw) -> ModuleRep:
    return w_module(p)


def _build_cyclic(p: int, **kw) -> ModuleRep:
    return cyclic_quotient(p)


def _build_gl3(p: int, subgroup: int = 1, **kw) -> ModuleRep:
    return gl3_sym2(p, subgroup)


def _build_sl2(p: int, lam: int = 0, **kw) -> ModuleRep:
    return sl2_2_simple(lam, p)[0]


def _build_heller(p: int, n: int = 1, **kw) -> ModuleRep:
    return heller_of_trivial(n, 2, p)


def _build_trivial(p: int, r: int = 2, **kw) -> ModuleRep:
    return trivial_module(additive_infinitesimal(p, r))


def _build_w_tensor_square(p: int, **kw) -> ModuleRep:
    from .modrep import tensor_module

    w = w_module(p)
    return tensor_module(w, w)


GALLERY: dict[str, GalleryEntry] = {
    e.name: e
    for e in [
        GalleryEntry("w", _build_w, "--p P (P > 5)", "13-dimensional zig-zag module with two local types"),
        GalleryEntry("w-tensor-square", _build_w_tensor_square, "--p P (P > 5)", "tensor square of the zig-zag module"),
        GalleryEntry("cyclic-quotient", _build_cyclic, "--p P (odd)", "k[x,y]/(x^p, y^p, x - y^2)"),
        GalleryEntry("gl3-sym2", _build_gl3, "--p P (P > 3) --subgroup 1|2|3", "symmetric square of the standard rank-3 module on one unipotent plane"),
        GalleryEntry("sl2-simple", _build_sl2, "--p P --lam L (0 <= L < P^2)", "simple height-two sl2 module of highest weight L"),
        GalleryEntry("heller", _build_heller, "--p P --n N (N <= 3)", "iterated Heller shift of the trivial module, rank 2"),
        GalleryEntry("trivial", _build_trivial, "--p P [--r R]", "the trivial one-dimensional module"),
    ]
}


def gallery_names() -> list[str]:
    return sorted(GALLERY)


def build_entry(name: str, **kwargs) -> ModuleRep:
    if name not in GALLERY:
        raise GalleryError(f"unknown gallery entry {name!r}")
    return GALLERY[name].build(**kwargs)
