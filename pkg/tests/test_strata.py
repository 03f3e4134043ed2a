import json

import pytest

from jordanstrata.fields import GF
from jordanstrata.jordan import Dominance, JordanType, jordan_type_of_matrix
from jordanstrata.matrix import Matrix
from jordanstrata.modrep import (
    ModuleRep,
    additive_infinitesimal,
    direct_sum,
    elementary_abelian,
    free_module,
    linear_pi_point,
    omega,
    omega_iterated,
    tensor_module,
    theta,
    trivial_module,
)
from jordanstrata.strata import (
    FamilyAnalysis,
    LinearPiFamily,
    NilpotentOrbitFamily,
    SL2PiFamily,
    StrataError,
    certified_generic_chain,
    gamma,
    gamma_j,
    generic_jtype,
    is_constant_jrank,
    is_constant_jtype,
    max_jrank,
    standard_family,
    strata,
)
from jordanstrata.gallery import (
    cyclic_quotient,
    gln1_orbit_family,
    sl2_2_simple,
    w_module,
)

J = JordanType.parse


@pytest.fixture(scope="module")
def w7():
    return w_module(7)


@pytest.fixture(scope="module")
def w7_fam(w7):
    return LinearPiFamily(w7.group)


# -- generic types ------------------------------------------------------------


def test_generic_type_of_w(w7, w7_fam):
    assert generic_jtype(w7, w7_fam) == J(7, "4[3]+[1]")


def test_generic_type_of_free_module():
    E = elementary_abelian(5, 2)
    assert generic_jtype(free_module(E, 1), LinearPiFamily(E)) == J(5, "5[5]")


def test_generic_type_sl2_is_tensor_of_weight_blocks():
    p = 5
    for lam in (3, 7, 11, 23):
        m, fam = sl2_2_simple(lam, p)
        l0, l1 = lam % p, lam // p
        expect = JordanType.from_blocks(p, {l0 + 1: 1}).tensor(
            JordanType.from_blocks(p, {l1 + 1: 1})
        )
        assert generic_jtype(m, fam) == expect


def test_generic_chain_matches_enumeration_maximum(w7, w7_fam):
    an = FamilyAnalysis(w7, w7_fam)
    cert = certified_generic_chain(w7, w7_fam)
    for j in range(1, 8):
        enum_max = max(chain[j - 1] for chain in an.chains)
        assert cert[j - 1] >= enum_max
    assert cert == [8, 4, 0, 0, 0, 0, 0]


# -- maximal ranks ----------------------------------------------------------------


def test_max_jrank_w(w7, w7_fam):
    assert max_jrank(w7, w7_fam, 1) == 8
    assert max_jrank(w7, w7_fam, 2) == 4
    for j in range(3, 7):
        assert max_jrank(w7, w7_fam, j) == 0


def test_max_jrank_range_check(w7, w7_fam):
    with pytest.raises(StrataError):
        max_jrank(w7, w7_fam, 0)
    with pytest.raises(StrataError):
        max_jrank(w7, w7_fam, 7)


@pytest.mark.slow
def test_max_jrank_w_tensor_square(w7, w7_fam):
    ww = tensor_module(w7, w7)
    assert max_jrank(ww, w7_fam, 1) == 112


# -- non-maximal loci --------------------------------------------------------------


def test_gamma_of_constant_rank_module_is_empty(w7, w7_fam):
    pts, ideal = gamma_j(w7, w7_fam, 1)
    assert pts == []


def test_gamma_2_of_w(w7, w7_fam):
    pts, _ = gamma_j(w7, w7_fam, 2)
    assert {fp.label for fp in pts} == {(1, 0), (0, 1)}


def test_gamma_union(w7, w7_fam):
    union = gamma(w7, w7_fam)
    assert {fp.label for fp in union} == {(1, 0), (0, 1)}


def test_gamma_of_heller_shift_is_empty():
    G = additive_infinitesimal(3, 2)
    om = omega(trivial_module(G))
    fam = LinearPiFamily(G)
    assert gamma(om, fam) == []
    assert is_constant_jtype(om, fam)


def test_constant_flags_of_w(w7, w7_fam):
    assert is_constant_jrank(w7, w7_fam, 1)
    assert not is_constant_jtype(w7, w7_fam)


def test_minor_ideal_of_two_dim_extension():
    # both generators act by the same rank-one nilpotent; the non-maximal
    # locus of the operator is the line where the coefficients cancel
    E = elementary_abelian(5, 2)
    N = Matrix.from_rows(GF(5), [[0, 1], [0, 0]])
    m = ModuleRep(E, [N, N])
    fam = LinearPiFamily(E)
    pts, ideal = gamma_j(m, fam, 1)
    assert {fp.label for fp in pts} == {(1, 4)}
    assert ideal is not None and len(ideal) == 1
    from jordanstrata.poly import Poly

    assert ideal[0] == (Poly.variable(5, fam.params, 0) + Poly.variable(5, fam.params, 1)).monic()


def test_minor_ideal_agreement_is_checked(w7, w7_fam):
    # for the 13-dimensional fixture the j=2 ideal would need too many
    # minors, so it is omitted rather than reported stale
    pts, ideal = gamma_j(w7, w7_fam, 2)
    assert ideal is None


# -- strata reports ------------------------------------------------------------------


def test_w_strata_report(w7, w7_fam):
    rep = strata(w7, w7_fam, module_name="w7")
    assert str(rep.generic_type) == "4[3]+[1]"
    assert {fp.label for fp in rep.strata["3[3]+2[2]"]} == {(1, 0), (0, 1)}
    assert len(rep.strata["4[3]+[1]"]) == 6
    assert rep.constant_jrank[1] is True
    assert rep.constant_jtype is False
    # serialises deterministically
    assert rep.dumps() == rep.dumps()
    payload = json.loads(rep.dumps())
    assert payload["generic_type"] == "4[3]+[1]"


def test_trivial_module_single_stratum():
    E = elementary_abelian(5, 2)
    rep = strata(trivial_module(E), LinearPiFamily(E))
    assert list(rep.strata) == ["[1]"]
    assert len(rep.strata["[1]"]) == 6
    assert rep.constant_jtype


def test_strata_over_extension_field(w7, w7_fam):
    rep = strata(w7, w7_fam, ext_degree=2, with_ideals=False)
    assert len(rep.strata["3[3]+2[2]"]) == 2  # still just the two axis points
    assert sum(len(v) for v in rep.strata.values()) == 50  # |P^1(GF(49))|


def test_jobs_parameter_is_order_independent(w7, w7_fam):
    r1 = strata(w7, w7_fam, jobs=1, with_ideals=False)
    r2 = strata(w7, w7_fam, jobs=3, with_ideals=False)
    assert r1.dumps() == r2.dumps()


# -- semicontinuity and closedness surrogates --------------------------------------------


def test_rank_semicontinuity_via_minors():
    # {rank < c} is the zero set of the size-c minors, point by point
    from jordanstrata.poly import minors_ideal

    E = elementary_abelian(3, 2)
    m = omega(trivial_module(additive_infinitesimal(3, 2)))
    m = ModuleRep(E, m.generators)  # same matrices, multiplicative flag
    fam = LinearPiFamily(E)
    th = fam.symbolic_theta(m)
    F3 = GF(3)
    pts = fam.enumerate_points()
    for c in (1, 3, 5):
        ideal = minors_ideal(th, c)
        for fp in pts:
            vanish = all(q.evaluate(F3, fp.label) == 0 for q in ideal)
            assert vanish == (theta(m, fp.pi).rank() < c)


def test_dominated_types_have_dominated_ranks(w7, w7_fam):
    an = FamilyAnalysis(w7, w7_fam)
    for ta, ca in zip(an.types, an.chains):
        for tb, cb in zip(an.types, an.chains):
            if ta.compare(tb) == Dominance.LESS:
                assert all(x <= y for x, y in zip(ca, cb))


# -- named properties of the non-maximal loci ----------------------------------------------


def test_gamma_empty_iff_constant_rank(w7, w7_fam):
    for j in range(1, 7):
        pts, _ = gamma_j(w7, w7_fam, j, with_ideal=False)
        assert (pts == []) == is_constant_jrank(w7, w7_fam, j)


def test_gamma_of_sum_with_constant_summand(w7, w7_fam):
    # adding a free module does not move the non-maximal locus
    f = free_module(w7.group, 1)
    s = direct_sum(w7, f)
    for j in (1, 2, 3):
        a, _ = gamma_j(s, w7_fam, j, with_ideal=False)
        b, _ = gamma_j(w7, w7_fam, j, with_ideal=False)
        assert [fp.label for fp in a] == [fp.label for fp in b]


def test_gamma_invariant_under_double_shift():
    G = additive_infinitesimal(3, 2)
    m = cyclic_quotient(3)
    m = ModuleRep(G, m.generators)  # additive flag keeps omega applicable
    fam = LinearPiFamily(G)
    m2 = omega_iterated(m, 2)
    for j in (1, 2):
        a, _ = gamma_j(m, fam, j, with_ideal=False)
        b, _ = gamma_j(m2, fam, j, with_ideal=False)
        assert [fp.label for fp in a] == [fp.label for fp in b]


def test_gamma_union_is_union_of_levels(w7, w7_fam):
    union = {fp.label for fp in gamma(w7, w7_fam)}
    per_j = set()
    for j in range(1, 7):
        pts, _ = gamma_j(w7, w7_fam, j, with_ideal=False)
        per_j |= {fp.label for fp in pts}
    assert union == per_j


def test_strata_flip_compatibility():
    # shifting the module flips every stable stratum type pointwise
    G = additive_infinitesimal(3, 2)
    m = ModuleRep(G, cyclic_quotient(3).generators)
    fam = LinearPiFamily(G)
    an_m = FamilyAnalysis(m, fam)
    an_o = FamilyAnalysis(omega(m), fam)
    for t_m, t_o in zip(an_m.types, an_o.types):
        assert t_o.stable_part() == t_m.stable_part().flip()


# -- the matrix-orbit family ------------------------------------------------------------


def test_orbit_family_strata_are_orbits():
    m, fam = gln1_orbit_family(4, 5)
    rep = strata(m, fam, with_ideals=False)
    # one stratum per partition of 4, carrying exactly its own orbit label
    partitions = {(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)}
    seen = set()
    for t, pts in rep.strata.items():
        assert len(pts) == 1
        seen.add(pts[0].label)
        got = JordanType.parse(5, t)
        blocks = []
        for size in range(5, 0, -1):
            blocks.extend([size] * got.counts[size - 1])
        assert tuple(blocks) == pts[0].label
    assert seen == partitions


def test_orbit_family_generic_type_is_maximal():
    m, fam = gln1_orbit_family(4, 5)
    assert generic_jtype(m, fam) == J(5, "[4]")
    m7, fam7 = gln1_orbit_family(7, 5)
    # one full block and the remainder
    assert generic_jtype(m7, fam7) == J(5, "[5]+[2]")


def test_conjugation_invariance(rng):
    import numpy as np

    F = GF(5)
    m, fam = gln1_orbit_family(4, 5)
    for fp in fam.enumerate_points():
        X = fp.pi.matrix
        base = jordan_type_of_matrix(5, X)
        for _ in range(25):  # 25 per orbit, 125 total conjugations
            while True:
                g = Matrix(F, np.array([[rng.randrange(5) for _ in range(4)] for _ in range(4)], dtype=np.int64))
                if g.rank() == 4:
                    break
            conj = g @ X @ g.inverse()
            assert jordan_type_of_matrix(5, conj) == base
