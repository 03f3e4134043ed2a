"""Exact local Jordan types, rank strata, and zero loci for modules over
small group-algebra families.

The layers, bottom up: exact fields and matrices (``fields``, ``matrix``),
symbolic polynomial matrices with certified generic ranks (``poly``),
Jordan-type combinatorics (``jordan``), module representations with probe
points and Heller shifts (``modrep``), probe families and stratum reports
(``strata``), cohomology classes and their loci (``homological``), named
fixtures (``gallery``), and the ``jordan-strata`` command line (``cli``).
"""

from .fields import GF, Field
from .jordan import Dominance, JordanType, jordan_type_of_matrix
from .matrix import Matrix
from .modrep import (
    GroupData,
    ModuleRep,
    PiPoint,
    additive_infinitesimal,
    direct_sum,
    dual,
    elementary_abelian,
    is_flat,
    jtype_at,
    linear_pi_point,
    omega,
    omega_inverse,
    tensor_module,
    theta,
    trivial_module,
)
from .poly import Poly, PolyMatrix, bareiss_rank, minors_ideal, symbolic_rank
from .strata import (
    FamilyAnalysis,
    LinearPiFamily,
    NilpotentOrbitFamily,
    SL2PiFamily,
    StratumReport,
    gamma,
    gamma_j,
    generic_jtype,
    is_constant_jrank,
    is_constant_jtype,
    max_jrank,
    standard_family,
    strata,
)
from .homological import (
    CohomClass,
    carlson_module,
    ext1_basis,
    ext_z_locus,
    extension_module,
    is_locally_split,
    z_locus,
)

__version__ = "0.1.0"
