import random

import numpy as np
import pytest

from jordanstrata.fields import GF
from jordanstrata.matrix import Matrix
from jordanstrata.modrep import (
    GroupData,
    ModuleRep,
    free_module,
    quotient_module,
)


def column_space_basis(mats: list[Matrix]) -> Matrix:
    """Canonical basis of the joint column space, as columns."""
    stacked = Matrix.hstack(mats)
    R, pivots = stacked.transpose().rref()
    field = stacked.field
    rows = R[: len(pivots)]
    return Matrix(field, rows.T.copy(), _copy=False)


def stable_closure(m: ModuleRep, seed_vectors: Matrix) -> Matrix:
    """Smallest generator-stable subspace containing the given columns."""
    basis = column_space_basis([seed_vectors])
    while True:
        bigger = column_space_basis([basis] + [g @ basis for g in m.generators])
        if bigger.cols == basis.cols:
            return bigger
        basis = bigger


def random_module(group: GroupData, rng: random.Random, dim_cap: int = 10) -> ModuleRep:
    """Random stable quotient of a free module, dimension in 1..dim_cap."""
    field = GF(group.p)
    while True:
        free = free_module(group, rng.choice([1, 1, 2]))
        n = free.dim
        k = rng.randint(1, 3)
        cols = np.array(
            [[rng.randrange(field.q) for _ in range(k)] for _ in range(n)],
            dtype=np.int64,
        )
        sub = stable_closure(free, Matrix(field, cols, _copy=False))
        dim = n - sub.cols
        if 1 <= dim <= dim_cap:
            q, _ = quotient_module(free, sub)
            return q


@pytest.fixture(scope="session")
def rng():
    return random.Random(0x5EED)
