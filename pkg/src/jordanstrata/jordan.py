"""Jordan types: partitions with parts bounded by the characteristic.

A Jordan type records, for each block size i in 1..p, how many nilpotent
Jordan blocks of that size occur.  The rank of the j-th power of a
nilpotent operator with block counts a_i is

    rank_j = sum_{i > j} a_i * (i - j)

and the block counts are recovered from the rank sequence by second
differences, so types and valid rank chains are interchangeable.

The dominance comparison used throughout is the rank-chain comparison:
a >= b iff rank_j(a) >= rank_j(b) for every j, which for equal dimensions
coincides with comparing descending partial sums of the partitions.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from .fields import GF
from .matrix import Matrix


class JordanError(ValueError):
    pass


class InvalidRankChain(JordanError):
    pass


class Dominance(enum.Enum):
    GREATER = "greater"
    LESS = "less"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class JordanType:
    p: int
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) != self.p:
            raise JordanError("counts must list block multiplicities for sizes 1..p")
        if any(c < 0 for c in self.counts):
            raise JordanError("block multiplicities must be nonnegative")

    # -- constructors -----------------------------------------------------------

    @classmethod
    def from_blocks(cls, p: int, blocks: dict[int, int]) -> "JordanType":
        counts = [0] * p
        for size, mult in blocks.items():
            if not (1 <= size <= p):
                raise JordanError(f"block size {size} out of range 1..{p}")
            counts[size - 1] += mult
        return cls(p, tuple(counts))

    @classmethod
    def from_rank_chain(cls, dim: int, ranks) -> "JordanType":
        """Recover the type from dim and the ranks of powers 1..p.

        The chain must be weakly decreasing and convex with r_p = 0, which is
        exactly the condition for the second differences to be nonnegative
        block counts.
        """
        ranks = list(ranks)
        p = len(ranks)
        chain = [dim] + ranks + [0]
        if ranks and ranks[-1] != 0:
            raise InvalidRankChain(f"rank of the p-th power must vanish, got {ranks[-1]}")
        for j in range(len(chain) - 1):
            if chain[j] < chain[j + 1]:
                raise InvalidRankChain(f"rank chain increases at step {j}: {chain}")
        counts = []
        for i in range(1, p + 1):
            a = chain[i - 1] - 2 * chain[i] + chain[i + 1]
            if a < 0:
                raise InvalidRankChain(f"rank chain not convex at j={i}: {chain}")
            counts.append(a)
        return cls(p, tuple(counts))

    @classmethod
    def parse(cls, p: int, text: str) -> "JordanType":
        """Parse the canonical rendering, e.g. '16[5]+24[3]+17[1]' or '0'."""
        text = text.replace(" ", "")
        if text in ("0", ""):
            return cls(p, (0,) * p)
        blocks: dict[int, int] = {}
        for part in text.split("+"):
            m = re.fullmatch(r"(\d*)\[(\d+)\]", part)
            if not m:
                raise JordanError(f"cannot parse Jordan type component {part!r}")
            mult = int(m.group(1)) if m.group(1) else 1
            size = int(m.group(2))
            if not (1 <= size <= p):
                raise JordanError(f"block size {size} out of range 1..{p}")
            blocks[size] = blocks.get(size, 0) + mult
        return cls.from_blocks(p, blocks)

    # -- queries -------------------------------------------------------------------

    def dimension(self) -> int:
        return sum(c * (i + 1) for i, c in enumerate(self.counts))

    def total_blocks(self) -> int:
        return sum(self.counts)

    def rank_of_power(self, j: int) -> int:
        if not (1 <= j <= self.p):
            raise JordanError(f"power {j} out of range 1..{self.p}")
        return sum(c * (i + 1 - j) for i, c in enumerate(self.counts) if i + 1 > j)

    def rank_chain(self) -> list[int]:
        return [self.rank_of_power(j) for j in range(1, self.p + 1)]

    def is_projective(self) -> bool:
        """All blocks have the maximal size p."""
        return all(c == 0 for c in self.counts[:-1])

    def projective_multiplicity(self) -> int:
        return self.counts[-1]

    # -- operations ------------------------------------------------------------------

    def compare(self, other: "JordanType") -> Dominance:
        if self.p != other.p:
            raise JordanError("comparing types over different characteristics")
        if self.dimension() != other.dimension():
            raise JordanError("dominance comparison needs equal dimensions")
        ge = le = True
        for j in range(1, self.p + 1):
            ra, rb = self.rank_of_power(j), other.rank_of_power(j)
            if ra < rb:
                ge = False
            if ra > rb:
                le = False
        if ge and le:
            return Dominance.EQUAL
        if ge:
            return Dominance.GREATER
        if le:
            return Dominance.LESS
        return Dominance.INCOMPARABLE

    def stable_part(self) -> "JordanType":
        return JordanType(self.p, self.counts[:-1] + (0,))

    def flip(self) -> "JordanType":
        """Reverse the stable block sizes: size i becomes size p - i."""
        if self.counts[-1] != 0:
            raise JordanError("flip is defined for stable types (no full blocks)")
        out = [0] * self.p
        for i, c in enumerate(self.counts[:-1]):
            if c:
                out[self.p - (i + 1) - 1] = c
        return JordanType(self.p, tuple(out))

    def __add__(self, other: "JordanType") -> "JordanType":
        if self.p != other.p:
            raise JordanError("adding types over different characteristics")
        return JordanType(self.p, tuple(a + b for a, b in zip(self.counts, other.counts)))

    def plus_projectives(self, k: int) -> "JordanType":
        counts = list(self.counts)
        counts[-1] += k
        return JordanType(self.p, tuple(counts))

    def nilpotent_matrix(self) -> Matrix:
        """Block-diagonal nilpotent matrix of this type over GF(p), largest first."""
        field = GF(self.p)
        n = self.dimension()
        import numpy as np

        a = np.zeros((n, n), dtype=np.int64)
        pos = 0
        for size in range(self.p, 0, -1):
            for _ in range(self.counts[size - 1]):
                for k in range(size - 1):
                    a[pos + k, pos + k + 1] = 1
                pos += size
        return Matrix(field, a, _copy=False)

    def tensor(self, other: "JordanType") -> "JordanType":
        """Type of J_a (x) 1 + 1 (x) J_b, read off an explicit matrix.

        The additive rule is the correct one for primitive generators; the
        construction itself is the oracle, no closed-form table is used.
        """
        if self.p != other.p:
            raise JordanError("tensoring types over different characteristics")
        if self.dimension() == 0 or other.dimension() == 0:
            return JordanType(self.p, (0,) * self.p)
        A = self.nilpotent_matrix()
        B = other.nilpotent_matrix()
        eye_a = Matrix.identity(A.field, A.rows)
        eye_b = Matrix.identity(B.field, B.rows)
        T = A.kron(eye_b) + eye_a.kron(B)
        return jordan_type_of_matrix(self.p, T)

    # -- rendering ------------------------------------------------------------------

    def __str__(self) -> str:
        parts = []
        for size in range(self.p, 0, -1):
            c = self.counts[size - 1]
            if c:
                parts.append(f"[{size}]" if c == 1 else f"{c}[{size}]")
        return "+".join(parts) if parts else "0"

    def render(self) -> str:
        return str(self)


def jordan_type_of_matrix(p: int, m: Matrix) -> JordanType:
    """Jordan type of a p-nilpotent square matrix from its rank chain."""
    if not m.is_square():
        raise JordanError("Jordan type needs a square matrix")
    ranks = m.rank_chain(p)
    if ranks and ranks[-1] != 0:
        raise JordanError("matrix is not p-nilpotent")
    return JordanType.from_rank_chain(m.rows, ranks)


# spec-level operation aliases ------------------------------------------------------


def from_rank_chain(dim: int, ranks) -> JordanType:
    return JordanType.from_rank_chain(dim, ranks)


def rank_of_power(a: JordanType, j: int) -> int:
    return a.rank_of_power(j)


def compare_dominance(a: JordanType, b: JordanType) -> Dominance:
    return a.compare(b)


def stable_part(a: JordanType) -> JordanType:
    return a.stable_part()


def flip(a: JordanType) -> JordanType:
    return a.flip()


def tensor_jtype(a: JordanType, b: JordanType) -> JordanType:
    return a.tensor(b)
