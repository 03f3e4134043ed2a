"""Two descriptions of the non-maximal loci of the height-two sl2 simples.

``source_table`` transcribes the published four-case formula: for
lam = lam0 + p*lam1 and threshold lbar = lam0 + lam1, every level
j <= lbar is claimed to cut out the same set of orbit points.

``corrected_table`` refines the interior case.  Writing a = min + 1 and
b = max + 1 for the two twisted factors, the generic type is the tensor
type [a] (x) [b] and the special points have types b[a] and a[b].  The
power-rank formula gives

    rank_j([a] (x) [b]) -  rank_j(a[b])  > 0   iff  b - a + 2 <= j,
    rank_j([a] (x) [b]) -  rank_j(b[a])  > 0   iff  1 <= j   (a < b),

with the a = b case strict only from j = 2.  So the point with the larger
block size joins the locus only from level |lam0 - lam1| + 2 on, and for
lam0 = lam1 both points stay out at level 1.  The remaining cases of the
published formula are unaffected.  ``corrected_table`` was verified against
a brute-force enumeration (all lam, all j, p in {5, 7}) during development;
the deviations from ``source_table`` are exactly ``deviation_pairs``.
"""

from __future__ import annotations


def source_table(p: int, lam: int, j: int) -> frozenset:
    l0, l1 = lam % p, lam // p
    lbar = l0 + l1
    if j > lbar:
        return frozenset()
    if 0 < l0 < p - 1 and 0 < l1 < p - 1:
        return frozenset({(1, 0), (0, 1)})
    if (l0 != 0 and l1 == 0) or (l0 == p - 1 and l1 != p - 1):
        return frozenset({(1, 0)})
    if (l0 == 0 and l1 != 0) or (l0 != p - 1 and l1 == p - 1):
        return frozenset({(0, 1)})
    return frozenset()


def corrected_table(p: int, lam: int, j: int) -> frozenset:
    l0, l1 = lam % p, lam // p
    lbar = l0 + l1
    if j > lbar:
        return frozenset()
    if 0 < l0 < p - 1 and 0 < l1 < p - 1:
        if l0 == l1:
            return frozenset({(1, 0), (0, 1)}) if j >= 2 else frozenset()
        big = (1, 0) if l0 < l1 else (0, 1)
        small = (0, 1) if big == (1, 0) else (1, 0)
        out = {small}
        if j >= abs(l0 - l1) + 2:
            out.add(big)
        return frozenset(out)
    if (l0 != 0 and l1 == 0) or (l0 == p - 1 and l1 != p - 1):
        return frozenset({(1, 0)})
    if (l0 == 0 and l1 != 0) or (l0 != p - 1 and l1 == p - 1):
        return frozenset({(0, 1)})
    return frozenset()


def deviation_pairs(p: int) -> list[tuple[int, int]]:
    out = []
    for lam in range(p * p):
        for j in range(1, p):
            if source_table(p, lam, j) != corrected_table(p, lam, j):
                out.append((lam, j))
    return out
