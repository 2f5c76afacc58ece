"""Root-space grading of the F4 Lie algebra by the third simple root.

Constructs the 48 roots in the standard 4-dimensional realization with the
third and fourth simple roots short, grades by the third coefficient in the
simple-root basis, and sums coroot pairings over the positive part for the
first Chern number of the associated homogeneous space.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

#: simple roots in doubled coordinates (half-integer roots become integers):
#: a1 = e2 - e3, a2 = e3 - e4, a3 = e4, a4 = (e1 - e2 - e3 - e4) / 2
_SIMPLE_DOUBLED = np.array([
    [0, 2, -2, 0],
    [0, 0, 2, -2],
    [0, 0, 0, 2],
    [1, -1, -1, -1],
], dtype=np.int64)


def f4_roots_doubled() -> np.ndarray:
    """The 48 roots of F4 in doubled standard coordinates, deterministic order."""
    roots: list[tuple[int, int, int, int]] = []
    for i in range(4):
        for s in (2, -2):
            v = [0, 0, 0, 0]
            v[i] = s
            roots.append(tuple(v))
    for i in range(4):
        for j in range(i + 1, 4):
            for si in (2, -2):
                for sj in (2, -2):
                    v = [0, 0, 0, 0]
                    v[i], v[j] = si, sj
                    roots.append(tuple(v))
    for signs in product((1, -1), repeat=4):
        roots.append(signs)
    return np.array(sorted(roots), dtype=np.int64)


def simple_root_coefficients(root_doubled: np.ndarray) -> np.ndarray:
    """Integer coefficients of a root in the simple-root basis."""
    coeffs = np.linalg.solve(_SIMPLE_DOUBLED.T.astype(float),
                             root_doubled.astype(float))
    rounded = np.rint(coeffs).astype(np.int64)
    if not np.array_equal(_SIMPLE_DOUBLED.T @ rounded, root_doubled):
        raise ArithmeticError(f"non-integral simple-root coefficients for {root_doubled}")
    return rounded


@dataclass(frozen=True)
class GradingRecord:
    #: grade -> dimension of the graded piece (grade 0 includes the rank-4 Cartan part)
    dims: dict[int, int]
    #: first Chern number: sum of coroot pairings over the positive grades
    c1: int
    #: per-grade contributions to c1
    c1_by_grade: dict[int, int]


def f4_root_grading() -> GradingRecord:
    """Grade the F4 root system by the coefficient of the third simple root."""
    roots = f4_roots_doubled()
    alpha3_doubled = _SIMPLE_DOUBLED[2]
    # (a3, a3) = 1, so beta(coroot of a3) = 2 (beta, a3) = dot(doubled, doubled) / 2
    counts: dict[int, int] = {k: 0 for k in range(-4, 5)}
    chern: dict[int, int] = {k: 0 for k in range(1, 5)}
    for root in roots:
        grade = int(simple_root_coefficients(root)[2])
        counts[grade] += 1
        if grade > 0:
            pair = int(np.dot(root, alpha3_doubled)) // 2
            chern[grade] += pair
    dims = {k: (counts[k] + 4 if k == 0 else counts[k]) for k in range(-4, 5)}
    return GradingRecord(dims=dims, c1=sum(chern.values()), c1_by_grade=chern)
