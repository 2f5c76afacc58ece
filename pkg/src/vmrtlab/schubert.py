"""Classifier for the smooth Schubert-variety shapes of the symplectic
Grassmannian, by the flag-bound pattern (k, l, a, b)."""

from __future__ import annotations

from dataclasses import dataclass

HOMOGENEOUS_SUBDIAGRAM = "homogeneous-subdiagram"
ODD_SYMPLECTIC = "odd-symplectic"
LINEAR_SPACE = "linear-space"
NOT_SMOOTH_LISTED = "not-smooth-listed"


@dataclass(frozen=True)
class SchubertShape:
    """Shape of the Schubert condition F_a ⊂ E ⊂ F_b in the rank-k isotropic
    Grassmannian of dimension 2l."""

    k: int
    l: int
    a: int
    b: int

    def __post_init__(self):
        if not (0 <= self.a < self.k < self.b <= 2 * self.l - self.a):
            raise ValueError("requires 0 <= a < k < b <= 2l - a")
        if not (1 < self.k < self.l):
            raise ValueError("requires 1 < k < l")


@dataclass(frozen=True)
class SchubertClass:
    case: str
    #: (series rank, marked node, paired node) for the odd-symplectic case
    odd_symplectic_triple: tuple[int, int, int] | None = None
    #: projective dimension for the linear-space case
    linear_dim: int | None = None


def schubert_classify(shape: SchubertShape) -> SchubertClass:
    """Sort a shape into the three smooth cases, or report it unlisted.

    When a = k-1 the interval condition produces a projective space; that
    case wins over the odd-symplectic pattern b = 2l-a-1, whose series data
    would degenerate there.
    """
    k, l, a, b = shape.k, shape.l, shape.a, shape.b
    if (k < b <= l) or b == 2 * l - a:
        return SchubertClass(HOMOGENEOUS_SUBDIAGRAM)
    if a == k - 1 and l + 1 <= b <= 2 * l - k:
        return SchubertClass(LINEAR_SPACE, linear_dim=b - k)
    if b == 2 * l - a - 1:
        return SchubertClass(ODD_SYMPLECTIC,
                             odd_symplectic_triple=(l - 1, k - a, k - a - 1))
    return SchubertClass(NOT_SMOOTH_LISTED)


def enumerate_shapes(max_l: int) -> list[SchubertShape]:
    """All valid shapes with l up to the bound (desk-scale exhaustive grid)."""
    out = []
    for l in range(3, max_l + 1):
        for k in range(2, l):
            for a in range(0, k):
                for b in range(k + 1, 2 * l - a + 1):
                    out.append(SchubertShape(k, l, a, b))
    return out
