"""Complex dense linear algebra substrate.

Labeled graded ambient spaces, tolerance-aware subspace arithmetic (all
SVD-based), and the multilinear products every cone model is built from:
symmetrized squares, the dim-3 wedge identification, dual pairings and the
standard symplectic form.

All values are immutable after construction and all operations are pure;
randomness only ever enters through an explicit caller-owned generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import AmbientMismatch, NumericalFailure

#: rank / kernel decisions
DEFAULT_RANK_TOL = 1e-8
#: closed-form vs oracle comparisons (differentiation noise included)
DEFAULT_COMPARE_TOL = 1e-6


# ---------------------------------------------------------------------------
# graded ambient spaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GradedAmbient:
    """Ordered list of labeled tensor-space components with a flat layout.

    ``components`` is a tuple of ``(label, dim)`` pairs; flat coordinates are
    the concatenation of the component blocks in order.
    """

    components: tuple[tuple[str, int], ...]

    def __post_init__(self):
        labels = [lab for lab, _ in self.components]
        if len(set(labels)) != len(labels):
            raise ValueError("component labels must be unique")
        if any(d <= 0 for _, d in self.components):
            raise ValueError("component dims must be positive")

    @property
    def total_dim(self) -> int:
        return sum(d for _, d in self.components)

    @property
    def offsets(self) -> dict[str, tuple[int, int]]:
        out, pos = {}, 0
        for lab, d in self.components:
            out[lab] = (pos, pos + d)
            pos += d
        return out

    def block(self, coords: np.ndarray, label: str) -> np.ndarray:
        a, b = self.offsets[label]
        return coords[a:b]

    def assemble(self, blocks: dict[str, np.ndarray]) -> np.ndarray:
        """Flat vector with the given blocks; unmentioned blocks are zero."""
        out = np.zeros(self.total_dim, dtype=complex)
        off = self.offsets
        for lab, val in blocks.items():
            a, b = off[lab]
            val = np.asarray(val, dtype=complex).ravel()
            if val.shape != (b - a,):
                raise ValueError(f"block {lab!r}: expected length {b - a}, got {val.shape}")
            out[a:b] = val
        return out

    def zeros(self) -> np.ndarray:
        return np.zeros(self.total_dim, dtype=complex)


@dataclass(frozen=True, eq=False)
class AmbientVector:
    """A flat coordinate vector tied to its graded ambient space."""

    ambient: GradedAmbient
    coords: np.ndarray

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=complex)
        if coords.shape != (self.ambient.total_dim,):
            raise ValueError("coordinate length does not match ambient dimension")
        object.__setattr__(self, "coords", coords)

    def block(self, label: str) -> np.ndarray:
        return self.ambient.block(self.coords, label)


def as_coords(v, ambient: GradedAmbient | None = None) -> np.ndarray:
    """Accept an AmbientVector or a raw vector, returning flat coordinates."""
    if isinstance(v, AmbientVector):
        if ambient is not None and v.ambient != ambient:
            raise AmbientMismatch("vector belongs to a different ambient space")
        return v.coords
    arr = np.asarray(v, dtype=complex).ravel()
    if ambient is not None and arr.shape != (ambient.total_dim,):
        raise AmbientMismatch("coordinate length does not match ambient dimension")
    return arr


# ---------------------------------------------------------------------------
# numerical rank and subspaces
# ---------------------------------------------------------------------------

def _rank_from_singular_values(s: np.ndarray, tol: float) -> tuple[int, bool, str | None]:
    """Rank decision plus a stability verdict.

    A singular value within a factor 10 of the cutoff on either side makes the
    decision fragile; the result is then flagged rather than rejected.
    """
    if s.size == 0 or s[0] == 0.0:
        return 0, True, None
    cutoff = tol * s[0]
    rank = int(np.sum(s > cutoff))
    shaky = [float(x) for x in s if cutoff / 10.0 < x < cutoff * 10.0]
    if shaky:
        return rank, False, f"singular values near rank cutoff {cutoff:.3e}: {shaky}"
    return rank, True, None


def numerical_rank(mat: np.ndarray, tol: float = DEFAULT_RANK_TOL) -> int:
    """Rank of a complex matrix: singular values above ``tol`` relative to the largest."""
    mat = np.asarray(mat, dtype=complex)
    if mat.size == 0:
        return 0
    s = np.linalg.svd(mat, compute_uv=False)
    rank, _, _ = _rank_from_singular_values(s, tol)
    return rank


@dataclass(frozen=True, eq=False)
class Subspace:
    """Orthonormal column basis of a linear subspace, with a working tolerance.

    ``stable`` is False when the rank decision producing the basis was within
    a factor 10 of the cutoff; ``diagnostic`` then records the offending
    singular values.
    """

    basis: np.ndarray
    ambient: GradedAmbient | None = None
    tol: float = DEFAULT_RANK_TOL
    stable: bool = True
    diagnostic: str | None = None

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=complex)
        if basis.ndim != 2:
            raise ValueError("basis must be a 2-d array of column vectors")
        object.__setattr__(self, "basis", basis)

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_spanning(cls, columns: np.ndarray, ambient: GradedAmbient | None = None,
                      tol: float = DEFAULT_RANK_TOL) -> "Subspace":
        """Orthonormalize an arbitrary (possibly dependent) spanning set."""
        columns = np.asarray(columns, dtype=complex)
        if columns.ndim == 1:
            columns = columns[:, None]
        if columns.shape[1] == 0 or not np.any(columns):
            return cls(np.zeros((columns.shape[0], 0), dtype=complex), ambient, tol)
        u, s, _ = np.linalg.svd(columns, full_matrices=False)
        rank, stable, diag = _rank_from_singular_values(s, tol)
        return cls(u[:, :rank], ambient, tol, stable, diag)

    @classmethod
    def zero(cls, n: int, ambient: GradedAmbient | None = None,
             tol: float = DEFAULT_RANK_TOL) -> "Subspace":
        return cls(np.zeros((n, 0), dtype=complex), ambient, tol)

    # -- basic queries -----------------------------------------------------

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def space_dim(self) -> int:
        return self.basis.shape[0]

    def project(self, v) -> np.ndarray:
        """Orthogonal projection onto the subspace."""
        v = as_coords(v, self.ambient)
        if self.dim == 0:
            return np.zeros_like(v)
        return self.basis @ (self.basis.conj().T @ v)

    def complement_project(self, v) -> np.ndarray:
        """Component of ``v`` orthogonal to the subspace (the quotient representative)."""
        v = as_coords(v, self.ambient)
        return v - self.project(v)

    def contains(self, v, tol: float | None = None) -> bool:
        v = as_coords(v, self.ambient)
        nv = np.linalg.norm(v)
        if nv == 0.0:
            return True
        tol = self.tol if tol is None else tol
        return np.linalg.norm(self.complement_project(v)) <= tol * nv

    def contains_subspace(self, other: "Subspace", tol: float | None = None) -> bool:
        self._check_compatible(other)
        if other.dim == 0:
            return True
        tol = self.tol if tol is None else tol
        resid = other.basis - self.project_columns(other.basis)
        return float(np.max(np.linalg.norm(resid, axis=0))) <= tol

    def project_columns(self, cols: np.ndarray) -> np.ndarray:
        if self.dim == 0:
            return np.zeros_like(cols)
        return self.basis @ (self.basis.conj().T @ cols)

    def equal(self, other: "Subspace", tol: float | None = None) -> bool:
        """Equality as subspaces: same dimension and mutual containment at ``tol``."""
        self._check_compatible(other)
        if self.dim != other.dim:
            return False
        return self.contains_subspace(other, tol) and other.contains_subspace(self, tol)

    def distance(self, v) -> float:
        """Distance from the normalized vector to the subspace (sine of the angle)."""
        v = as_coords(v, self.ambient)
        nv = np.linalg.norm(v)
        if nv == 0.0:
            return 0.0
        return float(np.linalg.norm(self.complement_project(v / nv)))

    # -- arithmetic --------------------------------------------------------

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.space_dim, self.ambient, self.tol)
        stacked = np.hstack([self.basis, -other.basis])
        null = kernel(stacked, self.tol)
        if null.dim == 0:
            return Subspace.zero(self.space_dim, self.ambient, self.tol)
        vecs = self.basis @ null.basis[: self.dim, :]
        return Subspace.from_spanning(vecs, self.ambient, self.tol)

    def sum(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        return Subspace.from_spanning(np.hstack([self.basis, other.basis]),
                                      self.ambient, self.tol)

    def transform(self, mat: np.ndarray, ambient: GradedAmbient | None = None) -> "Subspace":
        """Image under an invertible linear map."""
        return Subspace.from_spanning(np.asarray(mat, dtype=complex) @ self.basis,
                                      ambient if ambient is not None else self.ambient,
                                      self.tol)

    def _check_compatible(self, other: "Subspace") -> None:
        if self.space_dim != other.space_dim:
            raise AmbientMismatch("subspaces live in spaces of different dimension")
        if self.ambient is not None and other.ambient is not None \
                and self.ambient != other.ambient:
            raise AmbientMismatch("subspaces live in different ambient spaces")


def kernel(mat: np.ndarray, tol: float = DEFAULT_RANK_TOL,
           ambient: GradedAmbient | None = None) -> Subspace:
    """Null space of a complex matrix as a Subspace of its column-index space."""
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2:
        raise ValueError("kernel expects a matrix")
    m, n = mat.shape
    if m == 0 or not np.any(mat):
        return Subspace(np.eye(n, dtype=complex), ambient, tol)
    _, s, vh = np.linalg.svd(mat, full_matrices=True)
    rank, stable, diag = _rank_from_singular_values(s, tol)
    basis = vh[rank:, :].conj().T
    return Subspace(basis, ambient, tol, stable, diag)


def quotient_project(space: Subspace, v) -> np.ndarray:
    """Representative of ``v + space`` : the component orthogonal to ``space``."""
    return space.complement_project(v)


def span_columns(cols: Sequence[np.ndarray], ambient: GradedAmbient | None = None,
                 tol: float = DEFAULT_RANK_TOL) -> Subspace:
    return Subspace.from_spanning(np.column_stack(list(cols)), ambient, tol)


# ---------------------------------------------------------------------------
# multilinear products
# ---------------------------------------------------------------------------

def sym_indices(k: int) -> list[tuple[int, int]]:
    """Coordinate order of the symmetric square: pairs (i, j), i <= j, lexicographic."""
    return [(i, j) for i in range(k) for j in range(i, k)]


def sym_dim(k: int) -> int:
    return k * (k + 1) // 2


def sym_square(u, v) -> np.ndarray:
    """Symmetrized product u∘v with (u∘v)_ij = (u_i v_j + u_j v_i) / 2.

    The 1/2 makes ``sym_square(u, u)`` the flat coordinates of the square of
    ``u`` and turns d/dt (u_t ∘ u_t) = 2 u ∘ u' into an exact identity.
    """
    u = np.asarray(u, dtype=complex).ravel()
    v = np.asarray(v, dtype=complex).ravel()
    if u.shape != v.shape:
        raise ValueError("sym_square: dimension mismatch")
    k = u.size
    mat = (np.outer(u, v) + np.outer(v, u)) / 2.0
    iu = np.triu_indices(k)
    return mat[iu]


def sym_matrix_from_flat(flat: np.ndarray, k: int) -> np.ndarray:
    """Symmetric k x k matrix from flat (i <= j) coordinates."""
    flat = np.asarray(flat, dtype=complex).ravel()
    if flat.size != sym_dim(k):
        raise ValueError("flat symmetric-square coordinates have wrong length")
    mat = np.zeros((k, k), dtype=complex)
    iu = np.triu_indices(k)
    mat[iu] = flat
    mat = mat + mat.T - np.diag(np.diag(mat))
    return mat


def wedge_to_E(f1s, f2s) -> np.ndarray:
    """Fixed identification of a wedge of two covectors in dim 3 with a vector.

    Uses the Levi-Civita symbol on the coordinate basis (the cross product),
    so e1* ^ e2* maps to e3.
    """
    f1s = np.asarray(f1s, dtype=complex).ravel()
    f2s = np.asarray(f2s, dtype=complex).ravel()
    if f1s.shape != (3,) or f2s.shape != (3,):
        raise ValueError("wedge_to_E requires dimension 3")
    return np.cross(f1s, f2s)


def pairing(es, f) -> complex:
    """Evaluation of a covector on a vector in the fixed dual bases (no conjugation)."""
    es = np.asarray(es, dtype=complex).ravel()
    f = np.asarray(f, dtype=complex).ravel()
    if es.shape != f.shape:
        raise ValueError("pairing: dimension mismatch")
    return complex(np.dot(es, f))


def symplectic_matrix(m: int) -> np.ndarray:
    """Gram matrix of the standard symplectic form on dimension 2m.

    Basis vectors j and 2m+1-j (1-based) pair to +1 for j <= m; antisymmetric,
    determinant 1.
    """
    n = 2 * m
    omega = np.zeros((n, n), dtype=complex)
    for i in range(m):
        omega[i, n - 1 - i] = 1.0
        omega[n - 1 - i, i] = -1.0
    return omega


def symplectic_form(q, qp) -> complex:
    """The standard symplectic form on an even-dimensional space."""
    q = np.asarray(q, dtype=complex).ravel()
    qp = np.asarray(qp, dtype=complex).ravel()
    if q.shape != qp.shape:
        raise ValueError("symplectic_form: dimension mismatch")
    if q.size % 2 != 0:
        raise ValueError("symplectic_form requires even dimension")
    omega = symplectic_matrix(q.size // 2)
    return complex(q @ omega @ qp)


# ---------------------------------------------------------------------------
# randomness helpers
# ---------------------------------------------------------------------------

def complex_normal(rng: np.random.Generator, *shape: int) -> np.ndarray:
    """Standard complex normal samples (unit total variance per entry)."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_unit_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    for _ in range(16):
        v = complex_normal(rng, n)
        nv = np.linalg.norm(v)
        if nv > 1e-3:
            return v / nv
    raise NumericalFailure("could not draw a unit vector")
