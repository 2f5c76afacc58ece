"""Isotropy-group elements acting on the cone models.

Levi factors act blockwise on the graded ambient spaces; the unipotent piece
of the F4 isotropy group adds its degree-raising coupling from the quadratic
block to the linear one. Built on these: random symplectic matrices,
hyperplane transport, tangency tests and the tangency-implies-equality and
bundle-shape experiments.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .cones import (
    DEGENERATE_LINEAR,
    GENERIC,
    ConeModel,
    ConePoint,
    F4Alpha3VMRT,
    F4SectionCone,
    OddSymplecticSubVMRT,
    SymplecticVMRT,
    TransformedCone,
    pairing_perp,
)
from .errors import AmbientMismatch, ConstraintViolation
from .linalg import (
    GradedAmbient,
    Subspace,
    as_coords,
    complex_normal,
    kernel,
    symplectic_matrix,
    sym_square,
    sym_indices,
)
from . import sff as sff_mod


# ---------------------------------------------------------------------------
# group elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SymplecticLevi:
    """Block action (A on the k-dim factor, S symplectic on the 2m-dim factor)."""

    a_matrix: np.ndarray
    s_matrix: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a_matrix, dtype=complex)
        s = np.asarray(self.s_matrix, dtype=complex)
        object.__setattr__(self, "a_matrix", a)
        object.__setattr__(self, "s_matrix", s)
        if abs(np.linalg.det(a)) < 1e-12:
            raise ValueError("first factor must be invertible")
        omega = symplectic_matrix(s.shape[0] // 2)
        if np.linalg.norm(s.T @ omega @ s - omega) > 1e-10 * max(1.0, np.linalg.norm(s) ** 2):
            raise ConstraintViolation("second factor does not preserve the symplectic form")


@dataclass(frozen=True, eq=False)
class F4Levi:
    """Reductive piece: scalar t, unimodular A on the covector factor,
    unimodular B on the 2-dim factor; the vector factor moves by inv(A).T."""

    t: complex
    a_matrix: np.ndarray
    b_matrix: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a_matrix, dtype=complex)
        b = np.asarray(self.b_matrix, dtype=complex)
        object.__setattr__(self, "a_matrix", a)
        object.__setattr__(self, "b_matrix", b)
        if abs(complex(self.t)) < 1e-12:
            raise ValueError("t must be nonzero")
        if abs(np.linalg.det(a) - 1.0) > 1e-10 or abs(np.linalg.det(b) - 1.0) > 1e-10:
            raise ConstraintViolation("Levi factors must have determinant 1")


@dataclass(frozen=True, eq=False)
class F4UnipotentH1:
    """First unipotent piece, parametrized by a vector e' and a covector q'*.

    Acts as identity plus the degree-raising map sending f ⊗ q² to
    <q'*, q> (f ∧ e') ⊗ q, with f ∧ e' realized through the fixed wedge
    identification (a cross product in coordinates).
    """

    e_vec: np.ndarray
    q_covec: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "e_vec", np.asarray(self.e_vec, dtype=complex).ravel())
        object.__setattr__(self, "q_covec", np.asarray(self.q_covec, dtype=complex).ravel())
        if self.e_vec.shape != (3,) or self.q_covec.shape != (2,):
            raise ValueError("expected a 3-vector and a 2-covector")


GroupElement = SymplecticLevi | F4Levi | F4UnipotentH1


def identity_levi_symplectic(k: int, m: int) -> SymplecticLevi:
    return SymplecticLevi(np.eye(k, dtype=complex), np.eye(2 * m, dtype=complex))


def identity_levi_f4() -> F4Levi:
    return F4Levi(1.0, np.eye(3, dtype=complex), np.eye(2, dtype=complex))


# ---------------------------------------------------------------------------
# action matrices
# ---------------------------------------------------------------------------

def _sym_square_matrix(a: np.ndarray) -> np.ndarray:
    """Induced map on symmetric-square flat coordinates: u∘v -> (Au)∘(Av)."""
    k = a.shape[0]
    idx = sym_indices(k)
    cols = []
    for (p, q) in idx:
        factor = 1.0 if p == q else 2.0
        cols.append(factor * sym_square(a[:, p], a[:, q]))
    return np.column_stack(cols)


def _cross_matrix(e_vec: np.ndarray) -> np.ndarray:
    """Matrix of f -> f x e' on coordinates (the wedge-contraction action)."""
    cols = [np.cross(np.eye(3, dtype=complex)[:, p], e_vec) for p in range(3)]
    return np.column_stack(cols)


def _iota_matrix(q_covec: np.ndarray) -> np.ndarray:
    """Contraction of the symmetric square by a covector: q² -> <q'*, q> q."""
    q1, q2 = q_covec
    return np.array([[q1, q2, 0.0], [0.0, q1, q2]], dtype=complex)


def action_matrix(h: GroupElement, ambient: GradedAmbient) -> np.ndarray:
    """Flat-coordinate matrix of the element on the given graded ambient."""
    labels = [lab for lab, _ in ambient.components]
    if isinstance(h, SymplecticLevi):
        if labels != ["UQ", "S2U"]:
            raise AmbientMismatch("symplectic Levi acts on the symplectic ambient")
        return scipy.linalg.block_diag(
            np.kron(h.a_matrix, h.s_matrix), _sym_square_matrix(h.a_matrix))
    if labels != ["EsQ", "ES2Q", "Q", "Es"]:
        raise AmbientMismatch("element acts on the F4 graded ambient")
    if isinstance(h, F4Levi):
        a_inv_t = np.linalg.inv(h.a_matrix).T
        t = complex(h.t)
        return scipy.linalg.block_diag(
            t * np.kron(h.a_matrix, h.b_matrix),
            t ** 2 * np.kron(a_inv_t, _sym_square_matrix(h.b_matrix)),
            t ** 3 * h.b_matrix,
            t ** 4 * h.a_matrix)
    if isinstance(h, F4UnipotentH1):
        n = ambient.total_dim
        mat = np.eye(n, dtype=complex)
        rows = ambient.offsets["EsQ"]
        cols = ambient.offsets["ES2Q"]
        mat[rows[0]:rows[1], cols[0]:cols[1]] = np.kron(
            _cross_matrix(h.e_vec), _iota_matrix(h.q_covec))
        return mat
    raise TypeError(f"unknown group element {type(h).__name__}")


def act(h: GroupElement, v, ambient: GradedAmbient | None = None) -> np.ndarray:
    """Apply the element to a flat ambient vector."""
    from .linalg import AmbientVector
    if isinstance(v, AmbientVector):
        ambient = v.ambient
    if ambient is None:
        raise ValueError("an ambient space is required for raw coordinate input")
    return action_matrix(h, ambient) @ as_coords(v, ambient)


def act_sequence(elements: list[GroupElement], v, ambient: GradedAmbient) -> np.ndarray:
    """Apply a product of elements; the last entry acts first."""
    out = as_coords(v, ambient)
    for h in reversed(elements):
        out = action_matrix(h, ambient) @ out
    return out


def compose(h1: GroupElement, h2: GroupElement) -> GroupElement:
    """Product of two Levi elements of the same variant (h2 acts first)."""
    if isinstance(h1, SymplecticLevi) and isinstance(h2, SymplecticLevi):
        return SymplecticLevi(h1.a_matrix @ h2.a_matrix, h1.s_matrix @ h2.s_matrix)
    if isinstance(h1, F4Levi) and isinstance(h2, F4Levi):
        return F4Levi(h1.t * h2.t, h1.a_matrix @ h2.a_matrix, h1.b_matrix @ h2.b_matrix)
    raise TypeError("composition is implemented for matching Levi variants")


# ---------------------------------------------------------------------------
# random elements
# ---------------------------------------------------------------------------

def random_symplectic(dim_q: int, rng: np.random.Generator) -> np.ndarray:
    """Exponential of a random Hamiltonian matrix; preserves the form exactly
    to working precision and has determinant 1."""
    if dim_q % 2 != 0:
        raise ValueError("symplectic matrices need even dimension")
    m = dim_q // 2
    omega = symplectic_matrix(m)
    x = complex_normal(rng, dim_q, dim_q)
    sym = (x + x.T) / 2.0
    ham = -omega @ sym  # omega^{-1} = -omega
    return scipy.linalg.expm(0.6 * ham)


def random_unimodular(n: int, rng: np.random.Generator) -> np.ndarray:
    for _ in range(16):
        a = complex_normal(rng, n, n) + 0.5 * np.eye(n)
        det = np.linalg.det(a)
        if abs(det) > 1e-3:
            return a / det ** (1.0 / n)
    raise RuntimeError("could not draw an invertible matrix")


def random_symplectic_levi(k: int, l: int, rng: np.random.Generator) -> SymplecticLevi:
    return SymplecticLevi(random_unimodular(k, rng), random_symplectic(2 * (l - k), rng))


def random_f4_levi(rng: np.random.Generator) -> F4Levi:
    t = complex_normal(rng, 1)[0]
    while abs(t) < 0.1:
        t = complex_normal(rng, 1)[0]
    return F4Levi(t, random_unimodular(3, rng), random_unimodular(2, rng))


def random_f4_unipotent(rng: np.random.Generator) -> F4UnipotentH1:
    return F4UnipotentH1(complex_normal(rng, 3), complex_normal(rng, 2))


# ---------------------------------------------------------------------------
# hyperplane transport
# ---------------------------------------------------------------------------

def _symplectic_reduce(x, pairs, omega):
    for v, w in pairs:
        x = x - (x @ omega @ w) * v + (x @ omega @ v) * w
    return x


def _complete_symplectic_basis(v0: np.ndarray, omega: np.ndarray) -> np.ndarray:
    """Darboux basis starting at v0, arranged to have Gram matrix omega."""
    n = v0.shape[0]
    m = n // 2
    candidates = [np.eye(n, dtype=complex)[:, i] for i in range(n)]
    pairs: list[tuple[np.ndarray, np.ndarray]] = []
    v = v0 / np.linalg.norm(v0)
    for _ in range(m):
        w = None
        for cand in candidates:
            y = _symplectic_reduce(cand, pairs, omega)
            pair_val = v @ omega @ y
            if abs(pair_val) > 1e-8:
                w = y / pair_val
                break
        if w is None:
            raise RuntimeError("failed to complete a symplectic basis")
        pairs.append((v, w))
        if len(pairs) == m:
            break
        v = None
        for cand in candidates:
            y = _symplectic_reduce(cand, pairs, omega)
            if np.linalg.norm(y) > 1e-8:
                v = y / np.linalg.norm(y)
                break
        if v is None:
            raise RuntimeError("failed to complete a symplectic basis")
    cols = [p[0] for p in pairs] + [p[1] for p in reversed(pairs)]
    return np.column_stack(cols)


def hyperplane_radical(q_space: Subspace) -> np.ndarray:
    """The kernel line of the symplectic form restricted to a hyperplane."""
    omega = symplectic_matrix(q_space.space_dim // 2)
    gram = q_space.basis.T @ omega @ q_space.basis
    rad = kernel(gram, 1e-10)
    if rad.dim != 1:
        raise ValueError("input is not a hyperplane of the symplectic space")
    v = q_space.basis @ rad.basis[:, 0]
    return v / np.linalg.norm(v)


def hyperplane_transport(q_a: Subspace, q_a_new: Subspace) -> np.ndarray:
    """A symplectic matrix carrying one hyperplane onto another.

    Both hyperplanes are encoded by the radical lines of the restricted form;
    the matrix maps a Darboux basis through one radical to a Darboux basis
    through the other.
    """
    n = q_a.space_dim
    if q_a.dim != n - 1 or q_a_new.dim != n - 1:
        raise ValueError("hyperplane transport needs codimension-1 inputs")
    omega = symplectic_matrix(n // 2)
    b_from = _complete_symplectic_basis(hyperplane_radical(q_a), omega)
    b_to = _complete_symplectic_basis(hyperplane_radical(q_a_new), omega)
    return b_to @ np.linalg.inv(b_from)


# ---------------------------------------------------------------------------
# transported sub-cones
# ---------------------------------------------------------------------------

def act_on_subcone(h: GroupElement, model: ConeModel) -> ConeModel:
    """The image cone, with distinguished subspaces transported.

    Levi images of the standard sections are again standard sections; a
    unipotent image is represented exactly as the pointwise image cone.
    """
    if isinstance(model, TransformedCone):
        return TransformedCone(model.base,
                               action_matrix(h, model.ambient) @ model.matrix)
    if isinstance(h, SymplecticLevi):
        if isinstance(model, OddSymplecticSubVMRT):
            return OddSymplecticSubVMRT(
                model.k, model.l, model.a,
                u_space=model.u_space.transform(h.a_matrix),
                q_space=model.q_space.transform(h.s_matrix))
        if isinstance(model, SymplecticVMRT):
            return model
        raise AmbientMismatch("symplectic Levi acts on the symplectic family")
    if isinstance(h, F4Levi):
        if isinstance(model, F4SectionCone):
            a_inv_t = np.linalg.inv(h.a_matrix).T
            return F4SectionCone(model.e_space.transform(h.a_matrix),
                                 model.f_space.transform(a_inv_t),
                                 model.name)
        if isinstance(model, F4Alpha3VMRT):
            return model
        raise AmbientMismatch("F4 Levi acts on the F4 family")
    if isinstance(h, F4UnipotentH1):
        if isinstance(model, (F4SectionCone, F4Alpha3VMRT)):
            return TransformedCone(model, action_matrix(h, model.ambient))
        raise AmbientMismatch("the unipotent piece acts on the F4 family")
    raise TypeError(f"unknown group element {type(h).__name__}")


def act_on_subcone_sequence(elements: list[GroupElement], model: ConeModel) -> ConeModel:
    out = model
    for h in reversed(elements):
        out = act_on_subcone(h, out)
    return out


@dataclass(frozen=True)
class TransportedSectionData:
    """Transported distinguished subspaces of an F4 section under a product
    h = (Levi) (unipotent): the covector space picks up the unipotent image
    of the vector space."""

    e_space_new: Subspace
    f_space_new: Subspace
    stabilizes: bool


def transported_section_data(elements: list[GroupElement],
                             section: F4SectionCone,
                             tol: float = 1e-8) -> TransportedSectionData:
    levis = [h for h in elements if isinstance(h, F4Levi)]
    unis = [h for h in elements if isinstance(h, F4UnipotentH1)]
    if len(levis) + len(unis) != len(elements):
        raise TypeError("expected F4 Levi and unipotent elements")
    a = np.eye(3, dtype=complex)
    for h in levis:
        a = h.a_matrix @ a
    e_cols = [a @ section.e_space.basis]
    for h in unis:
        e_cols.append(a @ (_cross_matrix(h.e_vec) @ section.f_space.basis))
    e_new = Subspace.from_spanning(np.hstack(e_cols), tol=tol)
    f_new = section.f_space.transform(np.linalg.inv(a).T)
    stab = e_new.equal(section.e_space, 1e-6) and f_new.equal(section.f_space, 1e-6)
    return TransportedSectionData(e_new, f_new, stab)


# ---------------------------------------------------------------------------
# tangency experiments
# ---------------------------------------------------------------------------

def tangency_test(sub1: ConeModel, sub2: ConeModel, v,
                  membership_tol: float = 1e-8, equal_tol: float = 1e-6) -> bool:
    """Whether the two sub-cones have equal tangent spaces at a common point."""
    v = as_coords(v, sub1.ambient)
    if sub1.ambient != sub2.ambient:
        raise AmbientMismatch("sub-cones live in different ambients")
    for mdl in (sub1, sub2):
        if not mdl.membership(v, membership_tol):
            raise ValueError(f"point is not on {mdl.name}")
    t1 = sub1.tangent_space_jacobian(sub1.point_from_coords(v))
    t2 = sub2.tangent_space_jacobian(sub2.point_from_coords(v))
    return t1.equal(t2, equal_tol)


def _intersection_point(section: F4SectionCone, elements: list[GroupElement],
                        data: TransportedSectionData,
                        rng: np.random.Generator) -> np.ndarray | None:
    """A common point of the section and its image.

    For a stabilizing product any point works; otherwise the image meets the
    section along the locus with vanishing covector part, pinned down by the
    rank-one block matching conditions in closed form.
    """
    if data.stabilizes:
        return section.sample_point(GENERIC, rng).ambient_coords
    a = np.eye(3, dtype=complex)
    for h in elements:
        if isinstance(h, F4Levi):
            a = h.a_matrix @ a
    a_e_action = np.linalg.inv(a).T  # action on the vector factor
    pre_image = section.f_space.transform(np.linalg.inv(a_e_action))
    line = section.f_space.intersect(pre_image)
    if line.dim == 0:
        return None
    f0 = line.basis[:, 0]
    q0 = None
    for h in elements:
        if isinstance(h, F4UnipotentH1):
            ker = kernel(h.q_covec[None, :], 1e-12)
            q0 = ker.basis[:, 0] if ker.dim else None
    if q0 is None:
        q0 = complex_normal(rng, 2)
        q0 = q0 / np.linalg.norm(q0)
    base = section.point({
        "e_star": np.zeros(section.e_space.dim, dtype=complex),
        "f": section.f_space.basis.conj().T @ f0,
        "q": q0,
    })
    coords = act_sequence(elements, base.ambient_coords, section.ambient)
    return coords / np.linalg.norm(coords)


@dataclass(frozen=True)
class TangencyExperimentReport:
    sampled: int
    with_intersection: int
    tangent: int
    tangent_and_equal: int
    violations: int

    @property
    def passed(self) -> bool:
        return self.violations == 0


def tangency_implies_equality_experiment(section: F4SectionCone, sampler, trials: int,
                                         rng: np.random.Generator,
                                         points_per_check: int = 6
                                         ) -> TangencyExperimentReport:
    """Over sampled isotropy elements: whenever the section and its image are
    tangent at a found common point, the transported distinguished subspaces
    must equal the originals and the image cone must coincide pointwise."""
    with_intersection = tangent = equal_count = violations = 0
    for _ in range(trials):
        elements = sampler(rng)
        data = transported_section_data(elements, section)
        image = act_on_subcone_sequence(elements, section)
        coords = _intersection_point(section, elements, data, rng)
        if coords is None:
            continue
        if not (section.membership(coords, 1e-7) and image.membership(coords, 1e-7)):
            continue
        with_intersection += 1
        if not tangency_test(section, image, coords, membership_tol=1e-7):
            continue
        tangent += 1
        equal = data.stabilizes
        if equal:
            for stratum in (GENERIC, DEGENERATE_LINEAR):
                for _ in range(points_per_check // 2):
                    pt = image.sample_point(stratum, rng)
                    if not section.membership(pt.ambient_coords, 1e-7):
                        equal = False
        if equal:
            equal_count += 1
        else:
            violations += 1
    return TangencyExperimentReport(trials, with_intersection, tangent,
                                    equal_count, violations)


def rank_pattern_comparison_section(section: F4SectionCone,
                                    rng: np.random.Generator) -> F4SectionCone:
    """The (2, 1)-pattern bundle through the section's covector line, used as
    the non-tangent comparison cone."""
    for _ in range(16):
        extra = complex_normal(rng, 3)
        cols = np.column_stack([section.e_space.basis, extra])
        e2 = Subspace.from_spanning(cols)
        if e2.dim == 2:
            return F4SectionCone.rank_pattern_21(e2)
    raise RuntimeError("could not extend the covector line")


def rank_pattern_non_tangency_probe(section: F4SectionCone, rng: np.random.Generator,
                                    probes: int) -> int:
    """Count tangent general intersection points between the section and the
    (2, 1)-pattern comparison cone; the expected count is zero."""
    other = rank_pattern_comparison_section(section, rng)
    common_f = section.f_space.intersect(other.f_space)
    tangent_hits = 0
    for _ in range(probes):
        e_coeff = complex_normal(rng, section.e_space.dim)
        f_full = common_f.basis @ complex_normal(rng, common_f.dim)
        q = complex_normal(rng, 2)
        pt = section.point({
            "e_star": e_coeff,
            "f": section.f_space.basis.conj().T @ f_full,
            "q": q,
        })
        coords = pt.ambient_coords / pt.norm
        if tangency_test(section, other, coords, membership_tol=1e-7):
            tangent_hits += 1
    return tangent_hits


def b3_stabilizer_sampler(section: F4SectionCone):
    """Sampler of isotropy products that stabilize a standard b3-type section:
    the Levi fixes the covector line and the unipotent parameter pairs to zero
    with it (so its image lands back inside the line)."""
    e_unit = section.e_space.basis[:, 0]
    if not np.allclose(e_unit, np.eye(3)[:, 0]):
        raise ValueError("stabilizer sampler expects the standard section")

    def sampler(rng: np.random.Generator) -> list[GroupElement]:
        a = np.eye(3, dtype=complex)
        a[0, 0] = 1.0 + complex_normal(rng, 1)[0] * 0.5
        a[0, 1:] = complex_normal(rng, 2)
        lower = random_unimodular(2, rng)
        a[1:, 1:] = lower
        a = a / np.linalg.det(a) ** (1.0 / 3.0)
        e_prime = np.concatenate([[0.0], complex_normal(rng, 2)])  # pairs to 0 with e1*
        t = 1.0 + 0.5 * complex_normal(rng, 1)[0]
        return [F4Levi(t, a, random_unimodular(2, rng)),
                F4UnipotentH1(e_prime, complex_normal(rng, 2))]

    return sampler


def generic_isotropy_sampler():
    def sampler(rng: np.random.Generator) -> list[GroupElement]:
        return [random_f4_levi(rng), random_f4_unipotent(rng)]
    return sampler


def mixed_isotropy_sampler(section: F4SectionCone):
    """Alternate stabilizing and generic isotropy elements."""
    stab = b3_stabilizer_sampler(section)
    gen = generic_isotropy_sampler()
    state = {"n": 0}

    def sampler(rng: np.random.Generator) -> list[GroupElement]:
        state["n"] += 1
        return stab(rng) if state["n"] % 2 == 0 else gen(rng)

    return sampler


# ---------------------------------------------------------------------------
# Levi forward checks
# ---------------------------------------------------------------------------

def fiber_rank(model: ConeModel, point: ConePoint, fiber_blocks: tuple[str, ...]) -> int:
    """Rank of the parametrization differential along the fiber directions."""
    mat, dirs = model.tangent_map(point.params)
    cols = [i for i, d in enumerate(dirs) if set(d) <= set(fiber_blocks)]
    sub = mat[:, cols]
    s = np.linalg.svd(sub, compute_uv=False)
    return int(np.sum(s > 1e-8 * s[0]))


def degree_split_probe(section: F4SectionCone, rng: np.random.Generator,
                       tol: float = 1e-12) -> tuple[int, int]:
    """Exact polynomial-degree probe along lines in the base factor.

    Returns (number of directions linear in the base parameter, number
    quadratic); the split identifies the bundle twisting pattern.
    """
    pt = section.sample_point(GENERIC, rng)
    params = pt.params

    def at(t: complex):
        scaled = dict(params)
        scaled["q"] = t * params["q"]
        return section.parametrize(scaled)

    v1, v2, v3 = at(1.0), at(2.0), at(3.0)
    amb = section.ambient
    lin1 = amb.block(v1, "EsQ")
    quad1 = amb.block(v1, "ES2Q")
    scale = max(np.linalg.norm(v1), 1.0)
    if np.linalg.norm(amb.block(v2, "EsQ") - 2.0 * lin1) > tol * 4 * scale:
        raise AssertionError("linear block does not scale linearly")
    if np.linalg.norm(amb.block(v2, "ES2Q") - 4.0 * quad1) > tol * 8 * scale:
        raise AssertionError("quadratic block does not scale quadratically")
    if np.linalg.norm(amb.block(v3, "EsQ") - 3.0 * lin1) > tol * 9 * scale:
        raise AssertionError("linear block does not scale linearly")
    if np.linalg.norm(amb.block(v3, "ES2Q") - 9.0 * quad1) > tol * 27 * scale:
        raise AssertionError("quadratic block does not scale quadratically")
    return section.e_space.dim, section.f_space.dim


@dataclass(frozen=True)
class LeviForwardReport:
    membership_ok: bool
    fiber_rank_expected: int
    fiber_rank_observed: int
    base_locus_counts: dict[str, int]
    base_locus_expected: dict[str, int]
    degree_split: tuple[int, int] | None

    @property
    def passed(self) -> bool:
        return (self.membership_ok
                and self.fiber_rank_observed == self.fiber_rank_expected
                and self.base_locus_counts == self.base_locus_expected)


def levi_equivalence_forward(sub_model: ConeModel, h: GroupElement,
                             rng: np.random.Generator, n_points: int = 10
                             ) -> LeviForwardReport:
    """Verify the Levi image of a section is a section of the same shape:
    ambient membership, fiber dimension over the base factor, base-locus
    component counts per stratum, and (F4) the bundle degree split."""
    image = act_on_subcone(h, sub_model)
    ambient = image.ambient_model()
    membership_ok = True
    for stratum in (GENERIC, DEGENERATE_LINEAR):
        for _ in range(n_points // 2):
            pt = image.sample_point(stratum, rng)
            if not ambient.membership(pt.ambient_coords, 1e-7):
                membership_ok = False
    if isinstance(image, OddSymplecticSubVMRT):
        fiber_blocks = ("q", "c")
        expected_rank = 2 * image.m
        expected_counts = {DEGENERATE_LINEAR: 2, GENERIC: 1}
        split = None
    else:
        fiber_blocks = ("e_star", "f")
        expected_rank = image.e_space.dim + image.f_space.dim
        expected_counts = {DEGENERATE_LINEAR: 3, GENERIC: 2}
        split = degree_split_probe(image, rng)
    probe_pt = image.sample_point(GENERIC, rng)
    observed_rank = fiber_rank(image, probe_pt, fiber_blocks)
    counts = {}
    for stratum in (DEGENERATE_LINEAR, GENERIC):
        pt = image.sample_point(stratum, rng)
        rep = sff_mod.sff_closed_form(image, pt)
        cands = base_locus_candidates(image, pt)
        report = sff_mod.base_locus(rep, rep.tangent_basis, cands, rng)
        counts[stratum] = report.component_count
    return LeviForwardReport(membership_ok, expected_rank, observed_rank,
                             counts, expected_counts, split)


# ---------------------------------------------------------------------------
# stratum candidate families for the base locus
# ---------------------------------------------------------------------------

def base_locus_candidates(model: ConeModel, point: ConePoint) -> list[Subspace]:
    """The stratum candidate subspaces of the base locus inside the sub-cone
    tangent space: the generator families through the point."""
    if isinstance(model, SymplecticVMRT):
        gens = model.tangent_generators(point)
        out = [Subspace.from_spanning(gens["horizontal"], model.ambient),
               Subspace.from_spanning(gens["vertical"], model.ambient)]
        return out
    if isinstance(model, F4Alpha3VMRT):
        e_star, f, q = model._full_efq(point.params)
        amb = model.ambient
        if isinstance(model, F4SectionCone):
            e_basis, f_basis = model.e_space.basis, model.f_space.basis
        else:
            e_basis = f_basis = np.eye(3, dtype=complex)
        cov_line = np.column_stack([
            amb.assemble({"EsQ": np.outer(e_basis[:, i], q).ravel()})
            for i in range(e_basis.shape[1])])
        if point.stratum == DEGENERATE_LINEAR:
            middle = np.column_stack([
                amb.assemble({"EsQ": np.outer(e_star, ej).ravel()})
                for ej in np.eye(2, dtype=complex).T])
        else:
            middle = np.column_stack([
                amb.assemble({"EsQ": np.outer(e_star, ej).ravel(),
                              "ES2Q": np.outer(f, 2.0 * sym_square(q, ej)).ravel()})
                for ej in np.eye(2, dtype=complex).T])
        quad = np.column_stack([
            amb.assemble({"ES2Q": np.outer(f_basis[:, i], sym_square(q, q)).ravel()})
            for i in range(f_basis.shape[1])])
        return [Subspace.from_spanning(cov_line, amb),
                Subspace.from_spanning(middle, amb),
                Subspace.from_spanning(quad, amb)]
    raise ValueError(f"no base-locus candidates for {model.name!r}")
