"""Second fundamental forms of the cone models.

Two independent routes to the same bilinear map: a model-agnostic
finite-difference oracle built from the moving-vector-field description of
the Gauss map differential, and closed-form case tables assembled from the
tangent-generator decompositions. Kernels, pair nondegeneracy and base-locus
probes are derived from the closed form.

Quotient values are always represented by the component orthogonal to the
tangent space of the full cone at the base point.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cones import (
    DEGENERATE_LINEAR,
    GENERIC,
    ConeModel,
    ConePoint,
    F4Alpha3VMRT,
    SegreBaseline,
    SymplecticVMRT,
)
from .errors import NumericalFailure
from .linalg import (
    DEFAULT_RANK_TOL,
    Subspace,
    as_coords,
    complex_normal,
    kernel,
    pairing,
    sym_square,
)

#: finite-difference step factor for the oracle's curve parameter
ORACLE_STEP = 1e-4
#: allowed disagreement between the two central-difference estimates
RICHARDSON_TOL = 1e-5


# ---------------------------------------------------------------------------
# Gauss map
# ---------------------------------------------------------------------------

def gauss_map(model: ConeModel, point: ConePoint,
              tol: float = DEFAULT_RANK_TOL) -> Subspace:
    """Tangent space of the cone at the point, as a point of a Grassmannian.

    Delegates to the Jacobian tangent so the second fundamental form can be
    phrased as this map's differential.
    """
    return model.tangent_space_jacobian(point, tol)


# ---------------------------------------------------------------------------
# finite-difference oracle
# ---------------------------------------------------------------------------

def _tangent_projector_at(model: ConeModel, params: dict) -> np.ndarray:
    mat, _ = model.tangent_map(params)
    u, s, _ = np.linalg.svd(mat, full_matrices=False)
    rank = int(np.sum(s > DEFAULT_RANK_TOL * s[0]))
    b = u[:, :rank]
    return b @ b.conj().T


def sff_oracle(model: ConeModel, point: ConePoint, xi, zeta,
               step: float | None = None,
               richardson_tol: float = RICHARDSON_TOL) -> np.ndarray:
    """Second fundamental form of the full cone at the point, evaluated on a
    pair of tangent vectors by differentiating a moving vector field.

    The first argument is lifted to a parameter velocity through the
    parametrization's pseudoinverse; the moving field is the orthogonal
    projection of the second argument onto the tangent spaces along the
    resulting curve. Central differences at two step sizes are combined by
    Richardson extrapolation; disagreement beyond ``richardson_tol`` raises
    NumericalFailure carrying both estimates.
    """
    amb = model.ambient_model()
    apoint = model.lift_point(point)
    xi = as_coords(xi, amb.ambient)
    zeta = as_coords(zeta, amb.ambient)
    nxi, nzeta = np.linalg.norm(xi), np.linalg.norm(zeta)
    if nxi == 0.0 or nzeta == 0.0:
        return amb.ambient.zeros()
    xi_hat, zeta_hat = xi / nxi, zeta / nzeta

    mat, dirs = amb.tangent_map(apoint.params)
    u, s, _ = np.linalg.svd(mat, full_matrices=False)
    rank = int(np.sum(s > DEFAULT_RANK_TOL * s[0]))
    basis = u[:, :rank]
    tangent = Subspace(basis, amb.ambient)
    for name, vec in (("first", xi_hat), ("second", zeta_hat)):
        if np.linalg.norm(vec - tangent.project(vec)) > 1e-8:
            raise ValueError(f"{name} argument is not tangent to the cone")

    gamma = np.linalg.lstsq(mat, xi_hat, rcond=None)[0]
    delta = amb.combine_directions(dirs, gamma)
    dscale = amb.direction_norm(delta)
    if dscale == 0.0:
        raise NumericalFailure("could not lift the tangent vector to parameters")
    delta = {k: v / dscale for k, v in delta.items()}

    curve = amb.param_line(apoint.params, delta)
    h = (step if step is not None else ORACLE_STEP * amb.param_scale(apoint.params))

    def central(hh: float) -> np.ndarray:
        rho_p = _tangent_projector_at(amb, curve(hh)) @ zeta_hat
        rho_m = _tangent_projector_at(amb, curve(-hh)) @ zeta_hat
        return (rho_p - rho_m) / (2.0 * hh)

    d1 = central(h)
    d2 = central(h / 2.0)
    extrapolated = (4.0 * d2 - d1) / 3.0
    disagreement = float(np.linalg.norm(d1 - d2)) / (1.0 + float(np.linalg.norm(d2)))
    if disagreement > richardson_tol:
        raise NumericalFailure(
            "central-difference estimates disagree: "
            f"|D(h)-D(h/2)| = {disagreement:.3e} at h = {h:.3e}; "
            f"estimates {np.linalg.norm(d1):.6e} / {np.linalg.norm(d2):.6e}")
    value = tangent.complement_project(extrapolated)
    # the curve realizes xi_hat / dscale per unit t
    return value * dscale * nxi * nzeta


# ---------------------------------------------------------------------------
# closed form
# ---------------------------------------------------------------------------

class ClosedFormSFF:
    """Closed-form second fundamental form of a full cone at one point.

    Decomposes tangent vectors over the generator families with a
    pseudoinverse and applies the per-family case table, projecting values to
    the orthogonal complement of the tangent space.
    """

    def __init__(self, model: ConeModel, point: ConePoint):
        amb = model.ambient_model()
        self.model = amb
        self.point = model.lift_point(point)
        self.tangent = amb.tangent_space_closed_form(self.point)
        if isinstance(amb, F4Alpha3VMRT):
            self._setup_f4()
        elif isinstance(amb, SymplecticVMRT):
            self._setup_symplectic()
        elif isinstance(amb, SegreBaseline):
            self._setup_segre()
        else:
            raise ValueError(f"no closed-form tables for model {amb.name!r}")

    # -- symplectic: sigma(u'⊗q + 2c u∘u', u⊗q') = u'⊗q', and on the
    #    degenerate stratum additionally sigma(u'⊗q, u²) = 2 u∘u' ------------

    def _setup_symplectic(self):
        m = self.model
        p = self.point.params
        self._u, self._q, self._c = p["u"], p["q"], complex(p["c"][0])
        k, dq = m.k, m.dim_q
        cols = []
        for j in range(dq):
            e = np.zeros(dq, dtype=complex); e[j] = 1.0
            cols.append(m.ambient.assemble({"UQ": np.outer(self._u, e).ravel()}))
        for i in range(k):
            e = np.zeros(k, dtype=complex); e[i] = 1.0
            cols.append(m.ambient.assemble({
                "UQ": np.outer(e, self._q).ravel(),
                "S2U": 2.0 * self._c * sym_square(self._u, e)}))
        self._degenerate = self.point.stratum == DEGENERATE_LINEAR
        if self._degenerate:
            cols.append(m.ambient.assemble({"S2U": sym_square(self._u, self._u)}))
        self._gen = np.column_stack(cols)
        self._pinv = np.linalg.pinv(self._gen)
        self._split = (dq, dq + k)
        self._apply = self._apply_symplectic

    def _decompose_symplectic(self, vec):
        x = self._pinv @ vec
        dq, dqk = self._split
        qp, up = x[:dq], x[dq:dqk]
        cp = x[dqk] if self._degenerate else 0.0
        return qp, up, cp

    def _apply_symplectic(self, xi, zeta):
        qx, ux, cx = self._decompose_symplectic(xi)
        qz, uz, cz = self._decompose_symplectic(zeta)
        uq = np.outer(ux, qz) + np.outer(uz, qx)
        s2 = 2.0 * self._c * sym_square(ux, uz)
        s2 = s2 + 2.0 * cz * sym_square(self._u, ux) + 2.0 * cx * sym_square(self._u, uz)
        return self.model.ambient.assemble({"UQ": uq.ravel(), "S2U": s2})

    # -- F4: sigma(e*⊗q' + f⊗(2q∘q'), e'*⊗q) = e'*⊗q' etc., with the
    #    pairing-coupled term sigma(e'*⊗q, f'⊗q²) = -<e'*, f'> w ⊗ q² --------

    def _setup_f4(self):
        m = self.model
        p = self.point.params
        self._es, self._f, self._qq = p["e_star"], p["f"], p["q"]
        if np.linalg.norm(self._es) < 1e-12:
            raise ValueError("closed-form tables need a nonzero first factor")
        # any w with <e*, w> = 1 represents the coupled direction mod tangent
        self._w = self._es.conj() / np.vdot(self._es, self._es)
        cols = []
        for j in range(2):
            e = np.zeros(2, dtype=complex); e[j] = 1.0
            cols.append(m.ambient.assemble({
                "EsQ": np.outer(self._es, e).ravel(),
                "ES2Q": np.outer(self._f, 2.0 * sym_square(self._qq, e)).ravel()}))
        for i in range(3):
            e = np.zeros(3, dtype=complex); e[i] = 1.0
            cols.append(m.ambient.assemble({"EsQ": np.outer(e, self._qq).ravel()}))
        sq = sym_square(self._qq, self._qq)
        for i in range(3):
            e = np.zeros(3, dtype=complex); e[i] = 1.0
            cols.append(m.ambient.assemble({"ES2Q": np.outer(e, sq).ravel()}))
        self._gen = np.column_stack(cols)
        self._pinv = np.linalg.pinv(self._gen)
        self._apply = self._apply_f4

    def _decompose_f4(self, vec):
        x = self._pinv @ vec
        return x[:2], x[2:5], x[5:8]

    def _apply_f4(self, xi, zeta):
        qx, ex, fx = self._decompose_f4(xi)
        qz, ez, fz = self._decompose_f4(zeta)
        g1 = np.outer(ez, qx) + np.outer(ex, qz)
        g2 = np.outer(self._f, 2.0 * sym_square(qx, qz))
        g2 = g2 + np.outer(fz, 2.0 * sym_square(self._qq, qx))
        g2 = g2 + np.outer(fx, 2.0 * sym_square(self._qq, qz))
        coupled = pairing(ex, fz) + pairing(ez, fx)
        g2 = g2 - coupled * np.outer(self._w, sym_square(self._qq, self._qq))
        return self.model.ambient.assemble({"EsQ": g1.ravel(), "ES2Q": g2.ravel()})

    # -- Segre: sigma(u'⊗w, u⊗w') = u'⊗w' -----------------------------------

    def _setup_segre(self):
        m = self.model
        self._u = self.point.params["u"]
        self._wv = m._w_basis @ self.point.params["w"]
        cols = []
        for j in range(m.dim_w):
            e = np.zeros(m.dim_w, dtype=complex); e[j] = 1.0
            cols.append(np.outer(self._u, e).ravel())
        for i in range(m.dim_u):
            e = np.zeros(m.dim_u, dtype=complex); e[i] = 1.0
            cols.append(np.outer(e, self._wv).ravel())
        self._gen = np.column_stack(cols)
        self._pinv = np.linalg.pinv(self._gen)
        self._apply = self._apply_segre

    def _decompose_segre(self, vec):
        x = self._pinv @ vec
        return x[: self.model.dim_w], x[self.model.dim_w:]

    def _apply_segre(self, xi, zeta):
        wx, ux = self._decompose_segre(xi)
        wz, uz = self._decompose_segre(zeta)
        return (np.outer(ux, wz) + np.outer(uz, wx)).ravel()

    # -- public --------------------------------------------------------------

    def value(self, xi, zeta) -> np.ndarray:
        """sigma(xi, zeta) as the quotient representative."""
        xi = as_coords(xi, self.model.ambient)
        zeta = as_coords(zeta, self.model.ambient)
        return self.tangent.complement_project(self._apply(xi, zeta))


@dataclass(frozen=True, eq=False)
class SFFRep:
    """Second fundamental form at a point, tabulated on a tangent basis.

    ``values[i, j]`` is sigma(t_i, t_j) represented in the orthogonal
    complement of the full cone's tangent space ``quotient_tangent``;
    ``tangent_basis`` may be the tangent space of a sub-cone when the form
    was restricted.
    """

    base: ConePoint
    tangent_basis: Subspace
    quotient_tangent: Subspace
    values: np.ndarray
    quotient_of: ConeModel

    def coefficients(self, v) -> np.ndarray:
        v = as_coords(v, self.quotient_of.ambient)
        return self.tangent_basis.basis.conj().T @ v

    def evaluate(self, x, y) -> np.ndarray:
        """sigma on two vectors of the tangent-basis span (complex-bilinear)."""
        cx, cy = self.coefficients(x), self.coefficients(y)
        return np.einsum("i,j,ijn->n", cx, cy, self.values)


def sff_closed_form(model: ConeModel, point: ConePoint) -> SFFRep:
    """Assemble the closed-form second fundamental form on a tangent basis.

    For a full cone the basis spans its whole tangent space; for a sub-cone
    the ambient cone's form is restricted to the sub-cone's tangent space.
    """
    form = ClosedFormSFF(model, point)
    if model is form.model or model.ambient_model() is model:
        basis = form.tangent
    else:
        basis = model.tangent_space_closed_form(point)
    d = basis.dim
    n = form.model.ambient.total_dim
    values = np.zeros((d, d, n), dtype=complex)
    for i in range(d):
        for j in range(i, d):
            val = form.value(basis.basis[:, i], basis.basis[:, j])
            values[i, j] = val
            values[j, i] = val
    return SFFRep(base=form.point, tangent_basis=basis,
                  quotient_tangent=form.tangent, values=values,
                  quotient_of=form.model)


def sff_value_closed_form(model: ConeModel, point: ConePoint, xi, zeta) -> np.ndarray:
    """One closed-form value without assembling the full tensor."""
    return ClosedFormSFF(model, point).value(xi, zeta)


# ---------------------------------------------------------------------------
# kernels and nondegeneracy
# ---------------------------------------------------------------------------

def sff_kernel(rep: SFFRep, e_space: Subspace,
               tol: float = DEFAULT_RANK_TOL) -> Subspace:
    """{ zeta in the tangent space : sigma(zeta, xi) = 0 for all xi in E }."""
    basis = rep.tangent_basis
    if not basis.contains_subspace(e_space, 1e-6):
        raise ValueError("E is not contained in the tangent space of the form")
    ecoeff = basis.basis.conj().T @ e_space.basis
    if e_space.dim == 0:
        return Subspace(basis.basis, basis.ambient, tol)
    system = np.einsum("le,iln->eni", ecoeff, rep.values)
    system = system.reshape(-1, basis.dim)
    # judge the system against the overall magnitude of the form: a stacked
    # block that is pure numerical noise (e.g. E = the ruling line) must not
    # be rescaled into fake rank
    form_scale = float(np.max(np.abs(rep.values))) if rep.values.size else 0.0
    sys_scale = float(np.max(np.abs(system))) if system.size else 0.0
    if sys_scale <= tol * max(form_scale, 1e-30):
        return Subspace(basis.basis, basis.ambient, tol)
    coeff_kernel = kernel(system / sys_scale, tol)
    vecs = basis.basis @ coeff_kernel.basis
    return Subspace.from_spanning(vecs, basis.ambient, tol) if coeff_kernel.dim \
        else Subspace.zero(basis.space_dim, basis.ambient, tol)


@dataclass(frozen=True)
class NondegeneracyResult:
    passed: bool
    kernel_dim: int
    angle_to_point: float

    def __bool__(self):
        return self.passed


def check_pair_nondegenerate(ambient_model: ConeModel, sub_model: ConeModel,
                             point: ConePoint, tol: float = DEFAULT_RANK_TOL,
                             angle_tol: float = 1e-6) -> NondegeneracyResult:
    """Whether the ambient form against the sub-cone tangent space has kernel
    exactly the ruling line through the point."""
    lifted = sub_model.lift_point(point)
    if lifted.model.ambient != ambient_model.ambient:
        raise ValueError("sub-cone does not sit in the given ambient model")
    rep = sff_closed_form(ambient_model, lifted)
    e_space = sub_model.tangent_space_closed_form(point)
    kern = sff_kernel(rep, e_space, tol)
    angle = kern.distance(lifted.ambient_coords) if kern.dim else 1.0
    passed = kern.dim == 1 and angle < angle_tol
    return NondegeneracyResult(passed, kern.dim, float(angle))


# ---------------------------------------------------------------------------
# base locus
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BaseLocusReport:
    candidate_null: tuple[bool, ...]
    component_count: int
    off_candidate_probes: int
    off_candidate_nonnull: int
    max_candidate_residual: float
    min_off_candidate_norm: float

    @property
    def off_candidate_all_nonnull(self) -> bool:
        return self.off_candidate_nonnull == self.off_candidate_probes


def base_locus(rep: SFFRep, restricted_to: Subspace, candidates: list[Subspace],
               rng: np.random.Generator, samples_per_candidate: int = 8,
               off_probes: int = 8, null_tol: float = 1e-8,
               nonnull_tol: float = 1e-4, min_candidate_distance: float = 1e-2
               ) -> BaseLocusReport:
    """Probe which candidate subspaces consist of null vectors of the form.

    Each candidate passes when random unit vectors inside it have
    sigma(v, v) below ``null_tol``; random unit vectors of ``restricted_to``
    rejected away from every candidate must exceed ``nonnull_tol``. The count
    of passing candidates is the stratum-distinguishing invariant.
    """
    flags = []
    max_resid = 0.0
    for cand in candidates:
        ok = True
        for _ in range(samples_per_candidate):
            v = cand.basis @ complex_normal(rng, cand.dim)
            nv = np.linalg.norm(v)
            if nv < 1e-8:
                continue
            resid = float(np.linalg.norm(rep.evaluate(v / nv, v / nv)))
            if resid > null_tol:
                ok = False
                break
            max_resid = max(max_resid, resid)
        flags.append(ok)
    nonnull = 0
    total = 0
    min_norm = np.inf
    attempts = 0
    while total < off_probes and attempts < 50 * off_probes:
        attempts += 1
        v = restricted_to.basis @ complex_normal(rng, restricted_to.dim)
        nv = np.linalg.norm(v)
        if nv < 1e-8:
            continue
        v = v / nv
        if any(c.distance(v) < min_candidate_distance for c in candidates):
            continue
        total += 1
        norm = float(np.linalg.norm(rep.evaluate(v, v)))
        min_norm = min(min_norm, norm)
        if norm > nonnull_tol:
            nonnull += 1
    return BaseLocusReport(
        candidate_null=tuple(flags),
        component_count=int(sum(flags)),
        off_candidate_probes=total,
        off_candidate_nonnull=nonnull,
        max_candidate_residual=max_resid,
        min_off_candidate_norm=float(min_norm if total else np.nan),
    )
