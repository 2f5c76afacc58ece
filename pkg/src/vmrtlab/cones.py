"""Parametrized affine-cone models in graded tensor spaces.

Each model knows how to parametrize points, sample both strata, test
membership through block rank structure, and produce its tangent space two
independent ways: from the closed-form generator families and from a
finite-difference Jacobian of the parametrization.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass

import numpy as np

from .errors import AmbientMismatch, ConstraintViolation, NumericalFailure
from .linalg import (
    DEFAULT_RANK_TOL,
    GradedAmbient,
    Subspace,
    as_coords,
    complex_normal,
    pairing,
    sym_dim,
    sym_matrix_from_flat,
    sym_square,
)

GENERIC = "generic"
DEGENERATE_LINEAR = "degenerate-linear"
STRATA = (GENERIC, DEGENERATE_LINEAR)

_MAX_RESAMPLE = 32
#: finite-difference step factor for tangent maps
_JAC_STEP = 1e-4


@dataclass(frozen=True, eq=False)
class ConePoint:
    """A point on a cone model: parameters, stratum tag and flat coordinates."""

    model: "ConeModel"
    params: dict
    stratum: str
    ambient_coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "ambient_coords",
                           np.asarray(self.ambient_coords, dtype=complex))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.ambient_coords))


def _coeffs(rng, n):
    return complex_normal(rng, n)


class ConeModel(abc.ABC):
    """Common interface of the affine-cone models."""

    ambient: GradedAmbient
    name: str
    #: ordered parameter blocks: (name, complex dimension)
    param_blocks: tuple[tuple[str, int], ...]

    # -- parametrization ----------------------------------------------------

    @abc.abstractmethod
    def parametrize(self, params: dict) -> np.ndarray:
        """Flat ambient coordinates of the point with the given parameters."""

    def validate_params(self, params: dict) -> dict:
        out = {}
        for name, dim in self.param_blocks:
            if name not in params:
                raise ValueError(f"missing parameter block {name!r}")
            val = np.asarray(params[name], dtype=complex).ravel()
            if val.shape != (dim,):
                raise ValueError(f"parameter {name!r}: expected length {dim}, got {val.shape}")
            out[name] = val
        return out

    def point(self, params: dict, stratum: str | None = None) -> ConePoint:
        params = self.validate_params(params)
        coords = self.parametrize(params)
        if stratum is None:
            stratum = self.stratum_of(params)
        elif stratum != self.stratum_of(params):
            raise ValueError("stratum tag inconsistent with parameters")
        return ConePoint(self, params, stratum, coords)

    @abc.abstractmethod
    def stratum_of(self, params: dict) -> str:
        ...

    # -- sampling ------------------------------------------------------------

    def sample_point(self, stratum: str, rng: np.random.Generator,
                     normalize: bool = True) -> ConePoint:
        """Random point of the requested stratum, unit ambient length by default."""
        if stratum not in STRATA:
            raise ValueError(f"unknown stratum {stratum!r}")
        for _ in range(_MAX_RESAMPLE):
            params = self._draw_params(stratum, rng)
            if params is None:
                continue
            coords = self.parametrize(params)
            norm = np.linalg.norm(coords)
            if norm < 1e-6:
                continue
            if normalize:
                params = self._rescale_params(params, 1.0 / norm)
                coords = self.parametrize(params)
            return ConePoint(self, params, stratum, coords)
        raise NumericalFailure("sampling kept hitting degenerate parameters")

    @abc.abstractmethod
    def _draw_params(self, stratum: str, rng) -> dict | None:
        ...

    @abc.abstractmethod
    def _rescale_params(self, params: dict, scale: complex) -> dict:
        """Parameters of the point ``scale * parametrize(params)``."""

    def scale_point(self, point: ConePoint, scale: complex) -> ConePoint:
        params = self._rescale_params(point.params, scale)
        return ConePoint(self, params, point.stratum, self.parametrize(params))

    # -- membership ----------------------------------------------------------

    @abc.abstractmethod
    def membership(self, v, tol: float = 1e-8) -> bool:
        """Whether the vector lies on the cone, by block-structure tests."""

    def _check_ambient(self, v) -> np.ndarray:
        return as_coords(v, self.ambient)

    # -- tangent spaces --------------------------------------------------------

    @abc.abstractmethod
    def free_directions(self, params: dict) -> list[dict]:
        """Complex basis of admissible parameter directions at ``params``."""

    def param_line(self, params: dict, direction: dict):
        """Curve t -> params staying on the model; straight line by default."""
        def curve(t: float) -> dict:
            return {k: params[k] + t * direction.get(k, 0) for k in params}
        return curve

    def combine_directions(self, dirs: list[dict], gamma: np.ndarray) -> dict:
        out = {name: np.zeros(dim, dtype=complex) for name, dim in self.param_blocks}
        for g, d in zip(gamma, dirs):
            for k, v in d.items():
                out[k] = out[k] + g * np.asarray(v, dtype=complex)
        return out

    def direction_norm(self, direction: dict) -> float:
        return float(np.sqrt(sum(np.linalg.norm(np.asarray(v)) ** 2
                                 for v in direction.values())))

    def param_scale(self, params: dict) -> float:
        return 1.0 + float(np.sqrt(sum(np.linalg.norm(v) ** 2 for v in params.values())))

    def tangent_map(self, params: dict, step: float | None = None
                    ) -> tuple[np.ndarray, list[dict]]:
        """Numerical differential of the parametrization at ``params``.

        One complex column per free direction, by Richardson-extrapolated
        central differences along on-model curves. The parametrizations are
        cubic along parameter lines, so the extrapolation removes the
        truncation term entirely and the columns are exact to roundoff.
        """
        dirs = self.free_directions(params)
        h = (step if step is not None else _JAC_STEP * self.param_scale(params))
        cols = []
        for d in dirs:
            curve = self.param_line(params, d)
            d1 = (self.parametrize(curve(h)) - self.parametrize(curve(-h))) / (2.0 * h)
            d2 = (self.parametrize(curve(h / 2.0))
                  - self.parametrize(curve(-h / 2.0))) / h
            cols.append((4.0 * d2 - d1) / 3.0)
        return np.column_stack(cols), dirs

    def tangent_space_jacobian(self, point: ConePoint,
                               tol: float = DEFAULT_RANK_TOL) -> Subspace:
        mat, _ = self.tangent_map(point.params)
        return Subspace.from_spanning(mat, self.ambient, tol)

    @abc.abstractmethod
    def tangent_space_closed_form(self, point: ConePoint,
                                  tol: float = DEFAULT_RANK_TOL) -> Subspace:
        """Span of the closed-form tangent generator families."""

    # -- relation to the full cone ---------------------------------------------

    def ambient_model(self) -> "ConeModel":
        """The full cone this model is a linear section of (itself if full)."""
        return self

    def lift_point(self, point: ConePoint) -> ConePoint:
        """The same point as a point of the ambient model."""
        return point

    @abc.abstractmethod
    def params_from_coords(self, v, tol: float = 1e-8) -> dict:
        """Recover parameters from ambient coordinates of an on-cone vector."""

    def point_from_coords(self, v, tol: float = 1e-8) -> ConePoint:
        params = self.params_from_coords(v, tol)
        return self.point(params)

    @property
    def is_linear_cone(self) -> bool:
        """Whether the cone is a linear subspace (closed under addition)."""
        return False


# ---------------------------------------------------------------------------
# rank-one block helpers
# ---------------------------------------------------------------------------

def _rank_one_factors(block: np.ndarray, shape: tuple[int, int], tol: float
                      ) -> tuple[np.ndarray, np.ndarray] | None:
    """Factors (a, b) with block = outer(a, b) if the block is rank one.

    Returns None when the second singular value is not below tol times the
    first (or the block vanishes).
    """
    mat = block.reshape(shape)
    u, s, vh = np.linalg.svd(mat)
    if s[0] == 0.0:
        return None
    if s.size > 1 and s[1] > tol * s[0]:
        return None
    return u[:, 0], s[0] * vh[0, :]


def _is_zero_block(block: np.ndarray, tol: float, scale: float) -> bool:
    return float(np.linalg.norm(block)) <= tol * scale


# ---------------------------------------------------------------------------
# Segre baseline
# ---------------------------------------------------------------------------

class SegreBaseline(ConeModel):
    """Cone of decomposable tensors u⊗w, optionally with w restricted to a
    fixed subspace (the line sub-cone used as a nondegeneracy control)."""

    def __init__(self, dim_u: int, dim_w: int, w_space: Subspace | None = None):
        if dim_u < 2 or dim_w < 1:
            raise ValueError("SegreBaseline needs dim_u >= 2, dim_w >= 1")
        self.dim_u = dim_u
        self.dim_w = dim_w
        self.ambient = GradedAmbient((("UW", dim_u * dim_w),))
        if w_space is not None and w_space.space_dim != dim_w:
            raise ValueError("w_space must be a subspace of the second factor")
        self.w_space = w_space
        self._w_basis = np.eye(dim_w, dtype=complex) if w_space is None else w_space.basis
        self.name = f"segre({dim_u},{dim_w})" + ("" if w_space is None else "|sub")
        self.param_blocks = (("u", dim_u), ("w", self._w_basis.shape[1]))

    def parametrize(self, params):
        params = self.validate_params(params)
        w_full = self._w_basis @ params["w"]
        return np.outer(params["u"], w_full).ravel()

    def stratum_of(self, params):
        return GENERIC

    def _draw_params(self, stratum, rng):
        if stratum != GENERIC:
            raise ValueError("the decomposable-tensor cone has a single stratum")
        u = _coeffs(rng, self.dim_u)
        w = _coeffs(rng, self._w_basis.shape[1])
        if np.linalg.norm(u) < 0.1 or np.linalg.norm(w) < 0.1:
            return None
        return {"u": u, "w": w}

    def _rescale_params(self, params, scale):
        return {"u": params["u"], "w": scale * params["w"]}

    def membership(self, v, tol=1e-8):
        v = self._check_ambient(v)
        scale = np.linalg.norm(v)
        if scale <= tol:
            return False
        fac = _rank_one_factors(v, (self.dim_u, self.dim_w), tol)
        if fac is None:
            return False
        if self.w_space is not None:
            _, w = fac
            if not self.w_space.contains(w, tol):
                return False
        return True

    def free_directions(self, params):
        dirs = []
        for i in range(self.dim_u):
            d = np.zeros(self.dim_u, dtype=complex); d[i] = 1.0
            dirs.append({"u": d})
        for j in range(self._w_basis.shape[1]):
            d = np.zeros(self._w_basis.shape[1], dtype=complex); d[j] = 1.0
            dirs.append({"w": d})
        return dirs

    def tangent_space_closed_form(self, point, tol=DEFAULT_RANK_TOL):
        u = point.params["u"]
        w = self._w_basis @ point.params["w"]
        cols = []
        for j in range(self._w_basis.shape[1]):
            cols.append(np.outer(u, self._w_basis[:, j]).ravel())
        for i in range(self.dim_u):
            e = np.zeros(self.dim_u, dtype=complex); e[i] = 1.0
            cols.append(np.outer(e, w).ravel())
        return Subspace.from_spanning(np.column_stack(cols), self.ambient, tol)

    def ambient_model(self):
        if self.w_space is None:
            return self
        return SegreBaseline(self.dim_u, self.dim_w)

    def lift_point(self, point):
        if self.w_space is None:
            return point
        amb = self.ambient_model()
        params = {"u": point.params["u"], "w": self._w_basis @ point.params["w"]}
        return amb.point(params)

    def params_from_coords(self, v, tol=1e-8):
        v = self._check_ambient(v)
        fac = _rank_one_factors(v, (self.dim_u, self.dim_w), tol)
        if fac is None:
            raise ValueError("vector is not on the decomposable cone")
        u, w = fac
        return {"u": u, "w": self._w_basis.conj().T @ w}


# ---------------------------------------------------------------------------
# symplectic family
# ---------------------------------------------------------------------------

class SymplecticVMRT(ConeModel):
    """VMRT cone { u⊗q + c u² } of the rank-k isotropic Grassmannian in
    dimension 2l, inside (U⊗Q) ⊕ S²U with dim U = k, dim Q = 2(l-k)."""

    def __init__(self, k: int, l: int):
        if not (1 < k < l):
            raise ValueError("requires 1 < k < l")
        self.k, self.l = k, l
        self.m = l - k
        self.dim_q = 2 * self.m
        self.ambient = GradedAmbient((("UQ", k * self.dim_q), ("S2U", sym_dim(k))))
        self.name = f"symplectic({k},{l})"
        self.param_blocks = (("u", k), ("q", self.dim_q), ("c", 1))

    # subspaces the parameters range over; the full model is unrestricted
    def _u_basis(self):
        return np.eye(self.k, dtype=complex)

    def _q_basis(self):
        return np.eye(self.dim_q, dtype=complex)

    def _full_uqc(self, params):
        return params["u"], params["q"], params["c"][0]

    def parametrize(self, params):
        params = self.validate_params(params)
        u, q, c = self._full_uqc(params)
        return self.ambient.assemble({
            "UQ": np.outer(u, q).ravel(),
            "S2U": c * sym_square(u, u),
        })

    def stratum_of(self, params):
        return GENERIC if abs(complex(np.ravel(params["c"])[0])) > 1e-13 else DEGENERATE_LINEAR

    def _draw_params(self, stratum, rng):
        nu, nq = self.param_blocks[0][1], self.param_blocks[1][1]
        u = _coeffs(rng, nu)
        q = _coeffs(rng, nq)
        if np.linalg.norm(u) < 0.1 or np.linalg.norm(q) < 0.1:
            return None
        c = _coeffs(rng, 1) if stratum == GENERIC else np.zeros(1, dtype=complex)
        if stratum == GENERIC and abs(c[0]) < 0.05:
            return None
        return {"u": u, "q": q, "c": c}

    def _rescale_params(self, params, scale):
        return {"u": params["u"], "q": scale * params["q"], "c": scale * params["c"]}

    def membership(self, v, tol=1e-8):
        v = self._check_ambient(v)
        scale = float(np.linalg.norm(v))
        if scale <= tol:
            return False
        uq = self.ambient.block(v, "UQ")
        s2 = self.ambient.block(v, "S2U")
        if _is_zero_block(uq, tol, scale):
            # pure c u^2 point: the symmetric block must be rank one
            mat = sym_matrix_from_flat(s2, self.k)
            s = np.linalg.svd(mat, compute_uv=False)
            return s[0] > tol * scale and (s.size == 1 or s[1] <= tol * s[0])
        fac = _rank_one_factors(uq, (self.k, self.dim_q), tol)
        if fac is None:
            return False
        u, q = fac
        return self._sym_block_matches(s2, u, tol, scale)

    def _sym_block_matches(self, s2, u, tol, scale):
        """S²U block must be a multiple of u² for the given unit-ish u."""
        usq = sym_square(u, u)
        nu = np.linalg.norm(usq)
        c = np.vdot(usq, s2) / nu**2
        resid = s2 - c * usq
        return float(np.linalg.norm(resid)) <= tol * scale

    def free_directions(self, params):
        dirs = []
        for name, dim in self.param_blocks:
            for i in range(dim):
                d = np.zeros(dim, dtype=complex); d[i] = 1.0
                dirs.append({name: d})
        return dirs

    def tangent_generators(self, point: ConePoint) -> dict[str, np.ndarray]:
        """Closed-form generator families as labeled column blocks.

        vertical:   u ⊗ q'          for q' in the q-parameter space
        horizontal: u' ⊗ q + 2c u∘u' for u' in the u-parameter space
        square:     u²               (degenerate stratum only)
        """
        u, q, c = self._full_uqc(point.params)
        ub, qb = self._u_basis(), self._q_basis()
        vert = [self.ambient.assemble({"UQ": np.outer(u, qb[:, j]).ravel()})
                for j in range(qb.shape[1])]
        horiz = [self.ambient.assemble({
                    "UQ": np.outer(ub[:, i], q).ravel(),
                    "S2U": 2.0 * c * sym_square(u, ub[:, i]),
                 }) for i in range(ub.shape[1])]
        gens = {"vertical": np.column_stack(vert), "horizontal": np.column_stack(horiz)}
        if point.stratum == DEGENERATE_LINEAR:
            gens["square"] = self.ambient.assemble({"S2U": sym_square(u, u)})[:, None]
        return gens

    def tangent_space_closed_form(self, point, tol=DEFAULT_RANK_TOL):
        gens = self.tangent_generators(point)
        return Subspace.from_spanning(np.hstack(list(gens.values())), self.ambient, tol)

    def params_from_coords(self, v, tol=1e-8):
        v = self._check_ambient(v)
        uq = self.ambient.block(v, "UQ")
        s2 = self.ambient.block(v, "S2U")
        fac = _rank_one_factors(uq, (self.k, self.dim_q), tol)
        if fac is None:
            raise ValueError("vector is not on the cone (first block not rank one)")
        u, q = fac
        usq = sym_square(u, u)
        c = np.vdot(usq, s2) / np.linalg.norm(usq) ** 2
        return {"u": u, "q": q, "c": np.array([c])}


class OddSymplecticSubVMRT(SymplecticVMRT):
    """Sub-cone { u⊗q + c u² : u in U_a, q in Q_a } of the symplectic VMRT,
    with dim U_a = k - a and Q_a a hyperplane of Q.

    Default distinguished subspaces: U_a = first k-a coordinate directions,
    Q_a = span of the first 2m-1 symplectic basis vectors. Transported copies
    carry arbitrary subspaces.
    """

    def __init__(self, k: int, l: int, a: int,
                 u_space: Subspace | None = None, q_space: Subspace | None = None):
        super().__init__(k, l)
        if not (0 <= a < k):
            raise ValueError("requires 0 <= a < k")
        self.a = a
        if u_space is None:
            u_space = Subspace(np.eye(k, dtype=complex)[:, : k - a])
        if q_space is None:
            q_space = Subspace(np.eye(self.dim_q, dtype=complex)[:, : self.dim_q - 1])
        if u_space.dim != k - a:
            raise ValueError("u_space must have dimension k - a")
        if q_space.dim != self.dim_q - 1:
            raise ValueError("q_space must be a hyperplane of the symplectic factor")
        self.u_space, self.q_space = u_space, q_space
        self.name = f"odd-symplectic({k},{l},a={a})"
        self.param_blocks = (("u", k - a), ("q", self.dim_q - 1), ("c", 1))

    def _u_basis(self):
        return self.u_space.basis

    def _q_basis(self):
        return self.q_space.basis

    def _full_uqc(self, params):
        return (self.u_space.basis @ params["u"],
                self.q_space.basis @ params["q"],
                params["c"][0])

    def membership(self, v, tol=1e-8):
        if not super().membership(v, tol):
            return False
        v = self._check_ambient(v)
        uq = self.ambient.block(v, "UQ")
        s2 = self.ambient.block(v, "S2U")
        if _is_zero_block(uq, tol, float(np.linalg.norm(v))):
            mat = sym_matrix_from_flat(s2, self.k)
            u = np.linalg.svd(mat)[0][:, 0]
            return self.u_space.contains(u, tol)
        u, q = _rank_one_factors(uq, (self.k, self.dim_q), tol)
        return self.u_space.contains(u, tol) and self.q_space.contains(q, tol)

    def ambient_model(self):
        return SymplecticVMRT(self.k, self.l)

    def lift_point(self, point):
        u, q, c = self._full_uqc(point.params)
        return self.ambient_model().point({"u": u, "q": q, "c": np.array([c])})

    def params_from_coords(self, v, tol=1e-8):
        amb = super().params_from_coords(v, tol)
        u, q = amb["u"], amb["q"]
        if not (self.u_space.contains(u, tol) and self.q_space.contains(q, tol)):
            raise ValueError("vector is not on the sub-cone")
        return {"u": self.u_space.basis.conj().T @ u,
                "q": self.q_space.basis.conj().T @ q,
                "c": amb["c"]}


# ---------------------------------------------------------------------------
# F4 family
# ---------------------------------------------------------------------------

def _f4_ambient() -> GradedAmbient:
    # graded tangent space: (E*⊗Q) ⊕ (E⊗S²Q) ⊕ Q ⊕ E*
    return GradedAmbient((("EsQ", 6), ("ES2Q", 9), ("Q", 2), ("Es", 3)))


class F4Alpha3VMRT(ConeModel):
    """VMRT cone { e*⊗q + f⊗q² : <e*, f> = 0 } of the 20-dimensional
    F4-homogeneous space of the third (short) simple root."""

    #: pairing constraint tolerance at parametrization time
    PAIRING_TOL = 1e-10

    def __init__(self):
        self.ambient = _f4_ambient()
        self.name = "f4-alpha3"
        self.param_blocks = (("e_star", 3), ("f", 3), ("q", 2))

    def _full_efq(self, params):
        return params["e_star"], params["f"], params["q"]

    def _assemble(self, e_star, f, q):
        return self.ambient.assemble({
            "EsQ": np.outer(e_star, q).ravel(),
            "ES2Q": np.outer(f, sym_square(q, q)).ravel(),
        })

    def parametrize(self, params):
        params = self.validate_params(params)
        e_star, f, q = self._full_efq(params)
        scale = max(np.linalg.norm(e_star) * np.linalg.norm(f), 1.0)
        if abs(pairing(e_star, f)) > self.PAIRING_TOL * scale:
            raise ConstraintViolation("parameters violate <e*, f> = 0")
        self._check_section(e_star, f)
        return self._assemble(e_star, f, q)

    def _check_section(self, e_star, f):
        pass

    def stratum_of(self, params):
        return GENERIC if np.linalg.norm(params["f"]) > 1e-13 else DEGENERATE_LINEAR

    def _draw_params(self, stratum, rng):
        e_star = _coeffs(rng, 3)
        q = _coeffs(rng, 2)
        if np.linalg.norm(e_star) < 0.1 or np.linalg.norm(q) < 0.1:
            return None
        if stratum == GENERIC:
            f = _coeffs(rng, 3)
            # project onto the pairing-kernel of e*, keeping the constraint exact
            f = f - (pairing(e_star, f) / np.vdot(e_star, e_star)) * e_star.conj()
            if np.linalg.norm(f) < 0.1:
                return None
        else:
            f = np.zeros(3, dtype=complex)
        return {"e_star": e_star, "f": f, "q": q}

    def _rescale_params(self, params, scale):
        return {"e_star": scale * params["e_star"], "f": scale * params["f"],
                "q": params["q"]}

    def membership(self, v, tol=1e-8):
        v = self._check_ambient(v)
        scale = float(np.linalg.norm(v))
        if scale <= tol:
            return False
        if not _is_zero_block(self.ambient.block(v, "Q"), tol, scale):
            return False
        if not _is_zero_block(self.ambient.block(v, "Es"), tol, scale):
            return False
        b1 = self.ambient.block(v, "EsQ")
        b2 = self.ambient.block(v, "ES2Q")
        have1 = not _is_zero_block(b1, tol, scale)
        have2 = not _is_zero_block(b2, tol, scale)
        if not (have1 or have2):
            return False
        e_star = q1 = None
        if have1:
            fac = _rank_one_factors(b1, (3, 2), tol)
            if fac is None:
                return False
            e_star, q1 = fac
        if have2:
            fac = _rank_one_factors(b2, (3, 3), tol)
            if fac is None:
                return False
            f, w = fac
            # the S²Q factor must be a perfect square, of the same q when present
            if have1:
                sq = sym_square(q1, q1)
                resid = w - (np.vdot(sq, w) / np.linalg.norm(sq) ** 2) * sq
                if np.linalg.norm(resid) > tol * np.linalg.norm(w):
                    return False
            else:
                wmat = sym_matrix_from_flat(w, 2)
                s = np.linalg.svd(wmat, compute_uv=False)
                if s.size > 1 and s[1] > tol * s[0]:
                    return False
            if have1:
                pe = e_star / np.linalg.norm(e_star)
                pf = f / np.linalg.norm(f)
                if abs(pairing(pe, pf)) > tol:
                    return False
            if not self._factors_in_section(e_star, f, tol):
                return False
        elif not self._factors_in_section(e_star, None, tol):
            return False
        return True

    def _factors_in_section(self, e_star, f, tol):
        return True

    def free_directions(self, params):
        e_star, f, _ = self._full_efq(params)
        dirs = []
        for j in range(2):
            d = np.zeros(2, dtype=complex); d[j] = 1.0
            dirs.append({"q": d})
        # complex basis of {(de*, df) : <de*, f> + <e*, df> = 0}
        row = np.concatenate([f, e_star])[None, :]
        from .linalg import kernel
        ker = kernel(row, 1e-12)
        for j in range(ker.dim):
            vec = ker.basis[:, j]
            dirs.append({"e_star": vec[:3], "f": vec[3:]})
        return dirs

    def param_line(self, params, direction):
        e0, f0, q0 = self._full_efq(params)
        de = np.asarray(direction.get("e_star", np.zeros(3)), dtype=complex)
        df = np.asarray(direction.get("f", np.zeros(3)), dtype=complex)
        dq = np.asarray(direction.get("q", np.zeros(2)), dtype=complex)
        if np.linalg.norm(e0) < 1e-12:
            raise NumericalFailure("cannot build constrained curves at e* = 0")

        def curve(t: float) -> dict:
            e_t = e0 + t * de
            f_hat = f0 + t * df
            # restore <e*, f> = 0 exactly; O(t^2) correction for tangent directions
            corr = pairing(e_t, f_hat) / np.vdot(e_t, e_t)
            return {"e_star": e_t, "f": f_hat - corr * e_t.conj(), "q": q0 + t * dq}

        return curve

    def tangent_generators(self, point: ConePoint) -> dict[str, np.ndarray]:
        """Closed-form generator families.

        vertical: e'*⊗q + f'⊗q² over a basis of {<e'*, f> + <e*, f'> = 0}
        (the admissible parameter directions), horizontal: e*⊗q' + f⊗(2 q∘q').
        """
        e_star, f, q = self._full_efq(point.params)
        horiz, vert = [], []
        for d in self.free_directions(point.params):
            if "q" in d:
                qp = d["q"]
                horiz.append(self.ambient.assemble({
                    "EsQ": np.outer(e_star, qp).ravel(),
                    "ES2Q": np.outer(f, 2.0 * sym_square(q, qp)).ravel(),
                }))
            else:
                vert.append(self.ambient.assemble({
                    "EsQ": np.outer(d["e_star"], q).ravel(),
                    "ES2Q": np.outer(d["f"], sym_square(q, q)).ravel(),
                }))
        return {"horizontal": np.column_stack(horiz), "vertical": np.column_stack(vert)}

    def tangent_space_closed_form(self, point, tol=DEFAULT_RANK_TOL):
        gens = self.tangent_generators(point)
        return Subspace.from_spanning(np.hstack(list(gens.values())), self.ambient, tol)

    def params_from_coords(self, v, tol=1e-8):
        v = self._check_ambient(v)
        b1 = self.ambient.block(v, "EsQ")
        b2 = self.ambient.block(v, "ES2Q")
        scale = float(np.linalg.norm(v))
        if _is_zero_block(b1, tol, scale):
            # pure f ⊗ q² point: recover q from the square factor
            fac2 = _rank_one_factors(b2, (3, 3), tol)
            if fac2 is None:
                raise ValueError("vector is not on the cone")
            f_unit, w = fac2
            wmat = sym_matrix_from_flat(w, 2)
            j = int(np.argmax(np.abs(np.diag(wmat))))
            if abs(wmat[j, j]) <= tol * scale:
                raise ValueError("vector is not on the cone (square factor degenerate)")
            q = wmat[:, j] / np.sqrt(wmat[j, j])
            sq = sym_square(q, q)
            f = f_unit * (np.vdot(sq, w) / np.linalg.norm(sq) ** 2)
            return {"e_star": np.zeros(3, dtype=complex), "f": f, "q": q}
        fac = _rank_one_factors(b1, (3, 2), tol)
        if fac is None:
            raise ValueError("vector is not on the cone")
        e_star, q = fac
        if _is_zero_block(b2, tol, scale):
            f = np.zeros(3, dtype=complex)
        else:
            fac2 = _rank_one_factors(b2, (3, 3), tol)
            if fac2 is None:
                raise ValueError("vector is not on the cone")
            f, w = fac2
            sq = sym_square(q, q)
            f = f * (np.vdot(sq, w) / np.linalg.norm(sq) ** 2)
        return {"e_star": e_star, "f": f, "q": q}


class F4SectionCone(F4Alpha3VMRT):
    """Linear-section sub-cone { e*⊗q + f⊗q² : e* in R*, f in R' } of the F4
    VMRT; the fixed subspaces must pair to zero so the section lies on the cone.

    The two smooth Schubert sections are ``b3`` (dim R* = 1, R' = the
    pairing-perp of R*) and ``c2`` (dim R* = dim R' = 1); the rank-pattern
    variant with dim R* = 2, R' = its 1-dimensional perp is the comparison
    bundle used by the non-tangency experiment.
    """

    def __init__(self, e_space: Subspace, f_space: Subspace, label: str = "f4-section"):
        super().__init__()
        if e_space.space_dim != 3 or f_space.space_dim != 3:
            raise ValueError("section subspaces live in dimension 3")
        pairings = np.abs(e_space.basis.T @ f_space.basis)
        if pairings.size and pairings.max() > 1e-10:
            raise ConstraintViolation("section subspaces must pair to zero")
        self.e_space, self.f_space = e_space, f_space
        self.name = label
        self.param_blocks = (("e_star", e_space.dim), ("f", f_space.dim), ("q", 2))

    # -- fixed standard sections -------------------------------------------

    @classmethod
    def b3(cls, e_space: Subspace | None = None, f_space: Subspace | None = None
           ) -> "F4SectionCone":
        """dim-1 e*-space with its full 2-dimensional pairing-perp f-space."""
        if e_space is None:
            e_space = Subspace(np.eye(3, dtype=complex)[:, :1])
        if f_space is None:
            f_space = pairing_perp(e_space)
        if e_space.dim != 1 or f_space.dim != 2:
            raise ValueError("b3 section needs dims (1, 2)")
        return cls(e_space, f_space, "f4-schubert-b3")

    @classmethod
    def c2(cls, e_space: Subspace | None = None, f_space: Subspace | None = None
           ) -> "F4SectionCone":
        """dim-1 e*-space with a fixed line inside its pairing-perp."""
        if e_space is None:
            e_space = Subspace(np.eye(3, dtype=complex)[:, :1])
        if f_space is None:
            f_space = Subspace(np.eye(3, dtype=complex)[:, 1:2])
        if e_space.dim != 1 or f_space.dim != 1:
            raise ValueError("c2 section needs dims (1, 1)")
        return cls(e_space, f_space, "f4-schubert-c2")

    @classmethod
    def rank_pattern_21(cls, e_space: Subspace) -> "F4SectionCone":
        """dim-2 e*-space with its 1-dimensional pairing-perp f-space."""
        if e_space.dim != 2:
            raise ValueError("needs a 2-dimensional e*-space")
        return cls(e_space, pairing_perp(e_space), "f4-section-2+1")

    # -- overrides -----------------------------------------------------------

    def _full_efq(self, params):
        return (self.e_space.basis @ params["e_star"],
                self.f_space.basis @ params["f"],
                params["q"])

    def _check_section(self, e_star, f):
        if not self.e_space.contains(e_star, 1e-8) or not self.f_space.contains(f, 1e-8):
            raise ConstraintViolation("parameters leave the fixed section subspaces")

    def _draw_params(self, stratum, rng):
        a = _coeffs(rng, self.e_space.dim)
        q = _coeffs(rng, 2)
        if np.linalg.norm(a) < 0.1 or np.linalg.norm(q) < 0.1:
            return None
        if stratum == GENERIC:
            b = _coeffs(rng, self.f_space.dim)
            if np.linalg.norm(b) < 0.1:
                return None
        else:
            b = np.zeros(self.f_space.dim, dtype=complex)
        return {"e_star": a, "f": b, "q": q}

    def free_directions(self, params):
        # the section subspaces pair to zero, so every direction is admissible
        dirs = []
        for name, dim in self.param_blocks:
            for i in range(dim):
                d = np.zeros(dim, dtype=complex); d[i] = 1.0
                dirs.append({name: d})
        return dirs

    def param_line(self, params, direction):
        return ConeModel.param_line(self, params, direction)

    def parametrize(self, params):
        params = self.validate_params(params)
        e_star, f, q = self._full_efq(params)
        return self._assemble(e_star, f, q)

    def _factors_in_section(self, e_star, f, tol):
        if e_star is not None and not self.e_space.contains(e_star, tol):
            return False
        if f is not None and not self.f_space.contains(f, tol):
            return False
        return True

    def tangent_generators(self, point):
        e_star, f, q = self._full_efq(point.params)
        horiz = []
        for j in range(2):
            qp = np.zeros(2, dtype=complex); qp[j] = 1.0
            horiz.append(self.ambient.assemble({
                "EsQ": np.outer(e_star, qp).ravel(),
                "ES2Q": np.outer(f, 2.0 * sym_square(q, qp)).ravel(),
            }))
        vert = []
        for i in range(self.e_space.dim):
            vert.append(self.ambient.assemble({
                "EsQ": np.outer(self.e_space.basis[:, i], q).ravel()}))
        for i in range(self.f_space.dim):
            vert.append(self.ambient.assemble({
                "ES2Q": np.outer(self.f_space.basis[:, i], sym_square(q, q)).ravel()}))
        return {"horizontal": np.column_stack(horiz), "vertical": np.column_stack(vert)}

    def ambient_model(self):
        return F4Alpha3VMRT()

    def lift_point(self, point):
        e_star, f, q = self._full_efq(point.params)
        return self.ambient_model().point({"e_star": e_star, "f": f, "q": q})

    def params_from_coords(self, v, tol=1e-8):
        amb = super().params_from_coords(v, tol)
        e_star, f = amb["e_star"], amb["f"]
        if not self._factors_in_section(e_star, f if np.linalg.norm(f) > tol else None, tol):
            raise ValueError("vector is not on the section sub-cone")
        return {"e_star": self.e_space.basis.conj().T @ e_star,
                "f": self.f_space.basis.conj().T @ f,
                "q": amb["q"]}


def pairing_perp(e_space: Subspace) -> Subspace:
    """{ f : <e*, f> = 0 for all e* in the given covector space }."""
    from .linalg import kernel
    return kernel(e_space.basis.T, 1e-12)


# convenience aliases matching the model catalogue
F4SchubertB3 = F4SectionCone.b3
F4SchubertC2 = F4SectionCone.c2


# ---------------------------------------------------------------------------
# images of sub-cones under ambient-preserving linear maps
# ---------------------------------------------------------------------------

class TransformedCone(ConeModel):
    """Image of a cone model under an invertible linear map of its ambient
    space that preserves the full cone. Parametrized by acting on the base."""

    def __init__(self, base: ConeModel, matrix: np.ndarray, label: str | None = None):
        self.base = base
        self.matrix = np.asarray(matrix, dtype=complex)
        self.inverse = np.linalg.inv(self.matrix)
        self.ambient = base.ambient
        self.name = label or f"transformed({base.name})"
        self.param_blocks = base.param_blocks

    def parametrize(self, params):
        return self.matrix @ self.base.parametrize(params)

    def stratum_of(self, params):
        return self.base.stratum_of(params)

    def _draw_params(self, stratum, rng):
        return self.base._draw_params(stratum, rng)

    def _rescale_params(self, params, scale):
        return self.base._rescale_params(params, scale)

    def membership(self, v, tol=1e-8):
        return self.base.membership(self.inverse @ self._check_ambient(v), tol)

    def free_directions(self, params):
        return self.base.free_directions(params)

    def param_line(self, params, direction):
        return self.base.param_line(params, direction)

    def tangent_space_closed_form(self, point, tol=DEFAULT_RANK_TOL):
        base_point = self.base.point(point.params)
        return self.base.tangent_space_closed_form(base_point, tol).transform(self.matrix)

    def ambient_model(self):
        return self.base.ambient_model()

    def lift_point(self, point):
        return self.ambient_model().point_from_coords(point.ambient_coords)

    def params_from_coords(self, v, tol=1e-8):
        return self.base.params_from_coords(self.inverse @ self._check_ambient(v), tol)
