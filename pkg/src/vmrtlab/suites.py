"""Named verification suites over parameter grids, with derived RNG streams.

Each suite exercises one family of library invariants; a case derives its
generator from (seed, suite name, case index) so serial and parallel runs,
and repeated runs, produce identical reports.
"""

from __future__ import annotations

import time
import zlib
from dataclasses import dataclass, field

import numpy as np

from . import actions, sff
from .cones import (
    DEGENERATE_LINEAR,
    GENERIC,
    F4Alpha3VMRT,
    F4SectionCone,
    OddSymplecticSubVMRT,
    SegreBaseline,
    SymplecticVMRT,
)
from .errors import NumericalFailure
from .f4_grading import f4_root_grading
from .linalg import Subspace, complex_normal, symplectic_matrix
from .reporting import CaseResult, SuiteReport
from .schubert import (
    HOMOGENEOUS_SUBDIAGRAM,
    LINEAR_SPACE,
    NOT_SMOOTH_LISTED,
    ODD_SYMPLECTIC,
    SchubertShape,
    enumerate_shapes,
    schubert_classify,
)

SUITE_NAMES = (
    "cone-sanity",
    "sff-agreement",
    "nondegeneracy",
    "base-locus",
    "tangency",
    "levi-forward",
    "classifier",
    "f4-grading",
)

DEFAULT_KL_PAIRS = ((2, 4), (2, 5), (3, 5), (3, 6))
DEFAULT_TRIALS = {
    "cone-sanity": 100,
    "sff-agreement": 10,
    "nondegeneracy": 10,
    "base-locus": 10,
    "tangency": 20,
    "levi-forward": 4,
}


class ConfigError(ValueError):
    """Invalid scenario configuration (usage error)."""


@dataclass
class ScenarioConfig:
    seed: int
    suites: tuple[str, ...] = SUITE_NAMES
    kl_pairs: tuple[tuple[int, int], ...] = DEFAULT_KL_PAIRS
    trials: dict = field(default_factory=dict)
    rank_tol: float = 1e-8
    compare_tol: float = 1e-6
    classifier_max_l: int = 6

    def __post_init__(self):
        if self.seed is None:
            raise ConfigError("a seed is required; wall-clock seeding is not supported")
        self.seed = int(self.seed)
        if self.seed < 0:
            raise ConfigError("seed must be a nonnegative integer")
        self.suites = tuple(self.suites)
        for s in self.suites:
            if s not in SUITE_NAMES:
                raise ConfigError(f"unknown suite {s!r}; known: {', '.join(SUITE_NAMES)}")
        pairs = []
        for pair in self.kl_pairs:
            k, l = int(pair[0]), int(pair[1])
            if not (1 < k < l <= 8):
                raise ConfigError(f"grid pair ({k}, {l}) violates 1 < k < l <= 8")
            pairs.append((k, l))
        self.kl_pairs = tuple(pairs)
        if not self.kl_pairs:
            raise ConfigError("the (k, l) grid must be nonempty")
        for name, n in self.trials.items():
            if name not in DEFAULT_TRIALS:
                raise ConfigError(f"unknown trial key {name!r}")
            if int(n) < 1:
                raise ConfigError("trial counts must be >= 1")
        if not (0 < self.rank_tol < 1e-2) or not (0 < self.compare_tol < 1e-1):
            raise ConfigError("tolerances out of range")
        if not (3 <= self.classifier_max_l <= 8):
            raise ConfigError("classifier_max_l must be between 3 and 8")

    def n_trials(self, suite: str) -> int:
        return int(self.trials.get(suite, DEFAULT_TRIALS.get(suite, 10)))

    def record(self) -> dict:
        return {
            "seed": self.seed,
            "suites": list(self.suites),
            "kl_pairs": [list(p) for p in self.kl_pairs],
            "trials": {k: int(v) for k, v in sorted(self.trials.items())},
            "rank_tol": self.rank_tol,
            "compare_tol": self.compare_tol,
            "classifier_max_l": self.classifier_max_l,
        }


def case_rng(seed: int, suite: str, index: int) -> np.random.Generator:
    """Independent stream per (seed, suite, case index)."""
    key = zlib.crc32(suite.encode("utf-8"))
    return np.random.default_rng(np.random.SeedSequence(entropy=seed,
                                                        spawn_key=(key, index)))


def _odd_symplectic_a_values(k: int, nonlinear_only: bool) -> list[int]:
    # a = k-1 yields a projective-space section whose pair is degenerate
    top = k - 1 if nonlinear_only else k
    return list(range(0, top))


def _symplectic_tangent_vectors(rep_model, point, rng, n):
    t = rep_model.tangent_space_jacobian(point)
    vecs = t.basis @ complex_normal(rng, t.dim, n)
    return [vecs[:, i] for i in range(n)]


# ---------------------------------------------------------------------------
# suite implementations
# ---------------------------------------------------------------------------

def _suite_cone_sanity(config: ScenarioConfig) -> SuiteReport:
    cases = []
    trials = config.n_trials("cone-sanity")
    models = [SymplecticVMRT(k, l) for k, l in config.kl_pairs]
    models += [OddSymplecticSubVMRT(k, l, a)
               for k, l in config.kl_pairs for a in _odd_symplectic_a_values(k, False)]
    models += [F4Alpha3VMRT(), F4SectionCone.b3(), F4SectionCone.c2(),
               SegreBaseline(3, 2)]
    idx = 0
    for model in models:
        rng = case_rng(config.seed, "cone-sanity", idx); idx += 1
        strata = [GENERIC] if isinstance(model, SegreBaseline) else [GENERIC, DEGENERATE_LINEAR]
        ok = True
        max_tangent_gap = 0.0
        roundtrip_fail = 0
        for stratum in strata:
            for _ in range(trials):
                pt = model.sample_point(stratum, rng)
                if not model.membership(pt.ambient_coords, 1e-6):
                    roundtrip_fail += 1
            for _ in range(3):
                pt = model.sample_point(stratum, rng)
                closed = model.tangent_space_closed_form(pt, config.rank_tol)
                jac = model.tangent_space_jacobian(pt, config.rank_tol)
                if not closed.equal(jac, config.compare_tol):
                    ok = False
                if not closed.contains(pt.ambient_coords, 1e-6):
                    ok = False
        # sums of two points leave the cone; zero is excluded
        a = model.sample_point(GENERIC, rng).ambient_coords
        b = model.sample_point(GENERIC, rng).ambient_coords
        sum_rejected = not model.membership(a + b, 1e-6)
        zero_rejected = not model.membership(np.zeros_like(a), 1e-6)
        # ruling lines: the tangent space is constant along each ray
        pt = model.sample_point(GENERIC, rng)
        lam = complex_normal(rng, 1)[0]
        lam = lam / abs(lam)  # unit modulus keeps conditioning comparable
        t0 = model.tangent_space_jacobian(pt)
        t1 = model.tangent_space_jacobian(model.scale_point(pt, 2.0 * lam))
        ray_ok = t0.equal(t1, config.compare_tol)
        passed = (ok and sum_rejected and zero_rejected and ray_ok
                  and roundtrip_fail == 0)
        cases.append(CaseResult(
            name=model.name, params={"model": model.name}, stratum=None,
            passed=passed,
            metrics={"roundtrip_failures": roundtrip_fail,
                     "trials": trials,
                     "tangent_dim": t0.dim},
            diagnostics=None if passed else "membership or tangent checks failed"))
    # expected tangent dimensions and the F4 fiber quadric
    rng = case_rng(config.seed, "cone-sanity", idx); idx += 1
    dims_ok = True
    for k, l in config.kl_pairs:
        mdl = SymplecticVMRT(k, l)
        for stratum in (GENERIC, DEGENERATE_LINEAR):
            pt = mdl.sample_point(stratum, rng)
            if mdl.tangent_space_jacobian(pt, config.rank_tol).dim != k + 2 * (l - k):
                dims_ok = False
    f4 = F4Alpha3VMRT()
    for stratum in (GENERIC, DEGENERATE_LINEAR):
        pt = f4.sample_point(stratum, rng)
        if f4.tangent_space_jacobian(pt, config.rank_tol).dim != 6:
            dims_ok = False
    cases.append(CaseResult("tangent-dimensions", {}, None, dims_ok,
                            {"expected_f4": 6}))
    rng = case_rng(config.seed, "cone-sanity", idx); idx += 1
    quadric_ok = True
    for _ in range(trials):
        pt = f4.sample_point(GENERIC, rng)
        es, fv = pt.params["e_star"], pt.params["f"]
        if abs(np.dot(es, fv)) > 1e-10 * max(1.0, np.linalg.norm(es) * np.linalg.norm(fv)):
            quadric_ok = False
        off = dict(pt.params)
        off["f"] = fv + 0.1 * es.conj() / np.linalg.norm(es)
        coords = f4._assemble(off["e_star"], off["f"], off["q"])
        if f4.membership(coords, 1e-6):
            quadric_ok = False
    pt = f4.sample_point(GENERIC, rng)
    fiber_dim = actions.fiber_rank(f4, pt, ("e_star", "f"))
    cases.append(CaseResult("f4-fiber-quadric", {}, None,
                            quadric_ok and fiber_dim == 5,
                            {"fiber_dim": fiber_dim, "expected": 5}))
    rng = case_rng(config.seed, "cone-sanity", idx); idx += 1
    split_b3 = actions.degree_split_probe(F4SectionCone.b3(), rng)
    split_c2 = actions.degree_split_probe(F4SectionCone.c2(), rng)
    cases.append(CaseResult("bundle-degree-split", {}, None,
                            split_b3 == (1, 2) and split_c2 == (1, 1),
                            {"b3": list(split_b3), "c2": list(split_c2)}))
    return SuiteReport("cone-sanity", cases)


def _agreement_case(model, stratum, trials, rng, compare_tol):
    max_rel = 0.0
    for _ in range(trials):
        pt = model.sample_point(stratum, rng)
        form = sff.ClosedFormSFF(model, pt)
        tangent = model.tangent_space_jacobian(pt)
        vecs = tangent.basis @ complex_normal(rng, tangent.dim, 2)
        xi, zeta = vecs[:, 0], vecs[:, 1]
        closed = form.value(xi, zeta)
        oracle = sff.sff_oracle(model, pt, xi, zeta)
        rel = float(np.linalg.norm(closed - oracle) / (1.0 + np.linalg.norm(closed)))
        max_rel = max(max_rel, rel)
    return max_rel, max_rel <= compare_tol


def _suite_sff_agreement(config: ScenarioConfig) -> SuiteReport:
    cases = []
    trials = config.n_trials("sff-agreement")
    models = [SymplecticVMRT(k, l) for k, l in config.kl_pairs]
    models += [F4Alpha3VMRT(), SegreBaseline(3, 2)]
    idx = 0
    for model in models:
        strata = [GENERIC] if isinstance(model, SegreBaseline) else [GENERIC, DEGENERATE_LINEAR]
        for stratum in strata:
            rng = case_rng(config.seed, "sff-agreement", idx); idx += 1
            max_rel, ok = _agreement_case(model, stratum, trials, rng, config.compare_tol)
            cases.append(CaseResult(
                name=f"{model.name}", params={"model": model.name}, stratum=stratum,
                passed=ok, metrics={"max_rel_err": max_rel, "trials": trials},
                diagnostics=None if ok else "closed form disagrees with the oracle"))
    return SuiteReport("sff-agreement", cases)


def _nondegeneracy_case(amb, sub, stratum, trials, rng, expect_pass=True):
    worst_dim, worst_angle, ok = 0, 0.0, True
    for _ in range(trials):
        pt = sub.sample_point(stratum, rng)
        res = sff.check_pair_nondegenerate(amb, sub, pt)
        worst_dim = max(worst_dim, res.kernel_dim)
        worst_angle = max(worst_angle, res.angle_to_point)
        if expect_pass and not res.passed:
            ok = False
        if not expect_pass and res.kernel_dim <= 1:
            ok = False
    return ok, worst_dim, worst_angle


def _suite_nondegeneracy(config: ScenarioConfig) -> SuiteReport:
    cases = []
    trials = config.n_trials("nondegeneracy")
    idx = 0
    pairs = []
    for k, l in config.kl_pairs:
        for a in _odd_symplectic_a_values(k, True):
            pairs.append((SymplecticVMRT(k, l), OddSymplecticSubVMRT(k, l, a)))
    f4 = F4Alpha3VMRT()
    pairs.append((f4, F4SectionCone.b3()))
    pairs.append((f4, F4SectionCone.c2()))
    for amb, sub in pairs:
        for stratum in (GENERIC, DEGENERATE_LINEAR):
            rng = case_rng(config.seed, "nondegeneracy", idx); idx += 1
            ok, dim, angle = _nondegeneracy_case(amb, sub, stratum, trials, rng)
            cases.append(CaseResult(
                name=f"{sub.name} in {amb.name}", params={"pair": sub.name},
                stratum=stratum, passed=ok,
                metrics={"max_kernel_dim": dim, "max_angle": angle, "trials": trials},
                diagnostics=None if ok else "kernel is not the ruling line"))
    # negative control: a line section of the decomposable-tensor cone
    rng = case_rng(config.seed, "nondegeneracy", idx); idx += 1
    seg = SegreBaseline(3, 2)
    w_line = Subspace(np.eye(2, dtype=complex)[:, :1])
    seg_sub = SegreBaseline(3, 2, w_space=w_line)
    ok, dim, angle = _nondegeneracy_case(seg, seg_sub, GENERIC, trials, rng,
                                         expect_pass=False)
    cases.append(CaseResult(
        name="segre line section (control)", params={"pair": seg_sub.name},
        stratum=GENERIC, passed=ok,
        metrics={"min_expected_kernel_dim": 2, "max_kernel_dim": dim, "trials": trials},
        diagnostics=None if ok else "degenerate control unexpectedly nondegenerate"))
    return SuiteReport("nondegeneracy", cases)


def _base_locus_case(model, stratum, expected_count, trials, rng):
    ok, worst = True, 0
    nonnull_ok = True
    for _ in range(trials):
        pt = model.sample_point(stratum, rng)
        rep = sff.sff_closed_form(model, pt)
        cands = actions.base_locus_candidates(model, pt)
        report = sff.base_locus(rep, rep.tangent_basis, cands, rng,
                                samples_per_candidate=6, off_probes=4)
        worst = max(worst, abs(report.component_count - expected_count))
        if report.component_count != expected_count:
            ok = False
        if report.off_candidate_probes and not report.off_candidate_all_nonnull:
            nonnull_ok = False
    return ok and nonnull_ok, worst


def _suite_base_locus(config: ScenarioConfig) -> SuiteReport:
    cases = []
    trials = config.n_trials("base-locus")
    idx = 0

    def add(model, stratum, expected):
        nonlocal idx
        rng = case_rng(config.seed, "base-locus", idx); idx += 1
        ok, worst = _base_locus_case(model, stratum, expected, trials, rng)
        cases.append(CaseResult(
            name=model.name, params={"model": model.name}, stratum=stratum,
            passed=ok, metrics={"expected_components": expected,
                                "max_count_error": worst, "trials": trials},
            diagnostics=None if ok else "component count mismatch"))

    for k, l in config.kl_pairs:
        for a in _odd_symplectic_a_values(k, True):
            model = OddSymplecticSubVMRT(k, l, a)
            add(model, DEGENERATE_LINEAR, 2)
            add(model, GENERIC, 1)
    for section in (F4SectionCone.b3(), F4SectionCone.c2()):
        add(section, DEGENERATE_LINEAR, 3)
        add(section, GENERIC, 2)
    return SuiteReport("base-locus", cases)


def _symplectic_stabilizer_levi(model: OddSymplecticSubVMRT, rng):
    """A Levi element preserving the distinguished subspaces setwise."""
    k, m, a = model.k, model.m, model.a
    amat = np.eye(k, dtype=complex)
    d = k - a
    amat[:d, :d] = actions.random_unimodular(d, rng)
    if a:
        amat[d:, d:] = actions.random_unimodular(a, rng)
        amat[:d, d:] = 0.3 * complex_normal(rng, d, a)
    amat = amat / np.linalg.det(amat) ** (1.0 / k)
    n = 2 * m
    x = complex_normal(rng, n, n)
    sym = (x + x.T) / 2.0
    sym[0, :] = 0.0
    sym[:, 0] = 0.0
    ham = -symplectic_matrix(m) @ sym
    import scipy.linalg
    smat = scipy.linalg.expm(0.6 * ham)
    return actions.SymplecticLevi(amat, smat)


def _suite_tangency(config: ScenarioConfig) -> SuiteReport:
    cases = []
    trials = config.n_trials("tangency")
    section = F4SectionCone.b3()
    rng = case_rng(config.seed, "tangency", 0)
    report = actions.tangency_implies_equality_experiment(
        section, actions.mixed_isotropy_sampler(section), trials, rng)
    ok = report.passed and report.tangent >= 1
    cases.append(CaseResult(
        name="f4-b3 isotropy experiment", params={"trials": trials}, stratum=None,
        passed=ok,
        metrics={"with_intersection": report.with_intersection,
                 "tangent": report.tangent,
                 "tangent_and_equal": report.tangent_and_equal,
                 "violations": report.violations},
        diagnostics=None if ok else "tangent intersection without cone equality"))
    rng = case_rng(config.seed, "tangency", 1)
    hits = actions.rank_pattern_non_tangency_probe(section, rng, trials)
    cases.append(CaseResult(
        name="f4 rank-pattern comparison", params={"probes": trials}, stratum=None,
        passed=hits == 0, metrics={"tangent_hits": hits, "expected": 0},
        diagnostics=None if hits == 0 else "unexpected tangency of distinct bundle shapes"))
    # symplectic family: stabilizers fix the section (external cross-check)
    rng = case_rng(config.seed, "tangency", 2)
    k, l = config.kl_pairs[0]
    model = OddSymplecticSubVMRT(k, l, 0)
    sym_ok = True
    for _ in range(max(3, trials // 5)):
        h = _symplectic_stabilizer_levi(model, rng)
        image = actions.act_on_subcone(h, model)
        pt = model.sample_point(GENERIC, rng)
        if not image.membership(pt.ambient_coords, 1e-7):
            sym_ok = False
            continue
        if not actions.tangency_test(model, image, pt.ambient_coords,
                                     membership_tol=1e-7):
            sym_ok = False
        if not (image.u_space.equal(model.u_space, 1e-6)
                and image.q_space.equal(model.q_space, 1e-6)):
            sym_ok = False
    cases.append(CaseResult(
        name="symplectic stabilizer (external-fact cross-check)",
        params={"k": k, "l": l}, stratum=None, passed=sym_ok,
        metrics={}, diagnostics=None if sym_ok else "stabilizer image moved the section"))
    return SuiteReport("tangency", cases)


def _suite_levi_forward(config: ScenarioConfig) -> SuiteReport:
    cases = []
    trials = config.n_trials("levi-forward")
    idx = 0

    def add(model, make_h):
        nonlocal idx
        rng = case_rng(config.seed, "levi-forward", idx); idx += 1
        ok = True
        last = None
        for _ in range(trials):
            h = make_h(rng)
            report = actions.levi_equivalence_forward(model, h, rng)
            last = report
            if not report.passed:
                ok = False
        metrics = {}
        if last is not None:
            metrics = {"fiber_rank": last.fiber_rank_observed,
                       "expected_rank": last.fiber_rank_expected,
                       "counts": {k: v for k, v in last.base_locus_counts.items()}}
        cases.append(CaseResult(
            name=model.name, params={"model": model.name}, stratum=None, passed=ok,
            metrics=metrics,
            diagnostics=None if ok else "transported section changed shape"))

    for k, l in config.kl_pairs:
        for a in _odd_symplectic_a_values(k, True):
            add(OddSymplecticSubVMRT(k, l, a),
                lambda rng, k=k, l=l: actions.random_symplectic_levi(k, l, rng))
    add(F4SectionCone.b3(), lambda rng: actions.random_f4_levi(rng))
    add(F4SectionCone.c2(), lambda rng: actions.random_f4_levi(rng))
    return SuiteReport("levi-forward", cases)


def _reference_classification(shape: SchubertShape) -> str:
    """Independent transcription of the three smooth-case clauses."""
    k, l, a, b = shape.k, shape.l, shape.a, shape.b
    if (k < b <= l) or b == 2 * l - a:
        return HOMOGENEOUS_SUBDIAGRAM
    if a == k - 1 and l + 1 <= b <= 2 * l - k:
        return LINEAR_SPACE
    if b == 2 * l - a - 1:
        return ODD_SYMPLECTIC
    return NOT_SMOOTH_LISTED


def _suite_classifier(config: ScenarioConfig) -> SuiteReport:
    shapes = enumerate_shapes(config.classifier_max_l)
    mismatches = 0
    for shape in shapes:
        got = schubert_classify(shape)
        if got.case != _reference_classification(shape):
            mismatches += 1
        if got.case == ODD_SYMPLECTIC:
            series, node, paired = got.odd_symplectic_triple
            if not (series == shape.l - 1 and node == shape.k - shape.a
                    and paired == node - 1 and node >= 2):
                mismatches += 1
        if got.case == LINEAR_SPACE and got.linear_dim != shape.b - shape.k:
            mismatches += 1
    ok = mismatches == 0
    case = CaseResult("exhaustive-shapes", {"max_l": config.classifier_max_l},
                      None, ok, {"shapes": len(shapes), "mismatches": mismatches},
                      None if ok else "classifier disagrees with the clause table")
    return SuiteReport("classifier", [case])


def _suite_f4_grading(config: ScenarioConfig) -> SuiteReport:
    record = f4_root_grading()
    expected = {0: 12, 1: 6, 2: 9, 3: 2, 4: 3, -1: 6, -2: 9, -3: 2, -4: 3}
    dims_ok = all(record.dims.get(k) == v for k, v in expected.items())
    total = sum(v for k, v in record.dims.items() if k != 0) + record.dims[0]
    ok = dims_ok and record.c1 == 7 and total == 52
    case = CaseResult("root-grading", {}, None, ok,
                      {"dims": {str(k): v for k, v in sorted(record.dims.items())},
                       "c1": record.c1, "total_dim": total},
                      None if ok else "grading arithmetic mismatch")
    return SuiteReport("f4-grading", [case])


_SUITE_FUNCS = {
    "cone-sanity": _suite_cone_sanity,
    "sff-agreement": _suite_sff_agreement,
    "nondegeneracy": _suite_nondegeneracy,
    "base-locus": _suite_base_locus,
    "tangency": _suite_tangency,
    "levi-forward": _suite_levi_forward,
    "classifier": _suite_classifier,
    "f4-grading": _suite_f4_grading,
}


def run(config: ScenarioConfig) -> list[SuiteReport]:
    """Execute the configured suites deterministically for the given seed."""
    reports = []
    for suite in config.suites:
        start = time.perf_counter()
        report = _SUITE_FUNCS[suite](config)
        report.runtime_s = time.perf_counter() - start
        reports.append(report)
    return reports
