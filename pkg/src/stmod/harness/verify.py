"""Verification sweeps behind ``stmod verify``.

Every check reports whether the computation agrees with the prediction of the
classification (every ghost is stably trivial exactly for C2 and C3), so a
sweep over C4 in override mode passes by *finding* ghosts.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt, PositiveInt

from stmod.algebra.exactlin import Matrix, kernel_basis, rank
from stmod.algebra.groups import (
    Group,
    Subgroup,
    center,
    cyclic,
    direct_product,
    is_cyclic,
    subgroup,
)
from stmod.algebra.reps import (
    Module,
    ModuleMap,
    direct_sum_all,
    dual_map,
    element_map,
    hom_space,
    induce,
    jordan_type,
    regular_module,
    trivial_module,
    zero_module,
)
from stmod.config.settings import Settings
from stmod.constructions.bundles import (
    CounterexampleBundle,
    c4_in_c8_ghost,
    cyclic_length2_ghost,
    cyclic_length2_map,
    rank2_ghost,
    verify_central_square,
)
from stmod.constructions.subgroups import classify_gh
from stmod.errors import HypothesisError
from stmod.harness.sampling import random_module, suspension_sums
from stmod.harness.trials import TrialPool, TrialResult, TrialState, trial_rng
from stmod.io.formats import group_payload, map_payload, module_payload
from stmod.io.report import Report, ReportBuilder
from stmod.logging_utils import log_sweep_event
from stmod.stable.category import (
    field_for,
    is_stable_iso,
    is_stably_trivial,
    phom_space,
    projective_free_core,
)
from stmod.stable.ghosts import is_dual_ghost, is_ghost
from stmod.stable.tate import TateClass, multiplication_matrix, omega_k, tate_cohomology

logger = structlog.get_logger(__name__)

__all__ = [
    "SearchConfig",
    "classify_gh",
    "verify_adjunction",
    "verify_all",
    "verify_counterexamples",
    "verify_decomposition",
    "verify_no_ghosts",
    "verify_syzygies",
    "verify_tate_fullness",
]


class SearchConfig(BaseModel):
    """Parameters of one verification run; the seed is always explicit."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    seed: NonNegativeInt
    dim_bound: PositiveInt = 8
    trials: PositiveInt = 200
    ghost_degree_bound: PositiveInt = 4
    iso_attempts: PositiveInt = 20
    max_workers: PositiveInt = 4
    fullness_window: PositiveInt = 3
    fullness_samples: NonNegativeInt = 4
    record_timing: bool = Field(default=False, exclude=True)

    @classmethod
    def from_settings(
        cls, settings: Settings, p: int, seed: int, **overrides: Any
    ) -> SearchConfig:
        """Settings for characteristic ``p`` with non-``None`` overrides applied."""
        values: dict[str, Any] = {
            "seed": seed,
            "dim_bound": settings.dim_bound_p2 if p == 2 else settings.dim_bound_p3,
            "trials": settings.trials,
            "ghost_degree_bound": settings.ghost_degree_bound,
            "iso_attempts": settings.iso_attempts,
            "max_workers": settings.max_workers,
            "fullness_window": settings.fullness_window,
            "fullness_samples": settings.fullness_samples,
            "record_timing": settings.record_timing,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def payload(self) -> dict[str, Any]:
        return self.model_dump()


def _builder(cfg: SearchConfig, **context: Any) -> ReportBuilder:
    return ReportBuilder({**cfg.payload(), **context}, record_timing=cfg.record_timing)


def _p(G: Group) -> int:
    return field_for(G).p


# No ghosts


@dataclass
class NoGhostTrial:
    index: int
    dims: tuple[int, int]
    jordan: tuple[int, ...]
    structural_ok: bool
    maps_checked: int
    violation: ModuleMap | None = None


def _allowed_blocks(G: Group) -> set[int]:
    """Jordan block sizes of Ω^0 k and Ω^1 k."""
    sizes: set[int] = set()
    for i in (0, 1):
        sizes.update(jordan_type(omega_k(G, i)).sizes)
    return sizes


def _replayed_module(G: Group, cfg: SearchConfig, index: int) -> Module:
    """The first module drawn by trial ``index``."""
    return random_module(G, field_for(G), cfg.dim_bound, trial_rng(cfg.seed, index))


def _trial_error_witness(
    G: Group, cfg: SearchConfig, result: TrialResult[Any]
) -> dict[str, Any]:
    return {
        "seed": cfg.seed,
        "trial": result.index,
        "error": result.error,
        "module": module_payload(_replayed_module(G, cfg, result.index)),
    }


def _sweep_witness(
    G: Group,
    cfg: SearchConfig,
    passed: bool,
    found: dict[str, Any] | None,
    errors: list[TrialResult[Any]],
) -> dict[str, Any] | None:
    """What a failed sampled check records: the offending object, a raising trial, or the run."""
    if found is not None:
        return found
    if errors:
        return _trial_error_witness(G, cfg, errors[0])
    if passed:
        return None
    return {"seed": cfg.seed, "trials": cfg.trials, "dim_bound": cfg.dim_bound}


def _ghost_candidates(M: Module, N: Module) -> list[ModuleMap]:
    maps = list(hom_space(M, N).basis)
    if M == N:
        maps.extend(element_map(M, x.index) for x in center(M.group) if x.index != 0)
    return maps


def _no_ghost_trial(
    G: Group, cfg: SearchConfig, allowed: set[int] | None
) -> Callable[[int, np.random.Generator], NoGhostTrial]:
    F = field_for(G)

    def trial(index: int, rng: np.random.Generator) -> NoGhostTrial:
        M = random_module(G, F, cfg.dim_bound, rng)
        N = M if rng.random() < 0.5 else random_module(G, F, cfg.dim_bound, rng)
        jordan: tuple[int, ...] = ()
        structural_ok = True
        if allowed is not None:
            jordan = jordan_type(M).sizes
            structural_ok = all(s in allowed for s in jordan if s < G.order)
        maps = _ghost_candidates(M, N)
        for f in maps:
            if is_ghost(f, cfg.ghost_degree_bound).is_ghost and not is_stably_trivial(f):
                return NoGhostTrial(index, (M.dim, N.dim), jordan, structural_ok, len(maps), f)
        return NoGhostTrial(index, (M.dim, N.dim), jordan, structural_ok, len(maps))

    return trial


def verify_no_ghosts(G: Group, cfg: SearchConfig, override_unsafe: bool = False) -> Report:
    """Randomized check that ghosts between random modules are stably trivial.

    Raises:
        HypothesisError: for groups other than C2, C3 unless ``override_unsafe``
    """
    p = _p(G)
    predicted = classify_gh(G, p)
    if not predicted and not override_unsafe:
        raise HypothesisError(
            f"{G.name} is not C2 or C3; pass --override-unsafe to run the sweep anyway"
        )
    log_sweep_event(logger, "Verifying no ghosts", group=G, trials=cfg.trials)
    allowed = _allowed_blocks(G) if is_cyclic(G) else None
    pool = TrialPool(cfg.seed, cfg.max_workers)
    results = pool.run_sync(_no_ghost_trial(G, cfg, allowed), cfg.trials, "no_ghosts")
    builder = _builder(cfg, target="no-ghosts", group=group_payload(G))
    errors = [r for r in results if r.state == TrialState.FAILED]
    done = [r.value for r in results if r.value is not None]
    inputs = {"group": group_payload(G), "trials": cfg.trials, "dim_bound": cfg.dim_bound}

    if allowed is not None:
        bad = [t for t in done if not t.structural_ok]
        holds = not bad
        passed = holds == predicted and not errors
        builder.add(
            "no_ghosts.structural",
            inputs,
            passed=passed,
            details={
                "allowed_blocks": sorted(allowed),
                "decomposes": holds,
                "predicted": predicted,
                "modules_checked": len(done),
                "exceptions": len(bad),
                "errors": [r.error for r in errors],
            },
            witness=_sweep_witness(
                G,
                cfg,
                passed,
                (
                    {
                        "trial": bad[0].index,
                        "jordan": list(bad[0].jordan),
                        "module": module_payload(_replayed_module(G, cfg, bad[0].index)),
                    }
                    if bad
                    else None
                ),
                errors,
            ),
        )

    violations = [t for t in done if t.violation is not None]
    first = violations[0] if violations else None
    passed = (not violations) == predicted and not errors
    builder.add(
        "no_ghosts.empirical",
        inputs,
        passed=passed,
        details={
            "violations": len(violations),
            "predicted_violations": not predicted,
            "maps_checked": sum(t.maps_checked for t in done),
            "errors": [r.error for r in errors],
        },
        witness=_sweep_witness(
            G,
            cfg,
            passed,
            (
                {"trial": first.index, "map": map_payload(first.violation)}
                if first is not None and first.violation is not None
                else None
            ),
            errors,
        ),
    )
    return builder.report


# Decomposition into suspensions of k


def _suspension_for_blocks(G: Group, sizes: tuple[int, ...]) -> Module | None:
    """Copies of Ω^0 k and Ω^1 k with these block sizes, or ``None`` if none matches."""
    by_size = {jordan_type(omega_k(G, i)).sizes[0]: i for i in (1, 0)}
    if any(s not in by_size for s in sizes):
        return None
    if not sizes:
        return zero_module(G, field_for(G))
    return direct_sum_all([omega_k(G, by_size[s]) for s in sizes]).module


def verify_decomposition(G: Group, cfg: SearchConfig) -> Report:
    """Check whether random modules are stably sums of suspensions of k (cyclic G)."""
    if not is_cyclic(G):
        raise HypothesisError(f"{G.name} is not cyclic")
    p = _p(G)
    F = field_for(G)
    predicted = classify_gh(G, p)
    log_sweep_event(logger, "Verifying decomposition", group=G, trials=cfg.trials)

    def trial(index: int, rng: np.random.Generator) -> tuple[bool, Module]:
        M = random_module(G, F, cfg.dim_bound, rng)
        core = projective_free_core(M)
        target = _suspension_for_blocks(G, jordan_type(core).sizes)
        if target is None:
            return False, M
        if target.dim == 0:
            return True, M
        return is_stable_iso(M, target, cfg.iso_attempts, cfg.seed).is_iso, M

    results = TrialPool(cfg.seed, cfg.max_workers).run_sync(trial, cfg.trials, "decomposition")
    done = [r.value for r in results if r.value is not None]
    errors = [r for r in results if r.state == TrialState.FAILED]
    failing = [M for ok, M in done if not ok]
    builder = _builder(cfg, target="decomposition", group=group_payload(G))
    passed = (not failing or not predicted) and not errors
    inputs = {"group": group_payload(G), "trials": cfg.trials, "dim_bound": cfg.dim_bound}
    builder.add(
        "decomposition.sampled",
        inputs,
        passed=passed,
        details={
            "modules_checked": len(done),
            "not_decomposable": len(failing),
            "predicted": predicted,
            "errors": [r.error for r in errors],
        },
        witness=_sweep_witness(
            G, cfg, passed, {"module": module_payload(failing[0])} if failing else None, errors
        ),
    )
    if not predicted:
        # the length-two cyclic module is the standard witness
        witness = cyclic_length2_map(G.order).source
        decomposes = _suspension_for_blocks(G, jordan_type(witness).sizes) is not None
        builder.add(
            "decomposition.length_two_witness",
            {"group": group_payload(G), "module": "cyclic_module(2)"},
            passed=not decomposes,
            details={"decomposes": decomposes, "jordan": list(jordan_type(witness).sizes)},
            witness={"module": module_payload(witness)},
        )
    return builder.report


# Counterexamples


def _bundle_details(bundle: CounterexampleBundle) -> dict[str, Any]:
    return {
        "ghost": bundle.ghost.summary(),
        "stably_nontrivial": bundle.stably_nontrivial,
        "nontriviality_check": bundle.nontriviality_check,
        "stable_class": list(bundle.stable_class),
        "module_dim": bundle.module.dim,
        **{k: v for k, v in bundle.metadata.items()},
    }


def _counterexample_bundles(bound: int) -> list[CounterexampleBundle]:
    return [
        cyclic_length2_ghost(4, bound),
        cyclic_length2_ghost(5, bound),
        rank2_ghost(2, bound=bound),
        rank2_ghost(3, bound=bound),
        c4_in_c8_ghost(bound),
    ]


def verify_counterexamples(cfg: SearchConfig) -> Report:
    """Rebuild every explicit ghost and check its claims, its dual and the C3 control."""
    bound = cfg.ghost_degree_bound
    log_sweep_event(logger, "Verifying counterexamples", degrees=range(-bound, bound + 1))
    builder = _builder(cfg, target="counterexamples")
    bundles = _counterexample_bundles(bound)
    for bundle in bundles:
        builder.add(
            f"counterexample.{bundle.name}",
            {"name": bundle.name, "bound": bound},
            passed=bundle.verified,
            details=_bundle_details(bundle),
            witness={"map": map_payload(bundle.map)},
        )
    for bundle in bundles:
        with builder.timed():
            f = bundle.map
            direct = is_dual_ghost(f, bound)
            via_dual = is_ghost(dual_map(f), bound)
            dual_of_ghost = is_dual_ghost(dual_map(f), bound)
        agree = direct.is_ghost == via_dual.is_ghost
        builder.add(
            f"duality.{bundle.name}",
            {"name": bundle.name, "bound": bound},
            passed=agree and dual_of_ghost.is_ghost,
            details={
                "dual_ghost": direct.summary(),
                "ghost_of_dual": via_dual.summary(),
                "dual_map_is_dual_ghost": dual_of_ghost.is_ghost,
            },
            witness=None if agree and dual_of_ghost.is_ghost else {"map": map_payload(f)},
        )
    square = verify_central_square(bundles[0], range(-bound, bound + 1))
    builder.add(
        "central_square.cyclic_length2_ghost(4)",
        {"name": bundles[0].name, "degrees": list(square.degrees)},
        passed=square.ok,
        details={
            "classes_checked": square.classes_checked,
            "failing_degrees": list(square.failures),
        },
        witness=None if square.ok else {"map": map_payload(bundles[0].map)},
    )
    control = cyclic_length2_map(3)
    trivial = is_stably_trivial(control)
    builder.add(
        "control.cyclic_length2(3)",
        {"group": "C3", "module": "cyclic_module(2)"},
        passed=trivial,
        details={"stably_trivial": trivial},
        witness=None if trivial else {"map": map_payload(control)},
    )
    return builder.report


# Tate fullness


@dataclass
class _TateData:
    """Tate bases of one module over a degree window and the action of Ĥ*(G, k) on them."""

    module: Module
    dims: dict[int, int]
    actions: dict[tuple[int, int, int], Matrix] = field(default_factory=dict)


def _ring_classes(G: Group, window: int) -> list[TateClass]:
    k = trivial_module(G, field_for(G))
    classes: list[TateClass] = []
    for i in (1, -1, 2, -2):
        if abs(i) <= window:
            classes.extend(tate_cohomology(G, k, i).classes)
    return classes


def _tate_data(M: Module, window: int, ring: list[TateClass]) -> _TateData:
    G = M.group
    degrees = range(-window, window + 1)
    data = _TateData(M, {j: tate_cohomology(G, M, j).dim for j in degrees})
    for a, alpha in enumerate(ring):
        for j in degrees:
            if abs(alpha.degree + j) <= window:
                data.actions[(a, alpha.degree, j)] = multiplication_matrix(alpha, M, j)
    return data


def _graded_hom_dim(src: _TateData, dst: _TateData, window: int) -> int:
    """Dimension of degree-preserving families Θ_j commuting with the Ĥ*(G, k) action."""
    degrees = list(range(-window, window + 1))
    offsets: dict[int, int] = {}
    total = 0
    for j in degrees:
        offsets[j] = total
        total += dst.dims[j] * src.dims[j]
    if total == 0:
        return 0
    F = src.module.field
    rows: list[np.ndarray] = []
    for key, A_src in src.actions.items():
        _, i, j = key
        A_dst = dst.actions[key]
        dm_j, dx_j, dx_ij = src.dims[j], dst.dims[j], dst.dims[i + j]
        block_rows = dx_ij * dm_j
        if block_rows == 0:
            continue
        eq = np.zeros((block_rows, total), dtype=np.int64)
        # vec(Θ_{i+j}·A_src) − vec(A_dst·Θ_j), row-major
        eq[:, offsets[i + j] : offsets[i + j] + dx_ij * src.dims[i + j]] += np.kron(
            np.eye(dx_ij, dtype=np.int64), A_src.data.T
        )
        eq[:, offsets[j] : offsets[j] + dx_j * dm_j] -= np.kron(
            A_dst.data, np.eye(dm_j, dtype=np.int64)
        )
        rows.append(eq)
    if not rows:
        return total
    return kernel_basis(Matrix(F, np.vstack(rows))).cols


def _induced_maps_rank(M: Module, X: Module, window: int) -> tuple[int, int]:
    """(stable dim of Hom(M, X), rank of u ↦ (u_*)_j over the window)."""
    G = M.group
    stable = phom_space(M, X)
    columns: list[list[int]] = []
    for u in stable.representatives:
        column: list[int] = []
        for j in range(-window, window + 1):
            source, target = tate_cohomology(G, M, j), tate_cohomology(G, X, j)
            for cls in source.classes:
                column.extend(target.coordinates(TateClass(j, u @ cls.rep)))
        columns.append(column)
    if not columns or not columns[0]:
        return stable.stable_dim, 0
    F = M.field
    return stable.stable_dim, rank(Matrix(F, np.array(columns, dtype=np.int64).T))


def verify_tate_fullness(G: Group, cfg: SearchConfig) -> Report:
    """Compare stable Hom(M, X) with Ĥ*(G, k)-linear maps Ĥ*(M) → Ĥ*(X) on a degree window."""
    p = _p(G)
    if not classify_gh(G, p):
        raise HypothesisError(f"{G.name} is not C2 or C3")
    window = cfg.fullness_window
    F = field_for(G)
    log_sweep_event(
        logger, "Verifying Tate fullness", group=G, degrees=range(-window, window + 1)
    )
    period = 1 if G.order == 2 else 2
    sources = suspension_sums(G, F, tuple(range(period)), 3)
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 0xF011]))
    targets = list(sources) + [regular_module(G, F)]
    targets += [random_module(G, F, cfg.dim_bound, rng) for _ in range(cfg.fullness_samples)]
    ring = _ring_classes(G, window)
    cache: dict[str, _TateData] = {}

    def data(M: Module) -> _TateData:
        if M.digest not in cache:
            cache[M.digest] = _tate_data(M, window, ring)
        return cache[M.digest]

    builder = _builder(cfg, target="fullness", group=group_payload(G))
    mismatches: list[dict[str, Any]] = []
    pairs = 0
    with builder.timed():
        for M in sources:
            for X in targets:
                pairs += 1
                stable_dim, image_rank = _induced_maps_rank(M, X, window)
                graded_dim = _graded_hom_dim(data(M), data(X), window)
                if not stable_dim == image_rank == graded_dim:
                    mismatches.append(
                        {
                            "source": module_payload(M),
                            "target": module_payload(X),
                            "stable_dim": stable_dim,
                            "image_rank": image_rank,
                            "graded_hom_dim": graded_dim,
                        }
                    )
    builder.add(
        "fullness.window",
        {"group": group_payload(G), "window": window, "samples": cfg.fullness_samples},
        passed=not mismatches,
        details={"pairs": pairs, "mismatches": len(mismatches), "ring_classes": len(ring)},
        witness=mismatches[0] if mismatches else None,
    )
    return builder.report


# Adjunction and syzygies


def default_adjunction_subgroup() -> Subgroup:
    """⟨σ²⟩ ≤ C8."""
    return subgroup(cyclic(8), [2])


def verify_adjunction(
    S: Subgroup, cfg: SearchConfig, count: int = 20, degrees: range = range(-3, 4)
) -> Report:
    """dim stable Hom_G(Ω^i k, L↑^G) = dim stable Hom_H(Ω^i k, L) for random L over H."""
    H = S.group
    F = field_for(S.parent)
    log_sweep_event(
        logger, "Verifying adjunction", group=S.parent, degrees=degrees, subgroup=H.name
    )
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 0xAD1]))
    mismatches: list[dict[str, Any]] = []
    builder = _builder(cfg, target="adjunction")
    with builder.timed():
        for _ in range(count):
            L = random_module(H, F, min(cfg.dim_bound, 2 * H.order), rng)
            induced = induce(S, L)
            for i in degrees:
                up = tate_cohomology(S.parent, induced, i).dim
                down = tate_cohomology(H, L, i).dim
                if up != down:
                    mismatches.append(
                        {"module": module_payload(L), "degree": i, "over_G": up, "over_H": down}
                    )
    builder.add(
        "adjunction.stable_hom_dims",
        {
            "group": group_payload(S.parent),
            "subgroup": list(S.members),
            "count": count,
            "degrees": list(degrees),
        },
        passed=not mismatches,
        details={"mismatches": len(mismatches)},
        witness=mismatches[0] if mismatches else None,
    )
    return builder.report


def _module_witness(M: Module, **context: Any) -> dict[str, Any]:
    return {"module": module_payload(M), **context}


def verify_syzygies(cfg: SearchConfig) -> Report:
    """Exact syzygy facts: dims of Ω k, periodicity, C2×C2 growth, Tate dims of cyclic groups."""
    log_sweep_event(logger, "Verifying syzygies")
    builder = _builder(cfg, target="syzygies")
    for n in (2, 3, 4, 5, 8, 9):
        omega = omega_k(cyclic(n), 1)
        ok = omega.dim == n - 1
        builder.add(
            f"syzygy.omega_dim.C{n}",
            {"group": f"C{n}"},
            passed=ok,
            details={"dim": omega.dim},
            witness=None if ok else _module_witness(omega, degree=1),
        )
    for n in (2, 3, 4, 9):
        G = cyclic(n)
        omega = omega_k(G, 2)
        result = is_stable_iso(omega, trivial_module(G, field_for(G)), cfg.iso_attempts)
        builder.add(
            f"syzygy.periodicity.C{n}",
            {"group": f"C{n}"},
            passed=result.is_iso,
            details={"status": result.status.value, "method": result.method},
            witness=None if result.is_iso else _module_witness(omega, degree=2),
        )
    klein = direct_product(cyclic(2), cyclic(2))
    syzygies = [omega_k(klein, n) for n in range(1, 6)]
    wrong = [n for n, omega in enumerate(syzygies, start=1) if omega.dim != 2 * n + 1]
    builder.add(
        "syzygy.klein_four_growth",
        {"group": "C2xC2", "degrees": [1, 2, 3, 4, 5]},
        passed=not wrong,
        details={"dims": [omega.dim for omega in syzygies]},
        witness=_module_witness(syzygies[wrong[0] - 1], degree=wrong[0]) if wrong else None,
    )
    for n in (2, 3, 4, 5):
        G = cyclic(n)
        k = trivial_module(G, field_for(G))
        tate_dims = [tate_cohomology(G, k, i).dim for i in range(-3, 4)]
        builder.add(
            f"syzygy.tate_dims.C{n}",
            {"group": f"C{n}", "degrees": list(range(-3, 4))},
            passed=all(d == 1 for d in tate_dims),
            details={"dims": tate_dims},
            witness=None if all(d == 1 for d in tate_dims) else _module_witness(k),
        )
    return builder.report


def verify_all(G: Group, cfg: SearchConfig, override_unsafe: bool = False) -> Report:
    """Every target that applies to G, merged into one report."""
    p = _p(G)
    gh = classify_gh(G, p)
    report = Report(config={**cfg.payload(), "target": "all", "group": group_payload(G)})
    if gh or override_unsafe:
        report.extend(verify_no_ghosts(G, cfg, override_unsafe))
    if is_cyclic(G):
        report.extend(verify_decomposition(G, cfg))
    if gh:
        report.extend(verify_tate_fullness(G, cfg))
    report.extend(verify_counterexamples(cfg))
    report.extend(verify_adjunction(default_adjunction_subgroup(), cfg))
    report.extend(verify_syzygies(cfg))
    return report

