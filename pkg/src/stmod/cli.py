"""The ``stmod`` command line: stable-category computations and verification reports."""

from __future__ import annotations

import argparse
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

import structlog
from pydantic import ValidationError

from stmod import __version__
from stmod.algebra.groups import Group, Subgroup, center, subgroup
from stmod.algebra.reps import induce, jordan_type, restrict
from stmod.config.logging import configure_logging
from stmod.config.settings import Settings, get_settings, set_settings_overrides
from stmod.constructions.subgroups import classify_gh, find_gh_failure_subgroup, ghost_for_group
from stmod.errors import StmodError
from stmod.harness.verify import (
    SearchConfig,
    default_adjunction_subgroup,
    verify_adjunction,
    verify_all,
    verify_counterexamples,
    verify_decomposition,
    verify_no_ghosts,
    verify_syzygies,
    verify_tate_fullness,
)
from stmod.io.formats import (
    group_payload,
    load_map,
    load_module,
    map_payload,
    module_payload,
    resolve_group,
)
from stmod.io.report import Report, ReportBuilder, write_report
from stmod.metrics import metrics
from stmod.stable.category import (
    field_for,
    is_stably_trivial,
    omega_power,
    phom_space,
    split_projective,
)
from stmod.stable.ghosts import is_dual_ghost, is_ghost
from stmod.stable.tate import tate_cohomology

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

VERIFY_TARGETS = (
    "no-ghosts",
    "counterexamples",
    "decomposition",
    "fullness",
    "adjunction",
    "syzygies",
    "all",
)


def _generators(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated element indices: {text}") from e


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, default=None, help="Write the report here.")
    common.add_argument(
        "--metrics-out", type=Path, default=None, help="Write Prometheus metrics here."
    )
    common.add_argument("--log-format", choices=["console", "json"], default=None)
    common.add_argument("--debug", action="store_true", default=None)
    common.add_argument(
        "--timing",
        action="store_true",
        default=None,
        help="Record per-check timings (reports are then no longer byte-identical).",
    )

    parser = argparse.ArgumentParser(
        prog="stmod", description="Computations in the stable module category stmod(kG)."
    )
    parser.add_argument("--version", action="version", version=f"stmod {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("omega", parents=[common], help="Ω^j of a module.")
    p.add_argument("--module", type=Path, required=True)
    p.add_argument("--degree", type=int, default=1)

    p = sub.add_parser("tate", parents=[common], help="Tate cohomology dimensions.")
    p.add_argument("--module", type=Path, required=True)
    p.add_argument("--degree", type=int, default=None, help="Single degree (default: ±bound).")
    p.add_argument("--bound", type=int, default=None)

    p = sub.add_parser("stable-hom", parents=[common], help="Stable hom space dimensions.")
    p.add_argument("--module", type=Path, required=True, help="Source module.")
    p.add_argument("--target", type=Path, required=True, help="Target module.")

    p = sub.add_parser("ghost-check", parents=[common], help="Ghost verdict for a map.")
    p.add_argument("--map", type=Path, required=True)
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--dual", action="store_true", help="Check for a dual ghost instead.")

    p = sub.add_parser("induce", parents=[common], help="Induce a module from H ≤ G.")
    p.add_argument("--group", required=True, help="The parent group G.")
    p.add_argument("--subgroup", type=_generators, required=True, help="Generators of H in G.")
    p.add_argument("--module", type=Path, required=True, help="Module over H.")

    p = sub.add_parser("restrict", parents=[common], help="Restrict a module to H ≤ G.")
    p.add_argument("--subgroup", type=_generators, required=True, help="Generators of H in G.")
    p.add_argument("--module", type=Path, required=True, help="Module over G.")

    p = sub.add_parser("jordan", parents=[common], help="Jordan type over a cyclic p-group.")
    p.add_argument("--module", type=Path, required=True)

    p = sub.add_parser("classify", parents=[common], help="Does every ghost vanish stably?")
    p.add_argument("--group", required=True)
    p.add_argument("--bound", type=int, default=None)

    p = sub.add_parser("verify", parents=[common], help="Run verification checks.")
    p.add_argument("target", choices=VERIFY_TARGETS)
    p.add_argument("--group", default=None, help="File or shorthand (C2, C4, C2xC2, CpxCp:3).")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--dim-bound", type=int, default=None)
    p.add_argument(
        "--override-unsafe",
        action="store_true",
        help="Run the no-ghost sweep on groups where ghosts are expected (falsification demo).",
    )
    return parser


def _builder(settings: Settings, command: str, **context: object) -> ReportBuilder:
    return ReportBuilder({"command": command, **context}, record_timing=settings.record_timing)


def _omega(args: argparse.Namespace, settings: Settings) -> Report:
    M = load_module(args.module)
    builder = _builder(settings, "omega", degree=args.degree)
    with builder.timed():
        shifted = omega_power(M, args.degree)
        splitting = split_projective(shifted)
    builder.add(
        "omega",
        {"module": module_payload(M), "degree": args.degree},
        passed=True,
        details={
            "dim": shifted.dim,
            "projective_free_dim": splitting.core.dim,
            "free_rank": splitting.free_rank,
            "module": module_payload(shifted),
        },
    )
    return builder.report


def _tate(args: argparse.Namespace, settings: Settings) -> Report:
    M = load_module(args.module)
    bound = settings.ghost_degree_bound if args.bound is None else args.bound
    degrees = [args.degree] if args.degree is not None else list(range(-bound, bound + 1))
    builder = _builder(settings, "tate")
    with builder.timed():
        dims = {str(i): tate_cohomology(M.group, M, i).dim for i in degrees}
    builder.add(
        "tate",
        {"module": module_payload(M), "degrees": degrees},
        passed=True,
        details={"dims": dims},
    )
    return builder.report


def _stable_hom(args: argparse.Namespace, settings: Settings) -> Report:
    M, N = load_module(args.module), load_module(args.target)
    builder = _builder(settings, "stable-hom")
    with builder.timed():
        space = phom_space(M, N)
    builder.add(
        "stable_hom",
        {"source": module_payload(M), "target": module_payload(N)},
        passed=True,
        details={
            "hom_dim": space.hom.dim,
            "phom_dim": space.phom_dim,
            "stable_dim": space.stable_dim,
        },
    )
    return builder.report


def _ghost_check(args: argparse.Namespace, settings: Settings) -> Report:
    f = load_map(args.map)
    bound = settings.ghost_degree_bound if args.bound is None else args.bound
    hints = center(f.source.group)
    check = is_dual_ghost if args.dual else is_ghost
    name = "dual_ghost_check" if args.dual else "ghost_check"
    builder = _builder(settings, "ghost-check", bound=bound, dual=args.dual)
    with builder.timed():
        verdict = check(f, bound, hints)
        trivial = is_stably_trivial(f)
    witness = None
    if verdict.witness is not None:
        witness = {"degree": verdict.degree, "map": map_payload(verdict.witness)}
    builder.add(
        name,
        {"map": map_payload(f), "bound": bound},
        passed=True,
        details={"verdict": verdict.summary(), "stably_nontrivial": not trivial},
        witness=witness,
    )
    return builder.report


def _subgroup(G: Group, generators: list[int]) -> Subgroup:
    for g in generators:
        G.check_element(g)
    return subgroup(G, generators)


def _induce(args: argparse.Namespace, settings: Settings) -> Report:
    G = resolve_group(args.group)
    S = _subgroup(G, args.subgroup)
    M = load_module(args.module)
    builder = _builder(settings, "induce", group=group_payload(G), subgroup=list(S.members))
    with builder.timed():
        induced = induce(S, M)
    builder.add(
        "induce",
        {"module": module_payload(M), "subgroup": list(S.members)},
        passed=True,
        details={"dim": induced.dim, "index": S.index, "module": module_payload(induced)},
    )
    return builder.report


def _restrict(args: argparse.Namespace, settings: Settings) -> Report:
    M = load_module(args.module)
    S = _subgroup(M.group, args.subgroup)
    builder = _builder(settings, "restrict", subgroup=list(S.members))
    with builder.timed():
        restricted = restrict(M, S)
    builder.add(
        "restrict",
        {"module": module_payload(M), "subgroup": list(S.members)},
        passed=True,
        details={"dim": restricted.dim, "module": module_payload(restricted)},
    )
    return builder.report


def _jordan(args: argparse.Namespace, settings: Settings) -> Report:
    M = load_module(args.module)
    builder = _builder(settings, "jordan")
    with builder.timed():
        jt = jordan_type(M)
    order = M.group.order
    builder.add(
        "jordan",
        {"module": module_payload(M)},
        passed=True,
        details={
            "sizes": list(jt.sizes),
            "non_projective": list(jt.non_projective(order).sizes),
            "projective_count": jt.projective_count(order),
        },
    )
    return builder.report


def _classify(args: argparse.Namespace, settings: Settings) -> Report:
    G = resolve_group(args.group)
    p = field_for(G).p
    bound = settings.ghost_degree_bound if args.bound is None else args.bound
    builder = _builder(settings, "classify", group=group_payload(G), p=p)
    with builder.timed():
        holds = classify_gh(G, p)
    details: dict[str, object] = {
        "p": p,
        "gh_holds": holds,
        "verdict": "GH holds" if holds else "GH fails",
    }
    witness = None
    if not holds:
        located = find_gh_failure_subgroup(G, p)
        if located is not None:
            details["subgroup"] = {
                "kind": located.kind.value,
                "members": list(located.subgroup.members),
                "generators": list(located.generators),
            }
        bundle = ghost_for_group(G, p, bound)
        details["ghost"] = bundle.ghost.summary()
        details["stably_nontrivial"] = bundle.stably_nontrivial
        witness = {"bundle": bundle.name, "map": map_payload(bundle.map)}
    log_line = "classified" if holds else "classified_with_ghost"
    logger.info(log_line, group=G.name, verdict=details["verdict"])
    builder.add("classify", {"group": group_payload(G), "p": p}, True, details, witness)
    return builder.report


def _verify(args: argparse.Namespace, settings: Settings) -> Report:
    target = args.target
    G: Group | None = resolve_group(args.group) if args.group else None
    if G is None and target in {"no-ghosts", "decomposition", "fullness", "all"}:
        raise StmodError(f"verify {target} needs --group")
    p = field_for(G).p if G is not None else 2
    try:
        cfg = SearchConfig.from_settings(
            settings,
            p,
            args.seed,
            dim_bound=args.dim_bound,
            trials=args.trials,
            ghost_degree_bound=args.bound,
        )
    except ValidationError as e:
        first = e.errors()[0]
        raise StmodError(f"invalid search parameter {first['loc'][0]}: {first['msg']}") from e
    if target == "counterexamples":
        return verify_counterexamples(cfg)
    if target == "syzygies":
        return verify_syzygies(cfg)
    if target == "adjunction":
        return verify_adjunction(default_adjunction_subgroup(), cfg)
    assert G is not None
    if target == "no-ghosts":
        return verify_no_ghosts(G, cfg, override_unsafe=args.override_unsafe)
    if target == "decomposition":
        return verify_decomposition(G, cfg)
    if target == "fullness":
        return verify_tate_fullness(G, cfg)
    return verify_all(G, cfg, override_unsafe=args.override_unsafe)


COMMANDS: dict[str, Callable[[argparse.Namespace, Settings], Report]] = {
    "omega": _omega,
    "tate": _tate,
    "stable-hom": _stable_hom,
    "ghost-check": _ghost_check,
    "induce": _induce,
    "restrict": _restrict,
    "jordan": _jordan,
    "classify": _classify,
    "verify": _verify,
}


def main(argv: Sequence[str] | None = None) -> int:
    """Run one command; 0 when every check passes, 1 on a failed check, 2 on bad input."""
    args = _build_parser().parse_args(argv)
    set_settings_overrides(debug=args.debug, log_format=args.log_format, record_timing=args.timing)
    settings = get_settings()
    configure_logging(debug=settings.debug, log_format=settings.log_format)

    try:
        report = COMMANDS[args.command](args, settings)
    except StmodError as e:
        print(f"❌ ERROR: {e}", file=sys.stderr)
        return EXIT_USAGE

    write_report(report, args.out)
    if args.metrics_out is not None:
        args.metrics_out.parent.mkdir(parents=True, exist_ok=True)
        args.metrics_out.write_text(metrics.render_prometheus())
    if not report.passed:
        logger.warning("checks_failed", failures=[c.name for c in report.failures])
        return EXIT_CHECK_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
