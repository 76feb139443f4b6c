"""Run every verification target and write one report per target into a directory."""

from __future__ import annotations

import argparse
from pathlib import Path

import structlog

from stmod.algebra.groups import cyclic
from stmod.config.logging import configure_logging
from stmod.config.settings import get_settings, set_settings_overrides
from stmod.harness.verify import (
    SearchConfig,
    default_adjunction_subgroup,
    verify_adjunction,
    verify_counterexamples,
    verify_decomposition,
    verify_no_ghosts,
    verify_syzygies,
    verify_tate_fullness,
)
from stmod.io.report import Report, write_report

logger = structlog.get_logger(__name__)


def _parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Reproduce the full verification sweep.")
    parser.add_argument(
        "--out-dir",
        type=Path,
        default=Path("reports"),
        help="Directory for the JSON reports. Default: reports",
    )
    parser.add_argument("--seed", type=int, default=7, help="Run seed. Default: 7")
    parser.add_argument(
        "--trials",
        type=int,
        default=None,
        help="Trials per randomized sweep (default from settings: 200).",
    )
    parser.add_argument("--debug", action="store_true", default=None)
    return parser.parse_args()


def _run(out_dir: Path, seed: int, trials: int | None) -> bool:
    settings = get_settings()
    reports: dict[str, Report] = {}
    for n in (2, 3):
        G = cyclic(n)
        cfg = SearchConfig.from_settings(settings, n, seed, trials=trials)
        reports[f"no_ghosts_C{n}"] = verify_no_ghosts(G, cfg)
        reports[f"decomposition_C{n}"] = verify_decomposition(G, cfg)
        reports[f"fullness_C{n}"] = verify_tate_fullness(G, cfg)
    cfg4 = SearchConfig.from_settings(settings, 2, seed, trials=trials)
    reports["no_ghosts_C4_override"] = verify_no_ghosts(cyclic(4), cfg4, override_unsafe=True)
    reports["decomposition_C4"] = verify_decomposition(cyclic(4), cfg4)
    reports["counterexamples"] = verify_counterexamples(cfg4)
    reports["adjunction"] = verify_adjunction(default_adjunction_subgroup(), cfg4)
    reports["syzygies"] = verify_syzygies(cfg4)

    ok = True
    for name, report in reports.items():
        write_report(report, out_dir / f"{name}.json")
        ok = ok and report.passed
        logger.info("report_summary", report=name, checks=len(report.checks), passed=report.passed)
    return ok


def main() -> None:
    args = _parse_args()
    set_settings_overrides(debug=args.debug)
    configure_logging(debug=get_settings().debug)
    if not _run(args.out_dir, args.seed, args.trials):
        raise SystemExit(1)


if __name__ == "__main__":
    main()
