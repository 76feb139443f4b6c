"""Log callouts that mark the milestones of a verification sweep."""

from __future__ import annotations

from collections.abc import Iterable
from typing import Any

import structlog

from stmod.algebra.groups import Group


def sweep_context(
    group: Group | None = None, degrees: Iterable[int] | None = None
) -> dict[str, Any]:
    """Log fields naming the group (name, order) and the degree range a sweep covers."""
    context: dict[str, Any] = {}
    if group is not None:
        context["group"] = group.name
        context["group_order"] = group.order
    if degrees is not None:
        span = sorted(degrees)
        if span:
            context["degrees"] = f"{span[0]}..{span[-1]}"
    return context


def log_sweep_event(
    logger: structlog.BoundLogger,
    title: str,
    *,
    group: Group | None = None,
    degrees: Iterable[int] | None = None,
    **fields: Any,
) -> None:
    """Log a sweep milestone that should stand out in terminal output."""
    logger.info("sweep_event", title=title, **sweep_context(group, degrees), **fields)
