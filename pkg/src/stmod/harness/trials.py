"""Concurrent trial pool for randomized verification."""

from __future__ import annotations

import asyncio
from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum
from typing import Generic, TypeVar

import numpy as np
import structlog

from stmod.logging_utils import log_sweep_event

logger = structlog.get_logger(__name__)

MAX_CONCURRENT_TRIALS = 4

T = TypeVar("T")


class TrialState(str, Enum):
    """Final state of a trial."""

    COMPLETED = "completed"
    FAILED = "failed"


@dataclass
class TrialResult(Generic[T]):
    index: int
    state: TrialState
    value: T | None = None
    error: str | None = None


@dataclass
class PoolStatus:
    """Status of the trial pool after a run."""

    max_workers: int
    completed_count: int
    failed_count: int


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Per-trial generator derived from ``(seed, index)``, independent of scheduling."""
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


class TrialPool:
    """Runs independent trials on worker threads, at most ``max_workers`` at once."""

    def __init__(self, seed: int, max_workers: int = MAX_CONCURRENT_TRIALS):
        """Initialize the pool.

        Args:
            seed: run seed; trial i draws from ``SeedSequence([seed, i])``
            max_workers: maximum number of trials in flight (default: 4)
        """
        if max_workers < 1:
            raise ValueError(f"max_workers must be positive, got {max_workers}")
        self.seed = seed
        self.max_workers = max_workers
        self._completed = 0
        self._failed = 0

    async def run(
        self, trial: Callable[[int, np.random.Generator], T], count: int, name: str = "trials"
    ) -> list[TrialResult[T]]:
        """Run ``trial(index, rng)`` for every index; results come back in index order."""
        semaphore = asyncio.Semaphore(self.max_workers)
        log_sweep_event(logger, "Trial sweep started", sweep=name, count=count, seed=self.seed)

        async def run_one(index: int) -> TrialResult[T]:
            async with semaphore:
                try:
                    value = await asyncio.to_thread(trial, index, trial_rng(self.seed, index))
                except Exception as e:
                    logger.error("trial_failed", sweep=name, trial=index, error=str(e))
                    self._failed += 1
                    return TrialResult(index, TrialState.FAILED, error=f"{type(e).__name__}: {e}")
                self._completed += 1
                logger.debug("trial_completed", sweep=name, trial=index)
                return TrialResult(index, TrialState.COMPLETED, value=value)

        results = await asyncio.gather(*(run_one(i) for i in range(count)))
        status = self.status()
        log_sweep_event(
            logger,
            "Trial sweep finished",
            sweep=name,
            workers=status.max_workers,
            completed=status.completed_count,
            failed=status.failed_count,
        )
        return sorted(results, key=lambda r: r.index)

    def run_sync(
        self, trial: Callable[[int, np.random.Generator], T], count: int, name: str = "trials"
    ) -> list[TrialResult[T]]:
        return asyncio.run(self.run(trial, count, name))

    def status(self) -> PoolStatus:
        return PoolStatus(self.max_workers, self._completed, self._failed)
