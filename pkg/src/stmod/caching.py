"""Write-once tables shared between concurrent trials."""

from __future__ import annotations

import threading
from collections.abc import Callable, Hashable
from typing import Generic, TypeVar

from stmod.metrics import metrics

K = TypeVar("K", bound=Hashable)
V = TypeVar("V")


class WriteOnceCache(Generic[K, V]):
    """Associative table where the first stored value for a key wins.

    Values are computed outside the lock; concurrent computations of the same
    key are deterministic, so whichever lands first is kept and returned to all.
    """

    def __init__(self, name: str) -> None:
        self.name = name
        self._lock = threading.Lock()
        self._data: dict[K, V] = {}

    def get_or_compute(self, key: K, compute: Callable[[], V]) -> V:
        with self._lock:
            if key in self._data:
                metrics.inc_counter("stmod_cache_hits_total", labels={"cache": self.name})
                return self._data[key]
        metrics.inc_counter("stmod_cache_misses_total", labels={"cache": self.name})
        value = compute()
        with self._lock:
            return self._data.setdefault(key, value)

    def clear(self) -> None:
        with self._lock:
            self._data.clear()

    def __len__(self) -> int:
        with self._lock:
            return len(self._data)
