"""On-disk cache of census dimension multisets (versioned JSON lines)."""

from __future__ import annotations

import json
import logging
import os
import tempfile
import threading
from typing import Callable, Optional

from .census import Cocharacter, count_fixed_points, dimension_multiset

CACHE_VERSION = 1
ENV_VAR = "MODULI_CACHE"

log = logging.getLogger(__name__)

Key = tuple  # (r, alpha, beta, w, n)


def census_key(c: Cocharacter, n: int) -> Key:
    return (c.rank, c.alpha, c.beta, tuple(c.w), n)


def _valid(key: Key, dims) -> bool:
    r, _, _, w, n = key
    return (
        isinstance(dims, list)
        and all(isinstance(d, int) and d >= 0 for d in dims)
        and dims == sorted(dims)
        and len(w) == r
        and len(dims) == count_fixed_points(r, n)
    )


class CensusCache:
    """Maps (r, alpha, beta, w, n) to the sorted cell-dimension multiset.

    With ``path=None`` entries live in memory only.  Disk writes replace the
    whole file through a temporary file and ``os.replace``; unreadable,
    version-mismatched or inconsistent lines are dropped and recomputed.
    """

    def __init__(self, path: Optional[str] = None, version: int = CACHE_VERSION):
        self.path = path
        self.version = version
        self._data: dict = {}
        self._lock = threading.Lock()
        self._key_locks: dict = {}
        self.hits = 0
        self.misses = 0
        if path is not None:
            self._load()

    @classmethod
    def from_env(cls, path: Optional[str] = None) -> "CensusCache":
        return cls(path or os.environ.get(ENV_VAR) or None)

    def _load(self) -> None:
        try:
            with open(self.path, encoding="utf-8") as fh:
                lines = fh.readlines()
        except FileNotFoundError:
            return
        except OSError as exc:
            self._degrade(exc)
            return
        dirty = False
        for line in lines:
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                if rec["version"] != self.version:
                    raise ValueError("version mismatch")
                r, a, b, w, n = rec["key"]
                key = (int(r), int(a), int(b), tuple(int(x) for x in w), int(n))
                dims = rec["dims"]
                if not _valid(key, dims):
                    raise ValueError("inconsistent entry")
            except (ValueError, KeyError, TypeError) as exc:
                log.warning("dropping cache line: %s", exc)
                dirty = True
                continue
            self._data[key] = dims
        if dirty:
            self._flush()

    def _degrade(self, exc: Exception) -> None:
        log.warning("census cache %s unusable (%s); continuing in memory", self.path, exc)
        self.path = None

    def _flush(self) -> None:
        if self.path is None:
            return
        directory = os.path.dirname(os.path.abspath(self.path))
        try:
            fd, tmp = tempfile.mkstemp(prefix=".census-", dir=directory)
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                for key in sorted(self._data):
                    r, a, b, w, n = key
                    rec = {"version": self.version, "key": [r, a, b, list(w), n], "dims": self._data[key]}
                    fh.write(json.dumps(rec, separators=(",", ":")) + "\n")
            os.replace(tmp, self.path)
        except OSError as exc:
            self._degrade(exc)

    def get_put(self, key: Key, compute: Callable[[], list]) -> list:
        with self._lock:
            if key in self._data:
                self.hits += 1
                return list(self._data[key])
            key_lock = self._key_locks.setdefault(key, threading.Lock())
        with key_lock:
            with self._lock:
                if key in self._data:
                    self.hits += 1
                    return list(self._data[key])
            dims = sorted(compute())
            with self._lock:
                self.misses += 1
                self._data[key] = dims
                self._flush()
            return list(dims)

    def dimensions(self, c: Cocharacter, n: int) -> list:
        """Cache-backed replacement for ``census.dimension_multiset``."""
        return self.get_put(census_key(c, n), lambda: dimension_multiset(c, n))

    def __len__(self) -> int:
        return len(self._data)
