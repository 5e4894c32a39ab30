"""Syracuse map dynamics: valuations, steps, trajectories, levels and the census."""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import _kernels

DEFAULT_CAP = 10**5
CACHE_LIMIT = 2**26


class UnresolvedError(RuntimeError):
    """A trajectory did not reach 1 within the iteration cap."""


def ord2(m: int) -> int:
    """2-adic valuation of a positive integer."""
    if m <= 0:
        raise ValueError(f"ord2 is undefined for {m}")
    return (m & -m).bit_length() - 1


def _check_odd(n: int) -> None:
    if n < 1 or n % 2 == 0:
        raise ValueError(f"expected an odd positive integer, got {n}")


def syracuse_step(n: int) -> int:
    _check_odd(n)
    m = 3 * n + 1
    return m >> ord2(m)


@dataclass(frozen=True)
class Trajectory:
    origin: int
    steps: tuple[tuple[int, int], ...]  # (odd value, valuation of 3*prev+1)
    terminated: bool

    @property
    def values(self) -> list[int]:
        return [v for v, _ in self.steps]

    @property
    def valuations(self) -> list[int]:
        return [k for _, k in self.steps]


def trajectory(n: int, cap: int = DEFAULT_CAP) -> Trajectory:
    """Iterate S from n until 1 appears or `cap` steps elapse.

    The trajectory of 1 is empty and terminated, matching level(1) = 0.
    """
    _check_odd(n)
    if cap < 1:
        raise ValueError("cap must be >= 1")
    steps = []
    v = n
    while v != 1 and len(steps) < cap:
        m = 3 * v + 1
        k = ord2(m)
        v = m >> k
        steps.append((v, k))
    return Trajectory(n, tuple(steps), v == 1)


@dataclass(frozen=True)
class Level:
    l: int


@dataclass(frozen=True)
class Unresolved:
    steps_tried: int


LevelResult = Level | Unresolved


class LevelCache:
    """Read-only view of the census level table for odd values <= bound.

    Entries are stored at index (n - 1) // 2; negative entries mark values
    whose level exceeded the cap.
    """

    def __init__(self, table: np.ndarray):
        self.table = table
        self.bound = 2 * len(table) - 1

    def get(self, n: int, default=None):
        if n > self.bound:
            return default
        lv = int(self.table[(n - 1) >> 1])
        return default if lv < 0 else lv

    def __contains__(self, n: int) -> bool:
        return self.get(n) is not None


def level(n: int, cap: int = DEFAULT_CAP, cache: Mapping[int, int] | LevelCache | None = None) -> LevelResult:
    """Least l with S^l(n) = 1, or Unresolved when that exceeds `cap`.

    A supplied cache maps odd values to known levels; the first cached value
    met along the trajectory ends the walk.
    """
    _check_odd(n)
    if cap < 1:
        raise ValueError("cap must be >= 1")
    v, steps = n, 0
    while v != 1:
        if cache is not None:
            known = cache.get(v)
            if known is not None:
                total = steps + known
                return Level(total) if total <= cap else Unresolved(cap)
        if steps >= cap:
            return Unresolved(steps)
        m = 3 * v + 1
        v = m >> ord2(m)
        steps += 1
    return Level(steps)


@dataclass
class CensusTable:
    x: int
    per_level: dict[int, int] = field(default_factory=dict)
    total: int = 0
    unresolved: int = 0

    @property
    def max_level(self) -> int | None:
        return max(self.per_level) if self.per_level else None

    def count(self, l: int) -> int:
        return self.per_level.get(l, 0)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["level", "count"])
        for l in sorted(self.per_level):
            w.writerow([l, self.per_level[l]])
        w.writerow(["total", self.total])
        w.writerow(["unresolved", self.unresolved])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "per_level": {str(l): self.per_level[l] for l in sorted(self.per_level)},
            "total": self.total,
            "unresolved": self.unresolved,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: Mapping) -> "CensusTable":
        per_level = {int(k): int(v) for k, v in d["per_level"].items()}
        table = cls(int(d["x"]), per_level, int(d["total"]), int(d["unresolved"]))
        table.check()
        return table

    def check(self) -> None:
        if self.total != sum(self.per_level.values()):
            raise ValueError("census total does not match per-level counts")
        if self.total + self.unresolved != (self.x + 1) // 2:
            raise ValueError("census does not account for every odd n <= x")


def _fill_cache(table: np.ndarray, cap: int, word_limit: int) -> None:
    i, size = 0, len(table)
    cache = LevelCache(table)
    while i < size:
        i = _kernels.fill_levels(table, i, cap, word_limit)
        if i < size:
            # a value outgrew machine words; finish this entry exactly
            n = 2 * i + 1
            res = level(n, cap, cache=_BelowCache(cache, n))
            table[i] = res.l if isinstance(res, Level) else -1
            i += 1


class _BelowCache:
    # Only entries strictly below `limit` are filled while the table is built.
    def __init__(self, cache: LevelCache, limit: int):
        self.cache, self.limit = cache, limit

    def get(self, n, default=None):
        if n >= self.limit:
            return default
        return self.cache.get(n, default)


def _count_range(lo: int, hi: int, table: np.ndarray, cap: int, word_limit: int):
    """Per-level counts for odd n in [lo, hi), using table for values it covers."""
    counts = np.zeros(cap + 1, dtype=np.int64)
    unresolved = 0
    cache = LevelCache(table) if len(table) else None
    n = lo
    while n < hi:
        n, extra = _kernels.count_levels(n, hi, table, cap, word_limit, counts)
        unresolved += extra
        if n < hi:
            res = level(n, cap, cache=cache)
            if isinstance(res, Level):
                counts[res.l] += 1
            else:
                unresolved += 1
            n += 2
    return counts, unresolved


def census(
    x: int,
    cap: int = DEFAULT_CAP,
    shards: int | None = None,
    cache_limit: int = CACHE_LIMIT,
    word_limit: int = _kernels.WORD_LIMIT,
) -> CensusTable:
    """Exact counts pi(x, l) for every level l, plus pi(x) and unresolved entries.

    Levels of odd n <= min(x, cache_limit) are tabulated first; the remaining
    odd n are split into `shards` contiguous ranges counted concurrently
    against that read-only table. Results do not depend on `shards` or on
    `cache_limit` (0 disables memoization). `word_limit` bounds values kept
    in machine words; larger ones are finished with Python integers.
    """
    if x < 1:
        raise ValueError("x must be >= 1")
    if cap < 1:
        raise ValueError("cap must be >= 1")
    if shards is None:
        shards = os.cpu_count() or 1
    if shards < 1:
        raise ValueError("shards must be >= 1")
    word_limit = min(word_limit, _kernels.WORD_LIMIT)

    cached_top = min(x, cache_limit)
    table = np.full((cached_top + 1) // 2, -1, dtype=np.int32)
    counts = np.zeros(cap + 1, dtype=np.int64)
    unresolved = 0
    if len(table):
        _fill_cache(table, cap, word_limit)
        resolved = table[table >= 0]
        counts += np.bincount(resolved, minlength=cap + 1)[: cap + 1]
        unresolved += int(len(table) - len(resolved))

    # remaining odd n in [first, x]
    first = 2 * len(table) + 1
    n_odd = (x - first) // 2 + 1 if x >= first else 0
    if n_odd:
        per = -(-n_odd // shards)
        ranges = [
            (first + 2 * k * per, first + 2 * min((k + 1) * per, n_odd))
            for k in range(shards)
            if k * per < n_odd
        ]
        workers = min(len(ranges), os.cpu_count() or 1)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda r: _count_range(r[0], r[1], table, cap, word_limit), ranges))
        for c, u in parts:
            counts += c
            unresolved += u

    per_level = {int(l): int(c) for l, c in enumerate(counts) if c}
    table_out = CensusTable(x, per_level, sum(per_level.values()), unresolved)
    table_out.check()
    return table_out
