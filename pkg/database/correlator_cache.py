"""
File: database/correlator_cache.py
Location: tautcheck/database/correlator_cache.py
Purpose: Persistent cache of ψ-intersection numbers

Line format: "g;d1,d2,...;num/den" with the exponents sorted ascending.
Only dimension-matched keys are stored. Lines are sorted on flush so the
file diffs and merges cleanly.
"""

import logging
import threading
from fractions import Fraction
from typing import Dict, Iterable, Optional, Tuple

from core.outcome import CacheConflictError
from database.db_manager import CacheFileManager
from utils.helpers import format_fraction, parse_fraction

logger = logging.getLogger(__name__)

CorrelatorKey = Tuple[int, Tuple[int, ...]]


def make_key(g: int, exponents: Iterable[int]) -> CorrelatorKey:
    return (g, tuple(sorted(exponents)))


def format_line(key: CorrelatorKey, value: Fraction) -> str:
    g, exps = key
    return f"{g};{','.join(str(d) for d in exps)};{format_fraction(value)}"


def parse_line(line: str) -> Tuple[CorrelatorKey, Fraction]:
    parts = line.strip().split(';')
    if len(parts) != 3:
        raise ValueError(f"Malformed cache line: {line.strip()}")
    g = int(parts[0])
    exps = tuple(int(x) for x in parts[1].split(',') if x)
    if g < 0 or any(d < 0 for d in exps):
        raise ValueError(f"Malformed cache line: {line.strip()}")
    if sum(exps) != 3 * g - 3 + len(exps):
        raise ValueError(f"Cache key is not dimension-matched: {line.strip()}")
    return make_key(g, exps), parse_fraction(parts[2])


class CorrelatorCache:
    """
    Append-only map (g, sorted exponents) → exact rational

    Features:
    - Lazy load from the backing file
    - Concurrent readers, writes serialized by a lock
    - Conflict detection: a key never changes value
    - Tracks entries added since load (for worker → parent hand-off)
    - Idempotent merge of another cache file
    """

    def __init__(self, path: Optional[str] = None, read_only: bool = False):
        self.file = CacheFileManager(path) if path else None
        self.read_only = read_only
        self._values: Dict[CorrelatorKey, Fraction] = {}
        self._new: Dict[CorrelatorKey, Fraction] = {}
        self._lock = threading.Lock()
        self._loaded = False

        logger.info(f"💾 CorrelatorCache initialized: {self.file.path if self.file else 'in-memory'}")

    @property
    def path(self) -> Optional[str]:
        return self.file.path if self.file else None

    def load(self):
        """Read the backing file (once)."""
        with self._lock:
            if self._loaded:
                return
            if self.file:
                with self.file.get_reader() as lines:
                    for line in lines:
                        if not line.strip():
                            continue
                        key, value = parse_line(line)
                        self._store(key, value, source=self.file.path)
            self._loaded = True

        logger.info(f"📊 Loaded {len(self._values)} correlators")

    def _store(self, key: CorrelatorKey, value: Fraction, source: str) -> bool:
        old = self._values.get(key)
        if old is not None:
            if old != value:
                raise CacheConflictError(
                    f"❌ Conflicting values for {format_line(key, old)} vs {format_fraction(value)} ({source})"
                )
            return False
        self._values[key] = value
        return True

    def get(self, key: CorrelatorKey) -> Optional[Fraction]:
        if not self._loaded:
            self.load()
        return self._values.get(key)

    def put(self, key: CorrelatorKey, value: Fraction):
        """Insert a freshly computed value (conflicts raise)."""
        if not self._loaded:
            self.load()
        with self._lock:
            if self._store(key, Fraction(value), source='computed'):
                self._new[key] = Fraction(value)

    def update(self, entries: Dict[CorrelatorKey, Fraction]):
        for key, value in entries.items():
            self.put(key, value)

    def drain_new_entries(self) -> Dict[CorrelatorKey, Fraction]:
        """Entries added since the last drain."""
        with self._lock:
            new, self._new = self._new, {}
        return new

    def __len__(self) -> int:
        if not self._loaded:
            self.load()
        return len(self._values)

    def __contains__(self, key) -> bool:
        return self.get(key) is not None

    def items(self):
        if not self._loaded:
            self.load()
        return sorted(self._values.items())

    def flush(self):
        """Rewrite the backing file with all entries, sorted."""
        if not self.file or self.read_only:
            return
        with self._lock:
            with self.file.get_writer() as f:
                for key in sorted(self._values):
                    f.write(format_line(key, self._values[key]) + '\n')
            self._new = {}
        logger.info(f"✅ Flushed {len(self._values)} correlators to {self.file.path}")

    def export(self, path: str):
        """Write every entry to another file in the cache line format."""
        target = CacheFileManager(path)
        with target.get_writer() as f:
            for key, value in self.items():
                f.write(format_line(key, value) + '\n')
        logger.info(f"📤 Exported {len(self._values)} correlators to {target.path}")

    def merge(self, path: str) -> int:
        """
        Merge another cache file into this one

        Returns:
            int: number of new entries

        Raises:
            CacheConflictError: when a key has a different value in the other file
        """
        if not self._loaded:
            self.load()
        added = 0
        source = CacheFileManager(path)
        with source.get_reader() as lines:
            for line in lines:
                if not line.strip():
                    continue
                key, value = parse_line(line)
                with self._lock:
                    if self._store(key, value, source=source.path):
                        added += 1
        logger.info(f"🔄 Merged {added} new correlators from {source.path}")
        return added

    def get_stats(self) -> dict:
        if not self._loaded:
            self.load()
        genera = sorted({g for g, _ in self._values})
        return {
            'path': self.path,
            'entries': len(self._values),
            'max_genus': genera[-1] if genera else None,
            'max_points': max((len(e) for _, e in self._values), default=0),
            'size_kb': round(self.file.get_file_size(), 2) if self.file else 0.0
        }
