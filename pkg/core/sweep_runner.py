"""
File: core/sweep_runner.py
Location: tautcheck/core/sweep_runner.py
Purpose: Case-level parallel execution of verification sweeps
Dependencies: asyncio, concurrent.futures, core/intersect.py (engine per worker)

Workers load the correlator cache read-only and hand back whatever they
computed; the parent process is the only writer.
"""

import asyncio
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from core.intersect import IntersectionEngine, get_engine, set_engine
from database.correlator_cache import CorrelatorCache, CorrelatorKey

logger = logging.getLogger(__name__)

CaseFunction = Callable[[object], dict]
CaseResult = Tuple[dict, Dict[CorrelatorKey, object]]


def _init_worker(cache_path: Optional[str]):
    """Fresh engine per worker process, backed by a read-only copy of the cache."""
    set_engine(IntersectionEngine(CorrelatorCache(cache_path, read_only=True)))


def _execute(func: CaseFunction, case) -> CaseResult:
    started = time.perf_counter()
    record = func(case)
    record['wall_ms'] = round((time.perf_counter() - started) * 1000, 1)
    return record, get_engine().cache.drain_new_entries()


class SweepRunner:
    """
    Runs one case function over a list of cases

    Features:
    - jobs == 1: cases run in-process, one after another
    - jobs > 1: process pool, at most `jobs` cases in flight (semaphore)
    - Records come back in case order, so serial and parallel runs match
    - New correlators from workers merged into the parent cache
    """

    def __init__(self, jobs: int = 1, cache: Optional[CorrelatorCache] = None,
                 report_timings: bool = False):
        if jobs < 1:
            raise ValueError(f"❌ jobs must be >= 1, got {jobs}")
        self.jobs = jobs
        self.cache = cache if cache is not None else get_engine().cache
        self.report_timings = report_timings

        self.cases_run = 0
        self.correlators_merged = 0
        self.elapsed = 0.0

        logger.info(f"🚀 SweepRunner initialized: jobs={jobs}, cache={self.cache.path or 'in-memory'}")

    async def _run_one(self, loop, executor, semaphore, func: CaseFunction, case) -> CaseResult:
        async with semaphore:
            return await loop.run_in_executor(executor, _execute, func, case)

    async def run(self, func: CaseFunction, cases: Sequence) -> List[dict]:
        """Evaluate every case; records in input order."""
        start_time = time.time()
        logger.info(f"🚀 SWEEP START: {len(cases)} cases, {self.jobs} job(s)")

        if self.jobs == 1 or len(cases) <= 1:
            results = [_execute(func, case) for case in cases]
        else:
            loop = asyncio.get_running_loop()
            semaphore = asyncio.Semaphore(self.jobs)
            with ProcessPoolExecutor(max_workers=self.jobs, initializer=_init_worker,
                                     initargs=(self.cache.path,)) as executor:
                tasks = [self._run_one(loop, executor, semaphore, func, case) for case in cases]
                results = await asyncio.gather(*tasks)

        records = []
        for record, new_entries in results:
            if new_entries:
                self.cache.update(new_entries)
                self.correlators_merged += len(new_entries)
            if not self.report_timings:
                record.pop('wall_ms', None)
            records.append(record)

        self.cases_run += len(records)
        self.elapsed = time.time() - start_time
        rate = len(records) / self.elapsed if self.elapsed > 0 else 0
        logger.info(f"✅ SWEEP DONE: {len(records)} cases in {self.elapsed:.1f}s ({rate:.1f} cases/s)")
        return records

    def run_sync(self, func: CaseFunction, cases: Sequence) -> List[dict]:
        return asyncio.run(self.run(func, cases))

    def get_stats(self) -> dict:
        return {
            'jobs': self.jobs,
            'cases_run': self.cases_run,
            'correlators_merged': self.correlators_merged,
            'elapsed_s': round(self.elapsed, 2)
        }
