"""
File: core/outcome.py
Location: tautcheck/core/outcome.py
Purpose: Error taxonomy and case-outcome bookkeeping for verification sweeps

A conjecture counterexample candidate is a result, not a crash: it is
flagged and the run still exits 0 unless --strict. Broken theorems,
oracle mismatches and internal inconsistencies exit 3.
"""

import logging
from collections import defaultdict
from typing import Dict, List, Optional

logger = logging.getLogger(__name__)

# =============================================================================
# ERRORS
# =============================================================================


class InconsistencyError(RuntimeError):
    """Internal inconsistency: the implementation contradicts itself or a theorem."""


class DivisibilityError(InconsistencyError):
    """A pushed-forward polynomial class is not divisible by a_1 + ... + a_n."""


class CacheConflictError(InconsistencyError):
    """Two cache sources disagree on the value of one correlator."""


class OracleMismatchError(InconsistencyError):
    """Two independent computations of the same quantity differ."""


# =============================================================================
# STATUSES AND EXIT CODES
# =============================================================================

PASS = 'pass'
VACUOUS = 'vacuous'
CONJECTURE_FAIL = 'conjecture-fail'
FAIL = 'fail'
ERROR = 'error'

CONJECTURE_FLAG = 'CONJECTURE-FAIL'

EXIT_OK = 0
EXIT_STRICT_CONJECTURE = 1
EXIT_INVALID_INPUT = 2
EXIT_INCONSISTENT = 3


class OutcomeClassifier:
    """
    Sorts verification cases into statuses and tracks sweep health

    Features:
    - Proven statements failing → 'fail' (implementation bug, exit 3)
    - Conjectural statements failing → 'conjecture-fail' (flagged, exit 0)
    - Exceptions inside a case → 'error' (exit 3)
    - Vacuous cases (degree above dimension) kept apart from passes
    - Per-check health report in healthy/warning/critical buckets
    """

    def __init__(self, strict: bool = False):
        self.strict = strict
        self.counts: Dict[str, int] = defaultdict(int)
        self.by_check: Dict[str, Dict[str, int]] = defaultdict(lambda: defaultdict(int))
        self.failure_history: Dict[str, List[dict]] = defaultdict(list)

        logger.info(f"🔄 OutcomeClassifier initialized: strict={strict}")

    @staticmethod
    def classify_error(error: BaseException) -> str:
        """
        Classify an exception raised inside a case

        Returns:
            'inconsistency' - the implementation contradicts itself
            'invalid' - bad parameters reached a math routine
            'crash' - anything else
        """
        if isinstance(error, InconsistencyError):
            return 'inconsistency'
        if isinstance(error, ValueError):
            return 'invalid'
        return 'crash'

    @staticmethod
    def classify(passed: bool, proven: bool, vacuous: bool = False) -> str:
        """Status of a finished case."""
        if vacuous:
            return VACUOUS
        if passed:
            return PASS
        return FAIL if proven else CONJECTURE_FAIL

    @staticmethod
    def flag_for(status: str) -> Optional[str]:
        return CONJECTURE_FLAG if status == CONJECTURE_FAIL else None

    def record(self, record: dict):
        """Account for one report record."""
        status = record['status']
        check = record['check']
        self.counts[status] += 1
        self.by_check[check][status] += 1

        if status == CONJECTURE_FAIL:
            logger.warning(f"⚠️ {CONJECTURE_FLAG} {check} {record['case']}")
            self.failure_history[check].append(record)
        elif status == FAIL:
            logger.error(f"❌ {check} {record['case']} failed a proven statement")
            self.failure_history[check].append(record)
        elif status == ERROR:
            logger.error(f"❌ {check} {record['case']} raised: {record.get('error')}")
            self.failure_history[check].append(record)
        else:
            logger.debug(f"✅ {check} {record['case']} {status}")

    def exit_code(self) -> int:
        if self.counts[FAIL] or self.counts[ERROR]:
            return EXIT_INCONSISTENT
        if self.counts[CONJECTURE_FAIL] and self.strict:
            return EXIT_STRICT_CONJECTURE
        return EXIT_OK

    def get_health_report(self) -> dict:
        """Checks bucketed by their worst outcome"""
        healthy = []
        warning = []
        critical = []

        for check, statuses in sorted(self.by_check.items()):
            if statuses[FAIL] or statuses[ERROR]:
                critical.append(check)
            elif statuses[CONJECTURE_FAIL]:
                warning.append(check)
            else:
                healthy.append(check)

        return {
            'healthy': healthy,
            'warning': warning,
            'critical': critical
        }

    def get_failure_details(self, check: str) -> List[dict]:
        return list(self.failure_history.get(check, []))

    def get_stats(self) -> dict:
        """Counts per status plus the resulting exit code"""
        return {
            'total': sum(self.counts.values()),
            PASS: self.counts[PASS],
            VACUOUS: self.counts[VACUOUS],
            CONJECTURE_FAIL: self.counts[CONJECTURE_FAIL],
            FAIL: self.counts[FAIL],
            ERROR: self.counts[ERROR],
            'exit_code': self.exit_code()
        }
