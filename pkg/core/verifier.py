"""
File: core/verifier.py
Location: tautcheck/core/verifier.py
Purpose: Verification sweeps: case grids, per-case evaluation and report records
Dependencies: core/b_classes.py, core/dr_side.py, core/intersect.py, core/sweep_runner.py, core/outcome.py

Checks:
    c1          B^m_{g,d̄} pairs to zero (m >= 2, Σd >= 2g+m-1)
    c2g0        B^1_{0,d̄} against A^1_{0,d̄}
    c3g0        B^0_{0,d̄} against A^0_{0,d̄}
    oracle      independent constructions agree as exact classes
    lp          Liu–Pandharipande relations and the inductive chain identity
    reduction   B̃_{d̄+e_i} - ψ_i B̃_{d̄} pairs to zero
    degreebound coefficients of P_{g,n,m} above x-degree 2g+m-2 pair to zero
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from core.b_classes import (
    BSpec,
    b_class_definition,
    b_class_fast,
    lp_relation_class,
    one_point_inductive_difference,
    p_coefficients,
    reduction_difference,
    tilde_b_class,
    tilde_b_class_pushforward,
    unfolded_b_class,
)
from core.dr_side import a0_class_genus0, a1_class_genus0
from core.graph_core import TautClass, forgetful_pullback, to_json
from core.intersect import SweepReport, pairing_difference, vanishing_sweep
from core.outcome import ERROR, OutcomeClassifier
from utils.helpers import nonincreasing_tuples

logger = logging.getLogger(__name__)

CHECKS = ('c1', 'c2g0', 'c3g0', 'oracle', 'lp', 'reduction', 'degreebound')
MAX_WITNESSES = 10


# =============================================================================
# CONFIGURATION AND CASES
# =============================================================================

@dataclass
class SweepConfig:
    """Grid and run options of one `verify` invocation"""
    check: str
    genera: List[int] = field(default_factory=lambda: [0, 1])
    points: List[int] = field(default_factory=lambda: [1, 2])
    frozen: List[int] = field(default_factory=lambda: [2, 3])
    r_values: List[int] = field(default_factory=lambda: [0, 1, 2])
    dcap: Optional[int] = None
    reduced: bool = False
    strict: bool = False
    jobs: int = 1
    cache_path: Optional[str] = None
    out_path: Optional[str] = None

    def validate(self):
        """
        Raises:
            ValueError: on an unknown check or a non-positive cap/width
        """
        if self.check not in CHECKS:
            raise ValueError(f"❌ Unknown check '{self.check}' (choose from {', '.join(CHECKS)})")
        if self.dcap is not None and self.dcap <= 0:
            raise ValueError(f"❌ --dcap must be positive, got {self.dcap}")
        if self.jobs < 1:
            raise ValueError(f"❌ --jobs must be >= 1, got {self.jobs}")
        if self.reduced and self.check != 'c1':
            raise ValueError("❌ --reduced only applies to the c1 check")


@dataclass(frozen=True)
class Case:
    """One unit of work; picklable so it can cross into worker processes"""
    check: str
    params: Tuple[Tuple[str, Any], ...]
    proven: bool = True

    @classmethod
    def make(cls, check: str, proven: bool, **params) -> 'Case':
        return cls(check, tuple(params.items()), proven)

    @property
    def kwargs(self) -> Dict[str, Any]:
        return dict(self.params)

    @property
    def spec(self) -> dict:
        return {k: list(v) if isinstance(v, tuple) else v for k, v in self.params}

    @property
    def case_id(self) -> str:
        parts = []
        for key, value in self.params:
            if isinstance(value, tuple):
                value = '(' + ','.join(str(x) for x in value) + ')'
            parts.append(f"{key}={value}")
        return f"{self.check}:{','.join(parts)}"


class CaseOutcome(NamedTuple):
    passed: bool
    vacuous: bool
    checked: int
    witnesses: List[dict]


def _stable(g: int, n: int) -> bool:
    return g >= 0 and 2 * g - 2 + n > 0


def _d_grid(n: int, low: int, high: int, floor: int = 0) -> Iterator[Tuple[int, ...]]:
    for total in range(max(low, 0), high + 1):
        yield from nonincreasing_tuples(total, n, floor)


def _conjectural_rows_proven(g: int, n: int) -> bool:
    """The n = 1 and g = 0 rows of the conjectured vanishing are theorems."""
    return n == 1 or g == 0


def build_cases(config: SweepConfig) -> List[Case]:
    """Expand a sweep configuration into its ordered list of cases."""
    builders = {
        'c1': _c1_cases,
        'c2g0': _c2_cases,
        'c3g0': _c3_cases,
        'oracle': _oracle_cases,
        'lp': _lp_cases,
        'reduction': _reduction_cases,
        'degreebound': _degreebound_cases,
    }
    return list(builders[config.check](config))


def _c1_cases(config: SweepConfig) -> Iterator[Case]:
    for g in config.genera:
        for n in config.points:
            for m in config.frozen:
                if m < 2 or n < 1 or not _stable(g, n + m):
                    continue
                low = 2 * g + m - 1
                if config.reduced:
                    grid = nonincreasing_tuples(low, n, floor=1)
                else:
                    high = config.dcap if config.dcap is not None else 3 * g - 3 + n + m
                    grid = _d_grid(n, low, high)
                for d in grid:
                    yield Case.make('c1', _conjectural_rows_proven(g, n), g=g, n=n, m=m, d=d)


def _c2_cases(config: SweepConfig) -> Iterator[Case]:
    for n in config.points:
        if n < 2:
            continue
        high = config.dcap if config.dcap is not None else n - 2
        for d in _d_grid(n, 0, high):
            yield Case.make('c2g0', True, g=0, n=n, m=1, d=d)


def _c3_cases(config: SweepConfig) -> Iterator[Case]:
    for n in config.points:
        if n < 3:
            continue
        high = config.dcap if config.dcap is not None else n - 3
        for d in _d_grid(n, 0, high):
            yield Case.make('c3g0', True, g=0, n=n, m=0, d=d)


def _oracle_cases(config: SweepConfig) -> Iterator[Case]:
    for g in config.genera:
        for n in config.points:
            for m in config.frozen:
                if n < 1 or not _stable(g, n + m):
                    continue
                high = config.dcap if config.dcap is not None else 3 * g - 3 + n + m
                for d in _d_grid(n, 0, high):
                    yield Case.make('oracle', True, g=g, n=n, m=m, d=d)


def _lp_cases(config: SweepConfig) -> Iterator[Case]:
    for g in config.genera:
        for r in config.r_values:
            if g >= 1:
                yield Case.make('lp', True, relation='lp1', g=g, r=r)
            for m in config.frozen:
                if m >= 2:
                    yield Case.make('lp', True, relation='lp2', g=g, m=m, r=r)
        for m in config.frozen:
            if m >= 2:
                for ell in range(1, g + 2):
                    yield Case.make('lp', True, relation='inductive', g=g, m=m, ell=ell)


def _reduction_cases(config: SweepConfig) -> Iterator[Case]:
    for g in config.genera:
        for n in config.points:
            for m in config.frozen:
                if m < 2 or n < 1 or not _stable(g, n + m):
                    continue
                dimension = 3 * g - 3 + n + m
                high = config.dcap if config.dcap is not None else dimension - 1
                for d in _d_grid(n, 2 * g + m - 1, high):
                    # equal entries give relabelled copies of one difference
                    for i in sorted({d.index(x) + 1 for x in d}):
                        yield Case.make('reduction', _conjectural_rows_proven(g, n), g=g, n=n, m=m, d=d, i=i)


def _degreebound_cases(config: SweepConfig) -> Iterator[Case]:
    for g in config.genera:
        for n in config.points:
            for m in config.frozen:
                if m < 2 or n < 1 or not _stable(g, n + m):
                    continue
                high = config.dcap if config.dcap is not None else 3 * g - 3 + n + m
                for total in range(2 * g + m - 1, high + 1):
                    yield Case.make('degreebound', _conjectural_rows_proven(g, n), g=g, n=n, m=m, total=total)


# =============================================================================
# CASE EVALUATION
# =============================================================================

def _from_sweep(report: SweepReport) -> CaseOutcome:
    return CaseOutcome(report.passed, report.vacuous, report.checked, report.witnesses(MAX_WITNESSES))


def _class_difference(name: str, c1: TautClass, c2: TautClass) -> Optional[dict]:
    diff = c1 - c2
    if diff.is_zero():
        return None
    terms = to_json(diff)['terms']
    return {"pair": name, "terms": terms[:MAX_WITNESSES], "n_terms": len(terms)}


def _eval_c1(g: int, n: int, m: int, d: Tuple[int, ...]) -> CaseOutcome:
    spec = BSpec(g, n, m, d)
    return _from_sweep(vanishing_sweep(b_class_fast(spec), degree=spec.degree))


def _eval_c2g0(g: int, n: int, m: int, d: Tuple[int, ...]) -> CaseOutcome:
    spec = BSpec(g, n, m, d)
    return _from_sweep(pairing_difference(b_class_fast(spec), a1_class_genus0(n, d), degree=spec.degree))


def _eval_c3g0(g: int, n: int, m: int, d: Tuple[int, ...]) -> CaseOutcome:
    spec = BSpec(g, n, m, d)
    return _from_sweep(pairing_difference(b_class_fast(spec), a0_class_genus0(n, d), degree=spec.degree))


def _pairing_witness(name: str, c1: TautClass, c2: TautClass, degree: int) -> Optional[dict]:
    report = pairing_difference(c1, c2, degree=degree)
    if report.passed:
        return None
    return {"pair": name, "pairings": report.witnesses(MAX_WITNESSES), "n_pairings": len(report.nonzero)}


def _eval_oracle(g: int, n: int, m: int, d: Tuple[int, ...]) -> CaseOutcome:
    spec = BSpec(g, n, m, d)
    tilde = tilde_b_class(spec)
    comparisons = [
        ('definition=fast', b_class_definition(spec), b_class_fast(spec)),
        ('tilde=tilde_pushforward', tilde, tilde_b_class_pushforward(spec)),
    ]
    if n == 1 and d[0] >= 2 * g + m - 1:
        comparisons.append(('definition=unfolded', b_class_definition(spec), unfolded_b_class(g, m, d[0])))

    witnesses = []
    for name, c1, c2 in comparisons:
        witness = _class_difference(name, c1, c2)
        if witness:
            witnesses.append(witness)
    checked = len(comparisons)

    # Forgetting a regular leg only commutes with B̃ when the frozen legs keep the root stable (m >= 2).
    # Pruned over-dimension terms break formal equality, so compare pairings.
    if m >= 2:
        witness = _pairing_witness('tilde_trailing_zero=pullback',
                                   tilde_b_class(BSpec(g, n + 1, m, d + (0,))),
                                   forgetful_pullback(tilde, n + 1), spec.degree)
        if witness:
            witnesses.append(witness)
        checked += 1
    return CaseOutcome(not witnesses, False, checked, witnesses)


def _eval_lp(relation: str, g: int, r: int = 0, m: int = 1, ell: int = 1) -> CaseOutcome:
    if relation == 'lp1':
        c, degree = lp_relation_class(1, g, r), 2 * g + r
    elif relation == 'lp2':
        c, degree = lp_relation_class(2, g, r, m), 2 * g + m - 1 + r
    elif relation == 'inductive':
        c, degree = one_point_inductive_difference(g, m, ell), 2 * g + m - 1
    else:
        raise ValueError(f"❌ Unknown relation '{relation}'")
    return _from_sweep(vanishing_sweep(c, degree=degree))


def _eval_reduction(g: int, n: int, m: int, d: Tuple[int, ...], i: int) -> CaseOutcome:
    return _from_sweep(vanishing_sweep(reduction_difference(g, m, d, i), degree=sum(d) + 1))


def _eval_degreebound(g: int, n: int, m: int, total: int) -> CaseOutcome:
    checked = 0
    vacuous = total > 3 * g - 3 + n + m
    witnesses = []
    for d, c in p_coefficients(g, n, m, total).items():
        report = vanishing_sweep(c, degree=total)
        checked += report.checked
        for witness in report.witnesses(MAX_WITNESSES):
            witnesses.append({"d": list(d), **witness})
    return CaseOutcome(not witnesses, vacuous, checked, witnesses[:MAX_WITNESSES])


EVALUATORS = {
    'c1': _eval_c1,
    'c2g0': _eval_c2g0,
    'c3g0': _eval_c3g0,
    'oracle': _eval_oracle,
    'lp': _eval_lp,
    'reduction': _eval_reduction,
    'degreebound': _eval_degreebound,
}


def evaluate_case(case: Case) -> dict:
    """
    Run one case and return its report record

    Exceptions are caught and turned into 'error' records.
    """
    record = {
        "case": case.case_id,
        "check": case.check,
        "spec": case.spec,
        "status": None,
        "flag": None,
        "witnesses": [],
        "checked": 0
    }
    try:
        outcome = EVALUATORS[case.check](**case.kwargs)
    except Exception as e:
        logger.error(f"❌ Case {case.case_id} raised: {e}", exc_info=True)
        record["status"] = ERROR
        record["error"] = f"{type(e).__name__}: {e}"
        record["error_kind"] = OutcomeClassifier.classify_error(e)
        return record

    status = OutcomeClassifier.classify(outcome.passed, case.proven, outcome.vacuous)
    record["status"] = status
    record["flag"] = OutcomeClassifier.flag_for(status)
    record["witnesses"] = outcome.witnesses
    record["checked"] = outcome.checked
    return record


# =============================================================================
# ORCHESTRATION
# =============================================================================

class VerificationCore:
    """
    Main verification orchestration class

    Coordinates:
    - Case grids (build_cases)
    - Parallel execution (runner)
    - Outcome bookkeeping and exit codes (classifier)
    - The correlator cache (engine.cache), flushed once per sweep
    """

    def __init__(self, engine, classifier: OutcomeClassifier, runner):
        self.engine = engine
        self.classifier = classifier
        self.runner = runner
        self.records: List[dict] = []

        logger.info("✅ VerificationCore initialized")

    async def run(self, config: SweepConfig) -> List[dict]:
        """Build, run and classify one sweep; flushes the cache afterwards."""
        config.validate()
        cases = build_cases(config)
        if not cases:
            logger.warning(f"⚠️ Check {config.check}: the grid produced no cases")

        records = await self.runner.run(evaluate_case, cases)
        for record in records:
            self.classifier.record(record)
        self.records.extend(records)

        try:
            self.engine.cache.flush()
        except OSError as e:
            logger.error(f"❌ Could not flush correlator cache: {e}", exc_info=True)
        return records

    @staticmethod
    def format_records(records: Sequence[dict]) -> List[str]:
        return [json.dumps(record, ensure_ascii=False) for record in records]

    def write_report(self, records: Sequence[dict], out_path: str):
        with open(out_path, 'w', encoding='utf-8') as f:
            for line in self.format_records(records):
                f.write(line + '\n')
        logger.info(f"💾 Report written: {len(records)} records → {out_path}")

    def summary(self, check: str) -> dict:
        stats = self.classifier.get_stats()
        return {
            "check": check,
            **stats,
            "health": self.classifier.get_health_report(),
            "runner": self.runner.get_stats()
        }
