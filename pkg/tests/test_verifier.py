import asyncio
import json
import os

import pytest

from core.outcome import (
    CONJECTURE_FAIL,
    CONJECTURE_FLAG,
    ERROR,
    EXIT_INCONSISTENT,
    EXIT_OK,
    EXIT_STRICT_CONJECTURE,
    FAIL,
    PASS,
    VACUOUS,
    CacheConflictError,
    OutcomeClassifier,
)
from core.sweep_runner import SweepRunner
from core.verifier import Case, SweepConfig, VerificationCore, build_cases, evaluate_case


def _record(check, status, case='x'):
    return {"case": case, "check": check, "status": status}


class TestSweepConfig:

    @pytest.mark.parametrize("kwargs", [
        {"check": "c4"},
        {"check": "c1", "dcap": 0},
        {"check": "c1", "jobs": 0},
        {"check": "lp", "reduced": True},
    ])
    def test_invalid_configs(self, kwargs):
        with pytest.raises(ValueError):
            SweepConfig(**kwargs).validate()

    def test_defaults_are_valid(self):
        SweepConfig(check='c1').validate()


class TestBuildCases:

    def test_reduced_grid(self):
        cases = build_cases(SweepConfig('c1', genera=[1], points=[2], frozen=[2], reduced=True))
        assert [c.case_id for c in cases] == ["c1:g=1,n=2,m=2,d=(2,1)"]
        assert not cases[0].proven

    def test_one_point_rows_are_proven(self):
        cases = build_cases(SweepConfig('c1', genera=[1], points=[1], frozen=[2]))
        assert [(c.kwargs['d'], c.proven) for c in cases] == [((3,), True)]

    def test_unstable_and_small_m_skipped(self):
        assert build_cases(SweepConfig('c1', genera=[0], points=[1], frozen=[0, 1, 2])) == []

    def test_dcap_limits_the_grid(self):
        cases = build_cases(SweepConfig('c1', genera=[0], points=[3], frozen=[2], dcap=1))
        assert [c.kwargs['d'] for c in cases] == [(1, 0, 0)]

    def test_genus_zero_comparison_grids(self):
        c2 = build_cases(SweepConfig('c2g0', points=[2, 3]))
        assert [c.kwargs['d'] for c in c2] == [(0, 0), (0, 0, 0), (1, 0, 0)]
        c3 = build_cases(SweepConfig('c3g0', points=[3, 4]))
        assert [c.kwargs['d'] for c in c3] == [(0, 0, 0), (0, 0, 0, 0), (1, 0, 0, 0)]

    def test_lp_grid(self):
        cases = build_cases(SweepConfig('lp', genera=[0, 1], frozen=[2], r_values=[0]))
        assert [c.case_id for c in cases] == [
            "lp:relation=lp2,g=0,m=2,r=0",
            "lp:relation=inductive,g=0,m=2,ell=1",
            "lp:relation=lp1,g=1,r=0",
            "lp:relation=lp2,g=1,m=2,r=0",
            "lp:relation=inductive,g=1,m=2,ell=1",
            "lp:relation=inductive,g=1,m=2,ell=2",
        ]

    def test_reduction_uses_distinct_entries(self):
        cases = build_cases(SweepConfig('reduction', genera=[0], points=[3], frozen=[2]))
        assert [(c.kwargs['d'], c.kwargs['i']) for c in cases] == [((1, 0, 0), 1), ((1, 0, 0), 2)]

    def test_degreebound_totals(self):
        cases = build_cases(SweepConfig('degreebound', genera=[1], points=[1], frozen=[2]))
        assert [c.kwargs['total'] for c in cases] == [3]

    def test_spec_is_json_ready(self):
        case = Case.make('c1', True, g=1, n=1, m=2, d=(3,))
        assert case.spec == {"g": 1, "n": 1, "m": 2, "d": [3]}
        json.dumps(case.spec)


class TestEvaluateCase:

    def test_relation_case_passes(self, engine):
        record = evaluate_case(Case.make('lp', True, relation='lp2', g=1, m=2, r=0))
        assert record["status"] == PASS
        assert record["flag"] is None
        assert record["checked"] > 0
        assert record["witnesses"] == []

    def test_theorem_row_passes(self, engine):
        record = evaluate_case(Case.make('c1', True, g=1, n=1, m=2, d=(3,)))
        assert record["status"] == PASS
        assert record["case"] == "c1:g=1,n=1,m=2,d=(3)"

    def test_degree_above_dimension_is_vacuous(self, engine):
        record = evaluate_case(Case.make('c1', True, g=1, n=1, m=2, d=(4,)))
        assert record["status"] == VACUOUS

    def test_oracle_case(self, engine):
        record = evaluate_case(Case.make('oracle', True, g=1, n=1, m=2, d=(3,)))
        assert record["status"] == PASS
        assert record["checked"] == 4

    def test_oracle_skips_pullback_with_one_frozen_leg(self, engine):
        record = evaluate_case(Case.make('oracle', True, g=1, n=2, m=1, d=(1, 0)))
        assert record["status"] == PASS
        assert record["checked"] == 2

    def test_oracle_grid_passes(self, engine):
        cases = build_cases(SweepConfig('oracle', genera=[0, 1], points=[1, 2], frozen=[1, 2]))
        statuses = {evaluate_case(c)["status"] for c in cases}
        assert statuses == {PASS}

    def test_exception_becomes_error_record(self, engine):
        record = evaluate_case(Case.make('lp', True, relation='lp9', g=1))
        assert record["status"] == ERROR
        assert record["error"].startswith("ValueError")
        assert record["error_kind"] == 'invalid'


class TestOutcomeClassifier:

    @pytest.mark.parametrize("passed,proven,vacuous,expected", [
        (True, True, False, PASS),
        (True, False, False, PASS),
        (False, True, False, FAIL),
        (False, False, False, CONJECTURE_FAIL),
        (True, False, True, VACUOUS),
    ])
    def test_status_matrix(self, passed, proven, vacuous, expected):
        assert OutcomeClassifier.classify(passed, proven, vacuous) == expected

    def test_only_conjecture_failures_are_flagged(self):
        assert OutcomeClassifier.flag_for(CONJECTURE_FAIL) == CONJECTURE_FLAG
        assert OutcomeClassifier.flag_for(FAIL) is None

    def test_conjecture_failures_exit_zero_unless_strict(self):
        for strict, expected in ((False, EXIT_OK), (True, EXIT_STRICT_CONJECTURE)):
            classifier = OutcomeClassifier(strict=strict)
            classifier.record(_record('c1', PASS))
            classifier.record(_record('c1', CONJECTURE_FAIL))
            assert classifier.exit_code() == expected

    @pytest.mark.parametrize("status", [FAIL, ERROR])
    def test_proven_failures_are_inconsistencies(self, status):
        classifier = OutcomeClassifier(strict=False)
        classifier.record(_record('lp', status))
        assert classifier.exit_code() == EXIT_INCONSISTENT

    def test_health_report(self):
        classifier = OutcomeClassifier()
        classifier.record(_record('lp', PASS))
        classifier.record(_record('c1', CONJECTURE_FAIL, case='c1:a'))
        classifier.record(_record('oracle', FAIL))
        assert classifier.get_health_report() == {
            'healthy': ['lp'], 'warning': ['c1'], 'critical': ['oracle']
        }
        assert [r['case'] for r in classifier.get_failure_details('c1')] == ['c1:a']
        assert classifier.get_stats()['total'] == 3

    def test_error_classification(self):
        classifier = OutcomeClassifier()
        assert classifier.classify_error(CacheConflictError("x")) == 'inconsistency'
        assert classifier.classify_error(ValueError("x")) == 'invalid'
        assert classifier.classify_error(KeyError("x")) == 'crash'


class TestSweepRunner:

    def test_rejects_zero_jobs(self, engine):
        with pytest.raises(ValueError):
            SweepRunner(jobs=0)

    def test_serial_run_keeps_order(self, engine):
        cases = build_cases(SweepConfig('lp', genera=[1], frozen=[2], r_values=[0, 1]))
        runner = SweepRunner(jobs=1, cache=engine.cache)
        records = runner.run_sync(evaluate_case, cases)
        assert [r['case'] for r in records] == [c.case_id for c in cases]
        assert all('wall_ms' not in r for r in records)
        assert runner.get_stats()['cases_run'] == len(cases)

    def test_timings_reported_on_request(self, engine):
        cases = build_cases(SweepConfig('lp', genera=[1], frozen=[2], r_values=[0]))
        records = SweepRunner(jobs=1, cache=engine.cache, report_timings=True).run_sync(evaluate_case, cases)
        assert all('wall_ms' in r for r in records)

    def test_parallel_matches_serial(self, engine):
        cases = build_cases(SweepConfig('lp', genera=[1], frozen=[2], r_values=[0, 1]))
        serial = SweepRunner(jobs=1, cache=engine.cache).run_sync(evaluate_case, cases)
        parallel = SweepRunner(jobs=2, cache=engine.cache).run_sync(evaluate_case, cases)
        assert parallel == serial


class TestVerificationCore:

    def test_run_flushes_cache_and_summarizes(self, engine, cache_path, tmp_path):
        classifier = OutcomeClassifier()
        core = VerificationCore(engine, classifier, SweepRunner(cache=engine.cache))
        config = SweepConfig('lp', genera=[1], frozen=[2], r_values=[0])

        records = asyncio.run(core.run(config))

        assert os.path.exists(cache_path)
        assert {r['status'] for r in records} == {PASS}
        summary = core.summary('lp')
        assert summary['check'] == 'lp'
        assert summary['total'] == len(records)
        assert summary['exit_code'] == EXIT_OK
        assert summary['health']['healthy'] == ['lp']

        out = tmp_path / 'report.jsonl'
        core.write_report(records, str(out))
        lines = out.read_text(encoding='utf-8').splitlines()
        assert [json.loads(line)['case'] for line in lines] == [r['case'] for r in records]

    def test_run_rejects_invalid_config(self, engine):
        core = VerificationCore(engine, OutcomeClassifier(), SweepRunner(cache=engine.cache))
        with pytest.raises(ValueError):
            asyncio.run(core.run(SweepConfig('nope')))
