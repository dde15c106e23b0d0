"""
File: handlers/command_handlers.py
Location: tautcheck/handlers/command_handlers.py
Purpose: All subcommand handlers (bclass, verify, cache, oracle)

Handlers return the process exit code. Stdout carries JSON only; every
human-readable message goes through logging.
"""

import argparse
import asyncio
import json
import logging
import sys

from config import settings
from core.b_classes import BSpec, b_class_definition, b_class_fast, tilde_b_class
from core.graph_core import dumps
from core.intersect import IntersectionEngine, consistency_sweep, cross_validate, set_engine
from core.outcome import (
    EXIT_INCONSISTENT,
    EXIT_INVALID_INPUT,
    EXIT_OK,
    InconsistencyError,
    OutcomeClassifier,
)
from core.sweep_runner import SweepRunner
from core.verifier import CHECKS, SweepConfig, VerificationCore
from database.correlator_cache import CorrelatorCache
from utils.validators import parse_exponents, parse_number_range

logger = logging.getLogger(__name__)

METHODS = {
    'def': b_class_definition,
    'fast': b_class_fast,
    'tilde': tilde_b_class,
}


def _emit(payload):
    """Write one JSON document to stdout."""
    if not isinstance(payload, str):
        payload = json.dumps(payload, ensure_ascii=False)
    sys.stdout.write(payload + '\n')
    sys.stdout.flush()


def _open_engine(cache_path) -> IntersectionEngine:
    cache = CorrelatorCache(cache_path or settings.CACHE_PATH)
    cache.load()
    engine = IntersectionEngine(cache)
    set_engine(engine)
    return engine


# =============================================================================
# bclass
# =============================================================================

def cmd_bclass(args) -> int:
    """Compute one class and print its canonical JSON"""
    try:
        spec = BSpec(args.g, args.n, args.m, parse_exponents(args.d))
        spec.validate()
    except ValueError as e:
        logger.error(f"❌ {e}")
        return EXIT_INVALID_INPUT

    logger.info(f"🧮 {args.method} class for {spec.as_dict()}")
    c = METHODS[args.method](spec)
    logger.info(f"✅ {len(c)} terms")
    _emit(dumps(c))
    return EXIT_OK


# =============================================================================
# verify
# =============================================================================

def _sweep_config(args) -> SweepConfig:
    return SweepConfig(
        check=args.check,
        genera=parse_number_range(args.g),
        points=parse_number_range(args.n),
        frozen=parse_number_range(args.m),
        r_values=parse_number_range(args.r),
        dcap=args.dcap,
        reduced=args.reduced,
        strict=args.strict,
        jobs=args.jobs if args.jobs is not None else settings.DEFAULT_JOBS,
        cache_path=args.cache or settings.CACHE_PATH,
        out_path=args.out
    )


def cmd_verify(args) -> int:
    """Run one verification sweep, write the JSON-lines report and a summary"""
    try:
        config = _sweep_config(args)
        config.validate()
    except ValueError as e:
        logger.error(f"❌ {e}")
        return EXIT_INVALID_INPUT

    try:
        engine = _open_engine(config.cache_path)
    except InconsistencyError as e:
        logger.error(f"❌ {e}")
        return EXIT_INCONSISTENT

    classifier = OutcomeClassifier(strict=config.strict)
    runner = SweepRunner(jobs=config.jobs, cache=engine.cache, report_timings=settings.REPORT_TIMINGS)
    core = VerificationCore(engine, classifier, runner)

    logger.info("=" * 60)
    logger.info(f"🚀 VERIFY {config.check}: g={config.genera} n={config.points} m={config.frozen} "
                f"r={config.r_values} dcap={config.dcap} reduced={config.reduced}")
    logger.info("=" * 60)

    try:
        records = asyncio.run(core.run(config))
    except InconsistencyError as e:
        logger.error(f"❌ {e}", exc_info=True)
        return EXIT_INCONSISTENT

    if config.out_path:
        core.write_report(records, config.out_path)
    else:
        for line in core.format_records(records):
            _emit(line)

    summary = core.summary(config.check)
    health = summary['health']

    logger.info("=" * 60)
    logger.info(f"📊 {summary['total']} cases: {summary['pass']} pass, {summary['vacuous']} vacuous, "
                f"{summary['conjecture-fail']} conjecture-fail, {summary['fail']} fail, {summary['error']} error")
    logger.info(f"✅ Healthy: {len(health['healthy'])} | ⚠️ Warning: {len(health['warning'])} "
                f"| ❌ Critical: {len(health['critical'])}")
    logger.info("=" * 60)

    _emit({"summary": summary})
    return summary['exit_code']


# =============================================================================
# cache
# =============================================================================

def cmd_cache(args) -> int:
    """Correlator cache maintenance: stats, export, merge"""
    try:
        engine = _open_engine(args.cache)
    except InconsistencyError as e:
        logger.error(f"❌ {e}")
        return EXIT_INCONSISTENT
    cache = engine.cache

    if args.action == 'stats':
        _emit(cache.get_stats())
        return EXIT_OK

    if not args.path:
        logger.error(f"❌ cache {args.action} needs a PATH")
        return EXIT_INVALID_INPUT

    if args.action == 'export':
        cache.export(args.path)
        _emit({"exported": len(cache), "path": args.path})
        return EXIT_OK

    try:
        added = cache.merge(args.path)
    except InconsistencyError as e:
        logger.error(f"❌ Merge aborted: {e}")
        return EXIT_INCONSISTENT
    cache.flush()
    _emit({"merged": added, "entries": len(cache)})
    return EXIT_OK


# =============================================================================
# oracle
# =============================================================================

def cmd_oracle(args) -> int:
    """Cross-validate the correlator engine against the independent recursion"""
    max_genus = args.max_genus if args.max_genus is not None else settings.ORACLE_MAX_GENUS
    max_points = args.max_points if args.max_points is not None else settings.ORACLE_MAX_POINTS

    try:
        engine = _open_engine(args.cache)
        compared = cross_validate(max_genus, max_points, engine)
        consistent = consistency_sweep(max_genus, max_points, engine)
    except InconsistencyError as e:
        logger.error(f"❌ {e}")
        _emit({"status": "fail", "error": str(e)})
        return EXIT_INCONSISTENT

    engine.cache.flush()
    _emit({"status": "pass", "compared": compared, "identities": consistent,
           "max_genus": max_genus, "max_points": max_points})
    return EXIT_OK


# =============================================================================
# REGISTRATION
# =============================================================================

def register_command_handlers(subparsers):
    """Attach every subcommand to an argparse subparsers object."""
    bclass = subparsers.add_parser('bclass', help='compute B^m_{g,d} or its tilde variant')
    bclass.add_argument('-g', '--g', type=int, required=True)
    bclass.add_argument('-n', '--n', type=int, required=True)
    bclass.add_argument('-m', '--m', type=int, required=True)
    bclass.add_argument('-d', '--d', required=True, help='comma-separated exponents, e.g. 2,1')
    bclass.add_argument('--method', choices=sorted(METHODS), default='fast')
    bclass.set_defaults(handler=cmd_bclass)

    verify = subparsers.add_parser('verify', help='run a verification sweep')
    verify.add_argument('--check', choices=CHECKS, required=True)
    verify.add_argument('--g', default='0-1', help='genus range, e.g. 0-2')
    verify.add_argument('--n', default='1-2', help='regular leg counts')
    verify.add_argument('--m', default='2,3', help='frozen leg counts')
    verify.add_argument('--r', default='0-2', help='LP relation shifts')
    verify.add_argument('--dcap', type=int, default=None, help='cap on sum(d) (default: dimension)')
    verify.add_argument('--reduced', action='store_true', help='c1 only: sum(d) = 2g+m-1, d_i >= 1')
    verify.add_argument('--strict', action='store_true', help='exit 1 on conjecture failures')
    verify.add_argument('--jobs', type=int, default=None)
    verify.add_argument('--cache', default=None)
    verify.add_argument('--out', default=None, help='JSON-lines report path (default: stdout)')
    verify.set_defaults(handler=cmd_verify)

    cache = subparsers.add_parser('cache', help='correlator cache maintenance')
    cache.add_argument('action', choices=('stats', 'export', 'merge'))
    cache.add_argument('path', nargs='?', default=None)
    cache.add_argument('--cache', default=None)
    cache.set_defaults(handler=cmd_cache)

    oracle = subparsers.add_parser('oracle', help='cross-validate correlators')
    oracle.add_argument('--max-genus', type=int, default=None)
    oracle.add_argument('--max-points', type=int, default=None)
    oracle.add_argument('--cache', default=None)
    oracle.set_defaults(handler=cmd_oracle)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='tautcheck',
        description='Exact calculator and verification harness for the classes B^m_{g,d}'
    )
    subparsers = parser.add_subparsers(dest='command', required=True)
    register_command_handlers(subparsers)
    return parser
