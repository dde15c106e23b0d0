"""
File: main.py
Location: tautcheck/main.py
Purpose: Main entry point for the command-line harness
"""

import logging
import sys

from config.settings import LOG_FILE, LOG_FORMAT, LOG_LEVEL
from core.outcome import EXIT_INCONSISTENT, EXIT_INVALID_INPUT, InconsistencyError
from handlers.command_handlers import build_parser

# Logs go to the log file and stderr; stdout is reserved for JSON
if sys.platform == 'win32':
    import io
    sys.stdout = io.TextIOWrapper(sys.stdout.buffer, encoding='utf-8')
    sys.stderr = io.TextIOWrapper(sys.stderr.buffer, encoding='utf-8')

logger = logging.getLogger(__name__)


def setup_logging():
    logging.basicConfig(
        format=LOG_FORMAT,
        level=getattr(logging, LOG_LEVEL),
        handlers=[
            logging.FileHandler(LOG_FILE, encoding='utf-8'),
            logging.StreamHandler(sys.stderr)
        ]
    )


def main(argv=None) -> int:
    """Main entry point"""
    args = build_parser().parse_args(argv)
    setup_logging()

    logger.info("=" * 60)
    logger.info(f"🚀 TAUTCHECK: {args.command}")
    logger.info("=" * 60)

    try:
        code = args.handler(args)
    except InconsistencyError as e:
        logger.error(f"❌ Internal inconsistency: {e}", exc_info=True)
        code = EXIT_INCONSISTENT
    except ValueError as e:
        logger.error(f"❌ {e}")
        code = EXIT_INVALID_INPUT

    logger.info(f"✅ Finished with exit code {code}")
    return code


if __name__ == "__main__":
    sys.exit(main())
