import os
import sys

from . import (
    arg_parser,
    log_utils,
    runner
)
from .errors import GeometryError


__version__ = "0.1.0"


async def main(argv: list[str]|None = None) -> int:
    """
    Entry point

    OUT:
        exit status
    """
    args = arg_parser.parse_args(argv)

    if args.debug:
        os.environ["VERBOSE_LOGS"] = "1"

    log_utils.init()

    log_utils.logger.info("RUN STARTING")
    try:
        return await runner.run(args)

    except (GeometryError, OSError) as e:
        log_utils.logger.error(f"Run aborted: {e!r}")
        print(f"error: {e}", file=sys.stderr)
        return 1

    finally:
        log_utils.logger.info("RUN STOPPING")
        log_utils.shutdown()
