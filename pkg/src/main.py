"""cusplab — escape-of-mass constructions on the space of unimodular lattices."""

import logging
import logging.handlers
import sys

from cli import EXIT_FAILURE, build_parser, execute, flags_from_args
from config import RunConfig, load_config
from core import activate
from core.errors import ConfigInvalid

log = logging.getLogger("cusplab")

LOG_FILE = "cusplab.log"


def setup_logging(config: RunConfig) -> None:
    """Configure root logger with console and rotating file handlers."""
    fmt = logging.Formatter("%(asctime)s [%(levelname)s] %(name)s: %(message)s")
    level = getattr(logging, config["log_level"].upper(), logging.INFO)

    root = logging.getLogger()
    root.setLevel(level)

    console = logging.StreamHandler()
    console.setFormatter(fmt)
    root.addHandler(console)

    log_dir = config.out
    log_dir.mkdir(parents=True, exist_ok=True)
    file_handler = logging.handlers.RotatingFileHandler(
        log_dir / LOG_FILE,
        maxBytes=1_000_000,
        backupCount=3,
    )
    file_handler.setFormatter(fmt)
    root.addHandler(file_handler)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(flags_from_args(args), args.config)
    except ConfigInvalid as e:
        logging.basicConfig(format="%(levelname)s %(name)s: %(message)s")
        log.error("Invalid configuration: %s", e)
        return EXIT_FAILURE
    setup_logging(config)

    # Precision for the longest orbit any command of this run follows
    p = config.params
    horizon = p.horizon(config["m"]) + max(p.Nprime, config["nprime_max"])
    activate(p.precision.for_horizon(horizon, p.d))

    log.info("Starting %s (d=%d, M=%g, N=%d, K=%d)", args.command, p.d, p.M, p.N, p.K)
    return execute(args.command, config)


if __name__ == "__main__":
    sys.exit(main())
