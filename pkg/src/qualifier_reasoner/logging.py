"""structlog setup for reasoning runs.

Every command logs to stderr (and ``logging.file`` when set) so graphs and
reports written to stdout stay machine-readable. ``infer`` additionally
wraps its work in :func:`reasoning_run`, which tags every event with a
run id, and the engine times each phase with :func:`phase`.
"""

from __future__ import annotations

import logging
import sys
import time
import uuid
from contextlib import contextmanager
from typing import TYPE_CHECKING, Any

import structlog

if TYPE_CHECKING:
    from collections.abc import Iterator, Sequence

    from qualifier_reasoner.config import LoggingSettings


def configure_logging(settings: LoggingSettings) -> None:
    """Route structlog through the stdlib root logger.

    Reconfiguring replaces earlier handlers, so repeated CLI invocations in
    one process (the test runner) never duplicate output.
    """
    level = getattr(logging, settings.level)
    renderer: structlog.types.Processor = (
        structlog.processors.JSONRenderer()
        if settings.format == "json"
        else structlog.dev.ConsoleRenderer(colors=sys.stderr.isatty())
    )

    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if settings.file is not None:
        settings.file.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(settings.file, encoding="utf-8"))

    formatter = structlog.stdlib.ProcessorFormatter(
        processors=[structlog.stdlib.ProcessorFormatter.remove_processors_meta, renderer],
    )
    root = logging.getLogger()
    root.handlers.clear()
    root.setLevel(level)
    for handler in handlers:
        handler.setFormatter(formatter)
        root.addHandler(handler)

    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_log_level,
            structlog.stdlib.add_logger_name,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.stdlib.ProcessorFormatter.wrap_for_formatter,
        ],
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=False,
    )


# ---------------------------------------------------------------------------
# Run and phase context
# ---------------------------------------------------------------------------


@contextmanager
def reasoning_run(run_id: str | None = None) -> Iterator[str]:
    """Bind a run id to every event logged inside the block and yield it."""
    run_id = run_id or uuid.uuid4().hex[:12]
    with structlog.contextvars.bound_contextvars(run_id=run_id):
        yield run_id


@contextmanager
def phase(name: str, **fields: Any) -> Iterator[structlog.stdlib.BoundLogger]:
    """Log ``phase_done`` with the elapsed seconds when the block finishes.

    ``fields`` are bound for the block only. A failing block logs
    ``phase_failed`` instead and re-raises.
    """
    log: structlog.stdlib.BoundLogger = structlog.get_logger("qualifier_reasoner.phase")
    started = time.perf_counter()
    with structlog.contextvars.bound_contextvars(phase=name, **fields):
        try:
            yield log
        except Exception:
            log.warning("phase_failed", seconds=round(time.perf_counter() - started, 3))
            raise
        log.info("phase_done", seconds=round(time.perf_counter() - started, 3))


def log_derivation(rule: str, conclusion: str, premises: Sequence[str] = ()) -> None:
    """Log one rule firing at debug level, keyed by statement hashes."""
    logger: structlog.stdlib.BoundLogger = structlog.get_logger("derivation")
    logger.debug("derivation_entry", rule=rule, conclusion=conclusion, premises=list(premises))
