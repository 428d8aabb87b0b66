# shared/logging_config.py
import logging
import sys
from contextvars import ContextVar
from typing import Optional

import structlog
from opentelemetry import trace

# Context variable for per-invocation tracking
run_id: ContextVar[Optional[str]] = ContextVar("run_id", default=None)


def get_trace_context() -> dict:
    """Get current trace context if available"""
    span_context = trace.get_current_span().get_span_context()
    if span_context.is_valid:
        return {
            "trace_id": format(span_context.trace_id, "032x"),
            "span_id": format(span_context.span_id, "016x"),
        }
    return {}


def configure_logging(service_name: str, level: str = "INFO") -> None:
    """
    Configure structured logging for a CLI run.

    Events are rendered as JSON lines on stderr so that artifacts written to
    stdout or the output directory are never interleaved with log output.
    """

    def add_trace_context(logger, method_name, event_dict):
        """Add trace context to log events if available"""
        trace_context = get_trace_context()
        if trace_context:
            event_dict.update(trace_context)
        return event_dict

    def add_run_id(logger, method_name, event_dict):
        current = run_id.get()
        if current is not None:
            event_dict.setdefault("run_id", current)
        return event_dict

    logging.basicConfig(
        stream=sys.stderr,
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(message)s",
        force=True,
    )

    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            add_run_id,
            add_trace_context,
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.JSONRenderer(),
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )
    structlog.get_logger(service_name).debug(
        "logging.configured", service=service_name, level=level.upper()
    )


def get_logger(name: Optional[str] = None) -> structlog.BoundLogger:
    """Get a logger instance with the given name; configuration is resolved on first use"""
    return structlog.get_logger(name, service=name)
