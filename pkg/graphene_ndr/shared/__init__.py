from .logging_config import configure_logging, get_logger, run_id
from .tracing import configure_tracing

__all__ = ["configure_logging", "configure_tracing", "get_logger", "run_id"]
