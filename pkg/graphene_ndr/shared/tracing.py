import os
import sys

from opentelemetry import trace
from opentelemetry.sdk.resources import Resource
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import ConsoleSpanExporter, SimpleSpanProcessor

TRACING_ENV = "GRAPHENE_NDR_TRACING"

_configured = False


def configure_tracing(service_name: str) -> None:
    """Install the SDK tracer provider once; spans go to stderr only when tracing is enabled."""
    global _configured
    if _configured:
        return

    if os.getenv(TRACING_ENV, "false").lower() == "true":
        resource = Resource.create({"service.name": service_name})
        provider = TracerProvider(resource=resource)
        provider.add_span_processor(SimpleSpanProcessor(ConsoleSpanExporter(out=sys.stderr)))
    else:
        provider = TracerProvider()  # no exporter
    trace.set_tracer_provider(provider)
    _configured = True
