from graphene_ndr.io.tables import iv_frame, read_iv_csv, transmission_frame
from graphene_ndr.io.writer import OutputWriter, RunManifest

__all__ = [
    "OutputWriter",
    "RunManifest",
    "iv_frame",
    "read_iv_csv",
    "transmission_frame",
]
