# io/writer.py
import json
from pathlib import Path
from threading import Lock
from typing import Any, Optional

import pandas as pd
from matplotlib.figure import Figure
from pydantic import BaseModel, Field

from graphene_ndr.shared.logging_config import get_logger

logger = get_logger(__name__)

FLOAT_FORMAT = "%.17g"
MANIFEST_NAME = "manifest.json"
RESOLVED_CONFIG_NAME = "resolved_config.json"


class RunManifest(BaseModel):
    """Record of one command run; its presence implies every listed output is complete."""

    command: str = Field(..., description="Name of the command that ran")
    resolved_config: dict = Field(..., description="Configuration with defaults applied")
    outputs: list[str] = Field(default_factory=list, description="Files written, relative to the output directory")
    wall_time: float = Field(..., description="Seconds spent in the command")
    warnings: list[str] = Field(default_factory=list)


class OutputWriter:
    """
    Writes run artifacts into one output directory.

    Every file is written to a temporary sibling first and atomically moved
    into place. Files written during a run are tracked, and all of them are
    removed again when the run fails (the context manager exits with an
    exception) or ``rollback`` is called.
    """

    def __init__(self, out_dir: Path):
        """
        Initialize the writer

        Args:
            out_dir: Directory receiving the artifacts; created if missing.
        """
        self.out_dir = Path(out_dir)
        self.file_lock = Lock()
        self.outputs: list[Path] = []
        self._setup_directories()

    def _setup_directories(self) -> None:
        try:
            self.out_dir.mkdir(parents=True, exist_ok=True)
            self._get_temp_dir().mkdir(exist_ok=True)
        except OSError as e:
            logger.error("writer.setup_failed", out_dir=str(self.out_dir), error=str(e))
            raise

    def _get_temp_dir(self) -> Path:
        return self.out_dir / ".tmp"

    def write_text(self, name: str, text: str) -> Path:
        """
        Atomically write ``text`` to ``out_dir/name``.

        Returns:
            Path of the written file.
        """
        target = self.out_dir / name
        temp_file = self._get_temp_dir() / f"{name}.tmp"
        try:
            with self.file_lock:
                temp_file.write_text(text, encoding="utf-8", newline="\n")
                temp_file.replace(target)
                if target not in self.outputs:
                    self.outputs.append(target)
        except OSError as e:
            logger.error("writer.write_failed", path=str(target), error=str(e))
            raise

        logger.debug("writer.saved", path=str(target))
        return target

    def write_json(self, name: str, data: Any) -> Path:
        return self.write_text(name, json.dumps(data, indent=2, sort_keys=True) + "\n")

    def write_model(self, name: str, model: BaseModel) -> Path:
        return self.write_text(name, model.model_dump_json(indent=2) + "\n")

    def write_csv(self, name: str, frame: pd.DataFrame) -> Path:
        """Write a table with LF line endings and round-trip exact doubles."""
        text = frame.to_csv(
            index=False, float_format=FLOAT_FORMAT, lineterminator="\n", na_rep="nan"
        )
        return self.write_text(name, text)

    def write_svg(self, name: str, figure: Figure) -> Path:
        target = self.out_dir / name
        temp_file = self._get_temp_dir() / f"{name}.tmp"
        try:
            with self.file_lock:
                figure.savefig(temp_file, format="svg", metadata={"Date": None})
                temp_file.replace(target)
                if target not in self.outputs:
                    self.outputs.append(target)
        except OSError as e:
            logger.error("writer.write_failed", path=str(target), error=str(e))
            raise
        return target

    def relative_outputs(self) -> list[str]:
        return [str(path.relative_to(self.out_dir)) for path in self.outputs]

    def write_manifest(
        self,
        command: str,
        resolved_config: dict,
        wall_time: float,
        warnings: Optional[list[str]] = None,
    ) -> RunManifest:
        """Write ``resolved_config.json`` and then the manifest, which comes last."""
        self.write_json(RESOLVED_CONFIG_NAME, resolved_config)
        manifest = RunManifest(
            command=command,
            resolved_config=resolved_config,
            outputs=self.relative_outputs(),
            wall_time=wall_time,
            warnings=list(warnings or []),
        )
        self.write_model(MANIFEST_NAME, manifest)
        return manifest

    def rollback(self) -> None:
        """Remove every file written so far."""
        with self.file_lock:
            for path in reversed(self.outputs):
                try:
                    path.unlink(missing_ok=True)
                    logger.info("writer.rolled_back", path=str(path))
                except OSError as e:
                    logger.error("writer.rollback_failed", path=str(path), error=str(e))
            self.outputs.clear()

    def __enter__(self) -> "OutputWriter":
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if exc_type is not None:
            self.rollback()
        try:
            temp_dir = self._get_temp_dir()
            for path in temp_dir.glob("*.tmp"):
                path.unlink()
            temp_dir.rmdir()
        except OSError as e:
            logger.error("writer.cleanup_failed", error=str(e))
