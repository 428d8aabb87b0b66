"""CSV tables produced and consumed by the commands."""

import re
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd

from graphene_ndr.config import DeviceConfig
from graphene_ndr.core.landauer import IVCurve, IVPoint
from graphene_ndr.core.sweeps import TransmissionSample
from graphene_ndr.errors import CsvFormatError

IV_COLUMNS = ["V_mV", "I_norm", "est_error", "n_evals"]
TRANSMISSION_COLUMNS = ["x", "T", "regime"]

_PANDAS_LINE = re.compile(r"line (\d+)")


def iv_frame(curve: IVCurve) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "V_mV": [p.V for p in curve.points],
            "I_norm": [p.I for p in curve.points],
            "est_error": [p.est_error for p in curve.points],
            "n_evals": pd.Series([p.n_evals for p in curve.points], dtype="int64"),
        },
        columns=IV_COLUMNS,
    )


def transmission_frame(samples: Sequence[TransmissionSample]) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "x": [s.x for s in samples],
            "T": [s.T for s in samples],
            "regime": [s.regime for s in samples],
        },
        columns=TRANSMISSION_COLUMNS,
    )


def read_iv_csv(path: Path, cfg: DeviceConfig) -> IVCurve:
    """
    Load an I-V table written by the ``iv`` command.

    Raises:
        CsvFormatError: bad header, wrong field count, non-numeric cell or
            non-increasing bias, naming the 1-based line of the file.
    """
    try:
        raw = pd.read_csv(path, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError as e:
        raise CsvFormatError("empty I-V table", line=1) from e
    except pd.errors.ParserError as e:
        match = _PANDAS_LINE.search(str(e))
        raise CsvFormatError(
            "wrong number of fields", line=int(match.group(1)) if match else None
        ) from e

    if list(raw.columns) != IV_COLUMNS:
        raise CsvFormatError(
            f"expected header {','.join(IV_COLUMNS)}, got {','.join(map(str, raw.columns))}",
            line=1,
        )
    if raw.empty:
        raise CsvFormatError("I-V table has no data rows", line=2)

    values = raw.apply(pd.to_numeric, errors="coerce")
    bad = values.isna()
    if bad.to_numpy().any():
        row = int(np.argmax(bad.any(axis=1).to_numpy()))
        column = bad.columns[bad.iloc[row].to_numpy()][0]
        raise CsvFormatError(
            f"non-numeric value {raw.iloc[row][column]!r} in column {column}", line=row + 2
        )

    V = values["V_mV"].to_numpy(dtype=float)
    steps = np.diff(V)
    if np.any(~(steps > 0)):
        row = int(np.argmax(~(steps > 0))) + 1
        raise CsvFormatError("V_mV must be strictly increasing", line=row + 2)

    points = tuple(
        IVPoint(V=float(v), I=float(i), n_evals=int(n), est_error=float(err))
        for v, i, err, n in zip(
            V,
            values["I_norm"].to_numpy(dtype=float),
            values["est_error"].to_numpy(dtype=float),
            values["n_evals"].to_numpy(dtype=float),
        )
    )
    return IVCurve(points=points, config_echo=cfg)
