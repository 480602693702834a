import logging
import os
from typing import Iterable, List, Optional, Sequence

import pandas as pd
from tabulate import tabulate

from app.config import Config

from .exceptions import IoError
from .messages import Messages

logger = logging.getLogger(__name__)


def to_frame(rows: Iterable[Sequence], columns: List[str]) -> pd.DataFrame:
    """Builds a DataFrame with a fixed column order from homogeneous rows"""
    return pd.DataFrame(list(rows), columns=columns)


def emit_csv(dataset: pd.DataFrame, path: str, columns: Optional[List[str]] = None) -> str:
    """
    Writes a dataset as CSV: header row, no index, floats in full-precision scientific notation.

    Args:
      dataset: The rows to write.
      path: Target file path; parent folders are created.
      columns: Optional column order to enforce.

    Returns:
      str: The written path.
    """
    frame = dataset if columns is None else dataset[columns]
    try:
        folder = os.path.dirname(path)
        if folder:
            os.makedirs(folder, exist_ok=True)
        frame.to_csv(path, index=False, float_format=Config.CSV_FLOAT_FORMAT, lineterminator="\n")
    except OSError as e:
        raise IoError(Messages.ERROR_WRITE_FILE.format(path=path, reason=e)) from e

    logger.info("💾 Wrote %s (%d rows)", path, len(frame))
    return path


def render_table(frame: pd.DataFrame, max_rows: int = 20) -> str:
    """Console summary of the first rows of a dataset"""
    shown = frame.head(max_rows)
    return tabulate(shown.values.tolist(), headers=list(shown.columns), tablefmt="github", floatfmt=".6g")
