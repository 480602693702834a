import hashlib
import os
from datetime import datetime, timezone
from typing import Dict, List, Optional

import yaml

from app.config import Config

from .exceptions import IoError
from .messages import Messages


def get_output_directory(directory: Optional[str] = None) -> str:
    """
    Returns the folder run artifacts go to, creating it if needed.

    Args:
      directory: Requested folder; Config.OUTPUT_DIRECTORY when empty.

    Returns:
      str: The folder path.
    """
    directory = directory or Config.OUTPUT_DIRECTORY
    try:
        os.makedirs(directory, exist_ok=True)
    except OSError as e:
        raise IoError(Messages.ERROR_WRITE_FILE.format(path=directory, reason=e)) from e
    return directory


def file_sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(
    directory: str,
    scenario_hash: str,
    files: List[str],
    resolutions: Dict[str, float],
    tolerances: Dict[str, float],
) -> str:
    """
    Writes manifest.yaml listing every data file of the run with its checksum. Written last.

    Returns:
      str: The manifest path.
    """
    manifest = {
        "scenario_hash": scenario_hash,
        "tool_version": Config.VERSION,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "files": [
            {"name": os.path.basename(path), "sha256": file_sha256(path)}
            for path in sorted(files)
        ],
        "resolutions": resolutions,
        "tolerances": tolerances,
    }
    path = os.path.join(directory, Config.MANIFEST_FILENAME)
    try:
        with open(path, "w", encoding="utf-8") as handle:
            yaml.safe_dump(manifest, handle, sort_keys=False)
    except OSError as e:
        raise IoError(Messages.ERROR_WRITE_FILE.format(path=path, reason=e)) from e
    return path


def tolerances_in_use() -> Dict[str, float]:
    return {
        "symmetry": Config.SYMMETRY_TOL,
        "jacobi": Config.JACOBI_TOL,
        "zero_eigen_relative": Config.ZERO_EIGEN_REL,
        "endpoint_km": Config.ENDPOINT_TOL,
        "inversion_km": Config.INVERSION_TOL,
        "sampling_guard_km": Config.SAMPLING_GUARD_KM,
        "guard_min_dt_s": Config.GUARD_MIN_DT,
        "guard_edge_margin_s": Config.GUARD_EDGE_MARGIN,
        "max_condition": Config.MAX_CONDITION,
    }
