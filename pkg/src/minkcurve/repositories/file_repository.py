'''
File access for curves, meshes, per-sample series and reports.

1. CurveRepository.read(path) / write(path, points)
2. MeshRepository.write_obj(path, vertices, faces) / read_obj(path)
3. SeriesRepository.write_csv(path, frame)
4. ReportRepository.write_json(path, payload)

Every write goes to a temporary file in the target directory first and is
moved into place with os.replace.
'''

import json
import os
import tempfile
from typing import Any, Dict, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import ValidationError

from minkcurve.core.errors import IoError
from minkcurve.schemas.schemas import CurvePayload


def _check_path(path) -> str:
    if path is None or not str(path).strip():
        raise IoError("Path is empty")
    return os.fspath(path)


def atomic_write_text(path, text: str) -> str:
    """Write text to path through a temp file + rename."""
    path = _check_path(path)
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.remove(tmp)
            raise
    except OSError as e:
        raise IoError(f"Cannot write {path}: {e}", {"path": path})
    return path


def read_text(path) -> str:
    path = _check_path(path)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise IoError(f"Cannot read {path}: {e}", {"path": path})


def dumps_json(payload: Dict[str, Any]) -> str:
    """Deterministic JSON: sorted keys, repr-exact floats, trailing newline."""
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=True) + "\n"


# -----------------------
# Curve Repository
# -----------------------
class CurveRepository:
    """
    Handles the curve JSON format:
    {"points": [[x1, x2, x3], ...], "closed": true}, first point not repeated.
    """
    @staticmethod
    def read(path) -> np.ndarray:
        """Return the (m, 3) point array stored in path."""
        text = read_text(path)
        try:
            payload = CurvePayload.model_validate(json.loads(text))
        except (json.JSONDecodeError, ValidationError) as e:
            raise IoError(f"Malformed curve file {path}: {e}", {"path": os.fspath(path)})
        if not payload.closed:
            raise IoError(f"Curve file {path} does not describe a closed curve", {"path": os.fspath(path)})
        return np.asarray(payload.points, dtype=float).reshape(-1, 3)

    @staticmethod
    def to_json(points: np.ndarray) -> str:
        pts = np.asarray(points, dtype=float)
        payload = CurvePayload(points=pts.tolist(), closed=True)
        return dumps_json(payload.to_json_dict())

    @staticmethod
    def write(path, points: np.ndarray) -> str:
        return atomic_write_text(path, CurveRepository.to_json(points))


# -----------------------
# Mesh Repository
# -----------------------
class MeshRepository:
    """Triangle meshes as Wavefront OBJ; vertex coordinates written with repr."""
    @staticmethod
    def to_obj(vertices: np.ndarray, faces: np.ndarray) -> str:
        lines = ["# minkcurve triangle mesh"]
        lines += [f"v {x!r} {y!r} {z!r}" for x, y, z in np.asarray(vertices, dtype=float).tolist()]
        # OBJ indices are 1-based
        lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in np.asarray(faces, dtype=int).tolist()]
        return "\n".join(lines) + "\n"

    @staticmethod
    def write_obj(path, vertices: np.ndarray, faces: np.ndarray) -> str:
        return atomic_write_text(path, MeshRepository.to_obj(vertices, faces))

    @staticmethod
    def read_obj(path) -> Tuple[np.ndarray, np.ndarray]:
        vertices, faces = [], []
        for line in read_text(path).splitlines():
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                vertices.append([float(x) for x in parts[1:4]])
            elif parts[0] == "f":
                faces.append([int(x.split("/")[0]) - 1 for x in parts[1:4]])
        return np.array(vertices, dtype=float).reshape(-1, 3), np.array(faces, dtype=int).reshape(-1, 3)


# -----------------------
# Series Repository
# -----------------------
class SeriesRepository:
    """Per-sample series (curvature, boundary profiles) as CSV."""
    @staticmethod
    def to_csv(frame: pd.DataFrame) -> str:
        return frame.to_csv(index=False, lineterminator="\n")

    @staticmethod
    def write_csv(path: Optional[str], frame: pd.DataFrame) -> str:
        return atomic_write_text(path, SeriesRepository.to_csv(frame))


# -----------------------
# Report Repository
# -----------------------
class ReportRepository:
    @staticmethod
    def write_json(path, payload: Dict[str, Any]) -> str:
        return atomic_write_text(path, dumps_json(payload))
