import hashlib
import json
import logging
import os
from typing import Any

import numpy as np
import psutil

logger = logging.getLogger(__name__)


def available_cores() -> int:
    """Number of usable CPU cores (logical cores if physical ones are unknown)."""
    cores = psutil.cpu_count(logical=False) or psutil.cpu_count() or 1
    return int(cores)


def get_process_memory() -> float:
    process = psutil.Process(os.getpid())
    return process.memory_percent()


def content_hash(payload: Any) -> str:
    """
    SHA-256 of a JSON-serializable payload in canonical form (sorted keys, no
    whitespace). Used to fingerprint inputs in reports.
    """
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def find_safe_path(path: str) -> str:
    """Method to find a safe path that does not exist yet.
    Args:
        path (str): Desired path.
    Returns:
        str: Non existing path.
    """
    stem, extension = os.path.splitext(path)
    safe_path = path
    c = 0
    while os.path.exists(safe_path):
        c += 1
        safe_path = f"{stem}_v{c}{extension}"
    return safe_path


def mixed_radix_points(base: int, arity: int) -> np.ndarray:
    """
    All points of {0..base-1}^arity as an array of shape (base**arity, arity),
    in lexicographic order (first coordinate most significant).
    """
    if arity == 0:
        return np.zeros((1, 0), dtype=np.int64)
    codes = np.arange(base**arity, dtype=np.int64)
    return decode_points(codes, base, arity)


def decode_points(codes: np.ndarray, base: int, arity: int) -> np.ndarray:
    points = np.empty((len(codes), arity), dtype=np.int64)
    rest = np.asarray(codes, dtype=np.int64).copy()
    for k in range(arity - 1, -1, -1):
        points[:, k] = rest % base
        rest //= base
    return points


def encode_points(points: np.ndarray, base: int) -> np.ndarray:
    points = np.asarray(points, dtype=np.int64)
    if points.ndim == 1:
        points = points[None, :]
    codes = np.zeros(len(points), dtype=np.int64)
    for k in range(points.shape[1]):
        codes = codes * base + points[:, k]
    return codes
