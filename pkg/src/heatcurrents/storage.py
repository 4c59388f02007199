"""Ensemble persistence: JSON manifest plus raw little-endian payload.

An ensemble is stored as two files sharing a stem: `<path>.json` holds the
generating parameters, the RNG pin, and a checksum; `<path>.f64le` holds
the terminal fields as raw float64 little-endian bytes, complex entries as
re,im pairs, index order [sample][grid row-major][matrix row][matrix
col][re|im].  Reads verify version, size, and checksum, each with its own
error class, and reproduce the written array bit for bit.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from .rng import RNG_ALGORITHM

__all__ = [
    "FORMAT_VERSION",
    "LAYOUT",
    "EnsembleManifest",
    "StorageError",
    "ChecksumMismatchError",
    "TruncatedPayloadError",
    "FormatVersionError",
    "write_ensemble",
    "read_ensemble",
    "payload_checksum",
]

FORMAT_VERSION = 1
LAYOUT = "sample-major,row-major,complex-interleaved,f64le"


class StorageError(Exception):
    """Base class for ensemble persistence failures."""


class ChecksumMismatchError(StorageError):
    pass


class TruncatedPayloadError(StorageError):
    pass


class FormatVersionError(StorageError):
    pass


@dataclass(frozen=True)
class EnsembleManifest:
    """Parameters echoing the generating configuration, plus integrity data."""

    d: int
    n: int
    k: int
    m_max: int
    p: int
    n_steps: int
    t_end: float
    n_samples: int
    seed: int
    format_version: int = FORMAT_VERSION
    layout: str = LAYOUT
    rng_algorithm: str = RNG_ALGORITHM
    lattice: list | None = None
    checksum: str | None = None

    def expected_payload_bytes(self) -> int:
        return self.n_samples * self.p**self.d * self.n**2 * 2 * 8

    def to_json_bytes(self) -> bytes:
        doc = asdict(self)
        return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode("utf-8")

    @classmethod
    def from_json_bytes(cls, raw: bytes) -> "EnsembleManifest":
        doc = json.loads(raw.decode("utf-8"))
        known = {f for f in cls.__dataclass_fields__}
        extra = set(doc) - known
        if extra:
            raise StorageError(f"unknown manifest fields: {sorted(extra)}")
        return cls(**doc)


def payload_checksum(payload: bytes) -> str:
    """64-bit BLAKE2b digest of the raw payload bytes, hex-encoded."""
    return hashlib.blake2b(payload, digest_size=8).hexdigest()


def _payload_bytes(mats: np.ndarray) -> bytes:
    return np.ascontiguousarray(mats, dtype="<c16").tobytes(order="C")


def write_ensemble(path, manifest: EnsembleManifest, mats: np.ndarray) -> EnsembleManifest:
    """Persist (manifest, fields); returns the manifest with checksum filled.

    `mats` must have shape (n_samples, *grid, n, n) matching the manifest.
    """
    mats = np.asarray(mats)
    expected_shape = (manifest.n_samples,) + (manifest.p,) * manifest.d + (
        manifest.n,
        manifest.n,
    )
    if mats.shape != expected_shape:
        raise StorageError(
            f"field array shape {mats.shape} does not match manifest "
            f"(expected {expected_shape})"
        )
    payload = _payload_bytes(mats)
    final = replace(manifest, checksum=payload_checksum(payload))
    stem = Path(path)
    stem.parent.mkdir(parents=True, exist_ok=True)
    try:
        Path(str(stem) + ".f64le").write_bytes(payload)
        Path(str(stem) + ".json").write_bytes(final.to_json_bytes())
    except OSError as exc:
        raise StorageError(f"failed writing ensemble at {stem}: {exc}") from exc
    return final


def read_ensemble(path) -> tuple:
    """Load (manifest, fields array) with version/size/checksum verification."""
    stem = Path(path)
    json_path = Path(str(stem) + ".json")
    payload_path = Path(str(stem) + ".f64le")
    try:
        manifest = EnsembleManifest.from_json_bytes(json_path.read_bytes())
    except OSError as exc:
        raise StorageError(f"cannot read manifest {json_path}: {exc}") from exc
    if manifest.format_version != FORMAT_VERSION:
        raise FormatVersionError(
            f"manifest format_version {manifest.format_version} unsupported "
            f"(reader handles {FORMAT_VERSION})"
        )
    try:
        payload = payload_path.read_bytes()
    except OSError as exc:
        raise StorageError(f"cannot read payload {payload_path}: {exc}") from exc
    expected = manifest.expected_payload_bytes()
    if len(payload) != expected:
        raise TruncatedPayloadError(
            f"payload {payload_path} has {len(payload)} bytes, manifest "
            f"implies {expected}"
        )
    digest = payload_checksum(payload)
    if digest != manifest.checksum:
        raise ChecksumMismatchError(
            f"payload checksum {digest} does not match manifest "
            f"{manifest.checksum}"
        )
    shape = (manifest.n_samples,) + (manifest.p,) * manifest.d + (
        manifest.n,
        manifest.n,
    )
    mats = np.frombuffer(payload, dtype="<c16").reshape(shape).copy()
    return manifest, mats
