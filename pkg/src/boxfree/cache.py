"""Append-only JSONL result cache.

One JSON object per line, ``"schema": 1``.  Certificates are stored as
separate files (matrix text or a JSON list of points) next to the cache and
re-verified whenever a record is looked up.
"""
from __future__ import annotations

import fcntl
import json
import logging
import os
import re
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__

SCHEMA = 1
KINDS = ("alpha2d", "marks3d", "enumerate", "construct-verify")

log = logging.getLogger(__name__)


@dataclass
class CacheRecord:
    kind: str
    params: dict
    value: int | None = None
    class_count: int | None = None
    certificate_path: str | None = None
    runtime_ms: float = 0.0
    status: str = "exact"  # or "bounds-only"
    lower: int | None = None
    upper: int | None = None
    solver_version: str = __version__
    extra: dict = field(default_factory=dict)
    schema: int = SCHEMA

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown record kind {self.kind!r}")
        if self.status not in ("exact", "bounds-only"):
            raise ValueError(f"unknown status {self.status!r}")

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> "CacheRecord":
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unsupported schema {d.get('schema')!r}")
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in d.items() if k in known})


def _norm(params: dict) -> dict:
    return json.loads(json.dumps(params, sort_keys=True))


def read_records(path: str | os.PathLike) -> list[CacheRecord]:
    """All well-formed records in file order; bad lines are skipped with a warning."""
    p = Path(path)
    if not p.exists():
        return []
    out = []
    with p.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                out.append(CacheRecord.from_dict(json.loads(line)))
            except (ValueError, TypeError) as exc:
                log.warning("%s:%d: skipping corrupt cache line (%s)", p, lineno, exc)
    return out


def cache_append(path: str | os.PathLike, record: CacheRecord) -> None:
    """Append one record as a single locked write."""
    p = Path(path)
    if p.parent and not p.parent.exists():
        p.parent.mkdir(parents=True, exist_ok=True)
    data = (record.to_json() + "\n").encode()
    fd = os.open(p, os.O_WRONLY | os.O_APPEND | os.O_CREAT, 0o644)
    try:
        fcntl.flock(fd, fcntl.LOCK_EX)
        os.write(fd, data)
        os.fsync(fd)
    finally:
        fcntl.flock(fd, fcntl.LOCK_UN)
        os.close(fd)


def certificate_dir(cache_path: str | os.PathLike) -> Path:
    p = Path(cache_path)
    return p.with_name(p.stem + "_certs")


def certificate_name(kind: str, params: dict, suffix: str) -> str:
    key = "_".join(f"{k}{params[k]}" for k in sorted(params))
    return re.sub(r"[^A-Za-z0-9_.-]", "-", f"{kind}_{key}") + suffix


def store_certificate(cache_path, kind: str, params: dict, text: str, suffix: str) -> str:
    """Write a certificate file and return its path relative to the cache file."""
    d = certificate_dir(cache_path)
    d.mkdir(parents=True, exist_ok=True)
    f = d / certificate_name(kind, params, suffix)
    f.write_text(text, encoding="utf-8")
    return os.path.relpath(f, Path(cache_path).parent)


def _resolve(cache_path, rel: str) -> Path:
    rp = Path(rel)
    return rp if rp.is_absolute() else Path(cache_path).parent / rp


def verify_record(cache_path, rec: CacheRecord) -> bool:
    """Re-check the certificate a record points to (True if it has none)."""
    if rec.certificate_path is None:
        return True
    f = _resolve(cache_path, rec.certificate_path)
    try:
        text = f.read_text(encoding="utf-8")
    except OSError:
        return False
    try:
        if rec.kind in ("alpha2d", "construct-verify"):
            from .matrix import parse_matrix
            from .verify import has_zero_minor

            m = parse_matrix(text)
            k = int(rec.params["k"])
            return (rec.value is None or m.ones_count == rec.value) and not has_zero_minor(m, k)
        if rec.kind == "marks3d":
            from .lattice3d import PointSet3, hits_all_boxes

            pts = PointSet3(int(rec.params["N"]), [tuple(p) for p in json.loads(text)])
            return (rec.value is None or len(pts) == rec.value) and hits_all_boxes(pts)
    except (ValueError, KeyError, TypeError):
        return False
    return True


def cache_lookup(path, kind: str, params: dict, verify: bool = True) -> CacheRecord | None:
    """Most recent record with this kind and parameters whose certificate
    (if any) still verifies."""
    want = _norm(params)
    for rec in reversed(read_records(path)):
        if rec.kind != kind or _norm(rec.params) != want:
            continue
        if verify and not verify_record(path, rec):
            log.warning("cached certificate for %s %s failed re-verification; ignoring it", kind, want)
            continue
        return rec
    return None
