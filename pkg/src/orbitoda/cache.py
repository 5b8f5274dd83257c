"""Content-addressed on-disk cache for computed tables (JSON).

A table is stored under ``<dir>/<sha256>.json`` where the hash covers the
canonical JSON of the request and the package version.  Files carry the
version stamp and the request; a stamp mismatch, a request mismatch or an
unreadable file counts as a miss (with a warning), so a damaged cache can
only cost time, never correctness.
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Callable

from . import __version__

ENV_VAR = "ORBITODA_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "orbitoda"


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def cache_key(request: dict, version: str = __version__) -> str:
    return hashlib.sha256(canonical({"version": version, "request": request}).encode()).hexdigest()


def _warn(msg: str) -> None:
    print(f"orbitoda: warning: {msg}", file=sys.stderr)


class TableCache:
    """Store/load JSON tables; ``directory=None`` disables persistence."""

    def __init__(self, directory: Path | str | None, version: str = __version__):
        self.directory = Path(directory) if directory is not None else None
        self.version = version

    def path(self, request: dict) -> Path | None:
        if self.directory is None:
            return None
        return self.directory / f"{cache_key(request, self.version)}.json"

    def load(self, request: dict):
        """The cached table, or None on a miss."""
        p = self.path(request)
        if p is None or not p.exists():
            return None
        try:
            blob = json.loads(p.read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            _warn(f"ignoring unreadable cache file {p.name}: {exc}")
            return None
        if not isinstance(blob, dict) or blob.get("version") != self.version:
            _warn(f"ignoring cache file {p.name} with a different version stamp")
            return None
        if blob.get("request") != json.loads(canonical(request)) or "table" not in blob:
            _warn(f"ignoring corrupted cache file {p.name}")
            return None
        return blob["table"]

    def store(self, request: dict, table) -> Path | None:
        p = self.path(request)
        if p is None:
            return None
        blob = {"version": self.version, "request": json.loads(canonical(request)), "table": table}
        try:
            p.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=p.parent, suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(canonical(blob))
            os.replace(tmp, p)
        except OSError as exc:
            _warn(f"could not write cache file {p}: {exc}")
            return None
        return p

    def get_or_compute(self, request: dict, compute: Callable[[], object]):
        """(table, hit) -- recompute on a miss and store the fresh table."""
        table = self.load(request)
        if table is not None:
            return table, True
        table = compute()
        self.store(request, table)
        return table, False
