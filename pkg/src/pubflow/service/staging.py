"""Upload staging area: files addressable by URL until consumed or expired.

A by-reference repository call resolves /staging/ URLs through `fetch`; the
caller confirms the repository commit with `commit_consumed`, which deletes
the files, or abandons the fetch with `discard_pending`.
"""

from __future__ import annotations

import json
import secrets
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from pubflow.repository import detect_mime
from pubflow.repository.errors import UnresolvableLocationError

STAGING_PREFIX = "/staging/"


class PayloadTooLargeError(Exception):
    code = "PAYLOAD_TOO_LARGE"

    def __init__(self, size: int, limit: int):
        super().__init__(f"upload of {size} bytes exceeds the {limit} byte limit")
        self.message = str(self)


@dataclass(frozen=True)
class StagingRef:
    name: str
    url: str
    size: int
    mime_type: str
    uploaded_by: str


class StagingArea:
    def __init__(
        self,
        directory: str | Path,
        upload_limit: int,
        ttl: int,
        clock: Callable[[], float] = time.time,
    ) -> None:
        self._dir = Path(directory)
        self._dir.mkdir(parents=True, exist_ok=True)
        self._limit = upload_limit
        self._ttl = ttl
        self._clock = clock
        self._pending: list[str] = []

    def save(self, filename: str, data: bytes, actor_id: str) -> StagingRef:
        if len(data) > self._limit:
            raise PayloadTooLargeError(len(data), self._limit)
        suffix = Path(filename).suffix if "/" not in filename else ""
        name = secrets.token_hex(8) + suffix
        (self._dir / name).write_bytes(data)
        meta = {
            "original": filename,
            "mimeType": detect_mime(filename),
            "uploadedBy": actor_id,
            "uploadedAt": self._clock(),
        }
        (self._dir / (name + ".meta")).write_text(json.dumps(meta))
        return StagingRef(
            name=name,
            url=STAGING_PREFIX + name,
            size=len(data),
            mime_type=meta["mimeType"],
            uploaded_by=actor_id,
        )

    def _meta(self, name: str) -> dict | None:
        path = self._dir / (name + ".meta")
        if not path.exists() or not (self._dir / name).exists():
            return None
        return json.loads(path.read_text())

    def get(self, name: str) -> tuple[bytes, str] | None:
        """Serve a staged file, or None when unknown/consumed/expired."""
        if "/" in name or name.startswith("."):
            return None
        meta = self._meta(name)
        if meta is None:
            return None
        if self._clock() - meta["uploadedAt"] > self._ttl:
            self._delete(name)
            return None
        return (self._dir / name).read_bytes(), meta["mimeType"]

    def is_local_url(self, location: str) -> bool:
        return STAGING_PREFIX in location

    def fetch(self, location: str) -> tuple[bytes, str | None]:
        """Repository fetcher for staging URLs; marks the file for consumption."""
        name = location.split(STAGING_PREFIX, 1)[1]
        found = self.get(name)
        if found is None:
            raise UnresolvableLocationError(location, "no such staged file")
        self._pending.append(name)
        return found

    def commit_consumed(self) -> None:
        for name in self._pending:
            self._delete(name)
        self._pending.clear()

    def discard_pending(self) -> None:
        self._pending.clear()

    def purge_expired(self) -> None:
        now = self._clock()
        for meta_path in self._dir.glob("*.meta"):
            meta = json.loads(meta_path.read_text())
            if now - meta["uploadedAt"] > self._ttl:
                self._delete(meta_path.name[: -len(".meta")])

    def is_empty(self) -> bool:
        return not any(self._dir.iterdir())

    def _delete(self, name: str) -> None:
        for path in (self._dir / name, self._dir / (name + ".meta")):
            if path.exists():
                path.unlink()
