"""The digital object repository.

Same persistence recipe as the engine: every state change is one journal
event carrying all nondeterminism (timestamps, fetched bytes), applied by a
deterministic handler, so replay reconstructs identical state.  Datastream
content lives in a content-addressed blob directory next to the journal;
events and snapshots reference blobs by SHA-256.
"""

from __future__ import annotations

import hashlib
import threading
import urllib.error
import urllib.request
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

from pubflow.journal import Journal, Record

from pubflow.repository.dc import build_dc, empty_record, parse_dc
from pubflow.repository.errors import (
    DatastreamExistsError,
    RepoSchemaViolationError,
    StateConflictError,
    UnknownDatastreamError,
    UnknownPidError,
    UnknownVersionError,
    UnresolvableLocationError,
    UnsupportedFormatError,
)
from pubflow.repository.ingestxml import INGEST_FORMAT, parse_ingest_xml
from pubflow.repository.mime import DEFAULT_MIME, detect_mime
from pubflow.repository.model import (
    CONTROL_INLINE,
    CONTROL_REFERENCED,
    DC_DS_ID,
    DS_STATE_DELETED,
    MODE_BY_REFERENCE,
    MODE_BY_VALUE,
    PID_NAMESPACE_RE,
    Datastream,
    DatastreamProps,
    DatastreamVersion,
    DigitalObject,
    FieldSearchResult,
    ObjectFields,
    parse_pid,
    render_pid,
)
from pubflow.repository.search import Condition, matches, validate_conditions

Fetcher = Callable[[str], tuple[bytes, "str | None"]]


def _utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


def default_fetcher(location: str) -> tuple[bytes, str | None]:
    """Resolve file paths, file:// URLs and http(s) URLs."""
    if "://" not in location:
        return Path(location).read_bytes(), None
    with urllib.request.urlopen(location) as response:
        return response.read(), response.headers.get("Content-Type")


class Repository:
    def __init__(
        self,
        data_dir: str | Path,
        namespace: str = "escipub",
        fetcher: Fetcher | None = None,
        clock: Callable[[], str] = _utc_now,
        snapshot_every: int = 100,
    ) -> None:
        if not PID_NAMESPACE_RE.match(namespace):
            raise RepoSchemaViolationError(f"bad pid namespace {namespace!r}")
        self._namespace = namespace
        self._fetcher = fetcher or default_fetcher
        self._clock = clock
        self._snapshot_every = snapshot_every
        self._lock = threading.RLock()
        self._objects: dict[str, DigitalObject] = {}
        self._serial = 0
        base = Path(data_dir) / "repository"
        self._blob_dir = base / "blobs"
        self._blob_dir.mkdir(parents=True, exist_ok=True)
        self._journal = Journal(base)
        state, records = self._journal.recover()
        if state is not None:
            self._load_state(state)
        for record in records:
            self._apply(record)

    def close(self) -> None:
        self._journal.close()

    @property
    def namespace(self) -> str:
        return self._namespace

    # -- blob storage -------------------------------------------------------

    def _put_blob(self, content: bytes) -> str:
        digest = hashlib.sha256(content).hexdigest()
        path = self._blob_dir / digest
        if not path.exists():
            tmp = path.with_suffix(".tmp")
            tmp.write_bytes(content)
            tmp.rename(path)
        return digest

    def _get_blob(self, digest: str) -> bytes:
        return (self._blob_dir / digest).read_bytes()

    # -- persistence --------------------------------------------------------

    def _version_dict(self, version: DatastreamVersion) -> dict:
        return {
            "version_no": version.version_no,
            "label": version.label,
            "mime_type": version.mime_type,
            "format_uri": version.format_uri,
            "control_mode": version.control_mode,
            "blob": self._put_blob(version.content),
            "location": version.location,
            "alt_ids": list(version.alt_ids),
            "log_message": version.log_message,
            "created_at": version.created_at,
        }

    def _version_from_dict(self, data: dict) -> DatastreamVersion:
        return DatastreamVersion(
            version_no=data["version_no"],
            label=data["label"],
            mime_type=data["mime_type"],
            format_uri=data["format_uri"],
            control_mode=data["control_mode"],
            content=self._get_blob(data["blob"]),
            location=data["location"],
            alt_ids=tuple(data["alt_ids"]),
            log_message=data["log_message"],
            created_at=data["created_at"],
        )

    def state_dict(self) -> dict:
        with self._lock:
            objects = {}
            for pid, obj in sorted(self._objects.items()):
                objects[pid] = {
                    "label": obj.label,
                    "content_model": obj.content_model,
                    "state": obj.state,
                    "created_at": obj.created_at,
                    "modified_at": obj.modified_at,
                    "datastreams": {
                        ds_id: {
                            "current_state": ds.current_state,
                            "versions": [self._version_dict(v) for v in ds.versions],
                        }
                        for ds_id, ds in sorted(obj.datastreams.items())
                    },
                }
            return {"serial": self._serial, "objects": objects}

    def _load_state(self, state: dict) -> None:
        self._serial = state["serial"]
        self._objects = {}
        for pid, data in state["objects"].items():
            obj = DigitalObject(
                pid=pid,
                label=data["label"],
                content_model=data["content_model"],
                state=data["state"],
                created_at=data["created_at"],
                modified_at=data["modified_at"],
            )
            for ds_id, ds_data in data["datastreams"].items():
                obj.datastreams[ds_id] = Datastream(
                    ds_id=ds_id,
                    current_state=ds_data["current_state"],
                    versions=[self._version_from_dict(v) for v in ds_data["versions"]],
                )
            self._objects[pid] = obj

    def snapshot(self) -> None:
        with self._lock:
            self._journal.write_snapshot(self.state_dict())

    def _commit(self, kind: str, payload: dict):
        record = self._journal.append(kind, payload, self._clock())
        result = self._apply(record)
        if self._snapshot_every and record.seq % self._snapshot_every == 0:
            self._journal.write_snapshot(self.state_dict())
        return result

    def _apply(self, record: Record):
        handler = getattr(self, f"_apply_{record.kind}", None)
        if handler is None:
            return None
        return handler(record)

    # -- pid minting ----------------------------------------------------------

    def generate_pid(self) -> str:
        with self._lock:
            return self._commit("mint_pid", {})

    def _apply_mint_pid(self, record: Record) -> str:
        self._serial += 1
        return render_pid(self._namespace, self._serial)

    # -- ingest ----------------------------------------------------------------

    def ingest(self, object_xml: bytes, format: str, log_message: str = "") -> str:
        with self._lock:
            if format != INGEST_FORMAT:
                raise UnsupportedFormatError(f"unsupported ingest format {format!r}")
            parsed = parse_ingest_xml(object_xml)
            payload = {
                "label": parsed.label,
                "content_model": parsed.content_model,
                "log_message": log_message,
                "datastreams": [
                    {
                        "ds_id": s.ds_id,
                        "mime_type": s.mime_type,
                        "blob": self._put_blob(s.content),
                    }
                    for s in parsed.datastreams
                ],
            }
            return self._commit("ingest", payload)

    def _apply_ingest(self, record: Record) -> str:
        self._serial += 1
        pid = render_pid(self._namespace, self._serial)
        obj = DigitalObject(
            pid=pid,
            label=record.payload["label"],
            content_model=record.payload["content_model"],
            created_at=record.ts,
            modified_at=record.ts,
        )
        dc_bytes = build_dc(empty_record(pid))
        self._put_blob(dc_bytes)
        obj.datastreams[DC_DS_ID] = Datastream(
            ds_id=DC_DS_ID,
            versions=[
                DatastreamVersion(
                    version_no=1,
                    label="Dublin Core Record",
                    mime_type="text/xml",
                    format_uri=None,
                    control_mode=CONTROL_INLINE,
                    content=dc_bytes,
                    location=None,
                    alt_ids=(),
                    log_message="auto-created at ingest",
                    created_at=record.ts,
                )
            ],
        )
        for stream in record.payload["datastreams"]:
            obj.datastreams[stream["ds_id"]] = Datastream(
                ds_id=stream["ds_id"],
                versions=[
                    DatastreamVersion(
                        version_no=1,
                        label=None,
                        mime_type=stream["mime_type"],
                        format_uri=None,
                        control_mode=CONTROL_INLINE,
                        content=self._get_blob(stream["blob"]),
                        location=None,
                        alt_ids=(),
                        log_message=record.payload["log_message"],
                        created_at=record.ts,
                    )
                ],
            )
        self._objects[pid] = obj
        return pid

    # -- datastream CRUD --------------------------------------------------------

    def _object(self, pid: str) -> DigitalObject:
        obj = self._objects.get(pid)
        if obj is None:
            raise UnknownPidError(pid)
        return obj

    def _resolve_content(
        self, mode: str, payload: bytes | None, location: str | None
    ) -> tuple[bytes, str | None, str | None]:
        """Returns (content, stored location, transport-reported mime)."""
        if mode == MODE_BY_VALUE:
            if payload is None:
                raise RepoSchemaViolationError("byValue requires a payload")
            return payload, None, None
        if mode == MODE_BY_REFERENCE:
            if not location:
                raise RepoSchemaViolationError("byReference requires a location")
            try:
                content, reported = self._fetcher(location)
            except UnresolvableLocationError:
                raise
            except Exception as exc:
                raise UnresolvableLocationError(location, str(exc)) from exc
            return content, location, reported
        raise RepoSchemaViolationError(f"unknown mode {mode!r}")

    def add_datastream(
        self,
        pid: str,
        ds_id: str,
        mode: str,
        props: DatastreamProps = DatastreamProps(),
        payload: bytes | None = None,
        location: str | None = None,
        log_message: str = "",
    ) -> int:
        with self._lock:
            obj = self._object(pid)
            if ds_id in obj.datastreams:
                raise DatastreamExistsError(pid, ds_id)
            content, stored_location, reported = self._resolve_content(mode, payload, location)
            mime = props.mime_type
            if mime is None:
                mime = detect_mime(location, reported) if location else DEFAULT_MIME
            event = {
                "pid": pid,
                "ds_id": ds_id,
                "control_mode": CONTROL_REFERENCED if stored_location else CONTROL_INLINE,
                "blob": self._put_blob(content),
                "location": stored_location,
                "label": props.ds_label,
                "mime_type": mime,
                "format_uri": props.format_uri,
                "alt_ids": list(props.alt_ids or ()),
                "log_message": log_message,
            }
            return self._commit("add_datastream", event)

    def _apply_add_datastream(self, record: Record) -> int:
        p = record.payload
        obj = self._objects[p["pid"]]
        version = DatastreamVersion(
            version_no=1,
            label=p["label"],
            mime_type=p["mime_type"],
            format_uri=p["format_uri"],
            control_mode=p["control_mode"],
            content=self._get_blob(p["blob"]),
            location=p["location"],
            alt_ids=tuple(p["alt_ids"]),
            log_message=p["log_message"],
            created_at=record.ts,
        )
        obj.datastreams[p["ds_id"]] = Datastream(ds_id=p["ds_id"], versions=[version])
        obj.modified_at = record.ts
        return 1

    def modify_datastream(
        self,
        pid: str,
        ds_id: str,
        mode: str,
        props: DatastreamProps = DatastreamProps(),
        payload: bytes | None = None,
        location: str | None = None,
        ds_state: str | None = None,
        log_message: str = "",
        force: bool = False,
    ) -> int:
        with self._lock:
            obj = self._object(pid)
            ds = obj.datastreams.get(ds_id)
            if ds is None:
                raise UnknownDatastreamError(pid, ds_id)
            if ds.current_state == DS_STATE_DELETED and not force:
                raise StateConflictError(pid, ds_id)
            content, stored_location, reported = self._resolve_content(mode, payload, location)
            previous = ds.latest
            # null props inherit from the previous version; a by-reference
            # modify re-detects the type instead of inheriting it
            mime = props.mime_type
            if mime is None:
                if stored_location:
                    mime = detect_mime(stored_location, reported)
                else:
                    mime = previous.mime_type
            event = {
                "pid": pid,
                "ds_id": ds_id,
                "versionable": props.versionable,
                "control_mode": CONTROL_REFERENCED if stored_location else CONTROL_INLINE,
                "blob": self._put_blob(content),
                "location": stored_location,
                "label": props.ds_label if props.ds_label is not None else previous.label,
                "mime_type": mime,
                "format_uri": (
                    props.format_uri if props.format_uri is not None else previous.format_uri
                ),
                "alt_ids": list(props.alt_ids if props.alt_ids is not None else previous.alt_ids),
                "ds_state": ds_state,
                "log_message": log_message,
            }
            return self._commit("modify_datastream", event)

    def _apply_modify_datastream(self, record: Record) -> int:
        p = record.payload
        obj = self._objects[p["pid"]]
        ds = obj.datastreams[p["ds_id"]]
        version_no = ds.latest.version_no + 1 if p["versionable"] else ds.latest.version_no
        version = DatastreamVersion(
            version_no=version_no,
            label=p["label"],
            mime_type=p["mime_type"],
            format_uri=p["format_uri"],
            control_mode=p["control_mode"],
            content=self._get_blob(p["blob"]),
            location=p["location"],
            alt_ids=tuple(p["alt_ids"]),
            log_message=p["log_message"],
            created_at=record.ts,
        )
        if p["versionable"]:
            ds.versions.append(version)
        else:
            ds.versions[-1] = version
        if p["ds_state"] is not None:
            ds.current_state = p["ds_state"]
        obj.modified_at = record.ts
        return version_no

    # -- reads -------------------------------------------------------------------

    def ds_exists(self, pid: str, ds_id: str) -> bool:
        with self._lock:
            obj = self._object(pid)
            ds = obj.datastreams.get(ds_id)
            return ds is not None and ds.current_state != DS_STATE_DELETED

    def get_object(self, pid: str) -> DigitalObject:
        with self._lock:
            return self._object(pid)

    def get_datastream(
        self, pid: str, ds_id: str, version_no: int | None = None
    ) -> DatastreamVersion:
        with self._lock:
            obj = self._object(pid)
            ds = obj.datastreams.get(ds_id)
            if ds is None:
                raise UnknownDatastreamError(pid, ds_id)
            if version_no is None:
                return ds.latest
            for version in ds.versions:
                if version.version_no == version_no:
                    return version
            raise UnknownVersionError(pid, ds_id, version_no)

    def object_fields(self, pid: str) -> ObjectFields:
        with self._lock:
            obj = self._object(pid)
            dc = parse_dc(obj.datastreams[DC_DS_ID].latest.content)
            return ObjectFields(
                pid=obj.pid,
                label=obj.label,
                c_date=obj.created_at,
                m_date=obj.modified_at,
                dc=dc,
            )

    def find_objects(
        self, conditions: list[Condition], max_results: int = 100
    ) -> FieldSearchResult:
        with self._lock:
            validate_conditions(list(conditions))
            rows = []
            truncated = False
            for pid in sorted(self._objects, key=lambda p: parse_pid(p)[1]):
                row = self.object_fields(pid)
                if matches(row, list(conditions)):
                    if len(rows) >= max_results:
                        truncated = True
                        break
                    rows.append(row)
            return FieldSearchResult(rows=tuple(rows), complete=not truncated)
