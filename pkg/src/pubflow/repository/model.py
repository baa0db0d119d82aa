"""Repository domain types: PIDs, objects, datastreams, search results."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from pubflow.repository.dc import DublinCoreRecord
from pubflow.repository.errors import RepoSchemaViolationError

PID_NAMESPACE_RE = re.compile(r"^[a-z][a-z0-9]*$")

OBJECT_ACTIVE = "active"
OBJECT_INACTIVE = "inactive"
OBJECT_DELETED = "deleted"

DS_STATE_ACTIVE = "A"
DS_STATE_INACTIVE = "I"
DS_STATE_DELETED = "D"

MODE_BY_VALUE = "byValue"
MODE_BY_REFERENCE = "byReference"

CONTROL_INLINE = "inline"
CONTROL_REFERENCED = "referenced"

DC_DS_ID = "DC"


def render_pid(namespace: str, serial: int) -> str:
    return f"{namespace}:{serial}"


def parse_pid(pid: str) -> tuple[str, int]:
    namespace, _, serial = pid.partition(":")
    if not PID_NAMESPACE_RE.match(namespace) or not serial.isdigit() or int(serial) < 1:
        raise RepoSchemaViolationError(f"malformed pid {pid!r}")
    return namespace, int(serial)


@dataclass(frozen=True)
class DatastreamVersion:
    version_no: int
    label: str | None
    mime_type: str
    format_uri: str | None
    control_mode: str
    content: bytes
    location: str | None
    alt_ids: tuple[str, ...]
    log_message: str
    created_at: str


@dataclass
class Datastream:
    ds_id: str
    current_state: str = DS_STATE_ACTIVE
    versions: list[DatastreamVersion] = field(default_factory=list)

    @property
    def latest(self) -> DatastreamVersion:
        return self.versions[-1]


@dataclass
class DigitalObject:
    pid: str
    label: str
    content_model: str
    state: str = OBJECT_ACTIVE
    created_at: str = ""
    modified_at: str = ""
    datastreams: dict[str, Datastream] = field(default_factory=dict)


@dataclass(frozen=True)
class DatastreamProps:
    """Optional version attributes; None means inherit from the prior version."""

    ds_label: str | None = None
    mime_type: str | None = None
    format_uri: str | None = None
    alt_ids: tuple[str, ...] | None = None
    versionable: bool = True


@dataclass(frozen=True)
class ObjectFields:
    pid: str
    label: str
    c_date: str
    m_date: str
    dc: DublinCoreRecord


@dataclass(frozen=True)
class FieldSearchResult:
    rows: tuple[ObjectFields, ...]
    complete: bool
