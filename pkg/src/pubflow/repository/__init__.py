"""PID-addressed digital object store with versioned datastreams."""

from pubflow.repository.dc import (
    DC_ELEMENTS,
    DublinCoreRecord,
    build_dc,
    empty_record,
    parse_dc,
)
from pubflow.repository.errors import (
    DatastreamExistsError,
    RepositoryError,
    RepoSchemaViolationError,
    RepoXmlSyntaxError,
    StateConflictError,
    UnknownDatastreamError,
    UnknownFieldError,
    UnknownPidError,
    UnknownVersionError,
    UnresolvableLocationError,
    UnsupportedFormatError,
    UnsupportedOperatorError,
)
from pubflow.repository.ingestxml import (
    INGEST_FORMAT,
    IngestDatastream,
    IngestObject,
    build_ingest_xml,
    parse_ingest_xml,
)
from pubflow.repository.mime import DEFAULT_MIME, EXTENSION_TABLE, detect_mime
from pubflow.repository.model import (
    CONTROL_INLINE,
    CONTROL_REFERENCED,
    DC_DS_ID,
    DS_STATE_ACTIVE,
    DS_STATE_DELETED,
    DS_STATE_INACTIVE,
    MODE_BY_REFERENCE,
    MODE_BY_VALUE,
    Datastream,
    DatastreamProps,
    DatastreamVersion,
    DigitalObject,
    FieldSearchResult,
    ObjectFields,
    parse_pid,
    render_pid,
)
from pubflow.repository.search import OPERATORS, SEARCH_FIELDS, matches, validate_conditions
from pubflow.repository.store import Fetcher, Repository, default_fetcher

__all__ = [
    "CONTROL_INLINE",
    "CONTROL_REFERENCED",
    "DC_DS_ID",
    "DC_ELEMENTS",
    "DEFAULT_MIME",
    "DS_STATE_ACTIVE",
    "DS_STATE_DELETED",
    "DS_STATE_INACTIVE",
    "Datastream",
    "DatastreamExistsError",
    "DatastreamProps",
    "DatastreamVersion",
    "DigitalObject",
    "DublinCoreRecord",
    "EXTENSION_TABLE",
    "Fetcher",
    "FieldSearchResult",
    "INGEST_FORMAT",
    "IngestDatastream",
    "IngestObject",
    "MODE_BY_REFERENCE",
    "MODE_BY_VALUE",
    "OPERATORS",
    "ObjectFields",
    "RepoSchemaViolationError",
    "RepoXmlSyntaxError",
    "Repository",
    "RepositoryError",
    "SEARCH_FIELDS",
    "StateConflictError",
    "UnknownDatastreamError",
    "UnknownFieldError",
    "UnknownPidError",
    "UnknownVersionError",
    "UnresolvableLocationError",
    "UnsupportedFormatError",
    "UnsupportedOperatorError",
    "build_dc",
    "build_ingest_xml",
    "default_fetcher",
    "detect_mime",
    "empty_record",
    "matches",
    "parse_dc",
    "parse_ingest_xml",
    "parse_pid",
    "render_pid",
    "validate_conditions",
]
