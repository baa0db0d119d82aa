"""Parser for the ingest object format (urn:pubflow:foxml-1).

    <object xmlns="urn:pubflow:foxml-1" label="..." contentModel="...">
      <datastream id="..." mimeType="...">base64 payload</datastream>*
    </object>

The server mints the PID, so a pid attribute on the root is rejected.  The
DC datastream is created automatically and may not be supplied here.
"""

from __future__ import annotations

import base64
import binascii
from dataclasses import dataclass
from xml.etree import ElementTree

from pubflow.repository.errors import RepoSchemaViolationError, RepoXmlSyntaxError
from pubflow.repository.model import DC_DS_ID

INGEST_FORMAT = "pubfoxml-1.0"
INGEST_NS = "urn:pubflow:foxml-1"


@dataclass(frozen=True)
class IngestDatastream:
    ds_id: str
    mime_type: str
    content: bytes


@dataclass(frozen=True)
class IngestObject:
    label: str
    content_model: str
    datastreams: tuple[IngestDatastream, ...]


def parse_ingest_xml(data: bytes) -> IngestObject:
    try:
        root = ElementTree.fromstring(data)
    except ElementTree.ParseError as exc:
        raise RepoXmlSyntaxError(f"bad object XML: {exc}") from exc
    if root.tag != f"{{{INGEST_NS}}}object":
        raise RepoSchemaViolationError(f"unexpected root element {root.tag!r}")
    if "pid" in root.attrib:
        raise RepoSchemaViolationError("pid attribute is forbidden on ingest")
    label = root.get("label")
    content_model = root.get("contentModel")
    if label is None or content_model is None:
        raise RepoSchemaViolationError("object requires label and contentModel attributes")

    streams = []
    seen: set[str] = set()
    for child in root:
        if child.tag != f"{{{INGEST_NS}}}datastream":
            raise RepoSchemaViolationError(f"unexpected element {child.tag!r}")
        ds_id = child.get("id")
        mime_type = child.get("mimeType")
        if not ds_id or not mime_type:
            raise RepoSchemaViolationError("datastream requires id and mimeType attributes")
        if ds_id == DC_DS_ID:
            raise RepoSchemaViolationError("the DC datastream is created automatically")
        if ds_id in seen:
            raise RepoSchemaViolationError(f"duplicate datastream id {ds_id!r}")
        seen.add(ds_id)
        try:
            content = base64.b64decode(child.text or "", validate=True)
        except binascii.Error as exc:
            raise RepoSchemaViolationError(f"datastream {ds_id!r}: invalid base64") from exc
        streams.append(IngestDatastream(ds_id, mime_type, content))
    return IngestObject(label=label, content_model=content_model, datastreams=tuple(streams))


def build_ingest_xml(
    label: str, content_model: str, datastreams: list[IngestDatastream] | None = None
) -> bytes:
    root = ElementTree.Element(f"{{{INGEST_NS}}}object")
    root.set("label", label)
    root.set("contentModel", content_model)
    for stream in datastreams or []:
        child = ElementTree.SubElement(root, f"{{{INGEST_NS}}}datastream")
        child.set("id", stream.ds_id)
        child.set("mimeType", stream.mime_type)
        child.text = base64.b64encode(stream.content).decode("ascii")
    ElementTree.register_namespace("", INGEST_NS)
    return ElementTree.tostring(root, encoding="utf-8", xml_declaration=True)
