"""Reading and writing process archives (zip containers)."""

from __future__ import annotations

import io
import zipfile

from pubflow.procdef.errors import MalformedZipError, MissingDefinitionError
from pubflow.procdef.model import LayoutMetadata, ProcessArchive, ProcessDefinition
from pubflow.procdef.xml import (
    parse_definition_xml,
    parse_layout_xml,
    serialize_definition,
    serialize_layout,
)


def parse_archive(
    archive_bytes: bytes,
) -> tuple[ProcessDefinition, LayoutMetadata | None, dict[str, bytes]]:
    """Unpack a process archive.

    Returns the definition, the layout when ``layout.xml`` is present, and
    all remaining entries (including ``processimage.png``) as attachments.
    """
    try:
        zf = zipfile.ZipFile(io.BytesIO(archive_bytes))
        names = zf.namelist()
    except zipfile.BadZipFile as exc:
        raise MalformedZipError(str(exc)) from exc

    if ProcessArchive.DEFINITION_ENTRY not in names:
        raise MissingDefinitionError()

    definition = parse_definition_xml(zf.read(ProcessArchive.DEFINITION_ENTRY))
    layout = None
    if ProcessArchive.LAYOUT_ENTRY in names:
        layout = parse_layout_xml(zf.read(ProcessArchive.LAYOUT_ENTRY))

    attachments = {
        name: zf.read(name)
        for name in names
        if name not in (ProcessArchive.DEFINITION_ENTRY, ProcessArchive.LAYOUT_ENTRY)
        and not name.endswith("/")
    }
    return definition, layout, attachments


def build_archive(
    definition: ProcessDefinition,
    layout: LayoutMetadata | None = None,
    attachments: dict[str, bytes] | None = None,
) -> bytes:
    """Pack a definition (plus optional layout and attachments) into a zip."""
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w", zipfile.ZIP_DEFLATED) as zf:
        zf.writestr(ProcessArchive.DEFINITION_ENTRY, serialize_definition(definition))
        if layout is not None:
            zf.writestr(ProcessArchive.LAYOUT_ENTRY, serialize_layout(layout))
        for name, data in (attachments or {}).items():
            zf.writestr(name, data)
    return buf.getvalue()
