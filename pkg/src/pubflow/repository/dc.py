"""Dublin Core records and their XML serialization.

A record holds the fifteen-element subset we actually use; every element is
repeatable, so each field is a tuple of strings.  The XML form is the usual
oai_dc container with one child element per value.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from xml.etree import ElementTree

from pubflow.repository.errors import RepoSchemaViolationError, RepoXmlSyntaxError

OAI_DC_NS = "http://www.openarchives.org/OAI/2.0/oai_dc/"
DC_NS = "http://purl.org/dc/elements/1.1/"

DC_ELEMENTS = (
    "title",
    "creator",
    "subject",
    "description",
    "publisher",
    "contributor",
    "date",
    "type",
    "language",
    "coverage",
    "rights",
    "identifier",
)


@dataclass(frozen=True)
class DublinCoreRecord:
    title: tuple[str, ...] = ()
    creator: tuple[str, ...] = ()
    subject: tuple[str, ...] = ()
    description: tuple[str, ...] = ()
    publisher: tuple[str, ...] = ()
    contributor: tuple[str, ...] = ()
    date: tuple[str, ...] = ()
    type: tuple[str, ...] = ()
    language: tuple[str, ...] = ()
    coverage: tuple[str, ...] = ()
    rights: tuple[str, ...] = ()
    identifier: tuple[str, ...] = ()

    def values_for(self, element: str) -> tuple[str, ...]:
        if element not in DC_ELEMENTS:
            raise KeyError(element)
        return getattr(self, element)

    def with_values(self, element: str, values: tuple[str, ...]) -> "DublinCoreRecord":
        if element not in DC_ELEMENTS:
            raise KeyError(element)
        return replace(self, **{element: tuple(values)})


def empty_record(pid: str) -> DublinCoreRecord:
    return DublinCoreRecord(identifier=(pid,))


def build_dc(record: DublinCoreRecord) -> bytes:
    root = ElementTree.Element(f"{{{OAI_DC_NS}}}dc")
    for element in DC_ELEMENTS:
        for value in getattr(record, element):
            child = ElementTree.SubElement(root, f"{{{DC_NS}}}{element}")
            child.text = value
    ElementTree.register_namespace("oai_dc", OAI_DC_NS)
    ElementTree.register_namespace("dc", DC_NS)
    return ElementTree.tostring(root, encoding="utf-8", xml_declaration=True)


def parse_dc(data: bytes) -> DublinCoreRecord:
    try:
        root = ElementTree.fromstring(data)
    except ElementTree.ParseError as exc:
        raise RepoXmlSyntaxError(f"bad DC XML: {exc}") from exc
    if root.tag != f"{{{OAI_DC_NS}}}dc":
        raise RepoSchemaViolationError(f"unexpected DC root element {root.tag!r}")
    collected: dict[str, list[str]] = {element: [] for element in DC_ELEMENTS}
    for child in root:
        if not child.tag.startswith(f"{{{DC_NS}}}"):
            raise RepoSchemaViolationError(f"unexpected element {child.tag!r} in DC record")
        local = child.tag[len(DC_NS) + 2 :]
        if local not in collected:
            raise RepoSchemaViolationError(f"unknown DC element {local!r}")
        collected[local].append(child.text or "")
    return DublinCoreRecord(**{k: tuple(v) for k, v in collected.items()})
