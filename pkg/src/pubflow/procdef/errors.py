"""Errors raised while reading process archives and definition XML."""

from __future__ import annotations


class ProcdefError(Exception):
    code = "PROCDEF_ERROR"


class MalformedZipError(ProcdefError):
    code = "MALFORMED_ZIP"


class MissingDefinitionError(ProcdefError):
    code = "MISSING_DEFINITION"

    def __init__(self) -> None:
        super().__init__("archive contains no processdefinition.xml")


class XmlSyntaxError(ProcdefError):
    code = "XML_SYNTAX"

    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class SchemaViolationError(ProcdefError):
    code = "SCHEMA_VIOLATION"

    def __init__(self, path: str, message: str) -> None:
        super().__init__(f"{path}: {message}")
        self.path = path
        self.detail = message
