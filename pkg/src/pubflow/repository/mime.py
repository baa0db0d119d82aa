"""Extension-based MIME detection with a small fixed table."""

from __future__ import annotations

from urllib.parse import urlparse

DEFAULT_MIME = "application/octet-stream"

EXTENSION_TABLE = {
    "pdf": "application/pdf",
    "xml": "text/xml",
    "txt": "text/plain",
    "html": "text/html",
    "csv": "text/csv",
    "json": "application/json",
    "zip": "application/zip",
    "png": "image/png",
    "jpg": "image/jpeg",
    "jpeg": "image/jpeg",
    "gif": "image/gif",
    "tif": "image/tiff",
    "tiff": "image/tiff",
}


def detect_mime(location_or_filename: str, reported_type: str | None = None) -> str:
    """Map a filename or URL to a MIME type.

    A content type reported by the transport wins over the extension table;
    unknown extensions fall back to application/octet-stream.
    """
    if reported_type:
        return reported_type.split(";")[0].strip()
    path = urlparse(location_or_filename).path or location_or_filename
    if "." not in path.rsplit("/", 1)[-1]:
        return DEFAULT_MIME
    extension = path.rsplit(".", 1)[-1].lower()
    return EXTENSION_TABLE.get(extension, DEFAULT_MIME)
