"""Machine-readable service description.

Deterministic: the same build always emits byte-identical JSON, so a
minimal client can be written (or regenerated) against it.
"""

from __future__ import annotations

import json

OPERATIONS = (
    ("login", "POST", "/auth/login", "LoginRequest", "Session"),
    ("listTasks", "GET", "/api/tasks", None, "TaskList"),
    ("latestDefinitions", "GET", "/api/definitions/latest", None, "DefinitionList"),
    ("deploy", "POST", "/api/definitions", "ArchiveUpload", "Deployment"),
    ("startProcess", "POST", "/api/processes/{definitionId}/start", None, "StartResult"),
    ("completeTask", "POST", "/api/tasks/{id}/complete", "CompleteRequest", "Instance"),
    ("setVariable", "PUT", "/api/instances/{id}/variables/{name}", "TypedValue", "Empty"),
    ("administer", "POST", "/api/instances/{id}/admin", "AdminRequest", "Instance"),
    ("instanceGraph", "GET", "/api/instances/{id}/graph", None, "GraphState"),
    ("uploadStaging", "POST", "/staging", "FileUpload", "StagingRef"),
    ("getStaging", "GET", "/staging/{name}", None, "Bytes"),
    ("ingest", "POST", "/repo/objects", "ObjectXml", "IngestResult"),
    ("getObject", "GET", "/repo/objects/{pid}", None, "ObjectProfile"),
    ("addDatastream", "POST", "/repo/objects/{pid}/datastreams/{dsId}", "DatastreamRequest", "VersionResult"),
    ("modifyDatastream", "PUT", "/repo/objects/{pid}/datastreams/{dsId}", "DatastreamRequest", "VersionResult"),
    ("getDatastream", "GET", "/repo/objects/{pid}/datastreams/{dsId}", None, "Bytes"),
    ("findObjects", "POST", "/repo/search", "SearchRequest", "SearchResult"),
    ("description", "GET", "/api/description", None, "ServiceDescription"),
)

TYPES = {
    "LoginRequest": {"username": "string", "password": "string"},
    "Session": {"token": "string", "actorId": "string", "roles": ["string"], "expiresAt": "number"},
    "TaskList": {"tasks": ["Task"]},
    "Task": {
        "taskInstanceId": "string",
        "instanceId": "string",
        "nodeName": "string",
        "taskName": "string",
        "actorId": "string",
        "state": "string",
        "createdAt": "string",
        "transitions": ["string"],
        "formFields": [{"name": "string", "label": "string", "type": "string"}],
        "variables": {"*": "TypedValue"},
    },
    "DefinitionList": {"definitions": [{"definitionId": "string", "name": "string", "version": "number"}]},
    "ArchiveUpload": {"archive": "multipart file (zip)"},
    "Deployment": {"definitionId": "string", "name": "string", "version": "number"},
    "StartResult": {"instanceId": "string", "task": "Task"},
    "CompleteRequest": {"transition": "string?", "variables": {"*": "TypedValue"}},
    "TypedValue": {"t": "string|integer|float|boolean|bytes", "v": "value"},
    "AdminRequest": {"action": "advance|stop"},
    "Instance": {"instanceId": "string", "state": "string", "variables": {"*": "TypedValue"}},
    "GraphState": {
        "nodes": [{"name": "string", "kind": "string", "x": "number", "y": "number", "w": "number", "h": "number"}],
        "transitions": [{"from": "string", "to": "string", "name": "string?"}],
        "currentNodes": ["string"],
    },
    "FileUpload": {"file": "multipart file"},
    "StagingRef": {"name": "string", "url": "string", "size": "number", "mimeType": "string"},
    "ObjectXml": "XML body, query params: format, logMessage",
    "IngestResult": {"pid": "string"},
    "ObjectProfile": {
        "pid": "string",
        "label": "string",
        "contentModel": "string",
        "state": "string",
        "cDate": "string",
        "mDate": "string",
        "datastreams": [{"dsId": "string", "state": "string", "versions": "number", "mimeType": "string"}],
    },
    "DatastreamRequest": {
        "mode": "byValue|byReference",
        "payload": "base64?",
        "location": "string?",
        "mimeType": "string?",
        "dsLabel": "string?",
        "formatURI": "string?",
        "altIds": ["string"],
        "versionable": "boolean?",
        "dsState": "A|I|D?",
        "force": "boolean?",
        "logMessage": "string?",
    },
    "VersionResult": {"versionNo": "number"},
    "SearchRequest": {"conditions": [["field", "operator", "value"]], "maxResults": "number"},
    "SearchResult": {"rows": ["ObjectFields"], "complete": "boolean"},
    "Bytes": "raw response body with Content-Type",
    "Empty": {},
    "ServiceDescription": {"operations": ["Operation"], "types": {"*": "schema"}},
    "Error": {"code": "string", "message": "string", "detail": "any?"},
}


def service_description() -> dict:
    return {
        "service": "pubflow",
        "operations": [
            {
                "name": name,
                "method": method,
                "path": path,
                "requestSchemaRef": request_ref,
                "responseSchemaRef": response_ref,
            }
            for name, method, path, request_ref, response_ref in OPERATIONS
        ],
        "types": TYPES,
    }


def service_description_bytes() -> bytes:
    return json.dumps(service_description(), sort_keys=True, indent=2).encode("utf-8")
