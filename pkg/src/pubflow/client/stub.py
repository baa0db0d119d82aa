"""Minimal binding stub for the pubflow HTTP service.

Deliberately self-contained: it speaks the documented wire protocol
(docs/wire.md) and declares only the handful of shapes it actually uses.
Nothing here imports server internals, so the client stays decoupled from
the service implementation.
"""

from __future__ import annotations

import base64
from dataclasses import dataclass
from pathlib import Path
from xml.etree import ElementTree

import httpx

INGEST_NS = "urn:pubflow:foxml-1"
OAI_DC_NS = "http://www.openarchives.org/OAI/2.0/oai_dc/"
DC_NS = "http://purl.org/dc/elements/1.1/"


class TransportError(Exception):
    """Server unreachable or the connection failed mid-request."""


class ServerError(Exception):
    def __init__(self, status: int, code: str, message: str, detail=None):
        super().__init__(f"{status} {code}: {message}")
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail


@dataclass(frozen=True)
class StubConfig:
    base_url: str
    username: str
    password: str
    timeout_seconds: float = 10.0

    def __post_init__(self):
        if "://" not in self.base_url:
            raise ValueError("baseUrl must be absolute")
        if self.timeout_seconds <= 0:
            raise ValueError("timeout must be positive")


class Client:
    def __init__(self, config: StubConfig):
        self._config = config
        self._http = httpx.Client(
            base_url=config.base_url.rstrip("/"), timeout=config.timeout_seconds
        )
        self._token: str | None = None

    def close(self) -> None:
        self._http.close()

    def _request(self, method: str, path: str, **kwargs) -> httpx.Response:
        if self._token is None:
            self._login()
        headers = kwargs.pop("headers", {})
        headers["Authorization"] = f"Bearer {self._token}"
        try:
            response = self._http.request(method, path, headers=headers, **kwargs)
        except httpx.HTTPError as exc:
            raise TransportError(str(exc)) from exc
        if response.status_code >= 400:
            try:
                body = response.json()
            except ValueError:
                body = {"code": "HTTP_ERROR", "message": response.text}
            raise ServerError(
                response.status_code,
                body.get("code", "HTTP_ERROR"),
                body.get("message", ""),
                body.get("detail"),
            )
        return response

    def _login(self) -> None:
        try:
            response = self._http.post(
                "/auth/login",
                json={"username": self._config.username, "password": self._config.password},
            )
        except httpx.HTTPError as exc:
            raise TransportError(str(exc)) from exc
        if response.status_code >= 400:
            body = response.json()
            raise ServerError(response.status_code, body["code"], body["message"])
        self._token = response.json()["token"]

    # -- the five paper procedures ------------------------------------------

    def ingest_new_object(self) -> str:
        root = ElementTree.Element(f"{{{INGEST_NS}}}object")
        root.set("label", "ESCIPUB")
        root.set("contentModel", "article")
        ElementTree.register_namespace("", INGEST_NS)
        xml = ElementTree.tostring(root, encoding="utf-8", xml_declaration=True)
        response = self._request(
            "POST",
            "/repo/objects",
            params={"format": "pubfoxml-1.0", "logMessage": "initial creation"},
            content=xml,
        )
        return response.json()["pid"]

    def change_dc(self, pid: str, fields: dict[str, list[str]]) -> bool:
        dc = ElementTree.Element(f"{{{OAI_DC_NS}}}dc")
        merged = dict(fields)
        merged.setdefault("identifier", [pid])
        for element, values in merged.items():
            for value in values:
                child = ElementTree.SubElement(dc, f"{{{DC_NS}}}{element}")
                child.text = value
        ElementTree.register_namespace("oai_dc", OAI_DC_NS)
        ElementTree.register_namespace("dc", DC_NS)
        xml = ElementTree.tostring(dc, encoding="utf-8", xml_declaration=True)
        try:
            self._request(
                "PUT",
                f"/repo/objects/{pid}/datastreams/DC",
                json={
                    "mode": "byValue",
                    "payload": base64.b64encode(xml).decode("ascii"),
                    "mimeType": "text/xml",
                    "logMessage": "update",
                },
            )
        except ServerError:
            return False
        return True

    def save_article(self, pid: str, staging_ref: dict, creator_name: str) -> int:
        body = {
            "mode": "byReference",
            "location": staging_ref["url"],
            "mimeType": staging_ref["mimeType"],
            "formatURI": creator_name,
            "dsLabel": "ARTICLE",
            "logMessage": "article upload",
        }
        try:
            self._request("GET", f"/repo/objects/{pid}/datastreams/ARTICLE")
            exists = True
        except ServerError as exc:
            if exc.status != 404:
                raise
            exists = False
        method = "PUT" if exists else "POST"
        response = self._request(
            method, f"/repo/objects/{pid}/datastreams/ARTICLE", json=body
        )
        return response.json()["versionNo"]

    def do_query(self, field: str, operator: str, value: str, max_results: int = 100) -> list:
        response = self._request(
            "POST",
            "/repo/search",
            json={"conditions": [[field, operator, value]], "maxResults": max_results},
        )
        return response.json()["rows"]

    def deploy_archive(self, path: str | Path) -> dict:
        data = Path(path).read_bytes()
        response = self._request(
            "POST",
            "/api/definitions",
            files={"archive": (Path(path).name, data, "application/zip")},
        )
        return response.json()

    # -- workflow helpers used by the CLI and the end-to-end scenario ---------

    def upload_staging(self, filename: str, data: bytes) -> dict:
        response = self._request("POST", "/staging", files={"file": (filename, data)})
        return response.json()

    def list_tasks(self) -> list:
        return self._request("GET", "/api/tasks").json()["tasks"]

    def latest_definitions(self) -> list:
        return self._request("GET", "/api/definitions/latest").json()["definitions"]

    def start_process(self, definition_id: str) -> dict:
        return self._request("POST", f"/api/processes/{definition_id}/start").json()

    def complete_task(
        self, task_id: str, transition: str | None = None, variables: dict | None = None
    ) -> dict:
        return self._request(
            "POST",
            f"/api/tasks/{task_id}/complete",
            json={"transition": transition, "variables": variables or {}},
        ).json()

    def administer(self, instance_id: str, action: str) -> dict:
        return self._request(
            "POST", f"/api/instances/{instance_id}/admin", json={"action": action}
        ).json()
