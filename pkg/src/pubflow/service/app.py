"""HTTP facade over the engine and the repository.

Every endpoint declares the roles that may call it; the wire contract
(paths, bodies, the error envelope, the full role matrix) is documented in
docs/wire.md.  This layer holds no business rules of its own: it translates
HTTP to engine/repository calls and their errors to {code, message, detail}.
"""

from __future__ import annotations

import base64
from contextlib import asynccontextmanager
from pathlib import Path

from fastapi import Depends, FastAPI, Request, Response, UploadFile
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from pubflow.engine import Engine, EngineError
from pubflow.engine.records import InstanceState, TaskInstanceState
from pubflow.procdef import ProcdefError, parse_archive
from pubflow.repository import (
    DatastreamProps,
    Repository,
    RepositoryError,
    default_fetcher,
)
from pubflow.values import decode_value, encode_value

from pubflow.service.auth import BadCredentialsError, Session, SessionStore
from pubflow.service.config import ServiceConfig
from pubflow.service.description import service_description_bytes
from pubflow.service.staging import PayloadTooLargeError, StagingArea

AUTHENTICATED = ("author", "qa", "admin")

_STATUS_BY_CODE = {
    "BAD_CREDENTIALS": 401,
    "UNAUTHENTICATED": 401,
    "FORBIDDEN": 403,
    "FORBIDDEN_ACTOR": 403,
    "UNKNOWN_DEFINITION": 404,
    "UNKNOWN_INSTANCE": 404,
    "UNKNOWN_REFERENT": 404,
    "UNKNOWN_VARIABLE": 404,
    "UNKNOWN_PID": 404,
    "UNKNOWN_DATASTREAM": 404,
    "UNKNOWN_VERSION": 404,
    "NOT_FOUND": 404,
    "TASK_NOT_OPEN": 409,
    "INSTANCE_NOT_RUNNING": 409,
    "STATE_CONFLICT": 409,
    "DATASTREAM_EXISTS": 409,
    "PAYLOAD_TOO_LARGE": 413,
}


class ServiceError(Exception):
    def __init__(self, code: str, message: str, detail=None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.detail = detail


def _error_response(code: str, message: str, detail=None) -> JSONResponse:
    body = {"code": code, "message": message}
    if detail is not None:
        body["detail"] = detail
    return JSONResponse(status_code=_STATUS_BY_CODE.get(code, 400), content=body)


def _error_detail(exc: Exception):
    violations = getattr(exc, "violations", None)
    if violations is None and getattr(exc, "report", None) is not None:
        violations = exc.report.violations
    if violations is not None:
        return [{"code": v.code, "subject": v.subject, "message": v.message} for v in violations]
    return None


def _task_json(engine: Engine, task: TaskInstanceState) -> dict:
    instance = engine.get_instance(task.instance_id)
    definition = engine.get_deployment(instance.definition_id).definition
    node = definition.node(task.node_name)
    fields = node.task.form_fields if node.task else ()
    return {
        "taskInstanceId": task.task_instance_id,
        "instanceId": task.instance_id,
        "nodeName": task.node_name,
        "taskName": task.task_name,
        "actorId": task.actor_id,
        "state": task.state,
        "createdAt": task.created_at,
        "transitions": [t.name for t in definition.outgoing(task.node_name)],
        "formFields": [{"name": f.name, "label": f.label, "type": f.kind} for f in fields],
        "variables": {k: encode_value(v) for k, v in sorted(instance.variables.items())},
    }


def _instance_json(instance: InstanceState) -> dict:
    return {
        "instanceId": instance.instance_id,
        "definitionId": instance.definition_id,
        "initiator": instance.initiator,
        "state": instance.state,
        "createdAt": instance.created_at,
        "endedAt": instance.ended_at,
        "currentNodes": sorted(instance.live_leaf_nodes()),
        "variables": {k: encode_value(v) for k, v in sorted(instance.variables.items())},
    }


def _graph_json(graph) -> dict:
    return {
        "nodes": [
            {"name": n.name, "kind": n.kind, "x": n.x, "y": n.y, "w": n.width, "h": n.height}
            for n in graph.nodes
        ],
        "transitions": [
            {"from": t.from_node, "to": t.to_node, "name": t.name} for t in graph.transitions
        ],
        "currentNodes": list(graph.current_nodes),
    }


def create_app(config: ServiceConfig, ui_dir: str | None = None) -> FastAPI:
    data_dir = Path(config.data_dir)
    staging = StagingArea(data_dir / "staging", config.upload_limit, config.staging_ttl)

    def fetcher(location: str):
        if staging.is_local_url(location):
            return staging.fetch(location)
        return default_fetcher(location)

    engine = Engine(data_dir)
    repository = Repository(data_dir, namespace=config.pid_namespace, fetcher=fetcher)
    sessions = SessionStore(config.users, config.session_ttl)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        engine.close()
        repository.close()

    app = FastAPI(
        title="pubflow", docs_url=None, redoc_url=None, openapi_url=None, lifespan=lifespan
    )
    app.state.engine = engine
    app.state.repository = repository
    app.state.sessions = sessions
    app.state.staging = staging

    @app.exception_handler(EngineError)
    @app.exception_handler(RepositoryError)
    @app.exception_handler(ProcdefError)
    async def _domain_error(request: Request, exc: Exception):
        return _error_response(exc.code, str(exc), _error_detail(exc))

    @app.exception_handler(ServiceError)
    async def _service_error(request: Request, exc: ServiceError):
        return _error_response(exc.code, exc.message, exc.detail)

    @app.exception_handler(BadCredentialsError)
    async def _bad_credentials(request: Request, exc: BadCredentialsError):
        return _error_response(exc.code, exc.message)

    @app.exception_handler(PayloadTooLargeError)
    async def _too_large(request: Request, exc: PayloadTooLargeError):
        return _error_response(exc.code, exc.message)

    def session_of(request: Request) -> Session:
        header = request.headers.get("authorization", "")
        if header.lower().startswith("bearer "):
            session = sessions.lookup(header[7:])
            if session is not None:
                return session
        raise ServiceError("UNAUTHENTICATED", "missing, invalid or expired session token")

    def require(*roles: str):
        def check(session: Session = Depends(session_of)) -> Session:
            if not set(session.roles) & set(roles):
                raise ServiceError(
                    "FORBIDDEN", f"requires one of roles {sorted(roles)}"
                )
            return session

        return check

    # -- auth and description ------------------------------------------------

    @app.post("/auth/login")
    async def login(body: dict):
        session = sessions.authenticate(body.get("username", ""), body.get("password", ""))
        return {
            "token": session.token,
            "actorId": session.actor_id,
            "roles": list(session.roles),
            "expiresAt": session.expires_at,
        }

    @app.get("/api/description")
    async def describe():
        return Response(service_description_bytes(), media_type="application/json")

    # -- workflow ---------------------------------------------------------------

    @app.get("/api/tasks")
    async def list_tasks(session: Session = Depends(require(*AUTHENTICATED))):
        tasks = engine.find_task_instances(session.actor_id)
        for role in session.roles:
            tasks.extend(engine.find_task_instances(f"role:{role}"))
        return {"tasks": [_task_json(engine, t) for t in tasks]}

    @app.get("/api/definitions/latest")
    async def latest_definitions(session: Session = Depends(require(*AUTHENTICATED))):
        return {
            "definitions": [
                {"definitionId": d.definition_id, "name": d.name, "version": d.version}
                for d in engine.latest_definitions()
            ]
        }

    @app.post("/api/definitions")
    async def deploy(archive: UploadFile, session: Session = Depends(require("admin"))):
        data = await archive.read()
        definition, layout, attachments = parse_archive(data)
        image = attachments.get("processimage.png")
        record = engine.deploy(definition, layout, image)
        return {
            "definitionId": record.definition_id,
            "name": record.name,
            "version": record.version,
        }

    @app.post("/api/processes/{definition_id}/start")
    async def start_process(
        definition_id: str, session: Session = Depends(require("author"))
    ):
        instance, task = engine.start_instance(definition_id, session.actor_id)
        return {"instanceId": instance.instance_id, "task": _task_json(engine, task)}

    @app.post("/api/tasks/{task_id}/complete")
    async def complete_task(
        task_id: str, body: dict, session: Session = Depends(require(*AUTHENTICATED))
    ):
        variables = {
            name: decode_value(tagged) for name, tagged in (body.get("variables") or {}).items()
        }
        instance = engine.complete_task(
            task_id,
            session.actor_id,
            transition_name=body.get("transition"),
            variables=variables,
            caller_roles=session.roles,
        )
        return _instance_json(instance)

    @app.put("/api/instances/{instance_id}/variables/{name}")
    async def set_variable(
        instance_id: str,
        name: str,
        body: dict,
        session: Session = Depends(require(*AUTHENTICATED)),
    ):
        engine.set_variable(instance_id, name, decode_value(body))
        return {}

    @app.post("/api/instances/{instance_id}/admin")
    async def administer(
        instance_id: str, body: dict, session: Session = Depends(require("admin"))
    ):
        instance = engine.administer_instance(
            instance_id, body.get("action", ""), session.actor_id, session.roles
        )
        return _instance_json(instance)

    @app.get("/api/instances/{instance_id}/graph")
    async def instance_graph(
        instance_id: str, session: Session = Depends(require(*AUTHENTICATED))
    ):
        return _graph_json(engine.render_graph_state(instance_id=instance_id))

    # -- staging -----------------------------------------------------------------

    @app.post("/staging")
    async def upload_staging(
        file: UploadFile, session: Session = Depends(require(*AUTHENTICATED))
    ):
        data = await file.read()
        ref = staging.save(file.filename or "upload.bin", data, session.actor_id)
        return {
            "name": ref.name,
            "url": ref.url,
            "size": ref.size,
            "mimeType": ref.mime_type,
        }

    @app.get("/staging/{name}")
    async def get_staging(name: str):
        found = staging.get(name)
        if found is None:
            raise ServiceError("NOT_FOUND", f"no staged file {name!r}")
        content, mime = found
        return Response(content, media_type=mime)

    # -- repository ----------------------------------------------------------------

    @app.post("/repo/objects")
    async def ingest(
        request: Request,
        format: str = "pubfoxml-1.0",
        logMessage: str = "",
        session: Session = Depends(require("author", "admin")),
    ):
        pid = repository.ingest(await request.body(), format, logMessage)
        return {"pid": pid}

    @app.get("/repo/objects/{pid}")
    async def get_object(pid: str, session: Session = Depends(require(*AUTHENTICATED))):
        obj = repository.get_object(pid)
        return {
            "pid": obj.pid,
            "label": obj.label,
            "contentModel": obj.content_model,
            "state": obj.state,
            "cDate": obj.created_at,
            "mDate": obj.modified_at,
            "datastreams": [
                {
                    "dsId": ds.ds_id,
                    "state": ds.current_state,
                    "versions": len(ds.versions),
                    "mimeType": ds.latest.mime_type,
                }
                for ds in sorted(obj.datastreams.values(), key=lambda d: d.ds_id)
            ],
        }

    def _ds_props(body: dict) -> DatastreamProps:
        return DatastreamProps(
            ds_label=body.get("dsLabel"),
            mime_type=body.get("mimeType"),
            format_uri=body.get("formatURI"),
            alt_ids=tuple(body["altIds"]) if body.get("altIds") is not None else None,
            versionable=body.get("versionable", True),
        )

    def _ds_payload(body: dict) -> bytes | None:
        if body.get("payload") is None:
            return None
        return base64.b64decode(body["payload"])

    @app.post("/repo/objects/{pid}/datastreams/{ds_id}")
    async def add_datastream(
        pid: str,
        ds_id: str,
        body: dict,
        session: Session = Depends(require("author", "admin")),
    ):
        try:
            version_no = repository.add_datastream(
                pid,
                ds_id,
                body.get("mode", "byValue"),
                _ds_props(body),
                payload=_ds_payload(body),
                location=body.get("location"),
                log_message=body.get("logMessage", ""),
            )
        except Exception:
            staging.discard_pending()
            raise
        staging.commit_consumed()
        return {"versionNo": version_no}

    @app.put("/repo/objects/{pid}/datastreams/{ds_id}")
    async def modify_datastream(
        pid: str,
        ds_id: str,
        body: dict,
        session: Session = Depends(require("author", "admin")),
    ):
        try:
            version_no = repository.modify_datastream(
                pid,
                ds_id,
                body.get("mode", "byValue"),
                _ds_props(body),
                payload=_ds_payload(body),
                location=body.get("location"),
                ds_state=body.get("dsState"),
                log_message=body.get("logMessage", ""),
                force=body.get("force", False),
            )
        except Exception:
            staging.discard_pending()
            raise
        staging.commit_consumed()
        return {"versionNo": version_no}

    @app.get("/repo/objects/{pid}/datastreams/{ds_id}")
    async def get_datastream(
        pid: str,
        ds_id: str,
        version: int | None = None,
        session: Session = Depends(require(*AUTHENTICATED)),
    ):
        ds_version = repository.get_datastream(pid, ds_id, version)
        return Response(
            ds_version.content,
            media_type=ds_version.mime_type,
            headers={"X-Version-No": str(ds_version.version_no)},
        )

    @app.post("/repo/search")
    async def search(body: dict, session: Session = Depends(require(*AUTHENTICATED))):
        conditions = [tuple(c) for c in body.get("conditions", [])]
        result = repository.find_objects(conditions, body.get("maxResults", 100))
        rows = []
        for row in result.rows:
            entry = {
                "pid": row.pid,
                "label": row.label,
                "cDate": row.c_date,
                "mDate": row.m_date,
            }
            for element in row.dc.__dataclass_fields__:
                entry[element] = list(getattr(row.dc, element))
            rows.append(entry)
        return {"rows": rows, "complete": result.complete}

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
