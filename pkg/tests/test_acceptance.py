"""Acceptance gate: one test per shipping criterion.

Each test prints a single PASS line on success (visible with -v / -s); a
failure reads as the criterion number plus the broken assertion.
"""

import random
import re

import pytest
from fastapi.testclient import TestClient

from pubflow.client import Client, ServerError, StubConfig
from pubflow.client.cli import main as cli_main
from pubflow.engine import Engine
from pubflow.procdef import build_archive, check_soundness
from pubflow.repository import (
    DC_ELEMENTS,
    DublinCoreRecord,
    Repository,
    build_dc,
    parse_dc,
)
from pubflow.service import ServiceConfig, create_app

from builders import publication_v1, publication_v2, unsound_with_orphan
from graphgen import random_definition
from test_repository import naive_matches
from test_service import MATRIX, ROLE_OF_USER, USERS, login
from token_game import oracle_sound

FORMAT = "pubfoxml-1.0"


def test_criterion_1_version_pinning(tmp_path):
    """Running instances keep their deployment; new instances get the new one."""
    engine = Engine(tmp_path)
    v1 = engine.deploy(publication_v1())
    _, submit_v1 = engine.start_instance(v1.definition_id, "alice")

    v2 = engine.deploy(publication_v2())
    assert (v2.name, v2.version) == ("publication", 2)

    def drive_to_end(first_task):
        """Complete every task, always approving; returns the node path."""
        path = [first_task.node_name]
        engine.complete_task(first_task.task_instance_id, "alice", "to_qa")
        instance_id = first_task.instance_id
        while engine.get_instance(instance_id).state == "running":
            open_tasks = [
                t
                for t in engine.find_task_instances("alice")
                + engine.find_task_instances("role:qa")
                if t.instance_id == instance_id
            ]
            task = open_tasks[0]
            path.append(task.node_name)
            transition = "approve" if task.node_name == "review" else None
            engine.complete_task(
                task.task_instance_id, "alice", transition, caller_roles=("qa",)
            )
        return path

    path_v1 = drive_to_end(submit_v1)
    _, submit_v2 = engine.start_instance(v2.definition_id, "alice")
    path_v2 = drive_to_end(submit_v2)

    assert path_v1 == ["submit", "review"]  # exactly v1's task nodes
    assert path_v2 == ["submit", "review", "second_review"]  # v2 adds a QA step
    engine.close()
    print("PASS criterion 1: version pinning holds with exact node paths")


def test_criterion_2_soundness_oracle_equivalence():
    """Structural soundness equals token-game soundness on 500 random graphs."""
    rng = random.Random(0xACCE97)
    agreements = 0
    sound_count = 0
    for _ in range(500):
        definition = random_definition(rng, max_nodes=8)
        assert len(definition.nodes) <= 8
        structural = check_soundness(definition).sound
        simulated = oracle_sound(definition)
        assert structural == simulated, definition
        agreements += 1
        sound_count += structural
    assert agreements == 500
    assert 0 < sound_count < 500  # both verdicts are exercised
    print(f"PASS criterion 2: 500/500 oracle agreement ({sound_count} sound)")


def test_criterion_3_pid_format_and_monotonicity(tmp_path):
    repo = Repository(tmp_path, namespace="escipub")
    xml = b'<object xmlns="urn:pubflow:foxml-1" label="ESCIPUB" contentModel="article"/>'
    minted = [repo.ingest(xml, FORMAT) for _ in range(3)]
    assert minted == ["escipub:1", "escipub:2", "escipub:3"]
    # kill mid-sequence: reopen without close(); journal already fsynced
    survivor = Repository(tmp_path, namespace="escipub")
    minted += [survivor.ingest(xml, FORMAT) for _ in range(3)]
    assert all(re.fullmatch(r"escipub:[1-9][0-9]*", pid) for pid in minted)
    serials = [int(pid.split(":")[1]) for pid in minted]
    assert serials == sorted(serials) and len(set(serials)) == len(serials)
    survivor.close()
    print("PASS criterion 3: PID format and monotonicity across restart")


def test_criterion_4_dc_round_trip_through_store(tmp_path):
    rng = random.Random(0xDC2026)
    alphabet = "abcXYZ 0123 äöü€漢字.,;-_()*"
    repo = Repository(tmp_path, namespace="escipub")
    xml = b'<object xmlns="urn:pubflow:foxml-1" label="x" contentModel="article"/>'
    pid = repo.ingest(xml, FORMAT)

    def random_values():
        return tuple(
            "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 20)))
            for _ in range(rng.randrange(0, 4))
        )

    multi_valued_seen = 0
    empty_field_seen = 0
    for _ in range(200):
        record = DublinCoreRecord(**{element: random_values() for element in DC_ELEMENTS})
        multi_valued_seen += any(len(getattr(record, e)) > 1 for e in ("creator", "subject"))
        empty_field_seen += any(not getattr(record, e) for e in DC_ELEMENTS)
        repo.modify_datastream(pid, "DC", "byValue", payload=build_dc(record))
        fetched = repo.get_datastream(pid, "DC").content
        assert parse_dc(fetched) == record
    assert multi_valued_seen > 20 and empty_field_seen > 20
    repo.close()
    print("PASS criterion 4: 200 DC records round-trip bit-equal through the store")


def test_criterion_5_datastream_versioning(tmp_path):
    repo = Repository(tmp_path, namespace="escipub")
    xml = b'<object xmlns="urn:pubflow:foxml-1" label="x" contentModel="article"/>'
    pid = repo.ingest(xml, FORMAT)
    version_one = repo.get_datastream(pid, "DC", 1).content
    n = 10
    for i in range(n):
        repo.modify_datastream(pid, "DC", "byValue", payload=f"<v{i}/>".encode())
    versions = repo.get_object(pid).datastreams["DC"].versions
    assert [v.version_no for v in versions] == list(range(1, n + 2))
    assert repo.get_datastream(pid, "DC", 1).content == version_one
    assert repo.get_datastream(pid, "DC").version_no == n + 1
    repo.close()
    print(f"PASS criterion 5: {n} modifies yield {n + 1} versions, v1 untouched")


def test_criterion_6_search_oracle(tmp_path):
    rng = random.Random(0x6EA2C4)
    words = ["workflow", "network", "archive", "alice", "bob", "Work", "data", ""]
    dates = ["2025-12-31", "2026-01-01", "2026-02-15", "2026-07-04"]
    operators = ["eq", "has", "gt", "ge", "lt", "le"]
    xml = b'<object xmlns="urn:pubflow:foxml-1" label="ESCIPUB" contentModel="article"/>'
    operators_exercised = set()
    for trial in range(100):
        repo = Repository(tmp_path / f"store-{trial}", namespace="escipub")
        count = rng.randrange(0, 201) if trial < 10 else rng.randrange(0, 40)
        creators = []
        for _ in range(count):
            pid = repo.ingest(xml, FORMAT)
            creator = rng.choice(["alice", "bob"])
            creators.append(creator)
            record = DublinCoreRecord(
                title=tuple(rng.sample(words, rng.randrange(0, 3))),
                creator=(creator,),
                date=(rng.choice(dates),),
                identifier=(pid,),
            )
            repo.modify_datastream(pid, "DC", "byValue", payload=build_dc(record))
        rows = [repo.object_fields(f"escipub:{n}") for n in range(1, count + 1)]
        for op in rng.sample(operators, 3):
            operators_exercised.add(op)
            field = rng.choice(["title", "creator", "date", "pid", "label"])
            operand = rng.choice(words + ["work*", "*ork*", "2026-01-01", "escipub:1"])
            expected = [r for r in rows if naive_matches(r, [(field, op, operand)])]
            got = repo.find_objects([(field, op, operand)], 100)
            assert list(got.rows) == expected[:100], (field, op, operand)
            assert got.complete == (len(expected) <= 100)
        # creator eq: exactly the current user's objects
        mine = repo.find_objects([("creator", "eq", "alice")], 250)
        assert [r.pid for r in mine.rows] == [
            f"escipub:{n + 1}" for n, c in enumerate(creators) if c == "alice"
        ]
        repo.close()
    assert operators_exercised == set(operators)
    print("PASS criterion 6: find_objects equals the naive scan on 100 stores")


def test_criterion_7_end_to_end_publication(server, tmp_path, capsys):
    """The paper's publication walkthrough, driven by the CLI and stub only."""
    archive = tmp_path / "publication.zip"
    archive.write_bytes(build_archive(publication_v1()))
    pdf = tmp_path / "article.pdf"
    pdf.write_bytes(b"%PDF-1.4 acceptance")

    def run(args, username):
        code = cli_main(
            ["--server", server, "--user", username, "--password", f"pw-{username}"] + args
        )
        out = capsys.readouterr().out
        return code, out

    code, _ = run(["deploy", str(archive)], "ada")
    assert code == 0

    alice = Client(StubConfig(server, "alice", "pw-alice"))
    quinn = Client(StubConfig(server, "quinn", "pw-quinn"))

    definition_id = alice.latest_definitions()[0]["definitionId"]
    started = alice.start_process(definition_id)
    submit_task = started["task"]
    assert submit_task["taskName"] == "submit_article"

    code, _ = run(["ingest"], "alice")
    assert code == 0
    pid = "escipub:1"
    code, _ = run(["dc", "set", pid, "title=Acceptance Article", "creator=alice"], "alice")
    assert code == 0

    code, _ = run(["article", "put", pid, str(pdf)], "alice")
    assert code == 0  # first save: add_datastream branch, version 1

    alice.complete_task(
        submit_task["taskInstanceId"],
        "to_qa",
        {"title": {"t": "string", "v": "Acceptance Article"},
         "pid": {"t": "string", "v": pid}},
    )

    qa_tasks = quinn.list_tasks()
    assert [t["taskName"] for t in qa_tasks] == ["review_article"]
    assert qa_tasks[0]["variables"]["pid"] == {"t": "string", "v": pid}
    quinn.complete_task(qa_tasks[0]["taskInstanceId"], "rework")

    # swimlane stickiness: the rework task lands with the same author
    rework = alice.list_tasks()
    assert [t["taskName"] for t in rework] == ["rework_article"]
    assert rework[0]["actorId"] == "alice"

    code, _ = run(["article", "put", pid, str(pdf)], "alice")
    assert code == 0  # resubmission: modify-by-reference branch, version 2
    staged_twice = alice._request("GET", f"/repo/objects/{pid}").json()
    article_ds = next(d for d in staged_twice["datastreams"] if d["dsId"] == "ARTICLE")
    assert article_ds["versions"] == 2

    alice.complete_task(rework[0]["taskInstanceId"])

    # qa stickiness: review returns directly to quinn, who approves
    review_again = quinn.list_tasks()
    assert [t["actorId"] for t in review_again] == ["quinn"]
    ended = quinn.complete_task(review_again[0]["taskInstanceId"], "approve")
    assert ended["state"] == "ended"

    code, out = run(["--json", "query", "creator", "eq", "alice"], "alice")
    assert code == 0
    import json as jsonlib

    rows = jsonlib.loads(out)["rows"]
    assert [r["pid"] for r in rows] == [pid]

    staging_dir = tmp_path / "data" / "staging"
    assert list(staging_dir.iterdir()) == []
    alice.close()
    quinn.close()
    print("PASS criterion 7: end-to-end publication scenario via CLI/stub")


def test_criterion_8_unsound_deploy_refusal(tmp_path):
    config = ServiceConfig(data_dir=str(tmp_path / "data"), users=USERS)
    archive = build_archive(unsound_with_orphan())
    with TestClient(create_app(config)) as tc:
        response = tc.post(
            "/api/definitions",
            files={"archive": ("broken.zip", archive, "application/zip")},
            headers=login(tc, "ada"),
        )
        assert response.status_code == 400
        body = response.json()
        assert body["code"] == "UNSOUND_DEFINITION"
        assert any(
            v["code"] == "UNREACHABLE_NODE" and v["subject"] == "orphan"
            for v in body["detail"]
        )
    # nothing persisted: a fresh process over the same data dir sees no deployments
    with TestClient(create_app(config)) as tc:
        listed = tc.get("/api/definitions/latest", headers=login(tc, "alice"))
        assert listed.json()["definitions"] == []
    print("PASS criterion 8: unsound deploy refused by name, nothing persisted")


def test_criterion_9_task_isolation_and_role_matrix(tmp_path):
    config = ServiceConfig(data_dir=str(tmp_path / "data"), users=USERS)
    with TestClient(create_app(config), raise_server_exceptions=False) as tc:
        # task-list isolation between two authors
        archive = build_archive(publication_v1())
        tc.post(
            "/api/definitions",
            files={"archive": ("p.zip", archive, "application/zip")},
            headers=login(tc, "ada"),
        )
        alice = login(tc, "alice")
        bob = login(tc, "bob")
        tc.post("/api/processes/def-1/start", headers=alice)
        assert len(tc.get("/api/tasks", headers=alice).json()["tasks"]) == 1
        assert tc.get("/api/tasks", headers=bob).json()["tasks"] == []

        # full endpoint x role matrix, exactly as documented
        checks = 0
        for method, path, body, allowed in MATRIX:
            for username, role in ROLE_OF_USER.items():
                kwargs = {"headers": login(tc, username)}
                if body == "multipart":
                    kwargs["files"] = {"archive": ("a.zip", b"zz"), "file": ("a.txt", b"zz")}
                elif body == "xml":
                    kwargs["content"] = b"<junk/>"
                elif body is not None:
                    kwargs["json"] = body
                response = tc.request(method, path, **kwargs)
                # the role gate answers code FORBIDDEN; a 403 FORBIDDEN_ACTOR
                # is the engine's per-actor rule, not a role denial
                if role in allowed:
                    assert (
                        response.status_code != 403
                        or response.json()["code"] != "FORBIDDEN"
                    ), (path, role)
                else:
                    assert response.status_code == 403, (path, role)
                    assert response.json()["code"] == "FORBIDDEN"
                checks += 1
        assert checks == len(MATRIX) * len(ROLE_OF_USER)
    print(f"PASS criterion 9: task isolation and {checks} matrix checks")
