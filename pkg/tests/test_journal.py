"""Journal wire format: length-prefixed JSON records plus snapshots."""

import json
import struct

from pubflow.journal import Journal


def test_record_format_on_disk(tmp_path):
    journal = Journal(tmp_path)
    journal.append("greet", {"who": "world"}, "2026-08-23T00:00:00.000000Z")
    journal.close()

    raw = (tmp_path / "journal.log").read_bytes()
    (length,) = struct.unpack(">I", raw[:4])
    body = raw[4 : 4 + length]
    assert len(raw) == 4 + length
    obj = json.loads(body.decode("utf-8"))
    assert obj == {
        "seq": 1,
        "ts": "2026-08-23T00:00:00.000000Z",
        "kind": "greet",
        "payload": {"who": "world"},
    }


def test_sequence_numbers_continue_after_reopen(tmp_path):
    journal = Journal(tmp_path)
    journal.append("a", {}, "t1")
    journal.append("b", {}, "t2")
    journal.close()

    reopened = Journal(tmp_path)
    record = reopened.append("c", {}, "t3")
    assert record.seq == 3
    assert [r.kind for r in reopened.read_all()] == ["a", "b", "c"]
    reopened.close()


def test_torn_tail_is_ignored(tmp_path):
    journal = Journal(tmp_path)
    journal.append("a", {"n": 1}, "t1")
    journal.close()
    with open(tmp_path / "journal.log", "ab") as fh:
        fh.write(struct.pack(">I", 999))
        fh.write(b"{\"trunc")  # torn write

    reopened = Journal(tmp_path)
    assert [r.kind for r in reopened.read_all()] == ["a"]
    reopened.close()


def test_recover_prefers_newest_snapshot(tmp_path):
    journal = Journal(tmp_path)
    journal.append("a", {}, "t1")
    journal.write_snapshot({"stage": "one"})
    journal.append("b", {}, "t2")
    journal.write_snapshot({"stage": "two"})
    journal.append("c", {}, "t3")
    journal.close()

    reopened = Journal(tmp_path)
    state, tail = reopened.recover()
    assert state == {"stage": "two"}
    assert [r.kind for r in tail] == ["c"]
    reopened.close()
