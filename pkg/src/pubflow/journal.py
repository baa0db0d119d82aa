"""Append-only event journal with snapshots.

Wire format (see ``docs/persistence.md``): the journal file is a sequence of
length-prefixed records, each a 4-byte big-endian payload length followed by
a UTF-8 JSON object ``{"seq": int, "ts": str, "kind": str, "payload": {...}}``.
Snapshots are written beside it as ``snapshot-<seq>.json``; recovery loads
the newest snapshot and replays every record with a higher sequence number.

Replay determinism is the caller's contract: an event payload must carry
everything its apply function needs (timestamps included), so replaying the
journal reconstructs state byte-identically.
"""

from __future__ import annotations

import json
import os
import re
import struct
from dataclasses import dataclass
from pathlib import Path

_LEN = struct.Struct(">I")
_SNAPSHOT_RE = re.compile(r"^snapshot-(\d+)\.json$")


@dataclass(frozen=True)
class Record:
    seq: int
    ts: str
    kind: str
    payload: dict


class Journal:
    """One journal file plus snapshots inside ``directory``."""

    def __init__(self, directory: str | Path, filename: str = "journal.log") -> None:
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.path = self.directory / filename
        self._seq = 0
        for record in self.read_all():
            self._seq = record.seq
        self._fh = open(self.path, "ab")

    @property
    def last_seq(self) -> int:
        return self._seq

    def append(self, kind: str, payload: dict, ts: str) -> Record:
        self._seq += 1
        record = Record(seq=self._seq, ts=ts, kind=kind, payload=payload)
        data = json.dumps(
            {"seq": record.seq, "ts": record.ts, "kind": record.kind, "payload": record.payload},
            sort_keys=True,
            separators=(",", ":"),
        ).encode("utf-8")
        self._fh.write(_LEN.pack(len(data)))
        self._fh.write(data)
        self._fh.flush()
        os.fsync(self._fh.fileno())
        return record

    def read_all(self) -> list[Record]:
        records: list[Record] = []
        if not self.path.exists():
            return records
        with open(self.path, "rb") as fh:
            while True:
                header = fh.read(_LEN.size)
                if len(header) < _LEN.size:
                    break  # clean EOF or torn header: stop at last complete record
                (length,) = _LEN.unpack(header)
                data = fh.read(length)
                if len(data) < length:
                    break  # torn write
                obj = json.loads(data.decode("utf-8"))
                records.append(Record(obj["seq"], obj["ts"], obj["kind"], obj["payload"]))
        return records

    def write_snapshot(self, state: dict) -> Path:
        path = self.directory / f"snapshot-{self._seq}.json"
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps({"seq": self._seq, "state": state}, sort_keys=True))
        tmp.replace(path)
        return path

    def latest_snapshot(self) -> tuple[int, dict] | None:
        best: tuple[int, Path] | None = None
        for entry in self.directory.iterdir():
            m = _SNAPSHOT_RE.match(entry.name)
            if m:
                seq = int(m.group(1))
                if best is None or seq > best[0]:
                    best = (seq, entry)
        if best is None:
            return None
        obj = json.loads(best[1].read_text())
        return obj["seq"], obj["state"]

    def recover(self) -> tuple[dict | None, list[Record]]:
        """Newest snapshot state (or None) and the records to replay after it."""
        snapshot = self.latest_snapshot()
        if snapshot is None:
            return None, self.read_all()
        seq, state = snapshot
        return state, [r for r in self.read_all() if r.seq > seq]

    def close(self) -> None:
        self._fh.close()
