"""Filesystem-backed research-object store.

Layout: one directory per RO id hash containing ``manifest.ttl-ro`` plus
content blobs named by content hash. Writes are serialized per RO id and
committed atomically (write-then-rename), so concurrent readers always
see the last committed version.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .errors import DuplicateId, UnknownId
from .manifest import MANIFEST_EXTENSION, parse_manifest, serialize_manifest
from .model import Iri, ResearchObject, RoType, new_ro

MANIFEST_NAME = "manifest" + MANIFEST_EXTENSION
EVOLUTION_LOG = "evolution.jsonl"
DOI_RECORDS = "dois.json"


@dataclass(frozen=True)
class EvolutionRecord:
    """One lifecycle event; the log is append-only and replayable."""

    event: str  # Created | Snapshotted | Archived | Forked
    source_id: str
    derived_id: str | None
    timestamp: str
    actor: str

    def to_json(self) -> str:
        return json.dumps(
            {
                "event": self.event,
                "sourceId": self.source_id,
                "derivedId": self.derived_id,
                "timestamp": self.timestamp,
                "actor": self.actor,
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, line: str) -> "EvolutionRecord":
        d = json.loads(line)
        return cls(d["event"], d["sourceId"], d.get("derivedId"), d["timestamp"], d["actor"])


def _id_hash(ro_id: Iri) -> str:
    return hashlib.sha256(ro_id.value.encode("utf-8")).hexdigest()[:16]


class RoStore:
    """Thread-safe store of research-object manifests and content blobs."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.RLock] = {}
        self._locks_guard = threading.Lock()
        self._log_lock = threading.Lock()

    # ---- locking ------------------------------------------------------

    def lock_for(self, ro_id: Iri) -> threading.RLock:
        # reentrant so callers may hold the lock across store calls that
        # re-acquire it (lifecycle transitions, batch enrichment)
        key = ro_id.value
        with self._locks_guard:
            if key not in self._locks:
                self._locks[key] = threading.RLock()
            return self._locks[key]

    # ---- paths --------------------------------------------------------

    def _dir_for(self, ro_id: Iri) -> Path:
        return self.root / _id_hash(ro_id)

    def _manifest_path(self, ro_id: Iri) -> Path:
        return self._dir_for(ro_id) / MANIFEST_NAME

    # ---- basic operations ----------------------------------------------

    def exists(self, ro_id: Iri) -> bool:
        return self._manifest_path(ro_id).exists()

    def create_ro(self, ro_id: Iri, ro_type: RoType, creator: str) -> ResearchObject:
        """Create and persist a fresh Live research object."""
        with self.lock_for(ro_id):
            if self.exists(ro_id):
                raise DuplicateId(f"research object {ro_id} already exists")
            ro = new_ro(ro_id, ro_type, creator)
            self._write(ro)
        self.append_evolution(
            EvolutionRecord(
                event="Created",
                source_id=ro_id.value,
                derived_id=None,
                timestamp=_now_text(),
                actor=creator,
            )
        )
        return ro

    def add(self, ro: ResearchObject) -> None:
        """Persist a new research object that was built elsewhere."""
        with self.lock_for(ro.id):
            if self.exists(ro.id):
                raise DuplicateId(f"research object {ro.id} already exists")
            self._write(ro)

    def save(self, ro: ResearchObject) -> None:
        """Persist a new version of an existing research object."""
        with self.lock_for(ro.id):
            if not self.exists(ro.id):
                raise UnknownId(f"research object {ro.id} is not in the store")
            self._write(ro)

    def _write(self, ro: ResearchObject) -> None:
        d = self._dir_for(ro.id)
        d.mkdir(parents=True, exist_ok=True)
        tmp = d / (MANIFEST_NAME + ".tmp")
        tmp.write_text(serialize_manifest(ro), encoding="utf-8")
        tmp.replace(self._manifest_path(ro.id))

    def load(self, ro_id: Iri) -> ResearchObject:
        path = self._manifest_path(ro_id)
        if not path.exists():
            raise UnknownId(f"research object {ro_id} is not in the store")
        return parse_manifest(path.read_text(encoding="utf-8"))

    def manifest_bytes(self, ro_id: Iri) -> bytes:
        path = self._manifest_path(ro_id)
        if not path.exists():
            raise UnknownId(f"research object {ro_id} is not in the store")
        return path.read_bytes()

    def list_ids(self) -> list[Iri]:
        ids = []
        for manifest in sorted(self.root.glob(f"*/{MANIFEST_NAME}")):
            ro = parse_manifest(manifest.read_text(encoding="utf-8"))
            ids.append(ro.id)
        return sorted(ids, key=lambda i: i.value)

    def load_all(self) -> list[ResearchObject]:
        return [self.load(i) for i in self.list_ids()]

    # ---- content blobs --------------------------------------------------

    def put_blob(self, ro_id: Iri, data: bytes) -> str:
        """Store content under the RO's directory; returns a ``blob:``
        locator usable as a resource contentRef."""
        digest = hashlib.sha256(data).hexdigest()[:16]
        d = self._dir_for(ro_id)
        d.mkdir(parents=True, exist_ok=True)
        (d / f"blob-{digest}").write_bytes(data)
        return f"blob:{digest}"

    def get_blob(self, ro_id: Iri, locator: str) -> bytes:
        if not locator.startswith("blob:"):
            raise UnknownId(f"not a blob locator: {locator!r}")
        path = self._dir_for(ro_id) / f"blob-{locator[5:]}"
        if not path.exists():
            raise UnknownId(f"blob {locator} not found for {ro_id}")
        return path.read_bytes()

    # ---- evolution log --------------------------------------------------

    def append_evolution(self, record: EvolutionRecord) -> None:
        with self._log_lock:
            with open(self.root / EVOLUTION_LOG, "a", encoding="utf-8") as fh:
                fh.write(record.to_json() + "\n")

    def evolution_records(self) -> list[EvolutionRecord]:
        path = self.root / EVOLUTION_LOG
        if not path.exists():
            return []
        return [
            EvolutionRecord.from_json(line)
            for line in path.read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]

    # ---- DOI records -----------------------------------------------------

    def doi_records(self) -> dict[str, dict]:
        path = self.root / DOI_RECORDS
        if not path.exists():
            return {}
        return json.loads(path.read_text(encoding="utf-8"))

    def save_doi_records(self, records: dict[str, dict]) -> None:
        path = self.root / DOI_RECORDS
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(records, indent=2, sort_keys=True), encoding="utf-8")
        tmp.replace(path)


def _now_text() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat().replace("+00:00", "Z")


def replay_evolution(records: list[EvolutionRecord]) -> dict[str, str]:
    """Rebuild the id -> lifecycle status map implied by an evolution log."""
    statuses: dict[str, str] = {}
    for rec in records:
        if rec.event == "Created":
            statuses[rec.source_id] = "Live"
        elif rec.event == "Snapshotted" and rec.derived_id:
            statuses[rec.derived_id] = "Snapshot"
        elif rec.event == "Archived" and rec.derived_id:
            statuses[rec.derived_id] = "Archived"
        elif rec.event == "Forked" and rec.derived_id:
            statuses[rec.derived_id] = "Forked"
    return statuses
