"""Embedded file-backed document store.

One JSON document per meeting plus side documents for reports, an
idempotency index, and a summary cache keyed by config hash. Writes are
atomic whole-document replacements (write-then-rename) and serialized per
meeting; reads need no locking.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import threading
from datetime import datetime, timezone
from pathlib import Path

from .errors import ConflictError, NotFoundError
from .model import canonical_json_bytes


def _atomic_write(path: Path, data: bytes):
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def config_hash(config_doc: dict) -> str:
    return hashlib.sha256(canonical_json_bytes(config_doc)).hexdigest()[:16]


class DocumentStore:
    def __init__(self, root: Path | str):
        self.root = Path(root)
        for sub in ("meetings", "reports", "summaries"):
            (self.root / sub).mkdir(parents=True, exist_ok=True)
        self._global_lock = threading.Lock()
        self._meeting_locks: dict[str, threading.Lock] = {}

    def _lock_for(self, meeting_id: str) -> threading.Lock:
        with self._global_lock:
            return self._meeting_locks.setdefault(meeting_id, threading.Lock())

    def _meeting_path(self, meeting_id: str) -> Path:
        return self.root / "meetings" / f"{meeting_id}.json"

    # -- meetings ----------------------------------------------------------

    def meeting_exists(self, meeting_id: str) -> bool:
        return self._meeting_path(meeting_id).exists()

    def put_meeting(self, doc: dict):
        meeting_id = doc["record"]["meeting_id"]
        with self._lock_for(meeting_id):
            _atomic_write(self._meeting_path(meeting_id), canonical_json_bytes(doc))

    def get_meeting(self, meeting_id: str) -> dict:
        path = self._meeting_path(meeting_id)
        if not path.exists():
            raise NotFoundError(f"unknown meeting {meeting_id!r}")
        return json.loads(path.read_text(encoding="utf-8"))

    def list_meeting_ids(self) -> list[str]:
        return sorted(p.stem for p in (self.root / "meetings").glob("*.json"))

    def find_meeting_for_segment(self, segment_id: str) -> dict:
        """Scan meetings for the one containing segment_id (desk scale)."""
        for meeting_id in self.list_meeting_ids():
            doc = self.get_meeting(meeting_id)
            if any(seg["segment_id"] == segment_id for seg in doc["augmented"]["segments"]):
                return doc
        raise NotFoundError(f"unknown segment {segment_id!r}")

    # -- idempotency -------------------------------------------------------

    def idempotent_meeting(self, key: str) -> dict | None:
        path = self.root / "idempotency.json"
        if not path.exists():
            return None
        return json.loads(path.read_text(encoding="utf-8")).get(key)

    def remember_idempotency(self, key: str, entry: dict):
        with self._global_lock:
            path = self.root / "idempotency.json"
            index = json.loads(path.read_text(encoding="utf-8")) if path.exists() else {}
            index[key] = entry
            _atomic_write(path, canonical_json_bytes(index))

    # -- reports -----------------------------------------------------------

    def _report_path(self, meeting_id: str) -> Path:
        return self.root / "reports" / f"{meeting_id}.json"

    def get_report(self, meeting_id: str) -> dict:
        path = self._report_path(meeting_id)
        if path.exists():
            return json.loads(path.read_text(encoding="utf-8"))
        return {
            "report_id": f"rpt-{meeting_id}",
            "meeting_id": meeting_id,
            "body": "",
            "version": 0,
            "updated_at": None,
        }

    def save_report(self, meeting_id: str, body: str, expected_version: int) -> dict:
        """Optimistic save: succeeds only against the current version."""
        with self._lock_for(meeting_id):
            current = self.get_report(meeting_id)
            if current["version"] != expected_version:
                raise ConflictError(
                    f"stale version {expected_version}, current is {current['version']}"
                )
            doc = {
                "report_id": current["report_id"],
                "meeting_id": meeting_id,
                "body": body,
                "version": current["version"] + 1,
                "updated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            }
            _atomic_write(self._report_path(meeting_id), canonical_json_bytes(doc))
            return doc

    # -- summary cache -----------------------------------------------------

    def cached_summary(self, meeting_id: str, key: str) -> bytes | None:
        path = self.root / "summaries" / meeting_id / f"{key}.json"
        return path.read_bytes() if path.exists() else None

    def cache_summary(self, meeting_id: str, key: str, data: bytes):
        directory = self.root / "summaries" / meeting_id
        directory.mkdir(parents=True, exist_ok=True)
        _atomic_write(directory / f"{key}.json", data)
