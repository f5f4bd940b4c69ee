"""HTTP+JSON API over the document store.

Meetings are created by uploading the transcript, event log, and
vocabularies; the full pipeline runs synchronously and the resulting
documents are persisted. Attendee feedback is immutable afterwards: segment
patches may only touch the organizer tag and the topic, and any attempt to
reach tally data is rejected. Summaries are recomputed per config and cached
by config hash, so identical requests return byte-identical payloads.
"""

from __future__ import annotations

import hashlib
import json
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import Body, Depends, FastAPI, Header, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse, Response

from .align import AugmentedTranscript
from .errors import ConflictError, NotFoundError, ParseError
from .model import MeetingRecord, TagVocabulary, canonical_json_bytes
from .pipeline import PipelineConfig, run_pipeline, summarize_augmented
from .report import render_export
from .store import DocumentStore, config_hash
from .summarize import config_echo_doc

ALLOWED_PATCH_FIELDS = {"organizer_tag", "topic"}


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8077
    store_dir: str = "store"
    token_file: str = "tokens.json"
    report_size_cap: int = 1_000_000  # bytes of report body
    defaults: dict = field(default_factory=dict)  # flat pipeline overrides

    @classmethod
    def from_file(cls, path: Path | str) -> "ServiceConfig":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            host=doc.get("host", cls.host),
            port=int(doc.get("port", cls.port)),
            store_dir=doc.get("store_dir", cls.store_dir),
            token_file=doc.get("token_file", cls.token_file),
            report_size_cap=int(doc.get("report_size_cap", cls.report_size_cap)),
            defaults=doc.get("defaults", {}),
        )


def _hash_token(token: str) -> str:
    return hashlib.sha256(token.encode("utf-8")).hexdigest()


def load_accounts(path: Path | str) -> dict[str, dict]:
    """Token file -> {token_hash: account}. Only hashes are kept in memory."""
    rows = json.loads(Path(path).read_text(encoding="utf-8"))
    accounts = {}
    for row in rows:
        accounts[_hash_token(row["token"])] = {
            "account_id": row["account_id"],
            "display_name": row.get("display_name", row["account_id"]),
        }
    return accounts


def _json_response(doc, status_code: int = 200) -> Response:
    return Response(
        content=canonical_json_bytes(doc),
        media_type="application/json",
        status_code=status_code,
    )


def create_app(
    store: DocumentStore,
    accounts: dict[str, dict],
    cfg: ServiceConfig = ServiceConfig(),
) -> FastAPI:
    app = FastAPI(title="townhall", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    def require_account(authorization: str | None = Header(default=None)) -> dict:
        if not authorization or not authorization.startswith("Bearer "):
            raise HTTPException(status_code=401, detail="missing bearer token")
        account = accounts.get(_hash_token(authorization[len("Bearer ") :]))
        if account is None:
            raise HTTPException(status_code=401, detail="unknown token")
        return account

    def load_meeting(meeting_id: str) -> dict:
        try:
            return store.get_meeting(meeting_id)
        except NotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None

    def base_config() -> PipelineConfig:
        return PipelineConfig().with_overrides(**cfg.defaults)

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/meetings")
    def create_meeting(
        payload: dict = Body(...),
        idempotency_key: str | None = Header(default=None, alias="Idempotency-Key"),
        account: dict = Depends(require_account),
    ):
        fingerprint = hashlib.sha256(canonical_json_bytes(payload)).hexdigest()
        if idempotency_key:
            prior = store.idempotent_meeting(idempotency_key)
            if prior is not None:
                if prior["fingerprint"] != fingerprint:
                    raise HTTPException(
                        status_code=409,
                        detail="idempotency key already used with a different payload",
                    )
                return _json_response({"meeting_id": prior["meeting_id"]}, status_code=200)

        try:
            metadata = dict(payload["metadata"])
            transcript_doc = payload["transcript"]
            events_csv = payload["events_csv"]
            vocab_docs = payload["vocabularies"]
        except (KeyError, TypeError) as exc:
            raise HTTPException(status_code=400, detail=f"missing field {exc}") from None

        meeting_id = metadata.get("meeting_id") or f"m{uuid.uuid4().hex[:12]}"
        if store.meeting_exists(meeting_id):
            raise HTTPException(status_code=409, detail=f"meeting {meeting_id!r} already exists")
        metadata["meeting_id"] = meeting_id

        try:
            record = MeetingRecord.from_doc(metadata)
            vocab_org = TagVocabulary.from_doc(vocab_docs["organizer"])
            vocab_att = TagVocabulary.from_doc(vocab_docs["attendee"])
            pipeline_cfg = base_config().with_overrides(**payload.get("config", {}))
            result = run_pipeline(
                record,
                canonical_json_bytes(transcript_doc),
                events_csv.encode("utf-8"),
                vocab_org,
                vocab_att,
                pipeline_cfg,
            )
        except (ParseError, ValueError, KeyError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None

        echo = config_echo_doc(
            pipeline_cfg.rank, pipeline_cfg.weights, pipeline_cfg.selection, pipeline_cfg.bm25
        )
        store.put_meeting(
            {
                "record": record.to_doc(),
                "vocabularies": {"organizer": vocab_org.to_doc(), "attendee": vocab_att.to_doc()},
                "events": [e.to_doc() for e in result.events],
                "augmented": result.augmented_doc(),
                "topics": result.topics_listing(),
                "default_summary_config": echo,
            }
        )
        store.cache_summary(
            meeting_id, config_hash(echo), canonical_json_bytes(result.summary_doc())
        )
        if idempotency_key:
            store.remember_idempotency(
                idempotency_key, {"meeting_id": meeting_id, "fingerprint": fingerprint}
            )
        return _json_response({"meeting_id": meeting_id}, status_code=201)

    @app.get("/meetings/{meeting_id}/augmented")
    def get_augmented(meeting_id: str, account: dict = Depends(require_account)):
        return _json_response(load_meeting(meeting_id)["augmented"])

    @app.get("/meetings/{meeting_id}/topics")
    def get_topics(meeting_id: str, account: dict = Depends(require_account)):
        return _json_response(load_meeting(meeting_id)["topics"])

    @app.get("/meetings/{meeting_id}/timeline")
    def get_timeline(meeting_id: str, account: dict = Depends(require_account)):
        doc = load_meeting(meeting_id)
        return _json_response(
            {"meeting_id": meeting_id, "timeline": doc["augmented"]["tag_timeline"]}
        )

    @app.get("/meetings/{meeting_id}/summary")
    def get_summary(
        meeting_id: str,
        similarity: str | None = None,
        budget_ratio: float | None = None,
        eps_hit: float | None = None,
        eps_miss: float | None = None,
        damping: float | None = None,
        account: dict = Depends(require_account),
    ):
        doc = load_meeting(meeting_id)
        try:
            pipeline_cfg = base_config().with_overrides(
                similarity=similarity,
                budget_ratio=budget_ratio,
                eps_hit=eps_hit,
                eps_miss=eps_miss,
                damping=damping,
            )
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        echo = config_echo_doc(
            pipeline_cfg.rank, pipeline_cfg.weights, pipeline_cfg.selection, pipeline_cfg.bm25
        )
        key = config_hash(echo)
        cached = store.cached_summary(meeting_id, key)
        if cached is None:
            augmented = AugmentedTranscript.from_doc(doc["augmented"])
            summary = summarize_augmented(augmented, pipeline_cfg)
            cached = canonical_json_bytes(summary.to_doc())
            store.cache_summary(meeting_id, key, cached)
        return Response(content=cached, media_type="application/json")

    @app.get("/meetings/{meeting_id}/tallies")
    def get_tallies(
        meeting_id: str,
        labels: str | None = None,
        tags: str | None = None,
        topic: str | None = None,
        account: dict = Depends(require_account),
    ):
        doc = load_meeting(meeting_id)
        attendee_labels = set(doc["vocabularies"]["attendee"]["labels"].values())
        organizer_labels = set(doc["vocabularies"]["organizer"]["labels"].values())
        wanted_labels = [v for v in (labels.split(",") if labels else []) if v]
        wanted_tags = [v for v in (tags.split(",") if tags else []) if v]
        unknown = [v for v in wanted_labels if v not in attendee_labels]
        if unknown:
            raise HTTPException(status_code=400, detail=f"unknown label in filter: {unknown}")
        unknown = [v for v in wanted_tags if v not in organizer_labels]
        if unknown:
            raise HTTPException(status_code=400, detail=f"unknown tag in filter: {unknown}")

        segments = []
        for seg in doc["augmented"]["segments"]:
            visible = True
            if wanted_labels:
                counts = seg["tally"]["counts"]
                visible = any(counts.get(lbl, 0) >= 1 for lbl in wanted_labels)
            if visible and wanted_tags:
                visible = seg["organizer_tag"] in wanted_tags
            if visible and topic:
                visible = seg["topic"] == topic
            segments.append({**seg, "visible": visible})
        return _json_response(
            {
                "meeting_id": meeting_id,
                "filter": {"labels": wanted_labels, "tags": wanted_tags, "topic": topic},
                "segments": segments,
            }
        )

    @app.patch("/segments/{segment_id}")
    def patch_segment(
        segment_id: str,
        patch: dict = Body(...),
        account: dict = Depends(require_account),
    ):
        extra = set(patch) - ALLOWED_PATCH_FIELDS
        if extra:
            raise HTTPException(
                status_code=403,
                detail=(
                    f"fields {sorted(extra)} are immutable: attendee feedback and derived "
                    "data cannot be edited, only organizer_tag and topic"
                ),
            )
        try:
            doc = store.find_meeting_for_segment(segment_id)
        except NotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None

        organizer_labels = set(doc["vocabularies"]["organizer"]["labels"].values())
        if "organizer_tag" in patch and patch["organizer_tag"] not in organizer_labels:
            raise HTTPException(
                status_code=400, detail=f"unknown organizer tag {patch['organizer_tag']!r}"
            )

        updated = None
        for seg in doc["augmented"]["segments"]:
            if seg["segment_id"] == segment_id:
                if "organizer_tag" in patch:
                    seg["organizer_tag"] = patch["organizer_tag"]
                if "topic" in patch:
                    seg["topic"] = patch["topic"]
                updated = seg
                break
        if "organizer_tag" in patch:
            for entry in doc["augmented"]["tag_timeline"]:
                if entry["segment_id"] == segment_id:
                    entry["label"] = patch["organizer_tag"]
        store.put_meeting(doc)
        return _json_response(updated)

    @app.get("/meetings/{meeting_id}/report")
    def get_report(meeting_id: str, account: dict = Depends(require_account)):
        load_meeting(meeting_id)
        return _json_response(store.get_report(meeting_id))

    @app.put("/meetings/{meeting_id}/report")
    def put_report(
        meeting_id: str,
        payload: dict = Body(...),
        account: dict = Depends(require_account),
    ):
        load_meeting(meeting_id)
        body = payload.get("body")
        expected_version = payload.get("expected_version")
        if not isinstance(body, str) or not isinstance(expected_version, int):
            raise HTTPException(status_code=400, detail="body (str) and expected_version (int) required")
        if len(body.encode("utf-8")) > cfg.report_size_cap:
            raise HTTPException(status_code=413, detail="report body over size cap")
        try:
            saved = store.save_report(meeting_id, body, expected_version)
        except ConflictError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from None
        return _json_response(saved)

    @app.post("/meetings/{meeting_id}/export")
    def export_report(meeting_id: str, account: dict = Depends(require_account)):
        doc = load_meeting(meeting_id)
        report = store.get_report(meeting_id)
        augmented = AugmentedTranscript.from_doc(doc["augmented"])
        markdown = render_export(doc["record"], report["body"], augmented)
        return PlainTextResponse(markdown, media_type="text/markdown")

    return app


def serve(config_path: Path | str):
    """Run the service per the config file (blocking)."""
    import uvicorn

    cfg = ServiceConfig.from_file(config_path)
    store = DocumentStore(cfg.store_dir)
    accounts = load_accounts(cfg.token_file)
    app = create_app(store, accounts, cfg)
    uvicorn.run(app, host=cfg.host, port=cfg.port, log_level="warning")
