"""HTTP front end: a FastAPI app wrapping one LockerService instance.

Run it with ``uvicorn --factory privlocker.service:create_app``; the store
directory comes from ``PRIVLOCKER_STORE`` (default ``~/.privlocker``).  The
CLI mounts the same app in process, so both paths exercise identical code.

Every domain error surfaces as a JSON body ``{"error": <code>, "detail":
<message>}`` with a status from the table below; clients rebuild the typed
exception from the code.
"""

from __future__ import annotations

import base64
import binascii
import hashlib
import os
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import records, schemas
from .errors import LockerError, ValidationFailure
from .locker import LockerService

DEFAULT_STORE = "~/.privlocker"

_STATUS: dict[str, int] = {
    "validation-error": 400,
    "policy-syntax": 400,
    "policy-threshold-range": 400,
    "policy-empty-gate": 400,
    "malformed-encoding": 400,
    "off-group-element": 400,
    "group-mismatch": 400,
    "token-combine": 400,
    "wrong-doctype": 400,
    "policy-not-satisfied": 403,
    "authentication-failure": 403,
    "no-covering-key": 403,
    "unknown-issuer": 404,
    "unknown-identity": 404,
    "unknown-uri": 404,
    "duplicate-issuer": 409,
    "missing-issuer-attributes": 409,
    "format-version-mismatch": 500,
    "checksum-failure": 500,
    "internal-error": 500,
    "not-implemented": 501,
}


def _decode_b64(text: str, what: str) -> bytes:
    try:
        return base64.b64decode(text, validate=True)
    except (binascii.Error, ValueError):
        raise ValidationFailure(f"{what} is not valid base64") from None


def create_app(
    store_dir: str | Path | None = None,
    backend_name: str = "bn256",
    rng=None,
) -> FastAPI:
    if store_dir is None:
        store_dir = os.environ.get("PRIVLOCKER_STORE", DEFAULT_STORE)
    service = LockerService(
        Path(store_dir).expanduser(), backend_name=backend_name, rng=rng
    )
    app = FastAPI(title="privlocker", version="0.1.0")
    app.state.service = service

    @app.exception_handler(LockerError)
    async def locker_error(_request: Request, err: LockerError) -> JSONResponse:
        return JSONResponse(
            status_code=_STATUS.get(err.code, 500),
            content={"error": err.code, "detail": err.message},
        )

    @app.post("/admin/setup", response_model=schemas.SetupResponse)
    def setup() -> schemas.SetupResponse:
        created = service.setup()
        return schemas.SetupResponse(created=created, backend=service.stats()["backend"])

    @app.get("/stats", response_model=schemas.StatsResponse)
    def stats() -> schemas.StatsResponse:
        return schemas.StatsResponse(**service.stats())

    @app.post("/issuers", response_model=schemas.IssuerResponse)
    def register_issuer(req: schemas.RegisterIssuerRequest) -> schemas.IssuerResponse:
        names = service.register_issuer(req.issuer_id, req.catalog)
        return schemas.IssuerResponse(issuer_id=req.issuer_id, catalog=sorted(names))

    @app.get("/issuers", response_model=schemas.IssuerListResponse)
    def list_issuers() -> schemas.IssuerListResponse:
        return schemas.IssuerListResponse(
            issuers={k: sorted(v) for k, v in service.list_issuers().items()}
        )

    @app.post(
        "/identities/{identity}/attributes",
        response_model=schemas.AttributesResponse,
    )
    def push_attrs(identity: str, req: schemas.PushAttrsRequest) -> schemas.AttributesResponse:
        attrs = service.push_attrs(req.issuer_id, identity, req.names)
        return schemas.AttributesResponse(
            identity=identity, attributes=sorted(str(a) for a in attrs)
        )

    @app.get(
        "/identities/{identity}/attributes",
        response_model=schemas.AttributesResponse,
    )
    def pull_attrs(identity: str) -> schemas.AttributesResponse:
        attrs = service.pull_attrs(identity)
        return schemas.AttributesResponse(
            identity=identity, attributes=sorted(str(a) for a in attrs)
        )

    @app.post("/tokens", response_model=schemas.TokenResponse)
    def prepare_token(req: schemas.TokenRequest) -> schemas.TokenResponse:
        fingerprint, cached = service.prepare_token(
            req.subscriber, req.issuer_id, req.policy_subscriber, req.policy_issuer
        )
        return schemas.TokenResponse(fingerprint=fingerprint, cached=cached)

    @app.post("/documents", response_model=schemas.IssueDocumentResponse)
    def issue_document(req: schemas.IssueDocumentRequest) -> schemas.IssueDocumentResponse:
        document = _decode_b64(req.document_b64, "document_b64")
        result = service.issue_priv_document(
            req.issuer_id,
            req.subscriber,
            req.policy_issuer,
            req.policy_subscriber,
            document,
        )
        return schemas.IssueDocumentResponse(
            uri=result.uri.render(),
            token_cached=result.token_cached,
            created_at=result.created_at,
        )

    @app.post("/documents/fetch", response_model=schemas.FetchDocumentResponse)
    def fetch_document(req: schemas.FetchDocumentRequest) -> schemas.FetchDocumentResponse:
        document = service.fetch_priv_doc(req.requester, req.uri)
        return schemas.FetchDocumentResponse(
            uri=req.uri,
            document_b64=base64.b64encode(document).decode(),
            sha256=hashlib.sha256(document).hexdigest(),
            size=len(document),
        )

    @app.get("/documents", response_model=schemas.DocumentInfoResponse)
    def document_info(uri: str) -> schemas.DocumentInfoResponse:
        doc = service.get_edocument(uri)
        return schemas.DocumentInfoResponse(
            uri=doc.uri.render(),
            created_at=doc.created_at,
            policy=doc.ciphertext.tree.render(),
            issuers=sorted(doc.ciphertext.tree.issuers),
            payload_bytes=len(doc.ciphertext.c5),
        )

    @app.get("/documents/export", response_model=schemas.ExportDocumentResponse)
    def export_document(uri: str) -> schemas.ExportDocumentResponse:
        doc = service.get_edocument(uri)
        return schemas.ExportDocumentResponse(
            uri=doc.uri.render(),
            edocument_b64=base64.b64encode(records.serialize_edocument(doc)).decode(),
        )

    @app.post("/keys", response_model=schemas.GenKeyResponse)
    def gen_key(req: schemas.GenKeyRequest) -> schemas.GenKeyResponse:
        result = service.gen_ab_pvt_key(req.identity, req.issuers)
        return schemas.GenKeyResponse(
            handle=result.handle,
            created=result.created,
            issuers=sorted(result.issuer_set),
            attributes=sorted(str(a) for a in result.attributes),
            evicted=list(result.evicted),
        )

    @app.get("/keys/{identity}", response_model=schemas.KeyListResponse)
    def list_keys(identity: str) -> schemas.KeyListResponse:
        keys = service.list_keys(identity)
        return schemas.KeyListResponse(
            identity=identity,
            keys=[
                schemas.KeyInfo(handle=handle, issuers=sorted(issuers))
                for handle, issuers in keys
            ],
        )

    return app
