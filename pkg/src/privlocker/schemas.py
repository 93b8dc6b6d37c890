"""Request and response bodies for the locker HTTP API.

Document payloads travel base64-encoded inside JSON; attribute labels are
rendered as ``authority/name`` strings.
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class SetupResponse(BaseModel):
    created: bool
    backend: str


class StatsResponse(BaseModel):
    backend: str
    setup: bool
    issuers: int
    identities: int
    keys: int
    documents: int
    tokens_cached: int
    token_handshakes: int
    token_cache_hits: int


class RegisterIssuerRequest(BaseModel):
    issuer_id: str
    catalog: list[str] = Field(default_factory=list)


class IssuerResponse(BaseModel):
    issuer_id: str
    catalog: list[str]


class IssuerListResponse(BaseModel):
    issuers: dict[str, list[str]]


class PushAttrsRequest(BaseModel):
    issuer_id: str
    names: list[str] = Field(default_factory=list)


class AttributesResponse(BaseModel):
    identity: str
    attributes: list[str]


class TokenRequest(BaseModel):
    subscriber: str
    issuer_id: str
    policy_subscriber: str
    policy_issuer: str


class TokenResponse(BaseModel):
    fingerprint: str
    cached: bool


class IssueDocumentRequest(BaseModel):
    issuer_id: str
    subscriber: str
    policy_issuer: str
    policy_subscriber: str
    document_b64: str


class IssueDocumentResponse(BaseModel):
    uri: str
    token_cached: bool
    created_at: float


class FetchDocumentRequest(BaseModel):
    requester: str
    uri: str


class FetchDocumentResponse(BaseModel):
    uri: str
    document_b64: str
    sha256: str
    size: int


class DocumentInfoResponse(BaseModel):
    uri: str
    created_at: float
    policy: str
    issuers: list[str]
    payload_bytes: int


class ExportDocumentResponse(BaseModel):
    uri: str
    edocument_b64: str


class GenKeyRequest(BaseModel):
    identity: str
    issuers: list[str]


class GenKeyResponse(BaseModel):
    handle: str
    created: bool
    issuers: list[str]
    attributes: list[str]
    evicted: list[str]


class KeyInfo(BaseModel):
    handle: str
    issuers: list[str]


class KeyListResponse(BaseModel):
    identity: str
    keys: list[KeyInfo]


class ErrorBody(BaseModel):
    error: str
    detail: str
