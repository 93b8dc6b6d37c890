"""Client for the locker HTTP API.

Works against a live server (``base_url``) or against an app object mounted
in process through the ASGI test transport (``app``), which is how the CLI
runs without a daemon.  Error bodies are turned back into the same typed
exceptions the service raised.
"""

from __future__ import annotations

import base64
import hashlib

from .errors import LockerError, ValidationFailure, error_for_code


class LockerClient:
    def __init__(self, base_url: str | None = None, app=None):
        if (base_url is None) == (app is None):
            raise ValueError("pass exactly one of base_url or app")
        if app is not None:
            import warnings

            with warnings.catch_warnings():
                # starlette >= 1.3 deprecates its httpx-backed test client in
                # favor of httpx2, which is not packaged for us yet
                warnings.filterwarnings("ignore", message=".*httpx2.*")
                from fastapi.testclient import TestClient

            self._http = TestClient(app, raise_server_exceptions=True)
        else:
            import httpx

            self._http = httpx.Client(base_url=base_url)

    def close(self) -> None:
        self._http.close()

    def __enter__(self) -> "LockerClient":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def _call(self, method: str, path: str, json=None, params=None) -> dict:
        resp = self._http.request(method, path, json=json, params=params)
        try:
            body = resp.json() if resp.content else {}
        except ValueError:
            body = {}
        if resp.status_code >= 400:
            if "error" in body:
                raise error_for_code(body["error"], body.get("detail", ""))
            if resp.status_code == 422:
                raise ValidationFailure(f"request rejected: {body.get('detail')}")
            raise LockerError(f"http {resp.status_code} from {path}")
        return body

    # ------------------------------------------------------------------

    def setup(self) -> dict:
        return self._call("POST", "/admin/setup")

    def stats(self) -> dict:
        return self._call("GET", "/stats")

    def register_issuer(self, issuer_id: str, catalog: list[str]) -> dict:
        return self._call(
            "POST", "/issuers", json={"issuer_id": issuer_id, "catalog": catalog}
        )

    def list_issuers(self) -> dict:
        return self._call("GET", "/issuers")["issuers"]

    def push_attrs(self, issuer_id: str, identity: str, names: list[str]) -> list[str]:
        body = self._call(
            "POST",
            f"/identities/{identity}/attributes",
            json={"issuer_id": issuer_id, "names": names},
        )
        return body["attributes"]

    def pull_attrs(self, identity: str) -> list[str]:
        return self._call("GET", f"/identities/{identity}/attributes")["attributes"]

    def prepare_token(
        self, subscriber: str, issuer_id: str, policy_subscriber: str, policy_issuer: str
    ) -> dict:
        return self._call(
            "POST",
            "/tokens",
            json={
                "subscriber": subscriber,
                "issuer_id": issuer_id,
                "policy_subscriber": policy_subscriber,
                "policy_issuer": policy_issuer,
            },
        )

    def issue_document(
        self,
        issuer_id: str,
        subscriber: str,
        policy_issuer: str,
        policy_subscriber: str,
        document: bytes,
    ) -> dict:
        return self._call(
            "POST",
            "/documents",
            json={
                "issuer_id": issuer_id,
                "subscriber": subscriber,
                "policy_issuer": policy_issuer,
                "policy_subscriber": policy_subscriber,
                "document_b64": base64.b64encode(document).decode(),
            },
        )

    def fetch_document(self, requester: str, uri: str) -> bytes:
        body = self._call(
            "POST", "/documents/fetch", json={"requester": requester, "uri": uri}
        )
        document = base64.b64decode(body["document_b64"])
        if hashlib.sha256(document).hexdigest() != body["sha256"]:
            raise LockerError("fetched document does not match its digest")
        return document

    def document_info(self, uri: str) -> dict:
        return self._call("GET", "/documents", params={"uri": uri})

    def export_edocument(self, uri: str) -> bytes:
        body = self._call("GET", "/documents/export", params={"uri": uri})
        return base64.b64decode(body["edocument_b64"])

    def gen_key(self, identity: str, issuers: list[str]) -> dict:
        return self._call(
            "POST", "/keys", json={"identity": identity, "issuers": issuers}
        )

    def list_keys(self, identity: str) -> list[dict]:
        return self._call("GET", f"/keys/{identity}")["keys"]
