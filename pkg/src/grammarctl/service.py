"""Read-mostly HTTP API over a treebanked profile.

Serves profile items, readings (with a dependency-graph view for
renderers), and decisions.  Decision writes are disabled unless the
server is started writable; a configured gold profile enables the
comparison endpoint.  Responses carry permissive CORS headers so a
separately served UI can call the API during development.
"""

from __future__ import annotations

import json
import re
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .mrs import parse_mrs, to_dmrs
from .treebank import (
    Decision,
    Profile,
    compare_profiles,
    open_profile,
    record_decision,
)

_ITEM = re.compile(r"^/api/items/([^/]+)$")
_READING = re.compile(r"^/api/items/([^/]+)/readings/(\d+)$")


def _decision_json(decision: Decision | None):
    if decision is None:
        return None
    return {
        "item-id": decision.item_id,
        "decision": decision.decision,
        "reading-index": decision.reading,
        "note": decision.note,
    }


def _item_summary(profile: Profile, item_id: str) -> dict:
    item = profile.items[item_id]
    result = profile.results[item_id]
    return {
        "item-id": item_id,
        "wf": item.wf,
        "sentence": item.sentence,
        "status": result.status,
        "token-count": result.token_count,
        "readings": len(result.readings),
        "gap-tokens": list(result.gaps),
        "decision": _decision_json(profile.decisions.get(item_id)),
    }


def _dmrs_json(mrs_text: str) -> dict:
    d = to_dmrs(parse_mrs(mrs_text))
    return {
        "top": d.top,
        "nodes": [
            {
                "id": n.id,
                "predicate": n.predicate,
                "sort": n.sort,
                "properties": dict(n.properties),
            }
            for n in d.nodes
        ],
        "links": [
            {"start": l.start, "end": l.end, "role": l.role, "post": l.post}
            for l in d.links
        ],
    }


def _reading_json(profile: Profile, item_id: str, index: int) -> dict:
    reading = profile.results[item_id].readings[index]
    return {
        "item-id": item_id,
        "reading-index": reading.index,
        "derivation": reading.derivation,
        "mrs": reading.mrs,
        "dmrs": _dmrs_json(reading.mrs),
    }


class ProfileService:
    """Request-independent state shared by all handler instances."""

    def __init__(
        self,
        profile: Profile,
        gold: Profile | None = None,
        ui_dir: Path | None = None,
        writable: bool = False,
    ) -> None:
        self.profile = profile
        self.gold = gold
        self.ui_dir = ui_dir
        self.writable = writable

    def get(self, path: str):
        profile = self.profile
        if path == "/api/run":
            return 200, dict(profile.run, **{"item-count": len(profile.items)})
        if path == "/api/items":
            return 200, [_item_summary(profile, item_id) for item_id in profile.items]
        m = _ITEM.match(path)
        if m:
            item_id = m.group(1)
            if item_id not in profile.items:
                return 404, {"error": f"unknown item {item_id!r}"}
            summary = _item_summary(profile, item_id)
            summary["reading-list"] = [
                {"reading-index": r.index, "derivation": r.derivation, "mrs": r.mrs}
                for r in profile.results[item_id].readings
            ]
            return 200, summary
        m = _READING.match(path)
        if m:
            item_id, index = m.group(1), int(m.group(2))
            if item_id not in profile.items:
                return 404, {"error": f"unknown item {item_id!r}"}
            if index >= len(profile.results[item_id].readings):
                return 404, {"error": f"{item_id} has no reading {index}"}
            return 200, _reading_json(profile, item_id, index)
        if path == "/api/compare":
            if self.gold is None:
                return 404, {"error": "no gold profile configured"}
            comparisons = compare_profiles(profile, self.gold)
            return 200, [
                {"item-id": c.item_id, "category": c.category} for c in comparisons
            ]
        return 404, {"error": f"no such resource {path!r}"}

    def post_decision(self, item_id: str, body: dict):
        if not self.writable:
            return 403, {"error": "server is read-only; restart with --writable"}
        if item_id not in self.profile.items:
            return 404, {"error": f"unknown item {item_id!r}"}
        decision = body.get("decision")
        if decision not in ("accept", "reject"):
            return 400, {"error": "decision must be accept or reject"}
        reading = body.get("reading-index")
        try:
            record_decision(
                self.profile,
                Decision(item_id, decision, reading, str(body.get("note", ""))),
            )
        except (ValueError, KeyError) as err:
            return 400, {"error": str(err)}
        return 200, {"ok": True, "decision": _decision_json(self.profile.decisions[item_id])}


class _Handler(BaseHTTPRequestHandler):
    service: ProfileService

    def log_message(self, *args) -> None:  # keep test output quiet
        pass

    def _send(self, status: int, payload, content_type="application/json") -> None:
        body = (
            json.dumps(payload, ensure_ascii=False).encode("utf-8")
            if content_type == "application/json"
            else payload
        )
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()
        self.wfile.write(body)

    def do_OPTIONS(self) -> None:
        self._send(204, b"", content_type="text/plain")

    def do_GET(self) -> None:
        path = self.path.split("?", 1)[0]
        if not path.startswith("/api/"):
            self._static(path)
            return
        status, payload = self.service.get(path)
        self._send(status, payload)

    def do_POST(self) -> None:
        path = self.path.split("?", 1)[0]
        m = re.match(r"^/api/items/([^/]+)/decision$", path)
        if not m:
            self._send(404, {"error": f"no such resource {path!r}"})
            return
        length = int(self.headers.get("Content-Length", "0"))
        try:
            body = json.loads(self.rfile.read(length) or b"{}")
        except json.JSONDecodeError:
            self._send(400, {"error": "request body is not valid JSON"})
            return
        status, payload = self.service.post_decision(m.group(1), body)
        self._send(status, payload)

    def _static(self, path: str) -> None:
        ui_dir = self.service.ui_dir
        if ui_dir is None:
            self._send(
                200,
                b"grammarctl profile service; the API lives under /api/\n",
                content_type="text/plain; charset=utf-8",
            )
            return
        name = path.lstrip("/") or "index.html"
        target = (ui_dir / name).resolve()
        if not str(target).startswith(str(ui_dir.resolve())) or not target.is_file():
            self._send(404, {"error": f"no such file {name!r}"})
            return
        types = {
            ".html": "text/html; charset=utf-8",
            ".js": "text/javascript; charset=utf-8",
            ".css": "text/css; charset=utf-8",
            ".svg": "image/svg+xml",
            ".png": "image/png",
        }
        self._send(
            200,
            target.read_bytes(),
            content_type=types.get(target.suffix, "application/octet-stream"),
        )


def make_server(
    profile_path: str | Path,
    host: str = "127.0.0.1",
    port: int = 0,
    gold_path: str | Path | None = None,
    ui_dir: str | Path | None = None,
    writable: bool = False,
) -> ThreadingHTTPServer:
    service = ProfileService(
        open_profile(profile_path),
        open_profile(gold_path) if gold_path else None,
        Path(ui_dir) if ui_dir else None,
        writable,
    )
    handler = type("BoundHandler", (_Handler,), {"service": service})
    return ThreadingHTTPServer((host, port), handler)
