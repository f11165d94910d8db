"""Client side of the labeler wire protocol.

One protocol, two transports: JSON over HTTP POST /label, or
newline-delimited JSON over a subprocess's standard streams. Requests:
{"task": "segment"|"classify", "context": "page"|"record", "page_id": str,
 "nodes": [{"xpath", "tag", "text"}]}; responses: {"labels": [{"xpath",
"label"}]} or {"error": str}.
"""

from __future__ import annotations

import json
import shlex
import subprocess
import threading

from .dom import XPath

DEFAULT_TIMEOUT = 30.0


class LabelerUnavailable(Exception):
    """Labeler endpoint unreachable or it reported an error."""


class LabelerTimeout(Exception):
    """Labeler did not answer within the timeout."""


class ProtocolViolation(Exception):
    """Labeler answered with an unknown label or an xpath not in the request."""


class HttpLabeler:
    def __init__(self, url: str, timeout: float = DEFAULT_TIMEOUT):
        if not url.rstrip("/").endswith("/label"):
            url = url.rstrip("/") + "/label"
        self.url = url
        self.timeout = timeout

    def request(self, payload: dict) -> dict:
        import requests

        try:
            resp = requests.post(self.url, json=payload, timeout=self.timeout)
        except requests.Timeout as exc:
            raise LabelerTimeout(str(exc)) from exc
        except requests.RequestException as exc:
            raise LabelerUnavailable(str(exc)) from exc
        try:
            body = resp.json()
        except ValueError as exc:
            raise ProtocolViolation(f"non-JSON response: {exc}") from exc
        if resp.status_code != 200 or "error" in body:
            raise LabelerUnavailable(body.get("error", f"HTTP {resp.status_code}"))
        return body

    def close(self) -> None:
        pass


class SubprocessLabeler:
    """Persistent child process speaking one JSON object per line."""

    def __init__(self, cmd: str, timeout: float = DEFAULT_TIMEOUT):
        self.timeout = timeout
        self._lock = threading.Lock()
        try:
            self._proc = subprocess.Popen(
                shlex.split(cmd),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        except OSError as exc:
            raise LabelerUnavailable(str(exc)) from exc

    def request(self, payload: dict) -> dict:
        with self._lock:
            if self._proc.poll() is not None:
                raise LabelerUnavailable("labeler process exited")
            try:
                self._proc.stdin.write(json.dumps(payload) + "\n")
                self._proc.stdin.flush()
                line = self._read_line_with_timeout()
            except (BrokenPipeError, OSError) as exc:
                raise LabelerUnavailable(str(exc)) from exc
        if not line:
            raise LabelerUnavailable("labeler closed its output stream")
        try:
            body = json.loads(line)
        except ValueError as exc:
            raise ProtocolViolation(f"non-JSON response line: {exc}") from exc
        if "error" in body:
            raise LabelerUnavailable(body["error"])
        return body

    def _read_line_with_timeout(self) -> str:
        result: list[str] = []

        def reader():
            result.append(self._proc.stdout.readline())

        t = threading.Thread(target=reader, daemon=True)
        t.start()
        t.join(self.timeout)
        if t.is_alive():
            raise LabelerTimeout(f"no response within {self.timeout}s")
        return result[0] if result else ""

    def close(self) -> None:
        if self._proc.poll() is None:
            try:
                self._proc.stdin.close()
            except OSError:
                pass
            try:
                self._proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                self._proc.kill()


def open_labeler(endpoint: str, timeout: float = DEFAULT_TIMEOUT):
    """HTTP URL -> HttpLabeler, anything else -> subprocess command."""
    if endpoint.startswith(("http://", "https://")):
        return HttpLabeler(endpoint, timeout)
    return SubprocessLabeler(endpoint, timeout)


def query_labels(
    handle,
    task: str,
    context: str,
    page_id: str,
    nodes,
    allowed_labels: set[str],
) -> list[tuple[XPath, str]]:
    """Send one request, validate the response against it."""
    payload = {
        "task": task,
        "context": context,
        "page_id": page_id,
        "nodes": [
            {"xpath": str(xp), "tag": tag, "text": text} for xp, tag, text in nodes
        ],
    }
    body = handle.request(payload)
    if "labels" not in body or not isinstance(body["labels"], list):
        raise ProtocolViolation("response lacks a labels list")
    known = {str(xp) for xp, _, _ in nodes}
    out: list[tuple[XPath, str]] = []
    for item in body["labels"]:
        xp_str, label = item.get("xpath"), item.get("label")
        if label not in allowed_labels:
            raise ProtocolViolation(f"unknown label {label!r}")
        if xp_str not in known:
            raise ProtocolViolation(f"xpath {xp_str!r} was not in the request")
        out.append((XPath.parse(xp_str), label))
    return out
