"""Client/server transport: length-prefixed canonical JSON over TCP.

Every message is one frame: a 4-byte big-endian length, then a UTF-8
JSON document with sorted keys and no whitespace.  Canonical bytes make
answers comparable bit for bit with offline computation.  The server is
intentionally blind: a wire query carries only (q, k, model, g), never
the demand, and the connection serves exactly one request.
"""

from __future__ import annotations

import json
import os
import socket
import socketserver
import struct
import threading
from typing import Any

from .gf import PrimeField, is_prime
from .matrix import matrix_from_lists
from .protocols import Answer, Dataset, Query

__all__ = [
    "FrameError",
    "RemoteError",
    "AnswerServer",
    "max_frame_size",
    "canonical_json_bytes",
    "encode_frame",
    "decode_frame",
    "validate_wire",
    "wire_query",
    "wire_answer",
    "query_from_wire",
    "answer_for_wire",
    "serve",
    "request",
    "request_wire",
    "DEFAULT_TIMEOUT",
]

_HEADER = struct.Struct("!I")
DEFAULT_MAX_FRAME = 64 * 1024 * 1024
MAX_FRAME_ENV = "PLT_MAX_FRAME"
DEFAULT_TIMEOUT = 30.0

ERR_OVERSIZE = "oversize_frame"
ERR_INCOMPLETE = "incomplete_frame"
ERR_MALFORMED = "malformed_json"
ERR_SCHEMA = "schema_violation"
ERR_TRAILING = "trailing_data"
ERR_FIELD = "field_mismatch"
ERR_SHAPE = "shape_mismatch"
ERR_INTERNAL = "internal_error"


class FrameError(ValueError):
    """A frame that cannot be accepted, tagged with a stable error code."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


class RemoteError(RuntimeError):
    """The server answered with an error message."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


def max_frame_size() -> int:
    """Frame size limit; override with the PLT_MAX_FRAME variable."""
    raw = os.environ.get(MAX_FRAME_ENV)
    if raw is None:
        return DEFAULT_MAX_FRAME
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{MAX_FRAME_ENV} must be an integer, got {raw!r}")
    if value < 8:
        raise ValueError(f"{MAX_FRAME_ENV} too small: {value}")
    return value


def canonical_json_bytes(obj: Any) -> bytes:
    """The one serialization: sorted keys, no whitespace, UTF-8."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("utf-8")


def _require_keys(obj: dict, keys: set[str]) -> None:
    if set(obj) != keys:
        raise FrameError(ERR_SCHEMA, f"message keys {sorted(obj)} != {sorted(keys)}")


def _check_int_grid(rows: Any, width: int | None, upper: int | None, name: str) -> None:
    if not isinstance(rows, list) or not rows:
        raise FrameError(ERR_SCHEMA, f"{name} must be a non-empty list of rows")
    w = width if width is not None else (len(rows[0]) if isinstance(rows[0], list) else None)
    for row in rows:
        if not isinstance(row, list) or len(row) != w:
            raise FrameError(ERR_SCHEMA, f"{name} rows must all have length {w}")
        for v in row:
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise FrameError(ERR_SCHEMA, f"{name} entries must be non-negative ints")
            if upper is not None and v >= upper:
                raise FrameError(ERR_SCHEMA, f"{name} entry {v} not below q")


def validate_wire(obj: Any) -> None:
    """Schema check for the three message types; FrameError on violation."""
    if not isinstance(obj, dict):
        raise FrameError(ERR_SCHEMA, "message must be a JSON object")
    kind = obj.get("type")
    if kind == "query":
        _require_keys(obj, {"type", "version", "q", "k", "model", "g"})
        if obj["version"] != 1:
            raise FrameError(ERR_SCHEMA, f"unsupported version {obj['version']!r}")
        q = obj["q"]
        if not isinstance(q, int) or isinstance(q, bool) or not is_prime(q):
            raise FrameError(ERR_SCHEMA, f"q must be prime, got {q!r}")
        k = obj["k"]
        if not isinstance(k, int) or isinstance(k, bool) or k < 1:
            raise FrameError(ERR_SCHEMA, f"k must be a positive int, got {k!r}")
        if obj["model"] not in ("I", "II"):
            raise FrameError(ERR_SCHEMA, f"unknown model {obj['model']!r}")
        _check_int_grid(obj["g"], k, q, "g")
    elif kind == "answer":
        _require_keys(obj, {"type", "version", "y"})
        if obj["version"] != 1:
            raise FrameError(ERR_SCHEMA, f"unsupported version {obj['version']!r}")
        _check_int_grid(obj["y"], None, None, "y")
    elif kind == "error":
        _require_keys(obj, {"type", "version", "code", "message"})
        if obj["version"] != 1:
            raise FrameError(ERR_SCHEMA, f"unsupported version {obj['version']!r}")
        if not isinstance(obj["code"], str) or not isinstance(obj["message"], str):
            raise FrameError(ERR_SCHEMA, "error code and message must be strings")
    else:
        raise FrameError(ERR_SCHEMA, f"unknown message type {kind!r}")


def encode_frame(obj: Any, max_frame: int | None = None) -> bytes:
    """Validate, serialize canonically, and prefix with the length."""
    validate_wire(obj)
    payload = canonical_json_bytes(obj)
    limit = max_frame if max_frame is not None else max_frame_size()
    if len(payload) > limit:
        raise FrameError(ERR_OVERSIZE, f"payload of {len(payload)} bytes exceeds {limit}")
    return _HEADER.pack(len(payload)) + payload


def _parse_payload(payload: bytes) -> dict:
    try:
        obj = json.loads(payload.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FrameError(ERR_MALFORMED, str(exc))
    validate_wire(obj)
    return obj


def decode_frame(data: bytes, max_frame: int | None = None) -> dict:
    """Inverse of encode_frame on a complete byte string."""
    limit = max_frame if max_frame is not None else max_frame_size()
    if len(data) < _HEADER.size:
        raise FrameError(ERR_INCOMPLETE, f"{len(data)} bytes is shorter than a header")
    (declared,) = _HEADER.unpack(data[: _HEADER.size])
    if declared > limit:
        raise FrameError(ERR_OVERSIZE, f"declared {declared} bytes exceeds {limit}")
    body = data[_HEADER.size :]
    if len(body) < declared:
        raise FrameError(ERR_INCOMPLETE, f"frame declares {declared} bytes, has {len(body)}")
    if len(body) > declared:
        raise FrameError(ERR_TRAILING, f"{len(body) - declared} bytes after the frame")
    return _parse_payload(body)


def _recv_exact(sock: socket.socket, n: int) -> bytes:
    chunks = []
    got = 0
    while got < n:
        chunk = sock.recv(min(n - got, 1 << 16))
        if not chunk:
            raise FrameError(ERR_INCOMPLETE, f"connection closed after {got} of {n} bytes")
        chunks.append(chunk)
        got += len(chunk)
    return b"".join(chunks)


def read_frame(sock: socket.socket, max_frame: int | None = None) -> dict:
    """Read one complete frame from a socket."""
    limit = max_frame if max_frame is not None else max_frame_size()
    (declared,) = _HEADER.unpack(_recv_exact(sock, _HEADER.size))
    if declared > limit:
        raise FrameError(ERR_OVERSIZE, f"declared {declared} bytes exceeds {limit}")
    return _parse_payload(_recv_exact(sock, declared))


def wire_query(query: Query) -> dict:
    """Wire form of a query: exactly what the server is allowed to see."""
    return {
        "type": "query",
        "version": 1,
        "q": query.g.field.q,
        "k": query.k,
        "model": query.model,
        "g": query.g.to_lists(),
    }


def wire_answer(answer: Answer) -> dict:
    return {"type": "answer", "version": 1, "y": answer.y.to_lists()}


def _wire_error(code: str, message: str) -> dict:
    # error replies must stay deliverable under any frame limit
    return {"type": "error", "version": 1, "code": code, "message": message[:1000]}


def query_from_wire(obj: dict) -> Query:
    """Client-side reconstruction; d and l are unknown off the wire."""
    validate_wire(obj)
    if obj["type"] != "query":
        raise FrameError(ERR_SCHEMA, f"expected a query, got {obj['type']!r}")
    field = PrimeField(obj["q"])
    g = matrix_from_lists(field, obj["g"], cols=obj["k"])
    return Query(g=g, k=obj["k"], model=obj["model"], protocol="wire")


def answer_for_wire(obj: dict, dataset: Dataset) -> dict:
    """Answer a validated wire query against a dataset.

    Shared by the server handler and the offline answering path, so both
    produce identical bytes.  Raises FrameError with field_mismatch or
    shape_mismatch when the query does not fit the dataset.
    """
    validate_wire(obj)
    if obj["type"] != "query":
        raise FrameError(ERR_SCHEMA, f"expected a query, got {obj['type']!r}")
    if obj["q"] != dataset.field.q:
        raise FrameError(ERR_FIELD, f"query over GF({obj['q']}), dataset over GF({dataset.field.q})")
    if obj["k"] != dataset.k:
        raise FrameError(ERR_SHAPE, f"query expects k={obj['k']}, dataset has {dataset.k} rows")
    g = matrix_from_lists(dataset.field, obj["g"], cols=dataset.k)
    return wire_answer(Answer(y=g @ dataset.x))


class _Handler(socketserver.BaseRequestHandler):
    def handle(self):
        server: "_TcpServer" = self.server  # type: ignore[assignment]
        try:
            try:
                obj = read_frame(self.request, server.max_frame)
                reply = answer_for_wire(obj, server.dataset)
            except FrameError as exc:
                reply = _wire_error(exc.code, exc.message)
            except Exception as exc:  # never leak a traceback to the peer
                reply = _wire_error(ERR_INTERNAL, str(exc))
            # a truncated error reply fits even when max_frame is tiny
            self.request.sendall(encode_frame(reply, max(server.max_frame, 4096)))
        except OSError:
            pass  # peer vanished; nothing to report to


class _TcpServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, address, dataset: Dataset, max_frame: int):
        self.dataset = dataset
        self.max_frame = max_frame
        super().__init__(address, _Handler)


class AnswerServer:
    """A running answer server; use as a context manager in tests."""

    def __init__(self, dataset: Dataset, host: str = "127.0.0.1", port: int = 0,
                 max_frame: int | None = None):
        limit = max_frame if max_frame is not None else max_frame_size()
        self._server = _TcpServer((host, port), dataset, limit)
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._started = False

    @property
    def address(self) -> tuple[str, int]:
        return self._server.server_address[:2]

    def start(self) -> "AnswerServer":
        if not self._started:
            self._started = True
            self._thread.start()
        return self

    def serve_forever(self) -> None:
        """Run in the calling thread until shutdown or interrupt."""
        self._server.serve_forever()

    def shutdown(self) -> None:
        self._server.shutdown()
        self._server.server_close()

    def __enter__(self) -> "AnswerServer":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.shutdown()


def _parse_endpoint(endpoint) -> tuple[str, int]:
    if isinstance(endpoint, str):
        host, sep, port = endpoint.rpartition(":")
        if not sep or not port.isdigit():
            raise ValueError(f"endpoint must look like host:port, got {endpoint!r}")
        return (host or "127.0.0.1", int(port))
    host, port = endpoint
    return (host, int(port))


def serve(dataset: Dataset, endpoint=("127.0.0.1", 0), max_frame: int | None = None) -> AnswerServer:
    """Bind and start an answer server; returns the running handle."""
    host, port = _parse_endpoint(endpoint)
    return AnswerServer(dataset, host, port, max_frame).start()


def request_wire(endpoint, obj: dict, timeout: float = DEFAULT_TIMEOUT) -> dict:
    """Send one wire query object, return the validated reply object.

    Raises RemoteError when the server reports an error, FrameError on a
    malformed reply, and OSError (including timeouts) on transport trouble.
    """
    addr = _parse_endpoint(endpoint)
    frame = encode_frame(obj)
    with socket.create_connection(addr, timeout=timeout) as sock:
        sock.settimeout(timeout)
        sock.sendall(frame)
        reply = read_frame(sock)
    if reply["type"] == "error":
        raise RemoteError(reply["code"], reply["message"])
    if reply["type"] != "answer":
        raise FrameError(ERR_SCHEMA, f"expected an answer, got {reply['type']!r}")
    if len(reply["y"]) != len(obj["g"]):
        raise FrameError(
            ERR_SCHEMA, f"answer has {len(reply['y'])} rows for a {len(obj['g'])}-row query"
        )
    return reply


def request(endpoint, query: Query, timeout: float = DEFAULT_TIMEOUT) -> Answer:
    """request_wire for a Query object, decoding the reply into an Answer."""
    reply = request_wire(endpoint, wire_query(query), timeout)
    try:
        matrix = matrix_from_lists(query.g.field, reply["y"])
    except ValueError as exc:
        raise FrameError(ERR_SCHEMA, f"answer entries invalid: {exc}")
    return Answer(y=matrix)
