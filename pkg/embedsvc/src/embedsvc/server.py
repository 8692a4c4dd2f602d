"""TCP service speaking the retrieval engine's remote-encoder protocol.

Newline-delimited JSON, one request in flight per connection, any number
of concurrent connections:

  -> {"op":"hello"}                                  <- {"op":"hello","dim":D}
  -> {"op":"encode","query":q,"text":t}              <- {"op":"vec","v":[...]}
  -> {"op":"encode_batch","query":q,"texts":[t,..]}  <- {"op":"vecs","vs":[[..],..]}
  bad request                                        <- {"op":"err","msg":"..."}

Malformed input produces an err reply and keeps the connection open. When
the passage side exceeds the configured token budget it is truncated and
the reply carries an optional "truncated" field (true, or a list of flags
for batches). All floats are finite decimal literals.
"""

from __future__ import annotations

import argparse
import json
import socketserver
import sys
import threading
from dataclasses import dataclass

from .encoder import make_backend


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 7101
    model: str = "hashed"  # or "transformers:<local path>"
    dim: int = 64  # hashed backend only; transformers declares its own
    max_len: int = 256  # passage-side token budget


def _vector_payload(vec) -> list[float]:
    out = [float(x) for x in vec]
    if not all(x == x and abs(x) != float("inf") for x in out):
        raise ValueError("backend produced non-finite values")
    return out


class _Handler(socketserver.StreamRequestHandler):
    def handle(self):
        backend = self.server.backend  # type: ignore[attr-defined]
        for raw in self.rfile:
            try:
                reply = self._dispatch(backend, raw)
            except Exception as exc:  # never kill the connection on bad input
                reply = {"op": "err", "msg": f"{type(exc).__name__}: {exc}"}
            self.wfile.write((json.dumps(reply, allow_nan=False) + "\n").encode("utf-8"))

    def _dispatch(self, backend, raw: bytes) -> dict:
        try:
            req = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            return {"op": "err", "msg": f"malformed request: {exc}"}
        if not isinstance(req, dict):
            return {"op": "err", "msg": "malformed request: expected a JSON object"}
        op = req.get("op")
        if op == "hello":
            return {"op": "hello", "dim": backend.dim}
        if op == "encode":
            query, text = req.get("query"), req.get("text")
            if not isinstance(query, str) or not isinstance(text, str):
                return {"op": "err", "msg": "encode needs string fields 'query' and 'text'"}
            enc = backend.encode(query, text)
            reply = {"op": "vec", "v": _vector_payload(enc.vector)}
            if enc.truncated:
                reply["truncated"] = True
            return reply
        if op == "encode_batch":
            query, texts = req.get("query"), req.get("texts")
            if not isinstance(query, str) or not isinstance(texts, list) or not all(
                isinstance(t, str) for t in texts
            ):
                return {
                    "op": "err",
                    "msg": "encode_batch needs string 'query' and list-of-strings 'texts'",
                }
            encs = [backend.encode(query, t) for t in texts]
            reply = {"op": "vecs", "vs": [_vector_payload(e.vector) for e in encs]}
            if any(e.truncated for e in encs):
                reply["truncated"] = [e.truncated for e in encs]
            return reply
        return {"op": "err", "msg": f"unknown op: {op!r}"}


class EmbedServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, config: ServiceConfig):
        self.config = config
        self.backend = make_backend(config.model, config.dim, config.max_len)
        super().__init__((config.host, config.port), _Handler)

    @property
    def endpoint(self) -> str:
        host, port = self.server_address[:2]
        return f"{host}:{port}"


def serve_background(config: ServiceConfig) -> EmbedServer:
    """Start in a daemon thread; returns the bound server (port resolved)."""
    server = EmbedServer(config)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="embedsvc", description=__doc__)
    parser.add_argument("--host", default="127.0.0.1", help="bind address (default: 127.0.0.1)")
    parser.add_argument("--port", type=int, default=7101, help="bind port, 0 = ephemeral (default: 7101)")
    parser.add_argument(
        "--model", default="hashed",
        help="'hashed' or 'transformers:<local model path>' (default: hashed)",
    )
    parser.add_argument("--dim", type=int, default=64, help="hashed backend dimension (default: 64)")
    parser.add_argument(
        "--max-len", type=int, default=256,
        help="passage-side token budget before truncation (default: 256)",
    )
    args = parser.parse_args(argv)
    config = ServiceConfig(
        host=args.host, port=args.port, model=args.model, dim=args.dim, max_len=args.max_len
    )
    server = EmbedServer(config)
    print(f"embedsvc listening on {server.endpoint} "
          f"(model={server.backend.model_id}, dim={server.backend.dim})", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
