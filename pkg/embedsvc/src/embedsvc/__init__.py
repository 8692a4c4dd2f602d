"""Embedding sidecar for the entity-hop retrieval engine.

Serves query-conditioned passage vectors over newline-delimited JSON TCP.
The default backend is a deterministic hashed projection (no model
weights needed); a transformers backend can wrap a locally available
pretrained model.
"""

__version__ = "0.1.0"

from .encoder import HashedProjectionEncoder, make_backend
from .server import EmbedServer, ServiceConfig, serve_background
