"""Append-only JSON-lines result cache keyed by (hypergraph digest,
operation, parameters). Corrupt lines are dropped and rebuilt on demand:
every cached value is re-derivable.
"""

from __future__ import annotations

import hashlib
import json
import time
from pathlib import Path

from .hypergraph import Hypergraph

CODE_VERSION = "0.1.0"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def hypergraph_digest(H: Hypergraph) -> str:
    return hashlib.sha256(canonical_json(H.to_json_dict()).encode()).hexdigest()


class CacheMismatchError(RuntimeError):
    """A cached value differs from its recomputation (self-check mode)."""


class ResultCache:
    """In-memory map backed by an append-only JSON-lines file. ``path=None``
    keeps the cache purely in memory."""

    def __init__(self, path: str | Path | None = None) -> None:
        self.path = Path(path) if path is not None else None
        self._entries: dict[str, object] = {}
        self.hits = 0
        self.misses = 0
        if self.path is not None and self.path.exists():
            for line in self.path.read_text().splitlines():
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                    key = canonical_json(record["key"])
                    self._entries[key] = record["value"]
                except (json.JSONDecodeError, KeyError, TypeError):
                    continue  # corrupt line: drop it, values are re-derivable

    @staticmethod
    def make_key(digest: str, op: str, params) -> dict:
        return {"digest": digest, "op": op, "params": params}

    def get(self, key: dict):
        return self._entries.get(canonical_json(key))

    def put(self, key: dict, value) -> None:
        flat = canonical_json(key)
        self._entries[flat] = value
        if self.path is not None:
            record = {
                "key": key,
                "value": value,
                "ts": time.time(),
                "version": CODE_VERSION,
            }
            with self.path.open("a") as fh:
                fh.write(canonical_json(record) + "\n")

    def merge_from(self, other: ResultCache) -> None:
        for flat, value in other._entries.items():
            if flat not in self._entries:
                self._entries[flat] = value
                if self.path is not None:
                    record = {
                        "key": json.loads(flat),
                        "value": value,
                        "ts": time.time(),
                        "version": CODE_VERSION,
                    }
                    with self.path.open("a") as fh:
                        fh.write(canonical_json(record) + "\n")


def cached_value(
    cache: ResultCache | None,
    H: Hypergraph,
    op: str,
    params,
    compute,
    self_check: bool = False,
):
    """Return the cached JSON value for (H, op, params), computing and
    recording it on a miss. With ``self_check`` a hit is recomputed and must
    be byte-identical."""
    if cache is None:
        return compute()
    key = ResultCache.make_key(hypergraph_digest(H), op, params)
    hit = cache.get(key)
    if hit is not None:
        cache.hits += 1
        if self_check:
            fresh = compute()
            if canonical_json(fresh) != canonical_json(hit):
                raise CacheMismatchError(f"cache self-check failed for {key}")
        return hit
    cache.misses += 1
    value = compute()
    cache.put(key, value)
    return value
