"""On-disk JSON artifacts with a content hash; stale or corrupt entries are errors."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any, Callable, Mapping


class CacheMismatch(RuntimeError):
    """A cached artifact disagrees with its hash, its key, or a recomputation."""


def canonical(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(obj: Any) -> str:
    return hashlib.sha256(canonical(obj).encode()).hexdigest()


def write_json(path: Path, obj: Any) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(obj, sort_keys=True, indent=1) + "\n"
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text)
    tmp.replace(path)


class ArtifactCache:
    def __init__(self, root: Path):
        self.root = Path(root)

    def path(self, knot: str, what: str, tag: str) -> Path:
        return self.root / knot / f"{what}.{tag}.json"

    def load(self, knot: str, what: str, tag: str, key: Mapping) -> Any:
        """Cached payload or None; raises if the file is corrupt or keyed differently."""
        p = self.path(knot, what, tag)
        if not p.exists():
            return None
        try:
            doc = json.loads(p.read_text())
            stored_key, payload, h = doc["key"], doc["payload"], doc["hash"]
        except (ValueError, KeyError) as exc:
            raise CacheMismatch(f"{p}: unreadable cache entry ({exc})") from None
        if digest(payload) != h:
            raise CacheMismatch(f"{p}: content hash mismatch (corrupt cache)")
        if canonical(stored_key) != canonical(dict(key)):
            diff = sorted(k for k in set(stored_key) | set(key) if stored_key.get(k) != key.get(k))
            raise CacheMismatch(f"{p}: cached under a different key ({', '.join(diff)})")
        return payload

    def store(self, knot: str, what: str, tag: str, key: Mapping, payload: Any) -> None:
        write_json(self.path(knot, what, tag), {"key": dict(key), "hash": digest(payload),
                                                "payload": payload})

    def get_or_compute(self, knot: str, what: str, tag: str, key: Mapping,
                       compute: Callable[[], Any], verify: bool = True) -> Any:
        """Return the cached payload, recomputing to confirm it when ``verify`` is set."""
        cached = self.load(knot, what, tag, key)
        if cached is not None and not verify:
            return cached
        fresh = json.loads(canonical(compute()))
        if cached is not None:
            if canonical(cached) != canonical(fresh):
                raise CacheMismatch(f"{self.path(knot, what, tag)}: recomputation differs from cache")
            return cached
        self.store(knot, what, tag, key, fresh)
        return fresh
