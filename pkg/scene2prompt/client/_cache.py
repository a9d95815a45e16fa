# -*- coding: utf-8 -*-
from json import JSONDecodeError, dumps, loads
from pathlib import Path
from threading import Lock

from scene2prompt.utils import content_hash, get_logger, write_if_changed


class ResponseCache:
    """Responses on disk at {root}/cache/{sha256(request body)}.json.

    Safe to share between threads.
    """

    def __init__(self, root):
        self.root = Path(root) / "cache"
        self._lock = Lock()

    def key(self, body: bytes) -> str:
        return content_hash(body)

    def path(self, body: bytes) -> Path:
        return self.root / f"{self.key(body)}.json"

    def get(self, body: bytes):
        path = self.path(body)
        with self._lock:
            if not path.exists(): return None
            try:
                return loads(path.read_text(encoding="utf-8"))
            except (JSONDecodeError, UnicodeDecodeError, OSError) as ex:
                get_logger().warning(f"Ignoring unreadable cache entry {path.name}: {ex}")
                return None

    def put(self, body: bytes, response: dict) -> None:
        with self._lock:
            write_if_changed(self.path(body), dumps(response, sort_keys=True, ensure_ascii=False))
