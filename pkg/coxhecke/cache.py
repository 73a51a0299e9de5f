"""
On-disk normal-form cache, one JSON file per Coxeter matrix.

Files are named by the matrix's content hash and carry a checksum of
their entries. Anything that does not check out is deleted and ignored.
"""

import hashlib
import json
import threading
from pathlib import Path
from typing import Optional

from coxhecke.config import settings, logger
from coxhecke.coxeter import CoxeterSystem
from coxhecke.storage import write_json

_cache_lock = threading.Lock()

CACHE_FORMAT = "nf-cache/v1"


def cache_path(sys: CoxeterSystem, cache_dir: Optional[Path] = None) -> Path:
    return Path(cache_dir or settings.CACHE_DIR) / f"{sys.matrix.content_hash()}.json"


def _checksum(entries) -> str:
    payload = json.dumps(entries, separators=(",", ":"), sort_keys=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _discard(path: Path, reason: str) -> None:
    logger.warning(f"Discarding normal-form cache {path.name}: {reason}")
    try:
        path.unlink()
    except OSError:
        pass


def load_cache(sys: CoxeterSystem, cache_dir: Optional[Path] = None) -> int:
    """Load cached closures into `sys`; returns how many were loaded."""
    path = cache_path(sys, cache_dir)
    with _cache_lock:
        if not path.exists():
            logger.debug(f"No normal-form cache at {path}")
            return 0
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except OSError as e:
            logger.warning(f"Normal-form cache unreadable, continuing uncached: {e}")
            return 0
        except json.JSONDecodeError as e:
            _discard(path, f"malformed JSON ({e.msg})")
            return 0

        try:
            if data.get("format") != CACHE_FORMAT:
                raise ValueError("unknown format")
            if data.get("matrix_hash") != sys.matrix.content_hash():
                raise ValueError("matrix hash mismatch")
            entries = data["entries"]
            if data.get("checksum") != _checksum(entries):
                raise ValueError("checksum mismatch")
            loaded = sys.import_closures(entries)
        except (AttributeError, KeyError, TypeError, ValueError) as e:
            _discard(path, str(e))
            return 0

    logger.info(f"Loaded {loaded} normal-form closures from {path.name}")
    return loaded


def store_cache(sys: CoxeterSystem, cache_dir: Optional[Path] = None) -> bool:
    entries = sys.export_closures()
    payload = {
        "format": CACHE_FORMAT,
        "matrix_hash": sys.matrix.content_hash(),
        "checksum": _checksum(entries),
        "entries": entries,
    }
    path = cache_path(sys, cache_dir)
    try:
        with _cache_lock:
            write_json(path, payload)
    except OSError as e:
        logger.warning(f"Could not write normal-form cache: {e}")
        return False
    logger.debug(f"Stored {len(entries)} closures to {path.name}")
    return True
