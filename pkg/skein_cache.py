"""
skein_cache.py

Versioned on-disk cache for the CLI.

One JSON document per cache path:

    {"version": ARTIFACT_VERSION,
     "matrix": {"a": .., "b": .., "p": .., "q": ..},
     "x_table": {"m,n": "<printed solid-torus element>"},
     "reductions": {"<printed lens input>": {"path": .., "coords": [{"n","m","coeff"}]}}}

All values are canonical printed text and are reparsed on load. A version
mismatch or unreadable file resets the whole document; a different gluing
matrix resets the reductions but keeps the x-table (x values do not depend
on the lens space). Both cases emit CacheWarning.
"""
from __future__ import annotations

import json
import os
import threading
import warnings
from pathlib import Path
from typing import Dict, Optional, Tuple

from annulus_module import preload_x_table, x_table_snapshot
from lens_reduction import GluingMatrix, ReductionResult, SpanningCoordinates
from scalar import format_fraction
from skein_config import ARTIFACT_VERSION
from skein_errors import CacheWarning, SkeinError
from skein_lang import parse_annulus, parse_fraction_text, print_element

_CACHE_LOCK = threading.Lock()


def _matrix_dict(G: GluingMatrix) -> Dict[str, int]:
    return {"a": G.a, "b": G.b, "p": G.p, "q": G.q}


def _empty_document(G: GluingMatrix) -> dict:
    return {"version": ARTIFACT_VERSION, "matrix": _matrix_dict(G), "x_table": {}, "reductions": {}}


def coords_to_json(coords: SpanningCoordinates) -> list:
    """Grid coordinates as the sorted list of {"n", "m", "coeff"} records."""
    return [{"n": n, "m": m, "coeff": format_fraction(c)} for (n, m), c in coords.items()]


def coords_from_json(p: int, rows: list) -> SpanningCoordinates:
    return SpanningCoordinates(p, {(int(r["n"]), int(r["m"])): parse_fraction_text(r["coeff"]) for r in rows})


def _atomic_write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", encoding="utf-8") as f:
        json.dump(payload, f, ensure_ascii=False, indent=2, sort_keys=True)
        f.flush()
        os.fsync(f.fileno())
    os.replace(tmp, path)


class SkeinCache:
    """
    Reductions and x-table entries for one gluing matrix, backed by a JSON file.

    Usage:
        cache = SkeinCache(path, G)      # loads (or resets) the document
        hit = cache.get_reduction(text)
        cache.put_reduction(text, result)
        cache.save()                     # atomic replace
    """

    def __init__(self, path: Path, G: GluingMatrix):
        self.path = Path(path)
        self.G = G
        self.document = self._load()

    def _load(self) -> dict:
        if not self.path.exists():
            return _empty_document(self.G)
        try:
            with open(self.path, "r", encoding="utf-8") as f:
                doc = json.load(f)
        except (json.JSONDecodeError, UnicodeDecodeError, OSError) as e:
            warnings.warn(f"Cache {self.path} is unreadable ({e}); starting fresh", CacheWarning)
            return _empty_document(self.G)

        if not isinstance(doc, dict) or doc.get("version") != ARTIFACT_VERSION:
            found = doc.get("version") if isinstance(doc, dict) else None
            warnings.warn(
                f"Cache {self.path} has version {found!r}, expected {ARTIFACT_VERSION!r}; starting fresh",
                CacheWarning,
            )
            return _empty_document(self.G)

        fresh = _empty_document(self.G)
        fresh["x_table"] = dict(doc.get("x_table") or {})
        if doc.get("matrix") == _matrix_dict(self.G):
            fresh["reductions"] = dict(doc.get("reductions") or {})
        elif doc.get("reductions"):
            warnings.warn(
                f"Cache {self.path} holds reductions for {doc.get('matrix')}; dropping them for {self.G.label()}",
                CacheWarning,
            )
        self._preload(fresh["x_table"])
        return fresh

    def _preload(self, table: Dict[str, str]) -> None:
        entries = {}
        for key, text in table.items():
            try:
                m, n = (int(v) for v in key.split(","))
                entries[(m, n)] = parse_annulus(text)
            except (ValueError, SkeinError):
                warnings.warn(f"Skipping malformed x-table entry {key!r} in {self.path}", CacheWarning)
        preload_x_table(entries)

    # ── reductions ──────────────────────────────────────────────────────────

    def get_reduction(self, key: str) -> Optional[Tuple[str, SpanningCoordinates]]:
        """(path, coordinates) of a cached reduction, or None."""
        entry = self.document["reductions"].get(key)
        if entry is None:
            return None
        try:
            return entry["path"], coords_from_json(self.G.p, entry["coords"])
        except (KeyError, TypeError, ValueError, SkeinError):
            warnings.warn(f"Ignoring malformed cached reduction for {key!r}", CacheWarning)
            return None

    def put_reduction(self, key: str, result: ReductionResult) -> None:
        with _CACHE_LOCK:
            self.document["reductions"][key] = {
                "path": result.path,
                "coords": coords_to_json(result.coords),
            }

    # ── persistence ─────────────────────────────────────────────────────────

    def save(self) -> None:
        """Merge the current x memo into the document and write it atomically."""
        with _CACHE_LOCK:
            table = self.document["x_table"]
            for (m, n), value in x_table_snapshot().items():
                table.setdefault(f"{m},{n}", print_element(value))
            _atomic_write_json(self.path, self.document)
