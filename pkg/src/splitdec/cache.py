"""Checksummed on-disk cache for scheme and split-decomposition artifacts.

Layout: each artifact set lives in a directory named by the SHA-256 of
its key tuple.  The directory holds the payload files plus a
``MANIFEST.json`` recording the key and a SHA-256 digest per file.  On
load every digest is re-verified; any mismatch, missing file, or
unreadable manifest raises :class:`~splitdec.errors.CacheCorrupt`, and
callers are expected to fall back to a clean recompute.

Two key families are used:

* split keys — ``(graph spec, base vertex, ordering, backend,
  scheme fingerprint)``.  The q-sign is deliberately absent: the grid
  subspaces are built from the idempotent filtrations, which do not see
  the choice of square root.  The scheme fingerprint (a digest of the
  abstract eigenvalue/idempotent data) guards the rare case where the
  two square roots reorder the eigenvalues;
* q-tetrahedron keys — the same tuple with the q-sign appended, since
  the eight weighted-sum matrices carry powers of q.

Stored matrices reload bit-identically in exact mode: the text format
is canonical, so ``store -> load -> store`` is a fixed point.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

from .errors import CacheCorrupt
from .field import GroundField
from .matrix import Mat
from .split import GRID_LABELS, SplitGrid, SplitSystem

ENV_CACHE_DIR = "DRG_CACHE_DIR"

_MANIFEST = "MANIFEST.json"


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def scheme_fingerprint(scheme) -> str:
    """Digest of the abstract spectral data (q-sign independent)."""
    payload = json.dumps({
        "b": scheme.field.b,
        "theta": [t.encode() for t in scheme.theta],
        "gamma": [[v.encode() for v in row] for row in scheme.gamma],
        "ordering": list(scheme.ordering),
        "m": list(scheme.m),
    }, sort_keys=True, separators=(",", ":"))
    return _digest(payload.encode("ascii"))[:16]


def split_key(graph_spec: str, base_vertex: int, ordering, backend: str,
              fingerprint: str) -> tuple:
    return ("split", graph_spec, str(base_vertex),
            ",".join(str(v) for v in ordering), backend, fingerprint)


def qtet_key(graph_spec: str, base_vertex: int, ordering, backend: str,
             fingerprint: str, qsign: int) -> tuple:
    return split_key(graph_spec, base_vertex, ordering, backend,
                     fingerprint) + ("qtet", f"qsign{qsign:+d}")


class Cache:
    """A directory of checksummed artifact sets."""

    def __init__(self, root=None):
        if root is None:
            root = os.environ.get(ENV_CACHE_DIR)
        self.root = Path(root) if root is not None else None

    @property
    def enabled(self) -> bool:
        return self.root is not None

    def _dir(self, key: tuple) -> Path:
        tag = _digest("\x1f".join(key).encode("utf-8"))
        return self.root / tag

    def store(self, key: tuple, files: dict) -> Path:
        """Write named payload files plus the manifest; returns the dir."""
        d = self._dir(key)
        d.mkdir(parents=True, exist_ok=True)
        digests = {}
        for name, text in sorted(files.items()):
            data = text.encode("ascii") if isinstance(text, str) else text
            (d / name).write_bytes(data)
            digests[name] = _digest(data)
        manifest = {"key": list(key), "files": digests}
        (d / _MANIFEST).write_text(
            json.dumps(manifest, sort_keys=True, indent=1) + "\n",
            encoding="ascii",
        )
        return d

    def load(self, key: tuple):
        """Return {name: bytes} for a stored key, or None when absent.

        Raises CacheCorrupt when the directory exists but fails
        verification (bad manifest, missing file, checksum mismatch).
        """
        d = self._dir(key)
        if not d.is_dir():
            return None
        try:
            manifest = json.loads((d / _MANIFEST).read_text(encoding="ascii"))
            digests = manifest["files"]
            stored_key = manifest["key"]
        except (OSError, ValueError, KeyError) as exc:
            raise CacheCorrupt(f"unreadable manifest under {d}") from exc
        if list(key) != stored_key:
            raise CacheCorrupt(f"key collision under {d}")
        out = {}
        for name, want in sorted(digests.items()):
            try:
                data = (d / name).read_bytes()
            except OSError as exc:
                raise CacheCorrupt(f"missing cache file {name} under {d}") from exc
            if _digest(data) != want:
                raise CacheCorrupt(f"checksum mismatch on {name} under {d}")
            out[name] = data
        return out


# ---------------------------------------------------------------------------
# split-system payloads
# ---------------------------------------------------------------------------


def _retag(M: Mat, field: GroundField) -> Mat:
    """Re-home a parsed matrix into the session field (same b)."""
    if M.field is field:
        return M
    if M.field.b != field.b:
        raise CacheCorrupt(
            f"cached matrix over b={M.field.b}, session uses b={field.b}"
        )
    return Mat(field, M.rows, M.cols,
               [field.scalar(x.a0, x.a1) for x in M._e])


def split_payload(system: SplitSystem) -> dict:
    """Serialize all four grids: C, C^{-1}, and tilde pivot rows."""
    files = {}
    meta = {"n": system.n, "D": system.D, "b": system.field.b}
    for label in GRID_LABELS:
        g = system.grid(label)
        files[f"{label}_C.txt"] = g.C.encode()
        files[f"{label}_Cinv.txt"] = g.Cinv.encode()
        meta[label] = {
            "pivot_rows": [
                [list(g.tilde[i][j].pivot_rows) for j in range(g.D + 1)]
                for i in range(g.D + 1)
            ],
        }
    files["grids.json"] = json.dumps(meta, sort_keys=True,
                                     separators=(",", ":")) + "\n"
    return files


def split_from_payload(scheme, dual, files: dict) -> SplitSystem:
    """Rebuild a SplitSystem from a cache payload."""
    try:
        meta = json.loads(files["grids.json"].decode("ascii"))
    except (KeyError, ValueError) as exc:
        raise CacheCorrupt("bad grids.json in split payload") from exc
    field = scheme.field
    if meta.get("n") != scheme.n or meta.get("D") != scheme.D \
            or meta.get("b") != field.b:
        raise CacheCorrupt("split payload does not match the scheme")
    grids = {}
    for label in GRID_LABELS:
        try:
            C = _retag(Mat.parse(files[f"{label}_C.txt"].decode("ascii")),
                       field)
            cinv = _retag(Mat.parse(files[f"{label}_Cinv.txt"].decode("ascii")),
                          field)
            piv = meta[label]["pivot_rows"]
        except (KeyError, ValueError) as exc:
            raise CacheCorrupt(f"bad grid payload for {label!r}") from exc
        grids[label] = SplitGrid.from_parts(
            field, scheme.n, scheme.D, label[0], label[1], C, piv, cinv=cinv
        )
    return SplitSystem.from_grids(scheme, dual, grids)


def qtet_payload(sys) -> dict:
    """Serialize the eight q-tetrahedron matrices."""
    return {f"{name}.txt": getattr(sys, name).encode()
            for name in ("A", "Astar", "B", "Bstar", "K", "Kstar",
                         "Phi", "Psi")}
