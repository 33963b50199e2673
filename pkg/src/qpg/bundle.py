"""Named operator bundles: a directory holding one JSON file per operator and
a ``manifest.json`` listing ``{name, file}`` pairs."""
from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Mapping

from .laurent import LaurentOperator, OperatorFormatError, load, save

MANIFEST = "manifest.json"


class BundleError(RuntimeError):
    pass


def _filename(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]", "_", name) + ".json"


def save_bundle(path, generators: Mapping[str, LaurentOperator]) -> Path:
    """Write ``generators`` under ``path`` (created if needed); returns the manifest path."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    entries = []
    used = set()
    for name, op in generators.items():
        fname = _filename(name)
        if fname in used:
            raise BundleError(f"entry names collide on file {fname!r}")
        used.add(fname)
        save(op, root / fname)
        entries.append({"name": name, "file": fname})
    manifest = root / MANIFEST
    manifest.write_text(json.dumps({"name": root.name, "entries": entries}, indent=1) + "\n")
    return manifest


def load_bundle(path) -> dict[str, LaurentOperator]:
    """Read a bundle back, in manifest order."""
    root = Path(path)
    manifest = root / MANIFEST
    if not manifest.is_file():
        raise BundleError(f"bundle {root} has no {MANIFEST}")
    try:
        data = json.loads(manifest.read_text())
        entries = data["entries"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise BundleError(f"corrupt manifest {manifest}: {exc}") from exc
    out = {}
    for k, entry in enumerate(entries):
        try:
            name, fname = entry["name"], entry["file"]
        except (KeyError, TypeError) as exc:
            raise BundleError(f"manifest entry {k} lacks name/file") from exc
        target = root / fname
        if not target.is_file():
            raise BundleError(f"bundle entry {name!r}: file {fname!r} is missing")
        try:
            out[name] = load(target)
        except (OperatorFormatError, json.JSONDecodeError) as exc:
            raise BundleError(f"bundle entry {name!r}: {exc}") from exc
    return out
