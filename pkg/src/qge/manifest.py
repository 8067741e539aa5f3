"""Run manifests: every CLI output is reproducible from its manifest.

The digest covers command, parameters, seeds, tool version and input file
digests; the timestamp is recorded but excluded from the digest, so
identical runs emit byte-identical tables.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

__all__ = ["RunManifest"]


def _sha256_file(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass(frozen=True)
class RunManifest:
    command: str
    params: dict
    seeds: tuple[int, ...]
    version: str
    input_digests: dict
    timestamp: str

    @classmethod
    def build(
        cls,
        command: str,
        params: dict,
        seeds=(),
        inputs: dict | None = None,
    ) -> "RunManifest":
        from . import __version__

        digests = {name: _sha256_file(path) for name, path in (inputs or {}).items()}
        return cls(
            command=command,
            params={k: params[k] for k in sorted(params)},
            seeds=tuple(int(s) for s in seeds),
            version=__version__,
            input_digests=digests,
            timestamp=datetime.now(timezone.utc).isoformat(),
        )

    @property
    def digest(self) -> str:
        payload = {
            "command": self.command,
            "params": self.params,
            "seeds": list(self.seeds),
            "version": self.version,
            "input_digests": self.input_digests,
        }
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def to_json_dict(self) -> dict:
        return {
            "command": self.command,
            "params": self.params,
            "seeds": list(self.seeds),
            "version": self.version,
            "input_digests": self.input_digests,
            "timestamp": self.timestamp,
            "digest": self.digest,
        }
