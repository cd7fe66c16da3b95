"""Run manifests: each CLI invocation records its command line, seeds, tool
version, wall clock, and the content digests of every input and output file.
Replaying the stored command must reproduce the output digests bit-exactly.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


@dataclass
class RunManifest:
    command: list[str]
    tool_version: str
    seeds: dict = field(default_factory=dict)
    wall_clock_s: float = 0.0
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)

    def to_json(self) -> str:
        doc = {
            "format": 1,
            "command": self.command,
            "tool_version": self.tool_version,
            "seeds": self.seeds,
            "wall_clock_s": round(self.wall_clock_s, 3),
            "inputs": self.inputs,
            "outputs": self.outputs,
        }
        return json.dumps(doc, indent=2) + "\n"

    @staticmethod
    def from_json(text: str) -> "RunManifest":
        doc = json.loads(text)
        return RunManifest(
            command=list(doc["command"]),
            tool_version=doc.get("tool_version", ""),
            seeds=doc.get("seeds", {}),
            wall_clock_s=doc.get("wall_clock_s", 0.0),
            inputs=doc.get("inputs", {}),
            outputs=doc.get("outputs", {}),
        )


def write_manifest(path, manifest: RunManifest) -> None:
    with open(path, "w") as fh:
        fh.write(manifest.to_json())


def load_manifest(path) -> RunManifest:
    with open(path) as fh:
        return RunManifest.from_json(fh.read())
