from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any


@dataclass
class Certificate:
    """A replayable witness or refutation.

    ``claim`` is a short machine tag such as ``"berge-cycle"`` or
    ``"embedding"``; ``witness`` holds the JSON-safe payload a verifier needs.
    """

    claim: str
    witness: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"claim": self.claim, "witness": self.witness}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> Certificate:
        return cls(d["claim"], dict(d.get("witness", {})))

    @classmethod
    def from_json(cls, text: str) -> Certificate:
        return cls.from_dict(json.loads(text))
