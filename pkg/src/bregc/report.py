"""JSON run reports written by the command-line tool."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

SCHEMA_VERSION = 1


def plain(value):
    """Convert numpy containers and scalars to JSON-native Python values."""
    if isinstance(value, dict):
        return {k: plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return plain(value.tolist())
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


@dataclass
class RunReport:
    command: str
    n: int
    d: int
    generator: str
    side: str
    centroid: Any = None
    lambda_star: Optional[float] = None
    information_radius: Optional[float] = None
    symmetrized_average: Optional[float] = None
    bounds: Optional[list] = None
    bisector_gap: Optional[float] = None
    iterations: int = 0
    wall_time_ms: float = 0.0
    converged: bool = True
    extra: Dict[str, Any] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "converged": self.converged,
            "input": {"n": self.n, "d": self.d, "generator": self.generator, "side": self.side},
            "centroid": plain(self.centroid),
            "lambda_star": plain(self.lambda_star),
            "information_radius": plain(self.information_radius),
            "symmetrized_average": plain(self.symmetrized_average),
            "bounds": plain(self.bounds),
            "bisector_gap": plain(self.bisector_gap),
            "iterations": int(self.iterations),
            "wall_time_ms": float(self.wall_time_ms),
            "extra": plain(self.extra),
        }

    def to_json(self) -> str:
        # float repr is the shortest string that round-trips
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "RunReport":
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {data.get('schema_version')!r}")
        inp = data["input"]
        return cls(
            command=data["command"],
            n=inp["n"],
            d=inp["d"],
            generator=inp["generator"],
            side=inp["side"],
            centroid=data["centroid"],
            lambda_star=data["lambda_star"],
            information_radius=data["information_radius"],
            symmetrized_average=data["symmetrized_average"],
            bounds=data["bounds"],
            bisector_gap=data["bisector_gap"],
            iterations=data["iterations"],
            wall_time_ms=data["wall_time_ms"],
            converged=data["converged"],
            extra=data["extra"],
        )

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls.from_dict(json.loads(text))
