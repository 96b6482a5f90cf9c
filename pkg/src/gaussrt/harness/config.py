"""Experiment configuration and JSON report plumbing."""
import json
import zlib
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from ..errors import ValidationError

__all__ = ["ExperimentConfig", "to_jsonable", "write_report", "MAX_TOTAL_MODES"]

MAX_TOTAL_MODES = 10
ANALYTIC_THEORIES = ("nonclassicality", "ppt", "steering")
SDP_THEORIES = ("separability", "separability_simplified")
MAIN_THEORIES = ("nonclassicality", "ppt", "steering", "separability")


@dataclass
class ExperimentConfig:
    """Knobs shared by the suites; every field has a usable default.

    ``theory`` is a theory name or ``"all"`` (the four main theories).
    ``source``/``target`` describe states for the no-go suite as
    ``{"kind": "tmsv", "r": 0.3}``.  ``copies`` is the largest copy count;
    ``None`` picks 4 for SDP-backed theories and 8 for analytic ones.
    """

    theory: str = "all"
    samples: int = None
    seed: int = 20240611
    tol: float = 1e-6
    copies: int = None
    channels: int = None
    source: dict = field(default_factory=lambda: {"kind": "tmsv", "r": 0.3})
    target: dict = field(default_factory=lambda: {"kind": "tmsv", "r": 0.8})
    params: list = field(default_factory=list)

    def __post_init__(self):
        if self.copies is not None and self.copies < 1:
            raise ValidationError("copies must be at least 1")
        if self.tol <= 0:
            raise ValidationError("tol must be positive")

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"config is not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    def theories(self, default=MAIN_THEORIES):
        if self.theory == "all":
            return tuple(default)
        return (self.theory,)

    def rng(self, *stream):
        """Independent deterministic stream per ``(seed, *stream)``."""
        return np.random.default_rng([self.seed, *[_stream_id(s) for s in stream]])

    def max_copies(self, theory, source_modes):
        """Copy cap: 8 for analytic theories, 4 for SDP-backed ones.  The
        10-mode bound only constrains SDP-backed theories."""
        if theory in ANALYTIC_THEORIES:
            return self.copies or 8
        cap = self.copies or 4
        return max(1, min(cap, MAX_TOTAL_MODES // max(1, source_modes)))

    def to_dict(self):
        return asdict(self)


def _stream_id(s):
    if isinstance(s, (int, np.integer)):
        return int(s)
    # stable across runs, unlike hash()
    return zlib.crc32(str(s).encode())


def to_jsonable(obj):
    """Convert numpy values (including complex matrices) for ``json.dump``."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return {"real": obj.real.tolist(), "imag": obj.imag.tolist()}
        return obj.tolist()
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, complex):
        return {"real": obj.real, "imag": obj.imag}
    return obj


def write_report(report, path):
    with open(path, "w") as fh:
        json.dump(to_jsonable(report), fh, indent=2)
        fh.write("\n")
