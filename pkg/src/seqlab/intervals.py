from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["Interval"]


@dataclass(frozen=True)
class Interval:
    """A real interval; infinite endpoints are always open."""

    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi) or not lo < hi:
            raise ValueError(f"interval needs lo < hi, got ({self.lo}, {self.hi})")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if math.isinf(lo):
            object.__setattr__(self, "lo_closed", False)
        if math.isinf(hi):
            object.__setattr__(self, "hi_closed", False)

    @classmethod
    def closed(cls, lo, hi):
        return cls(lo, hi, True, True)

    @classmethod
    def open(cls, lo, hi):
        return cls(lo, hi, False, False)

    @classmethod
    def real_line(cls):
        return cls(-math.inf, math.inf, False, False)

    @classmethod
    def parse(cls, text: str) -> "Interval":
        """Parse ``"lo,hi"`` or ``"lo,hi,FLAGS"`` where FLAGS is two of ``c``/``o``.

        ``"0,1,oc"`` is (0, 1]; ``"-inf,inf"`` is the real line.  Finite
        endpoints default to closed.
        """
        parts = [p.strip() for p in text.split(",")]
        if len(parts) not in (2, 3):
            raise ValueError(f"domain must be 'lo,hi[,flags]', got {text!r}")
        lo, hi = float(parts[0]), float(parts[1])
        flags = parts[2].lower() if len(parts) == 3 else "cc"
        if len(flags) != 2 or any(f not in "co" for f in flags):
            raise ValueError(f"domain flags must be two of 'c'/'o', got {flags!r}")
        return cls(lo, hi, flags[0] == "c", flags[1] == "c")

    def __str__(self):
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{self.lo:g}, {self.hi:g}{right}"

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        lo_ok = x >= self.lo if self.lo_closed else x > self.lo
        hi_ok = x <= self.hi if self.hi_closed else x < self.hi
        return lo_ok & hi_ok

    def clip(self, x: np.ndarray) -> np.ndarray:
        """Clip into the interval, nudging off open endpoints."""
        lo = self.lo if self.lo_closed else np.nextafter(self.lo, np.inf)
        hi = self.hi if self.hi_closed else np.nextafter(self.hi, -np.inf)
        return np.clip(x, lo, hi)

    def to_json(self):
        return {
            "lo": _json_float(self.lo),
            "hi": _json_float(self.hi),
            "lo_closed": self.lo_closed,
            "hi_closed": self.hi_closed,
        }


def _json_float(v: float):
    if math.isinf(v):
        return "-inf" if v < 0 else "inf"
    return v
