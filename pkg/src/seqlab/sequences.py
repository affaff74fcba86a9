"""Lazily evaluated real sequences indexed from 1, and the forward-difference operator.

A :class:`RealSequence` wraps one of two kinds of evaluator:

* an *elementwise* evaluator, a vectorised map from an int64 index array to a
  float64 array (``x_n = sqrt(n)``), or
* a *tail* evaluator, which extends a known prefix ``x_1..x_m`` to
  ``x_1..x_N``.  Partial sums use this so that scanning a prefix costs one
  running sum instead of ``N`` separate sums.

Either way the first ``m`` computed terms are memoised, so repeated prefix
scans by the testers are cheap and every index always evaluates to the same
bits.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import BudgetExceeded, EvaluationError, EvaluationOverflow

__all__ = [
    "DEFAULT_BUDGET",
    "DifferenceGap",
    "RealSequence",
    "delta",
    "eval_prefix",
    "get_budget",
    "repeat_each",
    "seq_sum",
    "seq_product",
]

DEFAULT_BUDGET = 10**6

ElementwiseFunc = Callable[[np.ndarray], np.ndarray]
TailFunc = Callable[[np.ndarray, int], np.ndarray]


def get_budget() -> int:
    """Maximum prefix length; ``SEQLAB_BUDGET`` overrides the default of 10**6."""
    raw = os.environ.get("SEQLAB_BUDGET")
    if raw is None or raw.strip() == "":
        return DEFAULT_BUDGET
    value = int(raw)
    if value < 1:
        raise ValueError(f"SEQLAB_BUDGET must be a positive integer, got {raw!r}")
    return value


@dataclass(frozen=True)
class DifferenceGap:
    """Gap ``p >= 1`` of the forward difference ``x_{n+p} - x_n``."""

    p: int

    def __post_init__(self):
        if isinstance(self.p, bool) or not isinstance(self.p, (int, np.integer)) or self.p < 1:
            raise ValueError(f"difference gap must be a positive integer, got {self.p!r}")


def _gap(p) -> int:
    if isinstance(p, DifferenceGap):
        return int(p.p)
    return int(DifferenceGap(p).p)


def _check_finite(values: np.ndarray, idx: np.ndarray, name: str) -> np.ndarray:
    bad = ~np.isfinite(values)
    if bad.any():
        pos = int(np.argmax(bad))
        n = int(idx[pos])
        raise EvaluationOverflow(
            f"{name}: term {n} is not a finite float ({values[pos]!r})", index=n
        )
    return values


class RealSequence:
    """A real sequence ``x_1, x_2, ...`` with a name and known-property metadata.

    ``properties`` is free-form metadata; the catalog records the modes a
    sequence is known to satisfy (``{"cauchy": False, ...}``), its ordinary
    ``limit`` when convergent and whether it is ``bounded``.
    """

    def __init__(
        self,
        func: Optional[ElementwiseFunc] = None,
        *,
        name: str,
        provenance: str = "constructed",
        properties: Optional[dict] = None,
        tail: Optional[TailFunc] = None,
        length: Optional[int] = None,
    ):
        if (func is None) == (tail is None):
            raise TypeError("exactly one of func or tail must be given")
        if provenance not in ("catalog", "parsed", "constructed"):
            raise ValueError(f"unknown provenance {provenance!r}")
        self.name = name
        self.provenance = provenance
        self.properties = dict(properties or {})
        self.length = None if length is None else int(length)
        self._func = func
        self._tail = tail
        self._lock = threading.Lock()
        self._buf = np.empty(0, dtype=np.float64)
        self._size = 0

    def __repr__(self):
        return f"RealSequence({self.name!r})"

    @property
    def is_finite_length(self) -> bool:
        return self.length is not None

    # -- evaluation -------------------------------------------------------

    def _extend(self, n: int) -> None:
        with self._lock:
            if n <= self._size:
                return
            old = self._size
            if self._tail is not None:
                new = np.asarray(self._tail(self._buf[:old], n), dtype=np.float64)
            else:
                idx = np.arange(old + 1, n + 1, dtype=np.int64)
                new = np.asarray(self._func(idx), dtype=np.float64)
                new = np.broadcast_to(new, idx.shape)
            if new.shape != (n - old,):
                raise EvaluationError(
                    f"{self.name}: evaluator returned {new.shape[0]} terms, expected {n - old}"
                )
            _check_finite(new, np.arange(old + 1, n + 1), self.name)
            if n > self._buf.shape[0]:
                cap = max(n, 2 * self._buf.shape[0])
                buf = np.empty(cap, dtype=np.float64)
                buf[:old] = self._buf[:old]
                self._buf = buf
            self._buf[old:n] = new
            self._size = n

    def _check_indices(self, idx: np.ndarray) -> None:
        if idx.size == 0:
            return
        if idx.min() < 1:
            raise IndexError(f"{self.name}: sequences are indexed from 1, got {int(idx.min())}")
        if self.length is not None and idx.max() > self.length:
            raise EvaluationError(
                f"{self.name}: index {int(idx.max())} beyond finite length {self.length}"
            )

    def values(self, idx) -> np.ndarray:
        """Terms at the given 1-based indices, as a float64 array."""
        idx = np.asarray(idx, dtype=np.int64)
        self._check_indices(idx)
        if idx.size == 0:
            return np.empty(idx.shape, dtype=np.float64)
        top = int(idx.max())
        if top <= self._size:
            return self._buf[idx - 1]
        if self._func is not None:
            out = np.asarray(self._func(idx), dtype=np.float64)
            out = np.broadcast_to(out, idx.shape).copy()
            return _check_finite(out, idx.ravel(), self.name)
        self._extend(top)
        return self._buf[idx - 1]

    def __call__(self, n: int) -> float:
        return float(self.values(np.array([n]))[0])

    def prefix(self, n: int) -> np.ndarray:
        """``[x_1, ..., x_n]`` as a read-only array (no budget check)."""
        n = int(n)
        if n < 0:
            raise ValueError("prefix length must be non-negative")
        if self.length is not None and n > self.length:
            raise EvaluationError(f"{self.name}: prefix {n} beyond finite length {self.length}")
        self._extend(n)
        view = self._buf[:n]
        view.flags.writeable = False
        return view

    def clear_cache(self) -> None:
        """Drop memoised terms; they are recomputed on demand."""
        with self._lock:
            self._buf = np.empty(0, dtype=np.float64)
            self._size = 0

    # -- combinators ------------------------------------------------------

    def _combine(self, other, op, symbol):
        if isinstance(other, RealSequence):
            length = _min_length(self.length, other.length)
            return RealSequence(
                lambda idx: op(self.values(idx), other.values(idx)),
                name=f"({self.name} {symbol} {other.name})",
                length=length,
            )
        c = float(other)
        return RealSequence(
            lambda idx: op(self.values(idx), c),
            name=f"({self.name} {symbol} {c!r})",
            length=self.length,
        )

    def __add__(self, other):
        return self._combine(other, np.add, "+")

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, np.subtract, "-")

    def __mul__(self, other):
        return self._combine(other, np.multiply, "*")

    __rmul__ = __mul__

    def __neg__(self):
        return RealSequence(
            lambda idx: -self.values(idx), name=f"-{self.name}", length=self.length
        )

    def affine(self, scale: float, shift: float, name: Optional[str] = None) -> "RealSequence":
        """``shift + scale * x_n``."""
        scale, shift = float(scale), float(shift)
        return RealSequence(
            lambda idx: shift + scale * self.values(idx),
            name=name or f"{shift!r}+{scale!r}*{self.name}",
            length=self.length,
            properties={k: v for k, v in self.properties.items() if k != "limit"},
        )

    def map(self, f: Callable[[np.ndarray], np.ndarray], name: str) -> "RealSequence":
        """Image sequence ``f(x_n)`` for a vectorised ``f``."""
        return RealSequence(lambda idx: f(self.values(idx)), name=name, length=self.length)

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, c: float, name: Optional[str] = None) -> "RealSequence":
        c = float(c)
        return cls(
            lambda idx: np.full(idx.shape, c),
            name=name or f"const({c!r})",
            properties={"limit": c, "bounded": True, "cauchy": True},
        )

    @classmethod
    def from_array(cls, values, name: str, provenance: str = "constructed") -> "RealSequence":
        """A finite-length sequence backed by an explicit array of terms."""
        data = np.array(values, dtype=np.float64)
        _check_finite(data, np.arange(1, data.size + 1), name)
        data.flags.writeable = False
        return cls(lambda idx: data[idx - 1], name=name, provenance=provenance, length=data.size)

    @classmethod
    def partial_sums(cls, term: ElementwiseFunc, name: str, **kwargs) -> "RealSequence":
        """``x_n = sum_{k<=n} term(k)``, accumulated left to right and memoised."""

        def tail(prev: np.ndarray, n: int) -> np.ndarray:
            start = prev.shape[0]
            k = np.arange(start + 1, n + 1, dtype=np.int64)
            terms = np.asarray(term(k), dtype=np.float64)
            if start:
                terms = np.concatenate(([prev[-1]], terms))
                return np.cumsum(terms)[1:]
            return np.cumsum(terms)

        return cls(tail=tail, name=name, **kwargs)


def _min_length(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def eval_prefix(s: RealSequence, n_max: int, budget: Optional[int] = None) -> np.ndarray:
    """``[s(1), ..., s(n_max)]`` subject to the evaluation budget."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    limit = get_budget() if budget is None else budget
    if n_max > limit:
        raise BudgetExceeded(f"prefix of {n_max} terms exceeds budget {limit}")
    return s.prefix(n_max)


def delta(s: RealSequence, gap) -> RealSequence:
    """Forward difference with gap ``p``: ``result(n) = s(n+p) - s(n)``."""
    p = _gap(gap)
    length = None if s.length is None else max(s.length - p, 0)
    return RealSequence(
        lambda idx: s.values(idx + p) - s.values(idx),
        name=f"Δ_{p}({s.name})",
        length=length,
    )


def repeat_each(s: RealSequence, p: int) -> RealSequence:
    """Each term of ``s`` repeated ``p`` consecutive times.

    ``result((k-1)p + j) = s(k)`` for ``1 <= j <= p``.
    """
    p = _gap(p)
    length = None if s.length is None else s.length * p
    return RealSequence(
        lambda idx: s.values((idx - 1) // p + 1),
        name=f"repeat_{p}({s.name})",
        length=length,
        properties={k: v for k, v in s.properties.items() if k in ("bounded", "limit")},
    )


def seq_sum(s: RealSequence, t: RealSequence) -> RealSequence:
    return s + t


def seq_product(s: RealSequence, t: RealSequence) -> RealSequence:
    return s * t
