"""Pair streams and the chain construction that threads them into one sequence.

Given pairs ``(xi_i, eta_i)`` in an interval with ``|xi_i - eta_i| -> 0``,
:func:`interleave_chain` builds a single sequence that is ``p``-quasi-Cauchy
and places every pair at positions ``(j - p, j)``.  Layout for pair ``i``::

    xi_i (p times), eta_i (p times), chain from eta_i towards xi_{i+1}

The chain is a uniform linear interpolation whose step ``h`` satisfies
``p * h < 1/i``, so any ``p`` consecutive chain steps move less than ``1/i``.
"""

from __future__ import annotations

import threading
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import InvalidPairStream, OutOfInterval
from .intervals import Interval
from .sequences import RealSequence, _gap

__all__ = ["PairStream", "ChainSequence", "interleave_chain"]

PairFunc = Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]
PairExtender = Callable[[int, int], Tuple[np.ndarray, np.ndarray]]


class PairStream:
    """Lazily generated pairs ``i -> (xi_i, eta_i)`` for ``i >= 1``.

    Pass ``func`` for a closed-form stream (vectorised over an index array)
    or ``extender(have, want)`` returning the pairs ``have+1..want`` for
    streams that must be produced in order, such as a seeded search.
    Extenders are always called on whole multiples of ``batch`` so that the
    generated pairs do not depend on the access pattern.
    """

    def __init__(
        self,
        func: Optional[PairFunc] = None,
        *,
        extender: Optional[PairExtender] = None,
        name: str = "pairs",
        batch: int = 256,
    ):
        if (func is None) == (extender is None):
            raise TypeError("exactly one of func or extender must be given")
        self._func = func
        self._extender = extender
        self.name = name
        self.batch = int(batch)
        self._xi = np.empty(0)
        self._eta = np.empty(0)
        self._lock = threading.Lock()

    @classmethod
    def from_arrays(cls, xi, eta, name="pairs") -> "PairStream":
        """A stream whose first pairs are given; asking for more is an error."""
        xi = np.asarray(xi, dtype=np.float64)
        eta = np.asarray(eta, dtype=np.float64)
        if xi.shape != eta.shape or xi.ndim != 1:
            raise ValueError("xi and eta must be 1-d arrays of equal length")

        def ext(have, want):
            if want > xi.size:
                raise InvalidPairStream(f"{name}: only {xi.size} pairs available, {want} requested")
            return xi[have:want], eta[have:want]

        stream = cls(extender=ext, name=name, batch=1)
        return stream

    def __len__(self):
        return self._xi.size

    def ensure(self, count: int) -> None:
        with self._lock:
            have = self._xi.size
            if count <= have:
                return
            if self._func is not None:
                i = np.arange(have + 1, count + 1, dtype=np.int64)
                xi, eta = self._func(i)
            else:
                want = -(-count // self.batch) * self.batch
                xi, eta = self._extender(have, want)
            xi = np.ravel(np.asarray(xi, dtype=np.float64))
            eta = np.ravel(np.asarray(eta, dtype=np.float64))
            if xi.shape != eta.shape:
                raise InvalidPairStream(f"{self.name}: xi and eta batches differ in length")
            self._xi = np.concatenate((self._xi, xi))
            self._eta = np.concatenate((self._eta, eta))

    def pairs(self, count: int) -> Tuple[np.ndarray, np.ndarray]:
        """The first ``count`` pairs as two arrays."""
        self.ensure(count)
        return self._xi[:count].copy(), self._eta[:count].copy()

    def gap_bound(self, count: int) -> np.ndarray:
        """Exact ``|xi_i - eta_i|`` for ``i = 1..count``."""
        xi, eta = self.pairs(count)
        return np.abs(xi - eta)


def _check_shrinking(gaps: np.ndarray, name: str) -> None:
    half = gaps.size // 2
    if half == 0:
        return
    head, tail = gaps[:half].max(), gaps[half:].max()
    if tail == 0.0:
        return
    if not tail < head:
        raise InvalidPairStream(
            f"{name}: pair gaps do not shrink (max {head:.3g} over first half, "
            f"{tail:.3g} over second half of {gaps.size} checked pairs)"
        )


class ChainSequence(RealSequence):
    """The sequence produced by :func:`interleave_chain`.

    ``pair_positions(count)[i-1]`` is the index ``j`` with
    ``(x_{j-p}, x_j) = (xi_i, eta_i)``.
    """

    def __init__(self, pairs: PairStream, p: int, host: Interval, name: str):
        self.pairs = pairs
        self.p = p
        self.host = host
        super().__init__(tail=self._tail, name=name)

    def _chain_steps(self, xi: np.ndarray, eta: np.ndarray) -> np.ndarray:
        """Number of steps ``m_i`` from ``eta_i`` to ``xi_{i+1}``, one per pair but the last."""
        seg = np.abs(xi[1:] - eta[:-1])
        i = np.arange(1, seg.size + 1, dtype=np.float64)
        # p * (seg / m) < 1 / i; the small inflation keeps ties strict after rounding
        return np.floor(self.p * seg * i * (1.0 + 1e-9)).astype(np.int64) + 1

    def _layout(self, n: int):
        """Pairs and chain step counts covering at least ``n`` terms."""
        count = max(2, len(self.pairs))
        while True:
            xi, eta = self.pairs.pairs(count)
            m = self._chain_steps(xi, eta)
            seg = 2 * self.p + (m - 1)
            if seg.sum() >= n:
                return xi, eta, m
            count *= 2

    def _tail(self, prev: np.ndarray, n: int) -> np.ndarray:
        return self._materialise(n)[prev.shape[0]:n]

    def _materialise(self, n: int) -> np.ndarray:
        p = self.p
        xi, eta, m = self._layout(n)
        seg = 2 * p + (m - 1)
        ends = np.cumsum(seg)
        k = int(np.searchsorted(ends, n)) + 1  # segments touching positions < n
        m, seg = m[:k], seg[:k]
        starts = np.concatenate(([0], ends[: k - 1]))
        out = np.empty(n, dtype=np.float64)
        block = np.arange(p)
        for offset, vals in ((0, xi[:k]), (p, eta[:k])):
            pos = (starts[:, None] + offset + block).ravel()
            keep = pos < n
            out[pos[keep]] = np.repeat(vals, p)[keep]
        # chain interior, clipped to the positions actually requested
        interior = np.clip(n - (starts + 2 * p), 0, m - 1)
        owner = np.repeat(np.arange(k), interior)
        if owner.size:
            first = np.concatenate(([0], np.cumsum(interior)[:-1]))
            t = np.arange(owner.size) - first[owner] + 1
            a, b = eta[owner], xi[owner + 1]
            pos = starts[owner] + 2 * p + t - 1
            out[pos] = a + (b - a) * (t / m[owner])
        return out

    def pair_positions(self, count: int) -> np.ndarray:
        """1-based index ``j`` of ``eta_i`` for pairs ``i = 1..count``."""
        self.pairs.ensure(count + 1)
        xi, eta = self.pairs.pairs(count + 1)
        m = self._chain_steps(xi, eta)
        seg = 2 * self.p + (m - 1)
        starts = np.concatenate(([0], np.cumsum(seg)))[:count]
        # xi_i occupies 1-based starts+1..starts+p, eta_i the next p slots
        return starts + self.p + 1


def interleave_chain(
    pairs: PairStream, gap, host: Interval, check_pairs: int = 64
) -> ChainSequence:
    """Thread ``pairs`` into one ``p``-quasi-Cauchy sequence inside ``host``.

    The first ``check_pairs`` pairs are validated: all members must lie in
    ``host`` and the gaps must shrink.
    """
    p = _gap(gap)
    xi, eta = pairs.pairs(check_pairs)
    for label, arr in (("xi", xi), ("eta", eta)):
        inside = host.contains(arr)
        if not inside.all():
            i = int(np.argmin(inside)) + 1
            raise OutOfInterval(f"{pairs.name}: {label}_{i} = {arr[i - 1]!r} is outside {host}")
    _check_shrinking(np.abs(xi - eta), pairs.name)
    return ChainSequence(pairs, p, host, name=f"chain_{p}({pairs.name})")
