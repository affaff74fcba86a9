"""Named example sequences.

The names below are a stable public contract (the CLI accepts them wherever a
sequence is expected).  Each entry carries the modes it is known to satisfy;
``p_quasi_cauchy`` is ``"all"``, ``"even"`` (only even gaps) or ``"none"``.

=================  =========================================  =====================================
name               x_n                                        known behaviour
=================  =========================================  =====================================
alt_sign           (-1)^n                                     2-quasi-Cauchy, not quasi-Cauchy
naturals           n                                          no mode holds
reciprocals        1/n                                        convergent to 0
sqrt_n             sqrt(n)                                    quasi-Cauchy, not slowly oscillating
harmonic_partial   H_n = sum_{k<=n} 1/k                       slowly oscillating, not Cauchy
log_n              ln n                                       slowly oscillating, not Cauchy
log_log_n          ln ln (n+2)                                slowly oscillating, not Cauchy
weighted_harmonic  sum_{k<=n} H_k / k                         quasi-Cauchy, not slowly oscillating
square_indicator   1 if n is a perfect square else 0          statistically convergent to 0
sin_n              sin n                                      bounded, not quasi-Cauchy
sin_sqrt_n         sin(sqrt n)                                bounded, quasi-Cauchy
cos_log_n          cos(ln n)                                  bounded, slowly oscillating
=================  =========================================  =====================================

``log_log_n`` is shifted by two so that every term is finite.
"""

from __future__ import annotations

import threading

import numpy as np

from .errors import UnknownCatalogName
from .sequences import RealSequence

__all__ = ["CATALOG_NAMES", "catalog_lookup", "is_perfect_square"]


def is_perfect_square(k: np.ndarray) -> np.ndarray:
    """Exact perfect-square test for positive int64 indices."""
    k = np.asarray(k, dtype=np.int64)
    r = np.floor(np.sqrt(k.astype(np.float64))).astype(np.int64)
    # float sqrt can be off by one for large k; compare by division to avoid int64 overflow
    r = np.maximum(r, 1)
    r = np.where(k // r < r, r - 1, r)
    r = np.where(k // (r + 1) >= r + 1, r + 1, r)
    return (k % r == 0) & (k // r == r)


def _props(cauchy, so, qc, pqc, bounded, limit=None, stat_limit=None):
    out = {
        "cauchy": cauchy,
        "slowly_oscillating": so,
        "quasi_cauchy": qc,
        "p_quasi_cauchy": pqc,
        "bounded": bounded,
    }
    if limit is not None:
        out["limit"] = limit
    if stat_limit is not None:
        out["statistical_limit"] = stat_limit
    return out


def _harmonic():
    return RealSequence.partial_sums(
        lambda k: 1.0 / k,
        name="harmonic_partial",
        provenance="catalog",
        properties=_props(False, True, True, "all", False),
    )


def _weighted_harmonic():
    h = _get("harmonic_partial")
    return RealSequence.partial_sums(
        lambda k: h.values(k) / k,
        name="weighted_harmonic",
        provenance="catalog",
        properties=_props(False, False, True, "all", False),
    )


def _elementwise(name, func, props):
    return lambda: RealSequence(func, name=name, provenance="catalog", properties=props)


_BUILDERS = {
    "alt_sign": _elementwise(
        "alt_sign",
        lambda n: np.where(n % 2 == 0, 1.0, -1.0),
        _props(False, False, False, "even", True),
    ),
    "naturals": _elementwise(
        "naturals", lambda n: n.astype(np.float64), _props(False, False, False, "none", False)
    ),
    "reciprocals": _elementwise(
        "reciprocals", lambda n: 1.0 / n, _props(True, True, True, "all", True, limit=0.0, stat_limit=0.0)
    ),
    "sqrt_n": _elementwise(
        "sqrt_n", lambda n: np.sqrt(n.astype(np.float64)), _props(False, False, True, "all", False)
    ),
    "harmonic_partial": _harmonic,
    "log_n": _elementwise(
        "log_n", lambda n: np.log(n.astype(np.float64)), _props(False, True, True, "all", False)
    ),
    "log_log_n": _elementwise(
        "log_log_n",
        lambda n: np.log(np.log(n.astype(np.float64) + 2.0)),
        _props(False, True, True, "all", False),
    ),
    "weighted_harmonic": _weighted_harmonic,
    "square_indicator": _elementwise(
        "square_indicator",
        lambda n: is_perfect_square(n).astype(np.float64),
        _props(False, False, False, "none", True, stat_limit=0.0),
    ),
    "sin_n": _elementwise(
        "sin_n", lambda n: np.sin(n.astype(np.float64)), _props(False, False, False, "none", True)
    ),
    "sin_sqrt_n": _elementwise(
        "sin_sqrt_n",
        lambda n: np.sin(np.sqrt(n.astype(np.float64))),
        _props(False, False, True, "all", True),
    ),
    "cos_log_n": _elementwise(
        "cos_log_n",
        lambda n: np.cos(np.log(n.astype(np.float64))),
        _props(False, True, True, "all", True),
    ),
}

CATALOG_NAMES = tuple(_BUILDERS)

_cache: dict = {}
_cache_lock = threading.RLock()


def _get(name: str) -> RealSequence:
    with _cache_lock:
        seq = _cache.get(name)
        if seq is None:
            seq = _BUILDERS[name]()
            _cache[name] = seq
        return seq


def catalog_lookup(name: str) -> RealSequence:
    """The catalog sequence called ``name`` (shared, memoised instance)."""
    if name not in _BUILDERS:
        raise UnknownCatalogName(
            f"unknown catalog sequence {name!r}; known: {', '.join(CATALOG_NAMES)}"
        )
    return _get(name)
