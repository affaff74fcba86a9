"""Finite-prefix testers for convergence modes.

Every tester scans the prefix of a sequence at a ladder of *scales* (prefix
lengths) and measures one statistic per scale, for example the largest
``|x_{n+p} - x_n|`` over the tail window ``S/2 <= n <= S - p``.  Asymptotic
properties cannot be decided from a prefix, so the result is trichotomous:

``holds``
    the statistic is below ``epsilon`` at the last scale and is not growing,
    or it decays by at least ``decision_margin`` at every step of the ladder
    and already clears the coarsest tolerance;
``fails``
    the statistic stays at or above some ``epsilon`` at every scale and does
    not decay; a witness (index or index pair) is returned and can be
    replayed with :func:`replay_witness`;
``inconclusive``
    anything else.

The tail windows are: ``[S/2, S-p]`` for gap-``p`` differences, ``[sqrt S, S]``
for the Cauchy oscillation (a window starting at ``S/2`` cannot see the
slow divergence of ``ln ln n``), and ``n in [sqrt S, S/lambda]`` for the
slowly-oscillating window maxima ``max_{n<k<=[lambda n]} |x_k - x_n|``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InvalidLacunarySchedule
from .sequences import RealSequence, _gap, delta, get_budget

__all__ = [
    "Outcome",
    "ModeVerdict",
    "ToleranceSchedule",
    "LacunarySchedule",
    "HierarchyReport",
    "test_p_quasi_cauchy",
    "test_cauchy",
    "test_slowly_oscillating",
    "estimate_statistical_limit",
    "test_lacunary_statistical",
    "test_stat_quasi_cauchy",
    "test_lacunary_stat_quasi_cauchy",
    "hierarchy_report",
    "deviation_counts",
    "block_densities",
    "replay_witness",
    "DEFAULT_LAMBDA_GRID",
]

DEFAULT_LAMBDA_GRID = (2.0, 1.5, 1.1, 1.01)
SCHEMA_VERSION = "v1"


class Outcome(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ToleranceSchedule:
    """Tolerances, prefix lengths and the relative margin used in trend decisions."""

    epsilons: Tuple[float, ...] = (1e-1, 1e-2, 1e-3)
    scales: Tuple[int, ...] = (10**3, 10**4, 10**5, 10**6)
    decision_margin: float = 0.05

    def __post_init__(self):
        eps = tuple(float(e) for e in self.epsilons)
        scales = tuple(int(s) for s in self.scales)
        if not eps or not scales:
            raise ValueError("epsilons and scales must be non-empty")
        if any(e <= 0 for e in eps) or any(a <= b for a, b in zip(eps, eps[1:])):
            raise ValueError(f"epsilons must be positive and strictly decreasing: {eps}")
        if scales[0] < 1 or any(a >= b for a, b in zip(scales, scales[1:])):
            raise ValueError(f"scales must be positive and strictly increasing: {scales}")
        if not self.decision_margin > 0:
            raise ValueError("decision_margin must be positive")
        object.__setattr__(self, "epsilons", eps)
        object.__setattr__(self, "scales", scales)

    def usable_scales(self, limit: Optional[int] = None) -> List[int]:
        """Scales not exceeding ``limit`` (and the budget); ``[limit]`` if none fit."""
        cap = get_budget() if limit is None else min(limit, get_budget())
        out = [s for s in self.scales if s <= cap]
        if not out:
            out = [cap]
        return out

    def with_epsilons(self, epsilons) -> "ToleranceSchedule":
        return ToleranceSchedule(tuple(epsilons), self.scales, self.decision_margin)

    def with_scales(self, scales) -> "ToleranceSchedule":
        return ToleranceSchedule(self.epsilons, tuple(scales), self.decision_margin)


@dataclass
class ModeVerdict:
    """Outcome of one tester on one sequence."""

    mode: str
    outcome: Outcome
    epsilon: float
    scale: int
    witness: Optional[Tuple[int, ...]] = None
    trend: List[Tuple[int, float]] = field(default_factory=list)
    params: dict = field(default_factory=dict)
    subject: str = ""
    note: str = ""

    def __post_init__(self):
        self.outcome = Outcome(self.outcome)
        scales = [s for s, _ in self.trend]
        if any(a >= b for a, b in zip(scales, scales[1:])):
            raise ValueError("trend scales must strictly increase")
        if self.outcome is Outcome.FAILS and self.witness is None:
            raise ValueError("a failing verdict needs a witness")

    @property
    def holds(self) -> bool:
        return self.outcome is Outcome.HOLDS

    @property
    def fails(self) -> bool:
        return self.outcome is Outcome.FAILS

    @property
    def label(self) -> str:
        short = {
            "Cauchy": "Cauchy",
            "QuasiCauchy": "QC",
            "SlowlyOscillating": "SO",
            "StatQuasiCauchy": "stat-QC",
            "LacunaryStatQuasiCauchy": "lacunary-stat-QC",
            "StatConvergent": "stat-conv",
            "LacunaryStatConvergent": "lacunary-stat-conv",
        }
        if self.mode == "PQuasiCauchy":
            return f"{self.params['p']}-QC"
        return short.get(self.mode, self.mode)

    def to_json(self) -> dict:
        return {
            "version": SCHEMA_VERSION,
            "mode": self.mode,
            "params": dict(self.params),
            "subject": self.subject,
            "outcome": self.outcome.value,
            "epsilon": self.epsilon,
            "scale": self.scale,
            "witness": None if self.witness is None else list(self.witness),
            "trend": [[int(s), float(v)] for s, v in self.trend],
            "note": self.note,
        }


# -- shared decision rules ---------------------------------------------------


def _nonincreasing(stats, margin) -> bool:
    return all(b <= a * (1.0 + margin) for a, b in zip(stats, stats[1:]))


def _decaying(stats, margin) -> bool:
    """Every step shrinks by at least the margin (or hits zero); needs two scales."""
    if len(stats) < 2:
        return False
    return all(b == 0.0 or b <= a * (1.0 - margin) for a, b in zip(stats, stats[1:]))


def _persistent(stats, eps, margin) -> bool:
    return all(v >= eps for v in stats) and stats[-1] >= (1.0 - margin) * stats[0]


def _decide_tail(stats, epsilons, margin):
    """Decision for a tail-supremum statistic; returns ``(outcome, epsilon)``."""
    failing = [e for e in epsilons if _persistent(stats, e, margin)]
    if failing:
        return Outcome.FAILS, max(failing)
    trend_ok = _nonincreasing(stats, margin)
    holding = [e for e in epsilons if stats[-1] < e and trend_ok]
    if len(holding) == len(epsilons):
        return Outcome.HOLDS, min(epsilons)
    if holding and holding[0] == epsilons[0] and _decaying(stats, margin):
        return Outcome.HOLDS, min(holding)
    undecided = [e for e in epsilons if e not in holding]
    return Outcome.INCONCLUSIVE, max(undecided)


def _decide_density(per_eps_stats, epsilons, margin):
    """Decision for densities that should tend to zero; one stats list per epsilon."""
    failing, holding = [], []
    for e, d in zip(epsilons, per_eps_stats):
        if len(d) == 1:
            if d[0] >= margin:
                failing.append(e)
            else:
                holding.append(e)
            continue
        if all(v >= margin for v in d) and d[-1] >= (1.0 - margin) * d[0]:
            failing.append(e)
        elif _nonincreasing(d, margin) and (d[-1] == 0.0 or d[-1] <= (1.0 - margin) * d[0]):
            holding.append(e)
    if failing:
        return Outcome.FAILS, max(failing)
    if len(holding) == len(epsilons):
        return Outcome.HOLDS, min(epsilons)
    undecided = [e for e in epsilons if e not in holding]
    return Outcome.INCONCLUSIVE, max(undecided)


def _scales_for(s: RealSequence, sched: ToleranceSchedule, reserve: int = 0) -> List[int]:
    limit = None if s.length is None else s.length - reserve
    if limit is not None and limit < 1:
        raise ValueError(f"{s.name}: sequence too short ({s.length} terms)")
    return sched.usable_scales(limit)


# -- gap-p differences and the Cauchy oscillation ------------------------------


def test_p_quasi_cauchy(
    s: RealSequence, p: int = 1, sched: Optional[ToleranceSchedule] = None
) -> ModeVerdict:
    """Is ``x_{n+p} - x_n -> 0``?  Statistic: ``max |Δ_p x_n|`` over ``S/2 <= n <= S-p``."""
    sched = sched or ToleranceSchedule()
    p = _gap(p)
    scales = [S for S in _scales_for(s, sched) if S > p]
    if not scales:
        raise ValueError(f"{s.name}: no scale exceeds the gap {p}")
    x = s.prefix(scales[-1])
    d = np.abs(x[p:] - x[:-p])  # d[n-1] = |Δ_p x_n|
    stats, arg = [], 0
    for S in scales:
        lo = max(1, math.ceil(S / 2))
        hi = S - p
        lo = min(lo, hi)
        window = d[lo - 1 : hi]
        j = int(np.argmax(window))
        stats.append(float(window[j]))
        arg = lo + j
    outcome, eps = _decide_tail(stats, sched.epsilons, sched.decision_margin)
    mode, params = ("QuasiCauchy", {"p": 1}) if p == 1 else ("PQuasiCauchy", {"p": p})
    return ModeVerdict(
        mode=mode,
        outcome=outcome,
        epsilon=eps,
        scale=scales[-1],
        witness=(arg, arg + p) if outcome is Outcome.FAILS else None,
        trend=list(zip(scales, stats)),
        params=params,
        subject=s.name,
    )


def test_cauchy(s: RealSequence, sched: Optional[ToleranceSchedule] = None) -> ModeVerdict:
    """Statistic: ``sup |x_m - x_n|`` over ``sqrt(S) <= n < m <= S``."""
    sched = sched or ToleranceSchedule()
    scales = _scales_for(s, sched)
    x = s.prefix(scales[-1])
    stats, pair = [], (1, 1)
    for S in scales:
        lo = max(1, math.isqrt(S - 1) + 1 if S > 1 else 1)
        window = x[lo - 1 : S]
        i, j = int(np.argmin(window)), int(np.argmax(window))
        stats.append(float(window[j] - window[i]))
        pair = tuple(sorted((lo + i, lo + j)))
    outcome, eps = _decide_tail(stats, sched.epsilons, sched.decision_margin)
    return ModeVerdict(
        mode="Cauchy",
        outcome=outcome,
        epsilon=eps,
        scale=scales[-1],
        witness=pair if outcome is Outcome.FAILS else None,
        trend=list(zip(scales, stats)),
        subject=s.name,
    )


# -- slowly oscillating ---------------------------------------------------------


def _range_extrema(x: np.ndarray, left: np.ndarray, right: np.ndarray):
    """Max and min of ``x[left[q]..right[q]]`` (0-based, inclusive) for every query.

    A sparse table is built one level at a time and each query is answered
    at the level matching its length, so only two levels live at once.
    """
    left = np.asarray(left, dtype=np.int64)
    right = np.asarray(right, dtype=np.int64)
    length = right - left + 1
    if length.size and length.min() < 1:
        raise ValueError("empty range query")
    level = np.zeros(length.shape, dtype=np.int64)
    if length.size:
        level = np.floor(np.log2(length)).astype(np.int64)
        # guard against log2 rounding at exact powers of two
        level = np.where((1 << (level + 1)) <= length, level + 1, level)
        level = np.where((1 << level) > length, level - 1, level)
    qmax = np.empty(length.shape)
    qmin = np.empty(length.shape)
    tmax = x.astype(np.float64, copy=True)
    tmin = tmax.copy()
    top = int(level.max()) if level.size else 0
    for j in range(top + 1):
        if j:
            half = 1 << (j - 1)
            tmax = np.maximum(tmax[:-half], tmax[half:])
            tmin = np.minimum(tmin[:-half], tmin[half:])
        sel = np.nonzero(level == j)[0]
        if sel.size:
            a = left[sel]
            b = right[sel] - (1 << j) + 1
            qmax[sel] = np.maximum(tmax[a], tmax[b])
            qmin[sel] = np.minimum(tmin[a], tmin[b])
    return qmax, qmin


def _so_window_stats(x: np.ndarray, lam: float, scales: Sequence[int]):
    """``L(lam, S)`` and its maximising ``n`` for each scale."""
    S_max = scales[-1]
    n_top = int(math.floor(S_max / lam))
    n = np.arange(1, max(n_top, 0) + 1, dtype=np.int64)
    k_hi = np.floor(lam * n).astype(np.int64)
    k_hi = np.minimum(k_hi, S_max)
    valid = k_hi >= n + 1
    val = np.zeros(n.shape)
    if valid.any():
        nv = n[valid]
        wmax, wmin = _range_extrema(x, nv, k_hi[valid] - 1)  # 0-based [n, k_hi-1] is 1-based [n+1, k_hi]
        xn = x[nv - 1]
        val[valid] = np.maximum(wmax - xn, xn - wmin)
    out = []
    for S in scales:
        lo = math.isqrt(S)
        hi = min(int(math.floor(S / lam)), n.size)
        if hi < lo:
            out.append((0.0, lo))
            continue
        seg = val[lo - 1 : hi]
        j = int(np.argmax(seg))
        out.append((float(seg[j]), lo + j))
    return out


def test_slowly_oscillating(
    s: RealSequence,
    lambda_grid: Sequence[float] = DEFAULT_LAMBDA_GRID,
    sched: Optional[ToleranceSchedule] = None,
) -> ModeVerdict:
    """Window maxima ``max_{n < k <= [lambda n]} |x_k - x_n|`` as ``lambda -> 1+``.

    ``lambda_grid`` plays the role of ``1 + delta`` and must decrease towards 1.
    Failure needs, for some epsilon and every lambda, a violation at every
    scale that either does not shrink as lambda decreases (oscillation) or
    grows with the scale (divergence).
    """
    sched = sched or ToleranceSchedule()
    grid = [float(v) for v in lambda_grid]
    if not grid or any(v <= 1.0 for v in grid):
        raise ValueError(f"every lambda must exceed 1, got {grid}")
    if any(a <= b for a, b in zip(grid, grid[1:])):
        raise ValueError(f"lambda grid must strictly decrease, got {grid}")
    scales = _scales_for(s, sched)
    x = s.prefix(scales[-1])
    m = sched.decision_margin
    table = [_so_window_stats(x, lam, scales) for lam in grid]
    L = [[v for v, _ in row] for row in table]

    def fails_at(e):
        if not all(all(v >= e for v in row) for row in L):
            return False
        flat = all(row[-1] >= (1 - m) * row[0] for row in L) and L[-1][-1] >= (1 - m) * L[0][-1]
        growing = all(row[-1] > (1 + m) * row[0] for row in L)
        return flat or growing

    def holds_at(e):
        return any(row[-1] < e and _nonincreasing(row, m) for row in L)

    failing = [e for e in sched.epsilons if fails_at(e)]
    holding = [e for e in sched.epsilons if holds_at(e)]
    witness = None
    if failing:
        outcome, eps = Outcome.FAILS, max(failing)
        n_star = table[-1][-1][1]
        lam = grid[-1]
        k_hi = min(int(math.floor(lam * n_star)), scales[-1])
        seg = np.abs(x[n_star:k_hi] - x[n_star - 1])
        witness = (n_star, n_star + 1 + int(np.argmax(seg)))
    elif len(holding) == len(sched.epsilons):
        outcome, eps = Outcome.HOLDS, min(sched.epsilons)
    elif (
        holding
        and holding[0] == sched.epsilons[0]
        and len(grid) > 1
        and _decaying([row[-1] for row in L], m)
        and all(_nonincreasing(row, m) for row in L)
    ):
        outcome, eps = Outcome.HOLDS, min(holding)
    else:
        outcome = Outcome.INCONCLUSIVE
        eps = max(e for e in sched.epsilons if e not in holding)
    return ModeVerdict(
        mode="SlowlyOscillating",
        outcome=outcome,
        epsilon=eps,
        scale=scales[-1],
        witness=witness,
        trend=list(zip(scales, L[-1])),
        params={"lambda_grid": grid},
        subject=s.name,
    )


# -- statistical modes ----------------------------------------------------------


def deviation_counts(
    s: RealSequence, candidate: float, eps: float, scales: Sequence[int]
) -> List[int]:
    """``#{k <= S : |x_k - candidate| >= eps}`` for each scale ``S``."""
    x = s.prefix(max(scales))
    hits = np.cumsum(np.abs(x - candidate) >= eps)
    return [int(hits[S - 1]) for S in scales]


def estimate_statistical_limit(
    s: RealSequence, candidate: float, sched: Optional[ToleranceSchedule] = None
) -> ModeVerdict:
    """Is ``candidate`` the statistical limit?  Statistic: ``(1/S) #{k <= S : |x_k - l| >= eps}``."""
    sched = sched or ToleranceSchedule()
    scales = _scales_for(s, sched)
    x = s.prefix(scales[-1])
    dev = np.abs(x - float(candidate))
    per_eps = []
    for e in sched.epsilons:
        hits = np.cumsum(dev >= e)
        per_eps.append([int(hits[S - 1]) / S for S in scales])
    outcome, eps = _decide_density(per_eps, sched.epsilons, sched.decision_margin)
    witness = None
    if outcome is Outcome.FAILS:
        where = np.nonzero(dev >= eps)[0]
        witness = (int(where[-1]) + 1,)
    stats = per_eps[sched.epsilons.index(eps)]
    return ModeVerdict(
        mode="StatConvergent",
        outcome=outcome,
        epsilon=eps,
        scale=scales[-1],
        witness=witness,
        trend=list(zip(scales, stats)),
        params={"limit": float(candidate)},
        subject=s.name,
    )


class LacunarySchedule:
    """Increasing block boundaries ``0 = k_0 < k_1 < k_2 < ...``.

    Blocks are ``I_r = (k_{r-1}, k_r]`` with lengths ``h_r``.  :meth:`validate`
    checks the prefix of boundaries up to ``check_limit`` (the budget by
    default): strictly increasing, block lengths not shrinking over the later
    half, and ``min k_r / k_{r-1}`` over the later half above
    ``1 + ratio_margin`` as a liminf estimate.
    """

    MAX_CHECKED_BLOCKS = 100_000

    def __init__(
        self,
        func: Callable[[np.ndarray], np.ndarray],
        name: str,
        ratio_margin: float = 0.01,
    ):
        self._func = func
        self.name = name
        self.ratio_margin = ratio_margin

    @classmethod
    def pow2(cls) -> "LacunarySchedule":
        return cls(lambda r: np.left_shift(np.int64(1), r.astype(np.int64)), name="pow2")

    @classmethod
    def from_name(cls, name: str) -> "LacunarySchedule":
        """``"pow2"`` (k_r = 2^r), ``"linear"`` (k_r = r) or ``"powQ"`` for integer Q >= 2."""
        if name == "linear":
            return cls(lambda r: r.astype(np.int64), name="linear")
        if name.startswith("pow"):
            base = int(name[3:] or 2)
            if base < 2:
                raise ValueError(f"bad lacunary schedule {name!r}")
            return cls(lambda r: base ** r.astype(np.int64), name=f"pow{base}")
        raise ValueError(f"unknown lacunary schedule {name!r}")

    def boundaries(self, upto: int) -> np.ndarray:
        """``[k_0, k_1, ..., k_R]`` with ``k_R <= upto < k_{R+1}``."""
        out = [np.zeros(1, dtype=np.int64)]
        r0, chunk = 1, 64
        while True:
            r = np.arange(r0, r0 + chunk, dtype=np.int64)
            k = np.asarray(self._func(r), dtype=np.int64)
            over = np.nonzero(k > upto)[0]
            if over.size:
                out.append(k[: over[0]])
                break
            out.append(k)
            if r0 + chunk > self.MAX_CHECKED_BLOCKS:
                break
            r0 += chunk
            chunk *= 2
        return np.concatenate(out)

    def validate(self, check_limit: Optional[int] = None) -> None:
        k = self.boundaries(check_limit or get_budget())
        if k.size < 5:
            raise InvalidLacunarySchedule(f"{self.name}: fewer than 4 blocks below the check limit")
        h = np.diff(k)
        if (h <= 0).any():
            raise InvalidLacunarySchedule(f"{self.name}: boundaries are not strictly increasing")
        tail = slice(h.size // 2, None)
        if (np.diff(h[tail]) < 0).any() or not h[-1] > h[0]:
            raise InvalidLacunarySchedule(f"{self.name}: block lengths do not grow")
        ratios = k[2:] / k[1:-1]
        liminf = float(ratios[ratios.size // 2 :].min())
        if not liminf > 1.0 + self.ratio_margin:
            raise InvalidLacunarySchedule(
                f"{self.name}: liminf k_r/k_(r-1) estimated at {liminf:.6g}, "
                f"needs > 1 + {self.ratio_margin}"
            )


def block_densities(
    s: RealSequence, candidate: float, eps: float, theta: LacunarySchedule, upto: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Boundaries ``k_1..k_R <= upto`` and exact densities ``#{k in I_r : dev >= eps} / h_r``."""
    k = theta.boundaries(upto)
    x = s.prefix(int(k[-1]))
    hits = np.concatenate(([0], np.cumsum(np.abs(x - candidate) >= eps)))
    counts = hits[k[1:]] - hits[k[:-1]]
    return k[1:], counts / np.diff(k)


def test_lacunary_statistical(
    s: RealSequence,
    candidate: float,
    theta: LacunarySchedule,
    sched: Optional[ToleranceSchedule] = None,
) -> ModeVerdict:
    """Block densities over ``theta``; statistic at scale ``S`` is the last complete block."""
    sched = sched or ToleranceSchedule()
    theta.validate()
    scales = _scales_for(s, sched)
    per_eps = []
    k = None
    for e in sched.epsilons:
        k, dens = block_densities(s, candidate, e, theta, scales[-1])
        row = []
        for S in scales:
            last = np.nonzero(k <= S)[0]
            row.append(float(dens[last[-1]]) if last.size else 0.0)
        per_eps.append(row)
    outcome, eps = _decide_density(per_eps, sched.epsilons, sched.decision_margin)
    witness = None
    if outcome is Outcome.FAILS:
        x = s.prefix(int(k[-1]))
        where = np.nonzero(np.abs(x - candidate) >= eps)[0]
        witness = (int(where[-1]) + 1,)
    return ModeVerdict(
        mode="LacunaryStatConvergent",
        outcome=outcome,
        epsilon=eps,
        scale=scales[-1],
        witness=witness,
        trend=list(zip(scales, per_eps[sched.epsilons.index(eps)])),
        params={"limit": float(candidate), "theta": theta.name},
        subject=s.name,
    )


def test_stat_quasi_cauchy(s: RealSequence, sched: Optional[ToleranceSchedule] = None) -> ModeVerdict:
    """Statistical convergence of ``Δ_1 x`` to 0; witness ``k`` means ``|x_{k+1} - x_k| >= eps``."""
    v = estimate_statistical_limit(delta(s, 1), 0.0, sched)
    v.mode, v.params, v.subject = "StatQuasiCauchy", {}, s.name
    return v


def test_lacunary_stat_quasi_cauchy(
    s: RealSequence, theta: LacunarySchedule, sched: Optional[ToleranceSchedule] = None
) -> ModeVerdict:
    v = test_lacunary_statistical(delta(s, 1), 0.0, theta, sched)
    v.mode, v.params, v.subject = "LacunaryStatQuasiCauchy", {"theta": theta.name}, s.name
    return v


# -- witness replay -------------------------------------------------------------


def replay_witness(s: RealSequence, v: ModeVerdict) -> float:
    """Re-evaluate a failing verdict's witness; returns the violation size (``>= v.epsilon``)."""
    if v.witness is None:
        raise ValueError("verdict has no witness")
    w = v.witness
    if v.mode in ("Cauchy", "SlowlyOscillating", "QuasiCauchy", "PQuasiCauchy"):
        return abs(s(w[1]) - s(w[0]))
    if v.mode in ("StatConvergent", "LacunaryStatConvergent"):
        return abs(s(w[0]) - v.params["limit"])
    if v.mode in ("StatQuasiCauchy", "LacunaryStatQuasiCauchy"):
        return abs(s(w[0] + 1) - s(w[0]))
    raise ValueError(f"no replay rule for mode {v.mode}")


# -- hierarchy -------------------------------------------------------------------


@dataclass
class HierarchyReport:
    subject: str
    verdicts: List[ModeVerdict]
    violations: List[str]

    def __iter__(self):
        return iter(self.verdicts)

    def __getitem__(self, label: str) -> ModeVerdict:
        for v in self.verdicts:
            if v.label == label:
                return v
        raise KeyError(label)

    def summary(self) -> str:
        return ", ".join(f"{v.label}: {v.outcome.value}" for v in self.verdicts)

    def to_json(self) -> dict:
        return {
            "version": SCHEMA_VERSION,
            "subject": self.subject,
            "verdicts": [v.to_json() for v in self.verdicts],
            "violations": list(self.violations),
        }


def hierarchy_report(
    s: RealSequence,
    p_list: Sequence[int] = (1, 2),
    sched: Optional[ToleranceSchedule] = None,
    theta: Optional[LacunarySchedule] = None,
    lambda_grid: Sequence[float] = DEFAULT_LAMBDA_GRID,
) -> HierarchyReport:
    """Run every tester and check the implication chain.

    Order: Cauchy, SO, QC, p-QC for each ``p > 1`` in ``p_list``, stat-QC,
    lacunary-stat-QC.  A violation is recorded when an upstream mode holds
    while a mode it implies fails: Cauchy => SO => QC => p-QC, p-QC => (kp)-QC,
    QC => stat-QC and QC => lacunary-stat-QC.
    """
    sched = sched or ToleranceSchedule()
    theta = theta or LacunarySchedule.pow2()
    ps = sorted({_gap(p) for p in p_list} - {1})
    cauchy = test_cauchy(s, sched)
    so = test_slowly_oscillating(s, lambda_grid, sched)
    qc = test_p_quasi_cauchy(s, 1, sched)
    pqc = {p: test_p_quasi_cauchy(s, p, sched) for p in ps}
    sqc = test_stat_quasi_cauchy(s, sched)
    lsqc = test_lacunary_stat_quasi_cauchy(s, theta, sched)

    edges = [(cauchy, so), (so, qc), (qc, sqc), (qc, lsqc)]
    edges += [(qc, v) for v in pqc.values()]
    edges += [(pqc[a], pqc[b]) for a in ps for b in ps if a < b and b % a == 0]
    violations = [
        f"{up.label} holds but {down.label} fails"
        for up, down in edges
        if up.holds and down.fails
    ]
    verdicts = [cauchy, so, qc, *pqc.values(), sqc, lsqc]
    return HierarchyReport(s.name, verdicts, violations)


# public names start with "test_"; keep pytest from collecting them when imported
for _f in (
    test_p_quasi_cauchy,
    test_cauchy,
    test_slowly_oscillating,
    test_lacunary_statistical,
    test_stat_quasi_cauchy,
    test_lacunary_stat_quasi_cauchy,
):
    _f.__test__ = False
del _f
