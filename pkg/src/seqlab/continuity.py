"""Continuity probes for real functions on intervals.

The four sequential continuity types probed here, for a function ``f`` and a
gap ``p``, are

* ``(Δ_p)``: p-quasi-Cauchy inputs give p-quasi-Cauchy images;
* ``(Δ_p c)``: p-quasi-Cauchy inputs give convergent images;
* ``(c)``: convergent inputs (with limit in the domain) give convergent images;
* ``(d)``: convergent inputs give p-quasi-Cauchy images.

Each is decided on a finite generator suite with the testers of
:mod:`seqlab.modes`, so verdicts are evidence, not proofs.  Uniform continuity
is estimated independently from sampled moduli of continuity on nested
windows.  All random sampling is seeded; the default seed is
:data:`DEFAULT_SEED`.
"""

from __future__ import annotations

import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .catalog import catalog_lookup
from .chains import ChainSequence, PairStream, interleave_chain
from .errors import DomainViolation, InsufficientTerms, UnboundedEvidence
from .intervals import Interval
from .modes import (
    SCHEMA_VERSION,
    ModeVerdict,
    Outcome,
    ToleranceSchedule,
    _nonincreasing,
    test_cauchy,
    test_p_quasi_cauchy,
)
from .sequences import RealSequence, _gap, get_budget, repeat_each

__all__ = [
    "DEFAULT_SEED",
    "DEFAULT_DELTAS",
    "FunctionUnderTest",
    "ModulusEstimate",
    "WitnessSequence",
    "ContinuityReport",
    "SubsequenceWitness",
    "CompactnessVerdict",
    "probe_windows",
    "default_generators",
    "convergent_generators",
    "preserves_mode",
    "uniformity_modulus",
    "adversarial_witness",
    "classify_continuity",
    "extract_p_quasi_cauchy_subsequence",
    "compactness_probe",
    "witness_csv",
]

DEFAULT_SEED = 20240531
DEFAULT_DELTAS = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
WINDOW_LEVELS = 6

Evaluator = Callable[[np.ndarray], np.ndarray]


class FunctionUnderTest:
    """A vectorised real function together with its domain."""

    def __init__(self, func: Evaluator, domain: Interval, name: str):
        self._func = func
        self.domain = domain
        self.name = name

    def __repr__(self):
        return f"FunctionUnderTest({self.name!r} on {self.domain})"

    def raw(self, x) -> np.ndarray:
        """Evaluate without the finiteness check."""
        x = np.asarray(x, dtype=np.float64)
        with np.errstate(all="ignore"):
            out = np.asarray(self._func(x), dtype=np.float64)
        return np.broadcast_to(out, x.shape)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        out = self.raw(x)
        bad = ~np.isfinite(out)
        if bad.any():
            at = x.ravel()[int(np.argmax(bad.ravel()))]
            raise DomainViolation(f"{self.name} is not finite at x = {at!r}")
        return out

    def image(self, s: RealSequence) -> RealSequence:
        return s.map(self.__call__, name=f"{self.name}({s.name})")


# -- windows -------------------------------------------------------------------


def probe_windows(domain: Interval, levels: int = WINDOW_LEVELS) -> List[Interval]:
    """Nested closed windows exhausting ``domain``.

    Closed finite ends are used as they are.  Open finite ends are approached
    to within ``r 10^-k`` and infinite ends are cut at ``10^k`` from the
    other end (or from 0), for ``k = 1..levels``; ``r`` is the domain width,
    or 1 for unbounded domains.  A closed bounded domain is its own window.
    """
    lo, hi = domain.lo, domain.hi
    if domain.bounded and domain.lo_closed and domain.hi_closed:
        return [Interval.closed(lo, hi)]
    r = domain.width if domain.bounded else 1.0
    out = []
    for k in range(1, levels + 1):
        if math.isinf(lo):
            a = (hi if math.isfinite(hi) else 0.0) - 10.0**k
        elif domain.lo_closed:
            a = lo
        else:
            a = lo + r * 10.0**-k
        if math.isinf(hi):
            b = (lo if math.isfinite(lo) else 0.0) + 10.0**k
        elif domain.hi_closed:
            b = hi
        else:
            b = hi - r * 10.0**-k
        out.append(Interval.closed(a, b))
    return out


# -- generator suites ------------------------------------------------------------

_UNBOUNDED_BASES = ("sqrt_n", "log_n", "harmonic_partial", "weighted_harmonic", "log_log_n")
_BOUNDED_BASES = ("sin_sqrt_n", "cos_log_n", "alt_sign")


def default_generators(domain: Interval, p_list: Sequence[int] = (1,)) -> List[RealSequence]:
    """p-quasi-Cauchy candidates mapped into ``domain``, plus repeat_each expansions.

    Unbounded catalog sequences are used along each infinite direction,
    ``1/n`` approaches every finite end, and bounded oscillating sequences are
    mapped into an inner part of the domain.  For each ``q > 1`` in ``p_list``
    every base sequence is also repeated ``q`` times termwise.
    """
    base: List[RealSequence] = []
    lo, hi = domain.lo, domain.hi
    if math.isinf(hi):
        start = lo + 1.0 if math.isfinite(lo) else 0.0
        for name in _UNBOUNDED_BASES:
            g = catalog_lookup(name)
            base.append(g if start == 0.0 else g.affine(1.0, start, name=f"{start!r}+{name}"))
    if math.isinf(lo):
        start = hi - 1.0 if math.isfinite(hi) else 0.0
        for name in _UNBOUNDED_BASES:
            g = catalog_lookup(name)
            base.append(g.affine(-1.0, start, name=f"{start!r}-{name}" if start else f"-{name}"))
    r = domain.width if domain.bounded else 1.0
    recip = catalog_lookup("reciprocals")
    if math.isfinite(lo):
        base.append(recip.affine(0.9 * r, lo, name=f"{lo!r}+{0.9 * r!r}/n"))
    if math.isfinite(hi):
        base.append(recip.affine(-0.9 * r, hi, name=f"{hi!r}-{0.9 * r!r}/n"))
    if domain.bounded:
        centre, half = 0.5 * (lo + hi), 0.45 * domain.width
    elif math.isfinite(lo):
        centre, half = lo + 2.0, 1.0
    elif math.isfinite(hi):
        centre, half = hi - 2.0, 1.0
    else:
        centre, half = 0.0, 1.0
    for name in _BOUNDED_BASES:
        base.append(
            catalog_lookup(name).affine(half, centre, name=f"{centre!r}+{half!r}*{name}")
        )
    out = list(base)
    for q in sorted({_gap(p) for p in p_list} - {1}):
        out.extend(repeat_each(g, q) for g in base)
    return out


def _sign_pattern(q: int) -> Callable[[np.ndarray], np.ndarray]:
    return lambda n: np.where(((n + q - 1) // q) % 2 == 0, 1.0, -1.0)


def convergent_generators(domain: Interval, p_list: Sequence[int] = (1,)) -> List[RealSequence]:
    """Sequences converging to grid points of ``domain`` from several directions.

    Interior limits ``u`` get ``u + r s_q(n)/n`` with the sign pattern
    ``s_q(n) = (-1)^ceil(n/q)`` for ``q`` in ``{1} | p_list``, and the one-sided
    ``u +- r/n``.  Closed finite endpoints are approached from inside.
    Each sequence records its ``limit`` in ``properties``.
    """
    lo, hi = domain.lo, domain.hi
    if domain.bounded:
        grid = [lo + domain.width * t for t in (0.25, 0.5, 0.75)]
        if lo < 0.0 < hi:
            grid.append(0.0)
    else:
        grid = [u for u in (0.0, 1.0, -1.0, 10.0, -10.0) if lo < u < hi]
    grid = sorted(set(grid))
    qs = sorted({1} | {_gap(p) for p in p_list})
    out: List[RealSequence] = []

    def make(u, r, pattern, label):
        return RealSequence(
            lambda n: u + r * pattern(n) / n,
            name=f"{u!r}{label}",
            properties={"limit": u, "bounded": True, "cauchy": True},
        )

    for u in grid:
        r = min(1.0, 0.5 * min(u - lo, hi - u))
        for q in qs:
            tag = "(-1)^n" if q == 1 else f"(-1)^ceil(n/{q})"
            out.append(make(u, r, _sign_pattern(q), f"+{r!r}*{tag}/n"))
        out.append(make(u, r, lambda n: 1.0, f"+{r!r}/n"))
        out.append(make(u, r, lambda n: -1.0, f"-{r!r}/n"))
    reach = min(1.0, 0.5 * domain.width)
    if domain.lo_closed:
        out.append(make(lo, reach, lambda n: 1.0, f"+{reach!r}/n"))
    if domain.hi_closed:
        out.append(make(hi, reach, lambda n: -1.0, f"-{reach!r}/n"))
    return out


# -- image probes ----------------------------------------------------------------


def _workers(workers: Optional[int]) -> int:
    if workers is not None:
        return max(1, int(workers))
    return max(1, min(4, os.cpu_count() or 1))


def _check_in_domain(f: FunctionUnderTest, g: RealSequence, n: int) -> None:
    x = g.prefix(n)
    inside = f.domain.contains(x)
    if not inside.all():
        k = int(np.argmin(inside))
        raise DomainViolation(
            f"generator {g.name} leaves the domain {f.domain} of {f.name}: x_{k + 1} = {x[k]!r}"
        )


@dataclass
class _Probe:
    generator: RealSequence
    input_verdict: ModeVerdict
    image_verdicts: Dict[str, ModeVerdict] = field(default_factory=dict)


def _run_probes(
    f: FunctionUnderTest,
    generators: Sequence[RealSequence],
    input_test: Callable[[RealSequence], ModeVerdict],
    image_tests: Dict[str, Callable[[RealSequence], ModeVerdict]],
    sched: ToleranceSchedule,
    workers: Optional[int],
) -> List[_Probe]:
    top = sched.usable_scales()[-1]

    def one(g: RealSequence) -> _Probe:
        try:
            _check_in_domain(f, g, top)
            probe = _Probe(g, input_test(g))
            if probe.input_verdict.holds:
                img = f.image(g)
                probe.image_verdicts = {k: t(img) for k, t in image_tests.items()}
            return probe
        finally:
            g.clear_cache()

    n = _workers(workers)
    if n == 1:
        return [one(g) for g in generators]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(one, generators))


def _combine(
    probes: List[_Probe], key: str, mode: str, f: FunctionUnderTest, params: dict, sched
) -> Tuple[ModeVerdict, Optional[RealSequence]]:
    """Overall verdict over the generators whose input test held."""
    tested = [pr for pr in probes if pr.input_verdict.holds]
    params = dict(params, generators_tested=len(tested), generators_skipped=len(probes) - len(tested))
    for pr in tested:
        v = pr.image_verdicts[key]
        if v.fails:
            params["generator"] = pr.generator.name
            verdict = ModeVerdict(
                mode=mode,
                outcome=Outcome.FAILS,
                epsilon=v.epsilon,
                scale=v.scale,
                witness=v.witness,
                trend=v.trend,
                params=params,
                subject=f.name,
                note=f"image of {pr.generator.name} fails {v.label}",
            )
            return verdict, pr.generator
    if tested and all(pr.image_verdicts[key].holds for pr in tested):
        outcome, note = Outcome.HOLDS, ""
        eps = max(pr.image_verdicts[key].epsilon for pr in tested)
    else:
        outcome = Outcome.INCONCLUSIVE
        eps = sched.epsilons[0]
        note = "no generator qualified" if not tested else "some images were inconclusive"
    return (
        ModeVerdict(
            mode=mode,
            outcome=outcome,
            epsilon=eps,
            scale=sched.usable_scales()[-1],
            params=params,
            subject=f.name,
            note=note,
        ),
        None,
    )


def _pqc_probes(f, p, generators, sched, workers):
    return _run_probes(
        f,
        generators,
        lambda g: test_p_quasi_cauchy(g, p, sched),
        {
            "pqc": lambda s: test_p_quasi_cauchy(s, p, sched),
            "cauchy": lambda s: test_cauchy(s, sched),
        },
        sched,
        workers,
    )


def preserves_mode(
    f: FunctionUnderTest,
    p: int = 1,
    generators: Optional[Sequence[RealSequence]] = None,
    sched: Optional[ToleranceSchedule] = None,
    workers: Optional[int] = None,
) -> ModeVerdict:
    """Does ``f`` map p-quasi-Cauchy generators to p-quasi-Cauchy images?

    Generators whose own p-quasi-Cauchy test does not hold are skipped.  The
    verdict fails on the first failing image (``params["generator"]`` names
    it and ``witness`` indexes the image), holds when every tested image
    holds, and is inconclusive otherwise.
    """
    sched = sched or ToleranceSchedule()
    p = _gap(p)
    if generators is None:
        generators = default_generators(f.domain, (p,))
    probes = _pqc_probes(f, p, generators, sched, workers)
    verdict, _ = _combine(probes, "pqc", "PreservesPQuasiCauchy", f, {"p": p}, sched)
    return verdict


# -- modulus of continuity --------------------------------------------------------


@dataclass
class ModulusEstimate:
    """Sampled moduli ``(delta, omega(delta))`` on the widest window and the verdict."""

    subject: str
    samples: List[Tuple[float, float]]
    windows: List[Tuple[Interval, float]]
    outcome: Outcome
    witness: Optional[Tuple[float, float]] = None
    note: str = ""

    @property
    def holds(self) -> bool:
        return self.outcome is Outcome.HOLDS

    @property
    def fails(self) -> bool:
        return self.outcome is Outcome.FAILS

    def omega(self, delta: float) -> float:
        for d, w in self.samples:
            if d == delta:
                return w
        raise KeyError(delta)

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome.value,
            "samples": [[float(d), float(w)] for d, w in self.samples],
            "windows": [{"window": iv.to_json(), "omega_max_delta": float(w)} for iv, w in self.windows],
            "witness": None if self.witness is None else [float(v) for v in self.witness],
            "note": self.note,
        }


def _sample_window(f, a, b, deltas, n, rng):
    """``omega(delta)`` on ``[a, b]`` for each delta, with the maximising pairs."""
    width = b - a
    grid = np.linspace(a, b, 257)
    omegas, pairs = [], []
    centre = None
    prev = None
    q = max(1, n // 4)
    for d in deltas:
        parts = [
            grid,
            a + width * rng.random(q),
            a + width * 10.0 ** rng.uniform(-12.0, 0.0, q),
            b - width * 10.0 ** rng.uniform(-12.0, 0.0, q),
        ]
        if centre is not None:
            parts.append(centre + prev * rng.uniform(-1.0, 1.0, q))
        else:
            parts.append(a + width * rng.random(q))
        x = np.clip(np.concatenate(parts), a, b)
        m = x.size
        u = rng.uniform(-1.0, 1.0, m)
        u[: m // 2] = np.where(u[: m // 2] < 0, -1.0, 1.0)
        y = np.clip(x + d * u, a, b)
        x = np.concatenate((x, [a, max(b - d, a)]))
        y = np.concatenate((y, [min(a + d, b), b]))
        diff = np.abs(f(x) - f(y))
        j = int(np.argmax(diff))
        omegas.append(float(diff[j]))
        pairs.append((float(x[j]), float(y[j])))
        centre, prev = 0.5 * (x[j] + y[j]), d
    return omegas, pairs


def uniformity_modulus(
    f: FunctionUnderTest,
    deltas: Sequence[float] = DEFAULT_DELTAS,
    samples_per_delta: int = 2048,
    seed: int = DEFAULT_SEED,
    window: Optional[Interval] = None,
    margin: float = 0.05,
) -> ModulusEstimate:
    """Estimate the modulus of continuity on nested windows and judge uniformity.

    ``omega(delta)`` is the largest ``|f(x) - f(y)|`` over sampled pairs with
    ``|x - y| <= delta`` (a grid, uniform and endpoint-biased draws, and a
    zoom around the previous maximiser).  The verdict

    * fails when ``omega(delta_max)`` still grows across the last two windows
      by more than ``margin``, or when ``omega(delta_min)`` on the widest
      window is at least half of ``omega(delta_max)``;
    * holds when ``omega`` saturates across windows and on the widest window
      it is non-increasing along the deltas and
      ``omega(delta_min) <= 0.05 omega(delta_max)``;
    * is inconclusive otherwise.

    ``window`` restricts the probe to a sub-interval of the domain.
    """
    deltas = [float(d) for d in deltas]
    if not deltas or any(d <= 0 for d in deltas) or any(a <= b for a, b in zip(deltas, deltas[1:])):
        raise ValueError("deltas must be positive and strictly decreasing")
    region = window or f.domain
    if window is not None and (window.lo < f.domain.lo or window.hi > f.domain.hi):
        raise DomainViolation(f"probe window {window} is not inside {f.domain}")
    rng = np.random.default_rng(seed)
    per_window = []
    for iv in probe_windows(region):
        per_window.append((iv,) + _sample_window(f, iv.lo, iv.hi, deltas, samples_per_delta, rng))
    wmax = [om[0] for _, om, _ in per_window]
    last_iv, last, last_pairs = per_window[-1]
    samples = list(zip(deltas, last))
    windows = [(iv, w) for iv, w in zip([w[0] for w in per_window], wmax)]
    saturated = len(wmax) < 2 or wmax[-1] <= (1.0 + margin) * wmax[-2]
    if not saturated:
        return ModulusEstimate(
            f.name, samples, windows, Outcome.FAILS, last_pairs[0],
            note=f"omega({deltas[0]:g}) grows from {wmax[-2]:.3g} to {wmax[-1]:.3g} between windows",
        )
    top, bottom = last[0], last[-1]
    if top == 0.0 or (_nonincreasing(last, margin) and bottom <= 0.05 * top):
        return ModulusEstimate(f.name, samples, windows, Outcome.HOLDS)
    if bottom >= 0.5 * top:
        return ModulusEstimate(
            f.name, samples, windows, Outcome.FAILS, last_pairs[-1],
            note=f"omega({deltas[-1]:g}) = {bottom:.3g} does not shrink on {last_iv}",
        )
    return ModulusEstimate(f.name, samples, windows, Outcome.INCONCLUSIVE)


# -- adversarial witnesses --------------------------------------------------------


@dataclass
class WitnessSequence:
    """A p-quasi-Cauchy input sequence whose image under ``f`` is not."""

    sequence: ChainSequence
    image: RealSequence
    p: int
    eps0: float
    pair_positions: Tuple[int, ...]
    input_verdict: ModeVerdict

    @property
    def name(self) -> str:
        return self.sequence.name

    def to_csv(self, rows: int) -> str:
        return witness_csv(self.sequence, self.image, rows)


def witness_csv(seq: RealSequence, image: RealSequence, rows: int) -> str:
    """CSV with header ``index,value,image_value`` for the first ``rows`` terms."""
    x = seq.prefix(rows)
    y = image.prefix(rows)
    buf = io.StringIO()
    buf.write("index,value,image_value\n")
    for i in range(rows):
        buf.write(f"{i + 1},{float(x[i])!r},{float(y[i])!r}\n")
    return buf.getvalue()


def _chain_length(xi: np.ndarray, eta: np.ndarray, p: int) -> int:
    if xi.size < 2:
        return 0
    seg = np.abs(xi[1:] - eta[:-1])
    i = np.arange(1, seg.size + 1, dtype=np.float64)
    m = np.floor(p * seg * i) + 1
    return int(np.sum(2 * p + m - 1))


class _PairSearch:
    """Seeded search for pairs ``|x - y| < 1/i`` with ``|f(x) - f(y)| >= eps0``.

    Pairs are found a batch at a time; within a batch every pair uses the gap
    bound of the last index, so the batch can be ordered by distance from the
    previous pair, which keeps the connecting chains short.  Candidates are
    drawn around that previous pair at log-uniform distances, uniformly over
    the window and log-uniformly close to finite domain ends.
    """

    def __init__(self, f, eps0, window: Interval, seed, k_hot=48, k_broad=16, k_retry=1024):
        self.f = f
        self.eps0 = float(eps0)
        self.a, self.b = window.lo, window.hi
        self.rng = np.random.default_rng(seed)
        self.hot = 0.5 * (self.a + self.b) if not (self.a <= 0.0 <= self.b) else 0.0
        self.radius = self.b - self.a
        self.k_hot, self.k_broad, self.k_retry = k_hot, k_broad, k_retry

    def _candidates(self, rows, k_hot, k_broad, radius):
        rng, a, b = self.rng, self.a, self.b
        w = b - a
        mag = radius * 10.0 ** rng.uniform(-12.0, 0.0, (rows, k_hot))
        hot = self.hot + np.where(rng.random((rows, k_hot)) < 0.5, -mag, mag)
        broad = [a + w * rng.random((rows, k_broad))]
        dom = self.f.domain
        if math.isfinite(dom.lo):
            broad.append(dom.lo + w * 10.0 ** rng.uniform(-15.0, 0.0, (rows, k_broad)))
        if math.isfinite(dom.hi):
            broad.append(dom.hi - w * 10.0 ** rng.uniform(-15.0, 0.0, (rows, k_broad)))
        return np.concatenate([hot] + broad, axis=1)

    def _try(self, rows, gap_bound, k_hot, k_broad, radius):
        x = self._candidates(rows, k_hot, k_broad, radius)
        g = gap_bound * self.rng.uniform(0.5, 0.999, x.shape)
        y = x + np.where(self.rng.random(x.shape) < 0.5, -g, g)
        dom = self.f.domain
        ok = dom.contains(x) & dom.contains(y) & (x >= self.a) & (x <= self.b)
        fx, fy = self.f.raw(x), self.f.raw(y)
        diff = np.abs(fx - fy)
        ok &= np.isfinite(diff) & (np.abs(x - y) < gap_bound) & (diff >= self.eps0)
        # prefer pairs whose image gap is at most 4 eps0, then the one nearest the hotspot
        tight = ok & (diff <= 4.0 * self.eps0)
        d = np.abs(x - self.hot)
        j = np.where(
            tight.any(axis=1),
            np.argmin(np.where(tight, d, np.inf), axis=1),
            np.argmin(np.where(ok, d, np.inf), axis=1),
        )
        r = np.arange(rows)
        return ok[r, j], x[r, j], y[r, j]

    def batch(self, first: int, size: int):
        """Pairs for indices ``first .. first+size-1`` or ``None`` if some index has none."""
        gap_bound = 1.0 / (first + size - 1)
        found, x, y = self._try(size, gap_bound, self.k_hot, self.k_broad, self.radius)
        missing = np.flatnonzero(~found)
        wide = self.b - self.a
        if missing.size:
            f2, x2, y2 = self._try(
                missing.size, gap_bound, self.k_retry, self.k_retry, wide
            )
            if not f2.all():
                return None
            x[missing], y[missing] = x2, y2
        order = np.argsort(np.abs(x - self.hot), kind="stable")
        x, y = x[order], y[order]
        spread = float(np.max(np.abs(x - self.hot)))
        if missing.size:
            self.radius = wide
        else:
            self.radius = max(4.0 * spread, 0.5 * self.radius, 1e-12 * max(1.0, abs(self.hot)))
        self.hot = float(y[-1])
        return x, y


def adversarial_witness(
    f: FunctionUnderTest,
    p: int = 1,
    eps0: float = 0.5,
    budget: Optional[int] = None,
    seed: int = DEFAULT_SEED,
    sched: Optional[ToleranceSchedule] = None,
    max_batch: int = 4096,
) -> Optional[Tuple[WitnessSequence, ModeVerdict]]:
    """Search for a p-quasi-Cauchy sequence whose image is not p-quasi-Cauchy.

    Pairs ``(xi_i, eta_i)`` with ``|xi_i - eta_i| < 1/i`` and
    ``|f(xi_i) - f(eta_i)| >= eps0`` are searched until the chain through
    them covers the largest usable scale of ``sched``; the chain is built
    with :func:`seqlab.chains.interleave_chain`.  Returns ``None`` when some
    index has no pair or the pair count would exceed ``budget``.
    """
    p = _gap(p)
    sched = sched or ToleranceSchedule()
    limit = get_budget() if budget is None else int(budget)
    target = min(sched.usable_scales()[-1], limit) + p
    window = probe_windows(f.domain)[-1]
    search = _PairSearch(f, eps0, window, seed)
    xs: List[np.ndarray] = []
    ys: List[np.ndarray] = []
    have, size, length = 0, 1, 0
    while length < target:
        if have >= limit:
            return None
        got = search.batch(have + 1, size)
        if got is None:
            return None
        xs.append(got[0])
        ys.append(got[1])
        have += size
        size = min(2 * size, max_batch)
        if have >= 64:
            length = _chain_length(np.concatenate(xs), np.concatenate(ys), p)
    xi, eta = np.concatenate(xs), np.concatenate(ys)
    name = f"pairs[{f.name}, eps0={eps0:g}]"
    stream = PairStream.from_arrays(xi, eta, name=name)
    stream.ensure(xi.size)
    chain = interleave_chain(stream, p, f.domain)
    image = f.image(chain)
    shown = int(min(16, xi.size - 1))
    positions = tuple(int(j) for j in chain.pair_positions(shown))
    input_verdict = test_p_quasi_cauchy(chain, p, sched)
    verdict = test_p_quasi_cauchy(image, p, sched)
    witness = WitnessSequence(chain, image, p, float(eps0), positions, input_verdict)
    return witness, verdict


# -- classification ------------------------------------------------------------------

_TYPE_LABELS = {
    "delta_p": "(Δ_{p})",
    "delta_p_c": "(Δ_{p} c)",
    "c": "(c)",
    "d": "(d, p={p})",
}


@dataclass
class ContinuityReport:
    """Verdicts for every continuity type plus the uniformity estimate.

    ``verdicts`` is keyed by ``(type, p)`` with ``type`` one of
    ``delta_p``, ``delta_p_c``, ``c`` (``p`` is ``None``) and ``d``.
    ``witnesses`` holds the failing input sequence for each failing key so
    that failures can be replayed; ``adversarial`` maps ``p`` to the found
    witness sequence, if any.
    """

    subject: str
    domain: Interval
    p_list: List[int]
    verdicts: Dict[Tuple[str, Optional[int]], ModeVerdict]
    uniformity: ModulusEstimate
    witnesses: Dict[Tuple[str, Optional[int]], RealSequence]
    adversarial: Dict[int, Optional[WitnessSequence]]
    inconsistencies: List[str]
    f: Optional[FunctionUnderTest] = None

    @staticmethod
    def label(kind: str, p: Optional[int]) -> str:
        return _TYPE_LABELS[kind].format(p=p)

    def get(self, kind: str, p: Optional[int] = None) -> ModeVerdict:
        return self.verdicts[(kind, p)]

    def __getitem__(self, label: str) -> ModeVerdict:
        for (kind, p), v in self.verdicts.items():
            if self.label(kind, p) == label:
                return v
        raise KeyError(label)

    @property
    def consistent(self) -> bool:
        return not self.inconsistencies

    def replay(self, kind: str, p: Optional[int] = None) -> float:
        """Recompute the size of a failure from its witness indices."""
        v = self.verdicts[(kind, p)]
        if not v.fails:
            raise ValueError(f"{self.label(kind, p)} did not fail")
        g = self.witnesses[(kind, p)]
        image = self.f.image(g)
        i, j = v.witness
        return abs(image(j) - image(i))

    def summary(self) -> str:
        parts = [f"{self.label(k, p)}: {v.outcome.value}" for (k, p), v in self.verdicts.items()]
        parts.append(f"uniform: {self.uniformity.outcome.value}")
        return ", ".join(parts)

    def to_json(self) -> dict:
        types = []
        for (kind, p), v in self.verdicts.items():
            g = self.witnesses.get((kind, p))
            types.append(
                {
                    "type": kind,
                    "p": p,
                    "label": self.label(kind, p),
                    "verdict": v.to_json(),
                    "witness_sequence": None if g is None else g.name,
                }
            )
        adv = []
        for p in sorted(self.adversarial):
            w = self.adversarial[p]
            adv.append(
                {
                    "p": p,
                    "found": w is not None,
                    "sequence": None if w is None else w.name,
                    "pair_positions": [] if w is None else list(w.pair_positions),
                }
            )
        return {
            "version": SCHEMA_VERSION,
            "subject": self.subject,
            "domain": self.domain.to_json(),
            "p_list": list(self.p_list),
            "types": types,
            "uniformity": self.uniformity.to_json(),
            "adversarial": adv,
            "inconsistencies": list(self.inconsistencies),
            "consistent": self.consistent,
        }


def _implication_checks(verdicts, uniform: ModulusEstimate, p_list) -> List[str]:
    out = []
    c = verdicts[("c", None)]

    def clash(up, down, text):
        if up.holds and down.fails:
            out.append(text)

    for p in p_list:
        dp, dpc, d = verdicts[("delta_p", p)], verdicts[("delta_p_c", p)], verdicts[("d", p)]
        clash(dpc, dp, f"(Δ_{p} c) holds but (Δ_{p}) fails: (Δ_p c) implies (Δ_p)")
        clash(dpc, c, f"(Δ_{p} c) holds but (c) fails: (Δ_p c) implies (c)")
        clash(dp, d, f"(Δ_{p}) holds but (d, p={p}) fails: (Δ_p) implies (d)")
        clash(c, d, f"(c) holds but (d, p={p}) fails: (c) is equivalent to (d)")
        clash(d, c, f"(d, p={p}) holds but (c) fails: (c) is equivalent to (d)")
        if uniform.holds and dp.fails:
            out.append(f"uniformly continuous but (Δ_{p}) fails")
        if uniform.fails and dp.holds:
            out.append(f"(Δ_{p}) holds but uniform continuity fails")
    return out


def classify_continuity(
    f: FunctionUnderTest,
    p_list: Sequence[int] = (1, 2),
    sched: Optional[ToleranceSchedule] = None,
    seed: int = DEFAULT_SEED,
    workers: Optional[int] = None,
) -> ContinuityReport:
    """Probe every continuity type of ``f`` and cross-check the implications.

    When the uniformity estimate does not hold, an adversarial witness is
    searched for each ``p`` with ``eps0 = min(1, omega(delta_min) / 2)`` and
    added to the generator suite.
    """
    sched = sched or ToleranceSchedule()
    ps = sorted({_gap(p) for p in p_list})
    uniform = uniformity_modulus(f, seed=seed)
    adversarial: Dict[int, Optional[WitnessSequence]] = {}
    eps0 = min(1.0, 0.5 * uniform.samples[-1][1])
    for p in ps:
        found = None
        if not uniform.holds and eps0 > 0.0:
            found = adversarial_witness(f, p, eps0, seed=seed, sched=sched)
        adversarial[p] = None if found is None else found[0]

    verdicts: Dict[Tuple[str, Optional[int]], ModeVerdict] = {}
    witnesses: Dict[Tuple[str, Optional[int]], RealSequence] = {}
    base = default_generators(f.domain, ps)
    for p in ps:
        gens = list(base) + [w.sequence for w in adversarial.values() if w is not None and w.p == p]
        probes = _pqc_probes(f, p, gens, sched, workers)
        for kind, key, mode in (
            ("delta_p", "pqc", "PreservesPQuasiCauchy"),
            ("delta_p_c", "cauchy", "PQuasiCauchyToConvergent"),
        ):
            v, g = _combine(probes, key, mode, f, {"p": p}, sched)
            verdicts[(kind, p)] = v
            if g is not None:
                witnesses[(kind, p)] = g

    conv = convergent_generators(f.domain, ps)
    image_tests = {"c": lambda s: test_cauchy(s, sched)}
    for p in ps:
        image_tests[f"d{p}"] = lambda s, p=p: test_p_quasi_cauchy(s, p, sched)
    probes = _run_probes(f, conv, lambda g: test_cauchy(g, sched), image_tests, sched, workers)
    v, g = _combine(probes, "c", "ConvergentToConvergent", f, {}, sched)
    verdicts[("c", None)] = v
    if g is not None:
        witnesses[("c", None)] = g
    for p in ps:
        v, g = _combine(probes, f"d{p}", "ConvergentToPQuasiCauchy", f, {"p": p}, sched)
        verdicts[("d", p)] = v
        if g is not None:
            witnesses[("d", p)] = g

    order = [("delta_p", p) for p in ps] + [("delta_p_c", p) for p in ps]
    order += [("c", None)] + [("d", p) for p in ps]
    verdicts = {k: verdicts[k] for k in order}
    issues = _implication_checks(verdicts, uniform, ps)
    return ContinuityReport(
        f.name, f.domain, ps, verdicts, uniform, witnesses, adversarial, issues, f
    )


# -- compactness -------------------------------------------------------------------


@dataclass
class SubsequenceWitness:
    """Indices of a subsequence whose checked terms lie within ``gap_tol`` of each other."""

    subject: str
    p: int
    indices: np.ndarray
    values: np.ndarray
    window: Tuple[float, float]
    gap_tol: float

    def as_sequence(self) -> RealSequence:
        return RealSequence.from_array(self.values, name=f"{self.subject}[extracted]")

    def schedule(self) -> ToleranceSchedule:
        """The schedule the extraction guarantees: one scale, tolerance ``gap_tol``."""
        return ToleranceSchedule(epsilons=(self.gap_tol,), scales=(int(self.indices.size),))

    def check(self) -> ModeVerdict:
        return test_p_quasi_cauchy(self.as_sequence(), self.p, self.schedule())


def extract_p_quasi_cauchy_subsequence(
    s: RealSequence,
    p: int = 1,
    bound_window: Optional[Interval] = None,
    gap_tol: float = 1e-3,
    prefix: Optional[int] = None,
    min_terms: int = 8,
) -> SubsequenceWitness:
    """Bisection extraction of a Cauchy-within-tolerance subsequence.

    The checked prefix must stay inside ``bound_window`` (default
    ``x_1 +- 10``), otherwise :class:`UnboundedEvidence` names the first
    escaping index.  The window is then halved until narrower than
    ``gap_tol``, keeping the half that holds more indices from the second
    half of the prefix (the lower half on ties), so after ``L`` halvings at
    least ``1/2^L`` of those late indices remain.  Fewer than ``min_terms``
    late indices in the final window raises :class:`InsufficientTerms`.
    """
    p = _gap(p)
    n = min(prefix or 10**6, get_budget())
    x = s.prefix(n)
    if bound_window is None:
        bound_window = Interval.closed(x[0] - 10.0, x[0] + 10.0)
    inside = bound_window.contains(x)
    if not inside.all():
        k = int(np.argmin(inside))
        raise UnboundedEvidence(
            f"{s.name}: x_{k + 1} = {x[k]!r} leaves {bound_window}", index=k + 1, value=float(x[k])
        )
    a, b = bound_window.lo, bound_window.hi
    idx = np.arange(1, n + 1)
    late = idx > n // 2
    sel = np.ones(n, dtype=bool)
    while b - a >= gap_tol:
        mid = 0.5 * (a + b)
        lower = sel & (x <= mid)
        upper = sel & (x > mid)
        nl, nu = int(np.count_nonzero(lower & late)), int(np.count_nonzero(upper & late))
        if nl >= nu:
            sel, b = lower, mid
        else:
            sel, a = upper, mid
    chosen = idx[sel]
    kept = int(np.count_nonzero(sel & late))
    if kept < min_terms or chosen.size <= p:
        raise InsufficientTerms(
            f"{s.name}: window [{a:.6g}, {b:.6g}] keeps {kept} of the last {n - n // 2} terms, "
            f"fewer than {max(min_terms, p + 1)}"
        )
    return SubsequenceWitness(s.name, p, chosen, x[sel].copy(), (a, b), float(gap_tol))


@dataclass
class CompactnessVerdict:
    bounded: bool
    trivial: bool
    witness: List[float]
    note: str = ""

    def to_json(self) -> dict:
        return {
            "verdict": "bounded" if self.bounded else "unbounded",
            "trivial": self.trivial,
            "witness": [float(v) for v in self.witness],
            "note": self.note,
        }


def _escaping_chain(x: np.ndarray, p: int, upward: bool) -> List[float]:
    """Greedy terms with ``x_{k+1} > p + x_k`` (or ``< x_k - p`` going down)."""
    out = [float(x[0])]
    for v in x[1:]:
        if (upward and v > out[-1] + p) or (not upward and v < out[-1] - p):
            out.append(float(v))
    return out


def compactness_probe(
    points: Union[RealSequence, Sequence[float], np.ndarray],
    p: int = 1,
    seed: int = DEFAULT_SEED,
    samples: int = 8,
    sample_length: int = 10**4,
    margin: float = 0.05,
) -> CompactnessVerdict:
    """Bounded (hence p-quasi-Cauchy compact) or unbounded, with evidence.

    A finite point set is bounded.  For a generated set the running maximum
    of ``|x_n|`` is compared at the last three decades of the prefix;
    growth by more than ``margin`` at both steps counts as unbounded and the
    witness is a greedy escaping sequence with consecutive gaps above ``p``.
    Bounded sets are backed by running the extractor on ``samples`` seeded
    random sequences of their points, at the finest tolerance a sample of
    ``sample_length`` draws can resolve.
    """
    p = _gap(p)
    if isinstance(points, RealSequence):
        n = min(get_budget(), 10**6)
        pts = np.asarray(points.prefix(n))
        mags = [float(np.max(np.abs(pts[: n // 10**j]))) for j in (2, 1, 0)]
        growing = all(b > (1.0 + margin) * a for a, b in zip(mags, mags[1:]))
        if growing:
            upward = float(np.max(pts)) >= -float(np.min(pts))
            chain = _escaping_chain(pts, p, upward)
            return CompactnessVerdict(
                False, False, chain, note=f"sup |x_n| grows: {mags[0]:.4g}, {mags[1]:.4g}, {mags[2]:.4g}"
            )
    else:
        pts = np.asarray(points, dtype=np.float64).ravel()
    if pts.size <= 1:
        return CompactnessVerdict(True, True, [float(v) for v in pts], note="at most one point")
    rng = np.random.default_rng(seed)
    lo, hi = float(pts.min()), float(pts.max())
    pad = max(1.0, hi - lo)
    box = Interval.closed(lo - pad, hi + pad)
    # resolution the sample can support: about 128 draws per final cell
    levels = max(1, int(np.log2(max(sample_length, 256) / 128)))
    tol = box.width / 2.0**levels * (1.0 + 1e-9)
    for k in range(samples):
        draw = pts[rng.integers(0, pts.size, sample_length)]
        seq = RealSequence.from_array(draw, name=f"sample{k}")
        try:
            sub = extract_p_quasi_cauchy_subsequence(
                seq, p, box, gap_tol=tol, prefix=sample_length, min_terms=16
            )
            ok = sub.check().holds
        except InsufficientTerms:
            ok = False
        if not ok:
            return CompactnessVerdict(True, False, [], note=f"sample {k} gave no usable subsequence")
    return CompactnessVerdict(
        True, False, [lo, hi],
        note=f"{samples} sampled sequences yielded subsequences within {tol:.3g}",
    )
