"""Row-finite summability methods ``(A x)_k = sum_n a_{kn} x_n``.

The difference method :func:`delta_p_method` has row ``k`` equal to
``{(k, -1), (k+p, +1)}`` so that ``(A x)_k = x_{k+p} - x_k``.  Rows are summed
with :func:`math.fsum`, which returns the correctly rounded value of the
exact sum; for a two-term row that is exactly the floating-point
subtraction, so the method agrees bit for bit with :func:`seqlab.sequences.delta`.

Methods can be loaded from JSON of the form::

    {"name": "...", "rows": [[k, [[n, a], ...]], ...], "declared_regular": false}
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import BudgetExceeded, MalformedMethod
from .modes import ModeVerdict, ToleranceSchedule, test_cauchy
from .sequences import RealSequence, _gap, get_budget

__all__ = [
    "RowFiniteMethod",
    "MethodOutput",
    "delta_p_method",
    "identity_method",
    "cesaro_method",
    "apply_method",
    "regularity_spot_check",
    "method_from_spec",
]

Row = Tuple[np.ndarray, np.ndarray]


class RowFiniteMethod:
    """A summability matrix with finitely many non-zero entries per row.

    ``row_func(k)`` returns ``(columns, coefficients)`` for row ``k >= 1``;
    columns must be strictly increasing and non-empty.  ``max_row`` bounds
    methods defined by a finite table.
    """

    def __init__(
        self,
        row_func: Callable[[int], Row],
        name: str,
        declared_regular: bool = False,
        max_row: Optional[int] = None,
    ):
        self._row_func = row_func
        self.name = name
        self.declared_regular = bool(declared_regular)
        self.max_row = max_row

    def __repr__(self):
        return f"RowFiniteMethod({self.name!r})"

    def row(self, k: int) -> Row:
        if k < 1 or (self.max_row is not None and k > self.max_row):
            raise MalformedMethod(f"{self.name}: row {k} is not defined")
        cols, coefs = self._row_func(k)
        cols = np.asarray(cols, dtype=np.int64)
        coefs = np.asarray(coefs, dtype=np.float64)
        if cols.size == 0:
            raise MalformedMethod(f"{self.name}: row {k} is empty")
        if cols.shape != coefs.shape:
            raise MalformedMethod(f"{self.name}: row {k} has mismatched columns/coefficients")
        if cols.min() < 1 or (np.diff(cols) <= 0).any():
            raise MalformedMethod(f"{self.name}: row {k} columns must be positive and increasing")
        return cols, coefs

    def row_entries(self, k: int) -> List[Tuple[int, float]]:
        cols, coefs = self.row(k)
        return [(int(c), float(a)) for c, a in zip(cols, coefs)]

    def to_json(self, rows: int) -> dict:
        return {
            "name": self.name,
            "rows": [[k, [[c, a] for c, a in self.row_entries(k)]] for k in range(1, rows + 1)],
            "declared_regular": self.declared_regular,
        }


def delta_p_method(p: int) -> RowFiniteMethod:
    """Row ``k`` is ``[(k, -1), (k+p, +1)]``, i.e. ``(A x)_k = x_{k+p} - x_k``."""
    p = _gap(p)
    coefs = np.array([-1.0, 1.0])
    return RowFiniteMethod(lambda k: (np.array([k, k + p]), coefs), name=f"delta:{p}")


def identity_method() -> RowFiniteMethod:
    return RowFiniteMethod(
        lambda k: (np.array([k]), np.array([1.0])), name="identity", declared_regular=True
    )


def cesaro_method() -> RowFiniteMethod:
    """Arithmetic means: row ``k`` is ``(n, 1/k)`` for ``n = 1..k``."""
    return RowFiniteMethod(
        lambda k: (np.arange(1, k + 1), np.full(k, 1.0 / k)), name="cesaro", declared_regular=True
    )


def method_from_spec(spec: Union[dict, str, Path]) -> RowFiniteMethod:
    """Build a method from its JSON object, a JSON string, or a path to a JSON file."""
    if isinstance(spec, Path) or (isinstance(spec, str) and not spec.lstrip().startswith("{")):
        spec = json.loads(Path(spec).read_text())
    elif isinstance(spec, str):
        spec = json.loads(spec)
    try:
        name = str(spec["name"])
        raw_rows = spec["rows"]
        regular = bool(spec.get("declared_regular", False))
    except (KeyError, TypeError) as exc:
        raise MalformedMethod(f"method JSON needs 'name' and 'rows': {exc}") from None
    table: Dict[int, Row] = {}
    for entry in raw_rows:
        try:
            k, pairs = entry
            k = int(k)
            cols = [int(n) for n, _ in pairs]
            coefs = [float(a) for _, a in pairs]
        except (TypeError, ValueError) as exc:
            raise MalformedMethod(f"{name}: bad row entry {entry!r}") from exc
        if k in table:
            raise MalformedMethod(f"{name}: row {k} given twice")
        table[k] = (np.array(cols, dtype=np.int64), np.array(coefs))
    if not table:
        raise MalformedMethod(f"{name}: no rows")
    max_row = max(table)
    missing = sorted(set(range(1, max_row + 1)) - set(table))
    if missing:
        raise MalformedMethod(f"{name}: rows {missing[:5]} missing")

    def row(k):
        return table[k]

    method = RowFiniteMethod(row, name=name, declared_regular=regular, max_row=max_row)
    for k in table:
        method.row(k)  # validate eagerly
    return method


@dataclass
class MethodOutput:
    method: str
    subject: str
    transformed_prefix: np.ndarray
    limit_verdict: ModeVerdict

    def to_json(self) -> dict:
        return {
            "version": "v1",
            "method": self.method,
            "subject": self.subject,
            "rows": int(self.transformed_prefix.size),
            "transformed_prefix": [float(v) for v in self.transformed_prefix],
            "limit_verdict": self.limit_verdict.to_json(),
        }


def apply_method(
    m: RowFiniteMethod,
    s: RealSequence,
    rows: int,
    sched: Optional[ToleranceSchedule] = None,
    budget: Optional[int] = None,
) -> MethodOutput:
    """Transform rows ``1..rows`` of ``s`` and test the result for convergence."""
    if rows < 1:
        raise ValueError("rows must be >= 1")
    limit = get_budget() if budget is None else budget
    table = [m.row(k) for k in range(1, rows + 1)]
    top = max(int(cols[-1]) for cols, _ in table)
    if top > limit:
        raise BudgetExceeded(f"{m.name}: rows 1..{rows} reference column {top} beyond budget {limit}")
    x = s.prefix(top)
    out = np.empty(rows)
    for k, (cols, coefs) in enumerate(table):
        out[k] = math.fsum((coefs * x[cols - 1]).tolist())
    transformed = RealSequence.from_array(out, name=f"{m.name}({s.name})")
    sched = sched or ToleranceSchedule()
    verdict = test_cauchy(transformed, _prefix_schedule(sched, rows))
    out.flags.writeable = False
    return MethodOutput(m.name, s.name, out, verdict)


def _prefix_schedule(sched: ToleranceSchedule, rows: int) -> ToleranceSchedule:
    """Scales that fit a finite prefix; a decade ladder ending at ``rows`` if fewer than two do."""
    fit = [S for S in sched.scales if S <= rows]
    if len(fit) >= 2:
        return sched.with_scales(fit)
    ladder = sorted({rows // 10**j for j in range(4) if rows // 10**j >= 10} | {rows})
    return sched.with_scales(ladder)


def regularity_spot_check(
    m: RowFiniteMethod,
    probes: Sequence[RealSequence],
    sched: Optional[ToleranceSchedule] = None,
    rows: int = 1000,
) -> List[Tuple[str, bool]]:
    """Does the method send each convergent probe to its ordinary limit?

    Agreement means the last transformed term is within the coarsest
    tolerance of the probe's catalog ``limit`` and the transformed prefix is
    not found to diverge.
    This is evidence for regularity, never a proof of it.
    """
    sched = sched or ToleranceSchedule()
    tol = sched.epsilons[0]
    report = []
    for probe in probes:
        if "limit" not in probe.properties:
            raise ValueError(f"{probe.name}: probe has no known limit")
        out = apply_method(m, probe, rows, sched)
        close = abs(out.transformed_prefix[-1] - probe.properties["limit"]) < tol
        report.append((probe.name, bool(close and not out.limit_verdict.fails)))
    return report
