"""
Per-e colength tables and the two-term limit estimator shared by every
invariant: l_e = eta * q^d + alpha * q^(d-1), fitted on the last two rows.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from . import config
from .errors import BudgetExceeded, InsufficientSamples

logger = logging.getLogger(__name__)

KINDS = ("HK", "FSIG", "RELHK", "RELHK-RATIO", "PAIR", "SEQ", "SPLIT", "FSIG-HK")


@dataclass(frozen=True)
class TableRow:
    e: int
    q: int
    length: int
    normalized: Fraction
    # chain index at which a t-stabilized row settled
    t: Optional[int] = None


@dataclass
class InvariantTable:
    """Exact colength samples indexed by the Frobenius iterate e"""
    kind: str
    p: int
    d: int
    rows: List[TableRow] = field(default_factory=list)
    # lengths are divided by scale * q^d when normalizing
    scale: int = 1
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    # ideals behind each row, kept for downstream probes; never serialized
    ideals: Dict[int, Any] = field(default_factory=dict, repr=False, compare=False)

    def add(self, e: int, length: int, t: Optional[int] = None) -> TableRow:
        if self.rows and e <= self.rows[-1].e:
            raise ValueError(f"rows must be strictly increasing in e, got {e} after {self.rows[-1].e}")
        q = self.p ** e
        row = TableRow(e, q, length, Fraction(length, self.scale * q ** self.d), t)
        self.rows.append(row)
        return row

    def lengths(self) -> List[int]:
        return [r.length for r in self.rows]

    def normalized(self) -> List[Fraction]:
        return [r.normalized for r in self.rows]

    def row(self, e: int) -> TableRow:
        for r in self.rows:
            if r.e == e:
                return r
        raise KeyError(e)

    def envelope(self) -> List[Fraction]:
        """|normalized_(e+1) - normalized_e| * p^e over consecutive rows"""
        return [
            abs(b.normalized - a.normalized) * self.p ** a.e
            for a, b in zip(self.rows, self.rows[1:])
        ]

    def __len__(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class Estimate:
    eta: Fraction
    alpha: Fraction
    error_bound: float
    model: str
    samples_used: Tuple[int, int]
    residual: float = 0.0
    envelope: float = 0.0
    clamped: bool = False

    @property
    def value(self) -> float:
        return float(self.eta)


def hk_estimate(table: InvariantTable) -> Estimate:
    """
    Fit l_e = eta * q^d + alpha * q^(d-1) through the last two rows and bound
    the error by the worse of the fit residual at the third-last row and the
    empirical 2C/p^e envelope.
    """
    rows = table.rows
    if len(rows) < 3:
        raise InsufficientSamples(f"need at least 3 rows to estimate, got {len(rows)}")
    d = table.d
    scale = table.scale

    def powers(q: int) -> Tuple[Fraction, Fraction]:
        return Fraction(q) ** d, Fraction(q) ** (d - 1)

    r1, r2 = rows[-2], rows[-1]
    Q1, P1 = powers(r1.q)
    Q2, P2 = powers(r2.q)
    l1 = Fraction(r1.length, scale)
    l2 = Fraction(r2.length, scale)
    det = Q1 * P2 - Q2 * P1
    eta = (l1 * P2 - l2 * P1) / det
    alpha = (Q1 * l2 - Q2 * l1) / det

    r0 = rows[-3]
    Q0, P0 = powers(r0.q)
    residual = abs(Fraction(r0.length, scale) - (eta * Q0 + alpha * P0)) / Q0

    c_hat = max(table.envelope(), default=Fraction(0))
    envelope = 2 * c_hat / Fraction(table.p) ** r2.e
    bound = float(max(residual, envelope))

    normalized = table.normalized()
    lo, hi = min(normalized), max(normalized)
    if eta < lo - Fraction(bound) or eta > hi + Fraction(bound):
        bound = float(max(lo - eta, eta - hi))

    clamped = False
    if eta < 0:
        logger.info("negative limit estimate %s clamped to 0", eta)
        bound = max(bound, float(-eta))
        eta = Fraction(0)
        clamped = True

    return Estimate(
        eta=eta,
        alpha=alpha,
        error_bound=bound,
        model=f"l_e = eta*q^{d} + alpha*q^{d - 1}",
        samples_used=(r1.e, r2.e),
        residual=float(residual),
        envelope=float(envelope),
        clamped=clamped,
    )


def compute_rows(
    table: InvariantTable,
    es: Sequence[int],
    row_fn: Callable[[int], Tuple[int, Optional[int]]],
    threads: Optional[int] = None,
) -> InvariantTable:
    """
    Fill ``table`` with ``row_fn(e) -> (length, t)`` for each e. Rows are
    assembled in e order whatever the thread count; a budget failure returns
    the rows completed before it as the partial table.
    """
    threads = threads or config.THREADS
    if threads <= 1:
        for e in es:
            try:
                length, t = row_fn(e)
            except BudgetExceeded as exc:
                exc.partial = table
                raise
            table.add(e, length, t)
        return table

    pool = ThreadPoolExecutor(max_workers=threads)
    futures = [pool.submit(row_fn, e) for e in es]
    try:
        for e, future in zip(es, futures):
            try:
                length, t = future.result()
            except BudgetExceeded as exc:
                exc.partial = table
                raise
            table.add(e, length, t)
    except BaseException:
        # rows still running are abandoned, not awaited
        pool.shutdown(wait=False, cancel_futures=True)
        raise
    pool.shutdown()
    return table
