"""
Reduced Groebner bases over prime fields.

Buchberger's algorithm with normal pair selection (degree of the lcm, then
the monomial order) and Gebauer-Moeller pair elimination. Reduction works on
dict-based polynomials with a heap keyed by the monomial order so the largest
remaining monomial is always processed next.
"""

import heapq
import itertools
import logging
import threading
import time
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .config import Budget
from .errors import BudgetExceeded, NotZeroDimensional, RingMismatch, UnitIdeal
from .polynomial import (
    Monomial,
    MonomialOrder,
    Polynomial,
    PolyRing,
    Term,
    mono_coprime,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)

logger = logging.getLogger(__name__)


@dataclass
class GBStats:
    spairs: int = 0
    reductions: int = 0
    steps: int = 0
    elapsed: float = 0.0
    basis_size: int = 0

    def as_dict(self) -> dict:
        return {
            "spairs": self.spairs,
            "reductions": self.reductions,
            "steps": self.steps,
            "basis_size": self.basis_size,
        }


class _Meter:
    """Counts work against a Budget"""

    def __init__(self, budget: Optional[Budget]):
        self.budget = budget or Budget.from_config()
        self.stats = GBStats()
        self.started = time.monotonic()
        self.deadline = self.budget.deadline()

    def reduction(self) -> None:
        self.stats.reductions += 1
        if self.stats.reductions > self.budget.max_reductions:
            self._exceeded(f"reduction budget of {self.budget.max_reductions} exhausted")
        if self.deadline is not None and time.monotonic() > self.deadline:
            self._exceeded(f"time budget of {self.budget.timeout}s exhausted")

    def spair(self) -> None:
        self.stats.spairs += 1
        if self.stats.spairs > self.budget.max_spairs:
            self._exceeded(f"S-pair budget of {self.budget.max_spairs} exhausted")

    def finish(self) -> GBStats:
        self.stats.elapsed = time.monotonic() - self.started
        return self.stats

    def _exceeded(self, message: str) -> None:
        raise BudgetExceeded(message, stats=self.finish())


# A basis element in working form: monic, leading monomial split off
_Element = Tuple[Monomial, Tuple[Term, ...]]


class _Reducer:
    """Full reduction of dict polynomials by a list of monic elements"""

    def __init__(self, ring: PolyRing, meter: _Meter):
        self.p = ring.p
        self.neg_key = ring.order.neg_key
        self.meter = meter

    def reduce(self, poly: Dict[Monomial, int], basis: Sequence[_Element]) -> List[Term]:
        p = self.p
        nk = self.neg_key
        heap = [(nk(m), m) for m in poly]
        heapq.heapify(heap)
        lms = [(lm, sum(lm), tail) for lm, tail in basis]
        remainder: List[Term] = []
        while heap:
            _, m = heapq.heappop(heap)
            c = poly.pop(m, 0)
            if not c:
                continue
            deg = sum(m)
            for lm, lm_deg, tail in lms:
                if lm_deg <= deg and mono_divides(lm, m):
                    break
            else:
                remainder.append((m, c))
                continue
            self.meter.stats.steps += 1
            u = mono_div(m, lm)
            for tm, tc in tail:
                mm = mono_mul(u, tm)
                old = poly.get(mm)
                if old is None:
                    new = -c * tc % p
                    if new:
                        poly[mm] = new
                        heapq.heappush(heap, (nk(mm), mm))
                else:
                    new = (old - c * tc) % p
                    if new:
                        poly[mm] = new
                    else:
                        del poly[mm]
        return remainder


def _to_element(terms: List[Term], p: int) -> _Element:
    lm, lc = terms[0]
    if lc == 1:
        return lm, tuple(terms[1:])
    inv = pow(lc, -1, p)
    return lm, tuple((m, c * inv % p) for m, c in terms[1:])


def _element_poly(ring: PolyRing, element: _Element) -> Polynomial:
    lm, tail = element
    return Polynomial(ring, ((lm, 1),) + tail)


def _spoly(a: _Element, b: _Element, lcm: Monomial, p: int) -> Dict[Monomial, int]:
    ua = mono_div(lcm, a[0])
    ub = mono_div(lcm, b[0])
    acc: Dict[Monomial, int] = {}
    for m, c in a[1]:
        mm = mono_mul(ua, m)
        acc[mm] = (acc.get(mm, 0) + c) % p
    for m, c in b[1]:
        mm = mono_mul(ub, m)
        acc[mm] = (acc.get(mm, 0) - c) % p
    return {m: c for m, c in acc.items() if c}


def _update(active: List[int], pairs: list, h: int, lms: List[Monomial]):
    """Gebauer-Moeller installation of a new basis element h"""
    lm_h = lms[h]
    candidates = list(active)
    kept: List[int] = []
    while candidates:
        g1 = candidates.pop(0)
        l1 = mono_lcm(lm_h, lms[g1])
        if mono_coprime(lm_h, lms[g1]):
            kept.append(g1)
            continue
        redundant = any(mono_divides(mono_lcm(lm_h, lms[g2]), l1) for g2 in candidates) or any(
            mono_divides(mono_lcm(lm_h, lms[g2]), l1) for g2 in kept
        )
        if not redundant:
            kept.append(g1)
    new_pairs = [g for g in kept if not mono_coprime(lm_h, lms[g])]

    survivors = []
    for lcm, g1, g2 in pairs:
        if (
            not mono_divides(lm_h, lcm)
            or mono_lcm(lms[g1], lm_h) == lcm
            or mono_lcm(lm_h, lms[g2]) == lcm
        ):
            survivors.append((lcm, g1, g2))
    survivors.extend((mono_lcm(lms[g], lm_h), g, h) for g in new_pairs)

    new_active = [g for g in active if not mono_divides(lm_h, lms[g])]
    new_active.append(h)
    return new_active, survivors


class GroebnerBasis:
    """A reduced Groebner basis: monic, auto-reduced, sorted ascending"""

    def __init__(self, ring: PolyRing, generators: Sequence[Polynomial], stats: Optional[GBStats] = None):
        self.ring = ring
        self.order = ring.order
        self.generators: Tuple[Polynomial, ...] = tuple(generators)
        self.stats = stats or GBStats(basis_size=len(self.generators))
        self._elements: List[_Element] = [
            (g.terms[0][0], g.terms[1:]) for g in self.generators
        ]

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroebnerBasis):
            return NotImplemented
        return self.ring == other.ring and self.generators == other.generators

    def __hash__(self) -> int:
        return hash((self.ring, self.generators))

    def leading_monomials(self) -> List[Monomial]:
        return [lm for lm, _ in self._elements]

    def is_unit(self) -> bool:
        return any(not any(lm) for lm in self.leading_monomials())

    def is_zero(self) -> bool:
        return not self.generators

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.ring.variables != self.ring.variables or f.ring.p != self.ring.p:
            raise RingMismatch(f"{f.ring} vs {self.ring}")
        f = f.change_ring(self.ring)
        if f.is_zero() or not self._elements:
            return f
        meter = _Meter(Budget(max_reductions=float("inf"), max_spairs=0, timeout=0))
        remainder = _Reducer(self.ring, meter).reduce(dict(f.terms), self._elements)
        return Polynomial(self.ring, tuple(remainder))

    def contains(self, f: Polynomial) -> bool:
        return self.normal_form(f).is_zero()

    def is_zero_dimensional(self) -> bool:
        n = self.ring.nvars
        pure = [False] * n
        for lm in self.leading_monomials():
            support = [i for i, e in enumerate(lm) if e]
            if not support:
                return True
            if len(support) == 1:
                pure[support[0]] = True
        return all(pure)

    def standard_monomials(self) -> Iterator[Monomial]:
        """Monomials outside the leading-term ideal, by staircase traversal"""
        if not self.is_zero_dimensional():
            raise NotZeroDimensional("leading-term ideal has no pure power for some variable")
        lms = self.leading_monomials()
        n = self.ring.nvars

        def divisible(m: Monomial) -> bool:
            return any(mono_divides(lm, m) for lm in lms)

        def walk(i: int, prefix: Tuple[int, ...]) -> Iterator[Monomial]:
            if i == n:
                yield prefix
                return
            zeros = (0,) * (n - i - 1)
            a = 0
            while not divisible(prefix + (a,) + zeros):
                yield from walk(i + 1, prefix + (a,))
                a += 1

        yield from walk(0, ())

    def colength(self) -> int:
        return sum(1 for _ in self.standard_monomials())

    def krull_dimension(self) -> int:
        if self.is_unit():
            raise UnitIdeal("the ideal contains 1")
        n = self.ring.nvars
        supports = [frozenset(i for i, e in enumerate(lm) if e) for lm in self.leading_monomials()]
        for k in range(n, -1, -1):
            for subset in itertools.combinations(range(n), k):
                chosen = frozenset(subset)
                if not any(s <= chosen for s in supports):
                    return k
        return 0


def buchberger(
    gens: Sequence[Polynomial],
    order: Optional[MonomialOrder] = None,
    budget: Optional[Budget] = None,
) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``"""
    gens = list(gens)
    if not gens:
        raise ValueError("buchberger needs at least one generator to know the ring")
    ring = gens[0].ring
    for g in gens[1:]:
        if g.ring.variables != ring.variables or g.ring.p != ring.p:
            raise RingMismatch(f"{g.ring} vs {ring}")
    if order is not None and order != ring.order:
        ring = ring.with_order(order)
    gens = [g.change_ring(ring) for g in gens if not g.is_zero()]

    meter = _Meter(budget)
    reducer = _Reducer(ring, meter)
    p = ring.p
    key = ring.order.key

    elements: List[_Element] = []
    lms: List[Monomial] = []
    active: List[int] = []
    pairs: list = []

    def install(terms: List[Term]) -> bool:
        nonlocal active, pairs
        element = _to_element(terms, p)
        if not any(element[0]):
            return True
        elements.append(element)
        lms.append(element[0])
        active, pairs = _update(active, pairs, len(elements) - 1, lms)
        return False

    unit = False
    for g in sorted(gens, key=lambda g: key(g.leading_monomial())):
        meter.reduction()
        remainder = reducer.reduce(dict(g.terms), [elements[i] for i in active])
        if remainder and install(remainder):
            unit = True
            break

    while pairs and not unit:
        best = min(range(len(pairs)), key=lambda k: (sum(pairs[k][0]), key(pairs[k][0]), pairs[k][1], pairs[k][2]))
        lcm, i, j = pairs.pop(best)
        meter.spair()
        s = _spoly(elements[i], elements[j], lcm, p)
        if not s:
            continue
        meter.reduction()
        remainder = reducer.reduce(s, [elements[k] for k in active])
        if remainder and install(remainder):
            unit = True

    if unit:
        stats = meter.finish()
        stats.basis_size = 1
        return GroebnerBasis(ring, [ring.one()], stats)

    minimal = [elements[i] for i in active]
    reduced: List[Polynomial] = []
    for k, (lm, tail) in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1:]
        meter.reduction()
        new_tail = reducer.reduce(dict(tail), others) if tail else []
        reduced.append(Polynomial(ring, ((lm, 1),) + tuple(new_tail)))
    reduced.sort(key=lambda g: key(g.terms[0][0]))

    stats = meter.finish()
    stats.basis_size = len(reduced)
    logger.debug(
        "groebner basis: %d elements, %d S-pairs, %d reductions, %.3fs",
        len(reduced), stats.spairs, stats.reductions, stats.elapsed,
    )
    return GroebnerBasis(ring, reduced, stats)


class IdealHandle:
    """
    Generators of an ideal in a polynomial ring plus a lazily computed
    reduced Groebner basis. The basis is computed at most once even under
    concurrent access.
    """

    def __init__(self, ring: PolyRing, generators: Sequence[Polynomial], budget: Optional[Budget] = None):
        for g in generators:
            if g.ring != ring:
                raise RingMismatch(f"generator {g} is not in {ring}")
        self.ring = ring
        self.generators: Tuple[Polynomial, ...] = tuple(g for g in generators if not g.is_zero())
        self.budget = budget
        self._gb: Optional[GroebnerBasis] = None
        self._lock = threading.Lock()

    def groebner(self) -> GroebnerBasis:
        if self._gb is None:
            with self._lock:
                if self._gb is None:
                    if self.generators:
                        self._gb = buchberger(self.generators, budget=self.budget)
                    else:
                        self._gb = GroebnerBasis(self.ring, [])
        return self._gb

    @property
    def has_groebner(self) -> bool:
        return self._gb is not None

    def normal_form(self, f: Polynomial) -> Polynomial:
        return self.groebner().normal_form(f)

    def contains(self, f: Polynomial) -> bool:
        return self.groebner().contains(f)

    def __contains__(self, f: Polynomial) -> bool:
        return self.contains(f)

    def issubset(self, other: "IdealHandle") -> bool:
        return all(other.contains(g) for g in self.generators)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IdealHandle):
            return NotImplemented
        return self.ring == other.ring and self.groebner() == other.groebner()

    def __hash__(self) -> int:
        return hash(self.groebner())

    def is_unit(self) -> bool:
        return self.groebner().is_unit()

    def __str__(self) -> str:
        return "(" + ", ".join(str(g) for g in self.generators) + ")"


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    return gb.normal_form(f)


def standard_monomials(ideal: IdealHandle) -> List[Monomial]:
    return list(ideal.groebner().standard_monomials())


def is_zero_dimensional(ideal: IdealHandle) -> bool:
    return ideal.groebner().is_zero_dimensional()


def colength(ideal: IdealHandle) -> int:
    """Exact F_p-dimension of S/I, the number of standard monomials"""
    gb = ideal.groebner()
    if not gb.is_zero_dimensional():
        raise NotZeroDimensional(f"{ideal} is not zero-dimensional")
    return gb.colength()


def krull_dimension(ideal: IdealHandle) -> int:
    """Dimension of S/I: largest variable set independent modulo the leading-term ideal"""
    return ideal.groebner().krull_dimension()
