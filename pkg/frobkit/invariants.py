"""
Frobenius invariants of R = S/Q computed as exact colength tables:
Hilbert-Kunz functions, F-splitting numbers through socle colons, relative
Hilbert-Kunz differences, tight-closure evidence, the splitting prime probe
and the generic ideal-sequence limit engine.
"""

import itertools
import logging
import math
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .config import DEFAULT_TAU
from .errors import (
    BudgetExceeded,
    ChainExhausted,
    HypothesisViolation,
    IdentityViolation,
    NotFPure,
    NotGorenstein,
    NotHypersurface,
    NotIrreducible,
    NotZeroDimensional,
    SOPNotFound,
    UnitIdeal,
)
from .groebner import is_zero_dimensional
from .ideals import (
    QuotientIdeal,
    RingPresentation,
    bracket_power,
    ideal_colon,
    ideal_intersect,
    ideal_sum,
    socle_dimension,
    socle_generator,
)
from .polynomial import Polynomial
from .tables import Estimate, InvariantTable, compute_rows, hk_estimate

logger = logging.getLogger(__name__)

SOP_RETRIES = 64

IN_IDEAL = "InIdeal"
IN_CLOSURE_LIKELY = "InClosureLikely"
NOT_IN_CLOSURE = "NotInClosure"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class SOP:
    elements: Tuple[Polynomial, ...]
    seed: int = 0

    def __len__(self) -> int:
        return len(self.elements)


@dataclass
class ChainLink:
    """One irreducible ideal J_t of a descending chain with its socle generator"""
    t: int
    ideal: QuotientIdeal
    socle: Optional[Polynomial] = None


@dataclass
class TCVerdict:
    status: str
    estimate: Optional[Estimate] = None
    table: Optional[InvariantTable] = None
    multiplier: Optional[QuotientIdeal] = None
    flags: Dict[str, bool] = field(default_factory=dict)


@dataclass
class SplittingPrimeResult:
    ideal: QuotientIdeal
    stabilized: bool
    n_est: int
    rf_estimate: Estimate
    table: InvariantTable
    intersection_colengths: List[int] = field(default_factory=list)


@dataclass
class SequenceLimitResult:
    table: InvariantTable
    estimate: Estimate
    intersection: QuotientIdeal
    stable_part: QuotientIdeal
    stable_part_is_zero: bool
    intersection_colengths: List[int] = field(default_factory=list)


def frobenius_range(e_max: int) -> range:
    if e_max < 1:
        raise ValueError(f"e_max must be at least 1, got {e_max}")
    return range(0, e_max + 1)


# Hilbert-Kunz

def hk_function(R: RingPresentation, I: QuotientIdeal, e_max: int, threads: Optional[int] = None) -> InvariantTable:
    """l(R/I^[q]) for e = 0..e_max"""
    es = frobenius_range(e_max)
    if I.is_unit():
        raise UnitIdeal(f"{I} is the unit ideal")
    if not is_zero_dimensional(I.lift):
        raise NotZeroDimensional(f"{I} is not m-primary")
    table = InvariantTable("HK", R.p, R.d)

    def row(e: int):
        return bracket_power(I, e).colength(), None

    return compute_rows(table, es, row, threads)


# Systems of parameters

def is_m_primary(J: QuotientIdeal) -> bool:
    """
    J is m-primary when R/J is finite and adding m^[q] for some q at least
    l(R/J) does not lower the colength; a drop means R/J has points away
    from the origin.
    """
    if J.is_unit() or not is_zero_dimensional(J.lift):
        return False
    n = J.colength()
    R = J.presentation
    e = 0
    while R.p ** e < n:
        e += 1
    return ideal_sum(J, bracket_power(R.m, e)).colength() == n


def _m_primary_with(R: RingPresentation, elements: Sequence[Polynomial]) -> bool:
    return is_m_primary(R.ideal(elements))


def _random_form(R: RingPresentation, rng: random.Random, degree: int) -> Polynomial:
    ring = R.ambient
    n = ring.nvars
    terms = {}
    for combo in itertools.combinations_with_replacement(range(n), degree):
        exps = [0] * n
        for i in combo:
            exps[i] += 1
        terms[tuple(exps)] = rng.randrange(R.p)
    f = ring.from_dict(terms)
    if f.is_zero():
        return ring.gen(rng.randrange(n)) ** degree
    return f


def find_sop(R: RingPresentation, seed: int = 0, prefer_variables: bool = True) -> SOP:
    """
    d elements whose sum with Q is m-primary. Variable subsets are tried
    first, then seeded random linear forms, then quadratic forms.
    """
    d = R.d
    if d == 0:
        return SOP((), seed)
    ring = R.ambient
    if prefer_variables:
        for subset in itertools.combinations(range(ring.nvars), d):
            elements = tuple(ring.gen(i) for i in subset)
            if _m_primary_with(R, elements):
                return SOP(elements, seed)

    rng = random.Random(seed)
    for degree in (1, 2):
        for attempt in range(SOP_RETRIES):
            elements = tuple(_random_form(R, rng, degree) for _ in range(d))
            if _m_primary_with(R, elements):
                logger.info("system of parameters found with degree %d forms after %d attempts", degree, attempt + 1)
                return SOP(elements, seed)
    raise SOPNotFound(f"no system of parameters found for {R} after {2 * SOP_RETRIES} attempts; supply one in the ring file")


def check_sop(R: RingPresentation, sop: SOP) -> QuotientIdeal:
    if len(sop) != R.d:
        raise HypothesisViolation(f"a system of parameters needs {R.d} elements, got {len(sop)}")
    J = R.ideal(sop.elements)
    if not is_m_primary(J):
        raise HypothesisViolation(f"{J} is not m-primary, so it is not a system of parameters")
    return J


# F-signature

def gorenstein_socle(J: QuotientIdeal) -> Polynomial:
    try:
        return socle_generator(J)
    except NotIrreducible as exc:
        raise NotGorenstein(
            f"parameter ideal {J} is not irreducible (socle dimension {exc.socle_dimension}); R is not Gorenstein",
            socle_dimension=exc.socle_dimension,
        ) from exc


def _fsig_ideal(J: QuotientIdeal, delta: Polynomial, e: int) -> QuotientIdeal:
    return ideal_colon(bracket_power(J, e), delta.frobenius(e))


def fsig_ideals_gorenstein(R: RingPresentation, sop: SOP, e_max: int) -> List[QuotientIdeal]:
    """I_e = (J^[q] : delta^q) for e = 0..e_max with J = (sop)"""
    es = frobenius_range(e_max)
    J = check_sop(R, sop)
    delta = gorenstein_socle(J)
    return [_fsig_ideal(J, delta, e) for e in es]


def fsig_function_gorenstein(R: RingPresentation, sop: SOP, e_max: int, threads: Optional[int] = None) -> InvariantTable:
    """F-splitting numbers a_e = l(R/(J^[q] : delta^q))"""
    es = frobenius_range(e_max)
    J = check_sop(R, sop)
    delta = gorenstein_socle(J)
    table = InvariantTable("FSIG", R.p, R.d)
    table.diagnostics["socle_generator"] = str(delta)

    def row(e: int):
        ideal = _fsig_ideal(J, delta, e)
        table.ideals[e] = ideal
        return ideal.colength(), None

    return compute_rows(table, es, row, threads)


def is_f_pure(R: RingPresentation, sop: SOP) -> bool:
    """a_1 >= 1"""
    return fsig_function_gorenstein(R, sop, 1).row(1).length >= 1


def validate_chain(R: RingPresentation, chain: Sequence[ChainLink]) -> List[ChainLink]:
    """Check the chain descends and fill in or verify socle generators"""
    checked = []
    previous = None
    for link in chain:
        J = link.ideal
        if previous is not None and not J.issubset(previous.ideal):
            raise HypothesisViolation(f"chain is not descending at t = {link.t}")
        if link.socle is None:
            socle = socle_generator(J)
        else:
            socle = link.socle
            if J.contains(socle) or not all(J.contains(x * socle) for x in R.ambient.gens()):
                raise HypothesisViolation(f"{socle} does not generate the socle of R/J_{link.t}")
            dim = socle_dimension(J)
            if dim != 1:
                raise NotIrreducible(f"J_{link.t} is not irreducible", socle_dimension=dim)
        link = ChainLink(link.t, J, socle)
        checked.append(link)
        previous = link
    return checked


def chain_stabilize(
    R: RingPresentation,
    chain: Sequence[ChainLink],
    e: int,
    colon_fn,
) -> Tuple[int, Optional[int], QuotientIdeal]:
    """
    Walk the chain until two consecutive colon colengths agree. Returns the
    value, the t it settled at (None if it never did) and the last ideal.
    """
    prev = None
    ideal = None
    for link in chain:
        ideal = colon_fn(link, e)
        value = ideal.colength()
        if prev is not None and value == prev:
            logger.debug("e=%d stabilized at t=%d with value %d", e, link.t, value)
            return value, link.t, ideal
        prev = value
    return prev, None, ideal


def run_chain(
    table: InvariantTable,
    R: RingPresentation,
    chain: Sequence[ChainLink],
    es,
    colon_fn,
    threads: Optional[int],
) -> InvariantTable:
    unstable: List[int] = []

    def row(e: int):
        value, t, ideal = chain_stabilize(R, chain, e, colon_fn)
        table.ideals[e] = ideal
        if t is None:
            unstable.append(e)
        return value, t

    compute_rows(table, es, row, threads)
    if unstable:
        table.diagnostics["unstabilized_e"] = sorted(unstable)
        logger.warning("chain of length %d did not stabilize for e in %s", len(chain), sorted(unstable))
        raise ChainExhausted(
            f"t-stabilization not reached within {len(chain)} chain members for e = {sorted(unstable)}",
            partial=table,
        )
    return table


def fsig_function_chain(
    R: RingPresentation,
    chain: Sequence[ChainLink],
    e_max: int,
    threads: Optional[int] = None,
) -> InvariantTable:
    """a_e through t-stabilization of l(R/(J_t^[q] : delta_t^q)) along the chain"""
    es = frobenius_range(e_max)
    chain = validate_chain(R, chain)
    table = InvariantTable("FSIG", R.p, R.d)
    table.diagnostics["chain_length"] = len(chain)

    def colon(link: ChainLink, e: int) -> QuotientIdeal:
        return _fsig_ideal(link.ideal, link.socle, e)

    return run_chain(table, R, chain, es, colon, threads)


def fedder_hypersurface_oracle(R: RingPresentation, e_max: int, threads: Optional[int] = None) -> InvariantTable:
    """l_S(S/((m^[q] : f^(q-1)) + (f))) for a hypersurface R = S/(f)"""
    es = frobenius_range(e_max)
    f = R.hypersurface_equation()
    if f is None:
        raise NotHypersurface(f"defining ideal of {R} is not principal")
    S = RingPresentation(R.ambient, (), R.budget)
    table = InvariantTable("FSIG", R.p, R.d)
    table.diagnostics["method"] = "fedder"

    def row(e: int):
        q = R.p ** e
        colon = ideal_colon(bracket_power(S.m, e), f ** (q - 1))
        return ideal_sum(colon, S.ideal([f])).colength(), None

    return compute_rows(table, es, row, threads)


# Relative Hilbert-Kunz

def relative_hk(
    R: RingPresentation,
    I: QuotientIdeal,
    x: Polynomial,
    e_max: int,
    threads: Optional[int] = None,
) -> InvariantTable:
    """
    l(R/I^[q]) - l(R/(I, x)^[q]) and l(R/(I^[q] : x^q)) computed
    independently for every e; they must agree exactly.
    """
    es = frobenius_range(e_max)
    if not is_zero_dimensional(I.lift):
        raise NotZeroDimensional(f"{I} is not m-primary")
    table = InvariantTable("RELHK", R.p, R.d)
    Ix = ideal_sum(I, R.ideal([x]))

    def row(e: int):
        Iq = bracket_power(I, e)
        difference = Iq.colength() - bracket_power(Ix, e).colength()
        colon = ideal_colon(Iq, x.frobenius(e))
        table.ideals[e] = colon
        length = colon.colength()
        if difference != length:
            raise IdentityViolation(
                f"e={e}: l(R/I^[q]) - l(R/(I,x)^[q]) = {difference} but l(R/(I^[q]:x^q)) = {length}"
            )
        return length, None

    return compute_rows(table, es, row, threads)


def relative_hk_ratio(
    R: RingPresentation,
    I: QuotientIdeal,
    J: QuotientIdeal,
    e_max: int,
    threads: Optional[int] = None,
) -> InvariantTable:
    """(l(R/I^[q]) - l(R/J^[q])) / l(J/I) for m-primary I strictly inside J"""
    es = frobenius_range(e_max)
    if not I.issubset(J):
        raise HypothesisViolation(f"{I} is not contained in {J}")
    gap = I.colength() - J.colength()
    if gap == 0:
        raise HypothesisViolation(f"{I} and {J} are equal")
    table = InvariantTable("RELHK-RATIO", R.p, R.d, scale=gap)

    def row(e: int):
        return bracket_power(I, e).colength() - bracket_power(J, e).colength(), None

    return compute_rows(table, es, row, threads)


# Tight closure

def _nonincreasing(values) -> bool:
    return all(a >= b for a, b in zip(values, values[1:]))


def tc_membership(
    R: RingPresentation,
    I: QuotientIdeal,
    x: Polynomial,
    e_max: int,
    tau: float = DEFAULT_TAU,
    threads: Optional[int] = None,
) -> TCVerdict:
    """Evidence-grade verdict on whether x lies in the tight closure of I"""
    if I.contains(x):
        return TCVerdict(IN_IDEAL)
    try:
        table = relative_hk(R, I, x, e_max, threads)
        estimate = hk_estimate(table)
        later = [r.normalized for r in table.rows if r.e >= 1]
        if estimate.eta >= tau and min(later) >= tau and _nonincreasing(later):
            return TCVerdict(NOT_IN_CLOSURE, estimate, table)

        colons = [table.ideals[r.e] for r in table.rows]
        multiplier = colons[0]
        previous = None
        for colon in colons[1:]:
            previous = multiplier
            multiplier = ideal_intersect(multiplier, colon)
        flags = {"multiplier_stabilized": previous is not None and multiplier == previous}
        if not multiplier.is_zero() and flags["multiplier_stabilized"]:
            return TCVerdict(IN_CLOSURE_LIKELY, estimate, table, multiplier, flags)
        return TCVerdict(INCONCLUSIVE, estimate, table, multiplier, flags)
    except BudgetExceeded as exc:
        logger.warning("tight closure test ran out of budget: %s", exc.message)
        return TCVerdict(INCONCLUSIVE, table=exc.partial, flags={"budget_exceeded": True})


# Splitting prime

def stable_part(older: QuotientIdeal, newer: QuotientIdeal) -> QuotientIdeal:
    """
    The ideal generated by the reduced-basis elements shared by two
    intersections. Generators still moving with q (such as z^q) drop out,
    so what remains approximates the intersection over all e.
    """
    shared = set(older.basis())
    return newer.presentation.ideal(g for g in newer.basis() if g in shared)


def _growth_dimension(R: RingPresentation, lengths: Sequence[int]) -> int:
    a_prev, a_last = lengths[-2], lengths[-1]
    if a_prev <= 0 or a_last <= 0:
        return R.d
    return min(max(round(math.log(a_last / a_prev, R.p)), 0), R.d)


def splitting_prime_probe(R: RingPresentation, fsig_ideals: Sequence[QuotientIdeal]) -> SplittingPrimeResult:
    """
    Intersect the F-signature ideals I_e and keep the generators that
    persist between the last intersections. n is the dimension of R modulo
    that part, cross-checked against the growth rate of a_e.
    """
    if len(fsig_ideals) < 3:
        raise HypothesisViolation("splitting prime probe needs F-signature ideals for e = 0, 1, 2 at least")
    lengths = [I.colength() for I in fsig_ideals]
    if lengths[1] == 0:
        raise NotFPure(f"a_1 = 0, so {R} is not F-pure")

    intersections = [fsig_ideals[0]]
    for I in fsig_ideals[1:]:
        intersections.append(ideal_intersect(intersections[-1], I))
    intersection_colengths = [I.colength() for I in intersections]

    ideal = stable_part(intersections[-2], intersections[-1])
    stabilized = ideal == stable_part(intersections[-3], intersections[-2])
    growth_n = _growth_dimension(R, lengths)
    if stabilized:
        n_est = ideal.krull_dimension()
        if n_est != growth_n:
            logger.warning("splitting prime has dimension %d but a_e grows like q^%d", n_est, growth_n)
    else:
        n_est = growth_n
        logger.info("splitting prime generators did not stabilize; growth gives n = %d", n_est)

    table = InvariantTable("SPLIT", R.p, n_est)
    for e, length in enumerate(lengths):
        table.add(e, length)
    table.diagnostics["stabilized"] = stabilized
    table.diagnostics["growth_n"] = growth_n
    return SplittingPrimeResult(ideal, stabilized, n_est, hk_estimate(table), table, intersection_colengths)


# Sequence limits

def sequence_limit(
    R: RingPresentation,
    seq: Sequence[QuotientIdeal],
    d_override: Optional[int] = None,
    kind: str = "SEQ",
) -> SequenceLimitResult:
    """
    Limit of l(R/I_e)/q^d for a user sequence with m^[q] inside every I_e.
    The running intersections are m-primary at every finite e, so the
    positivity evidence is their stable part: the generators shared by the
    last two distinct intersections.
    """
    d = R.d if d_override is None else d_override
    table = InvariantTable(kind, R.p, d)
    running = None
    distinct: List[QuotientIdeal] = []
    colengths = []
    for e, I in enumerate(seq):
        mq = bracket_power(R.m, e)
        if not mq.issubset(I):
            raise HypothesisViolation(f"m^[{R.p}^{e}] is not contained in I_{e}")
        table.add(e, I.colength())
        table.ideals[e] = I
        running = I if running is None else ideal_intersect(running, I)
        colengths.append(running.colength())
        if not distinct or running != distinct[-1]:
            distinct.append(running)
    if running is None:
        raise HypothesisViolation("empty sequence")
    stable = stable_part(distinct[-2], distinct[-1]) if len(distinct) > 1 else running
    estimate = hk_estimate(table)
    return SequenceLimitResult(table, estimate, running, stable, stable.is_zero(), colengths)


def hk_sequence(I: QuotientIdeal, e_max: int) -> List[QuotientIdeal]:
    return [bracket_power(I, e) for e in frobenius_range(e_max)]


def fsig_sequence(R: RingPresentation, sop: SOP, e_max: int) -> List[QuotientIdeal]:
    return fsig_ideals_gorenstein(R, sop, e_max)


def half_frobenius_sequence(I: QuotientIdeal, e_max: int) -> List[QuotientIdeal]:
    """I_e = I^[p^floor(e/2)]; its limit is 0 while the intersection is 0"""
    return [bracket_power(I, e // 2) for e in frobenius_range(e_max)]


def fsig_hk_sequence(R: RingPresentation, sop: SOP, t: int, e_max: int) -> List[QuotientIdeal]:
    """I_e^F-sig for e <= t, then (I_t^F-sig)^[p^(e-t)]"""
    ideals = fsig_ideals_gorenstein(R, sop, max(1, min(t, e_max)))
    return [ideals[e] if e <= t else bracket_power(ideals[t], e - t) for e in frobenius_range(e_max)]


def hk_of_fsig_ideal_sequence(
    R: RingPresentation,
    fsig_ideal: QuotientIdeal,
    t: int,
    e_max: int,
    threads: Optional[int] = None,
) -> InvariantTable:
    """
    l(R/(I_t)^[p^e]) recorded at iterate t + e, so the normalized limit is
    e_HK(I_t)/p^(td), which tends to the F-signature as t grows.
    """
    es = [t + e for e in frobenius_range(e_max)]
    table = InvariantTable("FSIG-HK", R.p, R.d)

    def row(e: int):
        return bracket_power(fsig_ideal, e - t).colength(), None

    return compute_rows(table, es, row, threads)
