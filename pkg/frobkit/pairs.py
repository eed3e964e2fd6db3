"""
F-signature of pairs (R, a^xi) via the socle-colon formula with the
a-exponent twist: a_e = l(R/(J_t^[q] : a^n delta_t^q)), n = ceil(xi (q - 1)).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Dict, List, Optional, Sequence, Union

from . import config
from .errors import HypothesisViolation
from .ideals import QuotientIdeal, RingPresentation, bracket_power, ideal_colon, ideal_colon_ideal, strip_generators
from .invariants import SOP, ChainLink, check_sop, frobenius_range, gorenstein_socle, run_chain, validate_chain
from .polynomial import poly_mul
from .tables import Estimate, InvariantTable, hk_estimate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PairSpec:
    base: RingPresentation
    a: QuotientIdeal
    xi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "xi", Fraction(self.xi))
        if self.xi < 0:
            raise HypothesisViolation(f"pair exponent must be non-negative, got {self.xi}")
        if self.a.is_zero():
            raise HypothesisViolation("pair ideal must be nonzero")

    @classmethod
    def create(cls, base: RingPresentation, a: QuotientIdeal, xi: Union[str, int, Fraction]) -> "PairSpec":
        return cls(base, a, Fraction(xi))

    def exponent(self, q: int) -> int:
        """ceil(xi * (q - 1)) in integer arithmetic"""
        num = self.xi.numerator * (q - 1)
        return -(-num // self.xi.denominator)


def ideal_ceil_power(a: QuotientIdeal, n: int) -> QuotientIdeal:
    """
    a^n built one factor at a time. Products are deduplicated; when the
    generator count passes POWER_GENERATOR_CAP the step is replaced by the
    reduced Groebner basis of the lift.
    """
    if n < 0:
        raise ValueError("ideal powers need n >= 0")
    R = a.presentation
    if n == 0:
        return R.unit_ideal()
    base = strip_generators(R, a.generators)
    if not base:
        return R.zero_ideal()
    if len(base) == 1:
        return R.ideal([base[0] ** n])

    current = base
    for step in range(2, n + 1):
        current = strip_generators(R, (poly_mul(f, g) for f in current for g in base))
        if len(current) > config.POWER_GENERATOR_CAP:
            current = strip_generators(R, R.ideal(current).basis())
            logger.debug("a^%d reduced to %d generators", step, len(current))
    return R.ideal(current)


def parameter_power_chain(R: RingPresentation, sop: SOP, t_max: int) -> List[ChainLink]:
    """J_t = (x_1^t..x_d^t) with delta_t = (x_1...x_d)^(t-1) * delta"""
    if t_max < 1:
        raise ValueError("chain needs t_max >= 1")
    J = check_sop(R, sop)
    delta = gorenstein_socle(J)
    product = reduce(poly_mul, sop.elements, R.ambient.one())
    return [
        ChainLink(t, R.ideal([x ** t for x in sop.elements]), poly_mul(product ** (t - 1), delta))
        for t in range(1, t_max + 1)
    ]


def pair_fsig_function(
    spec: PairSpec,
    chain: Sequence[ChainLink],
    e_max: int,
    threads: Optional[int] = None,
) -> InvariantTable:
    """t-stabilized pair splitting numbers for e = 0..e_max"""
    R = spec.base
    es = frobenius_range(e_max)
    chain = validate_chain(R, chain)
    table = InvariantTable("PAIR", R.p, R.d)
    table.diagnostics["xi"] = f"{spec.xi.numerator}/{spec.xi.denominator}"
    table.diagnostics["chain_length"] = len(chain)
    powers: Dict[int, QuotientIdeal] = {n: ideal_ceil_power(spec.a, n) for n in {spec.exponent(R.p ** e) for e in es}}

    def colon(link: ChainLink, e: int) -> QuotientIdeal:
        inner = ideal_colon(bracket_power(link.ideal, e), link.socle.frobenius(e))
        n = spec.exponent(R.p ** e)
        if n == 0 or inner.is_unit():
            return inner
        return ideal_colon_ideal(inner, powers[n])

    return run_chain(table, R, chain, es, colon, threads)


def pair_fsig_estimate(table: InvariantTable) -> Estimate:
    return hk_estimate(table)
