"""
Ideal calculus in a quotient ring R = S/Q.

An R-ideal is stored as the S-ideal generated by its own generators together
with the generators of Q. Membership, equality and colength computed on that
lift are therefore intrinsic to R. Colons and intersections go through a tag
variable eliminated with a block order.
"""

import functools
import logging
from typing import Iterable, List, Optional, Sequence, Tuple

from .config import Budget
from .errors import HypothesisViolation, NotIrreducible, RingMismatch, UnitIdeal
from .groebner import IdealHandle, buchberger, colength, krull_dimension
from .polynomial import MonomialOrder, Polynomial, PolyRing, poly_divide_exact, poly_mul

logger = logging.getLogger(__name__)

TAG_VARIABLE = "_tag"


class RingPresentation:
    """R = S/Q with S = F_p[x_1..x_n] and the irrelevant ideal m = (x_1..x_n)"""

    def __init__(self, ambient: PolyRing, relations: Sequence[Polynomial] = (), budget: Optional[Budget] = None):
        self.ambient = ambient
        self.budget = budget
        self.relations: Tuple[Polynomial, ...] = tuple(r for r in relations if not r.is_zero())
        self.Q = IdealHandle(ambient, self.relations, budget)

    @functools.cached_property
    def d(self) -> int:
        if self.Q.is_unit():
            raise UnitIdeal("the defining ideal is the unit ideal")
        return krull_dimension(self.Q)

    @functools.cached_property
    def m(self) -> "QuotientIdeal":
        return self.ideal(self.ambient.gens())

    @property
    def p(self) -> int:
        return self.ambient.p

    def ideal(self, generators: Iterable[Polynomial]) -> "QuotientIdeal":
        return QuotientIdeal(self, generators)

    def zero_ideal(self) -> "QuotientIdeal":
        return QuotientIdeal(self, ())

    def unit_ideal(self) -> "QuotientIdeal":
        return QuotientIdeal(self, (self.ambient.one(),))

    def reduce(self, f: Polynomial) -> Polynomial:
        """Normal form modulo Q"""
        return self.Q.normal_form(f)

    def is_zero(self, f: Polynomial) -> bool:
        return self.Q.contains(f)

    def hypersurface_equation(self) -> Optional[Polynomial]:
        """The single generator of Q when its reduced Groebner basis has one element"""
        gb = self.Q.groebner()
        if len(gb) != 1:
            return None
        return gb.generators[0]

    def with_budget(self, budget: Optional[Budget]) -> "RingPresentation":
        return RingPresentation(self.ambient, self.relations, budget)

    def __str__(self) -> str:
        if not self.relations:
            return str(self.ambient)
        return f"{self.ambient} / ({', '.join(str(r) for r in self.relations)})"


class QuotientIdeal:
    """An ideal of R = S/Q; ``lift`` is the S-ideal containing Q"""

    def __init__(self, presentation: RingPresentation, generators: Iterable[Polynomial]):
        ring = presentation.ambient
        gens = []
        for g in generators:
            if g.ring.variables != ring.variables or g.ring.p != ring.p:
                raise RingMismatch(f"generator {g} is not in {ring}")
            g = g.change_ring(ring)
            if not g.is_zero():
                gens.append(g)
        self.presentation = presentation
        self.generators: Tuple[Polynomial, ...] = tuple(gens)
        self.lift = IdealHandle(ring, self.generators + presentation.relations, presentation.budget)

    @property
    def ring(self) -> PolyRing:
        return self.presentation.ambient

    def colength(self) -> int:
        return colength(self.lift)

    def contains(self, f: Polynomial) -> bool:
        return self.lift.contains(f)

    def __contains__(self, f: Polynomial) -> bool:
        return self.contains(f)

    def issubset(self, other: "QuotientIdeal") -> bool:
        return all(other.contains(g) for g in self.generators)

    def is_zero(self) -> bool:
        """True when the ideal is zero in R, i.e. its lift equals Q"""
        return all(self.presentation.is_zero(g) for g in self.generators)

    def is_unit(self) -> bool:
        return self.lift.is_unit()

    def krull_dimension(self) -> int:
        return krull_dimension(self.lift)

    def basis(self) -> List[Polynomial]:
        """Reduced Groebner basis of the lift"""
        return list(self.lift.groebner().generators)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuotientIdeal):
            return NotImplemented
        return self.lift == other.lift

    def __hash__(self) -> int:
        return hash(self.lift)

    def __str__(self) -> str:
        if not self.generators:
            return "(0)"
        return "(" + ", ".join(str(g) for g in self.generators) + ")"

    def __repr__(self) -> str:
        return f"QuotientIdeal{self}"


def _check_same(I: QuotientIdeal, J: QuotientIdeal) -> None:
    if I.presentation is not J.presentation and I.ring != J.ring:
        raise RingMismatch(f"{I.ring} vs {J.ring}")


def strip_generators(R: RingPresentation, gens: Iterable[Polynomial]) -> List[Polynomial]:
    """Drop generators that vanish in R and duplicates"""
    seen = set()
    out = []
    for g in gens:
        g = g.monic()
        if g in seen or R.is_zero(g):
            continue
        seen.add(g)
        out.append(g)
    return out


def bracket_power(I: QuotientIdeal, e: int) -> QuotientIdeal:
    """I^[p^e]: Frobenius powers of the generators, plus Q"""
    if e < 0:
        raise ValueError("Frobenius iterate must be non-negative")
    if e == 0:
        return I
    return QuotientIdeal(I.presentation, [g.frobenius(e) for g in I.generators])


def ideal_sum(I: QuotientIdeal, J: QuotientIdeal) -> QuotientIdeal:
    _check_same(I, J)
    return QuotientIdeal(I.presentation, I.generators + J.generators)


def ideal_product(I: QuotientIdeal, J: QuotientIdeal) -> QuotientIdeal:
    _check_same(I, J)
    return QuotientIdeal(I.presentation, strip_generators(I.presentation, (poly_mul(f, g) for f in I.generators for g in J.generators)))


def _tag_ring(S: PolyRing) -> PolyRing:
    name = TAG_VARIABLE
    while name in S.variables:
        name = "_" + name
    return S.extend([name], MonomialOrder("elim", block=1))


def _embed(T: PolyRing, f: Polynomial, tag_power: int = 0) -> Polynomial:
    return Polynomial.from_dict(T, {(tag_power,) + m: c for m, c in f.terms})


def _intersect_lifts(
    S: PolyRing,
    left: Sequence[Polynomial],
    right: Sequence[Polynomial],
    budget: Optional[Budget],
) -> List[Polynomial]:
    """Generators of (left) ∩ (right) in S by eliminating t from t*left + (1-t)*right"""
    T = _tag_ring(S)
    gens = [_embed(T, g, 1) for g in left]
    for g in right:
        gens.append(_embed(T, g, 0) - _embed(T, g, 1))
    gb = buchberger(gens, budget=budget)
    out = []
    for g in gb.generators:
        if all(m[0] == 0 for m, _ in g.terms):
            out.append(Polynomial.from_dict(S, {m[1:]: c for m, c in g.terms}))
    return out


def ideal_intersect(I: QuotientIdeal, J: QuotientIdeal) -> QuotientIdeal:
    """I ∩ J by tag-variable elimination on the lifts"""
    _check_same(I, J)
    R = I.presentation
    if I.issubset(J):
        return I
    if J.issubset(I):
        return J
    gens = _intersect_lifts(R.ambient, I.lift.generators, J.lift.generators, R.budget)
    return QuotientIdeal(R, strip_generators(R, gens))


def ideal_colon(I: QuotientIdeal, f: Polynomial) -> QuotientIdeal:
    """
    (I : f) = (I ∩ (f)) / f computed on the lift, so the result is the lift
    of the colon in R. If f already lies in I (in particular f = 0 in R) the
    colon is the unit ideal.
    """
    R = I.presentation
    f = f.change_ring(R.ambient)
    if I.contains(f):
        if R.is_zero(f):
            logger.warning("colon by an element that is zero in R; returning the unit ideal")
        return R.unit_ideal()
    if f.is_constant():
        return I
    meet = _intersect_lifts(R.ambient, I.lift.generators, [f], R.budget)
    quotients = [poly_divide_exact(g, f) for g in meet]
    return QuotientIdeal(R, strip_generators(R, quotients))


def ideal_colon_ideal(I: QuotientIdeal, J: QuotientIdeal) -> QuotientIdeal:
    """(I : J) as the intersection of (I : g) over the generators g of J"""
    _check_same(I, J)
    R = I.presentation
    gens = strip_generators(R, J.generators)
    if not gens:
        raise HypothesisViolation("colon by the zero ideal")
    result: Optional[QuotientIdeal] = None
    for g in gens:
        part = ideal_colon(I, g)
        result = part if result is None else ideal_intersect(result, part)
        if result == I:
            break
    return result


def socle_dimension(J: QuotientIdeal) -> int:
    """dim_k (J : m)/J for zero-dimensional J"""
    m = J.presentation.m
    return J.colength() - ideal_colon_ideal(J, m).colength()


def socle_generator(J: QuotientIdeal) -> Polynomial:
    """
    A polynomial whose class spans the one-dimensional socle of R/J,
    returned as a monic normal form modulo J.
    """
    if J.is_unit():
        raise UnitIdeal(f"{J} is the unit ideal")
    length = J.colength()
    above = ideal_colon_ideal(J, J.presentation.m)
    dim = length - above.colength()
    if dim > 1:
        raise NotIrreducible(f"socle of R/{J} has dimension {dim}", socle_dimension=dim)
    gb = J.lift.groebner()
    for g in above.basis():
        nf = gb.normal_form(g)
        if not nf.is_zero():
            return nf.monic()
    raise NotIrreducible(f"no socle element found for {J}", socle_dimension=0)
