"""
Sparse multivariate polynomials over a prime field.

A monomial is a tuple of non-negative exponents, one per ring variable.
A polynomial keeps its terms as ``(monomial, coefficient)`` pairs sorted
strictly descending under the ring's monomial order, with no zero
coefficients. All values are immutable.
"""

from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import ExponentOverflow, RingMismatch
from .field import PrimeField

Monomial = Tuple[int, ...]
Term = Tuple[Monomial, int]

MAX_EXPONENT = 2 ** 31 - 1

ORDER_KINDS = ("lex", "grevlex", "grlex", "elim")


# Monomial helpers

def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    """a / b, assuming b divides a"""
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True if a divides b"""
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x if x >= y else y for x, y in zip(a, b))


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def mono_degree(m: Monomial) -> int:
    return sum(m)


def _check_exponents(m: Monomial) -> Monomial:
    if m and max(m) > MAX_EXPONENT:
        raise ExponentOverflow(f"exponent {max(m)} exceeds {MAX_EXPONENT}")
    return m


# Monomial orders

def _grevlex_part(m: Sequence[int]) -> Tuple[int, ...]:
    return (sum(m),) + tuple(-e for e in reversed(m))


@dataclass(frozen=True)
class MonomialOrder:
    """
    A total monomial order refining divisibility.

    ``permutation`` lists variable indices from most to least significant.
    The ``elim`` kind is a block order: grevlex on the first ``block``
    variables, ties broken by grevlex on the rest. It eliminates the first
    block and is used for tag-variable intersections.
    """
    kind: str = "grevlex"
    permutation: Optional[Tuple[int, ...]] = None
    block: int = 0

    def __post_init__(self):
        if self.kind not in ORDER_KINDS:
            raise ValueError(f"unknown monomial order '{self.kind}'")
        if self.permutation is not None:
            object.__setattr__(self, "permutation", tuple(self.permutation))
        object.__setattr__(self, "_key", self._build_key())

    def _build_key(self) -> Callable[[Monomial], tuple]:
        perm = self.permutation
        kind = self.kind
        block = self.block

        def permute(m: Monomial) -> Sequence[int]:
            return m if perm is None else tuple(m[i] for i in perm)

        if kind == "lex":
            return lambda m: tuple(permute(m))
        if kind == "grlex":
            return lambda m: (sum(m),) + tuple(permute(m))
        if kind == "grevlex":
            return lambda m: _grevlex_part(permute(m))

        def elim(m: Monomial) -> tuple:
            pm = permute(m)
            return _grevlex_part(pm[:block]) + _grevlex_part(pm[block:])
        return elim

    def key(self, m: Monomial) -> tuple:
        """Sort key: larger monomials have larger keys"""
        return self._key(m)

    def neg_key(self, m: Monomial) -> tuple:
        """Key for min-heaps that pop the largest monomial first"""
        return tuple(-x for x in self._key(m))

    def __str__(self) -> str:
        return self.kind if self.kind != "elim" else f"elim({self.block})"


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


@dataclass(frozen=True)
class PolyRing:
    """F_p[x_1..x_n] with a fixed monomial order"""
    field: PrimeField
    variables: Tuple[str, ...]
    order: MonomialOrder = GREVLEX

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(self.variables) < 1:
            raise ValueError("a polynomial ring needs at least one variable")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names in {self.variables}")

    @classmethod
    def create(cls, p: int, variables: Iterable[str], order: Union[str, MonomialOrder] = "grevlex") -> "PolyRing":
        if isinstance(order, str):
            order = MonomialOrder(order)
        return cls(PrimeField(p), tuple(variables), order)

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        return self.variables.index(name)

    def zero(self) -> "Polynomial":
        return Polynomial(self, ())

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c: int) -> "Polynomial":
        c %= self.p
        if c == 0:
            return self.zero()
        return Polynomial(self, (((0,) * self.nvars, c),))

    def monomial(self, exponents: Sequence[int], coefficient: int = 1) -> "Polynomial":
        m = tuple(int(e) for e in exponents)
        if len(m) != self.nvars or any(e < 0 for e in m):
            raise ValueError(f"bad exponent vector {exponents} for {self.nvars} variables")
        coefficient %= self.p
        if coefficient == 0:
            return self.zero()
        return Polynomial(self, ((_check_exponents(m), coefficient),))

    def gen(self, which: Union[int, str]) -> "Polynomial":
        i = self.index(which) if isinstance(which, str) else which
        exps = [0] * self.nvars
        exps[i] = 1
        return self.monomial(exps)

    def gens(self) -> List["Polynomial"]:
        return [self.gen(i) for i in range(self.nvars)]

    def from_dict(self, terms: Dict[Monomial, int]) -> "Polynomial":
        return Polynomial.from_dict(self, terms)

    def with_order(self, order: Union[str, MonomialOrder]) -> "PolyRing":
        if isinstance(order, str):
            order = MonomialOrder(order)
        return PolyRing(self.field, self.variables, order)

    def extend(self, names: Sequence[str], order: MonomialOrder) -> "PolyRing":
        """New ring with ``names`` prepended to the variables"""
        return PolyRing(self.field, tuple(names) + self.variables, order)

    def __str__(self) -> str:
        return f"{self.field}[{','.join(self.variables)}] ({self.order})"


class Polynomial:
    """Immutable sparse polynomial; terms sorted strictly descending"""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Tuple[Term, ...]):
        self.ring = ring
        self.terms = terms
        self._hash = None

    @classmethod
    def from_dict(cls, ring: PolyRing, terms: Dict[Monomial, int]) -> "Polynomial":
        p = ring.p
        key = ring.order.key
        cleaned = [(m, c % p) for m, c in terms.items() if c % p]
        cleaned.sort(key=lambda t: key(t[0]), reverse=True)
        return cls(ring, tuple(cleaned))

    # Structure

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(self.terms[0][0]))

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("the zero polynomial has no leading monomial")
        return self.terms[0][0]

    def leading_coefficient(self) -> int:
        return self.terms[0][1] if self.terms else 0

    def leading_term(self) -> "Polynomial":
        return Polynomial(self.ring, self.terms[:1])

    def monic(self) -> "Polynomial":
        if not self.terms or self.terms[0][1] == 1:
            return self
        inv = self.ring.field.inv(self.terms[0][1])
        p = self.ring.p
        return Polynomial(self.ring, tuple((m, c * inv % p) for m, c in self.terms))

    def total_degree(self) -> int:
        return max((sum(m) for m, _ in self.terms), default=-1)

    def monomials(self) -> List[Monomial]:
        return [m for m, _ in self.terms]

    def to_dict(self) -> Dict[Monomial, int]:
        return dict(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Term]:
        return iter(self.terms)

    def change_ring(self, ring: PolyRing) -> "Polynomial":
        """Re-sort the same terms under another order on the same variables"""
        if ring.variables != self.ring.variables or ring.field != self.ring.field:
            raise RingMismatch(f"cannot move {self.ring} polynomial into {ring}")
        if ring == self.ring:
            return self
        return Polynomial.from_dict(ring, dict(self.terms))

    def is_sorted(self) -> bool:
        key = self.ring.order.key
        keys = [key(m) for m, _ in self.terms]
        return all(a > b for a, b in zip(keys, keys[1:])) and all(c % self.ring.p for _, c in self.terms)

    # Arithmetic

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, int):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else poly_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else poly_sub(self, other)

    def __rsub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else poly_sub(other, self)

    def __neg__(self):
        return poly_neg(self)

    def __mul__(self, other):
        if isinstance(other, int):
            return poly_scale(self, other)
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else poly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return poly_pow(self, n)

    def frobenius(self, e: int) -> "Polynomial":
        return poly_frobenius_power(self, e)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self == self.ring.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if self.ring.variables != other.ring.variables or self.ring.p != other.ring.p:
            return False
        if self.ring.order == other.ring.order:
            return self.terms == other.terms
        return dict(self.terms) == dict(other.terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring.p, self.ring.variables, frozenset(self.terms)))
        return self._hash

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(_format_term(self.ring.variables, m, c) for m, c in self.terms)

    def __repr__(self) -> str:
        return f"Polynomial({self})"


def _format_term(names: Sequence[str], m: Monomial, c: int) -> str:
    factors = []
    for name, e in zip(names, m):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    if not factors:
        return str(c)
    if c == 1:
        return "*".join(factors)
    return f"{c}*" + "*".join(factors)


def _same_ring(f: Polynomial, g: Polynomial) -> None:
    if f.ring != g.ring:
        raise RingMismatch(f"{f.ring} vs {g.ring}")


def _merge(ring: PolyRing, a: Tuple[Term, ...], b: Tuple[Term, ...], sign: int) -> Polynomial:
    """Merge two sorted term lists computing a + sign*b"""
    key = ring.order.key
    p = ring.p
    out: List[Term] = []
    i = j = 0
    while i < len(a) and j < len(b):
        ma, ca = a[i]
        mb, cb = b[j]
        if ma == mb:
            c = (ca + sign * cb) % p
            if c:
                out.append((ma, c))
            i += 1
            j += 1
        elif key(ma) > key(mb):
            out.append(a[i])
            i += 1
        else:
            out.append((mb, sign * cb % p))
            j += 1
    out.extend(a[i:])
    out.extend((m, sign * c % p) for m, c in b[j:])
    return Polynomial(ring, tuple(out))


def poly_add(f: Polynomial, g: Polynomial) -> Polynomial:
    _same_ring(f, g)
    return _merge(f.ring, f.terms, g.terms, 1)


def poly_sub(f: Polynomial, g: Polynomial) -> Polynomial:
    _same_ring(f, g)
    return _merge(f.ring, f.terms, g.terms, -1)


def poly_neg(f: Polynomial) -> Polynomial:
    p = f.ring.p
    return Polynomial(f.ring, tuple((m, -c % p) for m, c in f.terms))


def poly_scale(f: Polynomial, c: int) -> Polynomial:
    p = f.ring.p
    c %= p
    if c == 0:
        return f.ring.zero()
    return Polynomial(f.ring, tuple((m, a * c % p) for m, a in f.terms))


def poly_mul_term(f: Polynomial, m: Monomial, c: int) -> Polynomial:
    """f * c * x^m; order is preserved so no re-sort is needed"""
    p = f.ring.p
    c %= p
    if c == 0:
        return f.ring.zero()
    return Polynomial(f.ring, tuple((mono_mul(fm, m), fc * c % p) for fm, fc in f.terms))


def poly_mul(f: Polynomial, g: Polynomial) -> Polynomial:
    _same_ring(f, g)
    if not f.terms or not g.terms:
        return f.ring.zero()
    if len(g.terms) == 1:
        return poly_mul_term(f, *g.terms[0])
    if len(f.terms) == 1:
        return poly_mul_term(g, *f.terms[0])
    p = f.ring.p
    acc: Dict[Monomial, int] = {}
    for mf, cf in f.terms:
        for mg, cg in g.terms:
            m = mono_mul(mf, mg)
            acc[m] = (acc.get(m, 0) + cf * cg) % p
    return Polynomial.from_dict(f.ring, acc)


def poly_pow(f: Polynomial, n: int) -> Polynomial:
    if n < 0:
        raise ValueError("negative powers are not polynomials")
    if len(f.terms) == 1:
        m, c = f.terms[0]
        exps = _check_exponents(tuple(e * n for e in m))
        return f.ring.monomial(exps, pow(c, n, f.ring.p))
    result = f.ring.one()
    base = f
    while n:
        if n & 1:
            result = poly_mul(result, base)
        n >>= 1
        if n:
            base = poly_mul(base, base)
    return result


def poly_frobenius_power(f: Polynomial, e: int) -> Polynomial:
    """
    f^(p^e), computed termwise: c^(p^e) = c in F_p and the Frobenius is a
    ring map. Scaling every exponent by q keeps the term order.
    """
    if e < 0:
        raise ValueError("Frobenius iterate must be non-negative")
    if e == 0:
        return f
    q = f.ring.p ** e
    terms = tuple((_check_exponents(tuple(x * q for x in m)), c) for m, c in f.terms)
    return Polynomial(f.ring, terms)


def poly_divide_exact(g: Polynomial, f: Polynomial) -> Polynomial:
    """The quotient g / f; raises ValueError if f does not divide g"""
    _same_ring(f, g)
    if f.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    ring = f.ring
    p = ring.p
    lm, lc = f.terms[0]
    inv = ring.field.inv(lc)
    quotient: Dict[Monomial, int] = {}
    rest = g
    while rest.terms:
        m, c = rest.terms[0]
        if not mono_divides(lm, m):
            raise ValueError(f"{f} does not divide {g}")
        u = mono_div(m, lm)
        k = c * inv % p
        quotient[u] = k
        rest = poly_sub(rest, poly_mul_term(f, u, k))
    return Polynomial.from_dict(ring, quotient)
