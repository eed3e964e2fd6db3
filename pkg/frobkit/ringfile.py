"""
Ring file parser.

A ring file is a list of ``key = value`` statements, one per line, with
``#`` comments::

    p = 3
    vars = x, y, z
    relations = x*y - z^2
    ideal I = x^2, y, z
    element f = z
    sop = x, y
    chain J(t) = x^t, y^t
    socle J(t) = x^(t-1)*y^(t-1)*z
    sequence half(e) = x^(p^(e/2))

Polynomial expressions use integers, variables, ``+ - *``, ``^`` or ``**``
with non-negative integer exponents and parentheses. Exponents are integer
expressions over literals, the family parameter and ``p``; ``/`` in an
exponent is floor division. The ideal name ``m`` is reserved for the
irrelevant ideal.
"""

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from .config import Budget
from .errors import InputError, NonPrimeModulus, ParseError, UnknownVariable
from .field import is_prime
from .ideals import QuotientIdeal, RingPresentation
from .invariants import SOP, ChainLink
from .polynomial import ORDER_KINDS, Polynomial, PolyRing

RESERVED_IDEALS = ("m",)

_STATEMENT = re.compile(
    r"^(?P<kw>[A-Za-z_]\w*)"
    r"(?:\s+(?P<name>[A-Za-z_]\w*)(?:\s*\(\s*(?P<param>[A-Za-z_]\w*)\s*\))?)?"
    r"\s*=\s*(?P<value>.*?)\s*$"
)
_IDENT = re.compile(r"[A-Za-z_]\w*$")
_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_]\w*)|(?P<op>\*\*|[-+*/^(),]))")

_SIMPLE_KEYS = ("p", "vars", "order", "relations", "sop")
_NAMED_KEYS = ("ideal", "element")
_FAMILY_KEYS = ("chain", "socle", "sequence")


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    column: int


def _tokenize(text: str, line: int, column: int) -> List[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if not match:
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character '{text[pos + stripped]}'", line, column + pos + stripped)
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append(_Token(kind, match.group(kind), column + start))
        pos = match.end()
    tokens.append(_Token("end", "", column + len(text)))
    return tokens


class _ExpressionParser:
    """Recursive descent over one comma-separated list of polynomial expressions"""

    def __init__(self, ring: PolyRing, text: str, line: int, column: int, params: Optional[Dict[str, int]] = None):
        self.ring = ring
        self.line = line
        self.tokens = _tokenize(text, line, column)
        self.pos = 0
        self.params = {"p": ring.p}
        self.params.update(params or {})

    # token helpers

    @property
    def current(self) -> _Token:
        return self.tokens[self.pos]

    def _advance(self) -> _Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def _accept(self, *ops: str) -> Optional[_Token]:
        token = self.current
        if token.kind == "op" and token.text in ops:
            return self._advance()
        return None

    def _expect(self, op: str) -> _Token:
        token = self._accept(op)
        if token is None:
            self._fail(f"expected '{op}'")
        return token

    def _fail(self, message: str):
        token = self.current
        found = token.text or "end of line"
        raise ParseError(f"{message}, found '{found}'", self.line, token.column)

    # grammar

    def parse_list(self, allow_empty: bool = False) -> List[Polynomial]:
        if self.current.kind == "end":
            if allow_empty:
                return []
            self._fail("expected an expression")
        items = [self.parse_expr()]
        while self._accept(","):
            items.append(self.parse_expr())
        if self.current.kind != "end":
            self._fail("expected ',' or end of line")
        return items

    def parse_single(self) -> Polynomial:
        items = self.parse_list()
        if len(items) != 1:
            raise ParseError("expected a single expression", self.line, self.tokens[0].column)
        return items[0]

    def parse_expr(self) -> Polynomial:
        value = self.parse_term()
        while True:
            if self._accept("+"):
                value = value + self.parse_term()
            elif self._accept("-"):
                value = value - self.parse_term()
            else:
                return value

    def parse_term(self) -> Polynomial:
        value = self.parse_unary()
        while self._accept("*"):
            value = value * self.parse_unary()
        return value

    def parse_unary(self) -> Polynomial:
        if self._accept("-"):
            return -self.parse_unary()
        if self._accept("+"):
            return self.parse_unary()
        return self.parse_power()

    def parse_power(self) -> Polynomial:
        base = self.parse_atom()
        if self._accept("^", "**"):
            exponent_token = self.current
            exponent = self.parse_exponent()
            if exponent < 0:
                raise ParseError(f"negative exponent {exponent}", self.line, exponent_token.column)
            return base ** exponent
        return base

    def parse_atom(self) -> Polynomial:
        token = self.current
        if token.kind == "int":
            self._advance()
            return self.ring.constant(int(token.text))
        if token.kind == "name":
            self._advance()
            if token.text in self.ring.variables:
                return self.ring.gen(token.text)
            if token.text in self.params:
                return self.ring.constant(self.params[token.text])
            raise UnknownVariable(token.text, self.line, token.column)
        if self._accept("("):
            value = self.parse_expr()
            self._expect(")")
            return value
        self._fail("expected a number, variable or '('")

    # integer exponents

    def parse_exponent(self) -> int:
        token = self.current
        if token.kind == "int":
            self._advance()
            return int(token.text)
        if token.kind == "name":
            self._advance()
            return self._param(token)
        if self._accept("("):
            value = self.parse_int_expr()
            self._expect(")")
            return value
        self._fail("expected an integer exponent")

    def _param(self, token: _Token) -> int:
        if token.text in self.params:
            return self.params[token.text]
        raise ParseError(f"'{token.text}' is not an integer parameter", self.line, token.column)

    def parse_int_expr(self) -> int:
        value = self.parse_int_term()
        while True:
            if self._accept("+"):
                value += self.parse_int_term()
            elif self._accept("-"):
                value -= self.parse_int_term()
            else:
                return value

    def parse_int_term(self) -> int:
        value = self.parse_int_factor()
        while True:
            if self._accept("*"):
                value *= self.parse_int_factor()
            elif self._accept("/"):
                token = self.current
                divisor = self.parse_int_factor()
                if divisor == 0:
                    raise ParseError("division by zero in exponent", self.line, token.column)
                value //= divisor
            else:
                return value

    def parse_int_factor(self) -> int:
        if self._accept("-"):
            return -self.parse_int_factor()
        token = self.current
        if token.kind == "int":
            self._advance()
            base = int(token.text)
        elif token.kind == "name":
            self._advance()
            base = self._param(token)
        elif self._accept("("):
            base = self.parse_int_expr()
            self._expect(")")
        else:
            self._fail("expected an integer")
        if self._accept("^", "**"):
            exponent = self.parse_int_factor()
            if exponent < 0:
                raise ParseError("negative exponent in integer expression", self.line, token.column)
            return base ** exponent
        return base


def parse_expression(ring: PolyRing, text: str, params: Optional[Dict[str, int]] = None, line: int = 0) -> Polynomial:
    return _ExpressionParser(ring, text, line, 1, params).parse_single()


def parse_expression_list(ring: PolyRing, text: str, params: Optional[Dict[str, int]] = None, line: int = 0) -> List[Polynomial]:
    return _ExpressionParser(ring, text, line, 1, params).parse_list()


@dataclass
class Family:
    """An expression list parameterized by one integer (t for chains, e for sequences)"""
    name: str
    parameter: str
    text: str
    line: int = field(default=0, compare=False)
    column: int = field(default=1, compare=False)

    def instantiate(self, ring: PolyRing, value: int) -> List[Polynomial]:
        parser = _ExpressionParser(ring, self.text, self.line, self.column, {self.parameter: value})
        return parser.parse_list()

    def instantiate_single(self, ring: PolyRing, value: int) -> Polynomial:
        parser = _ExpressionParser(ring, self.text, self.line, self.column, {self.parameter: value})
        return parser.parse_single()


@dataclass
class RingFile:
    p: int
    variables: Tuple[str, ...]
    order: str = "grevlex"
    relations: List[Polynomial] = field(default_factory=list)
    ideals: Dict[str, List[Polynomial]] = field(default_factory=dict)
    elements: Dict[str, Polynomial] = field(default_factory=dict)
    sop: Optional[List[Polynomial]] = None
    chains: Dict[str, Family] = field(default_factory=dict)
    socles: Dict[str, Family] = field(default_factory=dict)
    sequences: Dict[str, Family] = field(default_factory=dict)
    source: str = field(default="<string>", compare=False)
    text: str = field(default="", compare=False, repr=False)

    @property
    def ring(self) -> PolyRing:
        return PolyRing.create(self.p, self.variables, self.order)

    def presentation(self, budget: Optional[Budget] = None, order: Optional[str] = None) -> RingPresentation:
        ring = self.ring if order is None else self.ring.with_order(order)
        return RingPresentation(ring, [r.change_ring(ring) for r in self.relations], budget)

    def ideal(self, R: RingPresentation, name: str) -> QuotientIdeal:
        """A named ideal, ``m``, or an inline comma-separated generator list"""
        if name in RESERVED_IDEALS:
            return R.m
        if name in self.ideals:
            return R.ideal(self.ideals[name])
        return R.ideal(parse_expression_list(R.ambient, name))

    def element(self, R: RingPresentation, name: str) -> Polynomial:
        """A named element or an inline expression"""
        if name in self.elements:
            return self.elements[name].change_ring(R.ambient)
        return parse_expression(R.ambient, name)

    def system_of_parameters(self, R: RingPresentation) -> Optional[SOP]:
        if self.sop is None:
            return None
        return SOP(tuple(f.change_ring(R.ambient) for f in self.sop))

    def chain(self, R: RingPresentation, name: str, t_max: int) -> List[ChainLink]:
        if name not in self.chains:
            raise InputError(f"no chain named '{name}' in {self.source}")
        family = self.chains[name]
        socle = self.socles.get(name)
        links = []
        for t in range(1, t_max + 1):
            ideal = R.ideal(family.instantiate(R.ambient, t))
            delta = socle.instantiate_single(R.ambient, t) if socle else None
            links.append(ChainLink(t, ideal, delta))
        return links

    def sequence(self, R: RingPresentation, name: str, e_max: int) -> List[QuotientIdeal]:
        if name not in self.sequences:
            raise InputError(f"no sequence named '{name}' in {self.source}")
        family = self.sequences[name]
        return [R.ideal(family.instantiate(R.ambient, e)) for e in range(0, e_max + 1)]

    def dump(self) -> str:
        """Serialize back to ring file text"""
        lines = [
            f"p = {self.p}",
            f"vars = {', '.join(self.variables)}",
            f"order = {self.order}",
            f"relations = {_join(self.relations)}",
        ]
        for name, gens in self.ideals.items():
            lines.append(f"ideal {name} = {_join(gens)}")
        for name, f in self.elements.items():
            lines.append(f"element {name} = {f}")
        if self.sop is not None:
            lines.append(f"sop = {_join(self.sop)}")
        for key, families in (("chain", self.chains), ("socle", self.socles), ("sequence", self.sequences)):
            for family in families.values():
                lines.append(f"{key} {family.name}({family.parameter}) = {family.text}")
        return "\n".join(lines) + "\n"


def _join(polys: List[Polynomial]) -> str:
    return ", ".join(str(f) for f in polys)


def parse_ring_text(text: str, source: str = "<string>") -> RingFile:
    header: Dict[str, Tuple[str, int, int]] = {}
    body: List[Tuple[int, int, re.Match]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        match = _STATEMENT.match(line.strip())
        if not match:
            raise ParseError("expected 'key = value'", lineno, 1)
        offset = len(line) - len(line.lstrip())
        kw, name = match.group("kw"), match.group("name")
        if kw in _SIMPLE_KEYS:
            if name is not None:
                raise ParseError(f"'{kw}' takes no name", lineno, offset + match.start("name") + 1)
            if kw in header:
                raise ParseError(f"duplicate '{kw}'", lineno, offset + 1)
            header[kw] = (match.group("value"), lineno, offset + match.start("value") + 1)
        elif kw in _NAMED_KEYS or kw in _FAMILY_KEYS:
            if name is None:
                raise ParseError(f"'{kw}' needs a name", lineno, offset + 1)
            if (kw in _FAMILY_KEYS) != (match.group("param") is not None):
                expected = "a parameter like NAME(t)" if kw in _FAMILY_KEYS else "no parameter"
                raise ParseError(f"'{kw}' takes {expected}", lineno, offset + match.start("name") + 1)
            body.append((lineno, offset, match))
        else:
            raise ParseError(f"unknown key '{kw}'", lineno, offset + 1)

    for required in ("p", "vars"):
        if required not in header:
            raise ParseError(f"missing '{required} = ...'", 0, 0)

    p_text, p_line, p_col = header["p"]
    if not re.fullmatch(r"\d+", p_text):
        raise ParseError("p must be an integer", p_line, p_col)
    p = int(p_text)
    if not is_prime(p) or p >= 2 ** 31:
        raise NonPrimeModulus(p)

    vars_text, vars_line, vars_col = header["vars"]
    variables = tuple(v.strip() for v in vars_text.split(","))
    for v in variables:
        if not _IDENT.match(v):
            raise ParseError(f"bad variable name '{v}'", vars_line, vars_col)
    if len(set(variables)) != len(variables):
        raise ParseError("duplicate variable names", vars_line, vars_col)

    order = "grevlex"
    if "order" in header:
        order, line, col = header["order"]
        if order not in ORDER_KINDS or order == "elim":
            raise ParseError(f"unknown monomial order '{order}'", line, col)
    ring = PolyRing.create(p, variables, order)

    def parse_list(entry, allow_empty=False):
        value, line, col = entry
        return _ExpressionParser(ring, value, line, col).parse_list(allow_empty)

    rf = RingFile(p, variables, order, source=source, text=text)
    if "relations" in header:
        rf.relations = parse_list(header["relations"], allow_empty=True)
    if "sop" in header:
        rf.sop = parse_list(header["sop"], allow_empty=True)

    for lineno, offset, match in body:
        kw, name, param = match.group("kw"), match.group("name"), match.group("param")
        value = match.group("value")
        col = offset + match.start("value") + 1
        entry = (value, lineno, col)
        if kw == "ideal":
            if name in RESERVED_IDEALS:
                raise ParseError(f"ideal name '{name}' is reserved", lineno, offset + match.start("name") + 1)
            rf.ideals[name] = parse_list(entry)
        elif kw == "element":
            rf.elements[name] = _ExpressionParser(ring, value, lineno, col).parse_single()
        else:
            if param in variables:
                raise ParseError(f"parameter '{param}' clashes with a variable", lineno, offset + match.start("param") + 1)
            family = Family(name, param, value, lineno, col)
            # instantiate once so syntax errors surface at load time
            if kw == "socle":
                family.instantiate_single(ring, 1)
            else:
                family.instantiate(ring, 1 if kw == "chain" else 0)
            target = {"chain": rf.chains, "socle": rf.socles, "sequence": rf.sequences}[kw]
            target[name] = family

    for name in rf.socles:
        if name not in rf.chains:
            raise ParseError(f"socle '{name}' has no matching chain", rf.socles[name].line, 1)
    return rf


def parse_ring_file(path: Union[str, Path]) -> RingFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return parse_ring_text(text, source=str(path))
