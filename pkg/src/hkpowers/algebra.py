"""Prime fields, monomials, monomial orders and sparse polynomials.

Monomials are packed into a single Python int: every variable owns a
16-bit field (variable 0 in the most significant field), so products are
integer additions and divisibility is a guarded subtraction.  Orders are
exposed as *keys*: ints whose natural ordering is the monomial order.  All
supported keys are linear in the exponent vector, so ``key(a*b) ==
key(a) + key(b)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

FIELD_BITS = 16
MAX_DEGREE = (1 << (FIELD_BITS - 1)) - 1


class AlgebraError(ValueError):
    pass


class RingMismatchError(AlgebraError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    # deterministic Miller-Rabin for n < 3.3e24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldElement:
    """An element of F_p."""

    value: int
    modulus: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.modulus)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise RingMismatchError("elements of different prime fields")
            return other.value
        return int(other)

    def __add__(self, other):
        return FieldElement(self.value + self._coerce(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.value - self._coerce(other), self.modulus)

    def __rsub__(self, other):
        return FieldElement(self._coerce(other) - self.value, self.modulus)

    def __mul__(self, other):
        return FieldElement(self.value * self._coerce(other), self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.modulus)

    def __truediv__(self, other):
        return self * field_inverse(FieldElement(self._coerce(other), self.modulus))

    def __pow__(self, e: int):
        if e < 0:
            return field_inverse(self) ** (-e)
        return FieldElement(pow(self.value, e, self.modulus), self.modulus)

    def __int__(self):
        return self.value


def field_inverse(a: FieldElement | int, p: int | None = None) -> FieldElement | int:
    """Multiplicative inverse in F_p; accepts a FieldElement or (int, p)."""
    if isinstance(a, FieldElement):
        if a.value == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {a.modulus}")
        return FieldElement(pow(a.value, -1, a.modulus), a.modulus)
    if p is None:
        raise TypeError("modulus required for integer input")
    if a % p == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return pow(a, -1, p)


@dataclass(frozen=True)
class Monomial:
    exponents: tuple[int, ...]
    degree: int

    @classmethod
    def of(cls, exponents: Iterable[int]) -> "Monomial":
        exps = tuple(int(e) for e in exponents)
        if any(e < 0 for e in exps):
            raise AlgebraError("negative exponent")
        return cls(exps, sum(exps))

    def __mul__(self, other: "Monomial") -> "Monomial":
        if len(other.exponents) != len(self.exponents):
            raise RingMismatchError("monomials over different variable sets")
        return Monomial(tuple(a + b for a, b in zip(self.exponents, other.exponents)),
                        self.degree + other.degree)

    def divides(self, other: "Monomial") -> bool:
        return all(a <= b for a, b in zip(self.exponents, other.exponents))


class MonomialOrder:
    """grevlex, lex, or a two-block elimination order (grevlex inside blocks)."""

    def __init__(self, kind: str = "grevlex", block: int | None = None):
        if kind not in ("grevlex", "lex", "block"):
            raise AlgebraError(f"unknown monomial order {kind!r}")
        if kind == "block" and (block is None or block < 1):
            raise AlgebraError("block order needs a positive first-block size")
        self.kind = kind
        self.block = block if kind == "block" else None

    def __eq__(self, other):
        return (isinstance(other, MonomialOrder)
                and (self.kind, self.block) == (other.kind, other.block))

    def __hash__(self):
        return hash((self.kind, self.block))

    def __repr__(self):
        if self.kind == "block":
            return f"MonomialOrder('block', {self.block})"
        return f"MonomialOrder({self.kind!r})"

    def exponent_key(self, exps: Sequence[int]) -> int:
        n = len(exps)
        if self.kind == "lex":
            return pack(exps)
        if self.kind == "grevlex":
            return _grevlex_key(exps)
        b = self.block
        if b > n:
            raise RingMismatchError("block larger than the number of variables")
        return (_grevlex_key(exps[:b]) << (FIELD_BITS * (n - b))) | _grevlex_key(exps[b:])


def _grevlex_key(exps: Sequence[int]) -> int:
    # fields (d, d - e_n, d - e_n - e_{n-1}, ..., e_1): plain int comparison is grevlex
    key = 0
    running = sum(exps)
    for e in reversed(exps):
        key = (key << FIELD_BITS) | running
        running -= e
    return key


def pack(exps: Sequence[int]) -> int:
    m = 0
    for e in exps:
        m = (m << FIELD_BITS) | e
    return m


def unpack(m: int, n: int) -> tuple[int, ...]:
    mask = (1 << FIELD_BITS) - 1
    out = [0] * n
    for i in range(n - 1, -1, -1):
        out[i] = m & mask
        m >>= FIELD_BITS
    return tuple(out)


def monomial_compare(a: Monomial, b: Monomial, order: MonomialOrder) -> int:
    """Return -1, 0 or 1 as a <, =, > b."""
    if len(a.exponents) != len(b.exponents):
        raise RingMismatchError("mismatched variable counts")
    ka, kb = order.exponent_key(a.exponents), order.exponent_key(b.exponents)
    return (ka > kb) - (ka < kb)


class PolynomialRing:
    """F_p[x_1..x_n] with a fixed monomial order."""

    def __init__(self, characteristic: int, variables: Sequence[str],
                 order: MonomialOrder | str = "grevlex"):
        if not is_prime(characteristic) or characteristic > 2 ** 31:
            raise AlgebraError(f"characteristic must be a prime <= 2^31, got {characteristic}")
        names = tuple(variables)
        if not names:
            raise AlgebraError("at least one variable required")
        for v in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v):
                raise AlgebraError(f"bad variable name {v!r}")
        if len(set(names)) != len(names):
            raise AlgebraError("duplicate variable names")
        self.p = characteristic
        self.variables = names
        self.nvars = len(names)
        self.order = order if isinstance(order, MonomialOrder) else MonomialOrder(order)
        if self.order.kind == "block" and self.order.block > self.nvars:
            raise AlgebraError("block larger than the number of variables")
        self.guard = pack([1 << (FIELD_BITS - 1)] * self.nvars)
        self._keys: dict[int, int] = {}
        self._degrees: dict[int, int] = {}
        self._var_index = {v: i for i, v in enumerate(names)}

    def __eq__(self, other):
        return (isinstance(other, PolynomialRing) and self.p == other.p
                and self.variables == other.variables and self.order == other.order)

    def __hash__(self):
        return hash((self.p, self.variables, self.order))

    def __repr__(self):
        return f"PolynomialRing(F_{self.p}[{', '.join(self.variables)}], {self.order!r})"

    def __getstate__(self):
        return {"p": self.p, "variables": self.variables, "order": self.order}

    def __setstate__(self, state):
        self.__init__(state["p"], state["variables"], state["order"])

    # monomial helpers on packed ints -------------------------------------------------

    def key(self, m: int) -> int:
        k = self._keys.get(m)
        if k is None:
            k = self.order.exponent_key(unpack(m, self.nvars))
            self._keys[m] = k
        return k

    def degree(self, m: int) -> int:
        d = self._degrees.get(m)
        if d is None:
            d = sum(unpack(m, self.nvars))
            self._degrees[m] = d
        return d

    def divides(self, a: int, b: int) -> bool:
        g = self.guard
        return ((b | g) - a) & g == g

    def lcm(self, a: int, b: int) -> int:
        return pack([max(x, y) for x, y in zip(unpack(a, self.nvars), unpack(b, self.nvars))])

    def exponents(self, m: int) -> tuple[int, ...]:
        return unpack(m, self.nvars)

    def monomial(self, m: int) -> Monomial:
        exps = unpack(m, self.nvars)
        return Monomial(exps, sum(exps))

    def pack_monomial(self, mono: Monomial | Sequence[int]) -> int:
        exps = mono.exponents if isinstance(mono, Monomial) else tuple(mono)
        if len(exps) != self.nvars:
            raise RingMismatchError("monomial has the wrong number of variables")
        if sum(exps) > MAX_DEGREE or min(exps, default=0) < 0:
            raise OverflowError("exponent out of range")
        return pack(exps)

    # constructors -------------------------------------------------------------------

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {0: 1})

    def constant(self, c: int) -> "Polynomial":
        c %= self.p
        return Polynomial(self, {0: c} if c else {})

    def gen(self, name_or_index: str | int) -> "Polynomial":
        i = self._var_index[name_or_index] if isinstance(name_or_index, str) else name_or_index
        exps = [0] * self.nvars
        exps[i] = 1
        return Polynomial(self, {pack(exps): 1})

    def gens(self) -> list["Polynomial"]:
        return [self.gen(i) for i in range(self.nvars)]

    def term(self, coeff: int, exps: Sequence[int]) -> "Polynomial":
        c = coeff % self.p
        return Polynomial(self, {self.pack_monomial(exps): c} if c else {})

    def from_terms(self, terms: Iterable[tuple[int, Monomial | Sequence[int]]]) -> "Polynomial":
        acc: dict[int, int] = {}
        p = self.p
        for c, mono in terms:
            m = self.pack_monomial(mono)
            acc[m] = (acc.get(m, 0) + c) % p
        return Polynomial(self, {m: c for m, c in acc.items() if c})

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(text, self)

    def with_order(self, order: MonomialOrder | str) -> "PolynomialRing":
        return PolynomialRing(self.p, self.variables, order)

    def index(self, name: str) -> int:
        return self._var_index[name]


class Polynomial:
    """Immutable sparse polynomial; terms kept as {packed monomial: coefficient}."""

    __slots__ = ("ring", "_t", "_sorted", "_hash")

    def __init__(self, ring: PolynomialRing, terms: dict[int, int]):
        self.ring = ring
        self._t = terms
        self._sorted = None
        self._hash = None

    # views -----------------------------------------------------------------------

    def sorted_items(self) -> list[tuple[int, int]]:
        """(packed monomial, coefficient) pairs, strictly descending."""
        if self._sorted is None:
            key = self.ring.key
            self._sorted = sorted(self._t.items(), key=lambda mc: key(mc[0]), reverse=True)
        return self._sorted

    def terms(self) -> list[tuple[int, Monomial]]:
        mono = self.ring.monomial
        return [(c, mono(m)) for m, c in self.sorted_items()]

    def term_dict(self) -> dict[int, int]:
        return dict(self._t)

    def __len__(self):
        return len(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def leading_monomial(self) -> int:
        if not self._t:
            raise AlgebraError("zero polynomial has no leading monomial")
        return self.sorted_items()[0][0]

    def leading_coefficient(self) -> int:
        return self.sorted_items()[0][1] if self._t else 0

    def total_degree(self) -> int:
        if not self._t:
            return -1
        return max(self.ring.degree(m) for m in self._t)

    def is_homogeneous(self) -> bool:
        return len({self.ring.degree(m) for m in self._t}) <= 1

    def monic(self) -> "Polynomial":
        if not self._t:
            return self
        inv = pow(self.leading_coefficient(), -1, self.ring.p)
        if inv == 1:
            return self
        p = self.ring.p
        return Polynomial(self.ring, {m: c * inv % p for m, c in self._t.items()})

    def constant_term(self) -> int:
        return self._t.get(0, 0)

    # arithmetic ------------------------------------------------------------------

    def _check(self, other) -> "Polynomial":
        if isinstance(other, int):
            return self.ring.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if other.ring != self.ring:
            raise RingMismatchError("polynomials from different rings")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        out = dict(self._t)
        for m, c in other._t.items():
            v = (out.get(m, 0) + c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, {m: (-c) % p for m, c in self._t.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if not self._t or not other._t:
            return self.ring.zero()
        if self.total_degree() + other.total_degree() > MAX_DEGREE:
            raise OverflowError("product degree exceeds the exponent range")
        p = self.ring.p
        out: dict[int, int] = {}
        get = out.get
        small, big = (self, other) if len(self._t) <= len(other._t) else (other, self)
        for m1, c1 in small._t.items():
            for m2, c2 in big._t.items():
                m = m1 + m2
                out[m] = (get(m, 0) + c1 * c2) % p
        return Polynomial(self.ring, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def mul_term(self, coeff: int, mono: int) -> "Polynomial":
        p = self.ring.p
        coeff %= p
        if not coeff:
            return self.ring.zero()
        return Polynomial(self.ring, {m + mono: c * coeff % p for m, c in self._t.items()})

    def __pow__(self, e: int):
        if e < 0:
            raise AlgebraError("negative power")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def frobenius(self, q: int) -> "Polynomial":
        """f^q for q a power of the characteristic: coefficients are fixed by F_p."""
        if not is_power_of(q, self.ring.p):
            raise AlgebraError(f"{q} is not a power of {self.ring.p}")
        if self._t and self.total_degree() * q > MAX_DEGREE:
            raise OverflowError("Frobenius power degree exceeds the exponent range")
        return Polynomial(self.ring, {m * q: c for m, c in self._t.items()})

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self._t == other._t

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


def is_power_of(q: int, p: int) -> bool:
    if q < 1:
        return False
    while q % p == 0:
        q //= p
    return q == 1


# printing / parsing --------------------------------------------------------------------


def format_monomial(ring: PolynomialRing, m: int) -> str:
    parts = []
    for name, e in zip(ring.variables, ring.exponents(m)):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_polynomial(f: Polynomial) -> str:
    if f.is_zero():
        return "0"
    out = []
    for m, c in f.sorted_items():
        mono = format_monomial(f.ring, m)
        if not mono:
            out.append(str(c))
        elif c == 1:
            out.append(mono)
        else:
            out.append(f"{c}*{mono}")
    return "+".join(out)


class PolynomialSyntaxError(AlgebraError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownVariableError(PolynomialSyntaxError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str) -> Iterator[tuple[str, str, int]]:
    pos = 0
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if mt is None:  # only trailing whitespace left
            break
        if mt.group(1) is not None:
            yield "int", mt.group(1), mt.start(1)
        elif mt.group(2) is not None:
            yield "name", mt.group(2), mt.start(2)
        else:
            yield "op", mt.group(3), mt.start(3)
        pos = mt.end()
    yield "end", "", len(text)


class _Parser:
    def __init__(self, text: str, ring: PolynomialRing):
        self.ring = ring
        self.tokens = list(_tokenize(text))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise PolynomialSyntaxError(f"expected {op!r}, found {val or 'end of input'!r}", pos)

    def parse(self) -> Polynomial:
        f = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise PolynomialSyntaxError(f"unexpected {val!r}", pos)
        return f

    def expr(self) -> Polynomial:
        kind, val, pos = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        f = self.term()
        if sign < 0:
            f = -f
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                f = f + t if val == "+" else f - t
            else:
                return f

    def term(self) -> Polynomial:
        f = self.factor()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "*":
                self.take()
                f = f * self.factor()
            elif kind in ("int", "name") or (kind == "op" and val == "("):
                f = f * self.factor()
            else:
                return f

    def exponent(self) -> int | None:
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "int":
                raise PolynomialSyntaxError("exponent must be a non-negative integer", pos)
            return int(val)
        return None

    def factor(self) -> Polynomial:
        kind, val, pos = self.take()
        if kind == "int":
            base = self.ring.constant(int(val))
        elif kind == "name":
            if val not in self.ring.variables:
                raise UnknownVariableError(f"unknown variable {val!r}", pos)
            base = self.ring.gen(val)
        elif kind == "op" and val == "(":
            base = self.expr()
            self.expect_op(")")
        else:
            raise PolynomialSyntaxError(f"unexpected {val or 'end of input'!r}", pos)
        e = self.exponent()
        if e is not None:
            if kind == "name":
                if e > MAX_DEGREE:
                    raise OverflowError("exponent out of range")
                exps = [0] * self.ring.nvars
                exps[self.ring.index(val)] = e
                return Polynomial(self.ring, {pack(exps): 1})
            return base ** e
        return base


def parse_polynomial(text: str, ring: PolynomialRing) -> Polynomial:
    """Parse integer-coefficient text such as ``"x^3+y^3+z^3"`` into ``ring``."""
    return _Parser(text, ring).parse()
