"""Sparse multivariate polynomials over GF(2) with a weighted grading.

A polynomial is a set of exponent tuples: every coefficient is 1, so addition
is symmetric difference of supports.  Every variable carries a positive degree
and all gradings in the package are the weighted ones.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

Monomial = Tuple[int, ...]

_NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


class TableMismatchError(ValueError):
    """Operands live in different polynomial rings."""


def binom_mod2(a: int, b: int) -> int:
    """C(a, b) mod 2 by Lucas; zero when b > a or either argument is negative."""
    if a < 0 or b < 0 or b > a:
        return 0
    return 1 if (a & b) == b else 0


@dataclass(frozen=True)
class VariableTable:
    """Ordered variables with their degrees.

    The order of ``names`` is the variable order used by monomial orders:
    the last variable is the cheapest one under graded reverse lex.
    """

    names: Tuple[str, ...]
    degrees: Tuple[int, ...]
    metadata: Tuple[Tuple[str, str], ...] = field(default=(), compare=False)

    def __post_init__(self):
        if len(self.names) != len(self.degrees):
            raise ValueError("names and degrees differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        for name, deg in zip(self.names, self.degrees):
            if not _NAME_RE.match(name):
                raise ValueError(f"bad variable name {name!r}")
            if int(deg) < 1:
                raise ValueError(f"variable {name} has degree {deg} < 1")

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[str, int]], **metadata: str) -> "VariableTable":
        pairs = list(pairs)
        return cls(tuple(p[0] for p in pairs), tuple(int(p[1]) for p in pairs),
                   tuple(sorted(metadata.items())))

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no variable {name!r} in table {self.names}") from None

    def degree_of(self, name: str) -> int:
        return self.degrees[self.index(name)]

    def weight(self, mono: Monomial) -> int:
        return sum(e * d for e, d in zip(mono, self.degrees))

    def meta(self, key: str, default: Optional[str] = None) -> Optional[str]:
        return dict(self.metadata).get(key, default)

    # constructors for elements of the ring
    def zero(self) -> "Poly":
        return Poly(self, ())

    def one(self) -> "Poly":
        return Poly(self, (self.unit(),))

    def unit(self) -> Monomial:
        return (0,) * len(self.names)

    def var(self, name: str, power: int = 1) -> "Poly":
        exps = [0] * len(self.names)
        exps[self.index(name)] = power
        return Poly(self, (tuple(exps),))

    def gens(self) -> List["Poly"]:
        return [self.var(n) for n in self.names]

    def to_json(self) -> List[Dict[str, object]]:
        return [{"name": n, "degree": d} for n, d in zip(self.names, self.degrees)]


class MonomialOrder:
    """Weighted graded monomial orders.

    ``kind`` is ``"grevlex"`` or ``"grlex"``.  ``key(mono)`` is increasing in
    the order, so ``max(terms, key=order.key)`` is the leading monomial.
    """

    KINDS = ("grevlex", "grlex")

    def __init__(self, kind: str = "grevlex"):
        if kind not in self.KINDS:
            raise ValueError(f"unknown monomial order {kind!r}")
        self.kind = kind

    def key(self, table: VariableTable, mono: Monomial) -> tuple:
        w = table.weight(mono)
        if self.kind == "grlex":
            return (w,) + tuple(mono)
        return (w,) + tuple(-e for e in reversed(mono))

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and other.kind == self.kind

    def __hash__(self):
        return hash(self.kind)

    def __repr__(self):
        return f"MonomialOrder({self.kind!r})"


GREVLEX = MonomialOrder("grevlex")
GRLEX = MonomialOrder("grlex")


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True when a | b."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


class Poly:
    """Immutable element of GF(2)[vars]."""

    __slots__ = ("table", "terms", "_hash")

    def __init__(self, table: VariableTable, terms: Iterable[Monomial] = ()):
        self.table = table
        self.terms = frozenset(terms)
        self._hash = None

    @classmethod
    def from_terms(cls, table: VariableTable, terms: Iterable[Sequence[int]]) -> "Poly":
        """Build from a list of exponent vectors, cancelling repeats mod 2."""
        acc = set()
        n = len(table)
        for t in terms:
            t = tuple(int(e) for e in t)
            if len(t) != n or min(t, default=0) < 0:
                raise ValueError(f"bad exponent vector {t} for table {table.names}")
            acc ^= {t}
        return cls(table, acc)

    # ring structure
    def _check(self, other: "Poly"):
        if not isinstance(other, Poly):
            raise TypeError(f"cannot combine Poly with {type(other).__name__}")
        if other.table is not self.table and other.table != self.table:
            raise TableMismatchError(f"{self.table.names} vs {other.table.names}")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        return Poly(self.table, self.terms ^ other.terms)

    __sub__ = __add__

    def __neg__(self) -> "Poly":
        return self

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        if not self.terms or not other.terms:
            return Poly(self.table, ())
        acc = set()
        for a in self.terms:
            for b in other.terms:
                acc ^= {tuple(x + y for x, y in zip(a, b))}
        return Poly(self.table, acc)

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative power")
        result = self.table.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base.square()
        return result

    def square(self) -> "Poly":
        # Frobenius: cross terms cancel in characteristic 2
        return Poly(self.table, (tuple(2 * x for x in t) for t in self.terms))

    def times_monomial(self, mono: Monomial) -> "Poly":
        return Poly(self.table, (mono_mul(t, mono) for t in self.terms))

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return other in (0, 1) and self.terms == (self.table.one().terms if other else frozenset())
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms and self.table == other.table

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.table, self.terms))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self.sorted_terms())

    # grading
    def degrees(self) -> List[int]:
        return sorted({self.table.weight(t) for t in self.terms})

    def degree(self) -> int:
        """Top weighted degree; -1 for the zero polynomial."""
        return max((self.table.weight(t) for t in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly(self.table, (t for t in self.terms if self.table.weight(t) == d))

    def sorted_terms(self, order: MonomialOrder = GREVLEX) -> List[Monomial]:
        return sorted(self.terms, key=lambda t: order.key(self.table, t), reverse=True)

    def lead(self, order: MonomialOrder = GREVLEX) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=lambda t: order.key(self.table, t))

    def variables(self) -> List[str]:
        used = set()
        for t in self.terms:
            used.update(i for i, e in enumerate(t) if e)
        return [self.table.names[i] for i in sorted(used)]

    def divide_by_monomial(self, mono: Monomial) -> "Poly":
        """Exact quotient; raises if some term is not divisible."""
        for t in self.terms:
            if not mono_divides(mono, t):
                raise ArithmeticError(f"term {render_monomial(self.table, t)} not divisible")
        return Poly(self.table, (mono_div(t, mono) for t in self.terms))

    def substitute(self, images: Dict[str, "Poly"], target: Optional[VariableTable] = None) -> "Poly":
        """Ring map sending variable ``name`` to ``images[name]``.

        Variables missing from ``images`` map to the same-named variable of
        ``target`` (which defaults to this table).
        """
        target = target or self.table
        gens = []
        for name in self.table.names:
            if name in images:
                img = images[name]
                if img.table != target:
                    raise TableMismatchError(f"image of {name} lives in {img.table.names}")
            else:
                img = target.var(name)
            gens.append(img)
        result = set()
        cache: Dict[Tuple[int, int], Poly] = {}
        for t in self.terms:
            acc = target.one()
            for i, e in enumerate(t):
                if e:
                    if (i, e) not in cache:
                        cache[i, e] = gens[i] ** e
                    acc = acc * cache[i, e]
            result ^= acc.terms
        return Poly(target, result)

    def set_zero(self, names: Iterable[str]) -> "Poly":
        idx = [self.table.index(n) for n in names]
        return Poly(self.table, (t for t in self.terms if all(t[i] == 0 for i in idx)))

    # text form
    def render(self, order: MonomialOrder = GREVLEX) -> str:
        return render(self, order)

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"Poly({render(self)!r})"


def render_monomial(table: VariableTable, mono: Monomial) -> str:
    parts = []
    for name, e in zip(table.names, mono):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def render(p: Poly, order: MonomialOrder = GREVLEX) -> str:
    """Canonical text: terms in decreasing monomial order, joined by ' + '."""
    if not p.terms:
        return "0"
    return " + ".join(render_monomial(p.table, t) for t in p.sorted_terms(order))


def parse(text: str, table: VariableTable) -> Poly:
    """Inverse of :func:`render`; also accepts ``**`` for powers and stray spaces."""
    text = text.replace("**", "^").strip()
    if not text:
        raise ValueError("empty polynomial text")
    terms = []
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not chunk:
            raise ValueError(f"dangling '+' in {text!r}")
        exps = [0] * len(table)
        coeff = 1
        for factor in chunk.split("*"):
            factor = factor.strip()
            if factor.isdigit():
                coeff *= int(factor)
                continue
            name, _, power = factor.partition("^")
            name = name.strip()
            try:
                e = int(power) if power else 1
            except ValueError:
                raise ValueError(f"bad exponent in {factor!r}") from None
            exps[table.index(name)] += e
        if coeff % 2:
            terms.append(tuple(exps))
    return Poly.from_terms(table, terms)


class TruncatedSeries:
    """Power series in t with polynomial coefficients, kept through t^bound."""

    __slots__ = ("table", "bound", "coeffs")

    def __init__(self, table: VariableTable, coeffs: Sequence[Poly], bound: int):
        if bound < 0:
            raise ValueError("negative truncation bound")
        self.table = table
        self.bound = bound
        padded = list(coeffs[: bound + 1])
        for c in padded:
            if c.table != table:
                raise TableMismatchError("series coefficient from another table")
        padded += [table.zero()] * (bound + 1 - len(padded))
        self.coeffs = tuple(padded)

    @classmethod
    def one(cls, table: VariableTable, bound: int) -> "TruncatedSeries":
        return cls(table, [table.one()], bound)

    @classmethod
    def linear(cls, table: VariableTable, a: Poly, bound: int) -> "TruncatedSeries":
        """1 + a*t"""
        return cls(table, [table.one(), a], bound)

    def __getitem__(self, i: int) -> Poly:
        if 0 <= i <= self.bound:
            return self.coeffs[i]
        return self.table.zero()

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        if other.table != self.table:
            raise TableMismatchError("series over different tables")
        D = min(self.bound, other.bound)
        out = []
        for d in range(D + 1):
            acc = set()
            for i in range(d + 1):
                a, b = self.coeffs[i], other.coeffs[d - i]
                if a and b:
                    acc ^= (a * b).terms
            out.append(Poly(self.table, acc))
        return TruncatedSeries(self.table, out, D)

    def __pow__(self, e: int) -> "TruncatedSeries":
        result = TruncatedSeries.one(self.table, self.bound)
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.bound == other.bound and self.coeffs == other.coeffs

    def truncate(self, bound: int) -> "TruncatedSeries":
        return TruncatedSeries(self.table, self.coeffs, min(bound, self.bound))

    def is_one(self) -> bool:
        return self.coeffs[0] == self.table.one() and not any(self.coeffs[1:])

    def invert(self) -> "TruncatedSeries":
        return series_invert(self)

    def __repr__(self):
        shown = [f"({c})t^{i}" for i, c in enumerate(self.coeffs) if c]
        return f"TruncatedSeries({' + '.join(shown) or '0'}; O(t^{self.bound + 1}))"


def series_invert(s: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse through t^bound; the constant term must be 1.

    Uses b_d = sum_{i=1..d} s_i b_{d-i} (no signs in characteristic 2) and
    re-multiplies to confirm the result.
    """
    if s.coeffs[0] != s.table.one():
        raise ArithmeticError(f"constant term {s.coeffs[0]} is not 1; series is not invertible")
    inv = [s.table.one()]
    for d in range(1, s.bound + 1):
        acc = set()
        for i in range(1, d + 1):
            if s.coeffs[i] and inv[d - i]:
                acc ^= (s.coeffs[i] * inv[d - i]).terms
        inv.append(Poly(s.table, acc))
    result = TruncatedSeries(s.table, inv, s.bound)
    if not (s * result).is_one():
        raise ArithmeticError("series inverse failed re-multiplication check")
    return result
