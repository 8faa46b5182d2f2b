"""Groebner bases over GF(2), normal forms and Hilbert functions."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .gf2 import (
    GREVLEX,
    MonomialOrder,
    Monomial,
    Poly,
    TableMismatchError,
    VariableTable,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
    parse,
)


@dataclass(frozen=True)
class PresentedAlgebra:
    """A quotient GF(2)[table] / (relations, base^(m+1)).

    ``base`` names the degree-one class pulled back from RP^m; ``m`` is the
    height of that class, ``None`` meaning RP^infinity (nothing adjoined).
    """

    table: VariableTable
    relations: Tuple[Poly, ...]
    base: Optional[str] = None
    m: Optional[int] = None
    metadata: str = ""

    def __post_init__(self):
        object.__setattr__(self, "relations", tuple(self.relations))
        for r in self.relations:
            if r.table != self.table:
                raise TableMismatchError(f"relation {r} is over {r.table.names}")
            if not r.is_homogeneous():
                raise ValueError(f"relation {r} is not homogeneous")
        if self.base is not None:
            self.table.index(self.base)
        if self.m is not None:
            if self.base is None:
                raise ValueError("a finite height needs a base variable")
            if self.m < 0:
                raise ValueError("negative base height")

    @property
    def truncation(self) -> Optional[Poly]:
        if self.base is None or self.m is None:
            return None
        return self.table.var(self.base, self.m + 1)

    def generators(self) -> List[Poly]:
        gens = [r for r in self.relations if r]
        t = self.truncation
        if t is not None:
            gens.append(t)
        return gens

    def with_height(self, m: Optional[int]) -> "PresentedAlgebra":
        return replace(self, m=m)

    def to_json(self) -> dict:
        return {
            "variables": self.table.to_json(),
            "relations": [r.render() for r in self.relations],
            "truncation": None if self.truncation is None else {"var": self.base, "power": self.m + 1},
            "metadata": self.metadata,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "PresentedAlgebra":
        table = VariableTable.from_pairs((v["name"], v["degree"]) for v in doc["variables"])
        rels = [parse(s, table) for s in doc["relations"]]
        trunc = doc.get("truncation")
        base = m = None
        if trunc is not None:
            base, m = trunc["var"], int(trunc["power"]) - 1
        return cls(table, tuple(rels), base, m, doc.get("metadata", ""))


class _Reducer:
    """Full reduction of polynomials by a list of (lead, poly) pairs."""

    def __init__(self, table: VariableTable, order: MonomialOrder):
        self.table = table
        self.order = order
        self.divisors: List[Tuple[Monomial, Poly]] = []

    def heapkey(self, mono: Monomial) -> tuple:
        return tuple(-k for k in self.order.key(self.table, mono))

    def lead(self, p: Poly) -> Monomial:
        return p.lead(self.order)

    def find_divisor(self, mono: Monomial) -> Optional[Tuple[Monomial, Poly]]:
        for lm, g in self.divisors:
            if mono_divides(lm, mono):
                return lm, g
        return None

    def reduce(self, p: Poly) -> Poly:
        work = set(p.terms)
        heap = [(self.heapkey(t), t) for t in work]
        heapq.heapify(heap)
        remainder = set()
        while heap:
            _, t = heapq.heappop(heap)
            if t not in work:
                continue
            hit = self.find_divisor(t)
            if hit is None:
                work.discard(t)
                remainder.add(t)
                continue
            lm, g = hit
            q = mono_div(t, lm)
            for s in g.terms:
                u = mono_mul(s, q)
                if u in work:
                    work.discard(u)
                else:
                    work.add(u)
                    heapq.heappush(heap, (self.heapkey(u), u))
        return Poly(self.table, remainder)


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Groebner basis, generators sorted by increasing leading monomial."""

    table: VariableTable
    order: MonomialOrder
    generators: Tuple[Poly, ...]
    leads: Tuple[Monomial, ...] = field(default=())

    def __post_init__(self):
        if not self.leads:
            object.__setattr__(self, "leads", tuple(g.lead(self.order) for g in self.generators))

    def reducer(self) -> _Reducer:
        red = _Reducer(self.table, self.order)
        red.divisors = list(zip(self.leads, self.generators))
        return red

    def normal_form(self, p: Poly) -> Poly:
        return normal_form(p, self)

    def contains(self, p: Poly) -> bool:
        return not normal_form(p, self)

    def is_unit_ideal(self) -> bool:
        return any(not any(lm) for lm in self.leads)

    def rendered(self) -> List[str]:
        return [g.render(self.order) for g in self.generators]


def _spoly(f: Poly, lf: Monomial, g: Poly, lg: Monomial) -> Poly:
    lcm = mono_lcm(lf, lg)
    return f.times_monomial(mono_div(lcm, lf)) + g.times_monomial(mono_div(lcm, lg))


def groebner_basis(table: VariableTable, polys: Iterable[Poly],
                   order: MonomialOrder = GREVLEX) -> GroebnerBasis:
    """Buchberger's algorithm with the Gebauer-Moeller pair criteria.

    Pairs are processed by the normal strategy (smallest lcm first) with ties
    broken by index, so the output is a deterministic function of the input.
    """
    polys = [p for p in polys if p]
    for p in polys:
        if p.table != table:
            raise TableMismatchError(f"{p} is over {p.table.names}")
    red = _Reducer(table, order)
    key = lambda mono: order.key(table, mono)

    basis: List[Poly] = []
    leads: List[Monomial] = []
    active: List[bool] = []
    pairs: Dict[Tuple[int, int], Monomial] = {}

    def refresh_divisors():
        red.divisors = [(leads[i], basis[i]) for i in range(len(basis)) if active[i]]

    def update(h: Poly):
        lh = h.lead(order)
        hi = len(basis)
        cands = [i for i in range(hi) if active[i]]
        lcms = {i: mono_lcm(leads[i], lh) for i in cands}
        coprime = {i: all(a == 0 or b == 0 for a, b in zip(leads[i], lh)) for i in cands}
        # chain criterion among the new pairs (Becker-Weispfenning UPDATE)
        pending = list(cands)
        keep: List[int] = []
        while pending:
            i = pending.pop(0)
            li = lcms[i]
            if coprime[i] or not any(mono_divides(lcms[j], li) for j in pending + keep):
                keep.append(i)
        # product criterion
        new_pairs = {(i, hi): lcms[i] for i in keep if not coprime[i]}
        # prune old pairs whose lcm is divisible by lh, unless it shares an lcm with h
        for (i, j), l in list(pairs.items()):
            if mono_divides(lh, l) and mono_lcm(leads[i], lh) != l and mono_lcm(leads[j], lh) != l:
                del pairs[i, j]
        pairs.update(new_pairs)
        for i in cands:
            if mono_divides(lh, leads[i]):
                active[i] = False
        basis.append(h)
        leads.append(lh)
        active.append(True)
        refresh_divisors()

    for p in sorted(polys, key=lambda q: (key(q.lead(order)), sorted(map(key, q.terms)))):
        h = red.reduce(p)
        if h:
            update(h)

    while pairs:
        i, j = min(pairs, key=lambda ij: (key(pairs[ij]), ij))
        del pairs[i, j]
        s = _spoly(basis[i], leads[i], basis[j], leads[j])
        h = red.reduce(s)
        if h:
            update(h)

    # interreduce the surviving elements into the reduced basis
    final = [basis[i] for i in range(len(basis)) if active[i]]
    out = []
    for idx, g in enumerate(final):
        lg = g.lead(order)
        others = _Reducer(table, order)
        others.divisors = [(f.lead(order), f) for k, f in enumerate(final) if k != idx]
        tail = Poly(table, g.terms - {lg})
        out.append(Poly(table, others.reduce(tail).terms | {lg}))
    out.sort(key=lambda g: key(g.lead(order)))
    return GroebnerBasis(table, order, tuple(out))


def buchberger(algebra: PresentedAlgebra, order: MonomialOrder = GREVLEX) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal presenting ``algebra``."""
    return groebner_basis(algebra.table, algebra.generators(), order)


def normal_form(p: Poly, gb: GroebnerBasis) -> Poly:
    if p.table != gb.table:
        raise TableMismatchError(f"{p.table.names} vs {gb.table.names}")
    return gb.reducer().reduce(p)


def count_standard_monomials(table: VariableTable, leads: Sequence[Monomial], D: int) -> List[int]:
    """Number of monomials of each weighted degree <= D divisible by no lead.

    Standard monomials form an order ideal, so a depth-first walk that adds
    variables in non-decreasing index order and stops at the first divisible
    monomial visits each of them exactly once.
    """
    if D < 0:
        raise ValueError("negative degree bound")
    degs = table.degrees
    nv = len(degs)
    dims = [0] * (D + 1)
    leads = list(leads)
    if any(not any(lm) for lm in leads):
        return dims
    mono = [0] * nv

    def blocked() -> bool:
        return any(all(a <= b for a, b in zip(lm, mono)) for lm in leads)

    def walk(deg: int, start: int):
        dims[deg] += 1
        for v in range(start, nv):
            nd = deg + degs[v]
            if nd > D:
                continue
            mono[v] += 1
            if not blocked():
                walk(nd, v)
            mono[v] -= 1

    walk(0, 0)
    return dims


def hilbert_function(algebra: PresentedAlgebra, D: int,
                     order: MonomialOrder = GREVLEX) -> List[int]:
    """dims[d] = dim_GF(2) of the degree-d part of the algebra, 0 <= d <= D."""
    gb = buchberger(algebra, order)
    return count_standard_monomials(algebra.table, gb.leads, D)


def series_product(a: Sequence[int], b: Sequence[int], D: int) -> List[int]:
    """Coefficients of a*b through t^D."""
    out = [0] * (D + 1)
    for i, x in enumerate(a[: D + 1]):
        if x:
            for j, y in enumerate(b[: D + 1 - i]):
                out[i + j] += x * y
    return out


def complete_intersection_series(gen_degrees: Sequence[int], var_degrees: Sequence[int],
                                 D: int) -> List[int]:
    """prod (1 - t^g) / prod (1 - t^v), expanded through t^D."""
    s = [1] + [0] * D
    for g in gen_degrees:
        s = [s[d] - (s[d - g] if d >= g else 0) for d in range(D + 1)]
    for v in var_degrees:
        for d in range(v, D + 1):
            s[d] += s[d - v]
    return s


@dataclass(frozen=True)
class RegularSequenceCertificate:
    passed: bool
    witness_degree: Optional[int]
    observed: Tuple[int, ...]
    expected: Tuple[int, ...]

    def to_json(self) -> dict:
        return {"passed": self.passed, "witness_degree": self.witness_degree,
                "observed": list(self.observed), "expected": list(self.expected)}


def regular_sequence_certificate(ambient: VariableTable, gens: Sequence[Poly], D: int,
                                 modulo: Sequence[Poly] = ()) -> RegularSequenceCertificate:
    """Certify that ``gens`` is a regular sequence by Hilbert series factorization.

    Over ``S = GF(2)[ambient] / (modulo)`` a homogeneous sequence g_1..g_s is
    regular iff H(S/(g)) = H(S) * prod (1 - t^deg g_i).  With ``modulo`` empty
    H(S) is 1/prod(1 - t^deg v).  Agreement is checked through degree D; on
    failure the witness is the first degree where the two series disagree.
    """
    for g in list(gens) + list(modulo):
        if g.table != ambient:
            raise TableMismatchError(f"{g} is over {g.table.names}")
        if not g:
            raise ValueError("zero element in a candidate regular sequence")
        if not g.is_homogeneous():
            raise ValueError(f"{g} is not homogeneous")
    gen_degrees = [g.degree() for g in gens]
    if modulo:
        base = count_standard_monomials(ambient, groebner_basis(ambient, modulo).leads, D)
        expected = complete_intersection_series(gen_degrees, [], D)
        expected = series_product(base, expected, D)
    else:
        expected = complete_intersection_series(gen_degrees, ambient.degrees, D)
    gb = groebner_basis(ambient, list(modulo) + list(gens))
    observed = count_standard_monomials(ambient, gb.leads, D)
    witness = next((d for d in range(D + 1) if observed[d] != expected[d]), None)
    return RegularSequenceCertificate(witness is None, witness, tuple(observed), tuple(expected))


def ideals_equal(table: VariableTable, first: Sequence[Poly], second: Sequence[Poly],
                 order: MonomialOrder = GREVLEX) -> Tuple[bool, List[Poly], List[Poly]]:
    """Mutual normal-form reduction; returns (equal, first-not-in-second, second-not-in-first)."""
    gb1 = groebner_basis(table, first, order)
    gb2 = groebner_basis(table, second, order)
    missing_in_2 = [p for p in first if not gb2.contains(p)]
    missing_in_1 = [p for p in second if not gb1.contains(p)]
    return (not missing_in_2 and not missing_in_1), missing_in_2, missing_in_1
