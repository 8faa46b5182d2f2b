"""Stiefel-Whitney classes of the real bundle induced by a conjugate complex bundle.

Everything is symbolic: a bundle of complex rank r is represented by its
twisted mod-2 Chern classes c~_1..c~_r, and y is w_1 of the line bundle of
the double cover.  The total class is

    W(t) = sum_j c~_j t^(2j) (1 + y t)^(r - j),

whose t^i coefficient is sum_j C(r-j, i-2j) y^(i-2j) c~_j.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from .gf2 import Poly, TableMismatchError, TruncatedSeries, VariableTable, binom_mod2


@dataclass(frozen=True)
class ConjugateBundle:
    """Symbolic conjugate bundle: its rank and twisted Chern classes c~_1..c~_r."""

    name: str
    rank: int
    chern: Tuple[Poly, ...]
    y: Poly

    def __post_init__(self):
        object.__setattr__(self, "chern", tuple(self.chern))
        if self.rank < 0:
            raise ValueError("negative rank")
        if len(self.chern) != self.rank:
            raise ValueError(f"{self.name}: {len(self.chern)} Chern classes for rank {self.rank}")
        for j, c in enumerate(self.chern, start=1):
            if c.table != self.y.table:
                raise TableMismatchError(f"{self.name}: c~{j} over another table")
            if c and (not c.is_homogeneous() or c.degree() != 2 * j):
                raise ValueError(f"{self.name}: c~{j} = {c} is not homogeneous of degree {2 * j}")

    @property
    def table(self) -> VariableTable:
        return self.y.table

    def c(self, j: int) -> Poly:
        """c~_j with c~_0 = 1 and c~_j = 0 beyond the rank."""
        if j == 0:
            return self.table.one()
        if 1 <= j <= self.rank:
            return self.chern[j - 1]
        return self.table.zero()


def bundle_from_variables(table: VariableTable, name: str, chern_vars: Sequence[str],
                          y: str = "y") -> ConjugateBundle:
    return ConjugateBundle(name, len(chern_vars), tuple(table.var(v) for v in chern_vars), table.var(y))


def trivial_bundle(table: VariableTable, rank: int = 1, y: str = "y") -> ConjugateBundle:
    """The trivial bundle with standard conjugation: c~_j = 0 for j >= 1."""
    return ConjugateBundle("trivial", rank, (table.zero(),) * rank, table.var(y))


def sw_class(bundle: ConjugateBundle, i: int, strict: bool = False) -> Poly:
    """w_i of the induced real bundle.

    Classes above 2r vanish and are returned as 0 unless ``strict`` is set,
    in which case an out-of-range index raises.
    """
    r = bundle.rank
    if i < 0 or (strict and i > 2 * r):
        raise ValueError(f"w_{i} requested for a bundle of complex rank {r}")
    acc = bundle.table.zero()
    for j in range(0, min(r, i // 2) + 1):
        if binom_mod2(r - j, i - 2 * j):
            acc = acc + (bundle.y ** (i - 2 * j)) * bundle.c(j)
    return acc


def sw_vector(bundle: ConjugateBundle) -> List[Poly]:
    return [sw_class(bundle, i) for i in range(2 * bundle.rank + 1)]


def total_sw(bundle: ConjugateBundle, D: int) -> TruncatedSeries:
    """Total class through t^D from the closed form sum_j c~_j t^2j (1+yt)^(r-j)."""
    table = bundle.table
    one_plus_yt = TruncatedSeries.linear(table, bundle.y, D)
    acc = [table.zero()] * (D + 1)
    for j in range(bundle.rank + 1):
        if 2 * j > D:
            break
        factor = one_plus_yt ** (bundle.rank - j)
        cj = bundle.c(j)
        for d in range(2 * j, D + 1):
            acc[d] = acc[d] + cj * factor[d - 2 * j]
    return TruncatedSeries(table, acc, D)


def chern_from_sw(sw: Sequence[Poly], r: int, y: Poly) -> List[Poly]:
    """Invert w_2j = sum_i C(r-i, 2j-2i) y^(2j-2i) c~_i for c~_1..c~_r.

    Only the even entries of ``sw`` are read.
    """
    if len(sw) < 2 * r + 1:
        raise ValueError(f"need w_0..w_{2 * r}, got {len(sw)} classes")
    chern: List[Poly] = [y.table.one()]
    for j in range(1, r + 1):
        if not (sw[2 * j].is_homogeneous() and sw[2 * j].degree() in (-1, 2 * j)):
            raise ValueError(f"w_{2 * j} = {sw[2 * j]} is not homogeneous of degree {2 * j}")
        cj = sw[2 * j]
        for i in range(j):
            if binom_mod2(r - i, 2 * j - 2 * i):
                cj = cj + (y ** (2 * j - 2 * i)) * chern[i]
        chern.append(cj)
    return chern[1:]


def odd_class_factor(bundle: ConjugateBundle, j: int) -> Poly:
    """P_j with w_(2j+1) = y * P_j, in the c~ variables (P_0 = r mod 2)."""
    if not 0 <= j < bundle.rank:
        raise ValueError(f"P_{j} needs 0 <= j < {bundle.rank}")
    w = sw_class(bundle, 2 * j + 1)
    y_mono = next(iter(bundle.y.terms))
    return w.divide_by_monomial(y_mono)


def chern_in_sw_variables(bundle: ConjugateBundle, even_sw: Dict[int, Poly]) -> Dict[int, Poly]:
    """c~_j rewritten as Q_j(y^2, w_2, .., w_2j), given polynomials standing for w_2i.

    ``even_sw[i]`` is the element representing w_(2i), 1 <= i <= r; the
    result maps j to Q_j in the same table.
    """
    table = next(iter(even_sw.values())).table if even_sw else bundle.table
    y = table.var(bundle.y.variables()[0])
    sw = [table.one()] + [table.zero()] * (2 * bundle.rank)
    for i, w in even_sw.items():
        sw[2 * i] = w
    return {j: q for j, q in enumerate(chern_from_sw(sw, bundle.rank, y), start=1)}


def direct_sum(b1: ConjugateBundle, b2: ConjugateBundle, name: str = "") -> ConjugateBundle:
    """Formal Whitney sum: ranks add, c~ classes convolve."""
    if b1.table != b2.table:
        raise TableMismatchError("bundles over different tables")
    r = b1.rank + b2.rank
    chern = []
    for j in range(1, r + 1):
        acc = b1.table.zero()
        for a in range(max(0, j - b2.rank), min(j, b1.rank) + 1):
            acc = acc + b1.c(a) * b2.c(j - a)
        chern.append(acc)
    return ConjugateBundle(name or f"{b1.name}+{b2.name}", r, tuple(chern), b1.y)


def whitney_sum(b1: ConjugateBundle, b2: ConjugateBundle, D: int) -> TruncatedSeries:
    """Total class of b1 + b2 through t^D, cross-checked against the product of totals."""
    summed = total_sw(direct_sum(b1, b2), D)
    if summed != total_sw(b1, D) * total_sw(b2, D):
        raise ArithmeticError("Whitney product formula failed")
    return summed
