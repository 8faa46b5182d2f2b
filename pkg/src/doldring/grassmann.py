"""Presentations of H*(P(S^m, X); Z2) for Grassmann, flag and sphere fibres.

For a Grassmannian G(n, k) the relations come from the power series

    a(t) = (1 + y t)^n * W(gamma, t)^(-1),

and the ideal is generated by y^(m+1) and a_2j for n-k < j <= n.  Flags
F(n_1, .., n_r) use the product of the inverse total classes of the first
r-1 tautological bundles instead.  ``m=None`` stands for RP^infinity, which
gives the Borel equivariant cohomology of the fibre.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

from .gf2 import Poly, TruncatedSeries, VariableTable, series_invert
from .groebner import (
    PresentedAlgebra,
    groebner_basis,
    ideals_equal,
    series_product,
)
from .swclass import ConjugateBundle, bundle_from_variables, chern_in_sw_variables, direct_sum, sw_class, total_sw

Height = Optional[int]


@dataclass(frozen=True)
class FlagType:
    nu: Tuple[int, ...]

    def __post_init__(self):
        nu = tuple(int(x) for x in self.nu)
        object.__setattr__(self, "nu", nu)
        if len(nu) < 2:
            raise ValueError(f"a flag type needs at least two parts, got {nu}")
        if any(x < 1 for x in nu):
            raise ValueError(f"flag parts must be positive: {nu}")
        if any(a > b for a, b in zip(nu, nu[1:])):
            raise ValueError(f"flag type {nu} is not increasing")

    @property
    def n(self) -> int:
        return sum(self.nu)

    @property
    def complex_dimension(self) -> int:
        return sum(a * b for a, b in itertools.combinations(self.nu, 2))


@dataclass(frozen=True)
class SeriesRelationSet:
    """Coefficients a_0..a_bound of a relation series and which ones generate the ideal."""

    a_coeffs: Tuple[Poly, ...]
    source: str
    indices: Tuple[int, ...]

    def __post_init__(self):
        a = self.a_coeffs
        if a[0] != a[0].table.one():
            raise ValueError("a_0 must be 1")
        y = a[0].table.index("y")
        for j in range(1, len(a), 2):
            if any(t[y] == 0 for t in a[j].terms):
                raise ValueError(f"a_{j} has a monomial without y")

    def __getitem__(self, j: int) -> Poly:
        return self.a_coeffs[j]

    def generators(self) -> List[Poly]:
        return [self.a_coeffs[j] for j in self.indices]

    @property
    def bound(self) -> int:
        return len(self.a_coeffs) - 1


def _check_height(m: Height):
    if m is not None and (not isinstance(m, int) or m < 0):
        raise ValueError(f"base height must be a non-negative integer or None, got {m!r}")


def _series_bound(n: int, m: Height) -> int:
    # a_2j is needed only for j <= n; the longer generating set reaches 2n + m
    return 2 * n + (m + 1 if m is not None else 0)


def _relation_series(table: VariableTable, n: int, bundles: Sequence[ConjugateBundle],
                     bound: int) -> TruncatedSeries:
    a = TruncatedSeries.linear(table, table.var("y"), bound) ** n
    for b in bundles:
        a = a * series_invert(total_sw(b, bound))
    return a


def grassmann_table(k: int) -> VariableTable:
    pairs = [(f"c{j}", 2 * j) for j in range(1, k + 1)] + [("y", 1)]
    return VariableTable.from_pairs(pairs, y="w1(xi); written x in the SW formula")


def grassmann_bundle(table: VariableTable, k: int) -> ConjugateBundle:
    return bundle_from_variables(table, "gamma", [f"c{j}" for j in range(1, k + 1)])


def grassmann_presentation(n: int, k: int, m: Height) -> Tuple[PresentedAlgebra, SeriesRelationSet]:
    """H*(P(S^m, G(n,k)); Z2) in the variables y, c~_1..c~_k of the tautological bundle."""
    if not (isinstance(n, int) and isinstance(k, int) and 1 <= k <= n - 1):
        raise ValueError(f"need 1 <= k <= n-1, got n={n}, k={k}")
    _check_height(m)
    table = grassmann_table(k)
    gamma = grassmann_bundle(table, k)
    bound = _series_bound(n, m)
    a = _relation_series(table, n, [gamma], bound)
    rel = SeriesRelationSet(a.coeffs, "grassmann", tuple(2 * j for j in range(n - k + 1, n + 1)))
    alg = PresentedAlgebra(table, tuple(rel.generators()), "y", m,
                           f"grassmann n={n} k={k} m={'inf' if m is None else m}")
    return alg, rel


def grassmann_long_generators(n: int, k: int, m: int) -> List[Poly]:
    """The other generating set: y^(m+1) and a_(2n-2k+i) for 1 <= i <= m+2k."""
    alg, rel = grassmann_presentation(n, k, m)
    return [rel[2 * n - 2 * k + i] for i in range(1, m + 2 * k + 1) if rel[2 * n - 2 * k + i]] + [alg.truncation]


def grassmann_generating_sets_agree(n: int, k: int, m: int) -> bool:
    alg, _ = grassmann_presentation(n, k, m)
    equal, _, _ = ideals_equal(alg.table, alg.generators(), grassmann_long_generators(n, k, m))
    return equal


def high_coefficients_reduce(n: int, k: int, count: int) -> List[int]:
    """Indices i in 1..count with a_(2n+i) NOT in (y, a_j : 2n-2k < j <= 2n); expected empty."""
    table = grassmann_table(k)
    a = _relation_series(table, n, [grassmann_bundle(table, k)], 2 * n + count)
    gb = groebner_basis(table, [table.var("y")] + [a[j] for j in range(2 * n - 2 * k + 1, 2 * n + 1)])
    return [i for i in range(1, count + 1) if not gb.contains(a[2 * n + i])]


def flag_table(flag: FlagType) -> VariableTable:
    pairs = [(f"c{i}_{j}", 2 * i)
             for j, nj in enumerate(flag.nu[:-1], start=1)
             for i in range(1, nj + 1)]
    return VariableTable.from_pairs(pairs + [("y", 1)], y="w1(xi)")


def flag_bundles(table: VariableTable, flag: FlagType) -> List[ConjugateBundle]:
    return [bundle_from_variables(table, f"gamma{j}", [f"c{i}_{j}" for i in range(1, nj + 1)])
            for j, nj in enumerate(flag.nu[:-1], start=1)]


def flag_presentation(flag, m: Height) -> Tuple[PresentedAlgebra, SeriesRelationSet]:
    """H*(P(S^m, F_nu); Z2) in y and the c~_(i,j), j < r; generators a_2s, n_r < s <= n."""
    if not isinstance(flag, FlagType):
        flag = FlagType(tuple(flag))
    _check_height(m)
    n = flag.n
    table = flag_table(flag)
    bound = _series_bound(n, m)
    a = _relation_series(table, n, flag_bundles(table, flag), bound)
    rel = SeriesRelationSet(a.coeffs, "flag", tuple(2 * s for s in range(flag.nu[-1] + 1, n + 1)))
    nu = ",".join(map(str, flag.nu))
    alg = PresentedAlgebra(table, tuple(rel.generators()), "y", m,
                           f"flag nu=({nu}) m={'inf' if m is None else m}")
    return alg, rel


def grassmann_to_flag_map(flag: FlagType) -> Dict[str, Poly]:
    """Images of c~_l(gamma_(n,k)), k = n - n_r, under the pull-back to the flag."""
    table = flag_table(flag)
    bundles = flag_bundles(table, flag)
    total = bundles[0]
    for b in bundles[1:]:
        total = direct_sum(total, b)
    images = {f"c{l}": total.c(l) for l in range(1, total.rank + 1)}
    images["y"] = table.var("y")
    return images


def functoriality_holds(flag: FlagType, m: Height) -> bool:
    """The Grassmann relations map into the flag ideal under the pull-back."""
    k = flag.n - flag.nu[-1]
    galg, _ = grassmann_presentation(flag.n, k, m)
    falg, _ = flag_presentation(flag, m)
    images = grassmann_to_flag_map(flag)
    gb = groebner_basis(falg.table, falg.generators())
    return all(gb.contains(g.substitute(images, falg.table)) for g in galg.generators())


def sw_form(alg: PresentedAlgebra, bundles: Sequence[ConjugateBundle],
            names: Sequence[Sequence[str]]) -> Tuple[PresentedAlgebra, Dict[str, Poly], Dict[str, Poly]]:
    """Rewrite a c~ presentation in the even Stiefel-Whitney classes.

    ``names[b][i-1]`` is the new variable standing for w_2i of bundle b.
    Returns the new algebra, the map c~ -> w-polynomials and the inverse map
    w -> c~-polynomials.
    """
    pairs = [(nm, 2 * i) for group in names for i, nm in enumerate(group, start=1)]
    wtable = VariableTable.from_pairs(pairs + [("y", 1)], y="w1(xi)")
    forward: Dict[str, Poly] = {}
    backward: Dict[str, Poly] = {}
    for b, group in zip(bundles, names):
        q = chern_in_sw_variables(b, {i: wtable.var(nm) for i, nm in enumerate(group, start=1)})
        for i, nm in enumerate(group, start=1):
            (cvar,) = b.c(i).variables()
            forward[cvar] = q[i]
            backward[nm] = sw_class(b, 2 * i)
    forward["y"] = wtable.var("y")
    backward["y"] = alg.table.var("y")
    rels = tuple(r.substitute(forward, wtable) for r in alg.relations)
    walg = PresentedAlgebra(wtable, rels, "y", alg.m, alg.metadata + " (w-classes)")
    return walg, forward, backward


def grassmann_sw_form(n: int, k: int, m: Height):
    alg, _ = grassmann_presentation(n, k, m)
    gamma = grassmann_bundle(alg.table, k)
    return sw_form(alg, [gamma], [[f"w{2 * j}" for j in range(1, k + 1)]])


def flag_sw_form(flag, m: Height):
    if not isinstance(flag, FlagType):
        flag = FlagType(tuple(flag))
    alg, _ = flag_presentation(flag, m)
    bundles = flag_bundles(alg.table, flag)
    names = [[f"w{2 * i}_{j}" for i in range(1, nj + 1)] for j, nj in enumerate(flag.nu[:-1], start=1)]
    return sw_form(alg, bundles, names)


def sphere_bundle_presentation(n: int, m: Height) -> PresentedAlgebra:
    """H*(P(S^m, S^n); Z2): A[u]/(u^2) with deg u = n for n >= 2, A[a]/(a^2 + a y) for n = 1."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"sphere dimension must be >= 1, got {n!r}")
    _check_height(m)
    tag = f"sphere n={n} m={'inf' if m is None else m}"
    if n == 1:
        table = VariableTable.from_pairs([("a", 1), ("y", 1)])
        a, y = table.var("a"), table.var("y")
        return PresentedAlgebra(table, (a * a + a * y,), "y", m, tag)
    table = VariableTable.from_pairs([("u", n), ("y", 1)])
    u = table.var("u")
    return PresentedAlgebra(table, (u * u,), "y", m, tag)


def equivariant_presentation(alg: PresentedAlgebra) -> PresentedAlgebra:
    """Same relations over Z2[y] = H*(RP^infinity): the y-truncation is dropped."""
    if alg.base is None:
        raise ValueError("algebra has no base variable")
    return replace(alg, m=None, metadata=re.sub(r"\bm=(\d+|inf)\b", "m=inf", alg.metadata))


# Poincare polynomials, computed by integer recurrences only

def q_binomial(n: int, k: int) -> List[int]:
    """Coefficients of the Gaussian binomial [n choose k]_q via the q-Pascal rule."""
    if k < 0 or k > n:
        return [0]
    rows: Dict[Tuple[int, int], List[int]] = {}

    def rec(a: int, b: int) -> List[int]:
        if b == 0 or b == a:
            return [1]
        if (a, b) not in rows:
            left = rec(a - 1, b - 1)
            right = [0] * b + rec(a - 1, b)
            size = max(len(left), len(right))
            rows[a, b] = [(left[i] if i < len(left) else 0) + (right[i] if i < len(right) else 0)
                          for i in range(size)]
        return rows[a, b]

    return list(rec(n, k))


def _at_t_squared(coeffs: Sequence[int]) -> List[int]:
    out = [0] * (2 * len(coeffs) - 1)
    for i, c in enumerate(coeffs):
        out[2 * i] = c
    return out


def _mul(a: Sequence[int], b: Sequence[int]) -> List[int]:
    return series_product(a, b, len(a) + len(b) - 2)


def poincare_grassmann(n: int, k: int) -> List[int]:
    return _at_t_squared(q_binomial(n, k))


def poincare_flag(nu: Sequence[int]) -> List[int]:
    """q-multinomial [n; n_1..n_r] at q = t^2."""
    out = [1]
    remaining = sum(nu)
    for part in nu:
        out = _mul(out, q_binomial(remaining, part))
        remaining -= part
    return _at_t_squared(out)


def poincare_projective(m: Height, D: Optional[int] = None) -> List[int]:
    """1 + t + .. + t^m; for m = None the series 1/(1-t) through t^D."""
    if m is None:
        if D is None:
            raise ValueError("RP^infinity needs a degree bound")
        return [1] * (D + 1)
    return [1] * (m + 1)


def poincare_sphere(n: int) -> List[int]:
    out = [0] * (n + 1)
    out[0] += 1
    out[n] += 1
    return out


def poincare_oracle(kind: str, **params) -> List[int]:
    """Poincare polynomial coefficients for ``grassmann(n,k)``, ``flag(nu)``,
    ``projective(m[, D])`` or ``sphere(n)``."""
    if kind == "grassmann":
        return poincare_grassmann(params["n"], params["k"])
    if kind == "flag":
        return poincare_flag(params["nu"])
    if kind == "projective":
        return poincare_projective(params["m"], params.get("D"))
    if kind == "sphere":
        return poincare_sphere(params["n"])
    raise ValueError(f"unknown Poincare oracle {kind!r}")


def tensor_dims(base: Sequence[int], fiber: Sequence[int], D: int) -> List[int]:
    """Degree-wise dimensions of base (x) fiber through D."""
    return series_product(list(base) + [0] * (D + 1), list(fiber) + [0] * (D + 1), D)
