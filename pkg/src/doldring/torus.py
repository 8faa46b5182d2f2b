"""R(Q, Lambda): mod-2 cohomology of P(S^m, X) for a torus manifold X.

The orbit polytope is given combinatorially by its vertex-facet incidence;
``lam`` holds the characteristic vectors as columns.  The ring is
A[x~_1..x~_m] modulo the mod-2 linear forms from the rows of ``lam`` and the
square-free monomials over the minimal non-faces.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from math import comb, gcd
from pathlib import Path
from typing import FrozenSet, List, Optional, Sequence, Tuple

from .gf2 import Poly, VariableTable
from .groebner import PresentedAlgebra

Height = Optional[int]


class PairError(ValueError):
    """Malformed characteristic pair input."""


@dataclass(frozen=True)
class CharacteristicPair:
    n: int
    facets: Tuple[str, ...]
    vertices: Tuple[FrozenSet[int], ...]
    lam: Tuple[Tuple[int, ...], ...]
    source: str = field(default="", compare=False)

    def __post_init__(self):
        n, mfac = self.n, len(self.facets)
        if n < 1:
            raise PairError(f"torus dimension must be positive, got {n}")
        if len(self.lam) != n or any(len(row) != mfac for row in self.lam):
            raise PairError(f"lambda must be {n} x {mfac}, got "
                            f"{len(self.lam)} x {[len(r) for r in self.lam]}")
        for idx, v in enumerate(self.vertices):
            if len(v) != n:
                raise PairError(f"vertex {idx} meets {len(v)} facets, expected {n}")
            if any(not 0 <= j < mfac for j in v):
                raise PairError(f"vertex {idx} refers to a facet outside 0..{mfac - 1}")
        if len(set(self.vertices)) != len(self.vertices):
            raise PairError("repeated vertex")
        covered = set().union(*self.vertices) if self.vertices else set()
        missing = [self.facets[j] for j in range(mfac) if j not in covered]
        if missing:
            raise PairError(f"facets {missing} contain no vertex")
        for j in range(mfac):
            col = [row[j] for row in self.lam]
            g = 0
            for c in col:
                g = gcd(g, c)
            if g != 1:
                raise PairError(f"lambda column {j} ({self.facets[j]}) = {col} is not primitive")

    @property
    def num_facets(self) -> int:
        return len(self.facets)

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(row[j] for row in self.lam)

    def is_face(self, subset) -> bool:
        s = frozenset(subset)
        return any(s <= v for v in self.vertices)

    def vertex_names(self, v: FrozenSet[int]) -> List[str]:
        return [self.facets[j] for j in sorted(v)]

    @classmethod
    def from_json(cls, doc: dict, source: str = "") -> "CharacteristicPair":
        try:
            n = int(doc["n"])
            facets = tuple(str(f) for f in doc["facets"])
            vertices = tuple(frozenset(int(j) for j in v) for v in doc["vertices"])
            lam = tuple(tuple(int(x) for x in row) for row in doc["lambda"])
        except KeyError as exc:
            raise PairError(f"{source or 'pair'}: missing field {exc.args[0]!r}") from None
        except (TypeError, ValueError) as exc:
            raise PairError(f"{source or 'pair'}: {exc}") from None
        return cls(n, facets, vertices, lam, source)

    @classmethod
    def load(cls, path) -> "CharacteristicPair":
        path = Path(path)
        with open(path) as fh:
            return cls.from_json(json.load(fh), source=path.name)

    def to_json(self) -> dict:
        return {"n": self.n, "facets": list(self.facets),
                "vertices": [sorted(v) for v in self.vertices],
                "lambda": [list(r) for r in self.lam]}


def int_det(rows: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant (Bareiss fraction-free elimination)."""
    a = [list(r) for r in rows]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1] if n else 1


@dataclass(frozen=True)
class Violation:
    vertex: Tuple[int, ...]
    facets: Tuple[str, ...]
    det: int

    def to_json(self) -> dict:
        return {"vertex": list(self.vertex), "facets": list(self.facets), "det": self.det}


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: Tuple[Violation, ...]


def validate_pair(pair: CharacteristicPair) -> ValidationReport:
    """Every vertex's characteristic vectors must form a Z-basis (det = +-1)."""
    bad = []
    for v in sorted(pair.vertices, key=sorted):
        cols = sorted(v)
        mat = [[pair.lam[i][j] for j in cols] for i in range(pair.n)]
        d = int_det(mat)
        if abs(d) != 1:
            bad.append(Violation(tuple(cols), tuple(pair.facets[j] for j in cols), d))
    return ValidationReport(not bad, tuple(bad))


def minimal_nonfaces(pair: CharacteristicPair) -> List[Tuple[int, ...]]:
    """Inclusion-minimal facet sets with empty intersection, sorted by size then index."""
    out = []
    for size in range(1, pair.n + 2):
        for subset in itertools.combinations(range(pair.num_facets), size):
            if pair.is_face(subset):
                continue
            if all(pair.is_face(sub) for sub in itertools.combinations(subset, size - 1)):
                out.append(subset)
    return out


def face_counts(pair: CharacteristicPair) -> List[int]:
    """f[k] = number of k-element facet sets with non-empty intersection (f[0] = 1)."""
    faces = set()
    for v in pair.vertices:
        for size in range(pair.n + 1):
            faces.update(itertools.combinations(sorted(v), size))
    f = [0] * (pair.n + 1)
    for s in faces:
        f[len(s)] += 1
    return f


def h_vector(pair: CharacteristicPair) -> List[int]:
    """h_0..h_n from sum_i h_i t^(n-i) = sum_k f[k] (t-1)^(n-k)."""
    n = pair.n
    f = face_counts(pair)
    h = [0] * (n + 1)  # h[i] multiplies t^(n-i)
    for k in range(n + 1):
        # (t-1)^(n-k) = sum_a C(n-k, a) t^a (-1)^(n-k-a)
        e = n - k
        for a_ in range(e + 1):
            coeff = comb(e, a_) * (-1) ** (e - a_)
            h[n - a_] += f[k] * coeff
    return h


def fiber_poincare(pair: CharacteristicPair) -> List[int]:
    """Mod-2 Poincare polynomial of X(Q, Lambda): h_i in degree 2i."""
    out = [0] * (2 * pair.n + 1)
    for i, hi in enumerate(h_vector(pair)):
        out[2 * i] = hi
    return out


def torus_table(pair: CharacteristicPair) -> VariableTable:
    pairs = [(f"x{j}", 2) for j in range(1, pair.num_facets + 1)] + [("y", 1)]
    return VariableTable.from_pairs(pairs, y="w1(xi)", x="x~_j = w2 of the conjugate line bundle of facet j")


def linear_relations(pair: CharacteristicPair, table: VariableTable) -> List[Poly]:
    rels = []
    for row in pair.lam:
        acc = table.zero()
        for j, c in enumerate(row):
            if c % 2:
                acc = acc + table.var(f"x{j + 1}")
        if acc:
            rels.append(acc)
    return rels


def stanley_reisner_relations(pair: CharacteristicPair, table: VariableTable) -> List[Poly]:
    rels = []
    for s in minimal_nonfaces(pair):
        mono = table.one()
        for j in s:
            mono = mono * table.var(f"x{j + 1}")
        rels.append(mono)
    return rels


class UnvalidatedPairError(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        worst = report.violations[0]
        super().__init__(f"characteristic map not unimodular at vertex {list(worst.facets)} "
                         f"(det {worst.det})")


def build_torus_presentation(pair: CharacteristicPair, m: Height) -> PresentedAlgebra:
    """R(Q, Lambda) over H*(RP^m); ``m=None`` gives the equivariant ring over Z2[y]."""
    report = validate_pair(pair)
    if not report.ok:
        raise UnvalidatedPairError(report)
    if m is not None and (not isinstance(m, int) or m < 0):
        raise ValueError(f"base height must be a non-negative integer or None, got {m!r}")
    table = torus_table(pair)
    rels = linear_relations(pair, table) + stanley_reisner_relations(pair, table)
    tag = (f"torus {pair.source or 'pair'} n={pair.n} facets={pair.num_facets} "
           f"m={'inf' if m is None else m}; assumes H^2(Q;Z)=0")
    return PresentedAlgebra(table, tuple(rels), "y", m, tag)


def fiber_algebra(pair: CharacteristicPair) -> PresentedAlgebra:
    """H*(X; Z2) alone: the y-free quotient Z2[x~] / (linear, Stanley-Reisner)."""
    table = VariableTable.from_pairs((f"x{j}", 2) for j in range(1, pair.num_facets + 1))
    rels = linear_relations(pair, table) + stanley_reisner_relations(pair, table)
    return PresentedAlgebra(table, tuple(rels), None, None, "torus fiber")
