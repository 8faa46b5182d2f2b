"""Cellular chain complexes over GF(2), products and free involution quotients.

Boundary matrices are stored column-wise as Python ints: bit i of column j is
the coefficient of (d-1)-cell i in the boundary of d-cell j.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

FREE = "free"
FIXED = "fixed"


class ChainComplexError(ValueError):
    pass


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def gf2_rank(columns: Sequence[int]) -> int:
    """Rank of a GF(2) matrix given as bit-packed vectors (XOR basis by leading bit)."""
    basis: Dict[int, int] = {}
    for v in columns:
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                basis[top] = v
                break
            v ^= basis[top]
    return len(basis)


@dataclass(frozen=True)
class Z2ChainComplex:
    cells: Tuple[Tuple[str, ...], ...]
    boundary: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        cells = tuple(tuple(c) for c in self.cells)
        object.__setattr__(self, "cells", cells)
        bd = tuple(tuple(col) for col in self.boundary)
        object.__setattr__(self, "boundary", bd)
        if len(bd) != len(cells):
            raise ChainComplexError("one boundary list per dimension is required")
        names = [n for dim in cells for n in dim]
        if len(set(names)) != len(names):
            raise ChainComplexError("cell names must be unique")
        for d, cols in enumerate(bd):
            if len(cols) != len(cells[d]):
                raise ChainComplexError(f"dimension {d}: {len(cols)} boundary columns for {len(cells[d])} cells")
            below = len(cells[d - 1]) if d > 0 else 0
            for j, col in enumerate(cols):
                if col < 0 or col >> below:
                    raise ChainComplexError(f"boundary of {cells[d][j]} refers to missing cells")
        for d in range(2, len(cells)):
            for j, col in enumerate(bd[d]):
                if self._apply(d - 1, col):
                    raise ChainComplexError(f"boundary of boundary of {cells[d][j]} is non-zero")

    def _apply(self, d: int, chain: int) -> int:
        """Boundary of a d-chain given as a bit mask."""
        out = 0
        for i in _bits(chain):
            out ^= self.boundary[d][i]
        return out

    @property
    def dim(self) -> int:
        return len(self.cells) - 1

    def counts(self) -> List[int]:
        return [len(c) for c in self.cells]

    def boundary_of(self, d: int, name: str) -> List[str]:
        j = self.cells[d].index(name)
        return [self.cells[d - 1][i] for i in _bits(self.boundary[d][j])]

    def matrix(self, d: int) -> List[List[int]]:
        """Dense boundary matrix of dimension d (rows: (d-1)-cells, columns: d-cells)."""
        rows = len(self.cells[d - 1]) if d > 0 else 0
        return [[(col >> i) & 1 for col in self.boundary[d]] for i in range(rows)]

    @classmethod
    def from_matrices(cls, cells: Sequence[Sequence[str]],
                      matrices: Dict[int, Sequence[Sequence[int]]]) -> "Z2ChainComplex":
        bd = []
        for d, names in enumerate(cells):
            mat = matrices.get(d)
            if mat is None or d == 0:
                bd.append((0,) * len(names))
                continue
            if len(mat) != len(cells[d - 1]):
                raise ChainComplexError(f"boundary matrix {d} needs {len(cells[d - 1])} rows")
            cols = []
            for j in range(len(names)):
                mask = 0
                for i, row in enumerate(mat):
                    if len(row) != len(names):
                        raise ChainComplexError(f"boundary matrix {d} needs {len(names)} columns")
                    if row[j] % 2:
                        mask |= 1 << i
                cols.append(mask)
            bd.append(tuple(cols))
        return cls(tuple(tuple(c) for c in cells), tuple(bd))


@dataclass(frozen=True)
class EquivariantCW:
    complex: Z2ChainComplex
    involution: Tuple[Tuple[int, ...], ...]
    mode: str

    def __post_init__(self):
        inv = tuple(tuple(p) for p in self.involution)
        object.__setattr__(self, "involution", inv)
        cx = self.complex
        if self.mode not in (FREE, FIXED):
            raise ChainComplexError(f"unknown mode {self.mode!r}")
        if len(inv) != len(cx.cells):
            raise ChainComplexError("one involution permutation per dimension is required")
        for d, perm in enumerate(inv):
            n = len(cx.cells[d])
            if sorted(perm) != list(range(n)):
                raise ChainComplexError(f"dimension {d}: involution is not a permutation")
            if any(perm[perm[i]] != i for i in range(n)):
                raise ChainComplexError(f"dimension {d}: involution does not square to the identity")
            fixed = [cx.cells[d][i] for i in range(n) if perm[i] == i]
            if self.mode == FREE and fixed:
                raise ChainComplexError(f"free involution fixes cell {fixed[0]}")
            if self.mode == FIXED and len(fixed) != n:
                moved = next(cx.cells[d][i] for i in range(n) if perm[i] != i)
                raise ChainComplexError(f"cellwise-fixed involution moves cell {moved}")
        for d in range(1, len(inv)):
            for j, col in enumerate(cx.boundary[d]):
                image = 0
                for i in _bits(col):
                    image |= 1 << inv[d - 1][i]
                if image != cx.boundary[d][inv[d][j]]:
                    raise ChainComplexError(f"involution does not commute with the boundary at {cx.cells[d][j]}")

    @classmethod
    def fixed(cls, cx: Z2ChainComplex) -> "EquivariantCW":
        return cls(cx, tuple(tuple(range(len(c))) for c in cx.cells), FIXED)

    def to_json(self) -> dict:
        cx = self.complex
        return {
            "cells": {str(d): list(names) for d, names in enumerate(cx.cells)},
            "boundary": {str(d): cx.matrix(d) for d in range(1, len(cx.cells))},
            "involution": {str(d): list(p) for d, p in enumerate(self.involution)},
            "mode": self.mode,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "EquivariantCW":
        try:
            cells_doc = doc["cells"]
            top = max(int(d) for d in cells_doc)
            cells = [list(cells_doc.get(str(d), [])) for d in range(top + 1)]
            mats = {int(d): m for d, m in doc.get("boundary", {}).items()}
            cx = Z2ChainComplex.from_matrices(cells, mats)
            mode = doc.get("mode", FIXED)
            inv_doc = doc.get("involution")
            if inv_doc is None:
                if mode != FIXED:
                    raise ChainComplexError("a free complex needs an involution")
                inv = [list(range(len(c))) for c in cells]
            else:
                inv = [list(inv_doc.get(str(d), range(len(cells[d])))) for d in range(top + 1)]
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ChainComplexError):
                raise
            raise ChainComplexError(f"malformed CW document: {exc}") from None
        return cls(cx, tuple(tuple(p) for p in inv), mode)

    @classmethod
    def load(cls, path) -> "EquivariantCW":
        with open(Path(path)) as fh:
            return cls.from_json(json.load(fh))


def product_complex(s: EquivariantCW, x: EquivariantCW) -> EquivariantCW:
    """S x X with boundary d(e x c) = de x c + e x dc and involution alpha x id."""
    if s.mode != FREE:
        raise ChainComplexError("the S factor must carry a free involution")
    if x.mode != FIXED:
        raise ChainComplexError("the X factor must be fixed cellwise")
    S, X = s.complex, x.complex
    top = S.dim + X.dim
    index: Dict[Tuple[int, int, int, int], Tuple[int, int]] = {}
    cells: List[List[str]] = [[] for _ in range(top + 1)]
    for r in range(top + 1):
        for p in range(max(0, r - X.dim), min(S.dim, r) + 1):
            q = r - p
            for i, e in enumerate(S.cells[p]):
                for j, c in enumerate(X.cells[q]):
                    index[p, i, q, j] = (r, len(cells[r]))
                    cells[r].append(f"{e}*{c}")
    boundary: List[List[int]] = [[0] * len(cells[r]) for r in range(top + 1)]
    involution: List[List[int]] = [list(range(len(cells[r]))) for r in range(top + 1)]
    for (p, i, q, j), (r, k) in index.items():
        mask = 0
        if p > 0:
            for a in _bits(S.boundary[p][i]):
                mask ^= 1 << index[p - 1, a, q, j][1]
        if q > 0:
            for b in _bits(X.boundary[q][j]):
                mask ^= 1 << index[p, i, q - 1, b][1]
        boundary[r][k] = mask
        involution[r][k] = index[p, s.involution[p][i], q, j][1]
    cx = Z2ChainComplex(tuple(tuple(c) for c in cells), tuple(tuple(b) for b in boundary))
    return EquivariantCW(cx, tuple(tuple(p) for p in involution), FREE)


def involution_quotient(c: EquivariantCW) -> Z2ChainComplex:
    """One cell per orbit, named by the smaller member; boundaries projected mod 2."""
    if c.mode != FREE:
        raise ChainComplexError("quotient needs a free involution")
    cx = c.complex
    cells: List[List[str]] = []
    orbit_of: List[Dict[int, int]] = []
    for d, names in enumerate(cx.cells):
        reps = sorted({min(i, c.involution[d][i], key=lambda k: names[k]) for i in range(len(names))},
                      key=lambda k: names[k])
        pos = {rep: n for n, rep in enumerate(reps)}
        orbit_of.append({i: pos[min(i, c.involution[d][i], key=lambda k: names[k])] for i in range(len(names))})
        cells.append([names[r] for r in reps])
    boundary = []
    for d, names in enumerate(cx.cells):
        reps = [cx.cells[d].index(n) for n in cells[d]]
        cols = []
        for rep in reps:
            mask = 0
            if d > 0:
                for i in _bits(cx.boundary[d][rep]):
                    mask ^= 1 << orbit_of[d - 1][i]
            cols.append(mask)
        boundary.append(tuple(cols))
    return Z2ChainComplex(tuple(tuple(n) for n in cells), tuple(boundary))


@dataclass(frozen=True)
class PerfectnessResult:
    perfect: bool
    dimension: Optional[int] = None
    cell: Optional[str] = None


def perfectness_check(c: Z2ChainComplex) -> PerfectnessResult:
    for d, cols in enumerate(c.boundary):
        for j, col in enumerate(cols):
            if col:
                return PerfectnessResult(False, d, c.cells[d][j])
    return PerfectnessResult(True)


def betti_numbers(c: Z2ChainComplex) -> List[int]:
    """dim ker d_k - rank d_(k+1) over GF(2), for k = 0..dim."""
    ranks = [gf2_rank(cols) for cols in c.boundary] + [0]
    return [len(c.cells[k]) - ranks[k] - ranks[k + 1] for k in range(len(c.cells))]


def euler_characteristic(values: Sequence[int]) -> int:
    return sum((-1) ** k * v for k, v in enumerate(values))


# standard complexes

def antipodal_sphere(m: int) -> EquivariantCW:
    """S^m with cells e_i^+, e_i^- swapped by the antipodal map."""
    if m < 0:
        raise ValueError("negative sphere dimension")
    cells = [(f"e{i}+", f"e{i}-") for i in range(m + 1)]
    bd = [(0, 0)] + [(0b11, 0b11)] * m
    cx = Z2ChainComplex(tuple(cells), tuple(bd))
    return EquivariantCW(cx, tuple((1, 0) for _ in range(m + 1)), FREE)


def real_projective_space(m: int) -> Z2ChainComplex:
    return involution_quotient(antipodal_sphere(m))


def even_cell_complex(counts: Sequence[int], prefix: str = "d") -> Z2ChainComplex:
    """counts[i] cells in dimension 2i, zero boundary (CP^n, Schubert complexes, ...)."""
    cells: List[Tuple[str, ...]] = []
    for dim in range(2 * (len(counts) - 1) + 1):
        if dim % 2:
            cells.append(())
        else:
            k = counts[dim // 2]
            cells.append(tuple(f"{prefix}{dim}" if k == 1 else f"{prefix}{dim}_{j}" for j in range(k)))
    while len(cells) > 1 and not cells[-1]:
        cells.pop()
    return Z2ChainComplex(tuple(cells), tuple((0,) * len(c) for c in cells))


def two_cell_sphere(n: int) -> EquivariantCW:
    """S^n = d0 u dn, each cell stabilised by the reflection."""
    if n < 1:
        raise ValueError("sphere dimension must be positive")
    cells = [("d0",)] + [()] * (n - 1) + [(f"d{n}",)]
    cx = Z2ChainComplex(tuple(cells), tuple((0,) * len(c) for c in cells))
    return EquivariantCW.fixed(cx)


def complex_projective_space(n: int) -> EquivariantCW:
    return EquivariantCW.fixed(even_cell_complex([1] * (n + 1)))


def grassmann_schubert_counts(n: int, k: int) -> List[int]:
    """Cells of G(n,k) by complex dimension: partitions fitting in a k x (n-k) box."""
    counts = [0] * (k * (n - k) + 1)
    for lam in itertools.combinations_with_replacement(range(n - k + 1), k):
        counts[sum(lam)] += 1
    return counts


def flag_schubert_counts(nu: Sequence[int]) -> List[int]:
    """Cells of F_nu by complex dimension: inversions of words with content nu."""
    word = [j for j, nj in enumerate(nu) for _ in range(nj)]
    top = sum(a * b for a, b in itertools.combinations(nu, 2))
    counts = [0] * (top + 1)
    for w in set(itertools.permutations(word)):
        inv = sum(1 for i, j in itertools.combinations(range(len(w)), 2) if w[i] > w[j])
        counts[inv] += 1
    return counts


def dold_complex(m: int, fiber: EquivariantCW) -> Z2ChainComplex:
    """Cellular chain complex of P(S^m, X) from the antipodal sphere and a fixed fibre."""
    return involution_quotient(product_complex(antipodal_sphere(m), fiber))
