"""Homology ranks, the three-variable Poincare polynomial, and reduction.

Ranks are computed class by class: the differential preserves the (q, u) pair,
so within one class rank H_i = dim C_i - rank d_i - rank d_{i-1}, all over Q.

``reduce_complex`` is an optional speedup: repeatedly cancel a +-1 entry of a
differential (the zigzag lemma), which removes its source and target
generators and corrects the neighbouring columns, preserving homology ranks
and all gradings.  Cancellation proceeds in monotone frontiers: every unit
entry present when a sweep starts is processed before entries the sweep
itself creates.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .algebra import LaurentPoly, rank_of_entries, substitute
from .cube import BigradedComplex, ClassComplex, TriGradedComplex
from .diagram import KnotoidPD, serialize_pd


@dataclass(frozen=True)
class HomologyTable:
    """Map (homological, quantum, winding) -> rank, plus diagram metadata."""

    ranks: dict[tuple[int, int, int], int]
    n_plus: int = 0
    n_minus: int = 0
    diagram_hash: str = ""

    def __post_init__(self):
        clean = {key: r for key, r in self.ranks.items() if r}
        for key, r in clean.items():
            if r < 0:
                raise ValueError(f"negative rank at {key}")
        object.__setattr__(self, "ranks", clean)

    def __eq__(self, other):
        if not isinstance(other, HomologyTable):
            return NotImplemented
        return self.ranks == other.ranks

    def __hash__(self):
        return hash(tuple(sorted(self.ranks.items())))

    def total_rank(self) -> int:
        return sum(self.ranks.values())

    def u_breadth(self) -> int:
        if not self.ranks:
            return 0
        ks = [k for (_, _, k) in self.ranks]
        return max(ks) - min(ks)

    def to_json_dict(self) -> dict:
        return {
            "ranks": [[i, j, k, r] for (i, j, k), r in sorted(self.ranks.items())],
            "n_plus": self.n_plus,
            "n_minus": self.n_minus,
            "diagram": self.diagram_hash,
        }


def diagram_hash(pd: KnotoidPD) -> str:
    return hashlib.sha256(serialize_pd(pd).encode()).hexdigest()[:16]


def _class_ranks(cls: ClassComplex) -> dict[int, int]:
    """rank H_i within one class."""
    d_rank: dict[int, int] = {}
    for i, matrix in cls.matrices.items():
        entries = [(row, col, v) for col, column in matrix.items()
                   for row, v in column.items() if v]
        nrows = cls.dim(i + 1)
        ncols = cls.dim(i)
        d_rank[i] = rank_of_entries(nrows, ncols, entries)
    out = {}
    for i in cls.generators:
        h = cls.dim(i) - d_rank.get(i, 0) - d_rank.get(i - 1, 0)
        if h:
            out[i] = h
    return out


def homology_ranks(cx: TriGradedComplex, pd: Optional[KnotoidPD] = None,
                   jobs: int = 1) -> HomologyTable:
    """Rank table of the winding homology of a built complex."""
    keys = sorted(cx.classes)
    if jobs > 1 and len(keys) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda k: _class_ranks(cx.classes[k]), keys))
    else:
        results = [_class_ranks(cx.classes[k]) for k in keys]
    ranks: dict[tuple[int, int, int], int] = {}
    for (q, u), per_i in zip(keys, results):
        for i, r in per_i.items():
            ranks[(i, q, u)] = r
    return HomologyTable(ranks, cx.n_plus, cx.n_minus,
                         diagram_hash(pd) if pd is not None else "")


def unreduced_ranks(cx: BigradedComplex) -> dict[tuple[int, int], int]:
    """Rank table (i, q) -> rank of an unreduced Khovanov complex."""
    ranks: dict[tuple[int, int], int] = {}
    for q in sorted(cx.classes):
        for i, r in _class_ranks(cx.classes[q]).items():
            ranks[(i, q)] = r
    return ranks


def poincare(table: HomologyTable) -> LaurentPoly:
    terms = {(i, j, k): r for (i, j, k), r in table.ranks.items()}
    return LaurentPoly(("t", "q", "u"), terms)


def unreduced_poincare(ranks: dict[tuple[int, int], int]) -> LaurentPoly:
    return LaurentPoly(("t", "q"), {(i, j): r for (i, j), r in ranks.items()})


def specialize(w: LaurentPoly) -> dict[str, LaurentPoly]:
    """All polynomial specializations of a winding Poincare polynomial.

    kh = w(u=1); turaev = w(t=-1); jones = kh(t=-1);
    jones_minus / jones_plus = turaev at u^2 = -q^-3 / -q^3.
    """
    kh = substitute(w, "u=1")
    turaev = substitute(w, "t=-1")
    return {
        "kh": kh,
        "turaev": turaev,
        "jones": substitute(kh, "t=-1"),
        "jones_minus": substitute(turaev, "u2=-q^-3"),
        "jones_plus": substitute(turaev, "u2=q^3"),
    }


# ----------------------------------------------------------------------
# cancellation reduction


@dataclass
class _MutableClass:
    # per degree: generator alive flags and column maps col -> {row: coeff};
    # rows index generators of degree i+1
    alive: dict[int, list[bool]]
    cols: dict[int, dict[int, dict[int, int]]]
    rows: dict[int, dict[int, set[int]]] = field(default_factory=dict)

    def build_row_index(self):
        self.rows = {}
        for i, matrix in self.cols.items():
            idx: dict[int, set[int]] = {}
            for col, column in matrix.items():
                for row in column:
                    idx.setdefault(row, set()).add(col)
            self.rows[i] = idx


def reduce_complex(cx: TriGradedComplex) -> TriGradedComplex:
    """Cancel unit differential entries until none remain.

    Output has the same homology ranks in every (q, u)-class and degree.
    """
    new_classes = {}
    for key in sorted(cx.classes):
        new_classes[key] = _reduce_class(cx.classes[key])
    return TriGradedComplex(cx.n_plus, cx.n_minus, new_classes,
                            dict(cx.state_mu), cx.num_crossings)


def _reduce_class(cls: ClassComplex) -> ClassComplex:
    state = _MutableClass(
        alive={i: [True] * len(gens) for i, gens in cls.generators.items()},
        cols={i: {col: dict(column) for col, column in matrix.items()}
              for i, matrix in cls.matrices.items()},
    )
    state.build_row_index()

    while True:
        frontier = []
        for i in sorted(state.cols):
            for col in sorted(state.cols[i]):
                for row, v in sorted(state.cols[i][col].items()):
                    if v == 1 or v == -1:
                        frontier.append((i, col, row))
        if not frontier:
            break
        for i, col, row in frontier:
            column = state.cols.get(i, {}).get(col)
            if column is None:
                continue
            v = column.get(row)
            if v not in (1, -1):
                continue
            if not (state.alive[i][col] and state.alive[i + 1][row]):
                continue
            _cancel(state, i, col, row, v)

    # compact the surviving generators
    generators: dict[int, list] = {}
    remap: dict[int, dict[int, int]] = {}
    for i, flags in state.alive.items():
        gens = []
        mp = {}
        for old, keep in enumerate(flags):
            if keep:
                mp[old] = len(gens)
                gens.append(cls.generators[i][old])
        if gens:
            generators[i] = gens
            remap[i] = mp
    matrices: dict[int, dict[int, dict[int, int]]] = {}
    for i, matrix in state.cols.items():
        for col, column in matrix.items():
            for row, v in column.items():
                if v:
                    matrices.setdefault(i, {}) \
                        .setdefault(remap[i][col], {})[remap[i + 1][row]] = v
    return ClassComplex(generators, matrices)


def _cancel(state: _MutableClass, i: int, x: int, y: int, eps: int) -> None:
    """Cancel the pair (x in degree i) -> (y in degree i+1) with entry eps."""
    matrix = state.cols[i]
    rows_i = state.rows[i]
    dx = dict(matrix[x])  # d(x), including y

    # columns a != x with a_y != 0: d'(a) = d(a) - (a_y/eps) d(x)
    for a in sorted(rows_i.get(y, set()) - {x}):
        column = matrix[a]
        a_y = column[y]
        factor = a_y * eps  # eps in {1,-1} so a_y/eps == a_y*eps
        for row, v in dx.items():
            cur = column.get(row, 0)
            new = cur - factor * v
            if new:
                column[row] = new
                rows_i.setdefault(row, set()).add(a)
            elif row in column:
                del column[row]
                rows_i[row].discard(a)

    # remove column x entirely
    for row in matrix.pop(x, {}):
        rows_i.get(row, set()).discard(x)
    # remove row y from degree-i matrix
    for a in list(rows_i.pop(y, set())):
        state.cols[i][a].pop(y, None)
    # remove x as a row of the degree-(i-1) matrix
    prev = state.cols.get(i - 1)
    if prev is not None:
        for a in list(state.rows.get(i - 1, {}).pop(x, set())):
            prev[a].pop(x, None)
    # remove y as a column of the degree-(i+1) matrix
    nxt = state.cols.get(i + 1)
    if nxt is not None:
        for row in nxt.pop(y, {}):
            state.rows.get(i + 1, {}).get(row, set()).discard(y)

    state.alive[i][x] = False
    state.alive[i + 1][y] = False