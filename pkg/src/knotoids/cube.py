"""The triply-graded cube of resolutions and its differentials.

Every state of an n-crossing diagram spans a summand with one label in
{1, X} per resolved circle; the open segment implicitly carries X.  Gradings
of a generator over state s with c circles labelled so that ``ones`` of them
carry 1:

- homological:  i = ||s|| - n_minus
- quantum:      q = deg + i + n_plus - n_minus + 1,  deg = ones - (c - ones) - 1
- winding:      u = mu(s)  (state-level, even)

Differentials are the Frobenius merge/split maps wired on cube edges with the
sign (-1)^(number of 1-smoothings before the changed crossing):

- merge of two circles:      1*1 -> 1, 1*X = X*1 -> X, X*X -> 0
- circle into the segment:   1 -> id, X -> 0
- circle split:              1 -> 1(x)X + X(x)1, X -> X(x)X
- split off the segment:     new circle labelled X, segment unchanged
- segment self-reconnection: the zero map (anticurl)

Every nonzero entry is checked to raise i by exactly 1 and preserve (q, u);
matrices are stored per (q, u)-class, so ranks decompose exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .diagram import KnotoidPD, ValidationError
from .resolution import (Resolution, ShortcutTrace, mu_combinatorial,
                         mu_from_shortcut, resolve)

X, ONE = 0, 1

# generator key: (state bitmask, circle-label bitmask); bit j of the label
# mask is the label of circle j in the canonical circle order of the state
GenKey = tuple[int, int]


@dataclass
class ClassComplex:
    """Chain data of one (q, u)-class: generators and differentials by degree."""

    generators: dict[int, list[GenKey]] = field(default_factory=dict)
    # matrices[i]: column (index into generators[i]) -> {row index in i+1: coeff}
    matrices: dict[int, dict[int, dict[int, int]]] = field(default_factory=dict)

    def dim(self, i: int) -> int:
        return len(self.generators.get(i, ()))

    def entries(self, i: int):
        for col, column in self.matrices.get(i, {}).items():
            for row, value in column.items():
                yield row, col, value


@dataclass
class TriGradedComplex:
    """All (q, u)-classes of the cube of one diagram."""

    n_plus: int
    n_minus: int
    classes: dict[tuple[int, int], ClassComplex]
    state_mu: dict[int, int]
    num_crossings: int

    def total_generators(self) -> int:
        return sum(cls.dim(i) for cls in self.classes.values()
                   for i in cls.generators)


def _grading(state_ones: int, circles: int, ones: int,
             n_plus: int, n_minus: int) -> tuple[int, int]:
    i = state_ones - n_minus
    deg = ones - (circles - ones) - 1
    return i, deg + i + n_plus - n_minus + 1


def state_mu_table(pd: KnotoidPD, resolutions: list[Resolution],
                   mu_source: Union[str, ShortcutTrace]) -> dict[int, int]:
    """mu per state mask, from the shortcut-free formula or an explicit trace."""
    if isinstance(mu_source, ShortcutTrace):
        return {mask: mu_from_shortcut(pd, mu_source, res.state, res)
                for mask, res in enumerate(resolutions)}
    if mu_source == "combinatorial":
        if pd.closed_components:
            raise ValidationError(
                "multi-knotoid diagram: supply a shortcut trace for the "
                "winding grading")
        return {mask: mu_combinatorial(pd, res.state, res)
                for mask, res in enumerate(resolutions)}
    raise ValidationError(f"unknown mu source {mu_source!r}")


def build_complex(pd: KnotoidPD,
                  mu_source: Union[str, ShortcutTrace] = "combinatorial"
                  ) -> TriGradedComplex:
    """Assemble the full triply-graded complex of an open diagram."""
    if pd.is_closed_diagram:
        raise ValidationError("open component required; "
                              "closed diagrams use build_unreduced_complex")
    n = pd.n
    n_plus, n_minus = pd.positive_negative()
    resolutions = [resolve(pd, _mask_to_state(mask, n))
                   for mask in range(1 << n)]
    mu = state_mu_table(pd, resolutions, mu_source)

    circle_sets: list[list[frozenset[int]]] = []
    edge_comp: list[dict[int, int]] = []     # edge -> circle index, -1 = segment
    for res in resolutions:
        sets = [frozenset(e for e, _ in arcs) for arcs in res.circle_arcs]
        circle_sets.append(sets)
        carrier = {e: -1 for e, _ in res.segment_arcs}
        for idx, s in enumerate(sets):
            for e in s:
                carrier[e] = idx
        edge_comp.append(carrier)

    classes: dict[tuple[int, int], ClassComplex] = {}
    index: dict[GenKey, tuple[tuple[int, int], int, int]] = {}

    for mask in range(1 << n):
        circles = len(circle_sets[mask])
        state_ones = bin(mask).count("1")
        for labels in range(1 << circles):
            ones = bin(labels).count("1")
            i, q = _grading(state_ones, circles, ones, n_plus, n_minus)
            key = (mask, labels)
            cls = classes.setdefault((q, mu[mask]), ClassComplex())
            gens = cls.generators.setdefault(i, [])
            index[key] = ((q, mu[mask]), i, len(gens))
            gens.append(key)

    for mask in range(1 << n):
        sign_count = 0
        for j in range(n):
            bit = 1 << j
            if mask & bit:
                sign_count += 1
                continue
            mask2 = mask | bit
            sign = -1 if sign_count % 2 else 1
            _add_edge_maps(pd, j, mask, mask2, sign, resolutions,
                           circle_sets, edge_comp, classes, index)

    return TriGradedComplex(n_plus, n_minus, classes, mu, n)


def _mask_to_state(mask: int, n: int) -> tuple[int, ...]:
    return tuple((mask >> i) & 1 for i in range(n))


def _circle_transfer(circle_sets, edge_comp, mask, mask2,
                     skip: set[int]) -> dict[int, int]:
    """Index map for circles untouched by the smoothing change."""
    transfer = {}
    for idx, s in enumerate(circle_sets[mask]):
        if idx in skip:
            continue
        target = edge_comp[mask2][next(iter(s))]
        transfer[idx] = target
    return transfer


def _add_edge_maps(pd, j, mask, mask2, sign, resolutions,
                   circle_sets, edge_comp, classes, index) -> None:
    rec = pd.crossings[j]
    carriers = sorted({edge_comp[mask][e] for e in rec})
    carriers2 = sorted({edge_comp[mask2][e] for e in rec})
    circles = len(circle_sets[mask])

    def emit(labels: int, labels2: int) -> None:
        key, key2 = (mask, labels), (mask2, labels2)
        cls_id, i, col = index[key]
        cls_id2, i2, row = index[key2]
        if cls_id2 != cls_id or i2 != i + 1:
            raise ValidationError(
                f"edge map at crossing {j} violates grading: "
                f"{cls_id},{i} -> {cls_id2},{i2}")
        column = classes[cls_id].matrices.setdefault(i, {}).setdefault(col, {})
        column[row] = column.get(row, 0) + sign

    if len(carriers) == 2 and len(carriers2) == 1:
        if -1 in carriers:                      # m2: circle joins the segment
            c = carriers[0] if carriers[1] == -1 else carriers[1]
            transfer = _circle_transfer(circle_sets, edge_comp, mask, mask2, {c})
            for labels in range(1 << circles):
                if (labels >> c) & 1 == ONE:
                    emit(labels, _apply_transfer(labels, transfer))
        else:                                   # m1: two circles merge
            c1, c2 = carriers
            merged = edge_comp[mask2][next(iter(circle_sets[mask][c1]))]
            transfer = _circle_transfer(circle_sets, edge_comp, mask, mask2,
                                        {c1, c2})
            for labels in range(1 << circles):
                l1, l2 = (labels >> c1) & 1, (labels >> c2) & 1
                if l1 == X and l2 == X:
                    continue
                out = _apply_transfer(labels, transfer)
                if l1 == X or l2 == X:
                    pass                        # merged circle keeps X (bit 0)
                else:
                    out |= 1 << merged
                emit(labels, out)
    elif len(carriers) == 1 and len(carriers2) == 2:
        if carriers[0] == -1:                   # Delta2: segment sheds a circle
            new = carriers2[0] if carriers2[1] == -1 else carriers2[1]
            transfer = _circle_transfer(circle_sets, edge_comp, mask, mask2,
                                        set())
            for labels in range(1 << circles):
                out = _apply_transfer(labels, transfer)   # new circle gets X
                emit(labels, out)
        else:                                   # Delta1: circle splits in two
            c = carriers[0]
            k1, k2 = carriers2
            transfer = _circle_transfer(circle_sets, edge_comp, mask, mask2, {c})
            for labels in range(1 << circles):
                out = _apply_transfer(labels, transfer)
                if (labels >> c) & 1 == ONE:
                    emit(labels, out | (1 << k1))
                    emit(labels, out | (1 << k2))
                else:
                    emit(labels, out)           # X -> X (x) X
    elif carriers == [-1] and carriers2 == [-1]:
        return                                  # anticurl: zero map
    else:
        raise ValidationError(
            f"crossing {j}: smoothing change is not a planar cobordism "
            f"({carriers} -> {carriers2}); diagram is not realizable in S^2")


def _apply_transfer(labels: int, transfer: dict[int, int]) -> int:
    out = 0
    for src, dst in transfer.items():
        if (labels >> src) & 1:
            out |= 1 << dst
    return out


def verify_d_squared(cx: TriGradedComplex):
    """None when d.d = 0 in every class; else the first violating datum."""
    for cls_id in sorted(cx.classes):
        cls = cx.classes[cls_id]
        for i in sorted(cls.matrices):
            first = cls.matrices[i]
            second = cls.matrices.get(i + 1)
            if not second:
                continue
            for col, column in sorted(first.items()):
                acc: dict[int, int] = {}
                for mid, v1 in column.items():
                    for row, v2 in second.get(mid, {}).items():
                        acc[row] = acc.get(row, 0) + v1 * v2
                for row, value in acc.items():
                    if value:
                        return {
                            "class": cls_id,
                            "degree": i,
                            "source": cls.generators[i][col],
                            "target": cls.generators[i + 2][row],
                            "value": value,
                        }
    return None


# ----------------------------------------------------------------------
# unreduced Khovanov cube of a closed diagram (no winding grading)


@dataclass
class BigradedComplex:
    """Unreduced Khovanov complex: classes keyed by the q-grading only."""

    n_plus: int
    n_minus: int
    classes: dict[int, ClassComplex]


def build_unreduced_complex(closed_pd: KnotoidPD) -> BigradedComplex:
    """Standard Khovanov cube of a diagram with only closed components.

    Every circle carries the full two-dimensional algebra; the q-grading is
    deg + i + n_plus - n_minus (no +1, no marked component).
    """
    if closed_pd.open_component:
        raise ValidationError("unreduced complex needs a closed diagram")
    from .resolution import resolve_closed

    n = closed_pd.n
    n_plus, n_minus = closed_pd.positive_negative()
    resolutions = [resolve_closed(closed_pd, _mask_to_state(mask, n))
                   for mask in range(1 << n)]
    circle_sets = [[frozenset(e for e, _ in arcs) for arcs in circles]
                   for circles in resolutions]
    edge_comp = []
    for sets in circle_sets:
        carrier: dict[int, int] = {}
        for idx, s in enumerate(sets):
            for e in s:
                carrier[e] = idx
        edge_comp.append(carrier)

    classes: dict[int, ClassComplex] = {}
    index: dict[GenKey, tuple[int, int, int]] = {}
    for mask in range(1 << n):
        circles = len(circle_sets[mask])
        state_ones = bin(mask).count("1")
        i = state_ones - n_minus
        for labels in range(1 << circles):
            ones = bin(labels).count("1")
            q = (ones - (circles - ones)) + i + n_plus - n_minus
            key = (mask, labels)
            cls = classes.setdefault(q, ClassComplex())
            gens = cls.generators.setdefault(i, [])
            index[key] = (q, i, len(gens))
            gens.append(key)

    for mask in range(1 << n):
        sign_count = 0
        for j in range(n):
            bit = 1 << j
            if mask & bit:
                sign_count += 1
                continue
            mask2 = mask | bit
            sign = -1 if sign_count % 2 else 1
            rec = closed_pd.crossings[j]
            carriers = sorted({edge_comp[mask][e] for e in rec})
            carriers2 = sorted({edge_comp[mask2][e] for e in rec})
            circles = len(circle_sets[mask])

            def emit(labels, labels2):
                q, i, col = index[(mask, labels)]
                q2, i2, row = index[(mask2, labels2)]
                if q2 != q or i2 != i + 1:
                    raise ValidationError(
                        f"unreduced edge map at crossing {j} violates grading")
                column = classes[q].matrices.setdefault(i, {}).setdefault(col, {})
                column[row] = column.get(row, 0) + sign

            if len(carriers) == 2 and len(carriers2) == 1:
                c1, c2 = carriers
                merged = edge_comp[mask2][next(iter(circle_sets[mask][c1]))]
                transfer = _circle_transfer(circle_sets, edge_comp, mask,
                                            mask2, {c1, c2})
                for labels in range(1 << circles):
                    l1, l2 = (labels >> c1) & 1, (labels >> c2) & 1
                    if l1 == X and l2 == X:
                        continue
                    out = _apply_transfer(labels, transfer)
                    if l1 == ONE and l2 == ONE:
                        out |= 1 << merged
                    emit(labels, out)
            elif len(carriers) == 1 and len(carriers2) == 2:
                c = carriers[0]
                k1, k2 = carriers2
                transfer = _circle_transfer(circle_sets, edge_comp, mask,
                                            mask2, {c})
                for labels in range(1 << circles):
                    out = _apply_transfer(labels, transfer)
                    if (labels >> c) & 1 == ONE:
                        emit(labels, out | (1 << k1))
                        emit(labels, out | (1 << k2))
                    else:
                        emit(labels, out)
            else:
                raise ValidationError(
                    f"crossing {j}: closed-diagram smoothing change is not a "
                    f"merge or split; diagram is not realizable in S^2")

    return BigradedComplex(n_plus, n_minus, classes)
