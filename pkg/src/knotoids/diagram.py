"""Knotoid diagram data model, parsing, validation, and diagram operations.

A diagram is combinatorial: an ordered list of crossings plus edge-label
sequences for the open component and any closed components.  Conventions
(documented for users converting from other tables):

- Each crossing record lists the four incident edge labels counterclockwise
  starting at the incoming under-edge: ``(a, b, c, d)`` with the under-strand
  running a -> c.
- Edge labels strictly increase along the orientation of each component; a
  closed component's sequence starts at its minimum label.  The leg edge is
  the first entry of the open sequence, the head edge the last.
- Crossing sign is +1 iff the over-strand enters at slot d (crosses the
  under-strand left to right, seen along the under orientation), -1 iff it
  enters at slot b.
- The 0-smoothing joins slots (a,b) and (c,d); the 1-smoothing joins (a,d)
  and (b,c).

Closed (knot/link) diagrams are represented with an empty open sequence; that
convention is consumed by ``cut_knot_to_knotoid`` and the unreduced complex.
A closed component written as a single edge appearing in no crossing is a
crossingless circle.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Sequence


class KnotoidError(Exception):
    """Base class for diagram errors."""


class ValidationError(KnotoidError):
    """A diagram violates a structural invariant; message names the culprit."""


class AmbiguityError(ValidationError):
    """Crossing sign cannot be inferred (wraparound on a short closed loop)."""


class CrossingRecord(NamedTuple):
    a: int
    b: int
    c: int
    d: int


UNDER_IN, OVER_CCW, UNDER_OUT, OVER_CW = 0, 1, 2, 3


@dataclass(frozen=True)
class KnotoidPD:
    """Planar-diagram presentation of a (multi-)knotoid or closed diagram."""

    crossings: tuple[CrossingRecord, ...]
    open_component: tuple[int, ...]
    closed_components: tuple[tuple[int, ...], ...] = ()
    explicit_signs: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "crossings",
                           tuple(CrossingRecord(*map(int, rec)) for rec in self.crossings))
        object.__setattr__(self, "open_component", tuple(map(int, self.open_component)))
        object.__setattr__(self, "closed_components",
                           tuple(tuple(map(int, comp)) for comp in self.closed_components))
        if self.explicit_signs is not None:
            object.__setattr__(self, "explicit_signs",
                               tuple(map(int, self.explicit_signs)))
        _validate(self)

    # ------------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.crossings)

    @property
    def is_closed_diagram(self) -> bool:
        return not self.open_component

    @property
    def leg_edge(self) -> int:
        if not self.open_component:
            raise ValidationError("closed diagram has no leg")
        return self.open_component[0]

    @property
    def head_edge(self) -> int:
        if not self.open_component:
            raise ValidationError("closed diagram has no head")
        return self.open_component[-1]

    def components(self) -> list[tuple[int, ...]]:
        out = []
        if self.open_component:
            out.append(self.open_component)
        out.extend(self.closed_components)
        return out

    def all_edges(self) -> list[int]:
        edges: list[int] = []
        for comp in self.components():
            edges.extend(comp)
        return edges

    def successor(self, edge: int) -> Optional[int]:
        """Next edge along orientation; None past the head edge."""
        if self.open_component:
            seq = self.open_component
            if edge in seq:
                i = seq.index(edge)
                return seq[i + 1] if i + 1 < len(seq) else None
        for comp in self.closed_components:
            if edge in comp:
                i = comp.index(edge)
                return comp[(i + 1) % len(comp)]
        if edge in (self.open_component or ()):
            return None
        raise ValidationError(f"unknown edge {edge}")

    def signs(self) -> tuple[int, ...]:
        return tuple(crossing_sign(self, i) for i in range(self.n))

    def writhe(self) -> int:
        return sum(self.signs())

    def positive_negative(self) -> tuple[int, int]:
        s = self.signs()
        return s.count(1), s.count(-1)


# ----------------------------------------------------------------------
# validation


def _validate(pd: KnotoidPD) -> None:
    if not pd.open_component and not pd.closed_components:
        raise ValidationError("diagram has no components")
    edges = pd.all_edges()
    seen = set()
    for e in edges:
        if e in seen:
            raise ValidationError(f"edge label {e} appears in two components")
        seen.add(e)
    for comp in pd.components():
        if not comp:
            raise ValidationError("empty component sequence")
        for x, y in zip(comp, comp[1:]):
            if y <= x:
                raise ValidationError(
                    f"edge labels must increase along orientation; "
                    f"{y} follows {x}")

    slot_count: dict[int, int] = {}
    for idx, rec in enumerate(pd.crossings):
        for e in rec:
            if e not in seen:
                raise ValidationError(
                    f"crossing {idx} references unknown edge {e}")
            slot_count[e] = slot_count.get(e, 0) + 1

    def expect(e: int, want: int, what: str) -> None:
        got = slot_count.get(e, 0)
        if got != want:
            raise ValidationError(
                f"{what} edge {e} appears in {got} crossing slots, expected {want}")

    if pd.open_component:
        seq = pd.open_component
        if len(seq) == 1:
            expect(seq[0], 0, "isolated open")
        else:
            expect(seq[0], 1, "leg")
            expect(seq[-1], 1, "head")
            for e in seq[1:-1]:
                expect(e, 2, "interior open")
    for comp in pd.closed_components:
        if len(comp) == 1 and slot_count.get(comp[0], 0) == 0:
            continue  # crossingless circle
        for e in comp:
            expect(e, 2, "closed-component")

    if pd.explicit_signs is not None:
        if len(pd.explicit_signs) != pd.n:
            raise ValidationError(
                f"{len(pd.explicit_signs)} explicit signs for {pd.n} crossings")
        for i, s in enumerate(pd.explicit_signs):
            if s not in (1, -1):
                raise ValidationError(f"explicit sign {s} at crossing {i}")

    for idx in range(pd.n):
        _check_under_strand(pd, idx)
        crossing_sign(pd, idx)  # raises on inconsistency/ambiguity


def _check_under_strand(pd: KnotoidPD, idx: int) -> None:
    rec = pd.crossings[idx]
    succ_a = pd.successor(rec.a)
    if succ_a == rec.c:
        return
    # tolerate genuine wraparound ambiguity (c -> a also consistent)
    if pd.successor(rec.c) == rec.a and _in_same_closed_cycle(pd, rec.a, rec.c):
        return
    raise ValidationError(
        f"crossing {idx}: under-strand {rec.a} -> {rec.c} inconsistent with "
        f"edge ordering (successor of {rec.a} is {succ_a})")


def _in_same_closed_cycle(pd: KnotoidPD, x: int, y: int) -> bool:
    for comp in pd.closed_components:
        if x in comp and y in comp:
            return True
    return False


# ----------------------------------------------------------------------
# crossing signs


def crossing_sign(pd: KnotoidPD, c: int) -> int:
    """Sign of crossing ``c``; explicit signs take precedence over inference."""
    if not 0 <= c < pd.n:
        raise ValidationError(f"crossing index {c} out of range")
    if pd.explicit_signs is not None:
        return pd.explicit_signs[c]
    rec = pd.crossings[c]
    d_in = pd.successor(rec.d) == rec.b
    b_in = pd.successor(rec.b) == rec.d
    if d_in and b_in:
        raise AmbiguityError(
            f"crossing {c}: over-strand direction between edges {rec.b} and "
            f"{rec.d} is ambiguous (2-edge closed loop); supply explicit signs")
    if d_in:
        return 1
    if b_in:
        return -1
    raise ValidationError(
        f"crossing {c}: over-strand edges {rec.b}, {rec.d} are not consecutive")


def over_in_slot(pd: KnotoidPD, c: int) -> int:
    """Slot (1 or 3) at which the over-strand enters crossing ``c``."""
    return OVER_CW if crossing_sign(pd, c) == 1 else OVER_CCW


def incoming_slots(pd: KnotoidPD, c: int) -> tuple[int, int]:
    """The two slots where the diagram orientation enters crossing ``c``."""
    return (UNDER_IN, over_in_slot(pd, c))


# ----------------------------------------------------------------------
# JSON interface


def parse_pd(text) -> KnotoidPD:
    """Parse the documented PD JSON format.

    ``{"crossings": [[a,b,c,d],...], "open": [...], "closed": [[...],...],
    "signs": [...]}`` -- ``closed`` and ``signs`` optional.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    if isinstance(text, str):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"malformed PD JSON: {exc}") from exc
    else:
        data = text
    if not isinstance(data, dict) or "open" not in data:
        raise ValidationError('PD JSON must be an object with an "open" list')
    crossings = data.get("crossings", [])
    for i, rec in enumerate(crossings):
        if len(rec) != 4:
            raise ValidationError(f"crossing {i} does not have 4 edges: {rec}")
    signs = data.get("signs")
    return KnotoidPD(
        crossings=tuple(tuple(rec) for rec in crossings),
        open_component=tuple(data["open"]),
        closed_components=tuple(tuple(c) for c in data.get("closed", [])),
        explicit_signs=tuple(signs) if signs is not None else None,
    )


def serialize_pd(pd: KnotoidPD) -> str:
    data = {
        "crossings": [list(rec) for rec in pd.crossings],
        "open": list(pd.open_component),
    }
    if pd.closed_components:
        data["closed"] = [list(c) for c in pd.closed_components]
    if pd.explicit_signs is not None:
        data["signs"] = list(pd.explicit_signs)
    return json.dumps(data, sort_keys=True)


# ----------------------------------------------------------------------
# involutions


def reverse(pd: KnotoidPD) -> KnotoidPD:
    """Reverse orientation of every component.

    Each component keeps its own label set, reassigned increasingly along the
    reversed orientation, which makes this an involution.
    """
    relabel: dict[int, int] = {}
    new_open: tuple[int, ...] = ()
    if pd.open_component:
        seq = pd.open_component
        k = len(seq)
        for i, e in enumerate(seq):
            relabel[e] = seq[k - 1 - i]
        new_open = seq
    new_closed = []
    for comp in pd.closed_components:
        m = len(comp)
        # reversed orientation visited from the old minimum: f1, fm, f(m-1), ...
        relabel[comp[0]] = comp[0]
        for j in range(1, m):
            relabel[comp[m - j]] = comp[j]
        new_closed.append(comp)
    new_crossings = tuple(
        CrossingRecord(relabel[rec.c], relabel[rec.d], relabel[rec.a], relabel[rec.b])
        for rec in pd.crossings)
    return KnotoidPD(new_crossings, new_open, tuple(new_closed), pd.explicit_signs)


def mirror(pd: KnotoidPD) -> KnotoidPD:
    """Swap over/under at every crossing (rotate records to the old over-in)."""
    new_crossings = []
    for i, rec in enumerate(pd.crossings):
        if crossing_sign(pd, i) == 1:
            new_crossings.append(CrossingRecord(rec.d, rec.a, rec.b, rec.c))
        else:
            new_crossings.append(CrossingRecord(rec.b, rec.c, rec.d, rec.a))
    signs = None
    if pd.explicit_signs is not None:
        signs = tuple(-s for s in pd.explicit_signs)
    return KnotoidPD(tuple(new_crossings), pd.open_component,
                     pd.closed_components, signs)


def sym(pd: KnotoidPD) -> KnotoidPD:
    """Symmetric reflection: reverse the cyclic order of every record."""
    new_crossings = tuple(CrossingRecord(rec.a, rec.d, rec.c, rec.b)
                          for rec in pd.crossings)
    signs = None
    if pd.explicit_signs is not None:
        signs = tuple(-s for s in pd.explicit_signs)
    return KnotoidPD(new_crossings, pd.open_component,
                     pd.closed_components, signs)


# ----------------------------------------------------------------------
# walk form: passages along components, used by the structural rebuilds


class Passage(NamedTuple):
    crossing: int
    slot_in: int
    slot_out: int


def _passages_by_in_edge(pd: KnotoidPD) -> dict[int, tuple[Passage, int]]:
    """Map in-edge -> (passage, out-edge) over all crossings."""
    table: dict[int, tuple[Passage, int]] = {}
    for i, rec in enumerate(pd.crossings):
        pairs = [(UNDER_IN, UNDER_OUT)]
        if crossing_sign(pd, i) == 1:
            pairs.append((OVER_CW, OVER_CCW))
        else:
            pairs.append((OVER_CCW, OVER_CW))
        for slot_in, slot_out in pairs:
            e_in, e_out = rec[slot_in], rec[slot_out]
            if e_in in table:
                raise ValidationError(
                    f"edge {e_in} enters two crossings")
            table[e_in] = (Passage(i, slot_in, slot_out), e_out)
    return table


@dataclass
class Walks:
    """Mutable passage-walk view of a diagram; labels are regenerated on build.

    ``signs`` maps crossing id -> sign, correct by construction, so rebuilt
    diagrams always carry explicit signs (robust against wraparound
    ambiguities created by an operation).
    """

    open_walk: Optional[list[Passage]]
    closed_walks: list[list[Passage]]
    crossing_order: list[int]
    signs: dict[int, int]


def to_walks(pd: KnotoidPD) -> Walks:
    table = _passages_by_in_edge(pd)
    open_walk = None
    if pd.open_component:
        open_walk = []
        for e in pd.open_component[:-1]:
            passage, _ = table[e]
            open_walk.append(passage)
    closed_walks = []
    for comp in pd.closed_components:
        walk = []
        if len(comp) == 1 and comp[0] not in table:
            closed_walks.append(walk)  # crossingless circle
            continue
        for e in comp:
            passage, _ = table[e]
            walk.append(passage)
        closed_walks.append(walk)
    return Walks(open_walk, closed_walks, list(range(pd.n)),
                 {i: crossing_sign(pd, i) for i in range(pd.n)})


def from_walks(walks: Walks) -> KnotoidPD:
    """Rebuild a canonical PD (labels 1..M assigned along the walks)."""
    all_walks = ([walks.open_walk] if walks.open_walk is not None else []) \
        + walks.closed_walks
    surviving = set(p.crossing for walk in all_walks for p in walk)
    order = [c for c in walks.crossing_order if c in surviving]
    index = {c: i for i, c in enumerate(order)}
    slots: list[list[Optional[int]]] = [[None] * 4 for _ in order]
    label = 0

    def run(walk: list[Passage], closed: bool) -> list[int]:
        nonlocal label
        comp = []
        first = label + 1
        for j, p in enumerate(walk):
            label += 1
            comp.append(label)
            slots[index[p.crossing]][p.slot_in] = label
            out = first if closed and j == len(walk) - 1 else label + 1
            slots[index[p.crossing]][p.slot_out] = out
        if not closed or not walk:
            label += 1
            comp.append(label)
        return comp

    open_seq: tuple[int, ...] = ()
    if walks.open_walk is not None:
        open_seq = tuple(run(walks.open_walk, closed=False))
    closed_seqs = tuple(tuple(run(w, closed=True)) for w in walks.closed_walks)

    crossings = []
    for i, c in enumerate(order):
        rec = slots[i]
        if any(e is None for e in rec):
            raise ValidationError(f"crossing {c} not fully traversed")
        crossings.append(CrossingRecord(*rec))
    signs = tuple(walks.signs[c] for c in order)
    return KnotoidPD(tuple(crossings), open_seq, closed_seqs, signs)


# ----------------------------------------------------------------------
# faces of the planar embedding (boundary walks with the face on the left)


class Dart(NamedTuple):
    edge: int
    forward: bool


def faces(pd: KnotoidPD) -> list[list[Dart]]:
    """Face boundary walks of the embedded diagram.

    Each face is a cyclic list of darts (edge, direction-of-travel relative to
    the diagram orientation) with the face interior on the left.  Free ends
    (leg/head) act as U-turns.  Isolated edges of crossingless components are
    omitted.
    """
    in_inc: dict[int, tuple[int, int]] = {}
    out_inc: dict[int, tuple[int, int]] = {}
    for i, rec in enumerate(pd.crossings):
        over_in = over_in_slot(pd, i)
        for s in range(4):
            e = rec[s]
            if s in (UNDER_IN, over_in):
                in_inc[e] = (i, s)
            else:
                out_inc[e] = (i, s)

    def next_dart(d: Dart) -> Dart:
        target = in_inc.get(d.edge) if d.forward else out_inc.get(d.edge)
        if target is None:
            return Dart(d.edge, not d.forward)  # U-turn at a free end
        i, s = target
        t = (s - 1) % 4
        e = pd.crossings[i][t]
        leaves_with_k = out_inc.get(e) == (i, t)
        return Dart(e, leaves_with_k)

    darts = [Dart(e, fwd) for e in sorted(set(in_inc) | set(out_inc))
             for fwd in (True, False)]
    seen: set[Dart] = set()
    result = []
    for start in darts:
        if start in seen:
            continue
        face = []
        d = start
        while True:
            face.append(d)
            seen.add(d)
            d = next_dart(d)
            if d == start:
                break
        result.append(face)
    return result


# ----------------------------------------------------------------------
# structural operations


def product(pd1: KnotoidPD, pd2: KnotoidPD) -> KnotoidPD:
    """Knotoid multiplication: fuse head of pd1 with leg of pd2."""
    if pd1.is_closed_diagram or pd2.is_closed_diagram:
        raise ValidationError("product requires two open diagrams")
    shift = max(pd1.all_edges()) - min(pd2.all_edges()) + 1
    fused = pd1.head_edge

    def relabel(e: int) -> int:
        e2 = e + shift
        return fused if e == pd2.leg_edge else e2

    crossings = tuple(pd1.crossings) + tuple(
        CrossingRecord(*(relabel(e) for e in rec)) for rec in pd2.crossings)
    open_seq = pd1.open_component + tuple(relabel(e)
                                          for e in pd2.open_component[1:])
    closed = pd1.closed_components + tuple(
        tuple(relabel(e) for e in comp) for comp in pd2.closed_components)
    signs = None
    if pd1.explicit_signs is not None or pd2.explicit_signs is not None:
        signs = pd1.signs() + pd2.signs()
    return KnotoidPD(crossings, open_seq, closed, signs)


def disjoint_union(pd: KnotoidPD, closed_pd: KnotoidPD) -> KnotoidPD:
    """Adjoin a closed diagram to a knotoid as extra closed components."""
    if closed_pd.open_component:
        raise ValidationError("second factor must be a closed diagram")
    shift = max(pd.all_edges()) - min(closed_pd.all_edges()) + 1
    crossings = tuple(pd.crossings) + tuple(
        CrossingRecord(*(e + shift for e in rec)) for rec in closed_pd.crossings)
    closed = pd.closed_components + tuple(
        tuple(e + shift for e in comp) for comp in closed_pd.closed_components)
    signs = None
    if pd.explicit_signs is not None or closed_pd.explicit_signs is not None:
        signs = pd.signs() + closed_pd.signs()
    return KnotoidPD(crossings, pd.open_component, closed, signs)


def cut_knot_to_knotoid(knot_pd: KnotoidPD, moves: int = 0,
                        mode: str = "auto") -> KnotoidPD:
    """Cut a closed 1-component diagram open and retract the head.

    The circle is cut inside its first edge; the head end is then slid
    backwards through ``moves`` crossings, deleting each passage it crosses.
    ``mode`` names the move family by the strand that stays: ``"over"`` (the
    remaining arc passes over the endpoint, so every deleted passage must be
    an underpass), ``"under"`` (the converse), or ``"auto"`` (no constraint;
    mixed deletions occur for some diagrams).
    """
    if knot_pd.open_component or len(knot_pd.closed_components) != 1:
        raise ValidationError("cut requires a closed 1-component diagram")
    if mode not in ("auto", "over", "under"):
        raise ValidationError(f"unknown cut mode {mode!r}")
    walks = to_walks(knot_pd)
    open_walk = list(walks.closed_walks[0])  # starts just after the cut
    deleted_kinds = []
    for step in range(moves):
        if not open_walk:
            raise ValidationError(
                f"move {step + 1} requested but no crossings remain on the arc")
        last = open_walk.pop()
        deleted_kinds.append("under" if last.slot_in == UNDER_IN else "over")
        open_walk = [p for p in open_walk if p.crossing != last.crossing]
    if mode == "over" and any(k != "under" for k in deleted_kinds):
        raise ValidationError(
            f"mode=over (arc passes over the endpoint) needs underpass "
            f"deletions, got {deleted_kinds}")
    if mode == "under" and any(k != "over" for k in deleted_kinds):
        raise ValidationError(
            f"mode=under needs overpass deletions, got {deleted_kinds}")
    return from_walks(Walks(open_walk, [], walks.crossing_order, walks.signs))


def cut_move_kinds(knot_pd: KnotoidPD, moves: int) -> list[str]:
    """Over/under kind of each passage a cut with ``moves`` would delete."""
    if knot_pd.open_component or len(knot_pd.closed_components) != 1:
        raise ValidationError("cut requires a closed 1-component diagram")
    walks = to_walks(knot_pd)
    open_walk = list(walks.closed_walks[0])
    kinds = []
    for step in range(moves):
        if not open_walk:
            raise ValidationError(
                f"move {step + 1} requested but no crossings remain on the arc")
        last = open_walk.pop()
        kinds.append("under" if last.slot_in == UNDER_IN else "over")
        open_walk = [p for p in open_walk if p.crossing != last.crossing]
    return kinds


def rotate_closed_labels(knot_pd: KnotoidPD, start: int) -> KnotoidPD:
    """Relabel a closed 1-component diagram so the walk starts at edge ``start``.

    Cutting at different edges generally yields different knotoids; this is
    the documented way to explore labeling conventions of external tables.
    """
    if knot_pd.open_component or len(knot_pd.closed_components) != 1:
        raise ValidationError("rotation requires a closed 1-component diagram")
    comp = knot_pd.closed_components[0]
    if start not in comp:
        raise ValidationError(f"edge {start} not in the closed component")
    walks = to_walks(knot_pd)
    walk = walks.closed_walks[0]
    i = comp.index(start)
    rotated = walk[i:] + walk[:i]
    return from_walks(Walks(None, [rotated], walks.crossing_order, walks.signs))


def insert_r1(pd: KnotoidPD, edge: int, chirality: int) -> KnotoidPD:
    """Insert a kink on ``edge``; ``chirality`` +-1 is the new crossing sign."""
    if edge not in pd.all_edges():
        raise ValidationError(f"unknown edge {edge}")
    if chirality not in (1, -1):
        raise ValidationError(f"chirality must be +-1, got {chirality}")
    n = pd.n
    if chirality == 1:
        passages = [Passage(n, UNDER_IN, UNDER_OUT), Passage(n, OVER_CW, OVER_CCW)]
    else:
        passages = [Passage(n, UNDER_IN, UNDER_OUT), Passage(n, OVER_CCW, OVER_CW)]
    walks = to_walks(pd)
    _insert_passages(pd, walks, {edge: passages})
    walks.crossing_order.append(n)
    walks.signs[n] = chirality
    return from_walks(walks)


def insert_r2(pd: KnotoidPD, edge_a: int, edge_b: int) -> KnotoidPD:
    """Insert a clasp: push a finger of ``edge_a`` over ``edge_b``.

    The two edges must co-bound a face of the drawn diagram; the face walk is
    consulted both to verify this and to pick the planar clasp pattern that
    matches the relative orientation of the two edges along that face.
    """
    edges = pd.all_edges()
    for e in (edge_a, edge_b):
        if e not in edges:
            raise ValidationError(f"unknown edge {e}")
    if edge_a == edge_b:
        raise ValidationError("clasp edges must be distinct")
    orientation = None
    for face in faces(pd):
        dirs_a = [d.forward for d in face if d.edge == edge_a]
        dirs_b = [d.forward for d in face if d.edge == edge_b]
        if dirs_a and dirs_b:
            orientation = (dirs_a[0], dirs_b[0])
            break
    if orientation is None:
        raise ValidationError(
            f"edges {edge_a} and {edge_b} do not co-bound a face")
    n = pd.n
    # Patterns per (a-direction, b-direction) along the common face, derived
    # from the finger-over-disk picture; crossing n is the first along a.
    fa, fb = orientation
    if fa == fb:
        splice_a = [Passage(n, OVER_CW, OVER_CCW), Passage(n + 1, OVER_CCW, OVER_CW)] \
            if fa else \
            [Passage(n, OVER_CCW, OVER_CW), Passage(n + 1, OVER_CW, OVER_CCW)]
        splice_b = [Passage(n + 1, UNDER_IN, UNDER_OUT), Passage(n, UNDER_IN, UNDER_OUT)]
        signs = (1, -1) if fa else (-1, 1)
    else:
        splice_a = [Passage(n, OVER_CCW, OVER_CW), Passage(n + 1, OVER_CW, OVER_CCW)] \
            if fa else \
            [Passage(n, OVER_CW, OVER_CCW), Passage(n + 1, OVER_CCW, OVER_CW)]
        splice_b = [Passage(n, UNDER_IN, UNDER_OUT), Passage(n + 1, UNDER_IN, UNDER_OUT)]
        signs = (-1, 1) if fa else (1, -1)
    walks = to_walks(pd)
    _insert_passages(pd, walks, {edge_a: splice_a, edge_b: splice_b})
    walks.crossing_order.extend([n, n + 1])
    walks.signs[n], walks.signs[n + 1] = signs
    return from_walks(walks)


def _insert_passages(pd: KnotoidPD, walks: Walks,
                     insertions: dict[int, list[Passage]]) -> None:
    """Insert new passages where the named edges sit in the walks."""

    def position(edge: int):
        if pd.open_component and edge in pd.open_component:
            return ("open", pd.open_component.index(edge))
        for ci, comp in enumerate(pd.closed_components):
            if edge in comp:
                return ("closed", ci, comp.index(edge))
        raise ValidationError(f"unknown edge {edge}")

    # walk index semantics: in a component sequence, edge at position i is
    # followed by passage i (open) / passage i (closed, cyclic).  Inserting on
    # that edge means inserting passages before passage index i.
    plan = []
    for edge, passages in insertions.items():
        plan.append((position(edge), passages))
    # apply in descending insertion index per walk so indices stay valid
    plan.sort(key=lambda item: item[0], reverse=True)
    for pos, passages in plan:
        if pos[0] == "open":
            walks.open_walk[pos[1]:pos[1]] = passages
        else:
            _, ci, i = pos
            walk = walks.closed_walks[ci]
            walk[i:i] = passages


def reorder_crossings(pd: KnotoidPD, permutation: Sequence[int]) -> KnotoidPD:
    """Reorder the crossing list; ``permutation[i]`` is the old index placed at i."""
    if sorted(permutation) != list(range(pd.n)):
        raise ValidationError(f"not a permutation of 0..{pd.n - 1}: {permutation}")
    crossings = tuple(pd.crossings[i] for i in permutation)
    signs = None
    if pd.explicit_signs is not None:
        signs = tuple(pd.explicit_signs[i] for i in permutation)
    return KnotoidPD(crossings, pd.open_component, pd.closed_components, signs)


def trivial_knotoid() -> KnotoidPD:
    return KnotoidPD((), (1,), ())
