"""States, resolved diagrams, and the winding grading of a state.

Resolving every crossing of a knotoid diagram by its 0- or 1-smoothing yields
one open segment (leg to head) and some circles.  The tracer below records,
for every resolved component, the sequence of underlying diagram edges with
the direction each is traversed, and for every smoothed crossing the passages
through it.  That arc-level bookkeeping is exactly what the grading needs:

- a state's grading is a sum over crossing visits of the resolved segment,
  where a positive crossing contributes only under its 1-smoothing and a
  negative crossing only under its 0-smoothing;
- each visit contributes (-1)^smoothing * flow * level, where flow is +1 when
  the approaching arc runs with the diagram orientation and level is +1 when
  it approaches along the over-strand.

For multi-knotoids that shortcut-free formula is unavailable; the grading is
then computed from an explicit shortcut trace: every recorded intersection of
the shortcut with a diagram edge is propagated to the resolved component
carrying that edge, counted (with the traversal direction) when the carrier
is the segment, and the diagram's own signed count is subtracted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .diagram import (UNDER_IN, UNDER_OUT, OVER_CCW, OVER_CW,
                      KnotoidPD, ValidationError, crossing_sign,
                      over_in_slot)

State = tuple[int, ...]


def states(pd: KnotoidPD) -> Iterator[State]:
    """All 2^n states in lexicographic order (crossing order = bit order)."""
    n = pd.n
    for mask in range(1 << n):
        yield tuple((mask >> i) & 1 for i in range(n))


def ones(s: State) -> int:
    return sum(s)


def sigma(s: State) -> int:
    """Number of 0-smoothings minus number of 1-smoothings."""
    return len(s) - 2 * sum(s)


# 0-smoothing joins slots (a,b) and (c,d); 1-smoothing joins (a,d) and (b,c).
_SMOOTHING_PARTNER = (
    {UNDER_IN: OVER_CCW, OVER_CCW: UNDER_IN, UNDER_OUT: OVER_CW, OVER_CW: UNDER_OUT},
    {UNDER_IN: OVER_CW, OVER_CW: UNDER_IN, OVER_CCW: UNDER_OUT, UNDER_OUT: OVER_CCW},
)


class Visit:
    """One passage of a resolved component through a smoothed crossing."""

    __slots__ = ("crossing", "slot_in", "slot_out")

    def __init__(self, crossing: int, slot_in: int, slot_out: int):
        self.crossing = crossing
        self.slot_in = slot_in
        self.slot_out = slot_out

    def __repr__(self):
        return f"Visit({self.crossing}, in={self.slot_in}, out={self.slot_out})"


@dataclass(frozen=True)
class Resolution:
    """A fully smoothed diagram.

    ``segment_arcs`` / ``circle_arcs``: per component, the ordered (edge,
    forward) pairs, where ``forward`` means the arc traverses that diagram
    edge in the diagram's own orientation.  The segment runs leg to head;
    circles are listed by ascending minimum edge label and each starts with
    its minimum edge traversed forward.  ``segment_visits`` are the segment's
    crossing passages in traversal order.
    """

    state: State
    segment_arcs: tuple[tuple[int, bool], ...]
    circle_arcs: tuple[tuple[tuple[int, bool], ...], ...]
    segment_visits: tuple[Visit, ...]

    @property
    def num_components(self) -> int:
        return 1 + len(self.circle_arcs)

    def component_of_edge(self, edge: int) -> tuple[int, bool]:
        """(component index, forward) carrying ``edge``; segment is index 0."""
        for e, fwd in self.segment_arcs:
            if e == edge:
                return 0, fwd
        for i, circle in enumerate(self.circle_arcs):
            for e, fwd in circle:
                if e == edge:
                    return i + 1, fwd
        raise ValidationError(f"edge {edge} not found in resolution")


def _incidences(pd: KnotoidPD):
    """Edge -> (crossing, slot) maps for the ends where the diagram enters
    (in) and leaves (out) a crossing."""
    in_inc: dict[int, tuple[int, int]] = {}
    out_inc: dict[int, tuple[int, int]] = {}
    for i, rec in enumerate(pd.crossings):
        o_in = over_in_slot(pd, i)
        for slot in range(4):
            e = rec[slot]
            if slot in (UNDER_IN, o_in):
                in_inc[e] = (i, slot)
            else:
                out_inc[e] = (i, slot)
    return in_inc, out_inc


def _trace(pd: KnotoidPD, s: State, in_inc, out_inc,
           edge: int, forward: bool, stop_at_free_end: bool):
    """Walk a resolved component from ``edge``.

    Returns (arcs, visits): arcs are (edge, forward) pairs in traversal order,
    visits the crossing passages.  Open components stop at free ends; circles
    stop on returning to the start."""
    arcs = [(edge, forward)]
    visits = []
    e, fwd = edge, forward
    while True:
        inc = in_inc.get(e) if fwd else out_inc.get(e)
        if inc is None:
            if not stop_at_free_end:
                raise ValidationError(
                    f"component through edge {edge} hit a free end")
            return arcs, visits
        i, slot = inc
        partner = _SMOOTHING_PARTNER[s[i]][slot]
        e = pd.crossings[i][partner]
        # leaving via `partner`: forward along e iff the diagram also leaves
        # the crossing there
        fwd = out_inc.get(e) == (i, partner)
        visits.append(Visit(i, slot, partner))
        if not stop_at_free_end and (e, fwd) == (edge, forward):
            return arcs, visits
        arcs.append((e, fwd))


def resolve(pd: KnotoidPD, s: State) -> Resolution:
    """Trace all components of the smoothing ``s`` of ``pd``."""
    if pd.is_closed_diagram:
        raise ValidationError("resolve() needs an open component; "
                              "use the unreduced pipeline for closed diagrams")
    if len(s) != pd.n:
        raise ValidationError(f"state length {len(s)} != {pd.n} crossings")
    in_inc, out_inc = _incidences(pd)
    leg = pd.open_component[0]
    segment_arcs, segment_visits = _trace(pd, s, in_inc, out_inc,
                                          leg, True, stop_at_free_end=True)
    remaining = set(pd.all_edges())
    for e, _ in segment_arcs:
        remaining.discard(e)
    circles = _trace_circles(pd, s, in_inc, out_inc, remaining)
    return Resolution(tuple(s), tuple(segment_arcs), circles,
                      tuple(segment_visits))


def _trace_circles(pd: KnotoidPD, s: State, in_inc, out_inc,
                   remaining: set[int]):
    circles = []
    while remaining:
        start = min(remaining)
        # a crossingless circle has no incidences and is its own component
        if start not in in_inc and start not in out_inc:
            circles.append(((start, True),))
            remaining.discard(start)
            continue
        arcs, _ = _trace(pd, s, in_inc, out_inc, start, True,
                         stop_at_free_end=False)
        for e, _ in arcs:
            remaining.discard(e)
        circles.append(tuple(arcs))
    circles.sort(key=lambda arcs: min(e for e, _ in arcs))
    return tuple(circles)


def resolve_closed(pd: KnotoidPD, s: State):
    """Circle components of a smoothing of a closed diagram."""
    if pd.open_component:
        raise ValidationError("resolve_closed() expects a closed diagram")
    if len(s) != pd.n:
        raise ValidationError(f"state length {len(s)} != {pd.n} crossings")
    in_inc, out_inc = _incidences(pd)
    return _trace_circles(pd, s, in_inc, out_inc, set(pd.all_edges()))


def _visit_contribution(sign: int, smoothing: int, flow: int, level: int) -> int:
    """Contribution of one segment visit to the winding grading.

    Positive crossings contribute only when 1-smoothed, negative only when
    0-smoothed; then the term is (-1)^smoothing * flow * level.
    """
    if sign == 1 and smoothing != 1:
        return 0
    if sign == -1 and smoothing != 0:
        return 0
    return (-1) ** smoothing * flow * level


def mu_combinatorial(pd: KnotoidPD, s: State,
                     resolution: Optional[Resolution] = None) -> int:
    """Winding grading of a state of a single-segment diagram.

    Sums the visit contributions of the resolved segment over all crossings;
    both passages count when the segment passes a crossing twice.  Rejects
    multi-knotoids (the shortcut-free formula assumes the canonical shortcut
    follows the whole diagram).
    """
    if pd.closed_components:
        raise ValidationError(
            "combinatorial grading needs a single-segment diagram; "
            "supply a shortcut trace for multi-knotoids")
    if resolution is None:
        resolution = resolve(pd, s)
    total = 0
    for visit in resolution.segment_visits:
        i = visit.crossing
        sign = crossing_sign(pd, i)
        rec = pd.crossings[i]
        o_in = over_in_slot(pd, i)
        in_slots = (UNDER_IN, o_in)
        # flow: +1 iff the approach direction matches the diagram orientation
        # on that edge end, i.e. the entered slot is one the diagram enters.
        flow = 1 if visit.slot_in in in_slots else -1
        level = 1 if visit.slot_in in (OVER_CCW, OVER_CW) else -1
        total += _visit_contribution(sign, s[i], flow, level)
    return total


@dataclass(frozen=True)
class ShortcutTrace:
    """Ordered signed intersections of an explicit leg-to-head shortcut with
    the diagram: (edge label, +-1), sign +1 when the diagram strand crosses
    the shortcut right to left."""

    intersections: tuple[tuple[int, int], ...]

    def __post_init__(self):
        clean = []
        for item in self.intersections:
            edge, sg = item
            if sg not in (1, -1):
                raise ValidationError(f"trace sign must be +-1, got {sg}")
            clean.append((int(edge), int(sg)))
        object.__setattr__(self, "intersections", tuple(clean))

    @staticmethod
    def from_json_dict(data) -> "ShortcutTrace":
        return ShortcutTrace(tuple((e, s) for e, s in data["trace"]))

    def to_json_dict(self) -> dict:
        return {"trace": [list(item) for item in self.intersections]}


def mu_from_shortcut(pd: KnotoidPD, trace: ShortcutTrace, s: State,
                     resolution: Optional[Resolution] = None) -> int:
    """Winding grading from an explicit shortcut trace.

    k_s . alpha counts the trace intersections whose carrying edge lies on the
    resolved segment, with the sign flipped when the segment traverses that
    edge against the diagram orientation; K . alpha is the plain signed sum.
    """
    if resolution is None:
        resolution = resolve(pd, s)
    edges = set(pd.all_edges())
    k_dot = 0
    K_dot = 0
    for edge, sg in trace.intersections:
        if edge not in edges:
            raise ValidationError(f"shortcut trace references unknown edge {edge}")
        K_dot += sg
        comp, forward = resolution.component_of_edge(edge)
        if comp == 0:
            k_dot += sg if forward else -sg
    return k_dot - K_dot
