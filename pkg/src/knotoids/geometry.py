"""Planar geometry: winding potentials and coordinate-backed diagrams.

A geometric diagram is a list of open/closed polylines with an over/under
declaration per crossing.  From it we derive the combinatorial diagram
(``pd_from_geometric``), and the plane-only data the refined invariants need:
winding potentials of closed curves at off-curve points, at points on the
curve (half-integers, returned doubled), and at double points (averages of
the two passage values).

States are resolved geometrically by trimming the strands back to a safe
disk around each crossing and letting the polyline jump straight between the
trim points; the reconnection pairing comes from the combinatorial smoothing,
so geometric and combinatorial resolutions agree by construction.  All
winding values are snapped to half-integers and the snap is asserted to be
within 1e-6 of a full turn.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from .diagram import (CrossingRecord, KnotoidPD, KnotoidError, ValidationError)
from .resolution import Resolution, ShortcutTrace, State, resolve

TWO_PI = 2.0 * math.pi
SNAP_TURNS = 1e-6

Point = tuple[float, float]


class DegeneracyError(KnotoidError):
    """Geometry is not in generic position within the declared tolerance."""


class OverRule(NamedTuple):
    pair: tuple[int, int]   # sorted global segment indices of the two strands
    over: int               # global segment index of the over strand


@dataclass(frozen=True)
class GeomComponent:
    is_open: bool
    vertices: tuple[Point, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices",
                           tuple((float(x), float(y)) for x, y in self.vertices))
        need = 2 if self.is_open else 3
        if len(self.vertices) < need:
            raise ValidationError(
                f"component needs at least {need} vertices, got {len(self.vertices)}")

    def segments(self) -> list[tuple[Point, Point]]:
        pts = self.vertices
        segs = [(pts[i], pts[i + 1]) for i in range(len(pts) - 1)]
        if not self.is_open:
            segs.append((pts[-1], pts[0]))
        return segs


@dataclass(frozen=True)
class GeometricDiagram:
    components: tuple[GeomComponent, ...]
    over_rules: tuple[OverRule, ...]
    tolerance: float = 1e-7

    def __post_init__(self):
        opens = sum(1 for c in self.components if c.is_open)
        if opens > 1:
            raise ValidationError(f"{opens} open components; at most one allowed")

    def global_segments(self) -> list[tuple[int, int, Point, Point]]:
        """(component, local segment, endpoints) in global numbering order."""
        out = []
        for ci, comp in enumerate(self.components):
            for si, (p, q) in enumerate(comp.segments()):
                out.append((ci, si, p, q))
        return out


# ----------------------------------------------------------------------
# vector helpers


def _sub(a: Point, b: Point) -> Point:
    return (a[0] - b[0], a[1] - b[1])


def _cross(u: Point, v: Point) -> float:
    return u[0] * v[1] - u[1] * v[0]


def _dot(u: Point, v: Point) -> float:
    return u[0] * v[0] + u[1] * v[1]


def _norm(u: Point) -> float:
    return math.hypot(u[0], u[1])


def _dist(a: Point, b: Point) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def _signed_angle(u: Point, v: Point) -> float:
    return math.atan2(_cross(u, v), _dot(u, v))


def _point_segment_distance(p: Point, a: Point, b: Point) -> float:
    ab = _sub(b, a)
    denom = _dot(ab, ab)
    if denom == 0.0:
        return _dist(p, a)
    t = max(0.0, min(1.0, _dot(_sub(p, a), ab) / denom))
    proj = (a[0] + t * ab[0], a[1] + t * ab[1])
    return _dist(p, proj)


def _segment_intersection(p0, p1, q0, q1, tol):
    """Interior transversal intersection of two segments, or None.

    Raises DegeneracyError when the configuration is within ``tol`` of being
    non-generic (near-parallel overlap, near-endpoint hit)."""
    d1 = _sub(p1, p0)
    d2 = _sub(q1, q0)
    denom = _cross(d1, d2)
    len1, len2 = _norm(d1), _norm(d2)
    if len1 == 0.0 or len2 == 0.0:
        raise DegeneracyError("zero-length segment")
    if abs(denom) <= tol * len1 * len2:
        # parallel: degenerate only if the supports come close
        if (_point_segment_distance(q0, p0, p1) <= tol
                or _point_segment_distance(q1, p0, p1) <= tol
                or _point_segment_distance(p0, q0, q1) <= tol
                or _point_segment_distance(p1, q0, q1) <= tol):
            raise DegeneracyError("near-parallel overlapping segments")
        return None
    w = _sub(q0, p0)
    t = _cross(w, d2) / denom
    s = _cross(w, d1) / denom
    margin_t = tol / len1
    margin_s = tol / len2
    if t < -margin_t or t > 1 + margin_t or s < -margin_s or s > 1 + margin_s:
        return None
    if t < margin_t or t > 1 - margin_t or s < margin_s or s > 1 - margin_s:
        raise DegeneracyError(
            f"intersection within tolerance of a segment endpoint "
            f"(t={t:.3g}, s={s:.3g})")
    return (p0[0] + t * d1[0], p0[1] + t * d1[1]), t, s


def _crossing_hit(p0, p1, q0, q1, tol):
    """Like _segment_intersection, but segments sharing an endpoint are
    accepted as non-crossing provided they leave the shared point
    transversally (needed where a shortcut starts at the leg/head)."""
    shared = None
    for a in (p0, p1):
        for b in (q0, q1):
            if _dist(a, b) <= tol:
                shared = (a, b)
    if shared is not None:
        d1 = _sub(p1, p0)
        d2 = _sub(q1, q0)
        n1, n2 = _norm(d1), _norm(d2)
        if n1 == 0.0 or n2 == 0.0 or abs(_cross(d1, d2)) <= tol * n1 * n2:
            raise DegeneracyError("tangential contact at a shared endpoint")
        return None
    return _segment_intersection(p0, p1, q0, q1, tol)


# ----------------------------------------------------------------------
# winding potentials


def winding_off_curve_x2(closed_pts: Sequence[Point], p: Point) -> int:
    """2 * winding number of a closed polyline around an off-curve point."""
    total = 0.0
    m = len(closed_pts)
    for i in range(m):
        u = _sub(closed_pts[i], p)
        v = _sub(closed_pts[(i + 1) % m], p)
        if u == (0.0, 0.0) or v == (0.0, 0.0):
            raise DegeneracyError("winding query point lies on the curve")
        total += _signed_angle(u, v)
    return _snap_half_turns(total)


def winding_at_vertex_x2(closed_pts: Sequence[Point], index: int,
                         tol: float = 1e-9) -> int:
    """2 * winding potential at a vertex the closed polyline passes once.

    The value is the average of the winding numbers of the two regions
    adjacent to the passage (that is how the potential extends to curve
    points); the passage may be a corner, e.g. the junction of a knotoid
    strand with its shortcut.  Both regions are sampled just off the vertex
    along the corner bisector and the result is checked to be a genuine
    adjacent-region pair (windings differing by exactly one).
    """
    m = len(closed_pts)
    p = closed_pts[index]
    prev = closed_pts[(index - 1) % m]
    nxt = closed_pts[(index + 1) % m]
    r1 = _sub(prev, p)
    r2 = _sub(nxt, p)
    n1, n2 = _norm(r1), _norm(r2)
    if n1 <= tol or n2 <= tol:
        raise DegeneracyError("zero-length segment at vertex")
    r1 = (r1[0] / n1, r1[1] / n1)
    r2 = (r2[0] / n2, r2[1] / n2)
    b = (r1[0] + r2[0], r1[1] + r2[1])
    if _norm(b) < 1e-9:
        b = (-r2[1], r2[0])     # straight passage: use the normal
    nb = _norm(b)
    b = (b[0] / nb, b[1] / nb)
    clearance = min(n1, n2)
    for i, q in enumerate(closed_pts):
        if i != index:
            d = _dist(p, q)
            if d <= tol:
                raise DegeneracyError("curve revisits the vertex")
            clearance = min(clearance, d)
    for i in range(m):
        if i in ((index - 1) % m, index):
            continue
        d = _point_segment_distance(p, closed_pts[i], closed_pts[(i + 1) % m])
        if d <= tol:
            raise DegeneracyError("curve passes through the vertex")
        clearance = min(clearance, d)
    eps = clearance / 4.0
    w1 = winding_off_curve_x2(closed_pts, (p[0] + eps * b[0], p[1] + eps * b[1]))
    w2 = winding_off_curve_x2(closed_pts, (p[0] - eps * b[0], p[1] - eps * b[1]))
    if abs(w1 - w2) != 2:
        raise DegeneracyError(
            f"vertex samples landed in non-adjacent regions ({w1 / 2}, {w2 / 2})")
    return (w1 + w2) // 2


def _snap_half_turns(total: float) -> int:
    value = total / math.pi          # doubled winding number
    snapped = round(value)
    if abs(value - snapped) > 4 * math.pi * SNAP_TURNS + 1e-9:
        raise DegeneracyError(
            f"winding value {value / 2} does not snap to a half-integer")
    return snapped


def winding_potential_x2(closed_pts: Sequence[Point], p: Point,
                         tol: float = 1e-9) -> int:
    """2 * winding potential of a closed polyline at an arbitrary point.

    Off the curve this is twice the winding number; at a simple curve point
    it is the doubled half-integer of the open parametrization; at a double
    point it is the average over the four neighbouring regions.
    """
    m = len(closed_pts)
    passages = []     # vertex indices where the curve passes through p
    pts = list(closed_pts)
    for i, v in enumerate(pts):
        if _dist(v, p) <= tol:
            passages.append(i)
    if not passages:
        # check segment interiors; split them at p when hit
        hits = []
        for i in range(m):
            a, b = pts[i], pts[(i + 1) % m]
            if _point_segment_distance(p, a, b) <= tol:
                hits.append(i)
        if not hits:
            return winding_off_curve_x2(pts, p)
        if len(hits) > 2:
            raise DegeneracyError(f"curve passes {len(hits)} times through point")
        for count, i in enumerate(sorted(hits)):
            pts.insert(i + 1 + count, p)
        passages = [i for i, v in enumerate(pts) if _dist(v, p) <= tol]
    if len(passages) == 1:
        return winding_at_vertex_x2(pts, passages[0])
    if len(passages) == 2:
        return _double_point_x2(pts, p, passages, tol)
    raise DegeneracyError(f"curve passes {len(passages)} times through point")


def _double_point_x2(pts: list, p: Point, passages: list, tol: float) -> int:
    """Average of the winding numbers of the four regions at a double point,
    sampled along the quadrant bisectors of the two passage tangents."""
    m = len(pts)

    def tangent(i: int) -> Point:
        before = _sub(p, pts[(i - 1) % m])
        after = _sub(pts[(i + 1) % m], p)
        nb, na = _norm(before), _norm(after)
        t = (before[0] / nb + after[0] / na, before[1] / nb + after[1] / na)
        n = _norm(t)
        if n <= tol:
            raise DegeneracyError("cusp at double point")
        return (t[0] / n, t[1] / n)

    u = tangent(passages[0])
    v = tangent(passages[1])
    clearance = min(_dist(p, q) for i, q in enumerate(pts)
                    if i not in passages and _dist(p, q) > tol)
    incident = set()
    for i in passages:
        incident.update({(i - 1) % m, i % m})
    for i in range(m):
        if i in incident:
            continue
        d = _point_segment_distance(p, pts[i], pts[(i + 1) % m])
        if d > tol:
            clearance = min(clearance, d)
    eps = clearance / 4.0
    total = 0
    for du, dv in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
        w = (du * u[0] + dv * v[0], du * u[1] + dv * v[1])
        n = _norm(w)
        if n <= tol:
            raise DegeneracyError("tangential double point")
        sample = (p[0] + eps * w[0] / n, p[1] + eps * w[1] / n)
        total += winding_off_curve_x2(pts, sample)
    if total % 4:
        raise DegeneracyError("double-point average is not a half-integer")
    return total // 4


def winding_potential(curve: Sequence[Point], p: Point, tol: float = 1e-9) -> int:
    """Doubled winding potential of a closed polyline at any point."""
    return winding_potential_x2(curve, p, tol)


def surrounds(circle: Sequence[Point], p: Point) -> bool:
    """True iff the closed polyline has nonzero winding number around p."""
    return winding_off_curve_x2(circle, p) != 0


def algebraic_crossings(moving: Sequence[Point], still: Sequence[Point],
                        tol: float = 1e-9) -> int:
    """moving . still: signed transversal crossings of two open polylines.

    Counts +1 when ``moving`` crosses ``still`` from its right to its left.
    Segments sharing an endpoint (e.g. a shortcut starting on the curve) do
    not count as crossings.
    """
    total = 0
    for i in range(len(moving) - 1):
        for j in range(len(still) - 1):
            hit = _crossing_hit(moving[i], moving[i + 1],
                                still[j], still[j + 1], tol)
            if hit is None:
                continue
            d_m = _sub(moving[i + 1], moving[i])
            d_s = _sub(still[j + 1], still[j])
            total += 1 if _cross(d_s, d_m) > 0 else -1
    return total


# ----------------------------------------------------------------------
# JSON interface


def parse_geometric(text) -> GeometricDiagram:
    """Parse the documented geometric JSON format.

    ``{"components": [{"open": bool, "vertices": [[x, y], ...]}, ...],
    "over": [{"crossing_hint": [i, j], "over_component": c,
    "over_segment": s}, ...], "tolerance": eps}`` where ``crossing_hint``
    holds the two global segment indices of a crossing (components
    concatenated in order, closed components including their wrap segment)
    and the over strand is named by component and local segment.
    """
    import json as _json
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    if isinstance(text, str):
        try:
            data = _json.loads(text)
        except _json.JSONDecodeError as exc:
            raise ValidationError(f"malformed geometric JSON: {exc}") from exc
    else:
        data = text
    comps = tuple(GeomComponent(bool(c["open"]),
                                tuple((x, y) for x, y in c["vertices"]))
                  for c in data["components"])
    offsets = []
    total = 0
    for c in comps:
        offsets.append(total)
        total += len(c.segments())
    rules = []
    for item in data.get("over", []):
        i, j = item["crossing_hint"]
        ci, si = item["over_component"], item["over_segment"]
        if not 0 <= ci < len(comps):
            raise ValidationError(f"over_component {ci} out of range")
        if not 0 <= si < len(comps[ci].segments()):
            raise ValidationError(f"over_segment {si} out of range")
        rules.append(OverRule(tuple(sorted((int(i), int(j)))),
                              offsets[ci] + si))
    return GeometricDiagram(comps, tuple(rules),
                            float(data.get("tolerance", 1e-7)))


def serialize_geometric(geom: GeometricDiagram) -> str:
    import json as _json
    offsets = []
    total = 0
    for c in geom.components:
        offsets.append(total)
        total += len(c.segments())

    def locate(g: int) -> tuple[int, int]:
        for ci in reversed(range(len(geom.components))):
            if g >= offsets[ci]:
                return ci, g - offsets[ci]
        raise ValidationError(f"global segment {g} out of range")

    over = []
    for rule in geom.over_rules:
        ci, si = locate(rule.over)
        over.append({"crossing_hint": list(rule.pair),
                     "over_component": ci, "over_segment": si})
    return _json.dumps({
        "components": [{"open": c.is_open,
                        "vertices": [list(v) for v in c.vertices]}
                       for c in geom.components],
        "over": over,
        "tolerance": geom.tolerance,
    }, sort_keys=True)


def geometric_diagram(components, over: dict, tolerance: float = 1e-7
                      ) -> GeometricDiagram:
    """Convenience constructor: ``over`` maps a global segment pair (i, j)
    to the global index of the over strand."""
    comps = tuple(GeomComponent(is_open, tuple(vertices))
                  for is_open, vertices in components)
    rules = tuple(OverRule(tuple(sorted(pair)), winner)
                  for pair, winner in sorted(over.items()))
    return GeometricDiagram(comps, rules, tolerance)


# ----------------------------------------------------------------------
# combinatorial diagram from coordinates


@dataclass
class GeometricLayout:
    """A geometric diagram together with its derived combinatorial data."""

    geom: GeometricDiagram
    pd: KnotoidPD
    crossing_points: list[Point]
    crossing_radius: list[float]
    edge_paths: dict[int, list[Point]]
    edge_start_crossing: dict[int, Optional[int]]
    edge_end_crossing: dict[int, Optional[int]]
    leg: Optional[Point]
    head: Optional[Point]


class _Hit(NamedTuple):
    point: Point
    gseg: tuple[int, int]       # (component, local segment)
    t: float
    other: tuple[int, int]
    is_over: bool


def analyze_geometric(geom: GeometricDiagram) -> GeometricLayout:
    """Validate genericity, find crossings, and build the combinatorial PD."""
    tol = geom.tolerance
    segs = geom.global_segments()
    gindex = {(ci, si): g for g, (ci, si, _, _) in enumerate(segs)}

    # vertex-on-strand clearance
    for ci, comp in enumerate(geom.components):
        for vi, v in enumerate(comp.vertices):
            for cj, sj, p, q in segs:
                if (cj, sj) in _segments_at_vertex(geom, ci, vi):
                    continue
                if _point_segment_distance(v, p, q) <= tol:
                    raise DegeneracyError(
                        f"vertex {vi} of component {ci} lies on a strand")

    # pairwise interior intersections
    raw: list[tuple[Point, tuple[int, int], float, tuple[int, int], float]] = []
    for a in range(len(segs)):
        ca, sa, p0, p1 = segs[a]
        for b in range(a + 1, len(segs)):
            cb, sb, q0, q1 = segs[b]
            if ca == cb and _adjacent_segments(geom.components[ca], sa, sb):
                continue
            hit = _segment_intersection(p0, p1, q0, q1, tol)
            if hit is None:
                continue
            point, t, s = hit
            raw.append((point, (ca, sa), t, (cb, sb), s))

    for i in range(len(raw)):
        for j in range(i + 1, len(raw)):
            if _dist(raw[i][0], raw[j][0]) <= tol:
                raise DegeneracyError(
                    f"two crossings within tolerance near {raw[i][0]} "
                    f"(triple point or tangency)")

    rules = {}
    for rule in geom.over_rules:
        key = tuple(sorted(rule.pair))
        if key in rules:
            raise ValidationError(f"duplicate over rule for segments {key}")
        if rule.over not in key:
            raise ValidationError(
                f"over segment {rule.over} is not one of {key}")
        rules[key] = rule.over

    hits: list[_Hit] = []
    for point, ga, t, gb, s in raw:
        key = tuple(sorted((gindex[ga], gindex[gb])))
        if key not in rules:
            raise ValidationError(
                f"crossing between global segments {key} has no over rule")
        over = rules[key]
        hits.append(_Hit(point, ga, t, gb, over == gindex[ga]))
        hits.append(_Hit(point, gb, s, ga, over == gindex[gb]))

    # passages per component, ordered along the component
    per_comp: list[list[_Hit]] = [[] for _ in geom.components]
    for h in hits:
        per_comp[h.gseg[0]].append(h)
    for lst in per_comp:
        lst.sort(key=lambda h: (h.gseg[1], h.t))

    # crossing identity: keyed by the unordered segment pair
    crossing_ids: dict[tuple[tuple[int, int], tuple[int, int]], int] = {}
    order: list[Point] = []
    for ci, lst in enumerate(per_comp):
        for h in lst:
            key = tuple(sorted((h.gseg, h.other)))
            if key not in crossing_ids:
                crossing_ids[key] = len(order)
                order.append(h.point)
    ncross = len(order)

    # edges: walk each component, label sequentially
    label = 0
    edge_paths: dict[int, list[Point]] = {}
    edge_start_crossing: dict[int, Optional[int]] = {}
    edge_end_crossing: dict[int, Optional[int]] = {}
    # per crossing: the two passages (crossing id -> list of passage data)
    passage_data: dict[int, list[dict]] = {i: [] for i in range(ncross)}
    open_seq: tuple[int, ...] = ()
    closed_seqs: list[tuple[int, ...]] = []

    for ci, comp in enumerate(geom.components):
        lst = per_comp[ci]
        verts = comp.vertices
        if comp.is_open:
            anchors = [(None, (-1, -1.0), verts[0])] + \
                [(crossing_ids[tuple(sorted((h.gseg, h.other)))],
                  (h.gseg[1], h.t), h.point) for h in lst] + \
                [(None, (len(verts), 2.0), verts[-1])]
        else:
            if not lst:
                label += 1
                edge_paths[label] = list(verts)
                edge_start_crossing[label] = None
                edge_end_crossing[label] = None
                closed_seqs.append((label,))
                continue
            ring = [(crossing_ids[tuple(sorted((h.gseg, h.other)))],
                     (h.gseg[1], h.t), h.point) for h in lst]
            anchors = ring + [ring[0]]
        comp_labels = []
        for k in range(len(anchors) - 1):
            c0, pos0, pt0 = anchors[k]
            c1, pos1, pt1 = anchors[k + 1]
            label += 1
            comp_labels.append(label)
            edge_paths[label] = _subpath(verts, comp.is_open, pos0, pt0,
                                         pos1, pt1)
            edge_start_crossing[label] = c0
            edge_end_crossing[label] = c1
        if comp.is_open:
            open_seq = tuple(comp_labels)
        else:
            closed_seqs.append(tuple(comp_labels))
        # record passages with in/out edge labels
        for k, h in enumerate(lst):
            cid = crossing_ids[tuple(sorted((h.gseg, h.other)))]
            if comp.is_open:
                e_in, e_out = comp_labels[k], comp_labels[k + 1]
            else:
                e_in = comp_labels[k - 1] if k > 0 else comp_labels[-1]
                e_out = comp_labels[k]
            d = _direction_at(verts, comp.is_open, h.gseg[1])
            passage_data[cid].append(
                {"edge_in": e_in, "edge_out": e_out, "dir": d,
                 "is_over": h.is_over})

    crossings, signs = [], []
    for cid in range(ncross):
        data = passage_data[cid]
        if len(data) != 2:
            raise DegeneracyError(f"crossing {cid} has {len(data)} passages")
        overs = [d for d in data if d["is_over"]]
        unders = [d for d in data if not d["is_over"]]
        if len(overs) != 1:
            raise ValidationError(f"crossing {cid} over rule inconsistent")
        u, o = unders[0], overs[0]
        rec, sign = _crossing_record(u, o)
        crossings.append(rec)
        signs.append(sign)

    pd = KnotoidPD(tuple(crossings), open_seq, tuple(closed_seqs), tuple(signs))
    radii = _crossing_radii(geom, order, segs)
    leg = geom.components[_open_index(geom)].vertices[0] if open_seq else None
    head = geom.components[_open_index(geom)].vertices[-1] if open_seq else None
    return GeometricLayout(geom, pd, order, radii, edge_paths,
                           edge_start_crossing, edge_end_crossing, leg, head)


def pd_from_geometric(geom: GeometricDiagram) -> KnotoidPD:
    return analyze_geometric(geom).pd


def _open_index(geom: GeometricDiagram) -> int:
    for i, c in enumerate(geom.components):
        if c.is_open:
            return i
    raise ValidationError("no open component")


def _segments_at_vertex(geom: GeometricDiagram, ci: int, vi: int):
    comp = geom.components[ci]
    nseg = len(comp.segments())
    out = set()
    if vi < nseg:
        out.add((ci, vi))
    if vi > 0:
        out.add((ci, vi - 1))
    if not comp.is_open:
        if vi == 0:
            out.add((ci, nseg - 1))
    return out


def _adjacent_segments(comp: GeomComponent, sa: int, sb: int) -> bool:
    if abs(sa - sb) <= 1:
        return True
    if not comp.is_open:
        nseg = len(comp.segments())
        if {sa, sb} == {0, nseg - 1}:
            return True
    return False


def _direction_at(verts, is_open: bool, seg_idx: int) -> Point:
    a = verts[seg_idx]
    b = verts[seg_idx + 1] if seg_idx + 1 < len(verts) else verts[0]
    d = _sub(b, a)
    n = _norm(d)
    return (d[0] / n, d[1] / n)


def _subpath(verts, is_open: bool, pos0, pt0, pos1, pt1) -> list[Point]:
    """Polyline from anchor (seg, t) pt0 to anchor pt1 along the component.

    A vertex ``vi`` (the start of segment ``vi``) lies strictly between the
    anchors iff seg0 < vi <= seg1 in walk order.
    """
    seg0, _ = pos0
    seg1, _ = pos1
    nverts = len(verts)
    path = [pt0]
    if is_open:
        for vi in range(max(seg0 + 1, 0), min(seg1, nverts - 1) + 1):
            path.append(verts[vi])
    else:
        if pos1 > pos0:
            indices = range(seg0 + 1, seg1 + 1)
        else:  # wraps past vertex 0 (or a full loop back to the same segment)
            indices = list(range(seg0 + 1, nverts)) + list(range(0, seg1 + 1))
        for vi in indices:
            path.append(verts[vi % nverts])
    path.append(pt1)
    return [p for i, p in enumerate(path)
            if i == 0 or _dist(p, path[i - 1]) > 0.0]


def _crossing_record(under: dict, over: dict) -> tuple[CrossingRecord, int]:
    """CCW record from the two passages and the spec sign convention."""
    u_dir, o_dir = under["dir"], over["dir"]
    ends = [
        (under["edge_in"], (-u_dir[0], -u_dir[1])),
        (under["edge_out"], u_dir),
        (over["edge_in"], (-o_dir[0], -o_dir[1])),
        (over["edge_out"], o_dir),
    ]
    base = math.atan2(-u_dir[1], -u_dir[0])
    def angle_from_base(v):
        a = math.atan2(v[1], v[0]) - base
        while a < 0:
            a += TWO_PI
        return a
    ordered = sorted(ends, key=lambda item: angle_from_base(item[1]))
    rec = CrossingRecord(*(e for e, _ in ordered))
    sign = 1 if _cross(u_dir, o_dir) < 0 else -1
    return rec, sign


def _crossing_radii(geom, points: list[Point], segs) -> list[float]:
    radii = []
    for i, pt in enumerate(points):
        dmin = math.inf
        for j, other in enumerate(points):
            if j != i:
                dmin = min(dmin, _dist(pt, other))
        for comp in geom.components:
            for v in comp.vertices:
                dmin = min(dmin, _dist(pt, v))
        for _, _, p, q in segs:
            d = _point_segment_distance(pt, p, q)
            if d > geom.tolerance:   # skip the two incident segments
                dmin = min(dmin, d)
        radii.append(dmin / 4.0)
    return radii


# ----------------------------------------------------------------------
# geometric state resolution and the winding pair


def _trim(path: list[Point], r_start: Optional[float],
          r_end: Optional[float]) -> list[Point]:
    pts = list(path)
    if r_start is not None:
        d = _dist(pts[0], pts[1])
        f = r_start / d
        pts[0] = (pts[0][0] + f * (pts[1][0] - pts[0][0]),
                  pts[0][1] + f * (pts[1][1] - pts[0][1]))
    if r_end is not None:
        d = _dist(pts[-1], pts[-2])
        f = r_end / d
        pts[-1] = (pts[-1][0] + f * (pts[-2][0] - pts[-1][0]),
                   pts[-1][1] + f * (pts[-2][1] - pts[-1][1]))
    return pts


def _arc_polyline(layout: GeometricLayout, edge: int, forward: bool) -> list[Point]:
    path = layout.edge_paths[edge]
    c0 = layout.edge_start_crossing[edge]
    c1 = layout.edge_end_crossing[edge]
    r0 = layout.crossing_radius[c0] if c0 is not None else None
    r1 = layout.crossing_radius[c1] if c1 is not None else None
    pts = _trim(path, r0, r1)
    return pts if forward else list(reversed(pts))


def resolved_polylines(layout: GeometricLayout, res: Resolution):
    """(segment points, [circle points...]) of a geometric state resolution."""
    seg = []
    for edge, fwd in res.segment_arcs:
        seg.extend(_arc_polyline(layout, edge, fwd))
    circles = []
    for arcs in res.circle_arcs:
        pts: list[Point] = []
        for edge, fwd in arcs:
            pts.extend(_arc_polyline(layout, edge, fwd))
        circles.append(pts)
    return seg, circles


def _closed_gamma(open_pts: list[Point], shortcut: Sequence[Point]) -> list[Point]:
    """k (leg to head) followed by the reversed shortcut, deduplicated."""
    back = list(reversed([tuple(map(float, p)) for p in shortcut]))
    pts = list(open_pts)
    for p in back[1:-1]:
        pts.append(p)
    return pts


def shortcut_is_generic(layout: GeometricLayout,
                        shortcut: Sequence[Point]) -> bool:
    """Shortcut runs leg to head, transversal to the diagram, outside every
    crossing disk, and clear of all polyline vertices."""
    geom = layout.geom
    tol = geom.tolerance
    pts = [tuple(map(float, p)) for p in shortcut]
    if layout.leg is None or len(pts) < 2:
        return False
    if _dist(pts[0], layout.leg) > tol or _dist(pts[-1], layout.head) > tol:
        return False
    segs = geom.global_segments()
    try:
        for i in range(len(pts) - 1):
            a, b = pts[i], pts[i + 1]
            if _dist(a, b) <= tol:
                return False
            for _, _, p, q in segs:
                _crossing_hit(a, b, p, q, tol)
            # the shortcut may self-intersect but only transversally
            for k in range(i + 2, len(pts) - 1):
                _crossing_hit(a, b, pts[k], pts[k + 1], tol)
        # clearance from crossing disks and vertices
        for ci, cpt in enumerate(layout.crossing_points):
            r = layout.crossing_radius[ci]
            for k in range(len(pts) - 1):
                if _point_segment_distance(cpt, pts[k], pts[k + 1]) <= r:
                    return False
        for comp in geom.components:
            for v in comp.vertices:
                if _dist(v, layout.leg) <= tol or _dist(v, layout.head) <= tol:
                    continue
                for k in range(len(pts) - 1):
                    if _point_segment_distance(v, pts[k], pts[k + 1]) <= tol:
                        return False
        for v in pts[1:-1]:
            for _, _, p, q in segs:
                if _point_segment_distance(v, p, q) <= tol:
                    return False
    except DegeneracyError:
        return False
    return True


def default_shortcut(layout: GeometricLayout) -> list[Point]:
    """Deterministic generic shortcut: straight leg-to-head, then jittered
    midpoints until the genericity checks pass."""
    if layout.leg is None:
        raise ValidationError("closed diagram has no shortcut")
    leg, head = layout.leg, layout.head
    candidates = [[leg, head]]
    d = _sub(head, leg)
    n = _norm(d)
    if n == 0.0:
        raise DegeneracyError("leg and head coincide")
    normal = (-d[1] / n, d[0] / n)
    mid = ((leg[0] + head[0]) / 2.0, (leg[1] + head[1]) / 2.0)
    span = max(n, _diagram_span(layout.geom))
    for k in range(1, 40):
        off = span * 0.03 * k * (1 if k % 2 else -1)
        candidates.append([leg, (mid[0] + off * normal[0],
                                 mid[1] + off * normal[1]), head])
    for quarter in (0.25, 0.75):
        base = (leg[0] + quarter * d[0], leg[1] + quarter * d[1])
        for k in range(1, 20):
            off = span * 0.041 * k * (1 if k % 2 else -1)
            candidates.append([leg, (base[0] + off * normal[0],
                                     base[1] + off * normal[1]), head])
    for cand in candidates:
        if shortcut_is_generic(layout, cand):
            return cand
    raise DegeneracyError("no generic shortcut found")


def _diagram_span(geom: GeometricDiagram) -> float:
    xs = [v[0] for c in geom.components for v in c.vertices]
    ys = [v[1] for c in geom.components for v in c.vertices]
    return math.hypot(max(xs) - min(xs), max(ys) - min(ys))


def state_winding_pair(layout: GeometricLayout, shortcut: Sequence[Point],
                       s: State,
                       resolution: Optional[Resolution] = None) -> tuple[int, int]:
    """Normalized winding pair (delta at leg, delta at head) of a state."""
    if resolution is None:
        resolution = resolve(layout.pd, s)
    seg, _ = resolved_polylines(layout, resolution)
    gamma_s = _closed_gamma(seg, shortcut)
    k_pts = _open_component_points(layout)
    gamma = _closed_gamma(k_pts, shortcut)
    head_idx_s = len(seg) - 1
    head_idx = len(k_pts) - 1
    d_leg_x2 = winding_at_vertex_x2(gamma_s, 0) - winding_at_vertex_x2(gamma, 0)
    d_head_x2 = (winding_at_vertex_x2(gamma_s, head_idx_s)
                 - winding_at_vertex_x2(gamma, head_idx))
    if d_leg_x2 % 2 or d_head_x2 % 2:
        raise DegeneracyError("winding pair did not normalize to integers")
    return d_leg_x2 // 2, d_head_x2 // 2


def _open_component_points(layout: GeometricLayout) -> list[Point]:
    comp = layout.geom.components[_open_index(layout.geom)]
    return list(comp.vertices)


def state_surround_counts(layout: GeometricLayout, s: State,
                          resolution: Optional[Resolution] = None
                          ) -> tuple[int, int]:
    """(not surrounding, surrounding) circle counts w.r.t. the leg."""
    if resolution is None:
        resolution = resolve(layout.pd, s)
    _, circles = resolved_polylines(layout, resolution)
    f = sum(1 for c in circles if winding_off_curve_x2(c, layout.leg) != 0)
    return len(circles) - f, f


def lemma_head_leg_check(layout: GeometricLayout,
                         shortcut: Sequence[Point]) -> bool:
    """w_gamma(head) - w_gamma(leg) equals the signed crossing count of the
    shortcut over the knotoid strand (the open component)."""
    k_pts = _open_component_points(layout)
    gamma = _closed_gamma(k_pts, shortcut)
    lhs_x2 = (winding_at_vertex_x2(gamma, len(k_pts) - 1)
              - winding_at_vertex_x2(gamma, 0))
    alpha = [tuple(map(float, p)) for p in shortcut]
    rhs = algebraic_crossings(alpha, k_pts, layout.geom.tolerance)
    return lhs_x2 == 2 * rhs


def shortcut_trace(layout: GeometricLayout,
                   shortcut: Sequence[Point]) -> ShortcutTrace:
    """Combinatorial trace of a geometric shortcut: for every transversal
    intersection, the diagram edge carrying it and the sign of the diagram
    strand crossing the shortcut right to left."""
    alpha = [tuple(map(float, p)) for p in shortcut]
    tol = layout.geom.tolerance
    found = []
    for edge in sorted(layout.edge_paths):
        pts = list(layout.edge_paths[edge])
        closed_single = (layout.edge_start_crossing[edge] is None
                         and layout.edge_end_crossing[edge] is None
                         and edge not in layout.pd.open_component)
        if closed_single:
            pts = pts + [pts[0]]
        for j in range(len(pts) - 1):
            for i in range(len(alpha) - 1):
                hit = _crossing_hit(alpha[i], alpha[i + 1],
                                    pts[j], pts[j + 1], tol)
                if hit is None:
                    continue
                _, t_alpha, _ = hit
                d_a = _sub(alpha[i + 1], alpha[i])
                d_k = _sub(pts[j + 1], pts[j])
                sign = 1 if _cross(d_a, d_k) > 0 else -1
                found.append(((i, t_alpha), edge, sign))
    found.sort()
    return ShortcutTrace(tuple((edge, sign) for _, edge, sign in found))
