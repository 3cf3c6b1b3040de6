"""Coordinate-geometry check of the tile areas used by the packing model.

Each representative tile is rebuilt from disc-centre coordinates (vertices
sit on centres of touching discs) and measured with the shoelace formula,
so the closed-form areas of :mod:`breathkit.packing` get an independent
second route.  Three families exist:

* ``SQUARE`` - a 2x2-disc square whose middle column slides up; four
  parallelograms with angle ``pi/2 - alpha``; valid for alpha in [0, pi/6].
* ``HEX30`` - parallelogram spanned by two contact vectors at +/-alpha; four
  parallelograms with angle ``2 alpha``; valid for alpha in [pi/6, pi/3].
* ``HEX60`` - two zigzag rows stacked along a contact vector at
  ``alpha + pi/3``; four equilateral triangles plus two parallelograms with
  angle ``2 (pi/3 - alpha)``; valid for alpha in [0, pi/6].

Lengths are dimensional (``r0 = 1`` by default) and only the comparison with
the model divides by ``4 r0**2``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import shapely
from scipy.spatial import cKDTree
from scipy.stats import qmc
from shapely.affinity import translate
from shapely.geometry import LineString, Point, Polygon
from shapely.ops import unary_union

from .errors import DegeneratePolygonError, DomainError, InputValidationError
from .packing import PackingKind, PackingScenario, body_area_tilde, packing_angle, transition_index

__all__ = [
    "TileSpec",
    "TileGeometry",
    "OracleResult",
    "TessellationReport",
    "polygon_area",
    "build_tile",
    "tile_for_state",
    "oracle_check",
    "tessellation_check",
    "disc_coverage_exact",
    "disc_coverage_qmc",
    "tile_to_json",
]

Point2 = Tuple[float, float]

_PI_6 = math.pi / 6
_PI_3 = math.pi / 3
_RANGES = {
    PackingKind.SQUARE: (0.0, _PI_6),
    PackingKind.HEX30: (_PI_6, _PI_3),
    PackingKind.HEX60: (0.0, _PI_6),
}
_ANGLE_SLACK = 1e-12


def polygon_area(vertices: Sequence[Point2]) -> float:
    """Absolute shoelace area of a simple polygon."""
    pts = np.asarray(vertices, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 3 or pts.shape[1] != 2:
        raise DegeneratePolygonError("a polygon needs at least 3 two-dimensional vertices")
    x, y = pts[:, 0], pts[:, 1]
    twice = np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))
    area = abs(float(twice)) / 2.0
    scale = float(np.max(np.abs(pts))) or 1.0
    if area <= 1e-14 * scale * scale:
        raise DegeneratePolygonError("polygon has zero area")
    return area


@dataclass(frozen=True)
class TileSpec:
    """Tile family, packing angle and radii.

    ``centre_spacing_h`` is the horizontal distance between neighbouring
    columns of centres.  When given it must equal ``2 R cos(alpha)`` (discs
    in contact); when omitted it is derived from that relation.
    """

    kind: PackingKind
    alpha: float
    radius: float = 1.0
    r0: float = 1.0
    centre_spacing_h: Optional[float] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", PackingKind.parse(self.kind))
        if not (self.radius > 0 and self.r0 > 0):
            raise InputValidationError("radii must be positive")
        if self.radius < self.r0 * (1 - 1e-12):
            raise InputValidationError("swollen radius cannot be below the initial radius")
        contact = 2.0 * self.radius * math.cos(self.alpha)
        if self.centre_spacing_h is None:
            object.__setattr__(self, "centre_spacing_h", contact)
        elif abs(self.centre_spacing_h - contact) > 1e-12 * self.radius:
            raise InputValidationError(
                f"centre spacing {self.centre_spacing_h!r} does not put discs of radius "
                f"{self.radius!r} in contact at alpha={self.alpha!r}"
            )


@dataclass
class TileGeometry:
    kind: PackingKind
    alpha: float
    radius: float
    vertices: List[Point2]
    lattice: Tuple[Point2, Point2]
    disc_centres: List[Point2] = field(default_factory=list)
    disc_count_inside: float = 0.0

    @property
    def polygon(self) -> Polygon:
        return Polygon(self.vertices)

    @property
    def area(self) -> float:
        return polygon_area(self.vertices)

    def neighbourhood_centres(self, reach: int = 3) -> np.ndarray:
        """Disc centres of the packing around the tile."""
        return _packing_centres(self.kind, self.alpha, self.radius, reach)


def _contact(radius: float, angle: float) -> np.ndarray:
    return 2.0 * radius * np.array([math.cos(angle), math.sin(angle)])


def _packing_centres(kind: PackingKind, alpha: float, radius: float, reach: int) -> np.ndarray:
    d = 2.0 * radius * math.cos(alpha)
    h = 2.0 * radius * math.sin(alpha)
    idx = range(-2 * reach, 2 * reach + 1)
    pts = []
    if kind is PackingKind.SQUARE:
        for j in idx:
            for i in idx:
                pts.append((j * d, (j % 2) * h + 2.0 * radius * i))
    elif kind is PackingKind.HEX30:
        a, b = _contact(radius, alpha), _contact(radius, -alpha)
        for i in idx:
            for j in idx:
                pts.append(tuple(i * a + j * b))
    else:
        t = _contact(radius, alpha + _PI_3)
        for k in idx:
            for m in idx:
                pts.append((k * d + m * t[0], (k % 2) * h + m * t[1]))
    return np.asarray(pts)


def build_tile(spec: TileSpec, count_discs: bool = True) -> TileGeometry:
    """Vertices (counter-clockwise, on disc centres) of the representative tile."""
    lo, hi = _RANGES[spec.kind]
    alpha = spec.alpha
    if not (lo - _ANGLE_SLACK <= alpha <= hi + _ANGLE_SLACK):
        raise DomainError(
            f"{spec.kind.value} tile needs alpha in [{lo:.6g}, {hi:.6g}], got {alpha!r}"
        )
    r = spec.radius
    d = spec.centre_spacing_h
    h = 2.0 * r * math.sin(alpha)

    if spec.kind is PackingKind.SQUARE:
        verts = [
            (0.0, 0.0), (d, h), (2 * d, 0.0), (2 * d, 2 * r),
            (2 * d, 4 * r), (d, 4 * r + h), (0.0, 4 * r), (0.0, 2 * r),
        ]
        lattice = ((2 * d, 0.0), (0.0, 4 * r))
    elif spec.kind is PackingKind.HEX30:
        a, b = _contact(r, alpha), _contact(r, -alpha)
        corners = [np.zeros(2), b, 2 * b, 2 * b + a, 2 * b + 2 * a, b + 2 * a, 2 * a, a]
        verts = [tuple(map(float, p)) for p in corners]
        lattice = (tuple(map(float, 2 * a)), tuple(map(float, 2 * b)))
    else:
        t = _contact(r, alpha + _PI_3)
        row = [np.array([0.0, 0.0]), np.array([d, h]), np.array([2 * d, 0.0])]
        corners = row + [row[2] + t, row[2] + 2 * t, row[1] + 2 * t, row[0] + 2 * t, row[0] + t]
        verts = [tuple(map(float, p)) for p in corners]
        lattice = ((2 * d, 0.0), tuple(map(float, 2 * t)))

    tile = TileGeometry(spec.kind, alpha, r, verts, lattice)
    if count_discs:
        count, centres = disc_coverage_exact(tile)
        tile.disc_centres = centres
        tile.disc_count_inside = count
    return tile


def _interior_angle(verts: np.ndarray, i: int) -> float:
    prev_, cur, next_ = verts[i - 1], verts[i], verts[(i + 1) % len(verts)]
    u, v = next_ - cur, prev_ - cur
    ang = math.atan2(u[0] * v[1] - u[1] * v[0], float(np.dot(u, v)))
    # counter-clockwise polygon: interior lies to the left of each edge
    return ang if ang > 0 else ang + 2 * math.pi


def disc_coverage_exact(tile: TileGeometry, tol: float = 1e-9):
    """Number of disc areas inside the tile by centre counting.

    A disc centred strictly inside counts 1, one centred on an edge counts
    1/2 and one on a vertex counts its interior angle over ``2 pi``.  This
    is exact only when no disc crosses an edge its centre is not on; that
    premise is checked and ``DegeneratePolygonError`` raised otherwise.
    Returns ``(count, centres_with_positive_coverage)``.
    """
    verts = np.asarray(tile.vertices, dtype=float)
    if Polygon(verts).exterior.is_ccw is False:
        verts = verts[::-1]
    poly = Polygon(verts)
    r = tile.radius
    tol_abs = tol * r
    edges = [LineString([verts[i], verts[(i + 1) % len(verts)]]) for i in range(len(verts))]
    count = 0.0
    kept: List[Point2] = []
    for c in tile.neighbourhood_centres():
        p = Point(c)
        dist_boundary = poly.exterior.distance(p)
        if dist_boundary >= r - tol_abs:
            if poly.contains(p):
                count += 1.0
                kept.append((float(c[0]), float(c[1])))
            continue
        if dist_boundary > tol_abs:
            raise DegeneratePolygonError(f"disc at {tuple(c)} straddles the tile boundary")
        for e in edges:
            gap = e.distance(p)
            if tol_abs < gap < r - tol_abs:
                raise DegeneratePolygonError(f"disc at {tuple(c)} crosses a non-incident edge")
        vi = np.flatnonzero(np.hypot(*(verts - c).T) <= tol_abs)
        frac = _interior_angle(verts, int(vi[0])) / (2 * math.pi) if len(vi) else 0.5
        count += frac
        kept.append((float(c[0]), float(c[1])))
    return count, kept


def disc_coverage_qmc(tile: TileGeometry, samples: int = 2**20, seed: int = 0) -> float:
    """Disc areas inside the tile, estimated with scrambled Sobol points."""
    poly = tile.polygon
    xmin, ymin, xmax, ymax = poly.bounds
    m = int(math.ceil(math.log2(samples)))
    pts = qmc.Sobol(d=2, scramble=True, seed=seed).random_base2(m)
    pts = qmc.scale(pts, [xmin, ymin], [xmax, ymax])
    in_tile = shapely.contains_xy(poly, pts[:, 0], pts[:, 1])
    centres = tile.neighbourhood_centres()
    dist, _ = cKDTree(centres).query(pts)
    in_disc = dist <= tile.radius
    box = (xmax - xmin) * (ymax - ymin)
    covered = box * np.count_nonzero(in_tile & in_disc) / len(pts)
    return covered / (math.pi * tile.radius**2)


@dataclass(frozen=True)
class OracleResult:
    formula_area: float
    oracle_area: float
    rel_error: float
    kind: PackingKind
    alpha: float
    n: int


def _completed_transitions(xi: float, alpha0: float) -> int:
    # Transitions end at xi = 2**k cos(alpha0); closed-form count of those
    # strictly below xi, independent of the halving loop in the model.
    ratio = xi / math.cos(alpha0)
    if ratio <= 2.0:
        return 0
    return max(0, math.ceil(math.log2(ratio)) - 1)


def tile_for_state(xi: float, scenario: PackingScenario, r0: float = 1.0) -> TileSpec:
    """Tile of the packing reached at swelling ``xi``.

    The horizontal centre spacing is fixed within a transition family, so
    the packing angle follows from ``d_h = 2 R cos(alpha)``.
    """
    if xi < 1:
        raise DomainError(f"swelling factor must be >= 1, got {xi!r}")
    m = _completed_transitions(xi, scenario.alpha0)
    radius = xi * r0
    d_h = (2.0**m) * 2.0 * r0 * math.cos(scenario.alpha0)
    alpha = math.acos(min(1.0, d_h / (2.0 * radius)))
    if alpha >= _PI_6:
        kind = PackingKind.HEX30
    elif scenario.is_square and m == 0:
        kind = PackingKind.SQUARE
    else:
        kind = PackingKind.HEX60
    return TileSpec(kind, alpha, radius, r0, 2.0 * radius * math.cos(alpha))


def oracle_check(xi: float, scenario: PackingScenario, r0: float = 1.0) -> OracleResult:
    spec = tile_for_state(xi, scenario, r0)
    tile = build_tile(spec, count_discs=False)
    oracle = tile.area / (4.0 * r0 * r0)
    n = transition_index(xi, scenario.alpha0)
    alpha = packing_angle(xi, scenario.alpha0, n)
    formula = body_area_tilde(xi, alpha, scenario, n)
    return OracleResult(formula, oracle, abs(oracle - formula) / abs(formula), spec.kind, spec.alpha, n)


@dataclass
class TessellationReport:
    ok: bool
    copies: int
    tile_area: float
    union_area: float
    overlap_area: float
    min_centre_distance: float
    offending: Optional[tuple] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def tessellation_check(
    tile: Union[TileSpec, TileGeometry], copies: int = 3, rtol: float = 1e-9
) -> TessellationReport:
    """Translate the tile over a ``copies x copies`` block of its lattice.

    Passes when the copies neither overlap nor leave holes (area
    bookkeeping plus a containment test on the central copy) and no two
    disc centres sit closer than ``2 R``.
    """
    if copies < 2:
        raise InputValidationError(f"copies must be >= 2, got {copies!r}")
    if isinstance(tile, TileSpec):
        tile = build_tile(tile)
    base = tile.polygon
    area = polygon_area(tile.vertices)
    (ax, ay), (bx, by) = tile.lattice
    shifts = [(i * ax + j * bx, i * ay + j * by) for i in range(copies) for j in range(copies)]
    # a common coordinate grid makes shared edges coincide exactly
    grid = 1e-9 * tile.radius
    polys = [shapely.set_precision(translate(base, dx, dy), grid) for dx, dy in shifts]
    slack = rtol * area

    overlap = 0.0
    offending = None
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            inter = polys[i].intersection(polys[j]).area
            overlap += inter
            if inter > slack and offending is None:
                offending = ("tiles", shifts[i], shifts[j])
    union = unary_union(polys)
    union_area = union.area
    reason = ""
    ok = True
    if offending is not None:
        ok, reason = False, "tiles overlap"
    elif abs(union_area - copies * copies * area) > copies * copies * slack:
        ok, reason = False, "union area differs from the sum of tile areas"
    elif union.geom_type != "Polygon" or any(
        Polygon(ring).area > slack for ring in union.interiors
    ):
        ok, reason = False, "gap between copies"
    elif copies >= 3:
        mid = polys[(copies // 2) * copies + copies // 2]
        uncovered = mid.buffer(1e-3 * tile.radius).difference(union).area
        if uncovered > slack:
            ok, reason = False, "gap around the central copy"

    centres = np.asarray(
        [(cx + dx, cy + dy) for dx, dy in shifts for cx, cy in tile.disc_centres]
    )
    min_dist = math.inf
    if len(centres) > 1:
        tree = cKDTree(centres)
        # duplicates are one disc shared by neighbouring copies
        same = 1e-9 * tile.radius
        dist, idx = tree.query(centres, k=min(len(centres), 8))
        for row_d, row_i, k in zip(dist, idx, range(len(centres))):
            for dd, jj in zip(row_d[1:], row_i[1:]):
                if dd > same:
                    min_dist = min(min_dist, float(dd))
                    if dd < 2 * tile.radius - 1e-12 * max(1.0, tile.radius) and ok:
                        ok, reason = False, "discs overlap"
                        offending = ("discs", tuple(centres[k]), tuple(centres[jj]))
                    break
    return TessellationReport(ok, copies, area, union_area, overlap, min_dist, offending, reason)


def tile_to_json(tile: TileGeometry) -> str:
    """Tile geometry as a small JSON document for external viewers."""
    return json.dumps(
        {
            "kind": tile.kind.value,
            "alpha": tile.alpha,
            "radius": tile.radius,
            "vertices": [list(v) for v in tile.vertices],
            "lattice": [list(v) for v in tile.lattice],
            "centres": [list(c) for c in tile.disc_centres],
            "disc_count_inside": tile.disc_count_inside,
        }
    )
