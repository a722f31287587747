"""Geographic primitives: points, great-circle distance, uniform grid index.

The grid index accelerates the small-radius vicinity queries used by the
historical fare estimator (100 m) and the place-density analysis (200 m).
Cells are square in degree space; a radius query scans the cell rows that
can contain matches and post-filters with the exact haversine distance, so
cell assignment never affects correctness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

EARTH_RADIUS_M = 6_371_000.0
#: metres per degree of latitude on the reference sphere
M_PER_DEG_LAT = EARTH_RADIUS_M * math.pi / 180.0


@dataclass(frozen=True)
class GeoPoint:
    lat: float
    lng: float

    def __post_init__(self) -> None:
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"lat out of range: {self.lat}")
        if not -180.0 <= self.lng <= 180.0:
            raise ValueError(f"lng out of range: {self.lng}")


def haversine(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance in metres on a sphere of radius 6,371,000 m."""
    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    dphi = phi2 - phi1
    dlmb = math.radians(b.lng - a.lng)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlmb / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


class SpatialIndex:
    """Immutable uniform-grid index over (GeoPoint, payload-id) pairs.

    ``radius_query`` returns exactly the ids whose points lie within the
    given haversine radius (boundary inclusive).  Longitude cell spans are
    widened per row using the row's worst-case latitude, so queries stay
    exact at any latitude and across the antimeridian.
    """

    def __init__(self, entries: Iterable[tuple[GeoPoint, Hashable]], cell_size_m: float = 100.0):
        if cell_size_m <= 0:
            raise ValueError("cell_size_m must be positive")
        self.cell_size_m = float(cell_size_m)
        self._dlat = self.cell_size_m / M_PER_DEG_LAT
        self._ncols = max(1, math.ceil(360.0 / self._dlat))
        cells: dict[tuple[int, int], list[tuple[GeoPoint, Hashable]]] = {}
        row_cols: dict[int, set[int]] = {}
        n = 0
        for point, payload in entries:
            cell = self._cell_of(point)
            cells.setdefault(cell, []).append((point, payload))
            row_cols.setdefault(cell[0], set()).add(cell[1])
            n += 1
        self._cells = cells
        self._row_cols = row_cols
        self._count = n

    def __len__(self) -> int:
        return self._count

    def _cell_of(self, p: GeoPoint) -> tuple[int, int]:
        row = math.floor((p.lat + 90.0) / self._dlat)
        col = math.floor((p.lng + 180.0) / self._dlat) % self._ncols
        return row, col

    def radius_query(self, center: GeoPoint, radius_m: float) -> set:
        """Payload ids of all points with haversine(point, center) <= radius_m."""
        if radius_m <= 0:
            raise ValueError("radius_m must be positive")
        out: set = set()
        if not self._cells:
            return out
        # great-circle distance bounds |dlat| by radius/M_PER_DEG_LAT exactly
        dlat_deg = radius_m / M_PER_DEG_LAT
        row_lo = math.floor((max(-90.0, center.lat - dlat_deg) + 90.0) / self._dlat)
        row_hi = math.floor((min(90.0, center.lat + dlat_deg) + 90.0) / self._dlat)
        sin_half = math.sin(min(math.pi / 2.0, radius_m / (2.0 * EARTH_RADIUS_M)))
        for row in range(row_lo, row_hi + 1):
            cols = self._row_cols.get(row)
            if not cols:
                continue
            for col in self._cols_for_row(row, center, sin_half):
                for point, payload in self._cells.get((row, col), ()):
                    if haversine(point, center) <= radius_m:
                        out.add(payload)
        return out

    def _cols_for_row(self, row: int, center: GeoPoint, sin_half: float) -> Iterable[int]:
        # worst-case |lat| across both the row band and the query centre
        band_lo = row * self._dlat - 90.0
        band_hi = band_lo + self._dlat
        worst = max(abs(band_lo), abs(band_hi), abs(center.lat))
        cos_min = math.cos(math.radians(min(worst, 90.0)))
        full_span = True
        if cos_min > 1e-12 and sin_half / cos_min < 1.0:
            # from the haversine identity: sin(dlng/2) <= sin(r/2R)/sqrt(cos a cos b)
            dlng_deg = math.degrees(2.0 * math.asin(sin_half / cos_min))
            span = math.ceil(dlng_deg / self._dlat) + 1
            full_span = 2 * span + 1 >= self._ncols
        if full_span:
            return sorted(self._row_cols.get(row, ()))
        col0 = math.floor((center.lng + 180.0) / self._dlat) % self._ncols
        return [(col0 + d) % self._ncols for d in range(-span, span + 1)]


def build_index(points: Sequence[GeoPoint], cell_size_m: float = 100.0) -> SpatialIndex:
    """Index a point list keyed by position, a common payload-id choice."""
    return SpatialIndex(((p, i) for i, p in enumerate(points)), cell_size_m)
