"""Tiny gazetteer geocoder.

Matches free-text input against a per-city list of named places using
case-insensitive substring search, ranked by (match position, name length,
name).  A plain CSV (name, lat, lng) is the only data source; any address
database can be exported into that shape.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .geo import GeoPoint

MAX_RESULTS = 5


@dataclass(frozen=True)
class GazetteerEntry:
    name: str
    location: GeoPoint

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("gazetteer entry needs a name")


class Gazetteer:
    def __init__(self, entries: Iterable[GazetteerEntry]):
        self.entries = tuple(entries)

    @classmethod
    def from_csv(cls, path: str | Path) -> "Gazetteer":
        entries = []
        with open(path, newline="") as handle:
            for row in csv.DictReader(handle):
                entries.append(
                    GazetteerEntry(
                        name=row["name"].strip(),
                        location=GeoPoint(float(row["lat"]), float(row["lng"])),
                    )
                )
        return cls(entries)

    def search(self, query: str, limit: int = MAX_RESULTS) -> list[GazetteerEntry]:
        """Ranked substring matches; earlier, shorter, then lexicographic names win."""
        q = query.strip().lower()
        if not q:
            raise ValueError("empty query")
        ranked = []
        for entry in self.entries:
            pos = entry.name.lower().find(q)
            if pos >= 0:
                ranked.append((pos, len(entry.name), entry.name, entry))
        ranked.sort(key=lambda item: item[:3])
        return [entry for *_rank, entry in ranked[:limit]]
