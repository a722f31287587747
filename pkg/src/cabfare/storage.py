"""Append-only JSON-lines persistence for query comparisons and feedback.

One JSON object per line keeps the logs replayable, diff-able and portable.
Appends are serialized behind a lock (single writer, many readers); readers
re-scan the file, so a restarted process sees exactly the persisted history.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Iterator

from .money import Money, mean_minor


class StorageFailure(Exception):
    """Record could not be durably appended."""


class _JsonlLog:
    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()

    def append(self, record: dict) -> None:
        line = json.dumps(record, separators=(",", ":"))
        try:
            with self._lock:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with open(self.path, "a") as handle:
                    handle.write(line + "\n")
                    handle.flush()
        except OSError as exc:
            raise StorageFailure(str(exc)) from exc

    def records(self) -> Iterator[dict]:
        if not self.path.exists():
            return
        with open(self.path) as handle:
            for line in handle:
                line = line.strip()
                if line:
                    yield json.loads(line)


@dataclass(frozen=True)
class SavingsSummary:
    query_count: int
    mean_savings: Money
    total_savings: Money


class QueryLog(_JsonlLog):
    """Persisted journey comparisons, one record per completed query."""

    def find(self, query_id: str) -> dict | None:
        latest = None
        for record in self.records():
            if record.get("id") == query_id:
                latest = record
        return latest

    def savings_summary(
        self,
        city: str,
        currency: str,
        start: datetime | None = None,
        end: datetime | None = None,
    ) -> SavingsSummary:
        """Mean and total of persisted savings for a city over a time range."""
        amounts: list[int] = []
        for record in self.records():
            if record.get("city") != city:
                continue
            stamp = datetime.fromisoformat(record["submitted_at"])
            if start is not None and stamp < start:
                continue
            if end is not None and stamp > end:
                continue
            amounts.append(int(record["savings_minor"]))
        if not amounts:
            zero = Money(0, currency)
            return SavingsSummary(query_count=0, mean_savings=zero, total_savings=zero)
        return SavingsSummary(
            query_count=len(amounts),
            mean_savings=Money(mean_minor(amounts), currency),
            total_savings=Money(sum(amounts), currency),
        )


class FeedbackStore(_JsonlLog):
    """User feedback, optionally tied to a logged query and an actual fare."""

    def add(
        self,
        user_id: str,
        text: str,
        created_at: datetime,
        actual_fare_minor: int | None = None,
        currency: str | None = None,
        query_id: str | None = None,
        deviation_minor: int | None = None,
    ) -> str:
        if not text or not text.strip():
            raise ValueError("feedback text must be non-empty")
        feedback_id = uuid.uuid4().hex
        record = {
            "id": feedback_id,
            "user_id": user_id,
            "text": text,
            "created_at": created_at.isoformat(),
        }
        if actual_fare_minor is not None:
            record["actual_fare_minor"] = actual_fare_minor
            if currency:
                record["currency"] = currency
        if query_id is not None:
            record["query_id"] = query_id
        if deviation_minor is not None:
            record["deviation_minor"] = deviation_minor
        self.append(record)
        return feedback_id
