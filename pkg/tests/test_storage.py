import threading
from datetime import datetime

import pytest

from cabfare.storage import FeedbackStore, QueryLog, StorageFailure

NOW = datetime(2016, 2, 9, 12, 0)


class TestQueryLog:
    def test_concurrent_appends_never_tear(self, tmp_path):
        log = QueryLog(tmp_path / "log.jsonl")

        def write_batch(worker):
            for i in range(50):
                log.append(
                    {
                        "id": f"w{worker}-{i}",
                        "city": "london",
                        "submitted_at": NOW.isoformat(),
                        "savings_minor": i,
                        "currency": "GBP",
                        "padding": "x" * 200,
                    }
                )

        threads = [threading.Thread(target=write_batch, args=(w,)) for w in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        records = list(log.records())  # json.loads fails loudly on a torn line
        assert len(records) == 400
        assert len({r["id"] for r in records}) == 400

    def test_find_returns_latest(self, tmp_path):
        log = QueryLog(tmp_path / "log.jsonl")
        assert log.find("missing") is None
        log.append({"id": "q1", "winner": "a"})
        log.append({"id": "q1", "winner": "b"})
        assert log.find("q1")["winner"] == "b"

    def test_append_failure_raises_storage_failure(self, tmp_path):
        blocker = tmp_path / "blocker"
        blocker.write_text("")
        log = QueryLog(blocker / "log.jsonl")  # parent is a file: mkdir fails
        with pytest.raises(StorageFailure):
            log.append({"id": "x"})


class TestFeedbackStore:
    def test_rejects_empty_text(self, tmp_path):
        store = FeedbackStore(tmp_path / "fb.jsonl")
        with pytest.raises(ValueError):
            store.add(user_id="u", text="   ", created_at=NOW)

    def test_optional_fields_roundtrip(self, tmp_path):
        store = FeedbackStore(tmp_path / "fb.jsonl")
        fid = store.add(
            user_id="u",
            text="estimate 38, meter said 52",
            created_at=NOW,
            actual_fare_minor=5200,
            currency="USD",
            query_id="q9",
            deviation_minor=1400,
        )
        (record,) = list(store.records())
        assert record["id"] == fid
        assert record["deviation_minor"] == 1400
        assert record["query_id"] == "q9"
