"""Flickr upload-date estimation from photo IDs.

Flickr IDs grow with upload time, so the upload date of a photo can be
read off the dates of photos with nearby IDs. An `AnchorIndex` holds those
observations; `estimate_upload_date` takes the most common date among the
k nearest public anchors, which stays correct when a few uploaders have
edited their displayed date.
"""

from __future__ import annotations

import bisect
import datetime as dt
import json
import os
import threading
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

__all__ = [
    "Anchor",
    "AnchorIndex",
    "Conflict",
    "CorruptIndex",
    "DateEstimate",
    "NoAnchors",
    "estimate_upload_date",
    "ingest_probe_results",
    "load_index",
    "plan_crawl",
    "save_index",
]

STATUSES = ("public", "private", "not_found")
SOURCES = ("scraped", "manual")
DEFAULT_K = 50


class NoAnchors(LookupError):
    pass


class CorruptIndex(ValueError):
    def __init__(self, path, line: int, reason: str):
        super().__init__(f"{path}:{line}: {reason}")
        self.path = path
        self.line = line
        self.reason = reason


@dataclass(frozen=True)
class Anchor:
    photo_id: int
    status: str
    date: dt.date | None = None
    time: dt.time | None = None
    source: str = "scraped"

    def __post_init__(self):
        if isinstance(self.photo_id, bool) or not isinstance(self.photo_id, int) \
                or self.photo_id < 1:
            raise ValueError(f"photo_id must be a positive integer, got {self.photo_id!r}")
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}")
        if (self.date is not None) != (self.status == "public"):
            raise ValueError("date must be present exactly when status is public")
        if self.time is not None and self.date is None:
            raise ValueError("time requires a date")

    def to_json(self) -> str:
        record: dict = {"id": self.photo_id}
        if self.date is not None:
            record["date"] = self.date.isoformat()
        if self.time is not None:
            record["time"] = self.time.strftime("%H:%M:%S")
        record["status"] = self.status
        record["source"] = self.source
        return json.dumps(record, separators=(",", ":"))

    @classmethod
    def from_record(cls, record: dict) -> "Anchor":
        if not isinstance(record, dict):
            raise ValueError("line is not a JSON object")
        extra = set(record) - {"id", "date", "time", "status", "source"}
        if extra:
            raise ValueError(f"unexpected keys {sorted(extra)}")
        for key in ("id", "status", "source"):
            if key not in record:
                raise ValueError(f"missing key {key!r}")
        date = time = None
        if "date" in record:
            if not isinstance(record["date"], str) or len(record["date"]) != 10:
                raise ValueError("date must be YYYY-MM-DD")
            date = dt.date.fromisoformat(record["date"])
        if "time" in record:
            if not isinstance(record["time"], str) or len(record["time"]) != 8:
                raise ValueError("time must be HH:MM:SS")
            time = dt.time.fromisoformat(record["time"])
        return cls(photo_id=record["id"], status=record["status"], date=date,
                   time=time, source=record["source"])


@dataclass(frozen=True)
class Conflict:
    existing: Anchor
    incoming: Anchor
    resolution: str  # "kept" or "replaced"


class AnchorIndex:
    """Anchors sorted by photo ID, unique per ID.

    Readers always see a consistent snapshot; `ingest` swaps in new lists
    under a lock, so one writer can run alongside any number of readers.
    """

    def __init__(self, anchors: Iterable[Anchor] = ()):
        by_id: dict[int, Anchor] = {}
        for a in anchors:
            if a.photo_id in by_id:
                raise ValueError(f"duplicate photo_id {a.photo_id}")
            by_id[a.photo_id] = a
        self._lock = threading.Lock()
        self._publish(by_id)

    def _publish(self, by_id: dict[int, Anchor]) -> None:
        anchors = [by_id[i] for i in sorted(by_id)]
        public = [a for a in anchors if a.status == "public"]
        # one tuple assignment keeps readers consistent
        self._state = (anchors, [a.photo_id for a in anchors],
                       public, [a.photo_id for a in public])

    @property
    def anchors(self) -> list[Anchor]:
        return list(self._state[0])

    def __len__(self) -> int:
        return len(self._state[0])

    def __iter__(self) -> Iterator[Anchor]:
        return iter(self._state[0])

    def __contains__(self, photo_id: int) -> bool:
        ids = self._state[1]
        i = bisect.bisect_left(ids, photo_id)
        return i < len(ids) and ids[i] == photo_id

    def __eq__(self, other) -> bool:
        if not isinstance(other, AnchorIndex):
            return NotImplemented
        return self._state[0] == other._state[0]

    def get(self, photo_id: int) -> Anchor | None:
        anchors, ids = self._state[0], self._state[1]
        i = bisect.bisect_left(ids, photo_id)
        if i < len(ids) and ids[i] == photo_id:
            return anchors[i]
        return None

    def public(self) -> tuple[list[Anchor], list[int]]:
        _, _, public, public_ids = self._state
        return public, public_ids

    def ingest(self, results: Iterable[Anchor]) -> list[Conflict]:
        """Merge probe results.

        A result that disagrees with a stored anchor is reported as a
        conflict. The stored anchor is kept unless the result is a manual
        correction.
        """
        conflicts: list[Conflict] = []
        with self._lock:
            by_id = {a.photo_id: a for a in self._state[0]}
            for new in results:
                old = by_id.get(new.photo_id)
                if old is None:
                    by_id[new.photo_id] = new
                    continue
                if (old.date, old.status, old.time) == (new.date, new.status, new.time):
                    if new.source == "manual":
                        by_id[new.photo_id] = new
                    continue
                if new.source == "manual":
                    by_id[new.photo_id] = new
                    conflicts.append(Conflict(old, new, "replaced"))
                else:
                    conflicts.append(Conflict(old, new, "kept"))
            self._publish(by_id)
        return conflicts


def ingest_probe_results(index: AnchorIndex, results: Iterable[Anchor]
                         ) -> tuple[AnchorIndex, list[Conflict]]:
    conflicts = index.ingest(results)
    return index, conflicts


@dataclass(frozen=True)
class DateEstimate:
    photo_id: int
    date: dt.date
    confidence: float
    support: int
    consulted: int
    window: tuple[int, int]

    def to_dict(self) -> dict:
        return {
            "photo_id": self.photo_id,
            "date": self.date.isoformat(),
            "confidence": self.confidence,
            "support": self.support,
            "consulted": self.consulted,
            "window": list(self.window),
        }


def _nearest(ids: list[int], photo_id: int, k: int) -> tuple[int, int]:
    # Grow [lo, hi) outward from the insertion point; equal distances
    # prefer the lower ID.
    hi = bisect.bisect_left(ids, photo_id)
    lo = hi
    n = len(ids)
    while hi - lo < k and (lo > 0 or hi < n):
        if lo == 0:
            hi += 1
        elif hi == n:
            lo -= 1
        elif photo_id - ids[lo - 1] <= ids[hi] - photo_id:
            lo -= 1
        else:
            hi += 1
    return lo, hi


def estimate_upload_date(photo_id: int, index: AnchorIndex, k: int = DEFAULT_K) -> DateEstimate:
    """Most common upload date among the `k` public anchors nearest `photo_id`.

    Ties between equally common dates go to the date whose closest anchor
    is nearest the query.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    public, ids = index.public()
    if not public:
        raise NoAnchors("index holds no public anchors")
    lo, hi = _nearest(ids, photo_id, k)
    chosen = public[lo:hi]

    counts = Counter(a.date for a in chosen)
    closest: dict[dt.date, tuple[int, int]] = {}
    for a in chosen:
        key = (abs(a.photo_id - photo_id), a.photo_id)
        if a.date not in closest or key < closest[a.date]:
            closest[a.date] = key
    best = max(counts.values())
    date = min((d for d, c in counts.items() if c == best), key=lambda d: closest[d])
    return DateEstimate(
        photo_id=photo_id,
        date=date,
        confidence=best / len(chosen),
        support=best,
        consulted=len(chosen),
        window=(chosen[0].photo_id, chosen[-1].photo_id),
    )


def plan_crawl(center_id: int, window: int, stride: int = 1,
               index: AnchorIndex | None = None, direction: str = "both") -> list[int]:
    """IDs to probe around `center_id`, nearest first, skipping known ones.

    `direction` limits the plan to IDs above ("up") or below ("down") the
    center; the center itself is always included unless already indexed.
    """
    if stride < 1:
        raise ValueError("stride must be >= 1")
    if window < 0:
        raise ValueError("window must be >= 0")
    if direction not in ("both", "up", "down"):
        raise ValueError(f"unknown direction {direction!r}")
    offsets = [0]
    for step in range(stride, window + 1, stride):
        if direction in ("both", "down"):
            offsets.append(-step)
        if direction in ("both", "up"):
            offsets.append(step)
    plan = []
    for off in offsets:
        pid = center_id + off
        if pid < 1 or (index is not None and pid in index):
            continue
        plan.append(pid)
    return plan


def save_index(index: AnchorIndex, path) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        for anchor in index:
            fh.write(anchor.to_json())
            fh.write("\n")
    os.replace(tmp, path)


def load_index(path) -> AnchorIndex:
    anchors = []
    seen: set[int] = set()
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                anchor = Anchor.from_record(json.loads(line))
            except (ValueError, TypeError) as exc:
                raise CorruptIndex(path, lineno, str(exc)) from None
            if anchor.photo_id in seen:
                raise CorruptIndex(path, lineno, f"duplicate id {anchor.photo_id}")
            seen.add(anchor.photo_id)
            anchors.append(anchor)
    return AnchorIndex(anchors)
