"""Event types, event records and the shared event table format."""
from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence

from ._util import TextSource, iter_records, natural_key, open_lines


class EventType(str, Enum):
    CONTINUING = "continuing"
    SHRINKING = "shrinking"
    GROWING = "growing"
    SPLITTING = "splitting"
    MERGING = "merging"
    DISSOLVING = "dissolving"
    FORMING = "forming"

    @property
    def short(self) -> str:
        """Verb form used in chain tables (``form``, ``grow``, ...)."""
        return _SHORT[self]

    @classmethod
    def parse(cls, text: str) -> "EventType":
        text = text.strip().lower()
        for member in cls:
            if text in (member.value, member.short):
                return member
        if text in _ALIASES:
            return _ALIASES[text]
        raise ValueError(f"unknown event type {text!r}")

    def __str__(self) -> str:
        return self.value


_SHORT = {
    EventType.CONTINUING: "continue",
    EventType.SHRINKING: "shrink",
    EventType.GROWING: "grow",
    EventType.SPLITTING: "split",
    EventType.MERGING: "merge",
    EventType.DISSOLVING: "dissolve",
    EventType.FORMING: "form",
}

# names used by the other taxonomies
_ALIASES = {
    "growth": EventType.GROWING,
    "contraction": EventType.SHRINKING,
    "birth": EventType.FORMING,
    "death": EventType.DISSOLVING,
    "survive": EventType.CONTINUING,
}


@dataclass(frozen=True)
class EventRecord:
    type: EventType
    frames: tuple[int, int]
    sources: tuple = ()
    targets: tuple = ()
    measures: tuple[Optional[float], Optional[float]] = (None, None)
    method: str = "ged"

    def __post_init__(self):
        object.__setattr__(self, "sources", tuple(self.sources))
        object.__setattr__(self, "targets", tuple(self.targets))
        i, j = self.frames
        if j != i + 1:
            raise ValueError(f"events link consecutive timeframes, got {self.frames}")
        if self.type is EventType.DISSOLVING:
            ok = bool(self.sources) and not self.targets
        elif self.type is EventType.FORMING:
            ok = bool(self.targets) and not self.sources
        else:
            ok = bool(self.sources) and bool(self.targets)
        if not ok:
            raise ValueError(
                f"{self.type.value} event has sources={self.sources!r} targets={self.targets!r}"
            )

    def sort_key(self) -> tuple:
        return (
            self.frames,
            tuple(natural_key(s) for s in self.sources),
            tuple(natural_key(t) for t in self.targets),
            self.type.value,
        )

    def key(self) -> tuple:
        """Identity used when comparing recovered events with planted ones."""
        return (self.frames, self.type, frozenset(self.sources), frozenset(self.targets))

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "frame_i": self.frames[0],
            "frame_j": self.frames[1],
            "event": self.type.value,
            "sources": list(self.sources),
            "targets": list(self.targets),
            "I12": self.measures[0],
            "I21": self.measures[1],
        }


EVENT_COLUMNS = ("method", "frame_i", "frame_j", "event", "sources", "targets", "I12", "I21")


def _fmt_measure(x: Optional[float]) -> str:
    return "NA" if x is None else f"{x:.6f}"


def _fmt_ids(ids: Sequence) -> str:
    return ";".join(str(i) for i in ids) if ids else "-"


def format_events(events: Iterable[EventRecord]) -> str:
    lines = ["\t".join(EVENT_COLUMNS) + "\n"]
    for ev in events:
        row = (
            ev.method,
            str(ev.frames[0]),
            str(ev.frames[1]),
            ev.type.value,
            _fmt_ids(ev.sources),
            _fmt_ids(ev.targets),
            _fmt_measure(ev.measures[0]),
            _fmt_measure(ev.measures[1]),
        )
        lines.append("\t".join(row) + "\n")
    return "".join(lines)


def events_to_json(events: Iterable[EventRecord]) -> str:
    return json.dumps([ev.to_dict() for ev in events], indent=2, sort_keys=True) + "\n"


def read_events(source: TextSource) -> list[EventRecord]:
    """Parse an event table written by :func:`format_events`."""
    out = []
    with open_lines(source) as lines:
        for lineno, fields in iter_records(lines):
            if fields[0] == "method":
                continue
            if len(fields) != len(EVENT_COLUMNS):
                raise ValueError(f"line {lineno}: expected {len(EVENT_COLUMNS)} columns, got {len(fields)}")
            method, fi, fj, ev, src, tgt, m1, m2 = fields
            out.append(
                EventRecord(
                    type=EventType.parse(ev),
                    frames=(int(fi), int(fj)),
                    sources=() if src == "-" else tuple(src.split(";")),
                    targets=() if tgt == "-" else tuple(tgt.split(";")),
                    measures=(None if m1 == "NA" else float(m1), None if m2 == "NA" else float(m2)),
                    method=method,
                )
            )
    return out


def sort_events(events: Iterable[EventRecord]) -> list[EventRecord]:
    return sorted(events, key=EventRecord.sort_key)
