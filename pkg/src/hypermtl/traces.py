"""Finite timed words and the text formats for traces and trace sets.

A timed word is a strictly increasing sequence of timestamped letters.
Letters are tuples of proposition sets, one component per track, so a
plain trace is the arity-1 case and synchronized products reuse the
same type.  Timestamps are exact rationals; time 0 is a legal event
time but evaluation anchors at 0 whether or not an event sits there.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from .formulas import EPSILON_PROP

Letter = tuple[frozenset[str], ...]

EPSILON_SET = frozenset({EPSILON_PROP})


class TraceFormatError(ValueError):
    """Raised on malformed trace or trace-set text."""


@dataclass(frozen=True)
class TimedWord:
    arity: int
    events: tuple[tuple[Letter, Fraction], ...]

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise ValueError("timed words need at least one track")
        prev: Optional[Fraction] = None
        for letter, time in self.events:
            if len(letter) != self.arity:
                raise ValueError("letter arity mismatch")
            if time < 0:
                raise ValueError("negative timestamp")
            if prev is not None and time <= prev:
                raise ValueError("timestamps must be strictly increasing")
            prev = time

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[Iterable[str], Fraction | int | str]]) -> "TimedWord":
        events = tuple(((frozenset(props),), Fraction(time)) for props, time in pairs)
        return cls(1, events)

    @classmethod
    def from_tracks(cls, arity: int,
                    pairs: Iterable[tuple[Sequence[Iterable[str]], Fraction | int | str]]) -> "TimedWord":
        events = tuple((tuple(frozenset(p) for p in letter), Fraction(time))
                       for letter, time in pairs)
        return cls(arity, events)

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[tuple[Letter, Fraction]]:
        return iter(self.events)

    @property
    def times(self) -> tuple[Fraction, ...]:
        return tuple(t for _, t in self.events)

    @property
    def time_set(self) -> frozenset[Fraction]:
        return frozenset(t for _, t in self.events)

    @property
    def duration(self) -> Fraction:
        return self.events[-1][1] if self.events else Fraction(0)

    def letter_at(self, time: Fraction) -> Optional[Letter]:
        for letter, t in self.events:
            if t == time:
                return letter
            if t > time:
                return None
        return None

    def props_at(self, time: Fraction, track: int = 0) -> Optional[frozenset[str]]:
        letter = self.letter_at(time)
        return None if letter is None else letter[track]

    def props_used(self) -> frozenset[str]:
        out: set[str] = set()
        for letter, _ in self.events:
            for component in letter:
                out |= component
        return frozenset(out)

    def track(self, index: int) -> "TimedWord":
        """Single-track word for one component, padding events included."""
        events = tuple(((letter[index],), t) for letter, t in self.events)
        return TimedWord(1, events)


def zip_tracks(words: Sequence[TimedWord]) -> TimedWord:
    """Superpose single-track words into a multi-track word over the union
    of their event times; tracks absent at an instant get the padding letter."""
    if not words:
        raise ValueError("zip_tracks needs at least one word")
    for w in words:
        if w.arity != 1:
            raise ValueError("zip_tracks expects single-track words")
    times = sorted(set().union(*(w.time_set for w in words)))
    events = []
    for t in times:
        parts = []
        for w in words:
            props = w.props_at(t)
            parts.append(EPSILON_SET if props is None else props)
        events.append((tuple(parts), t))
    return TimedWord(len(words), tuple(events))


def split_tracks(word: TimedWord) -> list[TimedWord]:
    """Inverse of zip_tracks up to padding: drop padding events per track."""
    out = []
    for i in range(word.arity):
        events = tuple(((letter[i],), t) for letter, t in word.events
                       if letter[i] != EPSILON_SET)
        out.append(TimedWord(1, events))
    return out


def unstutter(word: TimedWord) -> TimedWord:
    """Remove padding events from a single-track word."""
    if word.arity != 1:
        raise ValueError("unstutter expects a single-track word")
    events = tuple((letter, t) for letter, t in word.events if letter[0] != EPSILON_SET)
    return TimedWord(1, events)


def stutter_align(words: Sequence[TimedWord]) -> list[TimedWord]:
    """Pad each word with epsilon events so all share one time grid."""
    for w in words:
        if w.arity != 1:
            raise ValueError("stutter_align expects single-track words")
    times = sorted(set().union(*(w.time_set for w in words))) if words else []
    out = []
    for w in words:
        events = []
        for t in times:
            letter = w.letter_at(t)
            events.append((letter if letter is not None else (EPSILON_SET,), t))
        out.append(TimedWord(1, tuple(events)))
    return out


# --- text formats ---------------------------------------------------------

def _parse_time(text: str, where: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise TraceFormatError(f"{where}: malformed rational {text!r}") from exc
    if value < 0:
        raise TraceFormatError(f"{where}: negative timestamp {text!r}")
    return value


def _strip_comment(line: str) -> str:
    if "#" in line:
        line = line[: line.index("#")]
    return line.strip()


def parse_trace(text: str, source: str = "<trace>") -> TimedWord:
    """Parse one trace: lines `<rational>: prop prop ...`."""
    pairs: list[tuple[frozenset[str], Fraction]] = []
    prev: Optional[Fraction] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        where = f"{source}:{lineno}"
        if ":" not in line:
            raise TraceFormatError(f"{where}: expected `<time>: props`")
        time_text, _, props_text = line.partition(":")
        time = _parse_time(time_text.strip(), where)
        if prev is not None and time <= prev:
            raise TraceFormatError(f"{where}: timestamps must strictly increase")
        prev = time
        props = props_text.split()
        for p in props:
            if p == EPSILON_PROP:
                raise TraceFormatError(f"{where}: {EPSILON_PROP} is reserved for padding")
        pairs.append((frozenset(props), time))
    return TimedWord(1, tuple(((props,), t) for props, t in pairs))


def format_trace(word: TimedWord) -> str:
    if word.arity != 1:
        raise ValueError("only single-track words have a trace format")
    lines = []
    for letter, t in word.events:
        props = " ".join(sorted(letter[0]))
        time = str(t) if t.denominator > 1 else str(t.numerator)
        lines.append(f"{time}: {props}".rstrip())
    return "\n".join(lines) + ("\n" if lines else "")


def parse_traceset(text: str, source: str = "<traceset>") -> dict[str, TimedWord]:
    """Parse named traces: `trace <name>` headers followed by event lines."""
    sections: list[tuple[str, list[str], int]] = []
    current: Optional[tuple[str, list[str], int]] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        if line.startswith("trace"):
            parts = line.split()
            if len(parts) != 2 or parts[0] != "trace":
                raise TraceFormatError(f"{source}:{lineno}: expected `trace <name>`")
            current = (parts[1], [], lineno)
            sections.append(current)
            continue
        if current is None:
            raise TraceFormatError(f"{source}:{lineno}: event line before any `trace` header")
        current[1].append(raw)
    out: dict[str, TimedWord] = {}
    for name, lines, lineno in sections:
        if name in out:
            raise TraceFormatError(f"{source}:{lineno}: duplicate trace name {name!r}")
        out[name] = parse_trace("\n".join(lines), source=f"{source}[{name}]")
    if not out:
        raise TraceFormatError(f"{source}: no traces found")
    return out


def format_traceset(traces: dict[str, TimedWord]) -> str:
    chunks = []
    for name, word in traces.items():
        chunks.append(f"trace {name}\n{format_trace(word)}")
    return "\n".join(chunks)
