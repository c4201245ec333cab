"""Ultimately periodic (lasso) traces u v^omega and samples of them."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence


@dataclass(frozen=True)
class LassoTrace:
    """The finite word ``uv`` in ``states`` plus the loop start ``|u|``.

    Each state is a tuple of booleans indexed like ``ap``.
    """

    ap: tuple[str, ...]
    states: tuple[tuple[bool, ...], ...]
    loop_start: int

    def __post_init__(self):
        if not self.states:
            raise ValueError("a lasso needs at least one state")
        if not 0 <= self.loop_start < len(self.states):
            raise ValueError(f"loop start {self.loop_start} outside 0..{len(self.states) - 1}")
        for s in self.states:
            if len(s) != len(self.ap):
                raise ValueError(f"state {s} has width {len(s)}, expected {len(self.ap)}")

    @classmethod
    def make(cls, ap: Sequence[str], states: Sequence[Sequence[int | bool]],
             loop_start: Optional[int] = None) -> "LassoTrace":
        rows = tuple(tuple(bool(b) for b in s) for s in states)
        if loop_start is None:
            loop_start = len(rows) - 1
        return cls(tuple(ap), rows, loop_start)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def prefix(self) -> tuple[tuple[bool, ...], ...]:
        return self.states[: self.loop_start]

    @property
    def loop(self) -> tuple[tuple[bool, ...], ...]:
        return self.states[self.loop_start:]

    def holds(self, prop: str, i: int) -> bool:
        return self.states[i][self.ap.index(prop)]

    def succ(self, i: int) -> int:
        return succ(self, i)

    def future(self, i: int) -> list[int]:
        return future_indices(self, i)

    def normalized(self) -> tuple[tuple, tuple]:
        return normalize(self)

    def __str__(self) -> str:
        body = ";".join(",".join("1" if b else "0" for b in s) for s in self.states)
        return f"{body}::{self.loop_start}"


def succ(t: LassoTrace, i: int) -> int:
    if not 0 <= i < len(t.states):
        raise IndexError(f"position {i} outside 0..{len(t.states) - 1}")
    return i + 1 if i < len(t.states) - 1 else t.loop_start


def future_indices(t: LassoTrace, i: int) -> list[int]:
    """Positions reachable from ``i`` by repeated ``succ``, ``i`` first."""
    if not 0 <= i < len(t.states):
        raise IndexError(f"position {i} outside 0..{len(t.states) - 1}")
    if i >= t.loop_start:
        return list(range(i, len(t.states))) + list(range(t.loop_start, i))
    return list(range(i, len(t.states)))


def _primitive(loop: tuple) -> tuple:
    n = len(loop)
    for p in range(1, n + 1):
        if n % p == 0 and loop[:p] * (n // p) == loop:
            return loop[:p]
    return loop


def normalize(t: LassoTrace) -> tuple[tuple, tuple]:
    """Canonical ``(prefix, loop)`` of the infinite word ``t`` denotes.

    The loop is cut to its primitive period and the prefix is shortened while
    its last state equals the last loop state (rotating the loop each time).
    Two lassos denote the same infinite word iff their forms are equal.
    """
    prefix = list(t.prefix)
    loop = list(_primitive(t.loop))
    while prefix and prefix[-1] == loop[-1]:
        prefix.pop()
        loop = [loop[-1]] + loop[:-1]
    return tuple(prefix), tuple(loop)


@dataclass
class Sample:
    positives: list[LassoTrace] = field(default_factory=list)
    negatives: list[LassoTrace] = field(default_factory=list)
    ap: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        traces = self.positives + self.negatives
        if self.ap is None:
            self.ap = traces[0].ap if traces else ()
        self.ap = tuple(self.ap)
        for t in traces:
            if t.ap != self.ap:
                raise ValueError(f"trace over {t.ap} in a sample over {self.ap}")
        pos = {normalize(t) for t in self.positives}
        for t in self.negatives:
            if normalize(t) in pos:
                raise ValueError(f"trace {t} is both positive and negative")

    @property
    def traces(self) -> list[tuple[LassoTrace, bool]]:
        return [(t, True) for t in self.positives] + [(t, False) for t in self.negatives]

    def __len__(self) -> int:
        return len(self.positives) + len(self.negatives)
