"""Trace files: positives, ``---``, negatives, optionally ``---`` and AP names.

One trace per line, states separated by ``;``, each state a comma-separated
0/1 vector, optional ``::k`` loop start (default: last state). ``#`` starts a
comment that runs to the end of the line.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .ltl.trace import LassoTrace, Sample


class TraceFileError(ValueError):
    def __init__(self, msg: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


def _parse_trace(text: str, width: Optional[int], lineno: int) -> tuple[list[list[bool]], Optional[int]]:
    body, sep, loop = text.partition("::")
    states = []
    for chunk in body.split(";"):
        bits = [b.strip() for b in chunk.split(",")]
        if any(b not in ("0", "1") for b in bits):
            raise TraceFileError(f"state {chunk.strip()!r} is not a comma-separated 0/1 vector", lineno)
        if width is not None and len(bits) != width:
            raise TraceFileError(f"state {chunk.strip()!r} has {len(bits)} values, expected {width}", lineno)
        width = len(bits)
        states.append([b == "1" for b in bits])
    loop_start = None
    if sep:
        try:
            loop_start = int(loop.strip())
        except ValueError:
            raise TraceFileError(f"bad loop start {loop.strip()!r}", lineno) from None
        if not 0 <= loop_start < len(states):
            raise TraceFileError(f"loop start {loop_start} outside 0..{len(states) - 1}", lineno)
    return states, loop_start


def parse_traces(text: str, ap: Optional[Sequence[str]] = None) -> Sample:
    """Parse a trace file. ``ap`` overrides the optional third block."""
    blocks: list[list[tuple[int, str]]] = [[]]
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "---":
            blocks.append([])
            continue
        blocks[-1].append((lineno, line))
    if len(blocks) > 3:
        raise TraceFileError("at most three blocks (positives, negatives, AP names) are allowed")
    while len(blocks) < 3:
        blocks.append([])
    pos_lines, neg_lines, ap_lines = blocks
    names: Optional[list[str]] = list(ap) if ap is not None else None
    if names is None and ap_lines:
        names = [n.strip() for _, l in ap_lines for n in l.split(",") if n.strip()]
        if len(set(names)) != len(names):
            raise TraceFileError("duplicate proposition name", ap_lines[0][0])
    width = len(names) if names is not None else None
    parsed = []
    for lines in (pos_lines, neg_lines):
        out = []
        for lineno, line in lines:
            states, loop = _parse_trace(line, width, lineno)
            width = len(states[0])
            out.append((states, loop, lineno))
        parsed.append(out)
    if names is None:
        names = [f"p{i}" for i in range(width or 0)]
    try:
        pos = [LassoTrace.make(names, s, k) for s, k, _ in parsed[0]]
        neg = [LassoTrace.make(names, s, k) for s, k, _ in parsed[1]]
        return Sample(pos, neg, ap=tuple(names))
    except ValueError as e:
        raise TraceFileError(str(e)) from None


def format_trace(t: LassoTrace) -> str:
    return str(t)


def format_traces(sample: Sample) -> str:
    lines = [format_trace(t) for t in sample.positives]
    lines.append("---")
    lines += [format_trace(t) for t in sample.negatives]
    lines.append("---")
    lines.append(",".join(sample.ap))
    return "\n".join(lines) + "\n"
