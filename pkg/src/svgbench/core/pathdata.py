"""SVG path-data grammar: parsing, validation and compact serialization.

Implicit command repetition is materialized (``M 0 0 10 10`` becomes an M
followed by an L), so every stored command carries exactly its arity of
arguments.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

# arity per command letter; Z takes none
ARITY = {
    "M": 2, "L": 2, "H": 1, "V": 1, "C": 6, "S": 4, "Q": 4, "T": 2, "A": 7,
    "Z": 0,
}

COMMAND_LETTERS = "MmLlHhVvCcSsQqTtAaZz"

_TOKEN_RE = re.compile(
    r"([MmLlHhVvCcSsQqTtAaZz])|([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)"
)

_WSP_RE = re.compile(r"[\s,]+")

# arc commands interleave coordinates with single-digit flags; positions of
# the two flags within the 7-argument group
_ARC_FLAG_POS = (3, 4)


@dataclass(frozen=True)
class PathCommand:
    op: str
    args: tuple[float, ...]


@dataclass(frozen=True)
class PathData:
    commands: tuple[PathCommand, ...]

    @staticmethod
    def parse(text: str) -> "PathData":
        """Parse a ``d`` attribute.

        Raises ValueError on: leading non-moveto, dangling arguments, bad
        arity, malformed arc flags, or stray characters.
        """
        commands: list[PathCommand] = []
        pos = 0
        n = len(text)
        current_op: str | None = None

        def skip_wsp() -> None:
            nonlocal pos
            m = _WSP_RE.match(text, pos)
            if m:
                pos = m.end()

        def read_number() -> float:
            nonlocal pos
            m = _TOKEN_RE.match(text, pos)
            if not m or m.group(2) is None:
                raise ValueError(f"expected number at offset {pos} in path data")
            pos = m.end()
            return float(m.group(2))

        def read_flag() -> float:
            # arc flags are a single 0/1 that may butt against the next number
            nonlocal pos
            skip_wsp()
            if pos < n and text[pos] in "01":
                value = float(text[pos])
                pos += 1
                return value
            raise ValueError(f"expected arc flag at offset {pos} in path data")

        skip_wsp()
        while pos < n:
            ch = text[pos]
            if ch in COMMAND_LETTERS:
                current_op = ch
                pos += 1
            elif current_op is None:
                raise ValueError(f"path data must start with a command, got {ch!r}")
            elif current_op in "Zz":
                raise ValueError("numbers after close command")
            arity = ARITY[ (current_op or ch).upper() ]
            op = current_op
            assert op is not None
            if arity == 0:
                commands.append(PathCommand(op, ()))
                # keep Z current so a stray number after it is rejected
                current_op = op
                skip_wsp()
                continue
            args: list[float] = []
            skip_wsp()
            for i in range(arity):
                if op in "Aa" and i in _ARC_FLAG_POS:
                    args.append(read_flag())
                else:
                    skip_wsp()
                    args.append(read_number())
            commands.append(PathCommand(op, tuple(args)))
            # implicit repetition: M repeats as L, m as l
            if op == "M":
                current_op = "L"
            elif op == "m":
                current_op = "l"
            else:
                current_op = op
            skip_wsp()

        if not commands:
            raise ValueError("empty path data")
        if commands[0].op not in ("M", "m"):
            raise ValueError("path data must begin with a moveto")
        return PathData(tuple(commands))

    def to_string(self, precision: int = 2) -> str:
        """Compact form: letter, then space-separated arguments."""
        from .serializer import format_number

        text = ""
        for cmd in self.commands:
            text += cmd.op
            if cmd.args:
                text += " ".join(format_number(a, precision) for a in cmd.args)
        return text

    def map_coords(self, fn) -> "PathData":
        """Apply ``fn(x, y) -> (x, y)`` to coordinate pairs and rescale radii.

        ``fn`` must be an affine map with uniform scale for arc radii to stay
        meaningful; H/V arguments are mapped through the x/y component.
        """
        out: list[PathCommand] = []
        zero = fn(0.0, 0.0)
        unit = fn(1.0, 0.0)
        scale = ((unit[0] - zero[0]) ** 2 + (unit[1] - zero[1]) ** 2) ** 0.5
        for cmd in self.commands:
            op, args = cmd.op, list(cmd.args)
            relative = op.islower()
            upper = op.upper()
            if upper == "Z":
                out.append(cmd)
                continue
            if upper == "H":
                if relative:
                    x = args[0] * scale
                else:
                    x, _ = fn(args[0], 0.0)
                out.append(PathCommand(op, (x,)))
                continue
            if upper == "V":
                if relative:
                    y = args[0] * scale
                else:
                    _, y = fn(0.0, args[0])
                out.append(PathCommand(op, (y,)))
                continue
            if upper == "A":
                rx, ry, rot, laf, sf, x, y = args
                rx *= scale
                ry *= scale
                if relative:
                    dx, dy = x * scale, y * scale
                else:
                    dx, dy = fn(x, y)
                out.append(PathCommand(op, (rx, ry, rot, laf, sf, dx, dy)))
                continue
            mapped: list[float] = []
            for i in range(0, len(args), 2):
                x, y = args[i], args[i + 1]
                if relative:
                    mapped.extend((x * scale, y * scale))
                else:
                    mapped.extend(fn(x, y))
            out.append(PathCommand(op, tuple(mapped)))
        return PathData(tuple(out))

    def map_numbers(self, fn) -> "PathData":
        """Apply ``fn(value) -> value`` to every numeric argument except arc
        flags and rotation."""
        out = []
        for cmd in self.commands:
            if cmd.op in "Aa":
                rx, ry, rot, laf, sf, x, y = cmd.args
                out.append(
                    PathCommand(cmd.op, (fn(rx), fn(ry), fn(rot), laf, sf, fn(x), fn(y)))
                )
            else:
                out.append(PathCommand(cmd.op, tuple(fn(a) for a in cmd.args)))
        return PathData(tuple(out))
