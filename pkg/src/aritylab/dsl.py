"""Line-oriented text format for finite structures.

    # comment
    structure circular_5
    size 5
    rel K3/3
    (0, 0, 0)
    (0, 1, 2)

A ``builder <kind> <args>`` line may replace ``size``: ``builder linear 4``,
``builder circular 5``, ``builder pure 3``, ``builder spherical 5 4
[--variant allwindows]``.  Relations declared afterwards are added to the
built structure.  :func:`dumps` writes the canonical form (tuples sorted,
relations in signature order), which :func:`loads` reads back unchanged.
"""

from __future__ import annotations

import re
import shlex
from pathlib import Path

from .core import DEFAULT_SIZE_CAP, FinStructure, StructureError, pure_set, structure
from .factory import VARIANTS, circular_order, linear_order, spherical_chain


class DSLError(ValueError):
    """Syntax error in a structure file; ``line`` is 1-based."""

    def __init__(self, msg: str, line: int):
        super().__init__(f"line {line}: {msg}")
        self.line = line


_TUPLE = re.compile(r"^\(\s*(\d+(?:\s*,\s*\d+)*)?\s*,?\s*\)$")
_REL = re.compile(r"^([A-Za-z_][A-Za-z0-9_@]*)\s*/\s*(\d+)$")


def build(kind: str, args: list[str], variant: str = "literal") -> FinStructure:
    """Builder sugar shared by the DSL and the command line."""
    try:
        nums = [int(a) for a in args]
    except ValueError:
        raise StructureError(f"builder {kind} expects integer arguments, got {args}") from None
    expected = {"linear": 1, "circular": 1, "pure": 1, "spherical": 2}
    if kind not in expected:
        raise StructureError(f"unknown builder {kind!r}; choose from {sorted(expected)}")
    if len(nums) != expected[kind]:
        raise StructureError(f"builder {kind} takes {expected[kind]} argument(s)")
    if kind != "spherical" and variant != "literal":
        raise StructureError("--variant applies to the spherical builder only")
    if kind == "linear":
        return linear_order(nums[0])
    if kind == "circular":
        return circular_order(nums[0])
    if kind == "pure":
        if nums[0] < 1:
            raise StructureError("pure set needs m >= 1")
        return pure_set(nums[0])
    return spherical_chain(nums[0], nums[1], variant)


def loads(text: str, size_cap: int = DEFAULT_SIZE_CAP) -> FinStructure:
    name = None
    size = None
    base: FinStructure | None = None
    rels: list[tuple[str, int, set]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "structure":
            if name is not None:
                raise DSLError("duplicate structure line", lineno)
            if not rest:
                raise DSLError("structure expects a name", lineno)
            name = rest
        elif head == "size":
            if size is not None or base is not None:
                raise DSLError("size given twice", lineno)
            if not rest.isdigit() or int(rest) < 1:
                raise DSLError(f"size must be a positive integer, got {rest!r}", lineno)
            size = int(rest)
        elif head == "builder":
            if size is not None or base is not None:
                raise DSLError("builder conflicts with an earlier size/builder line", lineno)
            words = shlex.split(rest)
            variant = "literal"
            if "--variant" in words:
                i = words.index("--variant")
                if i + 1 >= len(words) or words[i + 1] not in VARIANTS:
                    raise DSLError(f"--variant expects one of {VARIANTS}", lineno)
                variant = words[i + 1]
                del words[i:i + 2]
            if not words:
                raise DSLError("builder expects a kind", lineno)
            try:
                base = build(words[0], words[1:], variant)
            except StructureError as e:
                raise DSLError(str(e), lineno) from None
            size = base.size
        elif head == "rel":
            m = _REL.match(rest)
            if not m:
                raise DSLError(f"expected rel <Name>/<arity>, got {rest!r}", lineno)
            rels.append((m.group(1), int(m.group(2)), set()))
        elif line.startswith("("):
            m = _TUPLE.match(line)
            if not m:
                raise DSLError(f"malformed tuple {line!r}", lineno)
            if not rels:
                raise DSLError("tuple before any rel line", lineno)
            t = tuple(int(x) for x in m.group(1).split(",")) if m.group(1) else ()
            rels[-1][2].add(t)
        else:
            raise DSLError(f"unknown directive {head!r}", lineno)
    if size is None:
        raise DSLError("missing size or builder line", 1)
    table = {} if base is None else {n: (a, set(r)) for (n, a), r in base.items()}
    for rname, ar, tuples in rels:
        if rname in table:
            raise StructureError(f"relation {rname} declared twice")
        table[rname] = (ar, tuples)
    default = base.name if base is not None else "anonymous"
    return structure(size, table, name=name or default, size_cap=size_cap)


def dumps(s: FinStructure) -> str:
    lines = [f"structure {s.name or 'anonymous'}", f"size {s.size}"]
    for (name, ar), rel in s.items():
        lines.append(f"rel {name}/{ar}")
        lines.extend("(" + ", ".join(map(str, t)) + ")" for t in sorted(rel))
    return "\n".join(lines) + "\n"


def load(path, size_cap: int = DEFAULT_SIZE_CAP) -> FinStructure:
    return loads(Path(path).read_text(), size_cap)


def dump(s: FinStructure, path) -> None:
    Path(path).write_text(dumps(s))
