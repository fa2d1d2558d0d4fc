"""Reading and writing algebra files (JSON documents in the raw layout)."""

from __future__ import annotations

import json
from pathlib import Path

from .algebra import DEFAULT_ELEMENT_CAP, FiniteAlgebra, algebra_from_raw, algebra_to_raw
from .errors import StructureError


def loads_algebra(text: str, cap: int = DEFAULT_ELEMENT_CAP) -> FiniteAlgebra:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructureError(f"not valid JSON: {exc}") from None
    return algebra_from_raw(raw, cap)


def load_raw(path: str | Path) -> dict:
    """Parse an algebra file without validating it. OSError propagates."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructureError(f"not valid JSON: {exc}") from None


def load_algebra(path: str | Path, cap: int = DEFAULT_ELEMENT_CAP) -> FiniteAlgebra:
    return algebra_from_raw(load_raw(path), cap)


def dumps_algebra(L: FiniteAlgebra) -> str:
    return json.dumps(algebra_to_raw(L), indent=None, separators=(", ", ": ")) + "\n"


def dump_algebra(L: FiniteAlgebra, path: str | Path) -> None:
    Path(path).write_text(dumps_algebra(L), encoding="utf-8")


def algebra_to_dot(L: FiniteAlgebra, name: str = "algebra") -> str:
    """Graphviz source for the Hasse diagram, with dashed edges for ``x <-> x'``."""
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=plaintext];"]
    for x in range(L.n):
        lines.append(f'  n{x} [label="{L.names[x]}"];')
    for a, b in L.covers():
        lines.append(f"  n{a} -> n{b};")
    for x in range(L.n):
        if x < L.neg[x]:
            lines.append(f"  n{x} -> n{L.neg[x]} [style=dashed, dir=none, constraint=false];")
    lines.append("}")
    return "\n".join(lines) + "\n"
