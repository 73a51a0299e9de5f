"""DOT rendering of shift graphs."""

from typing import Iterable

from coxhecke.conjugacy import ShiftArrow
from coxhecke.coxeter import CoxeterSystem, Element


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def shift_graph_dot(
    sys: CoxeterSystem,
    nodes: Iterable[Element],
    arrows: Iterable[ShiftArrow],
    name: str = "shift_graph",
) -> str:
    nodes = sorted(set(nodes))
    ids = {w: f"n{i}" for i, w in enumerate(nodes)}
    lines = [f"digraph {name} {{", "  node [shape=box];"]
    for w in nodes:
        lines.append(f"  {ids[w]} [label={_quote(sys.format_word(w))}];")
    for a in sorted(arrows):
        lines.append(
            f"  {ids[a.source]} -> {ids[a.target]} "
            f"[label={_quote(sys.names[a.generator])}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
