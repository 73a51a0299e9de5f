"""
Coxeter diagram recognition.

A diagram is a networkx graph on 0..k-1 whose edges carry the order "m"
(0 for infinity). Edges exist exactly where m >= 3 or m is infinite.
Connected diagrams are matched up to labelled isomorphism against the
finite and affine classification tables.
"""

from enum import Enum
from functools import lru_cache
from typing import Sequence

import networkx as nx
from networkx.algorithms.isomorphism import categorical_edge_match

from coxhecke.config import logger

INFINITY = 0


class SubsetType(str, Enum):
    SPHERICAL = "spherical"
    AFFINE = "affine"
    INDEFINITE = "indefinite"
    REDUCIBLE = "reducible"


_edge_match = categorical_edge_match("m", None)


def diagram(matrix: Sequence[Sequence[int]], nodes: Sequence[int]) -> nx.Graph:
    """Coxeter diagram of the sub-matrix on `nodes`, relabelled 0..k-1."""
    g = nx.Graph()
    g.add_nodes_from(range(len(nodes)))
    for a, i in enumerate(nodes):
        for b in range(a + 1, len(nodes)):
            m = matrix[i][nodes[b]]
            if m == INFINITY or m >= 3:
                g.add_edge(a, b, m=m)
    return g


def _path(orders: Sequence[int]) -> nx.Graph:
    g = nx.Graph()
    g.add_node(0)
    for i, m in enumerate(orders):
        g.add_edge(i, i + 1, m=m)
    return g


def _with_edges(base: nx.Graph, edges) -> nx.Graph:
    g = base.copy()
    for a, b, m in edges:
        g.add_edge(a, b, m=m)
    return g


# ── Classification tables ────────────────────────────────

@lru_cache(maxsize=None)
def finite_types(k: int) -> tuple[tuple[str, nx.Graph], ...]:
    """Connected finite Coxeter diagrams on k >= 3 nodes."""
    out = [
        (f"A{k}", _path([3] * (k - 1))),
        (f"B{k}", _path([3] * (k - 2) + [4])),
    ]
    if k >= 4:
        out.append((f"D{k}", _with_edges(_path([3] * (k - 2)), [(k - 3, k - 1, 3)])))
    if k in (6, 7, 8):
        out.append((f"E{k}", _with_edges(_path([3] * (k - 2)), [(2, k - 1, 3)])))
    if k == 4:
        out.append(("F4", _path([3, 4, 3])))
        out.append(("H4", _path([5, 3, 3])))
    if k == 3:
        out.append(("H3", _path([5, 3])))
    return tuple(out)


@lru_cache(maxsize=None)
def affine_types(k: int) -> tuple[tuple[str, nx.Graph], ...]:
    """Connected affine Coxeter diagrams on k >= 3 nodes (rank k - 1 labels)."""
    n = k - 1
    cycle = nx.cycle_graph(k)
    nx.set_edge_attributes(cycle, 3, "m")
    out = [
        (f"~A{n}", cycle),
        (f"~C{n}", _path([4] + [3] * (k - 3) + [4])),
    ]
    if k >= 4:
        # two leaves on node 2, then a path ending in a 4
        b = nx.Graph()
        b.add_edge(0, 2, m=3)
        b.add_edge(1, 2, m=3)
        for i in range(2, k - 1):
            b.add_edge(i, i + 1, m=4 if i == k - 2 else 3)
        out.append((f"~B{n}", b))
    if k >= 5:
        d = nx.Graph()
        d.add_edge(0, 2, m=3)
        d.add_edge(1, 2, m=3)
        for i in range(2, k - 3):
            d.add_edge(i, i + 1, m=3)
        d.add_edge(k - 3, k - 2, m=3)
        d.add_edge(k - 3, k - 1, m=3)
        out.append((f"~D{n}", d))
    if k == 7:
        e6 = nx.Graph()
        for a, b in [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]:
            e6.add_edge(a, b, m=3)
        out.append(("~E6", e6))
    if k == 8:
        out.append(("~E7", _with_edges(_path([3] * 6), [(3, 7, 3)])))
    if k == 9:
        out.append(("~E8", _with_edges(_path([3] * 7), [(2, 8, 3)])))
    if k == 5:
        out.append(("~F4", _path([3, 3, 4, 3])))
    if k == 3:
        out.append(("~G2", _path([6, 3])))
    return tuple(out)


def _lookup(g: nx.Graph, table) -> str | None:
    for name, candidate in table:
        if candidate.number_of_edges() != g.number_of_edges():
            continue
        if nx.is_isomorphic(g, candidate, edge_match=_edge_match):
            return name
    return None


def identify(g: nx.Graph) -> tuple[SubsetType, str]:
    """Type and table label of a connected diagram."""
    k = g.number_of_nodes()
    if k == 1:
        return SubsetType.SPHERICAL, "A1"
    if k == 2:
        m = g.edges[0, 1]["m"]
        if m == INFINITY:
            return SubsetType.AFFINE, "~A1"
        return SubsetType.SPHERICAL, f"I2({m})"

    if any(m == INFINITY for _, _, m in g.edges(data="m")):
        return SubsetType.INDEFINITE, "?"

    name = _lookup(g, finite_types(k))
    if name:
        return SubsetType.SPHERICAL, name
    name = _lookup(g, affine_types(k))
    if name:
        return SubsetType.AFFINE, name

    logger.debug(f"Diagram on {k} nodes matches no finite or affine type")
    return SubsetType.INDEFINITE, "?"
