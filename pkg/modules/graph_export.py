"""Graph views of labelled spaces and pair lattices: networkx graphs and DOT text."""

from __future__ import annotations

from pathlib import Path
from typing import Iterator

import networkx as nx

from core.constructions.ideal_lattice import PairLattice
from core.stone_dual import LabelledSpace


def _gvquote(s: str) -> str:
    return '"{}"'.format(s.replace('"', r'\"'))


def space_to_networkx(space: LabelledSpace) -> nx.MultiDiGraph:
    g = nx.MultiDiGraph()
    for v in space.vertices:
        g.add_node(v)
    for source, target, label in space.edges:
        g.add_edge(source, target, label=label)
    return g


def space_dot_lines(space: LabelledSpace, name: str = "stone") -> Iterator[str]:
    yield f"digraph {name} {{\n"
    for v in space.vertices:
        yield f"  {_gvquote(v)};\n"
    for source, target, label in space.edges:
        yield f"  {_gvquote(source)} -> {_gvquote(target)} [label={_gvquote(label)}];\n"
    yield "}\n"


def space_to_dot(space: LabelledSpace, name: str = "stone") -> str:
    return "".join(space_dot_lines(space, name))


def lattice_to_dot(lattice: PairLattice) -> str:
    lines = ["digraph pairs {\n", "  rankdir=BT;\n"]
    hasse = lattice.hasse
    for node in sorted(hasse.nodes):
        lines.append(f"  n{node} [label={_gvquote(lattice.pairs[node].format())}];\n")
    for low, high in sorted(hasse.edges):
        lines.append(f"  n{low} -> n{high};\n")
    lines.append("}\n")
    return "".join(lines)


def export_graphml(graph: nx.Graph, path: str = "stone.graphml") -> str:
    nx.write_graphml(graph, path)
    return str(Path(path))


__all__ = ["space_to_networkx", "space_to_dot", "space_dot_lines", "lattice_to_dot", "export_graphml"]
