#!/usr/bin/env python3
"""Write every graph on 1..7 vertices (one per isomorphism class) in montest graph format.

Graphs are separated by a line holding only '%'. Vertices are renumbered from 1.
"""
import sys

import networkx as nx


def main(path: str) -> None:
    blocks = []
    for g in nx.graph_atlas_g():
        n = g.number_of_nodes()
        if n == 0:
            continue
        lines = [str(n)] + [f"{a + 1} {b + 1}" for a, b in sorted(tuple(sorted(e)) for e in g.edges())]
        blocks.append("\n".join(lines) + "\n")
    with open(path, "w") as out:
        out.write("%\n".join(blocks))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data/atlas7.txt")
