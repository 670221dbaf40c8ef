"""Planarity testing with rotation extraction.

Wraps networkx's left-right planarity test behind the result types the rest
of the package needs.  Multigraphs and loops are handled by subdividing the
offending edges before the test and suppressing the helper vertices in the
returned rotation system.  Output is deterministic for a fixed input order.
"""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from .rotation import EmbeddedGraph, build_graph


@dataclass
class NonPlanar:
    """Certificate: indices of input edges forming a K5/K3,3 subdivision."""
    certificate_edges: frozenset[int]


def planar_embed(vertices: list[int], edges: list[tuple[int, int]]
                 ) -> EmbeddedGraph | NonPlanar:
    """Embed an abstract multigraph; edge i receives darts (2i, 2i+1).

    Dart 2i originates at edges[i][0] and 2i+1 at edges[i][1].  On failure
    a ``NonPlanar`` carrying a Kuratowski-subgraph certificate is returned.
    The outer face of the result is the canonical default; callers pick one.
    """
    aux_base = max(vertices, default=-1) + 1
    next_aux = aux_base
    g = nx.Graph()
    g.add_nodes_from(sorted(vertices))
    # seg_edges[i] = the chain of nx-edges realizing input edge i
    seen_pairs: set[tuple[int, int]] = set()
    nx_edge_owner: dict[tuple[int, int], int] = {}
    chain_of: dict[int, list[int]] = {}
    for i, (u, v) in enumerate(edges):
        if u == v:
            a, b = next_aux, next_aux + 1
            next_aux += 2
            chain = [u, a, b, u]
        else:
            key = (min(u, v), max(u, v))
            if key in seen_pairs:
                a = next_aux
                next_aux += 1
                chain = [u, a, v]
            else:
                seen_pairs.add(key)
                chain = [u, v]
        chain_of[i] = chain
        for x, y in zip(chain, chain[1:]):
            g.add_edge(x, y)
            nx_edge_owner[(min(x, y), max(x, y))] = i
    ok, result = nx.check_planarity(g, counterexample=True)
    if not ok:
        cert = frozenset(nx_edge_owner[(min(x, y), max(x, y))]
                         for x, y in result.edges())
        return NonPlanar(certificate_edges=cert)

    data = result.get_data()  # node -> neighbors in clockwise order

    def dart_at(i: int, pos: int, end: int) -> int:
        """Endpoint dart of chain i for link (pos, pos+1) at side `end`."""
        nlinks = len(chain_of[i]) - 1
        if pos == 0 and end == 0:
            return 2 * i
        if pos == nlinks - 1 and end == 1:
            return 2 * i + 1
        raise AssertionError("interior chain dart requested at original vertex")

    rot: dict[int, list[int]] = {v: [] for v in vertices}

    def link_of(x: int, y: int) -> tuple[int, int, int]:
        """(chain index, link position, end at x) for nx edge (x, y)."""
        i = nx_edge_owner[(min(x, y), max(x, y))]
        chain = chain_of[i]
        for pos in range(len(chain) - 1):
            if chain[pos] == x and chain[pos + 1] == y:
                return i, pos, 0
            if chain[pos] == y and chain[pos + 1] == x:
                return i, pos, 1
        raise AssertionError("nx edge not on its chain")

    # At an original vertex every incident chain link is an end link, so the
    # darts produced by dart_at are exactly the endpoint darts (2i, 2i+1);
    # helper vertices (and their interior darts) are simply dropped.
    for node, nbrs in data.items():
        if node >= aux_base:
            continue
        ccw = list(reversed(nbrs))  # get_data is clockwise
        ds = []
        for y in ccw:
            # parallel nx edges cannot occur (we subdivided), so (node,y) is unique
            i, pos, end = link_of(node, y)
            ds.append(dart_at(i, pos, end))
        rot[node] = ds
    final_twins: dict[int, int] = {}
    for i in range(len(edges)):
        final_twins[2 * i] = 2 * i + 1
        final_twins[2 * i + 1] = 2 * i
    return build_graph(rot, final_twins)


def embed_or_none(vertices: list[int], edges: list[tuple[int, int]]
                  ) -> EmbeddedGraph | None:
    res = planar_embed(vertices, edges)
    return None if isinstance(res, NonPlanar) else res
