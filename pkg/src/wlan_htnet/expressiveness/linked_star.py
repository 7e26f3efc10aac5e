"""
Linked star graphs: stars whose centres form a clique.

A WLAN snapshot has this shape, with APs as centres and attached STAs as
leaves.
"""

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from ..graph.model import NodeKind


@dataclass(frozen=True)
class LinkedStarGraph:
    """Star sizes are leaf counts, one entry per centre.

    Centres take node ids ``0 .. n_s - 1``; leaves follow star by star.
    """

    star_sizes: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.star_sizes:
            raise ValueError("a linked star graph needs at least one star")
        if any(size < 1 for size in self.star_sizes):
            raise ValueError(f"every star needs at least one leaf, got {self.star_sizes}")

    @property
    def num_stars(self) -> int:
        return len(self.star_sizes)

    @property
    def num_nodes(self) -> int:
        return self.num_stars + sum(self.star_sizes)

    def canonical(self) -> "LinkedStarGraph":
        return LinkedStarGraph(tuple(sorted(self.star_sizes, reverse=True)))

    def centre_of(self) -> Dict[int, int]:
        """Leaf id -> centre id"""
        owner: Dict[int, int] = {}
        next_id = self.num_stars
        for centre, size in enumerate(self.star_sizes):
            for _ in range(size):
                owner[next_id] = centre
                next_id += 1
        return owner

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        for centre in range(self.num_stars):
            g.add_node(centre, kind=NodeKind.AP.value)
        for leaf, centre in self.centre_of().items():
            g.add_node(leaf, kind=NodeKind.STA.value)
            g.add_edge(centre, leaf)
        for a in range(self.num_stars):
            for b in range(a + 1, self.num_stars):
                g.add_edge(a, b)
        return g

    def diameter(self) -> int:
        return int(nx.diameter(self.to_networkx()))

    def __str__(self) -> str:
        return "(" + ",".join(str(s) for s in self.star_sizes) + ")"


def enumerate_linked_stars(max_nodes: int = 10, max_stars: int = 4) -> Iterator[LinkedStarGraph]:
    """Every linked star graph up to isomorphism with at most ``max_nodes`` nodes"""
    for n_s in range(1, max_stars + 1):
        budget = max_nodes - n_s
        if budget < n_s:
            break
        for sizes in combinations_with_replacement(range(1, budget + 1), n_s):
            if sum(sizes) <= budget:
                yield LinkedStarGraph(tuple(sorted(sizes, reverse=True)))


def relabel(
    graph: nx.Graph,
    rng: Optional[np.random.Generator] = None,
    permutation: Optional[Sequence[int]] = None,
) -> Tuple[nx.Graph, Dict[int, int]]:
    """Copy of ``graph`` under a node-id permutation, plus the mapping used"""
    nodes: List[int] = sorted(graph.nodes)
    if permutation is None:
        rng = rng or np.random.default_rng()
        permutation = [nodes[i] for i in rng.permutation(len(nodes))]
    mapping = dict(zip(nodes, permutation))
    return nx.relabel_nodes(graph, mapping, copy=True), mapping
