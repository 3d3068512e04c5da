"""Shortest-augmenting-path engine backed by a dynamic residual digraph.

The matching is mirrored as a directed graph: unmatched edges point from
client to server, matched edges from server to client, and every vertex that
could end an augmenting path has an arc to a shared sink.  Shortest paths to
the sink are maintained up to a depth limit; arrivals whose distance exceeds
it fall back to a one-off breadth-first search, and when such a search fails
every vertex it touched is removed for good (none of them can ever lie on an
augmenting path again).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Optional

from .instance import ArrivalInstance
from .matching import ArrivalRecord, AugPath, MatchState, RunLog, flip_path
from .sink_tree import SinkDistanceTree


def default_depth_limit(client_count: int) -> int:
    """ceil(sqrt(n ln n)), floored at 1: the crossover between tree and brute search."""
    if client_count <= 1:
        return 1
    return max(1, math.ceil(math.sqrt(client_count * math.log(client_count))))


@dataclass(frozen=True)
class PruneEvent:
    arrival: int
    servers: frozenset[int]
    clients: frozenset[int]


class FastSapEngine:
    """Tree-first search with brute-force fallback and permanent pruning.

    ``debug=True`` re-validates the distance structure against a fresh BFS
    after every single arc change; otherwise validation samples one update
    in ``validate_every`` (pass 0 to disable).
    """

    def __init__(
        self,
        instance: ArrivalInstance,
        depth_limit: int | None = None,
        debug: bool = False,
        validate_every: int = 64,
    ):
        if not instance.has_unit_capacities():
            raise ValueError("the fast engine handles unit capacities only")
        self.instance = instance
        n = instance.client_count
        self.n = n
        self.sink = n + instance.server_count
        limit = default_depth_limit(n) if depth_limit is None else depth_limit
        # Clients that have not arrived yet already sit in the digraph,
        # attached only to the sink; their dummy arc disappears on arrival.
        arcs = [(self.n + s, self.sink) for s in range(instance.server_count)]
        arcs += [(c, self.sink) for c in range(n)]
        self.tree = SinkDistanceTree(self.sink + 1, self.sink, limit, arcs)
        self.state = MatchState([], [[] for _ in range(instance.server_count)], [1] * instance.server_count)
        self.log = RunLog()
        self.prune_events: list[PruneEvent] = []
        self._validate_every = 1 if debug else validate_every
        self._updates = 0

    @property
    def depth_limit(self) -> int:
        return self.tree.depth_limit

    def _server_node(self, server: int) -> int:
        return self.n + server

    def _tick(self) -> None:
        self._updates += 1
        if self._validate_every and self._updates % self._validate_every == 0:
            self.tree.validate_against_bfs()

    def _insert(self, u: int, v: int) -> None:
        self.tree.insert_arc(u, v)
        self._tick()

    def _delete(self, u: int, v: int) -> None:
        self.tree.delete_arc(u, v)
        self._tick()

    def _to_aug_path(self, nodes: list[int]) -> AugPath:
        return AugPath(tuple(v if v < self.n else v - self.n for v in nodes))

    def _brute_force(self, client: int) -> tuple[Optional[list[int]], set[int]]:
        """Plain BFS over the live digraph; returns (node path to sink, touched nodes)."""
        parent: dict[int, Optional[int]] = {client: None}
        queue = deque([client])
        while queue:
            u = queue.popleft()
            for v in sorted(self.tree.out[u]):
                if v in parent or v in self.tree.deleted:
                    continue
                parent[v] = u
                if v == self.sink:
                    path = [v]
                    while path[-1] != client:
                        path.append(parent[path[-1]])
                    path.reverse()
                    return path, set()
                queue.append(v)
        return None, set(parent)

    def _prune(self, arrival: int, touched: set[int]) -> None:
        for v in sorted(touched):
            self.tree.delete_node(v)
            self._tick()
        self.log.pruned_nodes += len(touched)
        self.prune_events.append(
            PruneEvent(
                arrival,
                frozenset(v - self.n for v in touched if v >= self.n),
                frozenset(v for v in touched if v < self.n),
            )
        )

    def _apply_augment(self, path: AugPath) -> None:
        flip_path(self.state, path)
        nodes = [v if i % 2 == 0 else self._server_node(v) for i, v in enumerate(path.vertices)]
        # Reverse the path arcs starting next to the client; the dummy arc of
        # the terminal server goes last, once that server is matched.
        for u, v in zip(nodes, nodes[1:]):
            self._insert(v, u)
            self._delete(u, v)
        self._delete(nodes[-1], self.sink)

    def step(self, client: int) -> ArrivalRecord:
        if client != self.state.arrived_count:
            raise ValueError(
                f"clients arrive in order; expected {self.state.arrived_count}, got {client}"
            )
        self.state.server_of_client.append(None)
        self.state.arrived_count += 1
        for s in self.instance.neighbors(client):
            node = self._server_node(s)
            if node not in self.tree.deleted:
                self._insert(client, node)
        # Deleting the dummy arc last keeps every insertion distance-neutral.
        self._delete(client, self.sink)

        path: Optional[AugPath] = None
        if self.tree.level[client] <= self.depth_limit:
            node_path = self.tree.path_to_sink(client)
            path = self._to_aug_path(node_path[:-1])
            self.log.tree_paths += 1
        else:
            node_path, touched = self._brute_force(client)
            if node_path is not None:
                path = self._to_aug_path(node_path[:-1])
                self.log.brute_paths += 1
            else:
                self.log.brute_failures += 1
                self._prune(client, touched)
        if path is None:
            return self.log.record(client, None)
        self._apply_augment(path)
        return self.log.record(client, path.edge_count)

    def run(self) -> tuple[MatchState, RunLog]:
        for client in range(self.instance.client_count):
            self.step(client)
        if self._validate_every:
            self.tree.validate_against_bfs()
        return self.state, self.log


def run_fast_sap(
    instance: ArrivalInstance,
    depth_limit: int | None = None,
    debug: bool = False,
) -> tuple[MatchState, RunLog]:
    return FastSapEngine(instance, depth_limit=depth_limit, debug=debug).run()
