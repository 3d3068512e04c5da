"""Matching state, augmenting paths, and the baseline shortest-augmenting-path engine.

The protocol: every arriving client is matched along a shortest augmenting
path to a server with spare capacity, rematching the clients along the way.
A path with k edges rematches (k-1)/2 previously matched clients; those are
the "replacements" the run log tracks.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .instance import ArrivalInstance


@dataclass(frozen=True)
class AugPath:
    """An augmenting path ``client, server, client, ..., server``.

    Vertices at even positions are client indices, odd positions are server
    indices.  The edge count is always odd: the path starts at an unmatched
    client and ends at a server with spare capacity.
    """

    vertices: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.vertices) < 2 or len(self.vertices) % 2 != 0:
            raise ValueError("an augmenting path alternates client,server,... and ends at a server")

    @property
    def edge_count(self) -> int:
        return len(self.vertices) - 1

    @property
    def replacements(self) -> int:
        return (self.edge_count - 1) // 2


@dataclass(frozen=True)
class ArrivalRecord:
    client: int
    matched: bool
    path_edges: Optional[int]
    replacements: int


@dataclass
class RunLog:
    """Per-arrival telemetry plus cumulative counters.

    ``long_path_counts[h]`` counts augmenting paths with more than ``h``
    edges, for ``h`` in 1, 2, 4, 8, ...  The fast engine additionally fills
    the search-mode and pruning counters.
    """

    records: list[ArrivalRecord] = field(default_factory=list)
    total_replacements: int = 0
    total_path_edges: int = 0
    long_path_counts: dict[int, int] = field(default_factory=dict)
    tree_paths: int = 0
    brute_paths: int = 0
    brute_failures: int = 0
    pruned_nodes: int = 0

    def record(self, client: int, path_edges: Optional[int]) -> ArrivalRecord:
        if path_edges is None:
            rec = ArrivalRecord(client, False, None, 0)
        else:
            if path_edges < 1 or path_edges % 2 == 0:
                raise ValueError("augmenting paths have an odd, positive number of edges")
            rec = ArrivalRecord(client, True, path_edges, (path_edges - 1) // 2)
            self.total_replacements += rec.replacements
            self.total_path_edges += path_edges
            h = 1
            while h < path_edges:
                self.long_path_counts[h] = self.long_path_counts.get(h, 0) + 1
                h *= 2
        self.records.append(rec)
        return rec

    def matched_count(self) -> int:
        return sum(1 for rec in self.records if rec.matched)

    def count_paths_longer_than(self, h: int) -> int:
        return sum(1 for rec in self.records if rec.matched and rec.path_edges > h)


@dataclass
class MatchState:
    """Current (possibly capacitated) matching, kept mutually consistent.

    ``server_of_client`` has one entry per *arrived* client; ``None`` means
    the client arrived but could not be matched.  ``clients_of_server[s]`` is
    kept sorted ascending and never exceeds ``capacity[s]``.
    """

    server_of_client: list[Optional[int]]
    clients_of_server: list[list[int]]
    capacity: list[int]
    arrived_count: int = 0

    @staticmethod
    def fresh(server_count: int, capacity: Sequence[int] | None = None) -> "MatchState":
        caps = [1] * server_count if capacity is None else list(capacity)
        if len(caps) != server_count:
            raise ValueError("capacity vector must cover every server")
        return MatchState([], [[] for _ in range(server_count)], caps)

    def load(self, server: int) -> int:
        return len(self.clients_of_server[server])

    def is_free(self, server: int) -> bool:
        return self.load(server) < self.capacity[server]

    def matched_count(self) -> int:
        return sum(1 for s in self.server_of_client if s is not None)

    def check_consistent(self) -> None:
        """Raise if the two sides of the matching disagree or a capacity is exceeded."""
        for c, s in enumerate(self.server_of_client):
            if s is not None and c not in self.clients_of_server[s]:
                raise AssertionError(f"client {c} thinks it is on server {s}, server disagrees")
        for s, clients in enumerate(self.clients_of_server):
            if len(clients) > self.capacity[s]:
                raise AssertionError(f"server {s} exceeds its capacity")
            for c in clients:
                if self.server_of_client[c] != s:
                    raise AssertionError(f"server {s} lists client {c}, client disagrees")
            if sorted(clients) != clients:
                raise AssertionError(f"client list of server {s} is not sorted")


def flip_path(state: MatchState, path: AugPath) -> int:
    """Apply an augmenting path to the matching; returns the replacement count.

    Validates the path against the current state first, so a stale path (one
    whose edges no longer alternate unmatched/matched) is rejected rather
    than corrupting the matching.
    """
    verts = path.vertices
    start = verts[0]
    if start >= state.arrived_count or state.server_of_client[start] is not None:
        raise ValueError("path must start at an arrived, unmatched client")
    for i in range(1, len(verts), 2):
        server = verts[i]
        client_before = verts[i - 1]
        if state.server_of_client[client_before] == server:
            raise ValueError("stale path: expected an unmatched edge into the server")
        if i + 1 < len(verts):
            client_after = verts[i + 1]
            if state.server_of_client[client_after] != server:
                raise ValueError("stale path: expected a matched edge out of the server")
    terminal = verts[-1]
    if not state.is_free(terminal):
        raise ValueError("stale path: terminal server has no spare capacity")

    # Re-seat every client on the path; all servers except the terminal one
    # swap one occupant for another, so capacities are respected throughout.
    for i in range(0, len(verts) - 1, 2):
        client, server = verts[i], verts[i + 1]
        old = state.server_of_client[client]
        if old is not None:
            state.clients_of_server[old].remove(client)
        state.server_of_client[client] = server
        bisect.insort(state.clients_of_server[server], client)
    return path.replacements


class SapEngine:
    """Reference shortest-augmenting-path engine (plain layered BFS per arrival).

    Tie-breaking is deterministic: the BFS reaches servers through neighbor
    lists in ascending index order, the free server chosen is the smallest
    index in the first layer that contains one, and the path is reconstructed
    by always taking the smallest-index predecessor client.
    """

    def __init__(
        self,
        instance: ArrivalInstance,
        capacity: Sequence[int] | None = None,
        log: RunLog | None = None,
    ):
        self.instance = instance
        if capacity is None:
            cap_list = [instance.capacity(s) for s in range(instance.server_count)]
        elif isinstance(capacity, list):
            cap_list = capacity  # shared reference: callers may grow allowances in place
        else:
            cap_list = list(capacity)
        self.state = MatchState([], [[] for _ in range(instance.server_count)], cap_list)
        # Arrived clients adjacent to each server, ascending (ids arrive in order).
        self.server_adj: list[list[int]] = [[] for _ in range(instance.server_count)]
        self.log = log if log is not None else RunLog()

    def arrive(self, client: int) -> None:
        if client != self.state.arrived_count:
            raise ValueError(
                f"clients arrive in order; expected {self.state.arrived_count}, got {client}"
            )
        if client >= self.instance.client_count:
            raise ValueError("client id beyond the instance")
        self.state.server_of_client.append(None)
        self.state.arrived_count += 1
        for s in self.instance.neighbors(client):
            self.server_adj[s].append(client)

    def shortest_aug_path(self, client: int) -> Optional[AugPath]:
        """Shortest augmenting path from an arrived, unmatched client, or None."""
        state = self.state
        if client >= state.arrived_count:
            raise ValueError("client has not arrived")
        if state.server_of_client[client] is not None:
            raise ValueError("client is already matched")

        dist_client: dict[int, int] = {client: 0}
        dist_server: dict[int, int] = {}
        frontier = [client]
        depth = 0
        target: Optional[int] = None
        while frontier:
            new_servers = []
            for c in frontier:
                own = state.server_of_client[c]
                for s in self.instance.neighbors(c):
                    if s != own and s not in dist_server:
                        dist_server[s] = depth + 1
                        new_servers.append(s)
            free = [s for s in new_servers if state.is_free(s)]
            if free:
                target = min(free)
                depth += 1
                break
            next_clients = []
            for s in new_servers:
                for c in state.clients_of_server[s]:
                    if c not in dist_client:
                        dist_client[c] = depth + 2
                        next_clients.append(c)
            frontier = next_clients
            depth += 2
        if target is None:
            return None

        # Walk back from the free server, taking the smallest-index client
        # whose unmatched edge enters each server one layer earlier.
        reversed_vertices = [target]
        server, d = target, depth
        while True:
            prev = None
            for c in self.server_adj[server]:
                if dist_client.get(c) == d - 1 and state.server_of_client[c] != server:
                    prev = c
                    break
            assert prev is not None, "BFS layers must admit a predecessor"
            reversed_vertices.append(prev)
            d -= 1
            if d == 0:
                break
            server = state.server_of_client[prev]
            assert server is not None and dist_server.get(server) == d - 1
            reversed_vertices.append(server)
            d -= 1
        return AugPath(tuple(reversed(reversed_vertices)))

    def augment(self, path: AugPath) -> int:
        verts = path.vertices
        for i in range(0, len(verts) - 1, 2):
            if verts[i + 1] not in self.instance.neighbors(verts[i]):
                raise ValueError(f"path uses the absent edge ({verts[i]},{verts[i + 1]})")
        return flip_path(self.state, path)

    def step(self, client: int) -> ArrivalRecord:
        """Process one arrival end to end and log it."""
        self.arrive(client)
        path = self.shortest_aug_path(client)
        if path is None:
            return self.log.record(client, None)
        self.augment(path)
        return self.log.record(client, path.edge_count)

    def run(self) -> tuple[MatchState, RunLog]:
        for client in range(self.instance.client_count):
            self.step(client)
        return self.state, self.log


def run_sap(instance: ArrivalInstance) -> tuple[MatchState, RunLog]:
    """Run the baseline engine over a unit-capacity instance."""
    if not instance.has_unit_capacities():
        raise ValueError("run_sap expects unit capacities; see run_capacitated")
    return SapEngine(instance).run()
