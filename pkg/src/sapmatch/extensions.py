"""Beyond unit matching: fixed server capacities, exact min-max load, and
(1+eps)-approximate load-bounded assignment.

Fixed capacities reduce to unit matching by giving each server one copy per
capacity unit.  Min-max mode recomputes the optimal achievable maximum load
after every arrival and either opens a new "epoch" (every server gains one
slot) or augments to an underloaded server.  Semi-matching mode derives a
per-server allowance from the exact balanced necessities and matches within
those allowances.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .balance import balanced_flow
from .errors import InvariantViolation
from .flownet import FlowNetwork, max_flow
from .instance import ArrivalInstance
from .matching import AugPath, MatchState, RunLog, SapEngine


@dataclass(frozen=True)
class LoadProfile:
    load: dict[int, int]
    max_load: int
    opt: int


@dataclass(frozen=True)
class EpochRecord:
    opt: int
    start_arrival: int


class CopyMap:
    """Contiguous block of copy indices per original server."""

    def __init__(self, sizes: Sequence[int]):
        if any(u < 1 for u in sizes):
            raise ValueError("every server needs at least one copy")
        self.sizes = tuple(sizes)
        self.starts = [0]
        for u in self.sizes:
            self.starts.append(self.starts[-1] + u)

    @property
    def total_copies(self) -> int:
        return self.starts[-1]

    def range_of(self, server: int) -> range:
        return range(self.starts[server], self.starts[server + 1])

    def original(self, copy: int) -> int:
        if not 0 <= copy < self.total_copies:
            raise ValueError("copy index out of range")
        return bisect_right(self.starts, copy) - 1


def _copy_instance(instance: ArrivalInstance, copies: CopyMap) -> ArrivalInstance:
    arrivals = []
    for client_id, neighbors in instance.arrivals:
        expanded = []
        for s in neighbors:
            expanded.extend(copies.range_of(s))
        arrivals.append((client_id, tuple(expanded)))
    return ArrivalInstance(copies.total_copies, tuple(arrivals))


def _covers(adjacency: dict[int, tuple[int, ...]], per_server_cap: int) -> bool:
    """Can every listed client be assigned with all loads <= per_server_cap?"""
    if not adjacency:
        return True
    clients = sorted(adjacency)
    servers = sorted({s for nbrs in adjacency.values() for s in nbrs})
    source, sink = 0, 1 + len(clients) + len(servers)
    net = FlowNetwork(sink + 1, source, sink)
    cnode = {c: 1 + i for i, c in enumerate(clients)}
    snode = {s: 1 + len(clients) + j for j, s in enumerate(servers)}
    for c in clients:
        net.add_arc(source, cnode[c], 1)
        for s in adjacency[c]:
            net.add_arc(cnode[c], snode[s], 1)
    for s in servers:
        net.add_arc(snode[s], sink, per_server_cap)
    return max_flow(net).value == len(clients)


def opt_load(instance: ArrivalInstance, prefix_len: int | None = None) -> int:
    """Minimum achievable maximum load for the (servable) clients of a prefix.

    Clients without neighbors cannot be served by anything and are ignored.
    Found by binary search on the shared per-server capacity.
    """
    adjacency = instance.prefix_adjacency(prefix_len)
    if not adjacency:
        return 0
    lo, hi = 1, len(adjacency)
    while lo < hi:
        mid = (lo + hi) // 2
        if _covers(adjacency, mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def load_profile(state: MatchState, opt: int) -> LoadProfile:
    loads = {s: state.load(s) for s in range(len(state.clients_of_server))}
    return LoadProfile(loads, max(loads.values(), default=0), opt)


def run_capacitated(instance: ArrivalInstance) -> tuple[MatchState, RunLog]:
    """Drive the unit-capacity protocol over the server-copy expansion.

    Copy blocks are laid out in server order, so the copy-level tie-breaking
    is "original server index first, then copy index", and with capacities
    all 1 the expansion is the identity and the run log matches the plain
    engine's exactly.  Replacement counts are unchanged by the expansion.
    """
    if instance.capacities is None:
        raise ValueError("run_capacitated expects an instance with capacities")
    copies = CopyMap(instance.capacities)
    engine = SapEngine(_copy_instance(instance, copies))
    copy_state, log = engine.run()

    state = MatchState.fresh(instance.server_count, list(instance.capacities))
    state.arrived_count = copy_state.arrived_count
    for client, copy in enumerate(copy_state.server_of_client):
        if copy is None:
            state.server_of_client.append(None)
        else:
            original = copies.original(copy)
            state.server_of_client.append(original)
            state.clients_of_server[original].append(client)
    state.check_consistent()
    return state, log


def _next_opt(adjacency: dict[int, tuple[int, ...]], previous: int) -> int:
    """Opt after one more arrival: it moves by at most one, so probe before searching."""
    if not adjacency:
        return 0
    for candidate in (previous, previous + 1):
        if candidate >= 1 and _covers(adjacency, candidate):
            return candidate
    lo, hi = 1, len(adjacency)
    while lo < hi:
        mid = (lo + hi) // 2
        if _covers(adjacency, mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def run_minmax(instance: ArrivalInstance) -> tuple[MatchState, RunLog, list[EpochRecord]]:
    """Serve every servable client while keeping the maximum load optimal.

    Per arrival: recompute the optimal load.  If it grew, every server gains
    a slot (a new epoch) and the client goes straight to its smallest-index
    neighbor; otherwise augment along a shortest path to an underloaded
    server.  Clients with no neighbors are logged as unserved and excluded
    from the optimum.
    """
    if instance.capacities is not None:
        raise ValueError("min-max mode expects an uncapacitated instance")
    caps = [0] * instance.server_count
    engine = SapEngine(instance, capacity=caps)
    epochs: list[EpochRecord] = []
    adjacency: dict[int, tuple[int, ...]] = {}
    opt = 0
    for client in range(instance.client_count):
        engine.arrive(client)
        neighbors = instance.neighbors(client)
        if not neighbors:
            engine.log.record(client, None)
            continue
        adjacency[client] = neighbors
        new_opt = _next_opt(adjacency, opt)
        if new_opt > opt:
            opt = new_opt
            for s in range(instance.server_count):
                caps[s] = opt
            epochs.append(EpochRecord(opt, client))
            engine.augment(AugPath((client, neighbors[0])))
            engine.log.record(client, 1)
        else:
            path = engine.shortest_aug_path(client)
            if path is None:
                raise InvariantViolation(
                    f"no augmenting path for client {client} although opt did not grow"
                )
            engine.augment(path)
            engine.log.record(client, path.edge_count)
        max_load = max(engine.state.load(s) for s in range(instance.server_count))
        if max_load != opt:
            raise InvariantViolation(f"maximum load {max_load} differs from optimum {opt}")
    return engine.state, engine.log, epochs


def run_semi_matching(
    instance: ArrivalInstance, epsilon: Fraction | int | str
) -> tuple[MatchState, RunLog]:
    """Match within allowances ceil((1+eps) * necessity), recomputed per arrival.

    Necessities only grow as clients arrive, so allowances never shrink and
    previously placed clients always stay within them.  Searching with the
    allowance as the server capacity is the same as unit matching in a graph
    with one copy per allowance slot: copies of a server are interchangeable,
    so path lengths and load totals agree.
    """
    eps = Fraction(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    if instance.capacities is not None:
        raise ValueError("semi-matching mode expects an uncapacitated instance")
    if any(not neighbors for _, neighbors in instance.arrivals):
        raise ValueError("semi-matching requires every client to have a neighbor")

    caps = [0] * instance.server_count
    engine = SapEngine(instance, capacity=caps)
    factor = 1 + eps
    for client in range(instance.client_count):
        engine.arrive(client)
        flow = balanced_flow(
            instance.prefix_adjacency(client + 1), server_count=instance.server_count
        )
        for s in range(instance.server_count):
            allowance = math.ceil(factor * flow.necessity[s])
            if allowance < caps[s]:
                raise InvariantViolation(f"allowance of server {s} tried to shrink")
            caps[s] = allowance
        path = engine.shortest_aug_path(client)
        if path is None:
            raise InvariantViolation(
                f"client {client} has no augmenting path inside the allowances"
            )
        engine.augment(path)
        engine.log.record(client, path.edge_count)
        for s in range(instance.server_count):
            if engine.state.load(s) > caps[s]:
                raise InvariantViolation(f"server {s} exceeds its allowance")
    return engine.state, engine.log
