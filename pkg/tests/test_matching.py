"""Baseline engine: arrivals, shortest augmenting paths, augmentation, run logs."""

from __future__ import annotations

import random
from typing import Optional, Sequence

import pytest
from hypothesis import given, settings

from sapmatch import ArrivalInstance, AugPath, SapEngine, hopcroft_karp_size, run_sap
from conftest import instance_corpus, small_instances


def exhaustive_shortest_alternating(
    neighbors: Sequence[Sequence[int]],
    assignment: Sequence[Optional[int]],
    start: int,
) -> Optional[int]:
    """Enumerate every simple alternating path from `start`; min edges to a free server."""
    occupant: dict[int, int] = {}
    for c, s in enumerate(assignment):
        if s is not None:
            occupant[s] = c
    best: Optional[int] = None

    def from_client(c: int, used_servers: set[int], used_clients: set[int], edges: int):
        nonlocal best
        for s in neighbors[c]:
            if s == assignment[c] or s in used_servers:
                continue
            if s not in occupant:
                if best is None or edges + 1 < best:
                    best = edges + 1
                continue
            c2 = occupant[s]
            if c2 in used_clients:
                continue
            from_client(c2, used_servers | {s}, used_clients | {c2}, edges + 2)

    from_client(start, set(), {start}, 0)
    return best


class TestArrive:
    def test_first_arrival(self):
        inst = ArrivalInstance.build(2, [[0], [1]])
        eng = SapEngine(inst)
        eng.arrive(0)
        assert eng.state.arrived_count == 1
        assert eng.state.matched_count() == 0

    def test_double_arrival_rejected(self):
        eng = SapEngine(ArrivalInstance.build(2, [[0], [1]]))
        eng.arrive(0)
        with pytest.raises(ValueError):
            eng.arrive(0)

    def test_out_of_order_arrival_rejected(self):
        inst = ArrivalInstance.build(3, [[0], [1], [2], [0], [1], [2]])
        eng = SapEngine(inst)
        for c in range(4):
            eng.arrive(c)
        with pytest.raises(ValueError):
            eng.arrive(5)


class TestShortestAugPath:
    def test_direct_edge(self):
        eng = SapEngine(ArrivalInstance.build(1, [[0]]))
        eng.arrive(0)
        path = eng.shortest_aug_path(0)
        assert path.vertices == (0, 0)
        assert path.edge_count == 1

    def test_saturated_component(self):
        eng = SapEngine(ArrivalInstance.build(1, [[0], [0]]))
        eng.step(0)
        eng.arrive(1)
        assert eng.shortest_aug_path(1) is None

    def test_not_arrived_rejected(self):
        eng = SapEngine(ArrivalInstance.build(1, [[0]]))
        with pytest.raises(ValueError):
            eng.shortest_aug_path(0)

    def test_matched_client_rejected(self):
        eng = SapEngine(ArrivalInstance.build(1, [[0]]))
        eng.step(0)
        with pytest.raises(ValueError):
            eng.shortest_aug_path(0)

    def test_matches_exhaustive_enumeration(self):
        rng = random.Random(99)
        for _ in range(150):
            servers = rng.randint(1, 8)
            clients = rng.randint(1, 8)
            lists = [
                sorted(rng.sample(range(servers), rng.randint(0, servers)))
                for _ in range(clients)
            ]
            inst = ArrivalInstance.build(servers, lists)
            eng = SapEngine(inst)
            neighbors = [inst.neighbors(c) for c in range(clients)]
            for c in range(clients):
                eng.arrive(c)
                want = exhaustive_shortest_alternating(
                    neighbors, eng.state.server_of_client, c
                )
                path = eng.shortest_aug_path(c)
                got = None if path is None else path.edge_count
                assert got == want
                if path is not None:
                    eng.augment(path)


class TestAugment:
    def test_replacement_arithmetic(self):
        # One gadget per path length: 1, 3, and 5 edges.
        from sapmatch import gen_star_chain

        _, log = run_sap(gen_star_chain(3))
        by_len = {r.path_edges: r.replacements for r in log.records}
        assert by_len[1] == 0
        assert by_len[3] == 1
        assert by_len[5] == 2

    def test_matching_grows_by_one(self):
        inst = ArrivalInstance.build(2, [[0, 1], [0]])
        eng = SapEngine(inst)
        eng.step(0)
        eng.arrive(1)
        before = eng.state.matched_count()
        path = eng.shortest_aug_path(1)
        assert path.edge_count == 3
        assert eng.augment(path) == 1
        assert eng.state.matched_count() == before + 1
        eng.state.check_consistent()

    def test_stale_path_rejected(self):
        inst = ArrivalInstance.build(2, [[0], [0, 1]])
        eng = SapEngine(inst)
        eng.arrive(0)
        path = eng.shortest_aug_path(0)
        eng.augment(path)
        with pytest.raises(ValueError):
            eng.augment(path)

    def test_bad_shape_rejected(self):
        with pytest.raises(ValueError):
            AugPath((0,))
        with pytest.raises(ValueError):
            AugPath((0, 1, 2))


class TestRunSap:
    def test_star_only_first_matches(self):
        _, log = run_sap(ArrivalInstance.build(1, [[0], [0], [0]]))
        assert [r.matched for r in log.records] == [True, False, False]
        assert log.total_replacements == 0

    def test_complete_4x4_no_replacements(self):
        from sapmatch import gen_complete

        state, log = run_sap(gen_complete(4, 4))
        assert log.matched_count() == 4
        assert log.total_replacements == 0
        # smallest-index tie-break: client i sits on server i
        assert state.server_of_client == [0, 1, 2, 3]

    def test_capacitated_instance_rejected(self):
        inst = ArrivalInstance.build(1, [[0]], capacities=[2])
        with pytest.raises(ValueError):
            run_sap(inst)

    def test_prefix_sizes_match_static_maximum(self, medium_corpus):
        for inst in medium_corpus:
            eng = SapEngine(inst)
            neighbors: list[tuple[int, ...]] = []
            size = 0
            for c in range(inst.client_count):
                neighbors.append(inst.neighbors(c))
                size += 1 if eng.step(c).matched else 0
                assert size == hopcroft_karp_size(neighbors, inst.server_count)

    def test_matched_clients_stay_matched(self, medium_corpus):
        for inst in medium_corpus[:10]:
            eng = SapEngine(inst)
            matched_at_arrival: list[bool] = []
            for c in range(inst.client_count):
                matched_at_arrival.append(eng.step(c).matched)
                for other in range(c + 1):
                    # matched iff it was matched the moment it arrived
                    assert (eng.state.server_of_client[other] is not None) == (
                        matched_at_arrival[other]
                    )


class TestRunLog:
    def test_cumulative_fields_are_sums(self, medium_corpus):
        for inst in medium_corpus[:8]:
            _, log = run_sap(inst)
            assert log.total_replacements == sum(r.replacements for r in log.records)
            assert log.total_path_edges == sum(r.path_edges or 0 for r in log.records)

    def test_long_path_counters_match_records(self, medium_corpus):
        for inst in medium_corpus[:8]:
            _, log = run_sap(inst)
            h = 1
            while h <= 2 * inst.client_count:
                assert log.long_path_counts.get(h, 0) == log.count_paths_longer_than(h)
                h *= 2


@settings(max_examples=60, deadline=None)
@given(small_instances(allow_isolated=True))
def test_property_prefix_maximality(inst: ArrivalInstance):
    eng = SapEngine(inst)
    neighbors: list[tuple[int, ...]] = []
    size = 0
    for c in range(inst.client_count):
        neighbors.append(inst.neighbors(c))
        size += 1 if eng.step(c).matched else 0
        assert size == hopcroft_karp_size(neighbors, inst.server_count)
    eng.state.check_consistent()


def test_corpus_builder_respects_bounds():
    for inst in instance_corpus(5, seed=1, max_clients=9, max_servers=4):
        assert inst.client_count <= 9
        assert inst.server_count <= 4
