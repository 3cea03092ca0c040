from itertools import combinations

import pytest
from pydantic import ValidationError

from rackbench.errors import BudgetExceededError, OrderOutOfRangeError
from rackbench.models import CellStatus, CensusProgress, CensusResult
from rackbench.services.census import (
    CensusService,
    census_service,
    divisor_sigma,
    mu_qnd_cycle,
    mu_qnd_path,
    mu_rack_path,
)
from rackbench.utils.algebra import RightQuasigroup, is_quandle, is_rack
from rackbench.utils.cayley import Marking, is_marking, is_q_marking
from rackbench.utils.graphs import (
    Graph,
    automorphism_group,
    complement,
    complete_graph,
    cycle_graph,
    path_graph,
    star_graph,
)
from rackbench.utils.perm import Perm

TABLE1 = [
    ("K_0", complete_graph(0), (1, 1)),
    ("K_1", complete_graph(1), (1, 1)),
    ("K_2", complete_graph(2), (2, 1)),
    ("K_3", complete_graph(3), (13, 5)),
    ("K_4", complete_graph(4), (114, 36)),
    ("K_1,0", star_graph(0), (1, 1)),
    ("K_1,1", star_graph(1), (2, 1)),
    ("K_1,2", star_graph(2), (4, 2)),
    ("K_1,3", star_graph(3), (31, 13)),
    pytest.param("K_1,4", star_graph(4), (390, 114), marks=pytest.mark.slow),
    ("C_3", cycle_graph(3), (13, 5)),
    ("C_4", cycle_graph(4), (32, 8)),
    ("C_5", cycle_graph(5), (41, 7)),
    ("C_6", cycle_graph(6), (108, 13)),
    pytest.param("C_7", cycle_graph(7), (113, 9), marks=pytest.mark.slow),
]


@pytest.mark.parametrize("name,graph,expected", TABLE1, ids=lambda p: p if isinstance(p, str) else None)
def test_table1_entries(name, graph, expected):
    result = census_service.mu_census(graph)
    assert result.counts() == expected


@pytest.mark.parametrize("n", range(2, 11))
def test_path_closed_forms(n):
    result = census_service.mu_census(path_graph(n))
    assert result.counts() == (mu_rack_path(n), mu_qnd_path(n))


def test_path_closed_form_values():
    assert (mu_rack_path(2), mu_qnd_path(2)) == (2, 1)
    assert (mu_rack_path(4), mu_qnd_path(4)) == (4, 1)
    assert (mu_rack_path(5), mu_qnd_path(5)) == (8, 2)
    with pytest.raises(OrderOutOfRangeError):
        mu_rack_path(1)
    with pytest.raises(OrderOutOfRangeError):
        mu_qnd_path(1)


def test_divisor_sigma():
    assert [divisor_sigma(n) for n in range(1, 8)] == [1, 3, 4, 7, 6, 12, 8]
    with pytest.raises(OrderOutOfRangeError):
        divisor_sigma(0)


@pytest.mark.parametrize("n,expected", [(3, 5), (4, 8), (5, 7), (6, 13), (7, 9)])
def test_mu_qnd_cycle(n, expected):
    assert mu_qnd_cycle(n) == expected


def test_mu_qnd_cycle_too_small():
    with pytest.raises(OrderOutOfRangeError):
        mu_qnd_cycle(2)


@pytest.mark.parametrize("n", range(3, 9))
def test_quandle_census_of_cycles(n):
    assert census_service.quandle_census(cycle_graph(n)) == mu_qnd_cycle(n)


def test_quandle_census_examples():
    assert census_service.quandle_census(complete_graph(3)) == 5
    assert census_service.quandle_census(path_graph(6)) == 1


def test_quandles_only_leaves_rack_count_unset():
    result = census_service.mu_census(cycle_graph(5), quandles_only=True)
    assert result.counts() == (None, 7)
    assert result.to_json()["mu_rack"] is None


def test_nodes_explored_counts_visited_nodes():
    graph = star_graph(3)
    pruned = census_service.mu_census(graph)
    assert pruned.leaves == pruned.mu_rack
    assert pruned.nodes_explored >= pruned.leaves
    unpruned = census_service.mu_census(graph, prune=False)
    assert unpruned.leaves == unpruned.nodes_explored == unpruned.total_markings


@pytest.mark.parametrize("n", range(3, 8))
def test_reflection_markings_are_the_quandle_markings(n):
    markings = census_service.reflection_markings(n)
    quandle_markings = set(census_service.enumerate_markings(cycle_graph(n), quandles_only=True))
    assert {m.assignment for m in markings} == quandle_markings


@pytest.mark.parametrize("n", range(3, 31))
def test_reflection_markings_count_and_realize_quandles(n):
    markings = census_service.reflection_markings(n)
    assert len(markings) == divisor_sigma(n) + 1
    assert len({m.assignment for m in markings}) == len(markings)
    aut = automorphism_group(cycle_graph(n)).element_set()
    for m in markings:
        assert all(p in aut and p(v) == v for v, p in enumerate(m.assignment))
        assert is_quandle(m.realized())
    assert is_q_marking(markings[-1])


def test_reflection_markings_follow_subgroup_order():
    markings = census_service.reflection_markings(4)
    ident = Perm.identity(4)
    assert markings[0].assignment == (ident,) * 4
    # D_4 itself marks every vertex with the reflection through it
    assert all(not p.is_identity() for p in markings[-1].assignment)
    # singleton reflection groups pair with single reflecting vertices
    singles = [m for m in markings if sum(not p.is_identity() for p in m.assignment) == 1]
    assert len(singles) == 4


def test_reflection_markings_too_small():
    with pytest.raises(OrderOutOfRangeError):
        census_service.reflection_markings(2)


@pytest.mark.parametrize("graph", [
    complete_graph(3), star_graph(3), cycle_graph(4), path_graph(5), complete_graph(2),
], ids=["K_3", "K_1,3", "C_4", "P_5", "K_2"])
def test_pruned_search_matches_unpruned(graph):
    pruned = census_service.mu_census(graph)
    unpruned = census_service.mu_census(graph, prune=False)
    assert pruned.counts() == unpruned.counts()
    assert set(census_service.enumerate_markings(graph)) == set(
        census_service.enumerate_markings(graph, prune=False)
    )


def test_enumerated_markings_realize_racks():
    graph = star_graph(3)
    found = list(census_service.enumerate_markings(graph))
    assert len(found) == 31
    for assignment in found:
        m = Marking(graph=graph, assignment=assignment)
        assert is_marking(m)
        assert is_rack(m.realized())
    assert sum(1 for a in found if is_quandle(RightQuasigroup.from_perms(a))) == 13


def test_total_markings():
    for graph in (complete_graph(3), cycle_graph(5), star_graph(3), path_graph(4)):
        result = census_service.mu_census(graph)
        assert result.total_markings == automorphism_group(graph).order() ** graph.order


def test_complement_invariance(rng):
    graphs = [path_graph(4), star_graph(3), cycle_graph(5)]
    for _ in range(8):
        n = rng.randint(2, 4)
        graphs.append(Graph(order=n, edges=frozenset(
            (u, v) for u, v in combinations(range(n), 2) if rng.random() < 0.5
        )))
    for g in graphs:
        assert census_service.mu_census(g).counts() == census_service.mu_census(complement(g)).counts()


def test_counts_do_not_depend_on_jobs():
    for graph in (cycle_graph(5), complete_graph(3), star_graph(3)):
        serial = census_service.mu_census(graph, jobs=1)
        parallel = census_service.mu_census(graph, jobs=2)
        assert serial.counts() == parallel.counts()
        assert serial.total_markings == parallel.total_markings


def test_node_budget_raises_with_progress():
    with pytest.raises(BudgetExceededError) as excinfo:
        census_service.mu_census(cycle_graph(6), budget_nodes=10)
    progress = excinfo.value.progress
    assert isinstance(progress, CensusProgress)
    assert progress.nodes_visited == 11
    assert progress.racks <= 108


def test_time_budget_raises():
    with pytest.raises(BudgetExceededError, match="time budget"):
        census_service.mu_census(star_graph(4), budget_seconds=1e-9)


def test_parallel_budget_stop():
    with pytest.raises(BudgetExceededError):
        census_service.mu_census(cycle_graph(6), budget_nodes=5, jobs=2)


def test_census_result_validation():
    with pytest.raises(ValidationError):
        CensusResult(mu_rack=1, mu_qnd=2, total_markings=3, elapsed=0.0)
    with pytest.raises(ValidationError):
        CensusResult(mu_rack=4, mu_qnd=2, total_markings=3, elapsed=0.0)
    with pytest.raises(ValidationError):
        CensusResult(mu_rack=13, mu_qnd=5, total_markings=216, elapsed=0.0, leaves=217)
    assert CensusResult(mu_qnd=5, total_markings=216, elapsed=0.0).mu_rack is None
    result = CensusResult(mu_rack=13, mu_qnd=5, total_markings=216, elapsed=0.012)
    assert result.to_json() == {"mu_rack": 13, "mu_qnd": 5, "total_markings": 216, "elapsed_ms": 12}


def test_empty_graph_has_one_marking():
    result = census_service.mu_census(complete_graph(0))
    assert result.counts() == (1, 1)
    assert result.total_markings == 1


def test_aut_tables_are_cached():
    service = CensusService()
    assert service.tables(cycle_graph(5)) is service.tables(cycle_graph(5))


def test_census_table1_small_limits():
    table = census_service.census_table1(
        max_orders={"complete": 3, "star": 2, "cycle": 3}, columns=5, cell_seconds=60,
    )
    assert list(table.rows) == ["complete", "star", "cycle"]
    texts = {family: [c.text() for c in cells] for family, cells in table.rows.items()}
    assert texts["complete"] == ["(1,1)", "(1,1)", "(2,1)", "(13,5)", "?"]
    assert texts["star"] == ["-", "(1,1)", "(2,1)", "?", "?"]
    assert texts["cycle"] == ["-", "-", "-", "(13,5)", "?"]


def test_census_table1_budget_cells_become_unknown():
    table = census_service.census_table1(
        max_orders={"complete": 3, "star": 5, "cycle": 3}, columns=6, cell_seconds=1e-9,
    )
    big_star = table.rows["star"][5]
    assert big_star.status == CellStatus.UNKNOWN
    assert big_star.mu_rack is None
    assert table.rows["complete"][3].text() == "(13,5)"
    assert table.rows["cycle"][3].text() == "(13,5)"
