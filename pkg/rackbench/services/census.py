"""
Counting the markings of a graph that realize racks and quandles.

A marking assigns an automorphism R_v to every vertex v; it realizes a rack
when R_{R_a(b)} = R_a R_b R_a^-1 for all vertices a, b. The search assigns
vertices in index order and checks each such instance as soon as a, b and
R_a(b) are all assigned. When a, b < k and R_a(b) = k the instance forces R_k,
so that value is the only candidate tried at level k.
"""
import logging
import time
from itertools import product
from multiprocessing import Pool
from typing import Iterator, Optional, Sequence

import numpy as np
from sympy import divisor_sigma as _sympy_divisor_sigma

from rackbench.config import TABLE1_FAMILIES, TABLE1_MIN_ORDER, get_settings
from rackbench.errors import BudgetExceededError, OrderOutOfRangeError
from rackbench.models import CellStatus, CensusProgress, CensusResult, Table1, Table1Cell
from rackbench.utils.cayley import Marking
from rackbench.utils.graphs import AnyGraph, automorphism_group, cycle_graph
from rackbench.utils.io import family_graph
from rackbench.utils.perm import Perm, PermGroup, reflection_subgroups, reflections

logger = logging.getLogger(__name__)

# wall clock is polled once per this many visited nodes
_CLOCK_EVERY = 1024


class _AutTables:
    """Integer tables over the automorphism group: action, inverse action, conjugation."""

    def __init__(self, elements: Sequence[Perm], order: int):
        m = len(elements)
        e = np.array([p.images for p in elements], dtype=np.int64).reshape(m, order)
        inv = np.argsort(e, axis=1)
        index = {tuple(row): i for i, row in enumerate(e.tolist())}
        conj = []
        for i in range(m):
            # row j: e_i e_j e_i^-1
            rows = e[i][e[:, inv[i]]]
            conj.append([index[tuple(r)] for r in rows.tolist()])
        self.order = order
        self.size = m
        self.elements = list(elements)
        self.act = e.tolist()
        self.inv = inv.tolist()
        self.conj = conj

    def payload(self) -> tuple:
        return self.order, self.act, self.inv, self.conj


class _Stop(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class _MarkingSearch:
    def __init__(
        self,
        order: int,
        act: list[list[int]],
        inv: list[list[int]],
        conj: list[list[int]],
        quandles_only: bool = False,
        deadline: Optional[float] = None,
        node_budget: Optional[int] = None,
        collect: bool = False,
    ):
        self.n = order
        self.act = act
        self.inv = inv
        self.conj = conj
        self.deadline = deadline
        self.node_budget = node_budget
        self.collect = collect
        self.allowed = [
            [not quandles_only or row[v] == v for row in act] for v in range(order)
        ]
        self.candidates = [
            [i for i, ok in enumerate(self.allowed[v]) if ok] for v in range(order)
        ]
        self.assign = [-1] * order
        self.visited = 0
        self.leaves = 0
        self.racks = 0
        self.quandles = 0
        self.found: list[tuple[int, ...]] = []

    def progress(self, started: float) -> CensusProgress:
        return CensusProgress(
            nodes_visited=self.visited,
            leaves=self.leaves,
            racks=self.racks,
            quandles=self.quandles,
            elapsed=time.time() - started,
        )

    def _tick(self) -> None:
        self.visited += 1
        if self.node_budget is not None and self.visited > self.node_budget:
            raise _Stop(f"node budget of {self.node_budget} exhausted")
        if self.deadline is not None and self.visited % _CLOCK_EVERY == 0 and time.time() > self.deadline:
            raise _Stop("time budget exhausted")

    def _leaf(self, idempotent: bool) -> None:
        self.leaves += 1
        self.racks += 1
        if idempotent:
            self.quandles += 1
        if self.collect:
            self.found.append(tuple(self.assign))

    def run(self, roots: Optional[Sequence[int]] = None) -> None:
        if self.n == 0:
            self._leaf(True)
            return
        self._descend(0, True, roots)

    def _descend(self, k: int, idempotent: bool, roots: Optional[Sequence[int]] = None) -> None:
        if k == self.n:
            self._leaf(idempotent)
            return
        act, inv, conj, assign = self.act, self.inv, self.conj, self.assign

        forced = -1
        for a in range(k):
            ra = assign[a]
            b = inv[ra][k]
            if b < k:
                need = conj[ra][assign[b]]
                if forced == -1:
                    forced = need
                elif forced != need:
                    return
        if forced == -1:
            cands = self.candidates[k]
        elif self.allowed[k][forced]:
            cands = [forced]
        else:
            return
        if roots is not None:
            cands = [x for x in cands if x in roots]

        for x in cands:
            self._tick()
            if self._consistent(k, x):
                assign[k] = x
                self._descend(k + 1, idempotent and act[x][k] == k)
        assign[k] = -1

    def _consistent(self, k: int, x: int) -> bool:
        """Instances (k, b) and (a, k) whose third vertex R_a(b) is already assigned."""
        act, conj, assign = self.act, self.conj, self.assign
        rx = act[x]
        cx = conj[x]
        for b in range(k):
            c = rx[b]
            if c < k:
                if assign[c] != cx[assign[b]]:
                    return False
            elif c == k and x != cx[assign[b]]:
                return False
        c = rx[k]
        if c < k and assign[c] != x:
            return False
        for a in range(k):
            ra = assign[a]
            c = act[ra][k]
            if c < k:
                if assign[c] != conj[ra][x]:
                    return False
            elif c == k and x != conj[ra][x]:
                return False
        return True

    def run_unpruned(self) -> None:
        """Reference search: every assignment, each checked against every instance."""
        act, conj, n = self.act, self.conj, self.n
        for choice in product(*self.candidates):
            self._tick()
            self.leaves += 1
            if all(
                choice[act[choice[a]][b]] == conj[choice[a]][choice[b]]
                for a in range(n) for b in range(n)
            ):
                self.racks += 1
                if all(act[choice[v]][v] == v for v in range(n)):
                    self.quandles += 1
                if self.collect:
                    self.found.append(choice)


def _census_subtree(
    payload: tuple,
    quandles_only: bool,
    deadline: Optional[float],
    node_budget: Optional[int],
    root: int,
) -> tuple[int, int, int, int, Optional[str]]:
    """Worker entry point: count one R_0 subtree, reporting a budget stop instead of raising."""
    order, act, inv, conj = payload
    search = _MarkingSearch(order, act, inv, conj, quandles_only, deadline, node_budget)
    stopped = None
    try:
        search.run(roots=[root])
    except _Stop as exc:
        stopped = exc.reason
    return search.racks, search.quandles, search.visited, search.leaves, stopped


class CensusService:
    """Runs marking censuses under the configured time, node and worker settings."""

    def __init__(self):
        self.settings = get_settings()
        self._tables: dict[AnyGraph, _AutTables] = {}

    def tables(self, g: AnyGraph) -> _AutTables:
        if g not in self._tables:
            aut = automorphism_group(g, cap=self.settings.closure_cap)
            self._tables[g] = _AutTables(aut.elements(), g.order)
        return self._tables[g]

    def _deadline(self, budget_seconds: Optional[float], started: float) -> Optional[float]:
        seconds = self.settings.budget_seconds if budget_seconds is None else budget_seconds
        return started + seconds if seconds else None

    def mu_census(
        self,
        g: AnyGraph,
        budget_seconds: Optional[float] = None,
        budget_nodes: Optional[int] = None,
        jobs: Optional[int] = None,
        prune: bool = True,
        quandles_only: bool = False,
    ) -> CensusResult:
        """
        Count the markings of g realizing racks and quandles.

        Args:
            g: Graph or digraph
            budget_seconds: Wall clock limit (settings default; 0 disables)
            budget_nodes: Limit on visited search nodes, per worker when jobs > 1
            jobs: Worker processes splitting the R_0 branches (settings default)
            prune: False runs the unpruned reference search
            quandles_only: Restrict every R_v to automorphisms fixing v up front;
                mu_rack is then left as None

        Returns:
            CensusResult with labeled (not up-to-isomorphism) counts

        Raises:
            BudgetExceededError: with the partial CensusProgress attached
        """
        started = time.time()
        tables = self.tables(g)
        deadline = self._deadline(budget_seconds, started)
        if budget_nodes is None:
            budget_nodes = self.settings.budget_nodes
        jobs = jobs or self.settings.jobs
        total = tables.size ** g.order

        logger.info(
            "census on %d vertices, |Aut| = %d, %d raw markings, jobs=%d, prune=%s",
            g.order, tables.size, total, jobs, prune,
        )
        if prune and jobs > 1 and g.order > 0:
            progress = self._run_parallel(tables, quandles_only, deadline, budget_nodes, jobs, started)
        else:
            search = _MarkingSearch(*tables.payload(), quandles_only, deadline, budget_nodes)
            try:
                if prune:
                    search.run()
                else:
                    search.run_unpruned()
            except _Stop as exc:
                self._budget_exceeded(exc.reason, search.progress(started))
            progress = search.progress(started)

        result = CensusResult(
            mu_rack=None if quandles_only else progress.racks,
            mu_qnd=progress.quandles,
            total_markings=total,
            elapsed=time.time() - started,
            nodes_explored=progress.nodes_visited,
            leaves=progress.leaves,
        )
        logger.info(
            "census done: mu_rack=%s mu_qnd=%d in %.2fs (%d nodes, %d leaves)",
            result.mu_rack, result.mu_qnd, result.elapsed, result.nodes_explored, result.leaves,
        )
        return result

    def _run_parallel(
        self,
        tables: _AutTables,
        quandles_only: bool,
        deadline: Optional[float],
        budget_nodes: Optional[int],
        jobs: int,
        started: float,
    ) -> CensusProgress:
        payload = tables.payload()
        roots = range(tables.size)
        arguments = [(payload, quandles_only, deadline, budget_nodes, r) for r in roots]
        with Pool(jobs) as pool:
            results = pool.starmap(_census_subtree, arguments)

        progress = CensusProgress()
        stopped = None
        for racks, quandles, visited, leaves, reason in results:
            progress = progress.merge(CensusProgress(
                nodes_visited=visited, leaves=leaves, racks=racks, quandles=quandles,
            ))
            stopped = stopped or reason
        progress.elapsed = time.time() - started
        if stopped:
            self._budget_exceeded(stopped, progress)
        return progress

    def _budget_exceeded(self, reason: str, progress: CensusProgress) -> None:
        logger.warning(
            "census stopped (%s) after %d nodes: %d racks, %d quandles so far",
            reason, progress.nodes_visited, progress.racks, progress.quandles,
        )
        raise BudgetExceededError(f"census {reason}", progress=progress)

    def quandle_census(
        self,
        g: AnyGraph,
        budget_seconds: Optional[float] = None,
        budget_nodes: Optional[int] = None,
        jobs: Optional[int] = None,
    ) -> int:
        """mu_qnd(g), searching only over q-markings (R_v(v) = v for every v)."""
        result = self.mu_census(
            g, budget_seconds=budget_seconds, budget_nodes=budget_nodes, jobs=jobs, quandles_only=True,
        )
        return result.mu_qnd

    def enumerate_markings(
        self,
        g: AnyGraph,
        quandles_only: bool = False,
        budget_seconds: Optional[float] = None,
        prune: bool = True,
    ) -> Iterator[tuple[Perm, ...]]:
        """
        Yield the assignments (R_0, ..., R_{n-1}) realizing racks, or quandles
        with ``quandles_only``, in lexicographic order of automorphism index.
        """
        started = time.time()
        tables = self.tables(g)
        search = _MarkingSearch(
            *tables.payload(),
            quandles_only=quandles_only,
            deadline=self._deadline(budget_seconds, started),
            collect=True,
        )
        try:
            if prune:
                search.run()
            else:
                search.run_unpruned()
        except _Stop as exc:
            self._budget_exceeded(exc.reason, search.progress(started))
        for choice in search.found:
            yield tuple(tables.elements[i] for i in choice)

    def reflection_markings(self, n: int) -> list[Marking]:
        """
        One quandle marking of C_n per subgroup G of D_n that is trivial or
        generated by reflections, in the order of ``reflection_subgroups(n)``.

        Each R_v is the identity or s_v: w -> 2v - w, the one reflection fixing v.
        A nontrivial G contains the reflections w -> k - w for k in a coset
        r + dZ_n with 0 <= r < d, d | n. It is paired with the marking whose
        reflecting vertices are {v : 2v = r mod d} when d is odd and r + dZ_n when
        d is even. Both rules give a single coset of dZ_n, every coset is hit once,
        and the trivial group gets the all-identity marking.
        """
        if n < 3:
            raise OrderOutOfRangeError(f"reflection markings need n >= 3, got {n}")
        graph = cycle_graph(n)
        refls = [r.perm for r in reflections(n)]
        ident = Perm.identity(n)
        markings = []
        for group in reflection_subgroups(n):
            support = _reflecting_vertices(group, n)
            assignment = tuple(refls[2 * v % n] if v in support else ident for v in range(n))
            markings.append(Marking(graph=graph, assignment=assignment))
        logger.debug("%d reflection markings of C_%d", len(markings), n)
        return markings

    def census_table1(
        self,
        max_orders: Optional[dict[str, int]] = None,
        columns: Optional[int] = None,
        cell_seconds: Optional[float] = None,
        jobs: Optional[int] = None,
    ) -> Table1:
        """
        Rows for complete graphs K_n, stars K_{1,n-1} and cycles C_n, columns
        n = 0..columns-1. Orders past the configured maximum or past the per-cell
        budget become "?"; orders where the family is undefined become "-".
        """
        settings = self.settings
        columns = settings.table1_columns if columns is None else columns
        cell_seconds = settings.table1_cell_seconds if cell_seconds is None else cell_seconds
        limits = {
            "complete": settings.table1_max_complete,
            "star": settings.table1_max_star,
            "cycle": settings.table1_max_cycle,
        }
        limits.update(max_orders or {})

        rows: dict[str, list[Table1Cell]] = {}
        for family in TABLE1_FAMILIES:
            cells = []
            for n in range(columns):
                if n < TABLE1_MIN_ORDER[family]:
                    cells.append(Table1Cell(family=family, n=n, status=CellStatus.UNDEFINED))
                    continue
                if n > limits[family]:
                    cells.append(Table1Cell(family=family, n=n, status=CellStatus.UNKNOWN))
                    continue
                try:
                    result = self.mu_census(family_graph(family, n), budget_seconds=cell_seconds, jobs=jobs)
                except BudgetExceededError:
                    cells.append(Table1Cell(family=family, n=n, status=CellStatus.UNKNOWN))
                    continue
                cells.append(Table1Cell(
                    family=family, n=n, status=CellStatus.OK,
                    mu_rack=result.mu_rack, mu_qnd=result.mu_qnd,
                ))
            rows[family] = cells
        return Table1(columns=columns, rows=rows)


def _reflecting_vertices(group: PermGroup, n: int) -> frozenset[int]:
    # w -> k - w sends 0 to k and 1 to k - 1; rotations send 1 to k + 1
    axes = sorted(p.images[0] for p in group.elements() if p.images[1] == (p.images[0] - 1) % n)
    if not axes:
        return frozenset()
    d, r = n // len(axes), axes[0]
    if d % 2:
        return frozenset(v for v in range(n) if (2 * v - r) % d == 0)
    return frozenset(v for v in range(n) if (v - r) % d == 0)


def mu_rack_path(n: int) -> int:
    """2^k for P_{2k}, 2^(k+1) for P_{2k+1}."""
    if n < 2:
        raise OrderOutOfRangeError(f"path graph needs n >= 2, got {n}")
    return 2 ** (n // 2) if n % 2 == 0 else 2 ** (n // 2 + 1)


def mu_qnd_path(n: int) -> int:
    if n < 2:
        raise OrderOutOfRangeError(f"path graph needs n >= 2, got {n}")
    return 1 if n % 2 == 0 else 2


def divisor_sigma(n: int) -> int:
    if n < 1:
        raise OrderOutOfRangeError(f"divisor sum needs n >= 1, got {n}")
    return int(_sympy_divisor_sigma(n))


def mu_qnd_cycle(n: int) -> int:
    """The number of quandle-realizing markings of C_n."""
    if n < 3:
        raise OrderOutOfRangeError(f"cycle graph needs n >= 3, got {n}")
    return divisor_sigma(n) + 1


census_service = CensusService()
