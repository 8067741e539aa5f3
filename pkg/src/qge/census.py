"""Short-cycle censuses on regular graphs.

Two sets are computed per horizon t:

* cycle bonds: undirected edges lying on a closed non-backtracking walk of
  length at most t (edge indices into Graph.edges);
* near-cycle bonds: directed bonds b0 such that for some split t1 + t2 = t
  with t2 >= 2 there is a non-backtracking walk of length <= t1 from b0 to a
  directed bond lying on a closed walk of length <= 2 t2.

Distance from a directed bond to a cycle is measured by forward
non-backtracking extension ending on a directed cycle bond.  Counted this
way, |near(t)| <= (d-1)^(t-1)/(d-2) * |cycle bonds(2t)| holds exactly as an
integer inequality when the right-hand census counts directed bonds
(2 bonds per edge); `lemma_sides` packages that comparison.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .bonds import BondIndex
from .errors import ParameterError, ValidationError, WorkBudgetError
from .graphs import Graph, girth

__all__ = [
    "CensusReport",
    "cycle_bond_census",
    "near_cycle_census",
    "census_report",
    "lemma_sides",
    "min_return_lengths",
]

DEFAULT_WORK_BUDGET = 100_000_000


def _check_budget(g: Graph, t: int, work_budget: int) -> None:
    cost = 2 * g.B * t * (g.d - 1) ** t
    if cost > work_budget:
        raise WorkBudgetError(
            f"census at t={t} estimated cost {cost} exceeds budget {work_budget}"
        )


def min_return_lengths(bi: BondIndex, cap: int) -> list[int | None]:
    """For every directed bond, the length of the shortest closed
    non-backtracking walk through it, or None if longer than cap.

    Breadth-first search over the non-backtracking successor relation; the
    first return to the starting bond gives the minimum length.
    """
    two_b = bi.num_directed
    succ = bi.successors
    out: list[int | None] = [None] * two_b
    for b0 in range(bi.B):
        dist = [-1] * two_b
        queue = deque()
        for c in succ[b0]:
            dist[c] = 1
            queue.append(c)
        found = None
        while queue:
            b = queue.popleft()
            if dist[b] >= cap:
                continue
            for c in succ[b]:
                if c == b0:
                    found = dist[b] + 1
                    queue.clear()
                    break
                if dist[c] < 0:
                    dist[c] = dist[b] + 1
                    queue.append(c)
        if found is not None and found <= cap:
            # a closed walk through b0 reverses to one through rev(b0)
            out[b0] = found
            out[b0 + bi.B] = found
    return out


def cycle_bond_census(
    g: Graph, t: int, work_budget: int = DEFAULT_WORK_BUDGET
) -> frozenset[int]:
    """Edge indices of all bonds on a closed non-backtracking walk of
    length <= t."""
    if t < 3:
        raise ParameterError(f"cycle census horizon t={t} must be >= 3")
    _check_budget(g, t, work_budget)
    ret = min_return_lengths(g.bond_index, t)
    return frozenset(e for e in range(g.B) if ret[e] is not None and ret[e] <= t)


def near_cycle_census(
    g: Graph, t: int, work_budget: int = DEFAULT_WORK_BUDGET
) -> frozenset[int]:
    """Directed bond indices within non-backtracking distance t1 of a closed
    walk of length <= 2 t2, for some t1 + t2 = t with t2 >= 2."""
    if t < 2:
        raise ParameterError(f"near-cycle census horizon t={t} must be >= 2")
    _check_budget(g, t, work_budget)
    bi = g.bond_index
    two_b = bi.num_directed
    ret = min_return_lengths(bi, 2 * t)

    # predecessors in the non-backtracking bond digraph
    preds: list[list[int]] = [[] for _ in range(two_b)]
    for a in range(two_b):
        for c in bi.successors[a]:
            preds[c].append(a)

    members: set[int] = set()
    for t2 in range(2, t + 1):
        t1 = t - t2
        sources = [b for b in range(two_b) if ret[b] is not None and ret[b] <= 2 * t2]
        if not sources:
            continue
        dist = [-1] * two_b
        queue = deque()
        for b in sources:
            dist[b] = 0
            queue.append(b)
        members.update(sources)
        while queue:
            b = queue.popleft()
            if dist[b] >= t1:
                continue
            for a in preds[b]:
                if dist[a] < 0:
                    dist[a] = dist[b] + 1
                    queue.append(a)
                    members.add(a)
    return frozenset(members)


@dataclass(frozen=True)
class CensusReport:
    """Both censuses at one horizon t (edge indices / directed bond indices)."""

    t: int
    c_set: frozenset[int]
    t_set: frozenset[int]

    def to_json_dict(self) -> dict:
        return {
            "t": self.t,
            "c_bonds": sorted(self.c_set),
            "t_bonds": sorted(self.t_set),
        }


def census_report(g: Graph, t: int, work_budget: int = DEFAULT_WORK_BUDGET) -> CensusReport:
    if t < 2:
        raise ParameterError(f"census horizon t={t} must be >= 2")
    c_set = cycle_bond_census(g, t, work_budget) if t >= 3 else frozenset()
    t_set = near_cycle_census(g, t, work_budget)
    gth = girth(g)
    if gth is not None and t < gth and c_set:
        raise ValidationError(
            f"cycle census non-empty at t={t} below girth {gth}; census is corrupt"
        )
    return CensusReport(t=t, c_set=c_set, t_set=t_set)


def lemma_sides(
    g: Graph, t: int, work_budget: int = DEFAULT_WORK_BUDGET
) -> tuple[int, Fraction]:
    """Exact integer sides of the census inequality at horizon t.

    Returns (|near(t)|, (d-1)^(t-1)/(d-2) * |directed cycle bonds(2t)|); the
    left side never exceeds the right.
    """
    if g.d < 3:
        raise ParameterError("census inequality needs d >= 3")
    t_count = len(near_cycle_census(g, t, work_budget))
    c_directed = 2 * len(cycle_bond_census(g, 2 * t, work_budget))
    bound = Fraction((g.d - 1) ** (t - 1) * c_directed, g.d - 2)
    return t_count, bound
