"""Lower bound on repair cost from information-flow cut constraints.

For a failed node, every choice of k-1 survivors together with the new node
must be able to drain the whole file: in the flow network where a virtual
source feeds each survivor its stored M/k fragments, each directed physical
link (i, j) carries at most z_ij, and a virtual collector attaches to the
new node and the chosen k-1 survivors, the max flow must reach M. The
bound minimizes sum(z) over all of these constraints at once.

The production solver works on the equivalent cut formulation and generates
violated cut inequalities lazily (each one extracted from an exact max-flow
min-cut computation), keeping every master LP small. A monolithic LP with
explicit per-subset flow variables is kept for cross-checking on tiny
instances, and `brute_force_bound` searches traffic vectors exhaustively on
a rational grid as an independent oracle. All arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations
from math import lcm

from .flows import max_flow
from .simplex import GE, LE, OPTIMAL, Constraint, constraint, solve_lp
from .topology import Topology


class BoundError(ValueError):
    pass


class InstanceTooLargeError(BoundError):
    """The exhaustive oracle refuses instances beyond desk scale."""


@dataclass(frozen=True)
class RepairScenario:
    """One failed node on a topology storing an (n, k) MDS code of M fragments.

    The new node occupies the failed node's position. Helpers are the
    survivors whose stored data feeds the repair; all survivors relay.
    """

    topology: Topology
    failed: int
    k: int
    M: int
    helpers: tuple = ()

    def __post_init__(self):
        n = self.topology.n
        if not 1 <= self.failed <= n:
            raise BoundError(f"failed node {self.failed} not in topology")
        if not 1 <= self.k <= n - 1:
            raise BoundError(f"k = {self.k} must be in [1, n-1]")
        if self.M % self.k != 0:
            raise BoundError(f"k = {self.k} must divide M = {self.M}")
        if not self.helpers:
            object.__setattr__(self, "helpers", tuple(self.survivors()))
        else:
            bad = [h for h in self.helpers if h == self.failed or not 1 <= h <= n]
            if bad:
                raise BoundError(f"invalid helpers {bad}")
            object.__setattr__(self, "helpers", tuple(sorted(set(self.helpers))))

    def survivors(self) -> list:
        return [v for v in range(1, self.topology.n + 1) if v != self.failed]

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.M, self.k)


@dataclass(frozen=True)
class Subgraph:
    """Per-directed-link repair traffic; cost is the plain sum (unit link cost)."""

    traffic: dict  # (u, v) -> Fraction >= 0

    def __post_init__(self):
        clean = {}
        for (u, v), amount in self.traffic.items():
            amt = Fraction(amount)
            if amt < 0:
                raise BoundError(f"negative traffic on ({u},{v})")
            if amt > 0:
                clean[(u, v)] = amt
        object.__setattr__(self, "traffic", clean)

    @property
    def cost(self) -> Fraction:
        return sum(self.traffic.values(), Fraction(0))

    def amount(self, u: int, v: int) -> Fraction:
        return self.traffic.get((u, v), Fraction(0))

    def to_json_obj(self) -> list:
        return [
            {"from": u, "to": v, "amount": str(amt)}
            for (u, v), amt in sorted(self.traffic.items())
        ]


def enumerate_scenarios(sc: RepairScenario) -> list:
    """All k-1 sized survivor subsets whose cut constraints must hold."""
    return [tuple(s) for s in combinations(sc.survivors(), sc.k - 1)]


# -- flow-network plumbing -------------------------------------------------
#
# Flow-network node ids: 0 = virtual source, 1..n = physical nodes,
# n + 1 = virtual collector.


def _links(sc: RepairScenario) -> list:
    return sc.topology.directed_links()


def _scaled_caps(sc: RepairScenario, z_values: dict, denom: int) -> dict:
    return {link: int(z_values.get(link, 0) * denom) for link in _links(sc)}


def _common_denominator(sc: RepairScenario, z_values: dict) -> int:
    d = sc.alpha.denominator
    for amt in z_values.values():
        d = lcm(d, Fraction(amt).denominator)
    return d


def _subset_arcs(sc: RepairScenario, caps: dict, subset, denom: int) -> list:
    n = sc.topology.n
    dc = n + 1
    alpha_scaled = int(sc.alpha * denom)
    big = alpha_scaled * len(sc.helpers)  # total supply; collector arcs never bind
    arcs = [(0, h, alpha_scaled) for h in sc.helpers]
    arcs.extend((u, v, c) for (u, v), c in caps.items() if c > 0)
    arcs.append((sc.failed, dc, big))
    arcs.extend((s, dc, big) for s in subset)
    return arcs


def _subset_feasible(sc: RepairScenario, caps: dict, subset, denom: int):
    """(feasible, cut) for one subset under integer-scaled capacities. The
    cut, returned only on failure, is a valid inequality sum(z中cut) >= rhs."""
    n = sc.topology.n
    target = sc.M * denom
    arcs = _subset_arcs(sc, caps, subset, denom)
    res = max_flow(n + 2, arcs, 0, n + 1, limit=target)
    if res.reached_limit or res.value >= target:
        return True, None
    side = res.source_side
    crossing_links = frozenset(
        (u, v) for (u, v) in _links(sc) if u in side and v not in side
    )
    source_arcs_cut = sum(1 for h in sc.helpers if h not in side)
    rhs = Fraction(sc.M) - Fraction(source_arcs_cut) * sc.alpha
    return False, (crossing_links, rhs)


def validate_subgraph(sc: RepairScenario, z) -> bool:
    """True iff every k-1 survivor subset can drain M under traffic z."""
    z_values = z.traffic if isinstance(z, Subgraph) else dict(z)
    denom = _common_denominator(sc, z_values)
    caps = _scaled_caps(sc, z_values, denom)
    for subset in enumerate_scenarios(sc):
        ok, _ = _subset_feasible(sc, caps, subset, denom)
        if not ok:
            return False
    return True


# -- lazy cut-generation LP --------------------------------------------------


def _solve_master(link_index: dict, cuts: list, extra: list) -> tuple:
    n_vars = len(link_index)
    cons = []
    for crossing, rhs in cuts:
        cons.append(
            constraint({link_index[l]: 1 for l in crossing}, GE, rhs, n_vars)
        )
    cons.extend(extra)
    res = solve_lp([Fraction(1)] * n_vars, cons)
    if res.status != OPTIMAL:  # pragma: no cover - master is always feasible
        raise BoundError(f"master LP unexpectedly {res.status}")
    return res.objective, res.x


def min_cost_lp(
    sc: RepairScenario,
    method: str = "cuts",
    extra_constraints: list | None = None,
    cut_batch: int = 40,
) -> tuple:
    """Exact lower bound of the repair cost and one optimal traffic vector.

    method="cuts" (default) solves the cut formulation with lazy constraint
    generation; method="monolithic" solves the explicit flow LP with one
    flow-variable set per survivor subset (tiny instances only; used as a
    cross-check of the production path).
    """
    if method == "monolithic":
        return _min_cost_lp_monolithic(sc, extra_constraints)
    if method != "cuts":
        raise BoundError(f"unknown method {method!r}")

    links = _links(sc)
    link_index = {l: i for i, l in enumerate(links)}
    subsets = enumerate_scenarios(sc)
    cuts: list = []
    seen_cuts: set = set()
    extra = list(extra_constraints or ())

    while True:
        value, x = _solve_master(link_index, cuts, extra)
        z_values = {l: x[i] for l, i in link_index.items()}
        denom = _common_denominator(sc, z_values)
        caps = _scaled_caps(sc, z_values, denom)
        new_cuts = []
        for subset in subsets:
            ok, cut = _subset_feasible(sc, caps, subset, denom)
            if not ok and cut is not None:
                key = cut[0]
                if key not in seen_cuts and cut[1] > 0:
                    seen_cuts.add(key)
                    new_cuts.append(cut)
                    if len(new_cuts) >= cut_batch:
                        break
        if not new_cuts:
            subgraph = Subgraph(
                {l: amt for l, amt in z_values.items() if amt > 0}
            )
            return value, subgraph
        cuts.extend(new_cuts)


def _min_cost_lp_monolithic(sc: RepairScenario, extra_constraints=None) -> tuple:
    """One LP: shared z variables plus a full flow-variable set per subset."""
    links = _links(sc)
    subsets = enumerate_scenarios(sc)
    n = sc.topology.n
    alpha = sc.alpha

    # Variable layout: z for each link, then per subset one flow variable per
    # arc of that subset's network (source arcs, link arcs, collector arcs).
    z_count = len(links)
    var_names = []
    arc_vars = []  # per subset: dict arc -> var index
    for subset in subsets:
        arcs = {}
        for h in sc.helpers:
            arcs[("src", h)] = z_count + len(var_names)
            var_names.append(None)
        for l in links:
            arcs[l] = z_count + len(var_names)
            var_names.append(None)
        for t in (sc.failed, *subset):
            arcs[(t, "dc")] = z_count + len(var_names)
            var_names.append(None)
        arc_vars.append(arcs)
    total_vars = z_count + len(var_names)
    link_index = {l: i for i, l in enumerate(links)}

    cons = []
    for subset, arcs in zip(subsets, arc_vars):
        # Source arc capacity.
        for h in sc.helpers:
            cons.append(constraint({arcs[("src", h)]: 1}, LE, alpha, total_vars))
        # Link arcs bounded by shared z.
        for l in links:
            cons.append(
                constraint({arcs[l]: 1, link_index[l]: -1}, LE, 0, total_vars)
            )
        # Conservation at every physical node.
        for v in range(1, n + 1):
            coeffs: dict = {}
            if v in sc.helpers:
                coeffs[arcs[("src", v)]] = coeffs.get(arcs[("src", v)], 0) + 1
            for (a, b) in links:
                if b == v:
                    coeffs[arcs[(a, b)]] = coeffs.get(arcs[(a, b)], 0) + 1
                if a == v:
                    coeffs[arcs[(a, b)]] = coeffs.get(arcs[(a, b)], 0) - 1
            if (v, "dc") in arcs:
                coeffs[arcs[(v, "dc")]] = coeffs.get(arcs[(v, "dc")], 0) - 1
            cons.append(constraint(coeffs, "==", 0, total_vars))
        # The collector drains at least M.
        demand = {arcs[(t, "dc")]: 1 for t in (sc.failed, *subset)}
        cons.append(constraint(demand, GE, sc.M, total_vars))

    for con in extra_constraints or ():
        padded = dict(enumerate(con.coeffs))
        cons.append(constraint(padded, con.rel, con.rhs, total_vars))

    objective = [Fraction(1)] * z_count + [Fraction(0)] * (total_vars - z_count)
    res = solve_lp(objective, cons)
    if res.status != OPTIMAL:
        raise BoundError(f"monolithic LP {res.status}")
    z_values = {l: res.x[i] for l, i in link_index.items()}
    return res.objective, Subgraph({l: a for l, a in z_values.items() if a > 0})


def upper_bound_constraint(sc: RepairScenario, link, cap) -> Constraint:
    """z_link <= cap, for re-optimization experiments on the cut master."""
    links = _links(sc)
    idx = links.index(tuple(link))
    return constraint({idx: 1}, LE, cap, len(links))


# -- exhaustive oracle -------------------------------------------------------


def brute_force_bound(
    sc: RepairScenario,
    granularity: int | None = None,
    max_cost: Fraction | None = None,
) -> Fraction:
    """Minimum feasible repair cost by exhaustive search over traffic vectors
    with entries in {0, 1/g, 2/g, ...}.

    Independent of the LP machinery: candidate vectors are validated by
    max-flow checks per survivor subset. Iterative deepening over the total
    cost guarantees the first feasible level is the minimum. Branches are
    pruned only by cut inequalities that provably hold for every feasible
    vector (seeded from the storage cuts, grown from failed max-flow
    certificates), so the search stays exhaustive.
    """
    n = sc.topology.n
    if n > 6:
        raise InstanceTooLargeError(
            f"exhaustive oracle accepts at most 6 nodes, got {n}"
        )
    g = granularity if granularity is not None else sc.k
    if g < 1:
        raise BoundError("granularity must be at least 1")
    if (sc.alpha * g).denominator != 1:
        raise BoundError(
            f"granularity {g} cannot represent the storage unit {sc.alpha}"
        )

    links = _links(sc)
    dim = len(links)
    link_index = {l: i for i, l in enumerate(links)}
    subsets = enumerate_scenarios(sc)
    cap_units = sc.M * g  # per-link traffic above M never helps a cut

    # Valid cut pool: (frozenset of link indices, rhs in units).
    cut_pool: list = []
    seen: set = set()

    def add_cut(crossing_links, rhs: Fraction) -> None:
        rhs_units = rhs * g
        idxs = frozenset(link_index[l] for l in crossing_links)
        key = idxs
        if rhs_units > 0 and key not in seen:
            seen.add(key)
            cut_pool.append((idxs, rhs_units))

    # Seed: for every subset S, traffic entering {failed} + S must cover
    # what the S members' own storage cannot.
    for subset in subsets:
        inside = set(subset) | {sc.failed}
        crossing = [
            (u, v) for (u, v) in links if u not in inside and v in inside
        ]
        add_cut(crossing, Fraction(sc.M) - Fraction(len(subset)) * sc.alpha)

    def feasible(units: list) -> bool:
        caps = {l: units[i] for l, i in link_index.items()}
        ok_all = True
        for subset in subsets:
            # Work in traffic units of 1/g: alpha and M scale by g.
            ok, cut = _subset_feasible(sc, caps, subset, g)
            if not ok:
                ok_all = False
                if cut is not None:
                    add_cut(cut[0], cut[1])
                break
        return ok_all

    # Deterministic variable order: links touched by many seed cuts first.
    weight = [0] * dim
    for idxs, _ in cut_pool:
        for i in idxs:
            weight[i] += 1
    order = sorted(range(dim), key=lambda i: (-weight[i], links[i]))

    ceiling = (
        max_cost * g
        if max_cost is not None
        else Fraction(sc.M * g * len(links))
    )

    level = 0
    while Fraction(level) <= ceiling:
        found = _dfs_level(order, links, dim, level, cap_units, cut_pool, feasible)
        if found:
            return Fraction(level, g)
        level += 1
    raise BoundError("no feasible traffic vector within the cost ceiling")


def _dfs_level(order, links, dim, budget, cap_units, cut_pool, feasible) -> bool:
    """Depth-first enumeration of all vectors with sum = budget (in units)."""
    units = [0] * dim

    def prune(pos: int, remaining: int) -> bool:
        # A learned cut kills the branch when even spending the whole
        # remaining budget inside the cut cannot reach its rhs.
        assigned = set(order[:pos])
        for idxs, rhs in cut_pool:
            have = sum(units[i] for i in idxs if i in assigned)
            open_room = remaining if any(i not in assigned for i in idxs) else 0
            if have + open_room < rhs:
                return True
        return False

    def rec(pos: int, remaining: int) -> bool:
        if pos == dim - 1:
            units[order[pos]] = remaining
            ok = remaining <= cap_units and feasible(units)
            units[order[pos]] = 0
            return ok
        if prune(pos, remaining):
            return False
        var = order[pos]
        for val in range(min(remaining, cap_units), -1, -1):
            units[var] = val
            if rec(pos + 1, remaining - val):
                units[var] = 0
                return True
        units[var] = 0
        return False

    return rec(0, budget)
