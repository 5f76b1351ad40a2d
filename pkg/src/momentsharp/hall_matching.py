"""Hall/Strassen feasibility for the (N, P, dominance) bipartite graph.

Two deciders are provided: literal subset enumeration over N, and an exact
integral max-flow whose min cut yields a violating subset when one exists.
A feasible flow is turned into the fractional matching certificate.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .partitions import Partition, dominance_leq, poset
from .weights import WeightTable

HOLDS = "holds"
VIOLATED = "violated"
ABORTED = "aborted_too_large"

DEFAULT_SUBSET_CAP = 20


class HallViolated(RuntimeError):
    pass


@dataclass(frozen=True)
class BipartiteInstance:
    d: int
    q: int
    n_side: tuple[tuple[int, Fraction], ...]
    p_side: tuple[tuple[int, Fraction], ...]
    edges: tuple[tuple[int, int], ...]

    def neighbors(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {n: [] for n, _ in self.n_side}
        for n, p in self.edges:
            out[n].append(p)
        return out


@dataclass(frozen=True)
class HallVerdict:
    status: str
    violating: tuple[int, ...] | None = None
    deficit: Fraction | None = None
    max_flow: Fraction | None = None
    method: str = ""

    @property
    def holds(self) -> bool:
        return self.status == HOLDS


@dataclass(frozen=True)
class MatchingCertificate:
    d: int
    q: int
    tau: tuple[tuple[int, int, Fraction], ...]
    table_digest: str


def build_instance(table: WeightTable) -> BipartiteInstance:
    P_set = poset(table.d)
    n_idx, p_idx = table.N, table.P
    edges = tuple((n, p) for n in n_idx for p in p_idx if P_set.leq(n, p))
    return BipartiteInstance(
        table.d,
        table.q,
        tuple((n, -table.rows[n].omega) for n in n_idx),
        tuple((p, table.rows[p].omega) for p in p_idx),
        edges,
    )


def _scaled(inst: BipartiteInstance) -> tuple[int, dict[int, int], dict[int, int]]:
    scale = 1
    for _, w in inst.n_side + inst.p_side:
        scale = math.lcm(scale, w.denominator)
    demand = {n: int(w * scale) for n, w in inst.n_side}
    supply = {p: int(w * scale) for p, w in inst.p_side}
    return scale, demand, supply


# -- subset enumeration ------------------------------------------------------

def check_hall_subsets(inst: BipartiteInstance, cap: int = DEFAULT_SUBSET_CAP) -> HallVerdict:
    """Check every nonempty U of N against the weight of its neighbourhood.

    Subtrees are skipped once the slack of U already covers all demand that
    could still be added; the first violating U is returned.
    """
    m = len(inst.n_side)
    if m > cap:
        return HallVerdict(ABORTED, method="subsets")
    scale, demand, supply = _scaled(inst)
    n_order = [n for n, _ in inst.n_side]
    p_order = [p for p, _ in inst.p_side]
    p_bit = {p: 1 << k for k, p in enumerate(p_order)}
    p_weight = [supply[p] for p in p_order]
    nbr = {n: 0 for n in n_order}
    for n, p in inst.edges:
        nbr[n] |= p_bit[p]
    # suffix demand: all demand still addable after position k
    tail = [0] * (m + 1)
    for k in range(m - 1, -1, -1):
        tail[k] = tail[k + 1] + demand[n_order[k]]

    found: list[tuple[tuple[int, ...], int]] = []

    def visit(start: int, chosen: list[int], mask: int, dem: int, sup: int) -> bool:
        for k in range(start, m):
            n = n_order[k]
            new_bits = nbr[n] & ~mask
            add = 0
            b = new_bits
            while b:
                low = b & -b
                add += p_weight[low.bit_length() - 1]
                b ^= low
            d2, s2 = dem + demand[n], sup + add
            chosen.append(n)
            if d2 > s2:
                found.append((tuple(chosen), d2 - s2))
                return True
            if s2 - d2 < tail[k + 1] and visit(k + 1, chosen, mask | new_bits, d2, s2):
                return True
            chosen.pop()
        return False

    if visit(0, [], 0, 0, 0):
        U, gap = found[0]
        return HallVerdict(VIOLATED, U, Fraction(gap, scale), method="subsets")
    return HallVerdict(HOLDS, method="subsets")


# -- exact max-flow ----------------------------------------------------------

class _Network:
    """Dinic max-flow over Python integers (arbitrary size, exact)."""

    def __init__(self, n_nodes: int):
        self.adj: list[list[int]] = [[] for _ in range(n_nodes)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_edge(self, u: int, v: int, c: int) -> int:
        e = len(self.to)
        self.to += [v, u]
        self.cap += [c, 0]
        self.adj[u].append(e)
        self.adj[v].append(e + 1)
        return e

    def _levels(self, s: int) -> list[int]:
        level = [-1] * len(self.adj)
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in self.adj[u]:
                v = self.to[e]
                if self.cap[e] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        return level

    def max_flow(self, s: int, t: int) -> int:
        total = 0
        while True:
            level = self._levels(s)
            if level[t] < 0:
                return total
            it = [0] * len(self.adj)
            while True:
                pushed = self._augment(s, t, level, it)
                if not pushed:
                    break
                total += pushed

    def _augment(self, s: int, t: int, level: list[int], it: list[int]) -> int:
        # iterative DFS along the level graph; returns the bottleneck pushed
        path: list[int] = []
        u = s
        while True:
            if u == t:
                f = min(self.cap[e] for e in path)
                for e in path:
                    self.cap[e] -= f
                    self.cap[e ^ 1] += f
                return f
            edges = self.adj[u]
            while it[u] < len(edges):
                e = edges[it[u]]
                v = self.to[e]
                if self.cap[e] > 0 and level[v] == level[u] + 1:
                    break
                it[u] += 1
            if it[u] < len(edges):
                e = edges[it[u]]
                path.append(e)
                u = self.to[e]
            else:
                if not path:
                    return 0
                level[u] = -1  # dead end
                e = path.pop()
                u = self.to[e ^ 1]
                it[u] += 1

    def reachable(self, s: int) -> list[bool]:
        seen = [False] * len(self.adj)
        seen[s] = True
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in self.adj[u]:
                v = self.to[e]
                if self.cap[e] > 0 and not seen[v]:
                    seen[v] = True
                    queue.append(v)
        return seen


def _run_flow(inst: BipartiteInstance):
    scale, demand, supply = _scaled(inst)
    n_order = [n for n, _ in inst.n_side]
    p_order = [p for p, _ in inst.p_side]
    node = {}
    for k, n in enumerate(n_order):
        node[("n", n)] = 1 + k
    for k, p in enumerate(p_order):
        node[("p", p)] = 1 + len(n_order) + k
    s, t = 0, 1 + len(n_order) + len(p_order)
    net = _Network(t + 1)
    inf = sum(demand.values()) + 1
    for n in n_order:
        net.add_edge(s, node[("n", n)], demand[n])
    arcs = {}
    for n, p in sorted(inst.edges):
        arcs[(n, p)] = net.add_edge(node[("n", n)], node[("p", p)], inf)
    for p in p_order:
        net.add_edge(node[("p", p)], t, supply[p])
    flow = net.max_flow(s, t)
    return scale, demand, supply, net, node, arcs, flow, inf


def check_hall_flow(inst: BipartiteInstance) -> HallVerdict:
    """Decide Hall's condition by max-flow; a min cut gives the violating U."""
    scale, demand, supply, net, node, _, flow, _ = _run_flow(inst)
    need = sum(demand.values())
    if flow == need:
        return HallVerdict(HOLDS, max_flow=Fraction(flow, scale), method="flow")
    seen = net.reachable(0)
    U = tuple(n for n, _ in inst.n_side if seen[node[("n", n)]])
    nbrs = {p for n, p in inst.edges if n in U}
    gap = sum(demand[n] for n in U) - sum(supply[p] for p in nbrs)
    return HallVerdict(
        VIOLATED, U, Fraction(gap, scale), Fraction(flow, scale), method="flow"
    )


def construct_certificate(inst: BipartiteInstance, table: WeightTable | None = None) -> MatchingCertificate:
    """Fractional matching read off a maximum flow (support on comparable pairs)."""
    scale, demand, _, net, _, arcs, flow, inf = _run_flow(inst)
    if flow != sum(demand.values()):
        raise HallViolated(f"Hall condition fails at d={inst.d}, q={inst.q}")
    tau = []
    for (n, p), e in arcs.items():
        value = inf - net.cap[e]
        if value:
            tau.append((n, p, Fraction(value, scale)))
    digest = table.digest() if table is not None else ""
    return MatchingCertificate(inst.d, inst.q, tuple(tau), digest)


def certificate_problem(cert: MatchingCertificate, table: WeightTable) -> str | None:
    """First violated certificate invariant, or None when the certificate is valid.

    Comparability is recomputed from the partition vectors and all sums are
    redone in fresh rationals, independent of the flow that produced ``cert``.
    """
    if (cert.d, cert.q) != (table.d, table.q):
        raise ValueError(
            f"certificate is for (d, q)=({cert.d}, {cert.q}), table for ({table.d}, {table.q})"
        )
    parts: tuple[Partition, ...] = table.partitions
    m = len(parts)
    om = table.omegas
    row = {n: Fraction(0) for n in range(m) if om[n] < 0}
    col = {p: Fraction(0) for p in range(m) if om[p] >= 0}
    for n, p, value in cert.tau:
        if not (0 <= n < m and 0 <= p < m):
            return f"tau index out of range: ({n}, {p})"
        if value < 0:
            return f"negative tau at ({n}, {p})"
        if n not in row:
            return f"tau row {n} is not in N"
        if p not in col:
            return f"tau column {p} is not in P"
        if value > 0 and not dominance_leq(parts[n], parts[p]):
            return f"tau supported on incomparable pair n = {parts[n]}, p = {parts[p]}"
        row[n] += value
        col[p] += value
    for n, total in row.items():
        if total != -om[n]:
            return f"row sum mismatch at n = {parts[n]}"
    for p, total in col.items():
        if total != om[p]:
            return f"column sum mismatch at p = {parts[p]}"
    return None


def verify_certificate(cert: MatchingCertificate, table: WeightTable) -> bool:
    return certificate_problem(cert, table) is None
