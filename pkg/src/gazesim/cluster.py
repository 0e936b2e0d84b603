"""Multi-scale community detection over the viewer similarity graph.

The criterion is resolution-parameterized modularity,
Q(p) = sum_c [ W_c/W - p * (S_c/(2W))^2 ], which reduces to Newman
modularity at p = 1. Optimization is the greedy two-phase scheme: random
node moves that keep every community connected, then random community
merges, repeated until neither phase improves Q. All randomness comes from
an explicit seed, so runs are reproducible.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from .errors import EmptyGraph, NotNeighbor, ValidationError
from .keyvalue import format_float
from .models import CouplingGraph, Partition, ScaleSweep, SimilarityMatrix


def build_graph(sim: SimilarityMatrix) -> CouplingGraph:
    """Similarities become coupling weights; the diagonal self-similarity of
    1 is dropped (no self-loops)."""
    weights = sim.values.copy()
    np.fill_diagonal(weights, 0.0)
    return CouplingGraph(node_ids=list(sim.viewer_ids), weights=weights)


def _membership(partition: Partition, graph: CouplingGraph) -> np.ndarray:
    try:
        return np.array([partition.assignment[v] for v in graph.node_ids])
    except KeyError as exc:
        raise ValidationError(f"partition misses node {exc.args[0]!r}") from exc


def compute_q(partition: Partition, graph: CouplingGraph, scale: float) -> float:
    """Evaluate the criterion from scratch; the incremental deltas used by
    the greedy must agree with this within float noise."""
    if graph.n_nodes == 0:
        raise EmptyGraph()
    comm = _membership(partition, graph)
    w = graph.weights
    total = w.sum() / 2.0
    if total == 0.0:
        return 0.0
    strengths = w.sum(axis=1)
    q = 0.0
    for c in np.unique(comm):
        members = comm == c
        intra = w[np.ix_(members, members)].sum() / 2.0
        s_c = strengths[members].sum()
        q += intra / total - scale * (s_c / (2.0 * total)) ** 2
    return float(q)


def _canonical_partition(
    node_ids: list[str], comm: np.ndarray, q: float, scale: float
) -> Partition:
    """Relabel communities contiguously, ordered by their smallest member."""
    order: dict[int, int] = {}
    for label in comm:
        if label not in order:
            order[label] = len(order)
    return Partition(
        assignment={v: order[c] for v, c in zip(node_ids, comm)},
        q_value=q,
        scale=scale,
    )


class _GreedyState:
    """Bookkeeping for one scale: community labels, strengths, intra weights."""

    def __init__(self, graph: CouplingGraph, scale: float):
        self.w = graph.weights
        self.n = graph.n_nodes
        self.scale = scale
        self.total = float(self.w.sum()) / 2.0
        self.strengths = self.w.sum(axis=1)
        self.comm = np.arange(self.n)
        self.s_c = self.strengths.copy().astype(float)
        self.w_c = np.zeros(self.n)  # singletons have no intra weight

    def node_weight_to(self, i: int, community: int) -> float:
        members = self.comm == community
        members[i] = False
        return float(self.w[i, members].sum())

    def neighbor_communities(self, i: int) -> list[int]:
        linked = self.w[i] > 0
        comms = np.unique(self.comm[linked])
        return [int(c) for c in comms if c != self.comm[i]]

    def delta_move(self, i: int, target: int) -> float:
        src = self.comm[i]
        if target == src:
            return 0.0
        k_i = float(self.strengths[i])
        k_to_target = self.node_weight_to(i, target)
        k_to_src = self.node_weight_to(i, src)
        two_w = 2.0 * self.total
        return (k_to_target - k_to_src) / self.total - self.scale * k_i * (
            self.s_c[target] - self.s_c[src] + k_i
        ) / (two_w * self.total)

    def apply_move(self, i: int, target: int) -> None:
        src = self.comm[i]
        k_i = float(self.strengths[i])
        self.w_c[src] -= self.node_weight_to(i, src)
        self.w_c[target] += self.node_weight_to(i, target)
        self.s_c[src] -= k_i
        self.s_c[target] += k_i
        self.comm[i] = target

    def removal_keeps_connected(self, i: int) -> bool:
        """BFS over positive edges inside the source community minus node i."""
        members = np.flatnonzero((self.comm == self.comm[i]))
        rest = [int(j) for j in members if j != i]
        if len(rest) <= 1:
            return True
        rest_set = set(rest)
        seen = {rest[0]}
        queue = deque([rest[0]])
        while queue:
            u = queue.popleft()
            for v in np.flatnonzero(self.w[u] > 0):
                v = int(v)
                if v in rest_set and v not in seen:
                    seen.add(v)
                    queue.append(v)
        return len(seen) == len(rest)

    def cross_weight(self, c1: int, c2: int) -> float:
        m1 = self.comm == c1
        m2 = self.comm == c2
        return float(self.w[np.ix_(m1, m2)].sum())

    def delta_merge(self, c1: int, c2: int) -> float:
        cross = self.cross_weight(c1, c2)
        return cross / self.total - self.scale * self.s_c[c1] * self.s_c[c2] / (
            2.0 * self.total * self.total
        )

    def apply_merge(self, keep: int, absorb: int) -> None:
        cross = self.cross_weight(keep, absorb)
        self.w_c[keep] += self.w_c[absorb] + cross
        self.s_c[keep] += self.s_c[absorb]
        self.comm[self.comm == absorb] = keep

    def community_ids(self) -> np.ndarray:
        return np.unique(self.comm)

    def community_neighbors(self, c: int) -> list[int]:
        members = self.comm == c
        linked = (self.w[members] > 0).any(axis=0)
        comms = np.unique(self.comm[linked])
        return [int(x) for x in comms if x != c]


def delta_q_move(
    node: str,
    target_community: int,
    partition: Partition,
    graph: CouplingGraph,
    scale: float,
) -> float:
    """Q change from moving one node into an adjacent community, computed
    incrementally. Moving a node to its own community is a no-op (0)."""
    if graph.n_nodes == 0:
        raise EmptyGraph()
    try:
        i = graph.node_ids.index(node)
    except ValueError:
        raise ValidationError(f"unknown node {node!r}") from None
    state = _GreedyState(graph, scale)
    state.comm = _membership(partition, graph)
    state.s_c = np.zeros(int(state.comm.max()) + 1)
    for c in np.unique(state.comm):
        state.s_c[c] = state.strengths[state.comm == c].sum()
    if target_community == state.comm[i]:
        return 0.0
    if state.total == 0.0 or state.node_weight_to(i, target_community) <= 0.0:
        raise NotNeighbor(node, target_community)
    return float(state.delta_move(i, target_community))


def detect_communities(
    graph: CouplingGraph, scales: list[float], seed: int
) -> ScaleSweep:
    """Greedy node-move + community-merge optimization at every scale.

    Each scale draws its visit orders from its own seeded stream, so scales
    are independent and any fixed seed reproduces the same partitions.
    """
    if graph.n_nodes == 0:
        raise EmptyGraph()
    if not scales:
        raise ValidationError("scales must be non-empty")
    children = np.random.SeedSequence(seed).spawn(len(scales))
    partitions = []
    for scale, child in zip(scales, children):
        rng = np.random.default_rng(child)
        state = _GreedyState(graph, scale)
        changed = True
        while changed:
            changed = False
            # node-move phase
            while True:
                moved = False
                for i in rng.permutation(state.n):
                    i = int(i)
                    best_delta = 0.0
                    best_c = -1
                    candidates = state.neighbor_communities(i)
                    if candidates and not state.removal_keeps_connected(i):
                        continue
                    for c in candidates:
                        delta = state.delta_move(i, c)
                        if delta > best_delta:
                            best_delta = delta
                            best_c = c
                    if best_c >= 0:
                        state.apply_move(i, best_c)
                        moved = True
                        changed = True
                if not moved:
                    break
            # merge phase
            while True:
                merged = False
                for c in rng.permutation(state.community_ids()):
                    c = int(c)
                    if not (state.comm == c).any():
                        continue  # already absorbed this pass
                    best_delta = 0.0
                    best_c = -1
                    for nc in state.community_neighbors(c):
                        delta = state.delta_merge(c, nc)
                        if delta > best_delta:
                            best_delta = delta
                            best_c = nc
                    if best_c >= 0:
                        state.apply_merge(c, best_c)
                        merged = True
                        changed = True
                if not merged:
                    break
        draft = _canonical_partition(graph.node_ids, state.comm, 0.0, scale)
        q = compute_q(draft, graph, scale)
        partitions.append(
            Partition(assignment=draft.assignment, q_value=q, scale=scale)
        )
    return ScaleSweep(scales=list(scales), partitions=partitions)


# --- exports ---------------------------------------------------------------

def export_gephi(graph: CouplingGraph, partition: Partition) -> tuple[str, str]:
    """(node_csv, edge_csv) in the import format Gephi expects."""
    node_lines = ["Id,Label,Community"]
    for vid in graph.node_ids:
        node_lines.append(f"{vid},{vid},{partition.assignment[vid]}")
    edge_lines = ["Source,Target,Weight,Type"]
    n = graph.n_nodes
    for i in range(n):
        for j in range(i + 1, n):
            w = graph.weights[i, j]
            if w > 0:
                edge_lines.append(
                    f"{graph.node_ids[i]},{graph.node_ids[j]},"
                    f"{format_float(w)},Undirected"
                )
    return "\n".join(node_lines) + "\n", "\n".join(edge_lines) + "\n"


def graph_from_gephi_edges(
    edge_csv: str, node_ids: list[str] | None = None
) -> CouplingGraph:
    """Rebuild a CouplingGraph from an exported edge table."""
    lines = [ln for ln in edge_csv.splitlines() if ln.strip()]
    edges = []
    for line in lines[1:]:
        source, target, weight, _type = line.split(",")
        edges.append((source, target, float(weight)))
    if node_ids is None:
        names = sorted({v for e in edges for v in (e[0], e[1])})
    else:
        names = list(node_ids)
    index = {v: i for i, v in enumerate(names)}
    weights = np.zeros((len(names), len(names)))
    for source, target, w in edges:
        weights[index[source], index[target]] = w
        weights[index[target], index[source]] = w
    return CouplingGraph(node_ids=names, weights=weights)


def partition_table(sweep: ScaleSweep) -> str:
    """CSV of viewer_id,community,scale,q over all scales."""
    lines = ["viewer_id,community,scale,q"]
    for scale, part in zip(sweep.scales, sweep.partitions):
        for vid in sorted(part.assignment):
            lines.append(
                f"{vid},{part.assignment[vid]},{scale:g},{format_float(part.q_value)}"
            )
    return "\n".join(lines) + "\n"
