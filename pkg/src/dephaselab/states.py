"""GHZ states, graph states, transversal encodings and Z measurements.

The transversal encoding of a graph state applies Hadamard rotations to the
qubits that a vertex-elimination sequence measures in the X basis; under
phase damping those rotations are what slows the entanglement decay.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    HADAMARD,
    PAULI_X,
    PAULI_Z,
    apply_single_qubit_vec,
    check_density_matrix,
    kron,
    num_qubits,
)


# ---------------------------------------------------------------------------
# graphs
# ---------------------------------------------------------------------------


def _normalize_edge(u: int, v: int) -> tuple[int, int]:
    if u == v:
        raise ValueError(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1."""

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("graph needs at least 2 vertices")
        edges = frozenset(_normalize_edge(u, v) for u, v in self.edges)
        for u, v in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range for n={self.n}")
        object.__setattr__(self, "edges", edges)

    def neighbors(self, v: int) -> set[int]:
        return {b if a == v else a for a, b in self.edges if v in (a, b)}

    def is_connected(self) -> bool:
        return _connected(frozenset(range(self.n)), self.edges)

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(n, frozenset((k, k + 1) for k in range(n - 1)))

    @classmethod
    def star(cls, n: int) -> "Graph":
        """Star with center 0 and leaves 1..n-1."""
        return cls(n, frozenset((0, k) for k in range(1, n)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls(n, frozenset((k, (k + 1) % n) for k in range(n)))

    @classmethod
    def from_edge_list(cls, text: str) -> "Graph":
        """Parse an edge-list: one `u v` pair per line, `#` comments, 0-indexed."""
        edges = set()
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"malformed edge line: {raw!r}")
            edges.add(_normalize_edge(int(parts[0]), int(parts[1])))
        if not edges:
            raise ValueError("edge list is empty")
        n = max(max(e) for e in edges) + 1
        return cls(n, frozenset(edges))


def _neighbors(edges: frozenset, v: int) -> set[int]:
    return {b if a == v else a for a, b in edges if v in (a, b)}


def _connected(vertices: frozenset, edges: frozenset) -> bool:
    if len(vertices) <= 1:
        return True
    start = next(iter(vertices))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in _neighbors(edges, v):
            if w in vertices and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == set(vertices)


def _distances_from(vertices: frozenset, edges: frozenset, src: int) -> dict[int, int]:
    dist = {src: 0}
    frontier = [src]
    while frontier:
        nxt = []
        for v in frontier:
            for w in _neighbors(edges, v):
                if w in vertices and w not in dist:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
        frontier = nxt
    return dist


def _local_complement(vertices: frozenset, edges: frozenset, v: int) -> frozenset:
    """Toggle every edge between two neighbors of v."""
    nbrs = sorted(_neighbors(edges, v) & set(vertices))
    out = set(edges)
    for i, a in enumerate(nbrs):
        for b in nbrs[i + 1 :]:
            e = (a, b)
            if e in out:
                out.discard(e)
            else:
                out.add(e)
    return frozenset(out)


def _delete_vertex(vertices: frozenset, edges: frozenset, v: int):
    new_edges = frozenset(e for e in edges if v not in e)
    return vertices - {v}, new_edges


def _x_rewrite(vertices: frozenset, edges: frozenset, a: int, b0: int):
    """Graph update for an X measurement of vertex a with designated neighbor b0.

    Local complementation at b0, then at a, then at b0 again, followed by
    deletion of a.
    """
    edges = _local_complement(vertices, edges, b0)
    edges = _local_complement(vertices, edges, a)
    edges = _local_complement(vertices, edges, b0)
    return _delete_vertex(vertices, edges, a)


# ---------------------------------------------------------------------------
# reduction sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReductionStep:
    vertex: int
    basis: str  # "Z" or "X"
    pivot: int | None  # designated neighbor of an X step
    vertices: frozenset  # remaining vertices after the step
    edges: frozenset  # remaining edges after the step
    hadamards: frozenset  # running Hadamard set after the step


@dataclass(frozen=True)
class ReductionTrace:
    survivors: tuple[int, int]
    hadamard_set: frozenset  # Hadamard set of the full encoding
    steps: tuple


def _pick_survivors(g: Graph) -> tuple[int, int]:
    """Lexicographically smallest vertex pair at maximum graph distance."""
    vertices = frozenset(range(g.n))
    best = None
    best_d = -1
    for u in range(g.n):
        dist = _distances_from(vertices, g.edges, u)
        for v in range(u + 1, g.n):
            d = dist[v]
            if d > best_d:
                best_d = d
                best = (u, v)
    return best


def reduction_sequence(g: Graph) -> list[tuple[int, str]]:
    """Measurement sequence shrinking a connected graph to a single edge.

    Two maximally distant vertices are kept to the end.  At every step the
    lowest-indexed removable vertex whose Z deletion keeps the remainder
    connected is measured in Z; when no such vertex exists the
    lowest-indexed one whose X rewrite (pivoting on its lowest-indexed
    neighbor) keeps it connected is measured in X.
    """
    return [(s.vertex, s.basis) for s in reduction_trace(g).steps]


def reduction_trace(g: Graph) -> ReductionTrace:
    """Full reduction bookkeeping: steps, pivots and the running Hadamard set."""
    if g.n < 3:
        return ReductionTrace(survivors=(0, 1), hadamard_set=frozenset(), steps=())
    if not g.is_connected():
        raise ValueError("reduction requires a connected graph")
    survivors = _pick_survivors(g)
    vertices = frozenset(range(g.n))
    edges = g.edges
    raw_steps = []
    while len(vertices) > 2:
        candidates = sorted(set(vertices) - set(survivors))
        chosen = None
        for v in candidates:
            new_vertices, new_edges = _delete_vertex(vertices, edges, v)
            if _connected(new_vertices, new_edges):
                chosen = (v, "Z", None, new_vertices, new_edges)
                break
        if chosen is None:
            for v in candidates:
                nbrs = _neighbors(edges, v) & set(vertices)
                if not nbrs:
                    continue
                b0 = min(nbrs)
                new_vertices, new_edges = _x_rewrite(vertices, edges, v, b0)
                if _connected(new_vertices, new_edges):
                    chosen = (v, "X", b0, new_vertices, new_edges)
                    break
        if chosen is None:
            raise ValueError("no measurement keeps the graph connected")
        raw_steps.append(chosen)
        vertices, edges = chosen[3], chosen[4]
    if not edges:
        raise ValueError("reduction ended without an edge")

    hadamard_set = frozenset(v for v, basis, *_ in raw_steps if basis == "X")
    running = set(hadamard_set)
    steps = []
    for v, basis, b0, verts, eds in raw_steps:
        if basis == "X":
            running.discard(v)
            running ^= {b0}
        else:
            running.discard(v)
        steps.append(
            ReductionStep(
                vertex=v,
                basis=basis,
                pivot=b0,
                vertices=verts,
                edges=eds,
                hadamards=frozenset(running),
            )
        )
    return ReductionTrace(survivors=survivors, hadamard_set=hadamard_set, steps=tuple(steps))


# ---------------------------------------------------------------------------
# state constructors
# ---------------------------------------------------------------------------


def _ghz_vector(n: int) -> np.ndarray:
    vec = np.zeros(2**n, dtype=complex)
    vec[0] = vec[-1] = 1.0 / math.sqrt(2.0)
    return vec


def ghz(n: int) -> np.ndarray:
    """Density matrix of (|0...0> + |1...1>)/sqrt(2)."""
    if n < 2:
        raise ValueError("GHZ state needs n >= 2")
    vec = _ghz_vector(n)
    return np.outer(vec, vec.conj())


def _ghz_transversal_vector(n: int, sign: int) -> np.ndarray:
    if n < 2:
        raise ValueError("transversal GHZ state needs n >= 2")
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    idx = np.arange(2**n)
    parity = np.zeros(2**n, dtype=np.int64)
    for k in range(n):
        parity ^= (idx >> k) & 1
    amp = (1.0 + sign * (-1.0) ** parity) * 2.0 ** (-(n + 1) / 2.0)
    return amp.astype(complex)


def ghz_transversal(n: int, sign: int = +1) -> np.ndarray:
    """Density matrix of (|+>^n + sign |->^n)/sqrt(2), the Hadamard-rotated GHZ."""
    vec = _ghz_transversal_vector(n, sign)
    return np.outer(vec, vec.conj())


def graph_state_vector(g: Graph) -> np.ndarray:
    """Controlled-Z over every edge applied to |+>^n."""
    n = g.n
    vec = np.full(2**n, 2.0 ** (-n / 2.0), dtype=complex)
    idx = np.arange(2**n)
    for u, v in sorted(g.edges):
        both = ((idx >> (n - 1 - u)) & 1) & ((idx >> (n - 1 - v)) & 1)
        vec[both == 1] *= -1.0
    return vec


def graph_state(g: Graph) -> np.ndarray:
    vec = graph_state_vector(g)
    return np.outer(vec, vec.conj())


def stabilizer_expectation(rho: np.ndarray, g: Graph, a: int) -> float:
    """Expectation of the vertex stabilizer X_a prod_{b in nbhd(a)} Z_b."""
    ops = [np.eye(2, dtype=complex)] * g.n
    ops[a] = PAULI_X
    for b in g.neighbors(a):
        ops[b] = PAULI_Z
    return float(np.real(np.trace(rho @ kron(*ops))))


@dataclass(frozen=True)
class TransversalEncoding:
    hadamard_set: frozenset


def _encoded_vector(edges: frozenset, vertices, hadamards) -> np.ndarray:
    """Graph state on relabeled vertices with Hadamards on the given set."""
    order = sorted(vertices)
    index = {v: i for i, v in enumerate(order)}
    sub = Graph(len(order), frozenset((index[u], index[v]) for u, v in edges))
    vec = graph_state_vector(sub)
    for v in sorted(hadamards):
        vec = apply_single_qubit_vec(vec, HADAMARD, index[v])
    return vec


def transversal_graph_encoding(g: Graph) -> tuple[TransversalEncoding, np.ndarray]:
    """Hadamard set from the reduction sequence, and the rotated graph state."""
    trace = reduction_trace(g)
    vec = _encoded_vector(g.edges, range(g.n), trace.hadamard_set)
    return TransversalEncoding(trace.hadamard_set), np.outer(vec, vec.conj())


@dataclass(frozen=True)
class FamilyMember:
    """One member of the measurement-consistent encoded family of a graph."""

    size: int
    vertices: tuple
    hadamards: frozenset  # original vertex labels
    state: np.ndarray  # pure encoded density matrix
    cut_qubit: int  # relabeled position of the canonical cut vertex


def transversal_graph_family(g: Graph) -> list[FamilyMember]:
    """Encoded states the reduction sequence steps through, smallest first.

    Member k is the encoded graph state left (up to local rotations that
    commute with phase damping) after k measurements of the full encoding,
    so robustness chains over this family telescope exactly.  The canonical
    cut qubit is the lowest-indexed surviving vertex.
    """
    trace = reduction_trace(g)
    cut_vertex = min(trace.survivors)
    snapshots = [(frozenset(range(g.n)), g.edges, trace.hadamard_set)]
    snapshots += [(s.vertices, s.edges, s.hadamards) for s in trace.steps]
    members = []
    for vertices, edges, hadamards in snapshots:
        order = sorted(vertices)
        vec = _encoded_vector(edges, vertices, hadamards)
        members.append(
            FamilyMember(
                size=len(order),
                vertices=tuple(order),
                hadamards=frozenset(hadamards),
                state=np.outer(vec, vec.conj()),
                cut_qubit=order.index(cut_vertex),
            )
        )
    members.reverse()
    return members


def add_white_noise(rho: np.ndarray, v: float) -> np.ndarray:
    """Convex mixture v rho + (1 - v) I / 2^n."""
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"visibility {v} outside [0, 1]")
    dim = rho.shape[0]
    return v * rho + (1.0 - v) * np.eye(dim, dtype=complex) / dim


# ---------------------------------------------------------------------------
# measurements
# ---------------------------------------------------------------------------


@dataclass
class MeasurementBranch:
    outcome: int
    probability: float
    post_state: np.ndarray  # measured qubit traced out


def measure_z(rho: np.ndarray, k: int) -> tuple[MeasurementBranch, MeasurementBranch]:
    """Projective Z measurement of qubit k; branches carry the other qubits.

    A zero-probability branch gets the maximally mixed post-state so both
    branches remain valid density matrices.
    """
    n = check_density_matrix(rho)
    if n < 2:
        raise ValueError("measurement branches need at least 2 qubits")
    if not 0 <= k < n:
        raise ValueError(f"qubit index {k} out of range")
    tensor = rho.reshape([2] * (2 * n))
    dim = 2 ** (n - 1)
    branches = []
    for outcome in (0, 1):
        block = np.take(tensor, outcome, axis=k)
        block = np.take(block, outcome, axis=n - 1 + k)
        block = block.reshape(dim, dim)
        prob = float(np.real(np.trace(block)))
        if prob > 1e-15:
            post = block / prob
        else:
            prob = max(prob, 0.0)
            post = np.eye(dim, dtype=complex) / dim
        branches.append(MeasurementBranch(outcome=outcome, probability=prob, post_state=post))
    return branches[0], branches[1]


def num_state_qubits(rho: np.ndarray) -> int:
    """Qubit count of a density matrix (convenience re-export)."""
    return num_qubits(rho.shape[0])
