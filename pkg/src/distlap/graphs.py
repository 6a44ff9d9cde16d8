"""Graphs, distance matrices, and finite metric spaces.

Distances derived from graphs stay exact integers end to end; conversion to
floating point happens only in the spectral code. All types are immutable
after construction and safe to share across threads.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

Number = int | float


class GraphParseError(ValueError):
    """Malformed textual graph input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GraphValidationError(ValueError):
    """Structurally invalid graph (labels out of range, loop edges)."""


class DisconnectedGraphError(ValueError):
    """Raised by operations that need a connected graph."""

    def __init__(self, u: int, v: int):
        self.representatives = (u, v)
        super().__init__(
            f"graph is disconnected: vertices {u} and {v} lie in different components"
        )


class MetricValidationError(ValueError):
    """A candidate distance matrix violates one or more metric axioms."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        shown = "; ".join(self.violations[:5])
        more = len(self.violations) - 5
        if more > 0:
            shown += f"; ... ({more} more)"
        super().__init__(f"{len(self.violations)} metric violation(s): {shown}")


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on dense 0-based vertices.

    Edges are stored as (u, v) pairs with u < v. Connectivity is not an
    invariant; operations that need it check it themselves.
    """

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.n < 1:
            raise GraphValidationError("vertex count must be >= 1")
        for u, v in self.edges:
            if u == v:
                raise GraphValidationError(f"loop edge ({u}, {v}) is not allowed")
            if not (0 <= u < v < self.n):
                raise GraphValidationError(
                    f"edge ({u}, {v}) is not a sorted pair inside 0..{self.n - 1}"
                )

    @classmethod
    def from_edges(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph from unordered pairs, deduplicating as it goes."""
        norm = set()
        for u, v in pairs:
            if u == v:
                raise GraphValidationError(f"loop edge ({u}, {v}) is not allowed")
            norm.add((u, v) if u < v else (v, u))
        return cls(n, frozenset(norm))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for nbrs in adj:
            nbrs.sort()
        return adj

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.edges

    def is_connected(self) -> bool:
        dist = _bfs(self.adjacency(), 0, self.n)
        return all(x >= 0 for x in dist)


def _bfs(adj: list[list[int]], source: int, n: int) -> list[int]:
    dist = [-1] * n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = du
                queue.append(w)
    return dist


def require_connected(g: Graph) -> None:
    """Raise DisconnectedGraphError naming vertices in two components."""
    dist = _bfs(g.adjacency(), 0, g.n)
    for v, d in enumerate(dist):
        if d < 0:
            raise DisconnectedGraphError(0, v)


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric nonnegative distance matrix with zero diagonal.

    ``integral`` records whether all entries are Python ints (true for
    graph shortest-path distances), which the Cheeger code relies on for
    exact rational arithmetic.
    """

    n: int
    rows: tuple[tuple[Number, ...], ...]
    integral: bool = True

    def __post_init__(self):
        if self.n < 1 or len(self.rows) != self.n:
            raise ValueError("distance matrix shape does not match n")
        for u, row in enumerate(self.rows):
            if len(row) != self.n:
                raise ValueError(f"row {u} has length {len(row)}, expected {self.n}")
            if row[u] != 0:
                raise ValueError(f"nonzero diagonal entry at {u}: {row[u]!r}")
        for u in range(self.n):
            for v in range(u + 1, self.n):
                if self.rows[u][v] != self.rows[v][u]:
                    raise ValueError(f"asymmetric entries at ({u}, {v})")
                if self.rows[u][v] <= 0:
                    raise ValueError(f"nonpositive distance at ({u}, {v})")
        if self.integral and not all(
            isinstance(x, int) for row in self.rows for x in row
        ):
            raise ValueError("integral matrix contains non-integer entries")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Number]]) -> "DistanceMatrix":
        tup = tuple(tuple(row) for row in rows)
        integral = all(isinstance(x, int) for row in tup for x in row)
        return cls(len(tup), tup, integral)

    def entry(self, u: int, v: int) -> Number:
        return self.rows[u][v]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.rows, dtype=float)


@dataclass(frozen=True)
class FiniteMetricSpace:
    """A validated finite metric, optionally tagged as graph-derived."""

    n: int
    distances: DistanceMatrix
    from_graph: bool = False


def bfs_apsp(g: Graph) -> DistanceMatrix:
    """All-pairs shortest-path distances by one BFS per vertex.

    Raises DisconnectedGraphError (naming representatives of two
    components) when the graph is not connected.
    """
    adj = g.adjacency()
    first = _bfs(adj, 0, g.n)
    for v, dv in enumerate(first):
        if dv < 0:
            raise DisconnectedGraphError(0, v)
    rows = [tuple(first)]
    for s in range(1, g.n):
        rows.append(tuple(_bfs(adj, s, g.n)))
    return DistanceMatrix(g.n, tuple(rows), integral=True)


def transmission(d: DistanceMatrix) -> tuple[Number, ...]:
    """Row sums of the distance matrix, exact for integer inputs."""
    return tuple(sum(row) for row in d.rows)


def metric_from_graph(g: Graph) -> FiniteMetricSpace:
    """Shortest-path metric of a connected graph."""
    return FiniteMetricSpace(g.n, bfs_apsp(g), from_graph=True)


def find_metric_violations(
    rows: Sequence[Sequence[Number]], rel_tol: float = 1e-9
) -> list[str]:
    """List every metric-axiom violation in a square matrix.

    Integer matrices are checked exactly; for float matrices each
    comparison gets ``rel_tol * max_entry`` of slack, which absorbs the
    rounding left behind by shortest-path closures.
    """
    n = len(rows)
    violations: list[str] = []
    for u, row in enumerate(rows):
        if len(row) != n:
            return [f"matrix is not square: row {u} has length {len(row)}"]
    integral = all(isinstance(x, (int, np.integer)) for row in rows for x in row)
    arr = np.asarray(rows, dtype=float)
    slack = 0.0 if integral else rel_tol * max(1.0, float(np.abs(arr).max()))

    for u in range(n):
        if abs(arr[u, u]) > slack:
            violations.append(f"nonzero diagonal at {u}: {rows[u][u]!r}")
    for u in range(n):
        for v in range(u + 1, n):
            if abs(arr[u, v] - arr[v, u]) > slack:
                violations.append(
                    f"asymmetry at ({u}, {v}): {rows[u][v]!r} vs {rows[v][u]!r}"
                )
            if arr[u, v] <= slack:
                violations.append(f"nonpositive distance at ({u}, {v}): {rows[u][v]!r}")
    for w in range(n):
        via = arr[:, w][:, None] + arr[w, :][None, :]
        bad = arr > via + slack
        bad[:, w] = False
        bad[w, :] = False
        np.fill_diagonal(bad, False)
        for u, v in zip(*np.nonzero(bad)):
            if u < v:
                violations.append(
                    f"triangle violation ({u}, {v}) via {w}: "
                    f"{rows[u][v]!r} > {rows[u][w]!r} + {rows[w][v]!r}"
                )
    return violations


def validate_metric(
    rows: Sequence[Sequence[Number]],
    rel_tol: float = 1e-9,
    from_graph: bool = False,
) -> FiniteMetricSpace:
    """Validate a raw matrix against all metric axioms.

    Returns the validated space or raises MetricValidationError carrying
    the full list of violated axioms.
    """
    violations = find_metric_violations(rows, rel_tol=rel_tol)
    if violations:
        raise MetricValidationError(violations)
    clean = tuple(
        tuple(x if isinstance(x, int) else float(x) for x in row) for row in rows
    )
    integral = all(isinstance(x, int) for row in clean for x in row)
    d = DistanceMatrix(len(clean), clean, integral)
    return FiniteMetricSpace(d.n, d, from_graph)


def parse_edge_list(text: str) -> Graph:
    """Parse whitespace-separated "u v" lines into a Graph.

    An optional first line "n <count>" pins the vertex count; otherwise it
    is one more than the largest label seen. Blank lines are skipped.
    """
    n_declared: int | None = None
    seen_content = False
    pairs: list[tuple[int, int]] = []
    max_label = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        tokens = line.split()
        if not seen_content and tokens[0] == "n":
            seen_content = True
            if len(tokens) != 2:
                raise GraphParseError("expected 'n <count>'", lineno)
            try:
                n_declared = int(tokens[1])
            except ValueError:
                raise GraphParseError(f"bad vertex count {tokens[1]!r}", lineno) from None
            if n_declared < 1:
                raise GraphParseError("vertex count must be >= 1", lineno)
            continue
        seen_content = True
        if len(tokens) != 2:
            raise GraphParseError(f"expected two labels, got {len(tokens)}", lineno)
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise GraphParseError(f"non-integer label in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise GraphParseError("negative vertex label", lineno)
        if u == v:
            raise GraphValidationError(f"loop edge {u} {v} (line {lineno})")
        pairs.append((u, v))
        max_label = max(max_label, u, v)
    if n_declared is None and max_label < 0:
        raise GraphParseError("no edges and no 'n <count>' header")
    n = n_declared if n_declared is not None else max_label + 1
    if max_label >= n:
        raise GraphValidationError(
            f"label {max_label} exceeds declared vertex count {n}"
        )
    return Graph.from_edges(n, pairs)


_G6_HEADER = ">>graph6<<"


def parse_graph6(data: str | bytes) -> Graph:
    """Decode a short-form graph6 string (n <= 62)."""
    s = data.decode("ascii") if isinstance(data, (bytes, bytearray)) else data
    s = s.strip()
    if s.startswith(_G6_HEADER):
        s = s[len(_G6_HEADER):].strip()
    if not s:
        raise GraphParseError("empty graph6 string")
    head = ord(s[0])
    if head == 126:
        raise GraphParseError("long-form graph6 (n > 62) is not supported")
    n = head - 63
    if not 1 <= n <= 62:
        raise GraphParseError(f"bad graph6 size byte {s[0]!r}")
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = s[1:]
    if len(body) != nbytes:
        raise GraphParseError(
            f"expected {nbytes} graph6 data bytes for n={n}, got {len(body)}"
        )
    bits: list[int] = []
    for ch in body:
        val = ord(ch) - 63
        if not 0 <= val < 64:
            raise GraphParseError(f"bad graph6 data byte {ch!r}")
        bits.extend((val >> k) & 1 for k in range(5, -1, -1))
    pairs = []
    i = 0
    # upper triangle, column by column
    for col in range(1, n):
        for row in range(col):
            if bits[i]:
                pairs.append((row, col))
            i += 1
    return Graph.from_edges(n, pairs)


def encode_graph6(g: Graph) -> str:
    """Canonical short-form graph6 encoding of a graph (n <= 62)."""
    if g.n > 62:
        raise ValueError("short-form graph6 supports at most 62 vertices")
    bits: list[int] = []
    for col in range(1, g.n):
        for row in range(col):
            bits.append(1 if g.has_edge(row, col) else 0)
    while len(bits) % 6:
        bits.append(0)
    out = [chr(63 + g.n)]
    for i in range(0, len(bits), 6):
        val = 0
        for b in bits[i : i + 6]:
            val = (val << 1) | b
        out.append(chr(63 + val))
    return "".join(out)


def parse_metric_csv(text: str) -> list[list[Number]]:
    """Parse n lines of n comma-separated numbers (ints stay exact)."""
    rows: list[list[Number]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        row: list[Number] = []
        for tok in line.split(","):
            tok = tok.strip()
            try:
                row.append(int(tok))
            except ValueError:
                try:
                    row.append(float(tok))
                except ValueError:
                    raise GraphParseError(f"bad number {tok!r}", lineno) from None
        rows.append(row)
    if not rows:
        raise GraphParseError("empty metric CSV")
    return rows
