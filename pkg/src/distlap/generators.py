"""Named graph families and random instance generators."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .graphs import Graph


def path_graph(n: int) -> Graph:
    if n < 1:
        raise ValueError("path needs n >= 1")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete graph needs n >= 1")
    return Graph.from_edges(n, combinations(range(n), 2))


def complete_bipartite_plus(a: int, b: int, extra: int = 0) -> Graph:
    """K_{a,b} with ``extra`` edges embedded in the larger part.

    Extra edges fill the larger part in lexicographic order, which keeps
    the construction deterministic. Ties in part size put them in the
    second part.
    """
    if a < 1 or b < 1:
        raise ValueError("both parts must be nonempty")
    part_a = list(range(a))
    part_b = list(range(a, a + b))
    pairs = [(u, v) for u in part_a for v in part_b]
    larger = part_b if b >= a else part_a
    slots = list(combinations(larger, 2))
    if extra < 0 or extra > len(slots):
        raise ValueError(f"extra must be between 0 and {len(slots)}")
    pairs.extend(slots[:extra])
    return Graph.from_edges(a + b, pairs)


def barbell_graph(k: int, path_len: int) -> Graph:
    """Two k-cliques joined by a path with ``path_len`` edges.

    Total order is 2k + path_len - 1: the path endpoints are clique
    vertices, the path_len - 1 internal vertices are new.
    """
    if k < 2:
        raise ValueError("cliques need k >= 2")
    if path_len < 1:
        raise ValueError("joining path needs at least one edge")
    pairs = list(combinations(range(k), 2))
    pairs.extend((k + u, k + v) for u, v in combinations(range(k), 2))
    chain = [k - 1] + [2 * k + i for i in range(path_len - 1)] + [k]
    pairs.extend(zip(chain, chain[1:]))
    return Graph.from_edges(2 * k + path_len - 1, pairs)


def random_connected_graph(
    n: int, p: float, rng: np.random.Generator, max_tries: int = 1000
) -> Graph:
    """G(n, p) conditioned on connectivity by bounded rejection."""
    if n < 1:
        raise ValueError("need n >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError("edge probability must lie in [0, 1]")
    all_pairs = list(combinations(range(n), 2))
    for _ in range(max_tries):
        draws = rng.random(len(all_pairs))
        g = Graph.from_edges(n, (e for e, x in zip(all_pairs, draws) if x < p))
        if g.is_connected():
            return g
    raise RuntimeError(
        f"no connected G({n}, {p}) draw within {max_tries} tries; "
        "raise p or the retry cap"
    )


def random_metric_rows(n: int, rng: np.random.Generator) -> list[list[float]]:
    """Random non-graph metric: shortest-path closure of random weights.

    Symmetric uniform weights on the complete graph, then a Floyd-Warshall
    pass; symmetry is preserved exactly because float addition commutes.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    w = rng.uniform(0.5, 2.0, size=(n, n))
    w = np.triu(w, 1)
    d = w + w.T
    for k in range(n):
        d = np.minimum(d, d[:, k][:, None] + d[k, :][None, :])
    np.fill_diagonal(d, 0.0)
    return [[float(x) for x in row] for row in d]
