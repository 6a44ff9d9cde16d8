"""Shared oracles and enumerators, kept independent of the code paths they check."""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

import numpy as np

from distlap.graphs import DistanceMatrix, Graph


def naive_cheeger(d: DistanceMatrix, t) -> tuple[Fraction, list[int]]:
    """Recompute every cut from scratch; returns (min h, all optimal masks)."""
    n = d.n
    total = sum(t)
    best: Fraction | None = None
    best_masks: list[int] = []
    for mask in range(1, (1 << n) - 1):
        members = [v for v in range(n) if (mask >> v) & 1]
        others = [v for v in range(n) if not (mask >> v) & 1]
        cross = sum(d.rows[u][v] for u in members for v in others)
        vol = sum(t[u] for u in members)
        h = Fraction(cross, min(vol, total - vol))
        if best is None or h < best:
            best = h
            best_masks = [mask]
        elif h == best:
            best_masks.append(mask)
    return best, best_masks


def rayleigh_direct(d: DistanceMatrix, t, y) -> float:
    """Rayleigh quotient by explicit double loop over ordered pairs."""
    n = d.n
    num = sum(
        d.rows[u][v] * (y[u] - y[v]) ** 2 for u in range(n) for v in range(n)
    )
    den = 2.0 * sum(t[u] * y[u] * y[u] for u in range(n))
    return num / den


def balanced_form_direct(d: DistanceMatrix, y) -> float:
    """The balanced quadratic form by explicit double loop."""
    k = 1.0 + 2.0 * math.sqrt(2.0)
    n = d.n
    return sum(
        d.rows[u][v] * (y[u] ** 2 - k * y[u] * y[v] + y[v] ** 2)
        for u in range(n)
        for v in range(n)
    )


def eig2_closed(m) -> list[float]:
    """Closed-form eigenvalues of a symmetric 2x2 matrix."""
    a, b = float(m[0][0]), float(m[0][1])
    c = float(m[1][1])
    disc = math.sqrt((a - c) ** 2 + 4.0 * b * b)
    return sorted([(a + c - disc) / 2.0, (a + c + disc) / 2.0])


def eig3_closed(m) -> list[float]:
    """Closed-form (trigonometric) eigenvalues of a symmetric 3x3 matrix."""
    a = np.asarray(m, dtype=float)
    p1 = a[0, 1] ** 2 + a[0, 2] ** 2 + a[1, 2] ** 2
    if p1 == 0.0:
        return sorted(float(x) for x in np.diag(a))
    q = float(np.trace(a)) / 3.0
    p2 = sum((a[i, i] - q) ** 2 for i in range(3)) + 2.0 * p1
    p = math.sqrt(p2 / 6.0)
    b = (a - q * np.eye(3)) / p
    r = float(np.linalg.det(b)) / 2.0
    r = min(1.0, max(-1.0, r))
    phi = math.acos(r) / 3.0
    e1 = q + 2.0 * p * math.cos(phi)
    e3 = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
    return sorted([e1, 3.0 * q - e1 - e3, e3])


def cayley_eigs_direct(group, dvec) -> list[float]:
    """Character sums by explicit per-character loops (no tensor tricks)."""
    from distlap.cayley import characters

    t0 = sum(dvec.values)
    eigs = []
    for chi in characters(group):
        total = sum(
            dv * chi.value(el) for dv, el in zip(dvec.values, group.elements())
        )
        assert abs(total.imag) < 1e-9 * max(1.0, t0)
        eigs.append(1.0 - total.real / t0)
    return sorted(eigs)


def all_graphs(n: int):
    """Every labeled graph on n vertices (as edge masks over sorted pairs)."""
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield [pairs[i] for i in range(len(pairs)) if (mask >> i) & 1]


def connected_graphs(n: int):
    """Every connected labeled graph on n vertices."""
    for edges in all_graphs(n):
        adj = [[] for _ in range(n)]
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = [False] * n
        stack = [0]
        seen[0] = True
        count = 1
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    count += 1
                    stack.append(w)
        if count == n:
            yield Graph.from_edges(n, edges)


def subset_additivity_holds(d: DistanceMatrix, mask: int) -> bool:
    """d(u,v) = d(u,w) + d(w,v) for all distinct u,v inside, w outside."""
    n = d.n
    members = [v for v in range(n) if (mask >> v) & 1]
    others = [v for v in range(n) if not (mask >> v) & 1]
    for u in members:
        for v in members:
            if u == v:
                continue
            for w in others:
                if d.rows[u][v] != d.rows[u][w] + d.rows[w][v]:
                    return False
    return True
