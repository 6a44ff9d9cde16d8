"""Finite abelian groups, characters, Cayley graphs, and character-sum bounds.

Eigenvalues of any translation-invariant matrix on a product of cyclic
groups come from character sums, so spectra here are closed-form: no dense
eigensolve, just one mixed-radix Fourier contraction.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .checks import BoundCheck
from .constants import CAYLEY_FLOOR, ODD_ORDER_FLOOR
from .graphs import DisconnectedGraphError, Graph, Number, _bfs

Element = tuple[int, ...]


@dataclass(frozen=True)
class AbelianGroup:
    """Product of cyclic groups Z_m1 x ... x Z_mk, elements as exponent tuples.

    Elements and characters are both enumerated in row-major mixed-radix
    order, giving O(1) index <-> element maps.
    """

    moduli: tuple[int, ...]

    def __post_init__(self):
        if not self.moduli:
            raise ValueError("group needs at least one cyclic factor")
        if any(m < 2 for m in self.moduli):
            raise ValueError("every cyclic factor must have modulus >= 2")

    @classmethod
    def parse(cls, text: str) -> "AbelianGroup":
        """Parse labels like "Z4" or "Z2xZ2" (case-insensitive)."""
        moduli = []
        for part in text.lower().split("x"):
            part = part.strip()
            if not part.startswith("z"):
                raise ValueError(f"bad group factor {part!r}, expected like 'Z4'")
            try:
                moduli.append(int(part[1:]))
            except ValueError:
                raise ValueError(f"bad group factor {part!r}") from None
        return cls(tuple(moduli))

    def label(self) -> str:
        return "x".join(f"Z{m}" for m in self.moduli)

    @property
    def order(self) -> int:
        return math.prod(self.moduli)

    @property
    def rank(self) -> int:
        return len(self.moduli)

    def coerce(self, el) -> Element:
        if isinstance(el, int):
            el = (el,)
        el = tuple(int(a) for a in el)
        if len(el) != self.rank:
            raise ValueError(f"element {el} has wrong rank for {self.label()}")
        return tuple(a % m for a, m in zip(el, self.moduli))

    def identity(self) -> Element:
        return (0,) * self.rank

    def add(self, a: Element, b: Element) -> Element:
        return tuple((x + y) % m for x, y, m in zip(a, b, self.moduli))

    def neg(self, a: Element) -> Element:
        return tuple((-x) % m for x, m in zip(a, self.moduli))

    def index(self, el: Element) -> int:
        idx = 0
        for a, m in zip(el, self.moduli):
            idx = idx * m + a
        return idx

    def element(self, idx: int) -> Element:
        coords = []
        for m in reversed(self.moduli):
            coords.append(idx % m)
            idx //= m
        return tuple(reversed(coords))

    def elements(self) -> list[Element]:
        return list(product(*(range(m) for m in self.moduli)))

    def negation_permutation(self) -> np.ndarray:
        """perm[i] = index of -element(i)."""
        perm = np.empty(self.order, dtype=int)
        for i, el in enumerate(self.elements()):
            perm[i] = self.index(self.neg(el))
        return perm


@dataclass(frozen=True)
class Character:
    """Group homomorphism into the unit circle, stored as an exponent tuple.

    Value at v is exp(2*pi*i * sum_j c_j v_j / m_j).
    """

    group: AbelianGroup
    exponents: tuple[int, ...]

    def __post_init__(self):
        if len(self.exponents) != self.group.rank:
            raise ValueError("exponent tuple has wrong rank")

    @property
    def is_trivial(self) -> bool:
        return all(c == 0 for c in self.exponents)

    @property
    def is_real(self) -> bool:
        """True when the character squares to the trivial one (values in {-1, 1})."""
        return all((2 * c) % m == 0 for c, m in zip(self.exponents, self.group.moduli))

    def angle(self, el) -> float:
        el = self.group.coerce(el)
        frac = sum(
            (c * a) / m for c, a, m in zip(self.exponents, el, self.group.moduli)
        )
        return 2.0 * math.pi * (frac % 1.0)

    def value(self, el) -> complex:
        return complex(np.exp(1j * self.angle(el)))

    def angles(self) -> np.ndarray:
        """Angles over all group elements in row-major index order."""
        coords = np.indices(self.group.moduli).reshape(self.group.rank, -1)
        frac = np.zeros(self.group.order)
        for c, m, row in zip(self.exponents, self.group.moduli, coords):
            frac += (c * row) / m
        return 2.0 * np.pi * np.mod(frac, 1.0)

    def values(self) -> np.ndarray:
        return np.exp(1j * self.angles())


def characters(group: AbelianGroup) -> list[Character]:
    """All characters, enumerated by exponent tuple in row-major order."""
    return [Character(group, exps) for exps in product(*(range(m) for m in group.moduli))]


@dataclass(frozen=True)
class GroupDistanceVector:
    """Distance-from-identity profile of a translation-invariant metric.

    Validates symmetry under negation and subadditivity; positive off the
    identity. Float inputs get a relative tolerance, integers are exact.
    """

    group: AbelianGroup
    values: tuple[Number, ...]

    def __post_init__(self):
        g = self.group
        vals = self.values
        if len(vals) != g.order:
            raise ValueError("length must equal the group order")
        if vals[0] != 0:
            raise ValueError(f"d(identity) must be 0, got {vals[0]!r}")
        arr = np.asarray(vals, dtype=float)
        integral = all(isinstance(x, int) for x in vals)
        tol = 0.0 if integral else 1e-9 * max(1.0, float(arr.max()))
        if np.any(arr[1:] <= tol):
            bad = int(np.argmax(arr[1:] <= tol)) + 1
            raise ValueError(f"d must be positive off the identity (index {bad})")
        perm = g.negation_permutation()
        if np.any(np.abs(arr - arr[perm]) > tol):
            bad = int(np.argmax(np.abs(arr - arr[perm]) > tol))
            raise ValueError(f"d(v) != d(-v) at index {bad}")
        tensor = arr.reshape(g.moduli)
        for i, el in enumerate(g.elements()):
            shifted = tensor
            for axis, coord in enumerate(el):
                shifted = np.roll(shifted, -coord, axis=axis)
            # shifted[v] = d(u + v) for u = element(i)
            if np.any(shifted > arr[i] + tensor + tol):
                raise ValueError(
                    f"subadditivity fails: d(u+v) > d(u) + d(v) with u = {el}"
                )

    @property
    def total(self) -> Number:
        return sum(self.values)


def cayley_graph(group: AbelianGroup, connection) -> Graph:
    """Cayley graph: u ~ u + s for every s in the connection set.

    The connection set must exclude the identity and be closed under
    negation (that is what makes the graph undirected). Connectivity is
    not checked here; it fails downstream if the set does not generate.
    """
    conn = {group.coerce(s) for s in connection}
    ident = group.identity()
    if ident in conn:
        raise ValueError("connection set must not contain the identity")
    for s in conn:
        if group.neg(s) not in conn:
            raise ValueError(f"connection set is not closed under negation: {s}")
    pairs = []
    for u in group.elements():
        iu = group.index(u)
        for s in conn:
            iv = group.index(group.add(u, s))
            pairs.append((iu, iv))
    return Graph.from_edges(group.order, pairs)


def distance_vector_from_graph(group: AbelianGroup, g: Graph) -> GroupDistanceVector:
    """BFS distances from the identity, validated as translation-invariant."""
    if g.n != group.order:
        raise ValueError("graph order does not match the group order")
    dist = _bfs(g.adjacency(), 0, g.n)
    for v, dv in enumerate(dist):
        if dv < 0:
            raise DisconnectedGraphError(0, v)
    try:
        return GroupDistanceVector(group, tuple(dist))
    except ValueError as exc:
        raise ValueError(
            f"distances are not a translation-invariant metric on {group.label()} "
            f"(is the input really a Cayley graph of this group?): {exc}"
        ) from exc


def cayley_spectrum(
    group: AbelianGroup, dvec: GroupDistanceVector, imag_tol: float = 1e-10
):
    """Closed-form spectrum 1 - (1/t0) * sum_v d(v) chi(v) over all characters.

    Computed as a mixed-radix Fourier contraction, one unitary factor per
    cyclic component. The imaginary parts of the eigenvalues are asserted
    below ``imag_tol`` before being discarded; anything larger signals a
    profile with d(v) != d(-v).
    """
    from .spectral import Spectrum  # local import keeps module deps one-way

    t0 = float(sum(dvec.values))
    if t0 <= 0:
        raise ValueError("total transmission must be positive")
    tensor = np.asarray(dvec.values, dtype=complex).reshape(group.moduli)
    for axis, m in enumerate(group.moduli):
        dft = np.exp(2j * np.pi * np.outer(np.arange(m), np.arange(m)) / m)
        tensor = np.moveaxis(np.tensordot(dft, tensor, axes=(1, axis)), 0, axis)
    sums = tensor.reshape(-1)
    eigs = 1.0 - sums / t0
    worst_imag = float(np.max(np.abs(eigs.imag)))
    if worst_imag > imag_tol:
        raise ValueError(
            f"character sums left imaginary residue {worst_imag:.3e} > {imag_tol:.1e} "
            "(profile is not symmetric under negation)"
        )
    vals = np.sort(eigs.real)
    return Spectrum(
        tuple(float(x) for x in vals),
        eigenvectors=None,
        residual=worst_imag,
        tolerance=imag_tol,
    )


def _quartic(x: float) -> float:
    return (((4.0 * x - 4.0) * x - 31.0) * x - 20.0) * x + 4.0


@lru_cache(maxsize=1)
def odd_order_constant() -> float:
    """Largest root of 4x^4 - 4x^3 - 31x^2 - 20x + 4, about 3.554.

    Found by bisection on [3, 4] to an interval of 1e-14. The odd-order
    spectral floor is 1 - 1/root.
    """
    lo, hi = 3.0, 4.0
    if not (_quartic(lo) < 0.0 < _quartic(hi)):
        raise RuntimeError("quartic does not bracket a root in [3, 4]")
    while hi - lo > 1e-14:
        mid = 0.5 * (lo + hi)
        if _quartic(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@lru_cache(maxsize=1)
def certified_odd_order_constant() -> float:
    """Bisection root cross-checked against the quadratic-form maximum.

    The same number arrives by two independent routes; they must agree to
    1e-10 before any bound that uses it runs.
    """
    from .certify import quadratic_form_max

    root = odd_order_constant()
    other = quadratic_form_max()
    if abs(root - other) > 1e-10:
        raise RuntimeError(
            f"constant cross-check failed: bisection {root!r} vs form maximum {other!r}"
        )
    return root


@dataclass(frozen=True)
class RealCharacterWitness:
    """Combinatorial decomposition behind the real-character bound.

    The -1 class of the character is a coset of the +1 class; shifting by
    its minimal-distance element u0 bounds the +1 class sum by twice the
    -1 class sum.
    """

    minimizer: Element
    plus_sum: float
    minus_sum: float

    @property
    def chain_holds(self) -> bool:
        return self.plus_sum <= 2.0 * self.minus_sum + 1e-9


def real_character_margin(
    group: AbelianGroup, dvec: GroupDistanceVector, chi: Character
) -> tuple[float, RealCharacterWitness]:
    """Value of sum_v d(v) (1 - 3 chi(v)) for a nontrivial {-1,1} character."""
    if chi.is_trivial:
        raise ValueError("character must be nontrivial")
    if not chi.is_real:
        raise ValueError("character must take values in {-1, 1}; "
                         "use complex_character_margin otherwise")
    vals = chi.values().real
    signs = np.rint(vals)
    if np.max(np.abs(vals - signs)) > 1e-12:
        raise RuntimeError("real character produced non-integer signs")
    d = np.asarray(dvec.values, dtype=float)
    margin = float(np.sum(d * (1.0 - 3.0 * signs)))
    minus_idx = np.nonzero(signs < 0)[0]
    u0_idx = int(minus_idx[np.argmin(d[minus_idx])])
    witness = RealCharacterWitness(
        minimizer=group.element(u0_idx),
        plus_sum=float(d[signs > 0].sum()),
        minus_sum=float(d[signs < 0].sum()),
    )
    return margin, witness


def complex_character_margin(
    group: AbelianGroup, dvec: GroupDistanceVector, chi: Character
) -> float:
    """Real part of sum_v d(v) (1 - c * chi(v)) with c the certified constant."""
    if chi.is_trivial or chi.is_real:
        raise ValueError(
            "character must have non-real values; use real_character_margin "
            "for characters squaring to the trivial one"
        )
    c = certified_odd_order_constant()
    d = np.asarray(dvec.values, dtype=float)
    total = complex(np.sum(d * (1.0 - c * chi.values())))
    if abs(total.imag) > 1e-10:
        raise ValueError(
            f"imaginary residue {total.imag:.3e} exceeds 1e-10; "
            "profile is not symmetric under negation"
        )
    return total.real


def check_cayley_bounds(spectrum, group: AbelianGroup, tol: float = 1e-9) -> list[BoundCheck]:
    """Gap floors for Cayley graphs / translation-invariant metrics."""
    gap = spectrum.eigenvalues[1]
    checks = [
        BoundCheck(
            "cayley_floor",
            gap >= CAYLEY_FLOOR - tol,
            gap,
            CAYLEY_FLOOR,
            gap - CAYLEY_FLOOR,
            note="gap >= 2/3 on abelian Cayley structure",
        )
    ]
    if group.order % 2 == 1:
        checks.append(
            BoundCheck(
                "odd_order_floor",
                gap > ODD_ORDER_FLOOR,
                gap,
                ODD_ORDER_FLOOR,
                gap - ODD_ORDER_FLOOR,
                note="strict floor for odd group order",
            )
        )
    return checks


def random_connection_set(
    group: AbelianGroup, rng: np.random.Generator, pairs: int = 2, max_tries: int = 200
) -> frozenset[Element]:
    """Random inverse-closed generating set with roughly ``pairs`` +/- pairs."""
    nonzero = [el for el in group.elements() if el != group.identity()]
    if not nonzero:
        raise ValueError("group is trivial")
    conn: set[Element] = set()
    for _ in range(max_tries):
        el = nonzero[int(rng.integers(len(nonzero)))]
        conn.add(el)
        conn.add(group.neg(el))
        if len(conn) < 2 * pairs and len(conn) < len(nonzero):
            continue
        if _generates(group, conn):
            return frozenset(conn)
    if _generates(group, conn):
        return frozenset(conn)
    raise RuntimeError(f"failed to draw a generating set for {group.label()}")


def _generates(group: AbelianGroup, conn: set[Element]) -> bool:
    seen = {group.identity()}
    frontier = [group.identity()]
    while frontier:
        u = frontier.pop()
        for s in conn:
            w = group.add(u, s)
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return len(seen) == group.order


def random_group_metric(
    group: AbelianGroup, rng: np.random.Generator, pairs: int = 2
) -> GroupDistanceVector:
    """Random translation-invariant metric as a weighted-Cayley path metric.

    Positive weights on an inverse-closed generating set induce a shortest
    path metric that satisfies every profile invariant by construction;
    the profile is symmetrized pairwise to kill float asymmetry from
    summation order.
    """
    conn = random_connection_set(group, rng, pairs=pairs)
    weight: dict[Element, float] = {}
    for s in sorted(conn):
        if s not in weight:
            w = float(rng.uniform(0.5, 2.0))
            weight[s] = w
            weight[group.neg(s)] = w
    order = group.order
    dist = [math.inf] * order
    dist[group.index(group.identity())] = 0.0
    heap: list[tuple[float, int]] = [(0.0, group.index(group.identity()))]
    while heap:
        du, iu = heapq.heappop(heap)
        if du > dist[iu]:
            continue
        u = group.element(iu)
        for s, w in weight.items():
            iv = group.index(group.add(u, s))
            alt = du + w
            if alt < dist[iv]:
                dist[iv] = alt
                heapq.heappush(heap, (alt, iv))
    arr = np.asarray(dist)
    arr = 0.5 * (arr + arr[group.negation_permutation()])
    return GroupDistanceVector(group, tuple(float(x) for x in arr))
