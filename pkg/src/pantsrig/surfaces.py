"""Surface types, stable graphs of multicurves, and curve-complex invariants.

A multicurve on S_{g,n} is recorded up to the mapping class group (punctures
unordered) by its stable graph: one vertex per component of the complement,
decorated by genus and number of punctures (legs), one edge per curve.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from pantsrig._refine import canonical_labeling

DEFAULT_BRUTEFORCE_BOUND = 12


class InstanceTooLarge(ValueError):
    pass


@dataclass(frozen=True, order=True)
class SurfaceType:
    genus: int
    punctures: int

    def __post_init__(self):
        if self.genus < 0 or self.punctures < 0:
            raise ValueError(f"negative surface data {self}")

    @property
    def euler(self) -> int:
        return 2 - 2 * self.genus - self.punctures

    @property
    def is_hyperbolic(self) -> bool:
        return self.euler < 0

    @property
    def dim(self) -> int:
        return modular_dimension(self)

    def __str__(self) -> str:
        return f"S({self.genus},{self.punctures})"


def as_surface(s) -> SurfaceType:
    if isinstance(s, SurfaceType):
        return s
    g, n = s
    return SurfaceType(int(g), int(n))


def _require_hyperbolic(s: SurfaceType) -> None:
    if not s.is_hyperbolic:
        raise ValueError(f"{s} is not hyperbolic (2g-2+n must be positive)")


def modular_dimension(s) -> int:
    s = as_surface(s)
    _require_hyperbolic(s)
    return 3 * s.genus - 3 + s.punctures


def sep_nsep_formula(s) -> tuple[int, int]:
    """Closed-form (Sep, NSep) as tabulated for hyperbolic S_{g,n}."""
    s = as_surface(s)
    _require_hyperbolic(s)
    g, n = s.genus, s.punctures
    if g == 0:
        sep = max(n - 5, 0)
    elif g == 1:
        sep = max(n - 2, 0)
    else:
        sep = 2 * g + n - 3
    nsep = n // 2 if g == 0 else 3 * g + n - 3
    return sep, nsep


def sep_nsep(s) -> tuple[int, int]:
    """The true (Sep, NSep) counts.

    Agrees with :func:`sep_nsep_formula` except on S_{0,3} and S_{0,4}, where
    a simplex holds at most d(S) curves, so NSep is capped by d.
    """
    s = as_surface(s)
    sep, nsep = sep_nsep_formula(s)
    return sep, min(nsep, modular_dimension(s))


# --------------------------------------------------------------------------
# stable graphs


class EdgeClass(enum.Enum):
    SEPARATING_NON_BOUNDARY = "separating"
    BOUNDARY_TYPE = "boundary"
    NONSEPARATING = "nonseparating"

    @property
    def counts_toward_nsep(self) -> bool:
        return self is not EdgeClass.SEPARATING_NON_BOUNDARY


@dataclass(frozen=True)
class StableGraph:
    """Vertices are ``(genus, legs)`` pairs; edges are sorted index pairs, loops as ``(i, i)``."""

    vertices: tuple[tuple[int, int], ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple((int(g), int(l)) for g, l in self.vertices))
        object.__setattr__(self, "edges", tuple(sorted(tuple(sorted((int(a), int(b)))) for a, b in self.edges)))
        nv = len(self.vertices)
        for a, b in self.edges:
            if not (0 <= a < nv and 0 <= b < nv):
                raise ValueError(f"edge {(a, b)} references a missing vertex")

    # -- structure

    def valence(self, v: int) -> int:
        ends = sum((a == v) + (b == v) for a, b in self.edges)
        return self.vertices[v][1] + ends

    def edge_ends(self, v: int) -> int:
        return sum((a == v) + (b == v) for a, b in self.edges)

    @property
    def betti(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    @property
    def genus(self) -> int:
        return sum(g for g, _ in self.vertices) + self.betti

    @property
    def n_legs(self) -> int:
        return sum(l for _, l in self.vertices)

    @property
    def surface(self) -> SurfaceType:
        return SurfaceType(self.genus, self.n_legs)

    def is_connected(self, skip: int | None = None) -> bool:
        nv = len(self.vertices)
        if nv == 0:
            return False
        nbrs: list[set[int]] = [set() for _ in range(nv)]
        for k, (a, b) in enumerate(self.edges):
            if k != skip:
                nbrs[a].add(b)
                nbrs[b].add(a)
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for u in nbrs[v] - seen:
                seen.add(u)
                stack.append(u)
        return len(seen) == nv

    def is_stable(self) -> bool:
        return self.is_connected() and all(
            2 - 2 * g - self.valence(v) < 0 for v, (g, _) in enumerate(self.vertices)
        )

    def validate(self, s=None) -> None:
        if not self.is_connected():
            raise ValueError("stable graph must be connected")
        for v, (g, _) in enumerate(self.vertices):
            if 2 - 2 * g - self.valence(v) >= 0:
                raise ValueError(f"vertex {v} is not stable")
        if s is not None and self.surface != as_surface(s):
            raise ValueError(f"graph has type {self.surface}, expected {as_surface(s)}")

    # -- canonical form

    def _colored(self):
        nv = len(self.vertices)
        loops = [0] * nv
        adj: list[dict[int, int]] = [dict() for _ in range(nv)]
        for a, b in self.edges:
            if a == b:
                loops[a] += 1
            else:
                adj[a][b] = adj[a].get(b, 0) + 1
                adj[b][a] = adj[b].get(a, 0) + 1
        colors = [(g, l, loops[v]) for v, (g, l) in enumerate(self.vertices)]
        return colors, adj

    def relabel(self, perm: list[int]) -> "StableGraph":
        """Move vertex ``v`` to position ``perm[v]``."""
        verts = [None] * len(self.vertices)
        for v, p in enumerate(perm):
            verts[p] = self.vertices[v]
        return StableGraph(tuple(verts), tuple((perm[a], perm[b]) for a, b in self.edges))

    def canonical(self) -> "StableGraph":
        colors, adj = self._colored()
        _, order = canonical_labeling(colors, adj)
        perm = [0] * len(order)
        for i, v in enumerate(order):
            perm[v] = i
        return self.relabel(perm)

    def sort_key(self) -> tuple:
        return (self.vertices, self.edges)

    # -- serialization

    def to_dict(self) -> dict:
        return {
            "vertices": [{"g": g, "legs": l} for g, l in self.vertices],
            "edges": [[a, b] for a, b in self.edges],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "StableGraph":
        return cls(
            tuple((v["g"], v["legs"]) for v in data["vertices"]),
            tuple(tuple(e) for e in data["edges"]),
        )


def single_vertex(s) -> StableGraph:
    s = as_surface(s)
    return StableGraph(((s.genus, s.punctures),), ())


def _degenerations(G: StableGraph):
    """All stable graphs obtained by adding one edge to G (inverse of contraction)."""
    for v, (g, legs) in enumerate(G.vertices):
        if g >= 1:
            verts = list(G.vertices)
            verts[v] = (g - 1, legs)
            yield StableGraph(tuple(verts), G.edges + ((v, v),))
        # half-edge ends at v: (edge index, which end)
        ends = []
        for k, (a, b) in enumerate(G.edges):
            if a == v:
                ends.append((k, 0))
            if b == v:
                ends.append((k, 1))
        new = len(G.vertices)
        for mask in range(1 << len(ends)):
            moved = {ends[i] for i in range(len(ends)) if mask >> i & 1}
            n_moved = len(moved)
            n_kept = len(ends) - n_moved
            for g1 in range(g + 1):
                for l1 in range(legs + 1):
                    g2, l2 = g - g1, legs - l1
                    if 2 - 2 * g1 - (l1 + n_kept + 1) >= 0:
                        continue
                    if 2 - 2 * g2 - (l2 + n_moved + 1) >= 0:
                        continue
                    verts = list(G.vertices) + [(g2, l2)]
                    verts[v] = (g1, l1)
                    edges = []
                    for k, (a, b) in enumerate(G.edges):
                        pa = new if (k, 0) in moved else a
                        pb = new if (k, 1) in moved else b
                        edges.append((pa, pb))
                    edges.append((v, new))
                    yield StableGraph(tuple(verts), tuple(edges))


@lru_cache(maxsize=None)
def _stable_graph_levels(s: SurfaceType, k: int) -> tuple[StableGraph, ...]:
    if k == 0:
        return (single_vertex(s).canonical(),)
    found: dict[tuple, StableGraph] = {}
    for G in _stable_graph_levels(s, k - 1):
        for H in _degenerations(G):
            C = H.canonical()
            found.setdefault(C.sort_key(), C)
    return tuple(found[key] for key in sorted(found))


def enumerate_stable_graphs(s, k: int) -> list[StableGraph]:
    """Canonical representatives of topological types of k-multicurves on s."""
    s = as_surface(s)
    d = modular_dimension(s)
    if k < 0:
        raise ValueError("edge count must be nonnegative")
    if k > d:
        return []
    return list(_stable_graph_levels(s, k))


# -- maximal multicurves (trivalent graphs), built by adding legs


def _cubic_graphs(g: int) -> list[StableGraph]:
    """Connected trivalent graphs without legs and first Betti number g >= 2."""
    nv = 2 * g - 2
    half = [v for v in range(nv) for _ in range(3)]
    found: dict[tuple, StableGraph] = {}

    def matchings(items):
        if not items:
            yield []
            return
        first, rest = items[0], items[1:]
        for i in range(len(rest)):
            for m in matchings(rest[:i] + rest[i + 1:]):
                yield [(first, rest[i])] + m

    for m in matchings(list(range(len(half)))):
        G = StableGraph(tuple((0, 0) for _ in range(nv)), tuple((half[a], half[b]) for a, b in m))
        if G.is_connected():
            C = G.canonical()
            found.setdefault(C.sort_key(), C)
    return [found[key] for key in sorted(found)]


def _add_leg(G: StableGraph):
    new = len(G.vertices)
    for k, (a, b) in enumerate(G.edges):
        edges = list(G.edges)
        edges[k] = (a, new)
        edges.append((new, b))
        yield StableGraph(G.vertices + ((0, 1),), tuple(edges))
    for v, (g, legs) in enumerate(G.vertices):
        if legs:
            verts = list(G.vertices)
            verts[v] = (g, legs - 1)
            yield StableGraph(tuple(verts) + ((0, 2),), G.edges + ((v, new),))


@lru_cache(maxsize=None)
def pants_graphs(s: SurfaceType) -> tuple[StableGraph, ...]:
    """Canonical stable graphs with d(s) edges, i.e. types of pants decompositions."""
    _require_hyperbolic(s)
    g, n = s.genus, s.punctures
    if g == 0 and n == 3:
        base = [StableGraph(((0, 3),), ())]
    elif g == 1 and n == 1:
        base = [StableGraph(((0, 1),), ((0, 0),))]
    elif g >= 2 and n == 0:
        base = _cubic_graphs(g)
    else:
        prev = SurfaceType(g, n - 1)
        found: dict[tuple, StableGraph] = {}
        for G in pants_graphs(prev):
            for H in _add_leg(G):
                C = H.canonical()
                found.setdefault(C.sort_key(), C)
        base = [found[key] for key in sorted(found)]
    return tuple(base)


# --------------------------------------------------------------------------
# curve classes and invariants


def classify_edge(G: StableGraph, e: int) -> EdgeClass:
    if not 0 <= e < len(G.edges):
        raise IndexError(f"edge {e} out of range")
    a, b = G.edges[e]
    if a == b or G.edges.count((a, b)) > 1 or G.is_connected(skip=e):
        return EdgeClass.NONSEPARATING
    for v in (a, b):
        g, legs = G.vertices[v]
        if g == 0 and legs == 2 and G.edge_ends(v) == 1:
            return EdgeClass.BOUNDARY_TYPE
    return EdgeClass.SEPARATING_NON_BOUNDARY


def class_counts(G: StableGraph) -> dict[EdgeClass, int]:
    counts = {c: 0 for c in EdgeClass}
    for e in range(len(G.edges)):
        counts[classify_edge(G, e)] += 1
    return counts


def sep_nsep_bruteforce(s, bound: int = DEFAULT_BRUTEFORCE_BOUND) -> tuple[int, int]:
    """(Sep, NSep) by exhaustive search over types of pants decompositions.

    Whether a curve is separating or of boundary type does not depend on the
    rest of the multicurve, so the maxima are attained on maximal multicurves.
    """
    s = as_surface(s)
    d = modular_dimension(s)
    if d > bound:
        raise InstanceTooLarge(f"instance too large: d({s}) = {d} exceeds bound {bound}")
    best_sep = best_nsep = 0
    for G in pants_graphs(s):
        counts = class_counts(G)
        best_sep = max(best_sep, counts[EdgeClass.SEPARATING_NON_BOUNDARY])
        best_nsep = max(best_nsep, counts[EdgeClass.BOUNDARY_TYPE] + counts[EdgeClass.NONSEPARATING])
    return best_sep, best_nsep


def count_orbit_types(s) -> int:
    s = as_surface(s)
    d = modular_dimension(s)
    if d <= 1:
        raise ValueError(f"orbit types need d > 1, got d({s}) = {d}")
    return len(enumerate_stable_graphs(s, d - 1))


def cut_along(s, G: StableGraph) -> list[SurfaceType]:
    """Component types of S minus the single curve recorded by G."""
    s = as_surface(s)
    if len(G.edges) != 1:
        raise ValueError(f"expected a one-edge stable graph, got {len(G.edges)} edges")
    G.validate(s)
    out = [SurfaceType(g, legs + G.edge_ends(v)) for v, (g, legs) in enumerate(G.vertices)]
    return sorted(out)


@lru_cache(maxsize=None)
def _fingerprint(s: SurfaceType, depth: int) -> tuple:
    d = modular_dimension(s)
    sep, nsep = sep_nsep(s)
    if depth == 0:
        return (d, sep, nsep)
    links = []
    for G in enumerate_stable_graphs(s, 1):
        parts = [_fingerprint(c, depth - 1) for c in cut_along(s, G) if modular_dimension(c) > 0]
        links.append(tuple(sorted(parts)))
    return (d, sep, nsep, tuple(sorted(links)))


def cc_fingerprint(s, depth: int) -> tuple:
    """Recursive link fingerprint of the curve complex of s.

    Depth 0 is ``(d, Sep, NSep)``; depth k appends the sorted multiset, over
    topological types of single curves, of the depth-(k-1) fingerprints of
    the complementary pieces (pieces of type (0,3) have empty curve complex
    and are dropped).
    """
    s = as_surface(s)
    _require_hyperbolic(s)
    if not 0 <= depth <= 3:
        raise ValueError("depth must lie in 0..3")
    return _fingerprint(s, depth)


def hyperbolic_types(max_dim: int) -> list[SurfaceType]:
    out = []
    g = 0
    while 3 * g - 3 <= max_dim:
        for n in range(0, max_dim + 4):
            s = SurfaceType(g, n)
            if s.is_hyperbolic and modular_dimension(s) <= max_dim:
                out.append(s)
        g += 1
    return out


def depth0_collisions(max_dim: int) -> list[tuple[SurfaceType, SurfaceType]]:
    types = hyperbolic_types(max_dim)
    pairs = []
    for a, b in combinations(types, 2):
        if cc_fingerprint(a, 0) == cc_fingerprint(b, 0):
            pairs.append(tuple(sorted((a, b))))
    return sorted(pairs)
