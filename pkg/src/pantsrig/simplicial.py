"""Finite abstract simplicial complexes, dual graphs and one-skeleton reconstruction."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable

from pantsrig import _refine

DEFAULT_AUTOMORPHISM_BOUND = 4000


class HypothesisViolation(ValueError):
    """Raised when the clique-reconstruction hypothesis fails on the input."""


class NotPure(ValueError):
    pass


def _key(v):
    return (type(v).__name__, v) if not isinstance(v, tuple) else ("tuple", v)


def _sorted(vs: Iterable) -> tuple:
    return tuple(sorted(vs, key=_key))


class SimplicialComplex:
    """A downward-closed family of finite vertex sets.

    Built from any generating family of simplices; all faces are
    materialized.  Isolated vertices may be given through ``vertices``.
    """

    def __init__(self, simplices: Iterable[Iterable[Hashable]] = (), vertices: Iterable[Hashable] = ()):
        faces: set[frozenset] = set()
        for s in simplices:
            s = frozenset(s)
            if not s or s in faces:
                continue
            items = list(s)
            for r in range(1, len(items) + 1):
                for sub in combinations(items, r):
                    faces.add(frozenset(sub))
        for v in vertices:
            faces.add(frozenset([v]))
        self._faces = frozenset(faces)
        self.vertices = _sorted(v for f in faces if len(f) == 1 for v in f)

    @property
    def faces(self) -> frozenset[frozenset]:
        return self._faces

    def __contains__(self, simplex) -> bool:
        return frozenset(simplex) in self._faces

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplicialComplex) and self._faces == other._faces

    def __hash__(self) -> int:
        return hash(self._faces)

    def __len__(self) -> int:
        return len(self._faces)

    def __repr__(self) -> str:
        return f"SimplicialComplex(vertices={len(self.vertices)}, faces={len(self._faces)}, dim={self.dim})"

    @property
    def dim(self) -> int:
        return max((len(f) for f in self._faces), default=0) - 1

    def simplices(self, k: int) -> list[tuple]:
        return sorted((_sorted(f) for f in self._faces if len(f) == k + 1), key=lambda t: tuple(map(_key, t)))

    @property
    def facets(self) -> list[tuple]:
        covered = set()
        for g in self._faces:
            if len(g) > 1:
                covered.update(g - {v} for v in g)
        maximal = [f for f in self._faces if f not in covered]
        return sorted((_sorted(f) for f in maximal), key=lambda t: (len(t), tuple(map(_key, t))))

    def is_pure(self) -> bool:
        return len({len(f) for f in self.facets}) <= 1

    def one_skeleton(self) -> "Graph":
        return Graph(self.vertices, [tuple(f) for f in self._faces if len(f) == 2])

    def is_flag(self) -> bool:
        return flag_closure(self) == self

    # -- serialization

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices), "facets": [list(f) for f in self.facets]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "SimplicialComplex":
        def conv(v):
            return tuple(v) if isinstance(v, list) else v

        return cls([[conv(v) for v in f] for f in data["facets"]], [conv(v) for v in data["vertices"]])


@dataclass(frozen=True)
class Graph:
    vertices: tuple
    edges: frozenset = field(default_factory=frozenset)

    def __init__(self, vertices: Iterable[Hashable], edges: Iterable[Iterable[Hashable]] = ()):
        vs = _sorted(set(vertices))
        es = set()
        vset = set(vs)
        for e in edges:
            e = frozenset(e)
            if len(e) != 2:
                raise ValueError(f"not a simple edge: {set(e)}")
            if not e <= vset:
                raise ValueError(f"edge {set(e)} references a missing vertex")
            es.add(e)
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", frozenset(es))

    def neighbors(self) -> dict:
        nb = {v: set() for v in self.vertices}
        for e in self.edges:
            a, b = tuple(e)
            nb[a].add(b)
            nb[b].add(a)
        return nb

    def as_complex(self) -> SimplicialComplex:
        return SimplicialComplex(self.edges, self.vertices)

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        nb = self.neighbors()
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for u in nb[stack.pop()] - seen:
                seen.add(u)
                stack.append(u)
        return len(seen) == len(self.vertices)

    def sorted_edges(self) -> list[tuple]:
        return sorted((_sorted(e) for e in self.edges), key=lambda t: tuple(map(_key, t)))

    def to_dot(self, name: str = "G", edge_attrs: dict | None = None) -> str:
        index = {v: i for i, v in enumerate(self.vertices)}
        lines = [f"graph {name} {{"]
        for v, i in index.items():
            lines.append(f'  {i} [label="{v}"];')
        for a, b in sorted((index[a], index[b]) if index[a] < index[b] else (index[b], index[a]) for a, b in (tuple(e) for e in self.edges)):
            attr = ""
            if edge_attrs:
                extra = edge_attrs.get(frozenset((self.vertices[a], self.vertices[b])))
                if extra:
                    attr = f" [{extra}]"
            lines.append(f"  {a} -- {b}{attr};")
        lines.append("}")
        return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------


def maximal_cliques(graph: Graph, min_size: int = 1) -> list[tuple]:
    """Bron-Kerbosch with pivoting; output sorted, filtered by size."""
    nb = graph.neighbors()
    out: list[tuple] = []

    def expand(r: set, p: set, x: set) -> None:
        if not p and not x:
            if len(r) >= min_size:
                out.append(_sorted(r))
            return
        pivot = max(p | x, key=lambda u: len(nb[u] & p))
        for v in list(p - nb[pivot]):
            expand(r | {v}, p & nb[v], x & nb[v])
            p = p - {v}
            x = x | {v}

    expand(set(), set(graph.vertices), set())
    return sorted(out, key=lambda t: tuple(map(_key, t)))


def flag_closure(X: SimplicialComplex) -> SimplicialComplex:
    skel = X.one_skeleton()
    return SimplicialComplex(maximal_cliques(skel), X.vertices)


def link(X: SimplicialComplex, sigma) -> SimplicialComplex:
    sigma = frozenset(sigma)
    if sigma not in X.faces:
        raise ValueError(f"{set(sigma)} is not a simplex")
    faces = [f for f in X.faces if not (f & sigma) and (f | sigma) in X.faces]
    return SimplicialComplex(faces)


def complement_graph(X: SimplicialComplex) -> Graph:
    """Same vertices; an edge exactly where X has none."""
    edges = {f for f in X.faces if len(f) == 2}
    pairs = [frozenset(p) for p in combinations(X.vertices, 2)]
    return Graph(X.vertices, [p for p in pairs if p not in edges])


def link_and_dual_link(X: SimplicialComplex, sigma) -> tuple[SimplicialComplex, Graph]:
    L = link(X, sigma)
    return L, complement_graph(L)


def join(X: SimplicialComplex, Y: SimplicialComplex) -> SimplicialComplex:
    """Simplicial join; vertex ids are tagged ``(0, v)`` / ``(1, v)`` when the two vertex sets collide."""
    if set(X.vertices) & set(Y.vertices):
        X = SimplicialComplex([[(0, v) for v in f] for f in X.faces])
        Y = SimplicialComplex([[(1, v) for v in f] for f in Y.faces])
    xs = [f for f in X.faces] or [frozenset()]
    ys = [f for f in Y.faces] or [frozenset()]
    if not X.faces:
        return Y
    if not Y.faces:
        return X
    return SimplicialComplex(a | b for a in xs for b in ys)


def dual_graph(X: SimplicialComplex) -> Graph:
    facets = X.facets
    sizes = {len(f) for f in facets}
    if len(sizes) > 1:
        small = min(facets, key=len)
        big = max(facets, key=len)
        raise NotPure(f"complex is not pure: facets {small} and {big} have different dimensions")
    if not facets:
        return Graph([])
    d = len(facets[0]) - 1
    fsets = [frozenset(f) for f in facets]
    # bucket by codimension-one faces
    by_ridge: dict[frozenset, list[int]] = {}
    for i, f in enumerate(fsets):
        for r in combinations(sorted(f, key=_key), d):
            by_ridge.setdefault(frozenset(r), []).append(i)
    edges = set()
    for members in by_ridge.values():
        for a, b in combinations(members, 2):
            edges.add((facets[a], facets[b]))
    return Graph(facets, edges)


def reconstruct_one_skeleton(D: Graph, d: int) -> Graph:
    """Rebuild the 1-skeleton of a pure d-complex from its dual graph.

    Ridges are the maximal cliques of D with at least d+3 vertices.  A vertex
    of the complex is named by a corner ``(facet, ridge)``: the vertex of the
    facet opposite the ridge.  Corners of facets adjacent across a ridge q
    are identified when the two opposite ridges lie in a common facet (they
    then share a codimension-two face), and when only one corner on q is left
    unmatched on each side.  Vertices are the corner classes; two are joined
    when they are corners of a common facet.  The result is returned on
    integer vertex ids ``0..V-1``.

    Raises HypothesisViolation when a facet is not covered by exactly d+1
    qualifying cliques, or when the corner identification is inconsistent.
    """
    if d < 0:
        raise ValueError("dimension must be nonnegative")
    min_size = d + 3
    cliques = [frozenset(c) for c in maximal_cliques(D, min_size)]
    through: dict = {v: [] for v in D.vertices}
    for k, c in enumerate(cliques):
        for v in c:
            through[v].append(k)
    for v in D.vertices:
        if len(through[v]) != d + 1:
            raise HypothesisViolation(
                f"facet {v} lies in {len(through[v])} qualifying cliques, expected {d + 1}"
            )

    parent: dict = {(f, k): (f, k) for f in D.vertices for k in through[f]}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b) -> bool:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        if repr(rb) < repr(ra):
            ra, rb = rb, ra
        parent[rb] = ra
        return True

    nb = D.neighbors()
    crossings = []
    for f in D.vertices:
        for g in nb[f]:
            if repr(f) >= repr(g):
                continue
            shared = set(through[f]) & set(through[g])
            if len(shared) != 1:
                raise HypothesisViolation(f"adjacent facets {f} and {g} share {len(shared)} ridges")
            (q,) = shared
            crossings.append((f, g, q))
            for r in through[f]:
                if r == q:
                    continue
                for s in through[g]:
                    if s != q and cliques[r] & cliques[s]:
                        union((f, r), (g, s))

    def settle_complements() -> bool:
        progress = False
        for f, g, q in crossings:
            left = [(f, r) for r in through[f] if r != q]
            right = [(g, s) for s in through[g] if s != q]
            lroots = {find(c) for c in left}
            rroots = {find(c) for c in right}
            lfree = [c for c in left if find(c) not in rroots]
            rfree = [c for c in right if find(c) not in lroots]
            if len(lfree) == 1 and len(rfree) == 1:
                progress |= union(lfree[0], rfree[0])
        return progress

    while settle_complements():
        pass
    # residual symmetric ambiguity: match leftovers in a fixed order
    for f, g, q in crossings:
        left = [(f, r) for r in through[f] if r != q]
        right = [(g, s) for s in through[g] if s != q]
        lroots = {find(c) for c in left}
        rroots = {find(c) for c in right}
        lfree = sorted((c for c in left if find(c) not in rroots), key=repr)
        rfree = sorted((c for c in right if find(c) not in lroots), key=repr)
        merged = False
        for a, b in zip(lfree, rfree):
            merged |= union(a, b)
        if merged:
            while settle_complements():
                pass

    roots = sorted({find(c) for c in parent}, key=repr)
    vid = {r: i for i, r in enumerate(roots)}
    facet_vertices = {}
    for f in D.vertices:
        corners = {vid[find((f, k))] for k in through[f]}
        if len(corners) != d + 1:
            raise HypothesisViolation(f"facet {f}: corner identification collapsed to {len(corners)} vertices")
        facet_vertices[f] = frozenset(corners)
    # the rebuilt complex must reproduce D exactly
    for f, g, q in crossings:
        if len(facet_vertices[f] & facet_vertices[g]) != d:
            raise HypothesisViolation(f"facets {f}, {g} do not share a ridge after reconstruction")
    rebuilt = SimplicialComplex(facet_vertices.values())
    if len(rebuilt.facets) != len(D.vertices) or len(dual_graph(rebuilt).edges) != len(D.edges):
        raise HypothesisViolation("reconstructed complex does not reproduce the dual graph")
    return rebuilt.one_skeleton()


def automorphism_group(X: SimplicialComplex, bound: int = DEFAULT_AUTOMORPHISM_BOUND):
    """Generators (as vertex dicts) and order of the simplicial automorphism group."""
    if len(X.vertices) > bound:
        raise ValueError(f"instance too large: {len(X.vertices)} vertices exceed bound {bound}")
    colors, adj, nverts = _incidence(X)
    gens, order = _refine.automorphism_group(colors, adj, domain=range(nverts))
    vs = X.vertices
    return [{vs[i]: vs[p[i]] for i in range(nverts)} for p in gens], order


def _incidence(X: SimplicialComplex):
    vs = X.vertices
    index = {v: i for i, v in enumerate(vs)}
    facets = X.facets
    n = len(vs)
    colors = [(0,)] * n + [(1, len(f)) for f in facets]
    adj: list[dict[int, int]] = [dict() for _ in range(n + len(facets))]
    for j, f in enumerate(facets):
        for v in f:
            adj[index[v]][n + j] = 1
            adj[n + j][index[v]] = 1
    return colors, adj, n


def find_isomorphism(X: SimplicialComplex, Y: SimplicialComplex) -> dict | None:
    """A vertex bijection carrying X onto Y, or None."""
    if len(X.vertices) != len(Y.vertices) or sorted(map(len, X.faces)) != sorted(map(len, Y.faces)):
        return None
    cx, ax, nx = _incidence(X)
    cy, ay, _ = _incidence(Y)
    if sorted(cx) != sorted(cy):
        return None
    mapping = _match(cx, ax, _refine.initial_partition(cx), cy, ay, _refine.initial_partition(cy))
    if mapping is None:
        return None
    return {X.vertices[i]: Y.vertices[mapping[i]] for i in range(nx)}


def _match(cx, ax, px, cy, ay, py):
    """Backtracking search for a color-preserving isomorphism between two graphs."""
    px = _refine.refine(ax, px)
    py = _refine.refine(ay, py)
    if [len(c) for c in px] != [len(c) for c in py]:
        return None
    for a, b in zip(px, py):
        if cx[a[0]] != cy[b[0]]:
            return None
    i = next((k for k, c in enumerate(px) if len(c) > 1), -1)
    if i < 0:
        perm = {a[0]: b[0] for a, b in zip(px, py)}
        for v, w in perm.items():
            if {perm[u]: m for u, m in ax[v].items()} != ay[w]:
                return None
        return perm
    x = px[i][0]
    lx = _refine.individualize(px, x)
    for y in py[i]:
        found = _match(cx, ax, lx, cy, ay, _refine.individualize(py, y))
        if found is not None:
            return found
    return None


def is_isomorphic(X: SimplicialComplex, Y: SimplicialComplex) -> bool:
    return find_isomorphism(X, Y) is not None


def is_automorphism(X: SimplicialComplex, perm: dict) -> bool:
    return {frozenset(perm[v] for v in f) for f in X.faces} == set(X.faces)
