"""Farey graph and its principal congruence quotients.

The quotient of the Farey tessellation by Gamma(m) is built from cosets of
G = PSL2(Z/m): vertices are cosets of <T>, edges cosets of <S>, triangles
cosets of <R>.  Every cell is carried around by a representative matrix
``(a, b, c, d)`` and identified by a canonical key, which makes left
multiplication, reflection and level projection one-liners.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from . import _refine

Matrix = tuple[int, int, int, int]

T_GEN: Matrix = (1, 1, 0, 1)
S_GEN: Matrix = (0, -1, 1, 0)
R_GEN: Matrix = (0, -1, 1, -1)

DEFAULT_AUTOMORPHISM_BOUND = 600


@dataclass(frozen=True, order=True)
class Slope:
    """A reduced fraction p/q with q > 0, or 1/0 for infinity."""

    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if p == 0 and q == 0:
            raise ValueError("0/0 is not a slope")
        if gcd(p, q) != 1:
            raise ValueError(f"{p}/{q} is not reduced")
        if q < 0 or (q == 0 and p != 1):
            raise ValueError(f"{p}/{q} is not in canonical sign")

    @classmethod
    def of(cls, p: int, q: int) -> "Slope":
        g = gcd(p, q)
        if g == 0:
            raise ValueError("0/0 is not a slope")
        p, q = p // g, q // g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        return cls(p, q)

    @classmethod
    def infinity(cls) -> "Slope":
        return cls(1, 0)

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


def farey_adjacent(a: Slope, b: Slope) -> bool:
    return abs(a.p * b.q - b.p * a.q) == 1


# -- arithmetic in PSL2(Z/m) -------------------------------------------------

def _mul(x: Matrix, y: Matrix, m: int) -> Matrix:
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % m, (a * f + b * h) % m, (c * e + d * g) % m, (c * f + d * h) % m)


def _norm(x: Matrix, m: int) -> Matrix:
    x = tuple(v % m for v in x)
    neg = tuple(-v % m for v in x)
    return min(x, neg)


def _norm_pair(a: int, c: int, m: int) -> tuple[int, int]:
    return min((a % m, c % m), (-a % m, -c % m))


def _prime_factors(m: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def psl2_order(m: int) -> int:
    """|PSL2(Z/m)| from the prime-power formula |SL2(Z/p^k)| = p^(3k) (1 - 1/p^2)."""
    if m < 2:
        raise ValueError("level must be at least 2")
    sl = 1
    for p, k in _prime_factors(m).items():
        sl *= p ** (3 * k - 2) * (p * p - 1)
    # -I is trivial only when m = 2
    return sl if m == 2 else sl // 2


def psl2_elements(m: int) -> list[Matrix]:
    seen = set()
    for a in range(m):
        for b in range(m):
            for c in range(m):
                for d in range(m):
                    if (a * d - b * c) % m == 1:
                        seen.add(_norm((a, b, c, d), m))
    return sorted(seen)


def vertex_key(g: Matrix, m: int) -> tuple[int, int]:
    return _norm_pair(g[0], g[2], m)


def edge_key(g: Matrix, m: int) -> Matrix:
    return min(_norm(g, m), _norm(_mul(g, S_GEN, m), m))


def triangle_key(g: Matrix, m: int) -> Matrix:
    gr = _mul(g, R_GEN, m)
    return min(_norm(g, m), _norm(gr, m), _norm(_mul(gr, R_GEN, m), m))


def _triangle_corners(g: Matrix, m: int) -> tuple:
    """Vertex keys of (g.inf, g.0, g.1), the positive cyclic order."""
    a, b, c, d = g
    return (_norm_pair(a, c, m), _norm_pair(b, d, m), _norm_pair(a + b, c + d, m))


def _triangle_edges(g: Matrix, m: int) -> tuple:
    gr = _mul(g, R_GEN, m)
    return (edge_key(g, m), edge_key(gr, m), edge_key(_mul(gr, R_GEN, m), m))


def _rotate_min(t: tuple) -> tuple:
    k = t.index(min(t))
    return t[k:] + t[:k]


@dataclass
class QuotientSurface:
    """The triangulated closed surface F/Gamma(m).

    ``triangles`` hold vertex indices in positive cyclic order (rotated to
    start at the smallest index); ``triangle_edges`` the three edge indices.
    """

    m: int
    vertices: list[tuple[int, int]]
    edges: list[tuple[int, int]]
    triangles: list[tuple[int, int, int]]
    triangle_edges: list[tuple[int, int, int]]
    vertex_reps: list[Matrix] = field(repr=False)
    edge_reps: list[Matrix] = field(repr=False)
    triangle_reps: list[Matrix] = field(repr=False)

    @property
    def counts(self) -> tuple[int, int, int]:
        return len(self.vertices), len(self.edges), len(self.triangles)

    def vertex_index(self) -> dict:
        return {k: i for i, k in enumerate(self.vertices)}

    def _keys(self):
        m = self.m
        return (
            {vertex_key(g, m): i for i, g in enumerate(self.vertex_reps)},
            {edge_key(g, m): i for i, g in enumerate(self.edge_reps)},
            {triangle_key(g, m): i for i, g in enumerate(self.triangle_reps)},
        )

    def vertex_degrees(self) -> list[int]:
        deg = [0] * len(self.vertices)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def corner_degrees(self) -> list[int]:
        deg = [0] * len(self.vertices)
        for t in self.triangles:
            for v in t:
                deg[v] += 1
        return deg

    def check(self) -> None:
        """Raise ValueError unless every edge lies on two oppositely oriented triangles."""
        sides: dict[int, list[tuple[int, int]]] = {e: [] for e in range(len(self.edges))}
        for t, es in zip(self.triangles, self.triangle_edges):
            for k in range(3):
                u, v = t[k], t[(k + 1) % 3]
                e = es[k]
                if {u, v} != set(self.edges[e]) and not (u == v == self.edges[e][0]):
                    raise ValueError(f"triangle {t} side {k} does not match edge {self.edges[e]}")
                sides[e].append((u, v))
        for e, s in sides.items():
            if len(s) != 2:
                raise ValueError(f"edge {self.edges[e]} lies in {len(s)} triangles")
            (u1, v1), (u2, v2) = s
            if (u1, v1) != (v2, u2):
                raise ValueError(f"edge {self.edges[e]} is not consistently oriented")

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "vertices": [list(v) for v in self.vertices],
            "edges": [list(e) for e in self.edges],
            "triangles": [sorted(t) for t in self.triangles],
            "orientation": [list(t) for t in self.triangles],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def to_dot(self) -> str:
        lines = [f"graph farey_{self.m} {{"]
        for i, (a, c) in enumerate(self.vertices):
            lines.append(f'  {i} [label="{a},{c}"];')
        for i, j in self.edges:
            lines.append(f"  {i} -- {j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_quotient(m: int) -> QuotientSurface:
    if m < 2:
        raise ValueError("level must be at least 2; PSL2(Z) itself inverts edges")
    group = psl2_elements(m)
    vreps: dict = {}
    ereps: dict = {}
    treps: dict = {}
    for g in group:
        vreps.setdefault(vertex_key(g, m), g)
        ereps.setdefault(edge_key(g, m), g)
        treps.setdefault(triangle_key(g, m), g)
    vkeys = sorted(vreps)
    vidx = {k: i for i, k in enumerate(vkeys)}
    ekeys = sorted(ereps)
    eidx = {k: i for i, k in enumerate(ekeys)}
    edges = []
    for k in ekeys:
        g = ereps[k]
        u, v = vidx[vertex_key(g, m)], vidx[_norm_pair(g[1], g[3], m)]
        edges.append((min(u, v), max(u, v)))
    tkeys = sorted(treps)
    triangles = []
    tedges = []
    for k in tkeys:
        g = treps[k]
        corners = tuple(vidx[c] for c in _triangle_corners(g, m))
        es = tuple(eidx[e] for e in _triangle_edges(g, m))
        # rotate corners and edges together; edge k joins corner k to k+1
        r = corners.index(min(corners))
        triangles.append(corners[r:] + corners[:r])
        tedges.append(es[r:] + es[:r])
    Q = QuotientSurface(
        m, vkeys, edges, triangles, tedges,
        [vreps[k] for k in vkeys], [ereps[k] for k in ekeys], [treps[k] for k in tkeys],
    )
    Q.check()
    return Q


@dataclass(frozen=True)
class FlatInvariants:
    euler: int
    genus: int
    angles: tuple[Fraction, ...]  # multiples of pi
    gb_residue: Fraction


def flat_invariants(Q: QuotientSurface) -> FlatInvariants:
    Q.check()
    V, E, T = Q.counts
    chi = V - E + T
    if (2 - chi) % 2:
        raise ValueError("odd Euler characteristic for an orientable surface")
    angles = tuple(Fraction(k, 3) for k in Q.corner_degrees())
    residue = chi + sum((a / 2 - 1 for a in angles), Fraction(0))
    return FlatInvariants(chi, (2 - chi) // 2, angles, residue)


# -- maps between quotients ----------------------------------------------------

@dataclass(frozen=True)
class CellMap:
    """A cellular map given on vertex, edge and triangle indices."""

    vertices: tuple[int, ...]
    edges: tuple[int, ...]
    triangles: tuple[int, ...]

    def compose(self, after: "CellMap") -> "CellMap":
        """``after`` applied after ``self``."""
        return CellMap(
            tuple(after.vertices[i] for i in self.vertices),
            tuple(after.edges[i] for i in self.edges),
            tuple(after.triangles[i] for i in self.triangles),
        )


def _map_reps(source: QuotientSurface, target: QuotientSurface, vf, ef, tf) -> CellMap:
    vk, ek, tk = target._keys()
    n = target.m
    return CellMap(
        tuple(vk[vertex_key(vf(g), n)] for g in source.vertex_reps),
        tuple(ek[edge_key(ef(g), n)] for g in source.edge_reps),
        tuple(tk[triangle_key(tf(g), n)] for g in source.triangle_reps),
    )


def project_quotient(m_fine: int, m_coarse: int, fine: QuotientSurface | None = None,
                     coarse: QuotientSurface | None = None) -> CellMap:
    """Reduction mod ``m_coarse`` as a cellular map F/Gamma(m_fine) -> F/Gamma(m_coarse)."""
    if m_coarse < 2 or m_fine < 2:
        raise ValueError("levels must be at least 2")
    if m_fine % m_coarse:
        raise ValueError(f"{m_coarse} does not divide {m_fine}")
    fine = fine or build_quotient(m_fine)
    coarse = coarse or build_quotient(m_coarse)
    red = lambda g: tuple(v % m_coarse for v in g)
    f = _map_reps(fine, coarse, red, red, red)
    for t, image in enumerate(f.triangles):
        got = tuple(f.vertices[v] for v in fine.triangles[t])
        if _rotate_min(got) != coarse.triangles[image]:
            raise AssertionError("projection does not respect triangle orientation")
    return f


def left_action(Q: QuotientSurface, h: Matrix) -> CellMap:
    m = Q.m
    act = lambda g: _mul(h, g, m)
    return _map_reps(Q, Q, act, act, act)


def reflection(Q: QuotientSurface) -> CellMap:
    """The map induced by (p, q) -> (p, -q); it reverses orientation."""
    m = Q.m
    conj = lambda g: (g[0], -g[1] % m, -g[2] % m, g[3])
    # the triangle (g.inf, g.0, g.1) goes to the one listed as (g'.0, g'.inf, g'.1)
    swap = lambda g: (g[1], g[0], -g[3] % m, -g[2] % m)
    return _map_reps(Q, Q, conj, conj, swap)


# -- automorphisms -------------------------------------------------------------

def _cell_graph(Q: QuotientSurface):
    V, E, T = Q.counts
    colors = [0] * V + [1] * E + [2] * T
    adj: list[dict[int, int]] = [dict() for _ in range(V + E + T)]

    def link(x, y):
        adj[x][y] = adj[x].get(y, 0) + 1
        adj[y][x] = adj[y].get(x, 0) + 1

    for e, (i, j) in enumerate(Q.edges):
        link(i, V + e)
        if i != j:
            link(j, V + e)
    for t, es in enumerate(Q.triangle_edges):
        for e in es:
            link(V + e, V + E + t)
    return colors, adj


def _split(Q: QuotientSurface, perm: dict[int, int]) -> CellMap:
    V, E, T = Q.counts
    return CellMap(
        tuple(perm[i] for i in range(V)),
        tuple(perm[V + i] - V for i in range(E)),
        tuple(perm[V + E + i] - V - E for i in range(T)),
    )


def is_cell_automorphism(Q: QuotientSurface, f: CellMap) -> bool:
    V, E, T = Q.counts
    if sorted(f.vertices) != list(range(V)) or sorted(f.edges) != list(range(E)) or sorted(f.triangles) != list(range(T)):
        return False
    for e, (i, j) in enumerate(Q.edges):
        a, b = f.vertices[i], f.vertices[j]
        if Q.edges[f.edges[e]] != (min(a, b), max(a, b)):
            return False
    for t, es in enumerate(Q.triangle_edges):
        if sorted(f.edges[e] for e in es) != sorted(Q.triangle_edges[f.triangles[t]]):
            return False
    return True


def preserves_orientation(Q: QuotientSurface, f: CellMap) -> bool:
    """True if f carries each oriented triangle to the positively oriented image.

    Orientation is read off the edge cycle so that triangles sharing a vertex
    set (level 2) are still told apart.
    """
    for t, es in enumerate(Q.triangle_edges):
        image = tuple(f.edges[e] for e in es)
        target = Q.triangle_edges[f.triangles[t]]
        if _rotate_min(image) != _rotate_min(target):
            return False
    return True


@dataclass(frozen=True)
class AutomorphismData:
    generators: list[CellMap]
    order: int
    orientation_preserving_order: int


def quotient_automorphisms(Q: QuotientSurface, bound: int = DEFAULT_AUTOMORPHISM_BOUND) -> AutomorphismData:
    """Automorphisms of the 2-complex, from its vertex-edge-triangle incidence graph."""
    size = sum(Q.counts)
    if size > bound:
        raise ValueError(f"instance too large: {size} cells exceed bound {bound}")
    colors, adj = _cell_graph(Q)
    gens, order = _refine.automorphism_group(colors, adj)
    maps = [_split(Q, g) for g in gens]
    # orientation is a homomorphism to {+1,-1}; its kernel has index 1 or 2
    reversing = any(not preserves_orientation(Q, f) for f in maps)
    return AutomorphismData(maps, order, order // 2 if reversing else order)


def in_group(Q: QuotientSurface, gens: list[CellMap], f: CellMap, order: int) -> bool:
    """Membership of f in the group generated by ``gens`` (closure; small groups only)."""
    ident = CellMap(*(tuple(range(n)) for n in Q.counts))
    seen = {ident}
    frontier = [ident]
    while frontier and len(seen) <= order:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x.compose(g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return f in seen


# -- cross-check: breadth-first search in the tessellation ---------------------

def bfs_quotient(m: int, limit: int = 100000):
    """Triangles of F/Gamma(m) found by walking the integral tessellation.

    Starts at the triangle (inf, 0, 1) of SL2(Z) and crosses edges via
    g S, g R S, g R^2 S, identifying triangles by their reduced oriented
    vertex triples.  Returns ``(vertices, triangles)`` with triangles as
    cyclic label triples.
    """
    if m < 2:
        raise ValueError("level must be at least 2")

    def imul(x, y):
        a, b, c, d = x
        e, f, g, h = y
        return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def label(g):
        a, b, c, d = g
        return _rotate_min((_norm_pair(a, c, m), _norm_pair(b, d, m), _norm_pair(a + b, c + d, m)))

    start = (1, 0, 0, 1)
    found = {label(start)}
    queue = [start]
    r2 = imul(R_GEN, R_GEN)
    steps = [S_GEN, imul(R_GEN, S_GEN), imul(r2, S_GEN)]
    while queue:
        if len(found) > limit:
            raise RuntimeError("tessellation search did not close up")
        nxt = []
        for g in queue:
            for s in steps:
                h = imul(g, s)
                lab = label(h)
                if lab not in found:
                    found.add(lab)
                    nxt.append(h)
        queue = nxt
    vertices = sorted({v for t in found for v in t})
    return vertices, sorted(found)


def bfs_matches_quotient(m: int) -> bool:
    """Check that the walked tessellation agrees with the coset construction."""
    Q = build_quotient(m)
    vertices, triangles = bfs_quotient(m)
    if vertices != Q.vertices:
        return False
    oriented = sorted(_rotate_min(tuple(Q.vertices[v] for v in t)) for t in Q.triangles)
    return oriented == triangles


# -- tables --------------------------------------------------------------------

def invariant_row(m: int, with_automorphisms: bool = True) -> dict:
    Q = build_quotient(m)
    inv = flat_invariants(Q)
    V, E, T = Q.counts
    aut = quotient_automorphisms(Q).order if with_automorphisms else None
    return {"m": m, "V": V, "E": E, "T": T, "chi": inv.euler, "genus": inv.genus, "autOrder": aut}


def invariant_csv(levels, with_automorphisms: bool = True) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=["m", "V", "E", "T", "chi", "genus", "autOrder"], lineterminator="\n")
    writer.writeheader()
    for m in levels:
        row = invariant_row(m, with_automorphisms)
        if row["autOrder"] is None:
            row["autOrder"] = ""
        writer.writerow(row)
    return buf.getvalue()
