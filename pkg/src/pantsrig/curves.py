"""Simple closed multicurves on punctured spheres in normal coordinates.

A curve is stored by how many times it crosses each edge of an ideal
triangulation.  Flips change triangulations, tracing splits a vector into
its components, and half twists are computed by flipping a curve until it
bounds a neighborhood of an edge with a degree-two endpoint; there the half
twist is a short run of flips around the other endpoint followed by a
relabeling of edges.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Sequence

from .farey import Slope

Coords = tuple[int, ...]


class InadmissibleCoords(ValueError):
    pass


class SimplificationStuck(RuntimeError):
    pass


@dataclass(frozen=True)
class Triangulation:
    """An ideal triangulation of a punctured sphere.

    ``triangles[t] = (sides, corners)`` with ``sides[i]`` running from
    ``corners[i]`` to ``corners[i+1]`` counterclockwise.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    triangles: tuple[tuple[tuple[int, int, int], tuple[int, int, int]], ...]
    name: str = ""

    def sides_of(self, e: int) -> list[tuple[int, int]]:
        return [(t, i) for t, (sides, _) in enumerate(self.triangles) for i in range(3) if sides[i] == e]

    def check(self) -> None:
        E, T = len(self.edges), len(self.triangles)
        if self.n - E + T != 2:
            raise ValueError("Euler characteristic is not 2")
        seen: dict[int, list[tuple[int, int]]] = {e: [] for e in range(E)}
        for sides, corners in self.triangles:
            if len(set(sides)) != 3:
                raise ValueError(f"self-folded triangle {sides}")
            for i in range(3):
                u, v = corners[i], corners[(i + 1) % 3]
                if tuple(sorted((u, v))) != self.edges[sides[i]]:
                    raise ValueError(f"side {sides[i]} does not match its endpoints")
                seen[sides[i]].append((u, v))
        for e, uses in seen.items():
            if len(uses) != 2 or uses[0] != uses[1][::-1]:
                raise ValueError(f"edge {e} is not glued to an opposite side")

    def link(self, p: int) -> Coords:
        return tuple((u == p) + (v == p) for u, v in self.edges)

    def standard_curve(self, e: int) -> Coords:
        """The boundary of a neighborhood of edge ``e`` (its endpoints must differ)."""
        u, v = self.edges[e]
        if u == v:
            raise ValueError("edge is a loop")
        out = [a + b for a, b in zip(self.link(u), self.link(v))]
        out[e] = 0
        return tuple(out)

    def cyclic_faces(self) -> frozenset:
        return frozenset(_rot(sides) for sides, _ in self.triangles)


def _rot(t: tuple) -> tuple:
    k = t.index(min(t))
    return t[k:] + t[:k]


@lru_cache(maxsize=None)
def base_triangulation(n: int) -> Triangulation:
    """The doubled fan: the n-gon on punctures 0..n-1, triangulated from 0 on both faces.

    Edge ``i < n`` joins i and i+1 (mod n); then come the top diagonals
    (0, 2..n-2) and the bottom diagonals in the same order.
    """
    if n < 4:
        raise ValueError("need at least four punctures")
    edges = [tuple(sorted((i, (i + 1) % n))) for i in range(n)]
    top = {}
    bottom = {}
    for i in range(2, n - 1):
        top[i] = len(edges)
        edges.append((0, i))
    for i in range(2, n - 1):
        bottom[i] = len(edges)
        edges.append((0, i))

    def spoke(table, i):
        if i == 1:
            return 0
        if i == n - 1:
            return n - 1
        return table[i]

    triangles = []
    for i in range(1, n - 1):
        triangles.append(((spoke(top, i), i, spoke(top, i + 1)), (0, i, i + 1)))
    for i in range(1, n - 1):
        triangles.append(((spoke(bottom, i + 1), i, spoke(bottom, i)), (0, i + 1, i)))
    T = Triangulation(n, tuple(edges), tuple(triangles), f"base-s0-{n}")
    T.check()
    return T


# -- coordinates -----------------------------------------------------------

def is_admissible(T: Triangulation, coords: Sequence[int]) -> bool:
    if len(coords) != len(T.edges) or any(c < 0 for c in coords):
        return False
    for sides, _ in T.triangles:
        a, b, c = (coords[s] for s in sides)
        if (a + b + c) % 2 or a > b + c or b > a + c or c > a + b:
            return False
    return True


def _require(T: Triangulation, coords: Sequence[int]) -> None:
    if not is_admissible(T, coords):
        raise InadmissibleCoords(f"inadmissible coordinates {tuple(coords)} on {T.name or 'triangulation'}")


@dataclass(frozen=True)
class FlipOp:
    """New weight of ``e`` is max(x[a] + x[c], x[b] + x[d]) - x[e]."""

    e: int
    a: int
    b: int
    c: int
    d: int

    def apply(self, x: list[int]) -> None:
        x[self.e] = max(x[self.a] + x[self.c], x[self.b] + x[self.d]) - x[self.e]


def flip_op(T: Triangulation, e: int) -> tuple[Triangulation, FlipOp]:
    """Flip edge ``e``; raises ValueError when the quadrilateral is degenerate."""
    if not 0 <= e < len(T.edges):
        raise ValueError(f"invalid edge id {e}")
    (t1, i1), (t2, i2) = T.sides_of(e)
    s1, c1 = T.triangles[t1]
    s2, c2 = T.triangles[t2]
    # rotate so e is side 0: (e, a, b) on corners (P, Q, R) and (e, c, d) on (Q, P, X)
    s1, c1 = s1[i1:] + s1[:i1], c1[i1:] + c1[:i1]
    s2, c2 = s2[i2:] + s2[:i2], c2[i2:] + c2[:i2]
    _, a, b = s1
    P, Q, R = c1
    _, c, d = s2
    X = c2[2]
    if t1 == t2 or len({a, b, c, d}) != 4:
        raise ValueError(f"edge {e} is not flippable here")
    tris = list(T.triangles)
    tris[t1] = ((e, b, c), (X, R, P))
    tris[t2] = ((e, d, a), (R, X, Q))
    edges = list(T.edges)
    edges[e] = tuple(sorted((R, X)))
    return Triangulation(T.n, tuple(edges), tuple(tris), ""), FlipOp(e, a, b, c, d)


def is_flippable(T: Triangulation, e: int) -> bool:
    (t1, _), (t2, _) = T.sides_of(e)
    if t1 == t2:
        return False
    sides = set(T.triangles[t1][0]) | set(T.triangles[t2][0])
    return len(sides) == 5


def flip(T: Triangulation, coords: Sequence[int], e: int) -> tuple[Triangulation, Coords]:
    _require(T, coords)
    T2, op = flip_op(T, e)
    x = list(coords)
    op.apply(x)
    return T2, tuple(x)


# -- tracing -----------------------------------------------------------------

def trace_components(T: Triangulation, coords: Sequence[int]) -> list[tuple[Coords, bool]]:
    """Split a normal multicurve into components as ``(coords, peripheral)`` pairs, sorted."""
    _require(T, coords)
    w = list(coords)
    offset = [0] * len(w)
    total = 0
    for e, x in enumerate(w):
        offset[e] = total
        total += x
    parent = list(range(total))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    # orientation of each edge: the first side it appears on
    first: dict[int, tuple[int, int]] = {}
    for t, (sides, _) in enumerate(T.triangles):
        for i, e in enumerate(sides):
            first.setdefault(e, (t, i))

    def point(t, i, k):
        e = T.triangles[t][0][i]
        return offset[e] + (k if first[e] == (t, i) else w[e] - 1 - k)

    for t, (sides, _) in enumerate(T.triangles):
        ws = [w[s] for s in sides]
        for i in range(3):
            prev = (i - 1) % 3
            count = (ws[prev] + ws[i] - ws[(i + 1) % 3]) // 2
            for m in range(count):
                a = find(point(t, i, m))
                b = find(point(t, prev, ws[prev] - 1 - m))
                if a != b:
                    parent[a] = b

    groups: dict[int, list[int]] = {}
    for e, x in enumerate(w):
        for k in range(x):
            r = find(offset[e] + k)
            groups.setdefault(r, [0] * len(w))[e] += 1
    links = {T.link(p) for p in range(T.n)}
    out = [(tuple(v), tuple(v) in links) for v in groups.values()]
    return sorted(out)


def is_curve(T: Triangulation, coords: Sequence[int]) -> bool:
    if not is_admissible(T, coords):
        return False
    comps = trace_components(T, coords)
    return len(comps) == 1 and not comps[0][1]


class Disjointness(enum.Enum):
    DISJOINT = "disjoint"
    CROSSING = "crossing"
    SAME_CURVE = "same curve"

    def __bool__(self) -> bool:
        return self is Disjointness.DISJOINT


def disjoint(T: Triangulation, gamma: Sequence[int], delta: Sequence[int]) -> Disjointness:
    gamma, delta = tuple(gamma), tuple(delta)
    for c in (gamma, delta):
        if not is_curve(T, c):
            raise InadmissibleCoords(f"{c} is not a curve")
    if gamma == delta:
        return Disjointness.SAME_CURVE
    total = tuple(a + b for a, b in zip(gamma, delta))
    comps = sorted(c for c, _ in trace_components(T, total))
    return Disjointness.DISJOINT if comps == sorted([gamma, delta]) else Disjointness.CROSSING


def add(*vectors: Sequence[int]) -> Coords:
    return tuple(map(sum, zip(*vectors)))


# -- standard position and half twists ---------------------------------------

@dataclass(frozen=True)
class StandardPosition:
    """A curve bounding a neighborhood of edge ``eps`` from p to q, where p has degree 2."""

    eps: int
    p: int
    q: int


def degrees(T: Triangulation) -> list[int]:
    deg = [0] * T.n
    for u, v in T.edges:
        deg[u] += 1
        deg[v] += 1
    return deg


def find_standard_position(T: Triangulation, coords: Sequence[int]) -> StandardPosition | None:
    coords = tuple(coords)
    deg = degrees(T)
    for e, (u, v) in enumerate(T.edges):
        if u == v or coords[e] != 0 or 2 not in (deg[u], deg[v]):
            continue
        if T.standard_curve(e) == coords:
            p, q = (u, v) if deg[u] == 2 else (v, u)
            return StandardPosition(e, p, q)
    return None


def _side_after(T: Triangulation, pos: StandardPosition) -> int:
    """The side following eps in the triangle where eps runs from p to q."""
    for sides, corners in T.triangles:
        for i in range(3):
            if sides[i] == pos.eps and corners[i] == pos.p:
                return sides[(i + 1) % 3]
    raise AssertionError("edge not found in its triangles")


def _local_half_twist(T: Triangulation, pos: StandardPosition, coords: Coords):
    """Flip the edges at q one by one, counterclockwise from eps, then relabel.

    After the flips q has degree 2 and p has taken over its fan, which is the
    image of T under a half twist swapping p and q.  Returns the flips and the
    relabeling ``sigma`` (edge e of the flipped triangulation goes to
    ``sigma[e]`` of T); the relabeling is verified to be an oriented
    isomorphism that fixes the curve.
    """
    ops: list[FlipOp] = []
    U = T
    x = list(coords)
    while degrees(U)[pos.q] > 2:
        e = _side_after(U, pos)
        U, op = flip_op(U, e)
        op.apply(x)
        ops.append(op)
    moved = sorted({op.e for op in ops} | {e for e, (u, v) in enumerate(T.edges) if pos.p in (u, v) or pos.q in (u, v)})
    target = T.cyclic_faces()
    found = []
    identity = list(range(len(T.edges)))
    for perm in permutations(moved):
        sigma = list(identity)
        for a, b in zip(moved, perm):
            sigma[a] = b
        if sigma == identity:
            continue
        faces = frozenset(_rot(tuple(sigma[e] for e in sides)) for sides, _ in U.triangles)
        if faces != target:
            continue
        image = [0] * len(x)
        for e, v in enumerate(x):
            image[sigma[e]] = v
        if tuple(image) == tuple(coords):
            found.append(tuple(sigma))
    if len(found) != 1:
        raise AssertionError(f"expected one relabeling, found {len(found)}")
    return tuple(ops), found[0]


@dataclass(frozen=True)
class HalfTwist:
    """A compiled half twist: flips to standard position, the local move, flips back."""

    flips: tuple[FlipOp, ...]
    move: tuple[FlipOp, ...]
    sigma: tuple[int, ...]

    def _forward(self, x: list[int]) -> list[int]:
        for op in self.move:
            op.apply(x)
        y = [0] * len(x)
        for e, v in enumerate(x):
            y[self.sigma[e]] = v
        return y

    def _backward(self, x: list[int]) -> list[int]:
        y = [x[self.sigma[e]] for e in range(len(x))]
        for op in reversed(self.move):
            op.apply(y)
        return y

    def apply(self, coords: Sequence[int], power: int = 1) -> Coords:
        x = list(coords)
        for op in self.flips:
            op.apply(x)
        # sign fixed so that on S_{0,4} the twist about slope 1/0 is p/q -> (p + 2q)/q
        step = self._forward if power > 0 else self._backward
        for _ in range(abs(power)):
            x = step(x)
        for op in reversed(self.flips):
            op.apply(x)
        return tuple(x)


def _weight_after(T: Triangulation, x: Sequence[int], e: int) -> int:
    _, op = flip_op(T, e)
    return max(x[op.a] + x[op.c], x[op.b] + x[op.d]) - x[e]


def simplify_curve(T: Triangulation, coords: Sequence[int], search_depth: int = 3):
    """Flip sequence bringing a curve into standard position.

    Greedy: flip the edge with the largest strict weight decrease (lowest
    id on ties).  When no flip helps, an exhaustive search over up to
    ``search_depth`` flips looks for a decrease or a standard position; if
    none exists the curve is reported stuck.  Returns ``(edge ids, final
    triangulation, final coords, position)``.
    """
    if not is_curve(T, coords):
        raise InadmissibleCoords(f"{tuple(coords)} is not a curve")
    x = list(coords)
    seq: list[int] = []
    while True:
        pos = find_standard_position(T, x)
        if pos is not None:
            return seq, T, tuple(x), pos
        best = None
        for e in range(len(T.edges)):
            if x[e] == 0 or not is_flippable(T, e):
                continue
            delta = _weight_after(T, x, e) - x[e]
            if delta < 0 and (best is None or delta < best[0]):
                best = (delta, e)
        if best is not None:
            T, c = flip(T, x, best[1])
            x = list(c)
            seq.append(best[1])
            continue
        path = _search_descent(T, x, search_depth)
        if path is None:
            raise SimplificationStuck(f"simplification stuck at weight {sum(x)} with coords {tuple(x)}")
        for e in path:
            T, c = flip(T, x, e)
            x = list(c)
            seq.append(e)


def _search_descent(T: Triangulation, x: list[int], depth: int) -> list[int] | None:
    start = sum(x)
    frontier = [(T, tuple(x), [])]
    for _ in range(depth):
        nxt = []
        for U, y, path in frontier:
            for e in range(len(U.edges)):
                if not is_flippable(U, e):
                    continue
                V, z = flip(U, y, e)
                if sum(z) < start or find_standard_position(V, z) is not None:
                    return path + [e]
                nxt.append((V, z, path + [e]))
        frontier = nxt
    return None


def compile_half_twist(T: Triangulation, gamma: Sequence[int]) -> HalfTwist:
    seq, U, x, pos = simplify_curve(T, gamma)
    ops = []
    V = T
    for e in seq:
        V, op = flip_op(V, e)
        ops.append(op)
    move, sigma = _local_half_twist(U, pos, x)
    return HalfTwist(tuple(ops), move, sigma)


_HALF_TWISTS: dict = {}


def half_twist_map(T: Triangulation, gamma: Sequence[int]) -> HalfTwist:
    key = (T, tuple(gamma))
    if key not in _HALF_TWISTS:
        _HALF_TWISTS[key] = compile_half_twist(T, gamma)
    return _HALF_TWISTS[key]


def half_twist(T: Triangulation, gamma: Sequence[int], target: Sequence[int], power: int = 1) -> Coords:
    """The half twist about gamma (swapping the two punctures it encloses), to a power."""
    _require(T, target)
    return half_twist_map(T, gamma).apply(target, power)


def dehn_twist(T: Triangulation, gamma: Sequence[int], target: Sequence[int], power: int = 1) -> Coords:
    """tau_gamma^power(target); the twist is the square of the half twist."""
    return half_twist(T, gamma, target, 2 * power)


# -- four-punctured sphere slopes ----------------------------------------------

def s04_coords(slope: Slope) -> Coords:
    """Normal coordinates on the base triangulation of S_{0,4} of the curve of slope p/q.

    Slope 0/1 encloses punctures 0 and 1, slope 1/0 encloses 1 and 2.
    """
    p, q = abs(slope.p), abs(slope.q)
    s = slope.p * slope.q
    top = abs(p - q) if s >= 0 else p + q
    bottom = p + q if s >= 0 else abs(p - q)
    return (p, q, p, q, top, bottom)


def s04_slope(coords: Sequence[int]) -> Slope:
    """Inverse of :func:`s04_coords` on curves."""
    p, q, p2, q2, top, bottom = coords
    if p != p2 or q != q2:
        raise ValueError(f"{tuple(coords)} is not a curve coordinate vector on S_0,4")
    if p == 0 or q == 0:
        candidate = Slope.of(p, q)
    else:
        candidate = Slope.of(p, q) if top < bottom or (top == bottom) else Slope.of(-p, q)
    if s04_coords(candidate) != tuple(coords):
        raise ValueError(f"{tuple(coords)} is not a curve coordinate vector on S_0,4")
    return candidate


def slope_twist(about: Slope, target: Slope, power: int = 1, surface: tuple[int, int] = (0, 4)) -> Slope:
    """Slope-model twist: conjugate of z -> z + k about infinity, k = 1 on S_{1,1}, 2 on S_{0,4}."""
    step = {(1, 1): 1, (0, 4): 2}.get(tuple(surface))
    if step is None:
        raise ValueError(f"no slope model for {surface}")
    a, b, c, d = slope_frame(about)
    # g^-1 = (d, -b, -c, a)
    p, q = d * target.p - b * target.q, -c * target.p + a * target.q
    p += step * power * q
    return Slope.of(a * p + b * q, c * p + d * q)


def slope_frame(s: Slope) -> tuple[int, int, int, int]:
    """A matrix (a, b; c, d) in SL2(Z) with first column s, second column its nearest neighbor.

    d is reduced into (-q/2, q/2] so the frame is canonical.
    """
    p, q = s.p, s.q
    if q == 0:
        return (1, 0, 0, 1)
    d = pow(p, -1, q) if q > 1 else 0
    if 2 * d > q:
        d -= q
    b = (p * d - 1) // q
    return (p, b, q, d)


def curve_to_json(T: Triangulation, coords: Sequence[int]) -> str:
    return json.dumps({"triangulation": T.name, "coords": list(coords)}, separators=(",", ":"))


def curve_from_json(text: str) -> tuple[Triangulation, Coords]:
    data = json.loads(text)
    name = data["triangulation"]
    if not name.startswith("base-s0-"):
        raise ValueError(f"unknown triangulation {name}")
    T = base_triangulation(int(name.rsplit("-", 1)[1]))
    coords = tuple(data["coords"])
    _require(T, coords)
    return T, coords


def random_admissible(T: Triangulation, rng, max_weight: int = 6) -> Coords:
    while True:
        x = tuple(rng.randint(0, max_weight) for _ in T.edges)
        if is_admissible(T, x):
            return x


__all__ = [
    "Coords", "Disjointness", "HalfTwist", "InadmissibleCoords", "SimplificationStuck", "StandardPosition",
    "Triangulation", "add", "base_triangulation", "curve_from_json", "curve_to_json", "dehn_twist",
    "degrees", "disjoint", "find_standard_position", "flip", "half_twist", "is_admissible", "is_curve", "is_flippable",
    "random_admissible", "s04_coords", "s04_slope", "simplify_curve", "slope_frame", "slope_twist",
    "trace_components",
]
