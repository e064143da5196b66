"""Balls in pants graphs and the Farey subgraphs inside them.

For modular dimension one the pants graph is the Farey graph and curves are
slopes.  On S_{0,5} a pants decomposition is a pair of disjoint curves in
normal coordinates.  Each vertex remembers a marking: a word in half twists
about four fixed curves carrying the base decomposition onto it.  Neighbors
are generated, never tested, by pushing a window of half twists of a seed
curve through that word.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

from . import curves as cv
from .farey import Slope, farey_adjacent
from .simplicial import Graph
from .surfaces import SurfaceType, as_surface

MAX_RADIUS = 4
MAX_WIDTH = 8

SLOPE_MODELS = {SurfaceType(1, 1), SurfaceType(0, 4)}
S05 = SurfaceType(0, 5)

Word = tuple[tuple[str, int], ...]


class UnsupportedSurface(ValueError):
    pass


class InsufficientBall(ValueError):
    pass


@dataclass(frozen=True, order=True)
class PantsVertex:
    """A pants decomposition; ``curves`` are slopes (d = 1) or coordinate tuples, sorted."""

    curves: tuple
    marking: Word = field(default=(), compare=False, hash=False, repr=False)

    def key(self) -> str:
        return json.dumps(_serial(self.curves), separators=(",", ":"))


def _serial(curves) -> list:
    return [[c.p, c.q] if isinstance(c, Slope) else list(c) for c in curves]


# -- S_{0,5} marking data ------------------------------------------------------

@dataclass(frozen=True)
class _S05Frame:
    T: cv.Triangulation
    curves: dict  # letter -> coords
    inner: str  # letter of the base curve around {1,2}
    outer: str  # letter of the base curve around {1,2,3}
    seeds: dict  # base letter -> seed letter
    swaps: dict  # base letter -> word exchanging it with its seed


@lru_cache(maxsize=None)
def _s05() -> _S05Frame:
    T = cv.base_triangulation(5)
    # edge ids of the pentagon: i joins i and i+1, edge 4 joins 4 and 0
    curves = {
        "g": T.standard_curve(1),  # around {1,2}
        "b": T.standard_curve(4),  # around {4,0}, i.e. {1,2,3}
        "d": T.standard_curve(2),  # around {2,3}
        "e": T.standard_curve(3),  # around {3,4}
    }
    swaps = {
        "g": (("g", 1), ("d", 1), ("g", 1)),
        "b": (("b", 1), ("e", 1), ("b", 1)),
    }
    frame = _S05Frame(T, curves, "g", "b", {"g": "d", "b": "e"}, swaps)
    for base, seed in frame.seeds.items():
        other = frame.outer if base == frame.inner else frame.inner
        w = swaps[base]
        if (apply_word(frame, w, curves[base]) != curves[seed]
                or apply_word(frame, w, curves[seed]) != curves[base]
                or apply_word(frame, w, curves[other]) != curves[other]):
            raise AssertionError(f"swap word for {base} does not exchange it with its seed")
    return frame


def apply_word(frame: _S05Frame, word: Word, coords) -> cv.Coords:
    """Apply a product of half twists; the rightmost letter acts first."""
    x = tuple(coords)
    for letter, power in reversed(word):
        x = cv.half_twist_map(frame.T, frame.curves[letter]).apply(x, power)
    return x


def _extend(word: Word, letters: Word) -> Word:
    out = list(word)
    for letter, power in letters:
        if power == 0:
            continue
        if out and out[-1][0] == letter:
            merged = out[-1][1] + power
            out.pop()
            if merged:
                out.append((letter, merged))
        else:
            out.append((letter, power))
    return tuple(out)


# -- operations ---------------------------------------------------------------

def _check_supported(s) -> SurfaceType:
    s = as_surface(s)
    if s not in SLOPE_MODELS and s != S05:
        raise UnsupportedSurface(f"no pants model for {s}; supported: (1,1), (0,4), (0,5)")
    return s


def base_decomposition(s) -> PantsVertex:
    s = _check_supported(s)
    if s in SLOPE_MODELS:
        return PantsVertex((Slope(0, 1),))
    f = _s05()
    inner, outer = f.curves[f.inner], f.curves[f.outer]
    if not cv.disjoint(f.T, inner, outer):
        raise AssertionError("base curves are not disjoint")
    return PantsVertex(tuple(sorted((inner, outer))), ())


def _apply_slope(g, j: int) -> Slope:
    a, b, c, d = g
    return Slope.of(a * j + b, c * j + d)


def farey_neighbors(s, v: PantsVertex, gamma, width: int) -> list[PantsVertex]:
    """Replace ``gamma`` by the half-twist window of a seed: 2*width+1 vertices.

    In the slope models the neighbors of p/q are g(j) for |j| <= width where
    g is the frame of p/q; on S_{0,5} they are f(H^j(seed)) for the marking f.
    """
    s = _check_supported(s)
    if width < 1:
        raise ValueError("width must be at least 1")
    if gamma not in v.curves:
        raise ValueError("dropped curve is not in the vertex")
    if s in SLOPE_MODELS:
        g = cv.slope_frame(gamma)
        seen: dict = {}
        for j in range(-width, width + 1):
            x = _apply_slope(g, j)
            seen.setdefault(x, PantsVertex((x,)))
        return list(seen.values())
    f = _s05()
    images = {letter: apply_word(f, v.marking, f.curves[letter]) for letter in (f.inner, f.outer)}
    if images[f.inner] == gamma:
        base, kept = f.inner, images[f.outer]
    elif images[f.outer] == gamma:
        base, kept = f.outer, images[f.inner]
    else:
        raise ValueError("vertex marking does not match its curves")
    seed = f.curves[f.seeds[base]]
    out: dict = {}
    for j in range(-width, width + 1):
        word = _extend(v.marking, ((base, j),))
        new = apply_word(f, word, seed)
        marking = _extend(word, f.swaps[base])
        out.setdefault(new, PantsVertex(tuple(sorted((new, kept))), marking))
    return list(out.values())


@dataclass
class PantsBall:
    surface: SurfaceType
    radius: int
    width: int
    vertices: list[PantsVertex]
    distance: list[int]
    edges: dict[tuple[int, int], tuple]  # (i, j) with i < j -> family label

    @property
    def frontier(self) -> list[bool]:
        return [d >= self.radius for d in self.distance]

    def index(self) -> dict[PantsVertex, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def neighbors(self) -> list[set[int]]:
        nb: list[set[int]] = [set() for _ in self.vertices]
        for i, j in self.edges:
            nb[i].add(j)
            nb[j].add(i)
        return nb

    def interior(self) -> list[int]:
        return [i for i, f in enumerate(self.frontier) if not f]

    def families(self) -> dict[tuple, set[int]]:
        out: dict[tuple, set[int]] = {}
        for (i, j), label in self.edges.items():
            out.setdefault(label, set()).update((i, j))
        return out

    def graph(self) -> Graph:
        return Graph(range(len(self.vertices)), self.edges)

    def to_dict(self) -> dict:
        frontier = self.frontier
        return {
            "surface": [self.surface.genus, self.surface.punctures],
            "radius": self.radius,
            "width": self.width,
            "vertices": [{"curves": _serial(v.curves), "frontier": frontier[i]} for i, v in enumerate(self.vertices)],
            "edges": [{"u": i, "v": j, "family": _serial(label)} for (i, j), label in sorted(self.edges.items())],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def to_dot(self) -> str:
        labels = sorted(set(self.edges.values()), key=lambda x: json.dumps(_serial(x)))
        color = {lab: k for k, lab in enumerate(labels)}
        lines = [f"graph pants_{self.surface.genus}_{self.surface.punctures} {{"]
        for i, f in enumerate(self.frontier):
            style = ' [style=dashed]' if f else ''
            lines.append(f"  {i}{style};")
        for (i, j), lab in sorted(self.edges.items()):
            lines.append(f'  {i} -- {j} [colorscheme=set312, color={color[lab] % 12 + 1}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def bfs_ball(s, radius: int, width: int) -> PantsBall:
    """Breadth-first ball around the base decomposition.

    Vertices at distance ``radius`` are frontier: their neighbors are still
    generated, but only to record edges to vertices already in the ball.
    """
    s = _check_supported(s)
    if not 0 <= radius <= MAX_RADIUS or not 1 <= width <= MAX_WIDTH:
        raise ValueError(f"bounds exceeded: radius <= {MAX_RADIUS}, 1 <= width <= {MAX_WIDTH}")
    start = base_decomposition(s)
    index = {start: 0}
    vertices = [start]
    distance = [0]
    edges: dict[tuple[int, int], tuple] = {}
    head = 0
    while head < len(vertices):
        v = vertices[head]
        i = head
        head += 1
        for gamma in v.curves:
            label = tuple(c for c in v.curves if c != gamma)
            for w in farey_neighbors(s, v, gamma, width):
                if w == v:
                    continue
                j = index.get(w)
                if j is None:
                    if distance[i] >= radius:
                        continue
                    j = len(vertices)
                    index[w] = j
                    vertices.append(w)
                    distance.append(distance[i] + 1)
                key = (min(i, j), max(i, j))
                if key in edges and edges[key] != label:
                    raise AssertionError("edge generated with two different family labels")
                edges[key] = label
    # canonical order: lexicographic on serialized curves
    order = sorted(range(len(vertices)), key=lambda k: vertices[k].key())
    new = {old: k for k, old in enumerate(order)}
    return PantsBall(
        s, radius, width,
        [vertices[k] for k in order],
        [distance[k] for k in order],
        {tuple(sorted((new[a], new[b]))): lab for (a, b), lab in edges.items()},
    )


def recover_farey_subgraph(ball: PantsBall, edge: tuple[int, int]) -> set[int]:
    """Close an edge under common neighbors inside the non-frontier part."""
    a, b = edge
    if (min(a, b), max(a, b)) not in ball.edges:
        raise ValueError(f"{edge} is not an edge of the ball")
    frontier = ball.frontier
    if frontier[a] or frontier[b]:
        raise InsufficientBall(f"edge {edge} touches the frontier")
    nb = ball.neighbors()
    inside = {i for i, f in enumerate(frontier) if not f}
    found = {a, b}
    changed = True
    while changed:
        changed = False
        for x in sorted(found):
            for y in sorted(nb[x] & found):
                if y <= x:
                    continue
                extra = (nb[x] & nb[y] & inside) - found
                if extra:
                    found |= extra
                    changed = True
    return found


def embed_dual_graph(ball: PantsBall) -> Graph:
    """Complete every family to a clique, keeping all vertices."""
    edges = set()
    for members in ball.families().values():
        ms = sorted(members)
        for x in range(len(ms)):
            for y in range(x + 1, len(ms)):
                edges.add((ms[x], ms[y]))
    return Graph(range(len(ball.vertices)), edges)


# -- cross-checks ---------------------------------------------------------------

def check_ball(ball: PantsBall) -> list[str]:
    """Structural invariants on the non-frontier part; returns a list of failures."""
    problems = []
    d = ball.surface.dim
    frontier = ball.frontier
    for (i, j), label in ball.edges.items():
        shared = set(ball.vertices[i].curves) & set(ball.vertices[j].curves)
        if len(shared) != d - 1 or tuple(sorted(shared)) != label:
            problems.append(f"edge {i}-{j} shares {len(shared)} curves")
    nb = ball.neighbors()
    for (i, j), label in ball.edges.items():
        for k in nb[i] & nb[j]:
            a, b = sorted((i, k)), sorted((j, k))
            if ball.edges[tuple(a)] != label or ball.edges[tuple(b)] != label:
                problems.append(f"triangle {i},{j},{k} is not monochromatic")
    if ball.surface == S05:
        f = _s05()
        for i, v in enumerate(ball.vertices):
            if not frontier[i] and not cv.disjoint(f.T, *v.curves):
                problems.append(f"vertex {i} curves are not disjoint")
    for label, members in ball.families().items():
        for x in members:
            if not set(label) <= set(ball.vertices[x].curves):
                problems.append(f"vertex {x} does not contain its family curves")
    return problems


def slope_ball_matches_farey(ball: PantsBall) -> bool:
    """For d = 1: the ball's edges are exactly the Farey edges among its vertices."""
    if ball.surface not in SLOPE_MODELS:
        raise UnsupportedSurface("slope comparison needs a modular-dimension-one surface")
    slopes = [v.curves[0] for v in ball.vertices]
    expected = {
        (i, j)
        for i in range(len(slopes))
        for j in range(i + 1, len(slopes))
        if farey_adjacent(slopes[i], slopes[j])
    }
    return expected == set(ball.edges)


def s04_curve_ball(radius: int, width: int) -> PantsBall:
    """The (0,4) ball generated in normal coordinates instead of slopes.

    Neighbors of a curve c are half twists about c of the curve whose slope is
    the frame neighbor of c; the result is meant to coincide with the slope
    ball under the slope dictionary.
    """
    T = cv.base_triangulation(4)
    s = SurfaceType(0, 4)
    start = PantsVertex((cv.s04_coords(Slope(0, 1)),))
    index = {start: 0}
    vertices = [start]
    distance = [0]
    edges: dict = {}
    head = 0
    while head < len(vertices):
        v = vertices[head]
        i = head
        head += 1
        (c,) = v.curves
        frame = cv.slope_frame(cv.s04_slope(c))
        seed = cv.s04_coords(_apply_slope(frame, 0))
        for j in range(-width, width + 1):
            w = PantsVertex((cv.half_twist(T, c, seed, j),))
            k = index.get(w)
            if k is None:
                if distance[i] >= radius:
                    continue
                k = len(vertices)
                index[w] = k
                vertices.append(w)
                distance.append(distance[i] + 1)
            edges[(min(i, k), max(i, k))] = ()
    return PantsBall(s, radius, width, vertices, distance, edges)


def twist_ball(ball: PantsBall, letter: str, power: int = 1) -> list[PantsVertex]:
    """Images of the vertices of an S_{0,5} ball under a half twist about a base curve."""
    f = _s05()
    out = []
    for v in ball.vertices:
        cs = tuple(sorted(apply_word(f, ((letter, power),), c) for c in v.curves))
        out.append(PantsVertex(cs))
    return out


def window_sensitivity(s, radius: int, width: int) -> int:
    """Vertices within the radius found with width+2 but missed with width."""
    small = {v for v in bfs_ball(s, radius, width).vertices}
    big = bfs_ball(s, radius, min(width + 2, MAX_WIDTH))
    return sum(1 for v in big.vertices if v not in small)
