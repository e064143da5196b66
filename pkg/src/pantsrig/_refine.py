"""Partition refinement for vertex-colored multigraphs.

Shared by canonical labeling of stable graphs and by automorphism search on
simplicial complexes and Farey quotients.  Graphs are given as a color list
and a list of ``{neighbor: multiplicity}`` dicts; colors must be mutually
comparable.
"""

from __future__ import annotations

from typing import Hashable, Sequence

Adjacency = Sequence[dict[int, int]]
Partition = list[list[int]]


def initial_partition(colors: Sequence[Hashable]) -> Partition:
    cells: dict[Hashable, list[int]] = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    return [cells[c] for c in sorted(cells)]


def refine(adj: Adjacency, partition: Partition) -> Partition:
    """Coarsest equitable refinement of an ordered partition.

    Cells are split by the multiset of (cell index, multiplicity) seen from
    each vertex and the pieces are ordered by that signature, so the result
    depends only on the isomorphism class of (graph, partition).
    """
    cells = [list(c) for c in partition]
    while True:
        where = {}
        for i, cell in enumerate(cells):
            for v in cell:
                where[v] = i
        new_cells: Partition = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            groups: dict[tuple, list[int]] = {}
            for v in cell:
                sig = tuple(sorted((where[u], m) for u, m in adj[v].items()))
                groups.setdefault(sig, []).append(v)
            if len(groups) > 1:
                changed = True
                for sig in sorted(groups):
                    new_cells.append(groups[sig])
            else:
                new_cells.append(cell)
        cells = new_cells
        if not changed:
            return cells


def individualize(partition: Partition, v: int) -> Partition:
    out: Partition = []
    for cell in partition:
        if v in cell and len(cell) > 1:
            out.append([v])
            out.append([u for u in cell if u != v])
        else:
            out.append(list(cell))
    return out


def _first_nontrivial(partition: Partition) -> int:
    for i, cell in enumerate(partition):
        if len(cell) > 1:
            return i
    return -1


def _certificate(colors, adj: Adjacency, order: list[int]) -> tuple:
    pos = {v: i for i, v in enumerate(order)}
    edges = []
    for v in order:
        for u, m in adj[v].items():
            if pos[v] <= pos[u]:
                edges.append((pos[v], pos[u], m))
    return (tuple(colors[v] for v in order), tuple(sorted(edges)))


def canonical_labeling(colors: Sequence[Hashable], adj: Adjacency) -> tuple[tuple, list[int]]:
    """Return ``(certificate, order)`` minimizing the certificate over the search tree.

    Two colored multigraphs are isomorphic iff their certificates are equal.
    """
    best: list = [None, None]

    def search(partition: Partition) -> None:
        partition = refine(adj, partition)
        i = _first_nontrivial(partition)
        if i < 0:
            order = [cell[0] for cell in partition]
            cert = _certificate(colors, adj, order)
            if best[0] is None or cert < best[0]:
                best[0], best[1] = cert, order
            return
        for v in partition[i]:
            search(individualize(partition, v))

    search(initial_partition(colors))
    return best[0], best[1]


def _is_automorphism(colors, adj: Adjacency, perm: dict[int, int]) -> bool:
    for v, w in perm.items():
        if colors[v] != colors[w]:
            return False
        image = {perm[u]: m for u, m in adj[v].items()}
        if image != adj[w]:
            return False
    return True


def find_mapping(colors, adj: Adjacency, left: Partition, right: Partition) -> dict[int, int] | None:
    """Search an automorphism carrying the cells of ``left`` onto those of ``right``."""
    left = refine(adj, left)
    right = refine(adj, right)
    if [len(c) for c in left] != [len(c) for c in right]:
        return None
    for a, b in zip(left, right):
        if colors[a[0]] != colors[b[0]]:
            return None
    i = _first_nontrivial(left)
    if i < 0:
        perm = {a[0]: b[0] for a, b in zip(left, right)}
        return perm if _is_automorphism(colors, adj, perm) else None
    x = left[i][0]
    lx = individualize(left, x)
    for y in right[i]:
        found = find_mapping(colors, adj, lx, individualize(right, y))
        if found is not None:
            return found
    return None


def _orbit(start: int, gens: list[dict[int, int]]) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for g in gens:
            w = g[v]
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def automorphism_group(colors, adj: Adjacency, domain: Sequence[int] | None = None) -> tuple[list[dict[int, int]], int]:
    """Strong generators and order of the color-preserving automorphism group.

    Uses a stabilizer chain: at each level the orbit of a base point under the
    pointwise stabilizer of the previous base points is computed by searching
    one mapping per orbit representative.  ``domain`` restricts base points to
    a subset on which the group acts faithfully (e.g. complex vertices).
    """
    n = len(colors)
    allowed = set(range(n)) if domain is None else set(domain)
    gens: list[dict[int, int]] = []
    order = 1
    partition = refine(adj, initial_partition(colors))
    while True:
        idx = -1
        for i, cell in enumerate(partition):
            if len(cell) > 1 and cell[0] in allowed:
                idx = i
                break
        if idx < 0:
            break
        cell = partition[idx]
        v = cell[0]
        level_gens: list[dict[int, int]] = []
        orbit = {v}
        base_left = individualize(partition, v)
        for w in cell[1:]:
            if w in orbit:
                continue
            perm = find_mapping(colors, adj, base_left, individualize(partition, w))
            if perm is not None:
                level_gens.append(perm)
                orbit = _orbit(v, level_gens)
        gens.extend(level_gens)
        order *= len(orbit)
        partition = refine(adj, base_left)
    return gens, order
