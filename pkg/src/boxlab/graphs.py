"""Finite simple graphs: Cayley graphs, girth, Cheeger constants, and
homology covers built from a spanning tree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

from .errors import ResourceLimitError


@dataclass(eq=False)
class Graph:
    n: int
    adj: tuple[tuple[int, ...], ...]
    labels: tuple | None = None
    vertex_transitive: bool = False

    @classmethod
    def from_edges(cls, n: int, edges, labels=None,
                   vertex_transitive: bool = False) -> "Graph":
        seen = set()
        lists: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"vertex out of range in edge ({u}, {v})")
            if u == v:
                raise ValueError(f"loop at vertex {u} rejected")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValueError(f"duplicate edge {key} rejected")
            seen.add(key)
            lists[u].append(v)
            lists[v].append(u)
        return cls(n=n, adj=tuple(tuple(sorted(l)) for l in lists),
                   labels=tuple(labels) if labels is not None else None,
                   vertex_transitive=vertex_transitive)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def is_regular(self) -> bool:
        degs = self.degrees()
        return len(set(degs)) <= 1

    @property
    def k(self) -> int:
        degs = set(self.degrees())
        if len(degs) != 1:
            raise ValueError("graph is not regular")
        return degs.pop()

    def bfs_distances(self, source: int) -> list[int]:
        dist = [-1] * self.n
        dist[source] = 0
        frontier = [source]
        while frontier:
            nxt = []
            for u in frontier:
                for v in self.adj[u]:
                    if dist[v] < 0:
                        dist[v] = dist[u] + 1
                        nxt.append(v)
            frontier = nxt
        return dist

    def is_connected(self) -> bool:
        return self.n == 0 or all(d >= 0 for d in self.bfs_distances(0))

    def is_bipartite(self) -> bool:
        color = [-1] * self.n
        for start in range(self.n):
            if color[start] >= 0:
                continue
            color[start] = 0
            frontier = [start]
            while frontier:
                nxt = []
                for u in frontier:
                    for v in self.adj[u]:
                        if color[v] < 0:
                            color[v] = color[u] ^ 1
                            nxt.append(v)
                        elif color[v] == color[u]:
                            return False
                frontier = nxt
        return True

    def diameter(self) -> int:
        best = 0
        for v in range(self.n):
            d = self.bfs_distances(v)
            if min(d) < 0:
                raise ValueError("diameter undefined for disconnected graph")
            best = max(best, max(d))
        return best

    def adjacency_matrix(self):
        import numpy as np

        a = np.zeros((self.n, self.n))
        for u in range(self.n):
            for v in self.adj[u]:
                a[u, v] = 1.0
        return a

    def sparse_adjacency(self):
        import numpy as np
        from scipy import sparse

        rows, cols = [], []
        for u in range(self.n):
            for v in self.adj[u]:
                rows.append(u)
                cols.append(v)
        data = np.ones(len(rows))
        return sparse.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    def write_file(self, path: str) -> None:
        with open(path, "w") as fh:
            fh.write(f"{self.n} {self.num_edges}\n")
            for u, v in self.edges():
                fh.write(f"{u} {v}\n")


def read_graph_file(path: str) -> Graph:
    """Read the plain edge-list format: first line "V E", then E lines "u v".
    Non-simple input is rejected."""
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError("bad header line")
        n, e = int(header[0]), int(header[1])
        edges = []
        for line in fh:
            line = line.strip()
            if not line or line.startswith("projection"):
                break
            u, v = map(int, line.split())
            edges.append((u, v))
    if len(edges) != e:
        raise ValueError(f"expected {e} edges, read {len(edges)}")
    return Graph.from_edges(n, edges)


# --- named graphs ----------------------------------------------------------


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)],
                            vertex_transitive=True)


def complete(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)],
                            vertex_transitive=True)


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)],
                            vertex_transitive=(a == b))


def petersen() -> Graph:
    edges = [(i, (i + 1) % 5) for i in range(5)]
    edges += [(i, i + 5) for i in range(5)]
    edges += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, edges, vertex_transitive=True)


# --- Cayley graphs ---------------------------------------------------------


@dataclass(eq=False)
class CayleyGraph:
    graph: Graph
    elements: list
    identity_index: int
    mul: Callable
    index: dict = field(repr=False)
    generator_indices: tuple[int, ...] = ()
    _inv_cache: dict = field(default_factory=dict, repr=False)

    def mul_idx(self, i: int, j: int) -> int:
        return self.index[self.mul(self.elements[i], self.elements[j])]

    def inv_idx(self, i: int) -> int:
        hit = self._inv_cache.get(i)
        if hit is None:
            e = self.elements[self.identity_index]
            hit = next(j for j in range(len(self.elements))
                       if self.mul(self.elements[i], self.elements[j]) == e)
            self._inv_cache[i] = hit
        return hit


def cayley_graph(elements: Sequence[Hashable], mul: Callable,
                 gens: Sequence[Hashable]) -> CayleyGraph:
    """Cayley graph on the given element list.  gens must exclude the
    identity and be closed under inverses; non-generating sets raise."""
    elements = list(elements)
    index = {e: i for i, e in enumerate(elements)}
    if len(index) != len(elements):
        raise ValueError("duplicate elements")
    probe = elements[0]
    identity = next((e for e in elements
                     if mul(e, probe) == probe and mul(probe, e) == probe), None)
    if identity is None:
        raise ValueError("no identity found in element list")
    gens = list(gens)
    if identity in gens:
        raise ValueError("identity may not be a generator")
    for s in gens:
        if not any(mul(s, t) == identity for t in gens):
            raise ValueError(f"generator set not closed under inverses: {s!r}")
    edges = set()
    for i, x in enumerate(elements):
        for s in gens:
            j = index[mul(x, s)]
            edges.add((i, j) if i < j else (j, i))
    graph = Graph.from_edges(len(elements), sorted(edges), labels=elements,
                             vertex_transitive=True)
    reach = graph.bfs_distances(index[identity])
    size = sum(1 for d in reach if d >= 0)
    if size < len(elements):
        raise ValueError(
            f"generators do not generate: reached component of size {size} "
            f"of {len(elements)}")
    return CayleyGraph(graph=graph, elements=elements,
                       identity_index=index[identity], mul=mul, index=index,
                       generator_indices=tuple(index[s] for s in gens))


# --- girth and Cheeger -----------------------------------------------------


def girth(graph: Graph) -> float:
    """Length of the shortest cycle, math.inf for forests.  Per-root BFS with
    depth pruning against the best cycle found so far."""
    best = math.inf
    for root in range(graph.n):
        dist = {root: 0}
        parent = {root: -1}
        frontier = [root]
        while frontier:
            nxt = []
            for u in frontier:
                if 2 * dist[u] >= best - 1:
                    continue
                for v in graph.adj[u]:
                    if v == parent[u]:
                        continue
                    if v in dist:
                        best = min(best, dist[u] + dist[v] + 1)
                    else:
                        dist[v] = dist[u] + 1
                        parent[v] = u
                        nxt.append(v)
            frontier = nxt
        if best == 3:
            break
    return best


@dataclass(frozen=True)
class CheegerResult:
    value: float | None
    witness: frozenset | None
    lower: float
    upper: float
    exact: bool


def cheeger_exact(graph: Graph, exhaustive_limit: int = 24) -> CheegerResult:
    """Exact Cheeger constant by subset enumeration for small graphs.

    For graphs above the limit, returns spectral bounds [l1/2, sqrt(2*k*l1)]
    with exact=False.
    """
    n = graph.n
    if not graph.is_connected():
        comp = [v for v, d in enumerate(graph.bfs_distances(0)) if d >= 0]
        small = comp if len(comp) <= n // 2 else \
            [v for v in range(n) if v not in set(comp)]
        return CheegerResult(value=0.0, witness=frozenset(small),
                             lower=0.0, upper=0.0, exact=True)
    if n > exhaustive_limit:
        from .spectral import spectrum

        lam1 = spectrum(graph).laplacian_values()[1]
        return CheegerResult(value=None, witness=None, lower=lam1 / 2,
                             upper=math.sqrt(2 * graph.k * lam1), exact=False)
    masks = [sum(1 << v for v in graph.adj[u]) for u in range(n)]
    best = math.inf
    best_set = 0
    half = n // 2
    for s in range(1, 1 << n):
        size = s.bit_count()
        if size > half:
            continue
        boundary = 0
        t = s
        while t:
            v = (t & -t).bit_length() - 1
            boundary += (masks[v] & ~s).bit_count()
            t &= t - 1
        ratio = boundary / size
        if ratio < best:
            best = ratio
            best_set = s
    witness = frozenset(v for v in range(n) if best_set >> v & 1)
    return CheegerResult(value=best, witness=witness, lower=best, upper=best,
                         exact=True)


# --- spanning trees and homology covers ------------------------------------


@dataclass(frozen=True)
class SpanningTreeData:
    tree_edges: frozenset[tuple[int, int]]
    non_tree_edges: tuple[tuple[int, int], ...]  # position is the edge index
    rank: int


def spanning_tree(graph: Graph) -> SpanningTreeData:
    """BFS spanning tree from vertex 0 over sorted adjacency; non-tree edges
    indexed in lexicographic order."""
    if not graph.is_connected():
        raise ValueError("graph must be connected")
    seen = [False] * graph.n
    seen[0] = True
    tree = set()
    frontier = [0]
    while frontier:
        nxt = []
        for u in frontier:
            for v in graph.adj[u]:
                if not seen[v]:
                    seen[v] = True
                    tree.add((u, v) if u < v else (v, u))
                    nxt.append(v)
        frontier = nxt
    non_tree = tuple(e for e in graph.edges() if e not in tree)
    rank = graph.num_edges - graph.n + 1
    assert len(non_tree) == rank
    return SpanningTreeData(tree_edges=frozenset(tree), non_tree_edges=non_tree,
                            rank=rank)


@dataclass(eq=False)
class CoverGraph:
    graph: Graph
    base: Graph
    projection: tuple[int, ...]
    m: int
    rank: int
    tree: SpanningTreeData

    def fiber(self, base_vertex: int) -> list[int]:
        return [v for v, p in enumerate(self.projection) if p == base_vertex]

    def deck_translate(self, shift: Sequence[int]) -> list[int]:
        """Vertex permutation translating the Z_m^r coordinate by shift."""
        n = self.base.n
        m, r = self.m, self.rank
        weights = [m ** i for i in range(r)]
        perm = []
        for cv in range(self.graph.n):
            block, v = divmod(cv, n)
            digits = [(block // w) % m for w in weights]
            shifted = sum(((digits[i] + shift[i]) % m) * weights[i]
                          for i in range(r))
            perm.append(shifted * n + v)
        return perm

    def write_file(self, path: str) -> None:
        with open(path, "w") as fh:
            fh.write(f"{self.graph.n} {self.graph.num_edges}\n")
            for u, v in self.graph.edges():
                fh.write(f"{u} {v}\n")
            fh.write("projection\n")
            for cv, bv in enumerate(self.projection):
                fh.write(f"{cv} {bv}\n")


def homology_cover(graph: Graph, m: int, cap: int = 500_000) -> CoverGraph:
    """The m-fold homology cover: one copy of the spanning tree per element
    of Z_m^r, non-tree edge j connecting block a to block a + unit_j."""
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    tree = spanning_tree(graph)
    r = tree.rank
    n_blocks = m ** r
    total = n_blocks * graph.n
    if total > cap:
        raise ResourceLimitError(f"cover would have {total} > {cap} vertices")
    n = graph.n
    weights = [m ** i for i in range(r)]
    edges = []
    for block in range(n_blocks):
        base_off = block * n
        for u, v in tree.tree_edges:
            edges.append((base_off + u, base_off + v))
        for j, (u, v) in enumerate(tree.non_tree_edges):
            digit = (block // weights[j]) % m
            target = block + ((digit + 1) % m - digit) * weights[j]
            edges.append((base_off + u, target * n + v))
    cover = Graph.from_edges(total, edges)
    projection = tuple(cv % n for cv in range(total))
    return CoverGraph(graph=cover, base=graph, projection=projection, m=m,
                      rank=r, tree=tree)


def verify_covering(cover: CoverGraph) -> bool:
    """Projection restricted to each neighborhood must biject onto the base
    neighborhood."""
    base = cover.base
    proj = cover.projection
    for cv in range(cover.graph.n):
        image = sorted(proj[w] for w in cover.graph.adj[cv])
        if image != sorted(base.adj[proj[cv]]):
            return False
    return True


def is_automorphism(graph: Graph, perm: Sequence[int]) -> bool:
    edge_set = set(graph.edges())
    for u, v in edge_set:
        pu, pv = perm[u], perm[v]
        if ((pu, pv) if pu < pv else (pv, pu)) not in edge_set:
            return False
    return True
