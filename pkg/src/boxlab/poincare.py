"""Poincare-sum diagnostics against kernel-pair measures.

A kernel-pair measure puts equal weight on the pairs of vertices lying in a
common fiber (equivalently, differing by a nontrivial kernel element), with
total mass one.  A relative spectral gap of size eps certifies the bound
2k / eps on the Poincare sum of any 1-Lipschitz map; a suite of concrete
maps makes that literally checkable, and an adversarial translation map
witnesses failure of the plain expander bound when the gap is small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graphs import CayleyGraph, Graph
from .spectral import LiftDecomposition, lift_decomposition

LIPSCHITZ_SLACK = 1e-9


@dataclass(frozen=True)
class KernelPairMeasure:
    """Weight 1/D on ordered pairs (x, y), x != y, in a common block;
    D = |G| * (block size - 1)."""

    blocks: tuple[tuple[int, ...], ...]
    n: int
    D: int

    @classmethod
    def from_fibers(cls, fiber_of) -> "KernelPairMeasure":
        fiber_of = tuple(fiber_of)
        groups: dict[int, list[int]] = {}
        for v, b in enumerate(fiber_of):
            groups.setdefault(b, []).append(v)
        sizes = {len(g) for g in groups.values()}
        if len(sizes) != 1:
            raise ValueError(f"blocks must have constant size, got {sizes}")
        f = sizes.pop()
        if f < 2:
            raise ValueError("kernel is trivial; measure undefined")
        n = len(fiber_of)
        return cls(blocks=tuple(tuple(g) for g in groups.values()),
                   n=n, D=n * (f - 1))

    @classmethod
    def from_kernel(cls, cay: CayleyGraph, kernel) -> "KernelPairMeasure":
        """Blocks are the right cosets x * N of the kernel element set."""
        kernel = list(kernel)
        identity = cay.elements[cay.identity_index]
        if identity not in kernel:
            raise ValueError("kernel must contain the identity")
        if len(kernel) < 2:
            raise ValueError("kernel is trivial; measure undefined")
        block_of = [-1] * len(cay.elements)
        n_blocks = 0
        for i, x in enumerate(cay.elements):
            if block_of[i] >= 0:
                continue
            for z in kernel:
                block_of[cay.index[cay.mul(x, z)]] = n_blocks
            n_blocks += 1
        return cls.from_fibers(block_of)

    def total_mass(self) -> float:
        f = len(self.blocks[0])
        return len(self.blocks) * f * (f - 1) / self.D


@dataclass(eq=False)
class LipschitzMap:
    graph: Graph
    vectors: np.ndarray          # one row per vertex
    name: str = "map"

    def lipschitz_defect(self) -> tuple[float, tuple[int, int]]:
        """Largest edge stretch and the edge achieving it."""
        worst, worst_edge = 0.0, (-1, -1)
        for u, v in self.graph.edges():
            d = float(np.linalg.norm(self.vectors[u] - self.vectors[v]))
            if d > worst:
                worst, worst_edge = d, (u, v)
        return worst, worst_edge


def poincare_sum(phi: LipschitzMap, mu: KernelPairMeasure) -> float:
    """Exact weighted sum over same-block pairs; rejects non-Lipschitz maps."""
    stretch, edge = phi.lipschitz_defect()
    if stretch > 1 + LIPSCHITZ_SLACK:
        raise ValueError(
            f"map {phi.name!r} is not 1-Lipschitz: stretch {stretch:.6g} "
            f"on edge {edge}")
    terms = []
    for block in mu.blocks:
        for x in block:
            for y in block:
                if x != y:
                    diff = phi.vectors[x] - phi.vectors[y]
                    terms.append(float(diff @ diff))
    return math.fsum(terms) / mu.D


# --- the test-map suite ------------------------------------------------------


def _rescaled(graph: Graph, vectors: np.ndarray, name: str) -> LipschitzMap:
    phi = LipschitzMap(graph=graph, vectors=vectors, name=name)
    stretch, _ = phi.lipschitz_defect()
    if stretch > 0:
        phi = LipschitzMap(graph=graph, vectors=vectors / stretch, name=name)
    return phi


def spectral_maps(g: Graph, deco: LiftDecomposition, count: int = 2) -> list[LipschitzMap]:
    """Embeddings along the bottom relative eigenvectors, rescaled to
    Lipschitz constant one."""
    out = []
    for j in range(min(count, deco.relative_vectors.shape[1])):
        vec = deco.relative_vectors[:, j:j + 1]
        out.append(_rescaled(g, vec, f"relative-eigenvector-{j}"))
    return out


def distance_map(g: Graph, base: int = 0) -> LipschitzMap:
    dist = np.array(g.bfs_distances(base), dtype=float).reshape(-1, 1)
    return LipschitzMap(graph=g, vectors=dist, name=f"distance-to-{base}")


def random_sign_maps(g: Graph, seed: int = 0, count: int = 2,
                     dim: int = 3) -> list[LipschitzMap]:
    rng = np.random.default_rng(seed)
    out = []
    for j in range(count):
        vecs = rng.choice([-1.0, 1.0], size=(g.n, dim))
        out.append(_rescaled(g, vecs, f"random-signs-{j}"))
    return out


@dataclass(frozen=True)
class PoincareCertificate:
    epsilon: float
    C: float
    k: int
    sums: tuple[tuple[str, float], ...]
    worst_map: str
    worst_sum: float
    passed: bool
    tolerance: float = LIPSCHITZ_SLACK

    def to_json(self) -> dict:
        return {"epsilon": self.epsilon, "C": self.C, "k": self.k,
                "worst_map_id": self.worst_map, "worst_sum": self.worst_sum,
                "pass": self.passed, "sums": list(self.sums),
                "tolerance": self.tolerance}


def certify_relative(g: Graph, h: Graph, fiber_map,
                     deco: LiftDecomposition | None = None, seed: int = 0,
                     extra_maps: list[LipschitzMap] | None = None) -> PoincareCertificate:
    """Certificate C = 2k/eps from the relative gap: every suite map must
    have Poincare sum at most C.  Refused when the kernel is trivial or the
    relative gap vanishes."""
    if deco is None:
        deco = lift_decomposition(g, h, fiber_map)
    if not math.isfinite(deco.epsilon):
        raise ValueError("trivial kernel: no relative part, certificate refused")
    if deco.epsilon <= 0:
        raise ValueError("relative gap is zero, certificate refused")
    k = g.k
    c = 2 * k / deco.epsilon
    mu = KernelPairMeasure.from_fibers(fiber_map)
    maps = spectral_maps(g, deco) + [distance_map(g)] + random_sign_maps(g, seed)
    if extra_maps:
        maps.extend(extra_maps)
    sums = tuple((phi.name, poincare_sum(phi, mu)) for phi in maps)
    worst_map, worst_sum = max(sums, key=lambda t: t[1])
    return PoincareCertificate(epsilon=deco.epsilon, C=c, k=k, sums=sums,
                               worst_map=worst_map, worst_sum=worst_sum,
                               passed=worst_sum <= c + LIPSCHITZ_SLACK)


# --- the adversarial construction -------------------------------------------


def adversarial_map(cay: CayleyGraph, f: np.ndarray | None = None) -> LipschitzMap:
    """Translation map x -> (y -> f(y^-1 x)) / sqrt(L) built from an
    eigenvector f for the Laplacian gap, L being the largest per-generator
    edge stretch so the map is exactly 1-Lipschitz."""
    g = cay.graph
    n = g.n
    if f is None:
        from scipy.linalg import eigh

        lap = g.k * np.eye(n) - g.adjacency_matrix()
        _, vecs = eigh(lap)
        f = vecs[:, 1]
    f = np.asarray(f, dtype=float)
    if np.allclose(f, f[0]):
        raise ValueError("eigenvector must be nonconstant")
    inv = [cay.inv_idx(i) for i in range(n)]
    vectors = np.empty((n, n))
    for x in range(n):
        for y in range(n):
            vectors[x, y] = f[cay.mul_idx(inv[y], x)]
    stretches = []
    for s in cay.generator_indices:
        stretches.append(sum((f[u] - f[cay.mul_idx(u, s)]) ** 2
                             for u in range(n)))
    scale = math.sqrt(max(stretches))
    return LipschitzMap(graph=g, vectors=vectors / scale, name="adversarial")


def double_sum(phi: LipschitzMap) -> float:
    """sum over all ordered vertex pairs of ||phi(x) - phi(y)||^2."""
    v = phi.vectors
    n = v.shape[0]
    sq = (v * v).sum(axis=1)
    gram = v @ v.T
    return float(n * sq.sum() * 2 - 2 * gram.sum())


@dataclass(frozen=True)
class ExpanderBoundReport:
    C: float
    lhs: float
    rhs: float
    violated: bool


def expander_bound_check(cay: CayleyGraph, C: float,
                         f: np.ndarray | None = None) -> ExpanderBoundReport:
    """Whether the adversarial map breaks sum_{x,y} ||phi(x)-phi(y)||^2 <= C |G|^2."""
    phi = adversarial_map(cay, f)
    stretch, edge = phi.lipschitz_defect()
    if stretch > 1 + LIPSCHITZ_SLACK:
        raise AssertionError(f"adversarial map not Lipschitz: {stretch} on {edge}")
    lhs = double_sum(phi)
    rhs = C * cay.graph.n ** 2
    return ExpanderBoundReport(C=C, lhs=lhs, rhs=rhs, violated=lhs > rhs)
