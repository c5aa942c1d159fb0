"""
Truncated growth graph on the spherical spectrum.

An edge gamma -> gamma + shift(r) exists when ||b^gamma|| / ||b^(gamma+shift)|| < c.
Vertices are all indices with every coordinate <= cutoff. Generator shifts only
increase coordinates, so the vertex set is closed under predecessors and
reachability inside the truncation is exact; vertices whose shifts leave the
truncation are recorded as the boundary.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, List, Mapping, Optional, Tuple

from pydantic import BaseModel

from src import config
from src.errors import CutoffTooLarge, NotARoot
from src.norms import MonomialExponents, NormKind, log_hwv_norm
from src.spherical_spectrum import SphereFamily, SpectrumIndex, spectrum_size
from src.utils import JsonReportMixin

logger = logging.getLogger(__name__)

ROUND_MARGIN = 0.1


@dataclass(frozen=True)
class Generator:
    name: str
    shift: SpectrumIndex
    monomial: MonomialExponents

    def __post_init__(self) -> None:
        if any(s < 0 for s in self.shift) or not any(self.shift):
            raise ValueError(f"Generator {self.name} needs a non-negative, non-zero shift")


GeneratorSet = Tuple[Generator, ...]


@dataclass(frozen=True)
class Edge:
    source: SpectrumIndex
    target: SpectrumIndex
    generator: str
    ratio: float


def default_generators(fam: SphereFamily) -> GeneratorSet:
    if fam.family == "OddA":
        return (
            Generator("y", (1, 0), MonomialExponents(1, 0)),
            Generator("z", (0, 1), MonomialExponents(0, 1)),
            Generator("yz", (1, 1), MonomialExponents(1, 1)),
        )
    if fam.family == "EvenB":
        return (Generator("y^2", (1,), MonomialExponents(2, 0)),)
    return (Generator("y", (1,), MonomialExponents(1, 0)),)


def default_c(fam: SphereFamily, norm_kind: NormKind = "sup") -> float:
    """
    Supremum of the ratios along the steps the length argument uses, plus 0.1.

    Those steps are the diagonal on the diagonal, y on g1 >= g2 and z on
    g1 <= g2 for OddA, and gamma -> gamma+1 for B/D.
    """
    n = fam.n
    if norm_kind == "sup":
        supremum = 2.0 if fam.family == "OddA" else 1.0
    elif fam.family == "OddA":
        supremum = math.sqrt((n + 1) * (n + 2))
    elif fam.family == "EvenB":
        supremum = math.sqrt(n + 0.5)
    else:
        supremum = math.sqrt(n)
    return round(supremum + ROUND_MARGIN, 12)


@dataclass(frozen=True)
class GrowthGraph:
    fam: SphereFamily
    generators: GeneratorSet
    c: float
    cutoff: int
    norm_kind: NormKind
    vertices: Tuple[SpectrumIndex, ...]
    edges: Tuple[Edge, ...]
    boundary: frozenset = field(default_factory=frozenset)

    @cached_property
    def successors(self) -> Dict[SpectrumIndex, List[SpectrumIndex]]:
        adjacency: Dict[SpectrumIndex, List[SpectrumIndex]] = {v: [] for v in self.vertices}
        for edge in self.edges:
            adjacency[edge.source].append(edge.target)
        return adjacency

    @cached_property
    def predecessors(self) -> Dict[SpectrumIndex, List[SpectrumIndex]]:
        adjacency: Dict[SpectrumIndex, List[SpectrumIndex]] = {v: [] for v in self.vertices}
        for edge in self.edges:
            adjacency[edge.target].append(edge.source)
        return adjacency

    def sources(self) -> List[SpectrumIndex]:
        return [v for v in self.vertices if not self.predecessors[v]]

    def has_edge(self, source: SpectrumIndex, target: SpectrumIndex) -> bool:
        return target in self.successors.get(source, [])


def build_graph(
    fam: SphereFamily,
    generators: Optional[GeneratorSet] = None,
    c: Optional[float] = None,
    cutoff: int = 10,
    norm_kind: NormKind = "sup",
) -> GrowthGraph:
    """Builds the truncated graph with deterministic vertex and edge order."""
    generators = generators or default_generators(fam)
    c = default_c(fam, norm_kind) if c is None else c
    if c <= 0:
        raise ValueError("c must be positive")
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    if spectrum_size(fam, cutoff) > config.MAX_SPECTRUM_ENTRIES:
        raise CutoffTooLarge(f"cutoff {cutoff} exceeds the vertex budget for {fam}")

    vertices = tuple(itertools.product(range(cutoff + 1), repeat=fam.arity))
    log_norms = {v: log_hwv_norm(fam, v, norm_kind) for v in vertices}
    log_c = math.log(c)

    edges: List[Edge] = []
    boundary = set()
    for vertex in vertices:
        for generator in generators:
            target = tuple(a + s for a, s in zip(vertex, generator.shift))
            if max(target) > cutoff:
                boundary.add(vertex)
                continue
            log_ratio = log_norms[vertex] - log_norms[target]
            if log_ratio < log_c:
                edges.append(Edge(vertex, target, generator.name, math.exp(log_ratio)))

    logger.debug(
        f"Growth graph {fam}: {len(vertices)} vertices, {len(edges)} edges, c={c}"
    )
    return GrowthGraph(
        fam=fam,
        generators=generators,
        c=c,
        cutoff=cutoff,
        norm_kind=norm_kind,
        vertices=vertices,
        edges=tuple(edges),
        boundary=frozenset(boundary),
    )


def _reachable_from(g: GrowthGraph, start: SpectrumIndex) -> Dict[SpectrumIndex, int]:
    """Breadth-first distances (in edges) from start."""
    distances = {start: 0}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for nxt in g.successors[node]:
            if nxt not in distances:
                distances[nxt] = distances[node] + 1
                queue.append(nxt)
    return distances


def topological_order(g: GrowthGraph) -> Optional[List[SpectrumIndex]]:
    """Kahn ordering; None when the graph has a cycle."""
    indegree = {v: len(g.predecessors[v]) for v in g.vertices}
    queue = deque(v for v in g.vertices if indegree[v] == 0)
    order: List[SpectrumIndex] = []
    while queue:
        node = queue.popleft()
        order.append(node)
        for nxt in g.successors[node]:
            indegree[nxt] -= 1
            if indegree[nxt] == 0:
                queue.append(nxt)
    return order if len(order) == len(g.vertices) else None


def is_acyclic(g: GrowthGraph) -> bool:
    return topological_order(g) is not None


def is_root(g: GrowthGraph, gamma: SpectrumIndex) -> bool:
    return gamma in g.successors and len(_reachable_from(g, gamma)) == len(g.vertices)


def find_root(g: GrowthGraph) -> Optional[SpectrumIndex]:
    """The vertex reaching every truncated vertex, if any.

    In an acyclic graph a root must be the only vertex without predecessors.
    """
    sources = g.sources()
    if len(sources) != 1:
        logger.debug(f"No root: {len(sources)} vertices without predecessors")
        return None
    candidate = sources[0]
    return candidate if is_root(g, candidate) else None


def length_function(g: GrowthGraph, root: SpectrumIndex) -> Dict[SpectrumIndex, int]:
    """Shortest-path length from the root; the root itself has length 1."""
    if root not in g.successors:
        raise NotARoot(f"{root} is not a vertex of the graph")
    distances = _reachable_from(g, root)
    if len(distances) != len(g.vertices):
        raise NotARoot(f"{root} does not reach every vertex")
    lengths = dict(distances)
    lengths[root] = 1
    return lengths


EdgePair = Tuple[SpectrumIndex, SpectrumIndex]


def edge_pairs(g: GrowthGraph) -> FrozenSet[EdgePair]:
    return frozenset((e.source, e.target) for e in g.edges)


class NormKindComparison(JsonReportMixin, BaseModel):
    family: str
    n: int
    cutoff: int
    sup_c: float
    l2_c: float
    shared_edges: int
    sup_only: List[EdgePair]
    l2_only: List[EdgePair]
    sup_root: Optional[Tuple[int, ...]]
    l2_root: Optional[Tuple[int, ...]]
    same_lengths: bool

    @property
    def edges_coincide(self) -> bool:
        return not self.sup_only and not self.l2_only

    @property
    def sup_edges_contained(self) -> bool:
        return not self.sup_only


def compare_norm_kinds(fam: SphereFamily, cutoff: int = 20) -> NormKindComparison:
    """
    Builds the sup and l2 graphs at their default c and compares them.

    For B/D the edge sets coincide. For OddA the l2 graph contains the sup
    graph and gains extra edges once the truncation reaches (0,2): the two norms
    order the generator steps differently, so no l2 threshold reproduces the
    sup edge set. Roots and lengths agree.
    """
    sup = build_graph(fam, cutoff=cutoff, norm_kind="sup")
    l2 = build_graph(fam, cutoff=cutoff, norm_kind="l2")
    sup_pairs, l2_pairs = edge_pairs(sup), edge_pairs(l2)
    sup_root, l2_root = find_root(sup), find_root(l2)
    same_lengths = (
        sup_root is not None
        and sup_root == l2_root
        and length_function(sup, sup_root) == length_function(l2, sup_root)
    )
    comparison = NormKindComparison(
        family=fam.label,
        n=fam.n,
        cutoff=cutoff,
        sup_c=sup.c,
        l2_c=l2.c,
        shared_edges=len(sup_pairs & l2_pairs),
        sup_only=sorted(sup_pairs - l2_pairs),
        l2_only=sorted(l2_pairs - sup_pairs),
        sup_root=sup_root,
        l2_root=l2_root,
        same_lengths=same_lengths,
    )
    logger.debug(
        f"Norm kinds {fam}: {comparison.shared_edges} shared, "
        f"{len(comparison.sup_only)} sup-only, {len(comparison.l2_only)} l2-only edges"
    )
    return comparison


class DiracGrowthReport(JsonReportMixin, BaseModel):
    max_edge_increment: float
    bound_constant: float
    increment_window: Optional[int]
    checked_vertices: int
    violations: List[Tuple[int, ...]]

    @property
    def holds(self) -> bool:
        return not self.violations


def dirac_growth_check(
    g: GrowthGraph,
    root: SpectrumIndex,
    d: Mapping[SpectrumIndex, float],
    increment_window: Optional[int] = None,
) -> DiracGrowthReport:
    """
    Checks |d_gamma| <= |d_root| + Delta * l(gamma) on every vertex.

    Delta is the largest |d_target - d_source| over edges; with a window W only
    edges whose endpoints have length <= W are measured.
    """
    lengths = length_function(g, root)
    increments = [
        abs(d[e.target] - d[e.source])
        for e in g.edges
        if increment_window is None
        or max(lengths[e.source], lengths[e.target]) <= increment_window
    ]
    delta = max(increments, default=0.0)
    base = abs(d[root])
    violations = [
        v
        for v in g.vertices
        if abs(d[v]) > base + delta * lengths[v] + 1e-12 * max(1.0, abs(d[v]))
    ]
    if violations:
        logger.info(f"Dirac growth check: {len(violations)} vertices exceed the bound")
    return DiracGrowthReport(
        max_edge_increment=float(delta),
        bound_constant=float(base),
        increment_window=increment_window,
        checked_vertices=len(g.vertices),
        violations=violations,
    )


def _label(gamma: SpectrumIndex) -> str:
    return "(" + ",".join(str(x) for x in gamma) + ")"


def to_dot(g: GrowthGraph, root: Optional[SpectrumIndex] = None) -> str:
    """DOT text; vertices annotated with their length when a root exists."""
    lengths = length_function(g, root) if root is not None else {}
    lines = [
        "digraph growth {",
        f'  label="{g.fam.label} n={g.fam.n} c={g.c} norm={g.norm_kind}";',
    ]
    for v in g.vertices:
        attrs = [f'label="{_label(v)}' + (f"\\nl={lengths[v]}" if lengths else "") + '"']
        if v == root:
            attrs.append("style=filled fillcolor=gold")
        lines.append(f'  "{_label(v)}" [{" ".join(attrs)}];')
    for e in g.edges:
        lines.append(
            f'  "{_label(e.source)}" -> "{_label(e.target)}" '
            f'[label="{e.generator} {e.ratio:.6f}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


class GraphVertex(BaseModel):
    index: Tuple[int, ...]
    length: Optional[int]


class GraphEdge(BaseModel):
    source: Tuple[int, ...]
    target: Tuple[int, ...]
    generator: str
    ratio: float


class GraphDocument(JsonReportMixin, BaseModel):
    schema_version: int = config.SCHEMA_VERSION
    family: str
    n: int
    c: float
    norm_kind: str
    cutoff: int
    root: Optional[Tuple[int, ...]]
    vertices: List[GraphVertex]
    edges: List[GraphEdge]
    seed: Optional[int] = None


def to_document(g: GrowthGraph, root: Optional[SpectrumIndex] = None) -> GraphDocument:
    lengths = length_function(g, root) if root is not None else {}
    return GraphDocument(
        family=g.fam.label,
        n=g.fam.n,
        c=g.c,
        norm_kind=g.norm_kind,
        cutoff=g.cutoff,
        root=root,
        vertices=[GraphVertex(index=v, length=lengths.get(v)) for v in g.vertices],
        edges=[
            GraphEdge(source=e.source, target=e.target, generator=e.generator, ratio=e.ratio)
            for e in g.edges
        ],
    )


def to_json(g: GrowthGraph, root: Optional[SpectrumIndex] = None) -> str:
    return to_document(g, root).render_json()
