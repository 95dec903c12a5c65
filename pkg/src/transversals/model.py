"""Vertex-partitioned r-uniform hypergraphs and their degree metrics.

The central object is :class:`PartitionedInstance`: an r-uniform hypergraph
(r=2 means an ordinary graph) whose vertex set is partitioned into blocks.
Vertices optionally carry a construction role (heavy/light) and inherit a
grade from their block.  All average-degree metrics are exact rationals;
floats appear only in display code.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    ForeignEdgeError,
    InstanceError,
    UniformityError,
    UnknownBlockError,
)

HEAVY = "heavy"
LIGHT = "light"


@dataclass(frozen=True)
class Block:
    """One part of the vertex partition.

    ``members`` is ordered; construction order is meaningful and serialized
    as-is.  ``grade`` is the recursion level for built instances and None for
    imported or ad-hoc ones.  ``padding`` marks blocks appended only to raise
    the block count; they carry no edges.
    """

    id: int
    members: tuple[int, ...]
    grade: int | None = None
    padding: bool = False

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class VertexInfo:
    block: int
    grade: int | None
    role: str | None


class PartitionedInstance:
    """An immutable r-uniform hypergraph with a block partition.

    Invariants enforced at construction:

    * blocks partition ``range(num_vertices)`` (dense ids, each exactly once),
    * every edge has exactly ``r`` distinct vertices, no duplicate edges,
    * for r=2 no loops (distinctness) and no parallel edges (no duplicates).

    Edges are stored as sorted tuples in construction order.  Instances are
    safe to share between threads once constructed.
    """

    __slots__ = (
        "r",
        "blocks",
        "edges",
        "meta",
        "roles",
        "_block_of",
        "_adjacency",
        "_incident",
    )

    def __init__(
        self,
        r: int,
        blocks: Sequence[Block],
        edges: Iterable[Sequence[int]],
        roles: Sequence[str | None] | None = None,
        meta: Mapping[str, str] | None = None,
    ):
        if r < 2:
            raise InstanceError(f"uniformity must be at least 2, got {r}")
        self.r = r
        self.blocks = tuple(blocks)

        block_of: dict[int, int] = {}
        for b in self.blocks:
            if b.size == 0 and not b.padding:
                raise InstanceError(f"block {b.id} is empty and not a padding block")
            for v in b.members:
                if v in block_of:
                    raise InstanceError(f"vertex {v} appears in more than one block")
                block_of[v] = b.id
        n = len(block_of)
        if set(block_of) != set(range(n)):
            raise InstanceError("vertex ids must be dense (0..num_vertices-1)")
        self._block_of = [block_of[v] for v in range(n)]

        norm_edges: list[tuple[int, ...]] = []
        seen: set[tuple[int, ...]] = set()
        for e in edges:
            tup = tuple(sorted(e))
            if len(tup) != r or len(set(tup)) != r:
                raise InstanceError(f"edge {tuple(e)} does not have {r} distinct vertices")
            if tup[0] < 0 or tup[-1] >= n:
                raise InstanceError(f"edge {tup} references an unknown vertex")
            if tup in seen:
                raise InstanceError(f"duplicate edge {tup}")
            seen.add(tup)
            norm_edges.append(tup)
        self.edges: tuple[tuple[int, ...], ...] = tuple(norm_edges)

        if roles is None:
            self.roles: tuple[str | None, ...] = (None,) * n
        else:
            if len(roles) != n:
                raise InstanceError("roles must cover every vertex")
            for role in roles:
                if role not in (None, HEAVY, LIGHT):
                    raise InstanceError(f"unknown role {role!r}")
            self.roles = tuple(roles)

        self.meta: dict[str, str] = dict(meta or {})
        self._adjacency: list[list[int]] | None = None
        self._incident: list[list[int]] | None = None

    # -- basic accessors ----------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return len(self._block_of)

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    def block_of(self, v: int) -> int:
        return self._block_of[v]

    def block(self, b: int) -> Block:
        if not 0 <= b < len(self.blocks):
            raise UnknownBlockError(f"no block with id {b}")
        return self.blocks[b]

    def vertex_info(self, v: int) -> VertexInfo:
        b = self.blocks[self._block_of[v]]
        return VertexInfo(block=b.id, grade=b.grade, role=self.roles[v])

    def adjacency(self) -> list[list[int]]:
        """Neighbor lists; only meaningful for r=2."""
        if self.r != 2:
            raise UniformityError("adjacency lists are defined for r=2 only")
        if self._adjacency is None:
            adj: list[list[int]] = [[] for _ in range(self.num_vertices)]
            for u, v in self.edges:
                adj[u].append(v)
                adj[v].append(u)
            self._adjacency = adj
        return self._adjacency

    def incident_edges(self) -> list[list[int]]:
        """For each vertex, the indices of edges containing it."""
        if self._incident is None:
            inc: list[list[int]] = [[] for _ in range(self.num_vertices)]
            for i, e in enumerate(self.edges):
                for v in e:
                    inc[v].append(i)
            self._incident = inc
        return self._incident

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PartitionedInstance):
            return NotImplemented
        return (
            self.r == other.r
            and self.blocks == other.blocks
            and self.edges == other.edges
            and self.roles == other.roles
            and self.meta == other.meta
        )

    def __repr__(self) -> str:
        return (
            f"PartitionedInstance(r={self.r}, blocks={self.num_blocks}, "
            f"vertices={self.num_vertices}, edges={len(self.edges)})"
        )


@dataclass(frozen=True)
class InstanceMetrics:
    """All degree statistics used by the construction guarantees."""

    per_block_degree: dict[int, int]
    max_block_avg_degree: Fraction
    max_degree: int
    local_degree: int | None
    thickness: int
    stretched_edges: int = field(default=0)


# -- operations --------------------------------------------------------------


def is_stretched(instance: PartitionedInstance, edge: Sequence[int]) -> bool:
    """True iff the edge's endpoints lie in pairwise distinct blocks."""
    tup = tuple(sorted(edge))
    if tup not in set(instance.edges):
        raise ForeignEdgeError(f"edge {tup} does not belong to this instance")
    return _edge_is_stretched(instance, tup)


def _edge_is_stretched(instance: PartitionedInstance, edge: tuple[int, ...]) -> bool:
    blocks = {instance.block_of(v) for v in edge}
    return len(blocks) == len(edge)


def block_degree(instance: PartitionedInstance, b: int) -> int:
    """Degree of block b.

    For graphs: edges with precisely one endvertex in the block.  For r>=3:
    stretched edges intersecting the block (non-stretched edges never occur
    in built instances, and are excluded here by definition).
    """
    blk = instance.block(b)
    members = set(blk.members)
    count = 0
    if instance.r == 2:
        for u, v in instance.edges:
            if (u in members) != (v in members):
                count += 1
    else:
        for e in instance.edges:
            if members.isdisjoint(e):
                continue
            if _edge_is_stretched(instance, e):
                count += 1
    return count


def _all_block_degrees(instance: PartitionedInstance) -> dict[int, int]:
    degrees = {b.id: 0 for b in instance.blocks}
    if instance.r == 2:
        for u, v in instance.edges:
            bu, bv = instance.block_of(u), instance.block_of(v)
            if bu != bv:
                degrees[bu] += 1
                degrees[bv] += 1
    else:
        for e in instance.edges:
            if not _edge_is_stretched(instance, e):
                continue
            for b in {instance.block_of(v) for v in e}:
                degrees[b] += 1
    return degrees


def max_block_average_degree(instance: PartitionedInstance) -> Fraction:
    """Exact maximum of d(B)/|B| over blocks.  Empty padding blocks are skipped."""
    if instance.num_blocks == 0:
        raise InstanceError("instance has no blocks")
    degrees = _all_block_degrees(instance)
    best = Fraction(0)
    for blk in instance.blocks:
        if blk.size == 0:
            continue
        best = max(best, Fraction(degrees[blk.id], blk.size))
    return best


def max_degree(instance: PartitionedInstance) -> int:
    counts = [0] * instance.num_vertices
    for e in instance.edges:
        for v in e:
            counts[v] += 1
    return max(counts, default=0)


def local_degree(instance: PartitionedInstance) -> int:
    """Maximum number of edges from one vertex into one other block (r=2 only)."""
    if instance.r != 2:
        raise UniformityError("local degree is defined for r=2 only")
    per_vertex_block: dict[tuple[int, int], int] = {}
    for u, v in instance.edges:
        bu, bv = instance.block_of(u), instance.block_of(v)
        if bv != bu:
            per_vertex_block[u, bv] = per_vertex_block.get((u, bv), 0) + 1
            per_vertex_block[v, bu] = per_vertex_block.get((v, bu), 0) + 1
    return max(per_vertex_block.values(), default=0)


class _UnionFind:
    __slots__ = ("parent", "rank")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, v: int) -> int:
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[v] != root:
            self.parent[v], v = root, self.parent[v]
        return root

    def union(self, u: int, v: int) -> bool:
        ru, rv = self.find(u), self.find(v)
        if ru == rv:
            return False
        if self.rank[ru] < self.rank[rv]:
            ru, rv = rv, ru
        self.parent[rv] = ru
        if self.rank[ru] == self.rank[rv]:
            self.rank[ru] += 1
        return True


def is_forest(instance: PartitionedInstance) -> bool:
    """True iff the graph is acyclic (r=2 only)."""
    if instance.r != 2:
        raise UniformityError("forest check is defined for r=2 only")
    uf = _UnionFind(instance.num_vertices)
    for u, v in instance.edges:
        if not uf.union(u, v):
            return False
    return True


def thickness(instance: PartitionedInstance) -> int:
    """Minimum block size.

    A declared target size in ``meta["t"]`` excludes only padding blocks
    smaller than it; built instances never produce such blocks, so this is a
    guard for imported files.
    """
    declared = instance.meta.get("t")
    target = int(declared) if declared is not None and declared.isdigit() else None
    sizes = []
    for blk in instance.blocks:
        if blk.padding and target is not None and blk.size < target:
            continue
        sizes.append(blk.size)
    return min(sizes, default=0)


def compute_metrics(instance: PartitionedInstance) -> InstanceMetrics:
    degrees = _all_block_degrees(instance)
    mbad = max_block_average_degree(instance)
    stretched = sum(1 for e in instance.edges if _edge_is_stretched(instance, e))
    return InstanceMetrics(
        per_block_degree=degrees,
        max_block_avg_degree=mbad,
        max_degree=max_degree(instance),
        local_degree=local_degree(instance) if instance.r == 2 else None,
        thickness=thickness(instance),
        stretched_edges=stretched,
    )


def relabel(instance: PartitionedInstance, perm: Sequence[int]) -> PartitionedInstance:
    """Apply a vertex permutation: vertex v becomes perm[v].

    Used to check that metrics are invariant under relabeling.
    """
    n = instance.num_vertices
    if sorted(perm) != list(range(n)):
        raise InstanceError("perm must be a permutation of the vertex ids")
    blocks = [
        Block(
            id=b.id,
            members=tuple(perm[v] for v in b.members),
            grade=b.grade,
            padding=b.padding,
        )
        for b in instance.blocks
    ]
    roles: list[str | None] = [None] * n
    for v in range(n):
        roles[perm[v]] = instance.roles[v]
    edges = [tuple(perm[v] for v in e) for e in instance.edges]
    return PartitionedInstance(instance.r, blocks, edges, roles=roles, meta=dict(instance.meta))
