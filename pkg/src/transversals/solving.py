"""Decide and certify the existence of independent transversals.

Two independent engines:

* :func:`propagate_certificate` runs a polynomial forbidden/forced fixpoint.
  A vertex is forbidden when it is completely joined to the survivor tuples
  of r-1 witness blocks, or to a forced set derived from a complete join
  between survivor parts of a block tuple (the mechanism behind the
  degree-bounded gadgets).  When a block runs out of survivors the ordered
  deduction log is returned as a replayable :class:`Certificate`.

* :func:`find_transversal` is exact backtracking (fewest-survivors block
  first) pruned by the same propagation; :func:`count_transversals` is a
  deliberately separate exhaustive counter that prunes only by forward
  checking, so counts can serve as an independent ground truth for the
  certifier and the stronger solver.
"""

from __future__ import annotations

import itertools
import time
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Union

from .errors import CertificateError
from .model import PartitionedInstance, thickness
from .sequences import threshold_constant

# -- certificate steps --------------------------------------------------------


@dataclass(frozen=True)
class ForcedSetStep:
    """Snapshot: the surviving vertices of a block form a forced set."""

    block: int
    survivors: tuple[int, ...]


@dataclass(frozen=True)
class ForbiddenStep:
    """The vertex is joined to every survivor tuple of the witness blocks."""

    vertex: int
    witnesses: tuple[int, ...]


@dataclass(frozen=True)
class JoinForcedStep:
    """A complete join between survivor parts makes the rest forced.

    ``kept`` lists, per block, the surviving part of the join; every cross
    tuple over the kept parts is an edge, so a transversal cannot pick from
    all kept parts simultaneously and must hit ``forced``.
    """

    blocks: tuple[int, ...]
    kept: tuple[tuple[int, ...], ...]
    forced: tuple[int, ...]


@dataclass(frozen=True)
class ForbiddenViaForcedStep:
    """The vertex is joined to every survivor of a derived forced set,
    combined with all survivor tuples of the witness blocks (r-2 of them;
    none for graphs)."""

    vertex: int
    forced_step: int
    witnesses: tuple[int, ...]


Step = Union[ForcedSetStep, ForbiddenStep, JoinForcedStep, ForbiddenViaForcedStep]


@dataclass(frozen=True)
class Certificate:
    """An ordered deduction log ending in a block with no survivors."""

    steps: tuple[Step, ...]
    conclusion: int


@dataclass(frozen=True)
class TransversalReport:
    outcome: str  # found | none_exhaustive | count | aborted
    assignment: dict[int, int] | None = None
    count: int | None = None
    cap: int | None = None
    nodes_explored: int = 0
    wall_time: float = 0.0


@dataclass(frozen=True)
class WWReport:
    status: str  # hypothesis_not_met | bound_holds | bound_violated
    count: int | None = None
    bound: Fraction | None = None
    failing_block: int | None = None


# -- propagation engine ---------------------------------------------------------


class _Propagation:
    """Shared fixpoint machinery for certification and solver pruning."""

    def __init__(
        self,
        inst: PartitionedInstance,
        record: bool,
        removed: set[int] | None = None,
    ):
        self.inst = inst
        self.r = inst.r
        n = inst.num_vertices
        self.forbidden = bytearray(n)
        self.surv_count = [b.size for b in inst.blocks]
        self.record = record
        self.steps: list[Step] = []
        self.emitted: dict[int, tuple[int, ...]] = {}
        self.emptied: int | None = None
        self.queue: deque[int] = deque()
        self.queued = bytearray(n)
        self._edge_set: set[tuple[int, ...]] | None = None

        if self.r == 2:
            adj = inst.adjacency()
            self.count: list[dict[int, int]] = [dict() for _ in range(n)]
            touch: list[set[int]] = [set() for _ in range(inst.num_blocks)]
            for v in range(n):
                bv = inst.block_of(v)
                for u in adj[v]:
                    bu = inst.block_of(u)
                    if bu != bv:
                        self.count[v][bu] = self.count[v].get(bu, 0) + 1
                        touch[bu].add(v)
            self.touchers = [sorted(s) for s in touch]
        else:
            self.edge_dead = [0] * len(inst.edges)
            self.sig_live: list[dict[tuple[int, ...], int]] = [dict() for _ in range(n)]
            touch = [set() for _ in range(inst.num_blocks)]
            for e in inst.edges:
                for v in e:
                    sig = self._edge_signature(v, e)
                    if sig is None:
                        continue
                    self.sig_live[v][sig] = self.sig_live[v].get(sig, 0) + 1
                    for b in sig:
                        touch[b].add(v)
            self.touchers = [sorted(s) for s in touch]

        if removed:
            for v in sorted(removed):
                self._mark(v, None)
        for v in range(n):
            self._enqueue(v)

    # .. helpers ..

    def _edge_signature(self, v: int, e: tuple[int, ...]) -> tuple[int, ...] | None:
        """Witness blocks of edge e seen from v; None if unusable for the
        forbidden rule (repeated blocks or v's own block among them)."""
        bv = self.inst.block_of(v)
        others = sorted(self.inst.block_of(u) for u in e if u != v)
        if bv in others or len(set(others)) != len(others):
            return None
        return tuple(others)

    def _survivors(self, b: int) -> tuple[int, ...]:
        return tuple(
            v for v in self.inst.blocks[b].members if not self.forbidden[v]
        )

    def _enqueue(self, v: int) -> None:
        if not self.forbidden[v] and not self.queued[v]:
            self.queued[v] = 1
            self.queue.append(v)

    def _emit_forced(self, b: int) -> None:
        surv = self._survivors(b)
        if self.emitted.get(b) != surv:
            self.emitted[b] = surv
            self.steps.append(ForcedSetStep(block=b, survivors=surv))

    def _mark(self, v: int, step: Step | None) -> None:
        """Mark v forbidden, update counters, enqueue affected rechecks."""
        if self.forbidden[v]:
            return
        if step is not None and self.record:
            if isinstance(step, ForbiddenStep):
                for b in step.witnesses:
                    self._emit_forced(b)
            self.steps.append(step)
        self.forbidden[v] = 1
        bv = self.inst.block_of(v)
        self.surv_count[bv] -= 1
        if self.surv_count[bv] == 0 and self.emptied is None:
            self.emptied = bv

        if self.r == 2:
            for u in self.inst.adjacency()[v]:
                if self.inst.block_of(u) != bv:
                    self.count[u][bv] -= 1
        else:
            inc = self.inst.incident_edges()
            for ei in inc[v]:
                self.edge_dead[ei] += 1
                if self.edge_dead[ei] == 1:
                    for u in self.inst.edges[ei]:
                        if u == v:
                            continue
                        sig = self._edge_signature(u, self.inst.edges[ei])
                        if sig is not None:
                            self.sig_live[u][sig] -= 1
        for u in self.touchers[bv]:
            self._enqueue(u)

    def _find_witness(self, v: int) -> tuple[int, ...] | None:
        if self.r == 2:
            for b in sorted(self.count[v]):
                c = self.surv_count[b]
                if c > 0 and self.count[v][b] == c:
                    return (b,)
            return None
        for sig in sorted(self.sig_live[v]):
            live = self.sig_live[v][sig]
            if live == 0:
                continue
            need = prod(self.surv_count[b] for b in sig)
            if need > 0 and live == need:
                return sig
        return None

    def run_basic(self) -> int | None:
        """Fixpoint of the witness-block rule; returns the emptied block."""
        while self.queue:
            v = self.queue.popleft()
            self.queued[v] = 0
            if self.forbidden[v] or self.emptied is not None:
                if self.emptied is not None:
                    break
                continue
            wit = self._find_witness(v)
            if wit is not None:
                self._mark(v, ForbiddenStep(vertex=v, witnesses=wit))
                if self.emptied is not None:
                    break
        return self.emptied

    # .. complete-join phase ..

    def _edges_as_set(self) -> set[tuple[int, ...]]:
        if self._edge_set is None:
            self._edge_set = set(self.inst.edges)
        return self._edge_set

    def run_join_phase(self) -> bool:
        """One pass of the complete-join rule; True if progress was made."""
        progress = False
        by_sig: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
        for e in self.inst.edges:
            if any(self.forbidden[v] for v in e):
                continue
            blocks = tuple(sorted({self.inst.block_of(v) for v in e}))
            if len(blocks) == self.r:
                by_sig.setdefault(blocks, []).append(e)
        for sig in sorted(by_sig):
            if self.emptied is not None:
                break
            kept: dict[int, set[int]] = {b: set() for b in sig}
            live_edges = 0
            for e in by_sig[sig]:
                if any(self.forbidden[v] for v in e):
                    continue  # killed earlier in this pass
                live_edges += 1
                for v in e:
                    kept[self.inst.block_of(v)].add(v)
            if live_edges == 0 or live_edges != prod(len(kept[b]) for b in sig):
                continue  # the surviving join is not complete
            forced = []
            for b in sig:
                forced.extend(v for v in self._survivors(b) if v not in kept[b])
            if not forced:
                continue  # would have been caught by the witness rule
            forced_t = tuple(sorted(forced))
            hits = self._forced_set_hits(forced_t)
            if not hits:
                continue
            if self.record:
                for b in sig:
                    self._emit_forced(b)
                self.steps.append(
                    JoinForcedStep(
                        blocks=sig,
                        kept=tuple(tuple(sorted(kept[b])) for b in sig),
                        forced=forced_t,
                    )
                )
                forced_index = len(self.steps) - 1
            else:
                forced_index = -1
            for v, witnesses in hits:
                if self.forbidden[v]:
                    continue
                if not self._check_forced_join(v, forced_t, witnesses):
                    continue  # earlier markings in this loop may stale a hit
                step = None
                if self.record:
                    for b in witnesses:
                        self._emit_forced(b)
                    step = ForbiddenViaForcedStep(
                        vertex=v, forced_step=forced_index, witnesses=witnesses
                    )
                self._mark(v, step)
                progress = True
                if self.emptied is not None:
                    break
        return progress

    def _forced_set_hits(
        self, forced: tuple[int, ...]
    ) -> list[tuple[int, tuple[int, ...]]]:
        """Vertices joined to the whole forced set (plus witness blocks for
        r >= 3), in deterministic order.

        Degenerate combinations (a candidate inside the forced set, witness
        blocks overlapping other roles) rule themselves out: the required
        mega-join would need edges with repeated vertices, so the coverage
        counts cannot reach the survivor-tuple product.
        """
        alive = [s for s in forced if not self.forbidden[s]]
        if not alive:
            return []
        hits: list[tuple[int, tuple[int, ...]]] = []
        if self.r == 2:
            tally: dict[int, int] = {}
            adj = self.inst.adjacency()
            for s in alive:
                for u in adj[s]:
                    if not self.forbidden[u]:
                        tally[u] = tally.get(u, 0) + 1
            for u in sorted(tally):
                if tally[u] == len(alive):
                    hits.append((u, ()))
            return hits

        # r >= 3: group candidate edges by (candidate, witness signature),
        # looking only at edges incident to the forced set.
        per_candidate: dict[int, dict[tuple[int, ...], dict[int, int]]] = {}
        alive_set = set(alive)
        incident = self.inst.incident_edges()
        edge_ids = sorted({ei for s in alive for ei in incident[s]})
        for ei in edge_ids:
            e = self.inst.edges[ei]
            if any(self.forbidden[v] for v in e):
                continue
            in_forced = [v for v in e if v in alive_set]
            if len(in_forced) != 1:
                continue
            s = in_forced[0]
            rest = [v for v in e if v != s]
            for u in rest:
                wit_blocks = tuple(
                    sorted(self.inst.block_of(w) for w in rest if w != u)
                )
                if len(set(wit_blocks)) != self.r - 2:
                    continue
                table = per_candidate.setdefault(u, {}).setdefault(wit_blocks, {})
                table[s] = table.get(s, 0) + 1
        for u in sorted(per_candidate):
            if self.forbidden[u]:
                continue
            for wit_blocks in sorted(per_candidate[u]):
                table = per_candidate[u][wit_blocks]
                need = prod(self.surv_count[b] for b in wit_blocks)
                if need == 0:
                    continue
                if all(table.get(s, 0) == need for s in alive):
                    hits.append((u, wit_blocks))
                    break
        return hits

    def _check_forced_join(
        self, v: int, forced: tuple[int, ...], witnesses: tuple[int, ...]
    ) -> bool:
        """Re-verify v is joined to every still-surviving forced vertex."""
        alive = [s for s in forced if not self.forbidden[s]]
        if not alive:
            return False
        edge_set = self._edges_as_set()
        if self.r == 2:
            return all(tuple(sorted((v, s))) in edge_set for s in alive)
        wit_survivors = [self._survivors(b) for b in witnesses]
        if any(not w for w in wit_survivors):
            return False
        for s in alive:
            for combo in itertools.product(*wit_survivors):
                if len({v, s, *combo}) != self.r:
                    return False
                if tuple(sorted((v, s, *combo))) not in edge_set:
                    return False
        return True


# -- certification ---------------------------------------------------------------


def propagate_certificate(instance: PartitionedInstance) -> Certificate | None:
    """Run the forbidden/forced fixpoint; a Certificate proves there is no
    independent transversal, None means the propagation is inconclusive."""
    prop = _Propagation(instance, record=True)
    while True:
        emptied = prop.run_basic()
        if emptied is not None:
            return Certificate(steps=tuple(prop.steps), conclusion=emptied)
        if not prop.run_join_phase():
            return None
        if prop.emptied is not None:
            return Certificate(steps=tuple(prop.steps), conclusion=prop.emptied)


def check_certificate(instance: PartitionedInstance, cert: Certificate) -> bool:
    """Replay a certificate step by step without any search.

    Structurally malformed references raise :class:`CertificateError`;
    logically unjustified steps make the replay return False.
    """
    n = instance.num_vertices
    num_blocks = instance.num_blocks
    edge_set = set(instance.edges)
    forbidden = [False] * n
    last_forced: dict[int, tuple[int, ...]] = {}

    def survivors(b: int) -> tuple[int, ...]:
        return tuple(v for v in instance.blocks[b].members if not forbidden[v])

    def check_block(b: int) -> None:
        if not isinstance(b, int) or not 0 <= b < num_blocks:
            raise CertificateError(f"unknown block id {b!r}")

    def check_vertex(v: int) -> None:
        if not isinstance(v, int) or not 0 <= v < n:
            raise CertificateError(f"unknown vertex id {v!r}")

    for idx, step in enumerate(cert.steps):
        if isinstance(step, ForcedSetStep):
            check_block(step.block)
            if tuple(step.survivors) != survivors(step.block):
                return False
            last_forced[step.block] = tuple(step.survivors)
        elif isinstance(step, ForbiddenStep):
            check_vertex(step.vertex)
            wits = tuple(step.witnesses)
            if len(wits) != instance.r - 1 or len(set(wits)) != len(wits):
                return False
            v = step.vertex
            if forbidden[v]:
                return False
            bv = instance.block_of(v)
            sets = []
            for b in wits:
                check_block(b)
                if b == bv or b not in last_forced:
                    return False
                sets.append(last_forced[b])
            if any(not s for s in sets):
                return False
            for combo in itertools.product(*sets):
                if tuple(sorted((v, *combo))) not in edge_set:
                    return False
            forbidden[v] = True
        elif isinstance(step, JoinForcedStep):
            blocks = tuple(step.blocks)
            if len(blocks) != instance.r or len(set(blocks)) != len(blocks):
                return False
            for b in blocks:
                check_block(b)
            kept = tuple(tuple(k) for k in step.kept)
            if len(kept) != len(blocks):
                return False
            expected_forced: list[int] = []
            for b, part in zip(blocks, kept):
                surv = set(survivors(b))
                if not set(part) <= surv:
                    return False
                if not part:
                    return False
                expected_forced.extend(sorted(surv - set(part)))
            if tuple(sorted(expected_forced)) != tuple(sorted(step.forced)):
                return False
            for combo in itertools.product(*kept):
                if tuple(sorted(combo)) not in edge_set:
                    return False
        elif isinstance(step, ForbiddenViaForcedStep):
            check_vertex(step.vertex)
            ref = step.forced_step
            if not isinstance(ref, int) or not 0 <= ref < idx:
                raise CertificateError(f"forced-step reference {ref!r} out of range")
            forced_step = cert.steps[ref]
            if not isinstance(forced_step, JoinForcedStep):
                raise CertificateError(
                    f"step {ref} referenced as forced set is {type(forced_step).__name__}"
                )
            v = step.vertex
            if forbidden[v]:
                return False
            alive = [s for s in forced_step.forced if not forbidden[s]]
            if not alive:
                return False
            wits = tuple(step.witnesses)
            if len(wits) != instance.r - 2 or len(set(wits)) != len(wits):
                return False
            wit_sets = []
            for b in wits:
                check_block(b)
                surv = survivors(b)
                if not surv:
                    return False
                wit_sets.append(surv)
            # Degenerate tuples (repeating v or s) cannot be edges, so the
            # containment test below rejects them automatically.
            for s in alive:
                for combo in itertools.product(*wit_sets):
                    if len({v, s, *combo}) != instance.r:
                        return False
                    if tuple(sorted((v, s, *combo))) not in edge_set:
                        return False
            forbidden[v] = True
        else:
            raise CertificateError(f"unknown step type {type(step).__name__}")

    check_block(cert.conclusion)
    return len(survivors(cert.conclusion)) == 0


# -- exact search -----------------------------------------------------------------


def find_transversal(
    instance: PartitionedInstance, deterministic: bool = True
) -> TransversalReport:
    """Exact backtracking search pruned by the propagation fixpoint.

    Branches on the block with the fewest surviving candidates (ties to the
    lowest id), vertices in ascending id order.  The search is deterministic
    regardless of the flag; the flag is kept so callers can state the
    requirement explicitly.
    """
    del deterministic
    start = time.perf_counter()
    nodes = 0

    def search(removed: set[int]) -> dict[int, int] | None:
        nonlocal nodes
        nodes += 1
        prop = _Propagation(instance, record=False, removed=removed)
        if prop.run_basic() is not None:
            return None
        surviving = [prop._survivors(b.id) for b in instance.blocks]
        if any(not s for s in surviving):
            return None
        open_blocks = [b for b in range(instance.num_blocks) if len(surviving[b]) > 1]
        if not open_blocks:
            assignment = {b: surviving[b][0] for b in range(instance.num_blocks)}
            if _assignment_independent(instance, assignment):
                return assignment
            return None
        pick = min(open_blocks, key=lambda b: (len(surviving[b]), b))
        for v in surviving[pick]:
            child = set(removed)
            child.update(u for u in instance.blocks[pick].members if u != v)
            result = search(child)
            if result is not None:
                return result
        return None

    assignment = search(set())
    wall = time.perf_counter() - start
    if assignment is None:
        return TransversalReport(
            outcome="none_exhaustive", nodes_explored=nodes, wall_time=wall
        )
    return TransversalReport(
        outcome="found", assignment=assignment, nodes_explored=nodes, wall_time=wall
    )


def _assignment_independent(
    instance: PartitionedInstance, assignment: dict[int, int]
) -> bool:
    image = set(assignment.values())
    if len(image) != instance.num_blocks:
        return False
    return not any(set(e) <= image for e in instance.edges)


def count_transversals(
    instance: PartitionedInstance, cap: int | None = None
) -> TransversalReport:
    """Exhaustively count independent transversals by plain backtracking.

    Pruning is forward checking only (a chosen vertex eliminates its
    neighbors for r=2 and completes partial edges for r >= 3), deliberately
    sharing nothing with the propagation engine so counts are an independent
    oracle.  With ``cap`` the search stops once the count exceeds it.
    """
    start = time.perf_counter()
    nodes = 0
    aborted = False
    count = 0
    num_blocks = instance.num_blocks
    edges = instance.edges
    if instance.r == 2:
        adjacency = instance.adjacency()

    class _Abort(Exception):
        pass

    def recurse(survivors: list[tuple[int, ...]], chosen: dict[int, int]) -> None:
        nonlocal nodes, count
        nodes += 1
        if any(not s for s in survivors):
            return
        if len(chosen) == num_blocks:
            count += 1
            if cap is not None and count > cap:
                raise _Abort()
            return
        pick = min(
            (b for b in range(num_blocks) if b not in chosen),
            key=lambda b: (len(survivors[b]), b),
        )
        for v in survivors[pick]:
            child = list(survivors)
            child[pick] = (v,)
            new_chosen = dict(chosen)
            new_chosen[pick] = v
            if instance.r == 2:
                banned = {u for u in adjacency[v] if instance.block_of(u) != pick}
                ok = True
                for b in range(num_blocks):
                    if b in new_chosen:
                        if b != pick and new_chosen[b] in adjacency[v]:
                            ok = False
                            break
                        continue
                    child[b] = tuple(x for x in child[b] if x not in banned)
                if not ok:
                    continue
            else:
                image = set(new_chosen.values())
                ok = True
                banned_per_block: dict[int, set[int]] = {}
                for e in edges:
                    unchosen = [u for u in e if u not in image]
                    if len(unchosen) == 0:
                        ok = False
                        break
                    if len(unchosen) == 1:
                        u = unchosen[0]
                        bu = instance.block_of(u)
                        if bu not in new_chosen:
                            banned_per_block.setdefault(bu, set()).add(u)
                if not ok:
                    continue
                for b, banned in banned_per_block.items():
                    child[b] = tuple(x for x in child[b] if x not in banned)
            recurse(child, new_chosen)

    survivors = [tuple(b.members) for b in instance.blocks]
    try:
        recurse(survivors, {})
    except _Abort:
        aborted = True
    wall = time.perf_counter() - start
    if aborted:
        return TransversalReport(
            outcome="aborted", cap=cap, nodes_explored=nodes, wall_time=wall
        )
    return TransversalReport(
        outcome="count", count=count, nodes_explored=nodes, wall_time=wall
    )


# -- exponential count guarantee ---------------------------------------------------


def check_ww_bound(instance: PartitionedInstance) -> WWReport:
    """Compare the exact transversal count against the guarantee
    ((r-1) t / r)^n, where t is the thickness and n the number of blocks.

    The hypothesis asks every block to meet at most c_r t^(r-1) |B| stretched
    edges (t|B|/4 for graphs).  A ``bound_violated`` outcome is a genuine
    counterexample to the guarantee and should never occur.
    """
    from .model import _all_block_degrees

    t = thickness(instance)
    r = instance.r
    c_r = threshold_constant(r)
    degrees = _all_block_degrees(instance)
    for blk in instance.blocks:
        if Fraction(degrees[blk.id]) > c_r * t ** (r - 1) * blk.size:
            return WWReport(status="hypothesis_not_met", failing_block=blk.id)
    report = count_transversals(instance)
    bound = Fraction((r - 1) * t, r) ** instance.num_blocks
    assert report.count is not None
    if report.count >= bound:
        return WWReport(status="bound_holds", count=report.count, bound=bound)
    return WWReport(status="bound_violated", count=report.count, bound=bound)
