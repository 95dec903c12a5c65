"""Materialize the extremal constructions as concrete partitioned instances.

All builders share one recursion: a unit of grade j+1 is a fresh block with
n_{j+1} heavy and t - n_{j+1} light vertices, where each heavy vertex owns a
private consumable built beforehand (an (r-1)-tuple of grade-j units, or a
join gadget at grade 1 for the degree-bounded variants) and is joined to all
attachment tuples of that consumable.  Ids are assigned depth-first over the
copies with the root block last, so rebuilding with the same recipe is
byte-identical.

The block count multiplies by roughly n_j (r-1) per grade, so full builds
blow up quickly; every builder predicts its size first and refuses builds
beyond ``max_cells`` with the exact totals attached.  The ``*_profile``
functions compute the complete exact numerology (part sizes, degree profile,
per-grade block degrees, predicted sizes) without materializing anything.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import BuildSizeError, ParameterError, SequenceError
from .model import HEAVY, LIGHT, Block, PartitionedInstance
from .sequences import (
    GradeSequence,
    forest_grade_sequence,
    hypergraph_grade_sequence,
    threshold_constant,
    validate_sequence,
    _run_floor_recurrence,
)

# Rational stand-in (16 digits) for the optimal split 1/2 + 1/(2*sqrt(2)),
# which keeps both the join parts and the forced set just below 0.854 t.
DEFAULT_BOUNDED_ALPHA = Fraction("0.8535533905932738")
LOCAL_ALPHA = Fraction(731, 1000)
LOCAL_DEGREE_RATIO = Fraction(731, 1000)

# Refuse to materialize instances beyond this many vertices or edges.
DEFAULT_MAX_CELLS = 5_000_000


@dataclass(frozen=True)
class BuildRecipe:
    """Flag-level description of a build, used by the CLI."""

    kind: str  # forest | bounded_degree | local_degree | hypergraph |
    #            hypergraph_bounded_degree | stars
    t: int | None = None
    r: int = 2
    epsilon: Fraction | None = None
    alpha: Fraction | None = None
    k_stars: int | None = None
    sequence_override: tuple[int, ...] | None = None


@dataclass(frozen=True)
class SizePrediction:
    blocks: int
    vertices: int
    edges: int


@dataclass(frozen=True)
class DegreeBoundedProfile:
    """Exact numerology of a degree-bounded build, independent of its size.

    For the pair variants (r=2) ``grade_values`` starts at the effective
    first value t - forced_size, so the grade-2 heavy degree equals
    t - grade_values[0]; it is not a plain grade sequence (those start at 0).
    """

    t: int
    r: int
    epsilon: Fraction
    alpha: Fraction | None
    part_sizes: tuple[int, ...]
    forced_size: int
    grade_values: tuple[int, ...]
    max_degree: int
    max_degree_bound: int
    local_degree: int | None
    block_degrees: tuple[int, ...]
    prediction: SizePrediction


# -- accumulator --------------------------------------------------------------


class _Accum:
    """Mutable construction state; light vertices precede heavy in a block."""

    def __init__(self, r: int):
        self.r = r
        self.blocks: list[Block] = []
        self.roles: list[str] = []
        self.edges: list[tuple[int, ...]] = []
        self._next = 0

    def add_block(
        self, grade: int | None, light: int, heavy: int, padding: bool = False
    ) -> tuple[tuple[int, ...], tuple[int, ...]]:
        lights = tuple(range(self._next, self._next + light))
        self._next += light
        heavies = tuple(range(self._next, self._next + heavy))
        self._next += heavy
        self.blocks.append(
            Block(
                id=len(self.blocks),
                members=lights + heavies,
                grade=grade,
                padding=padding,
            )
        )
        self.roles.extend([LIGHT] * light + [HEAVY] * heavy)
        return lights, heavies

    def add_edge(self, vertices: tuple[int, ...]) -> None:
        self.edges.append(tuple(sorted(vertices)))

    def finish(self, meta: dict[str, str]) -> PartitionedInstance:
        inst = PartitionedInstance(
            self.r, self.blocks, self.edges, roles=self.roles, meta=meta
        )
        _assert_all_stretched(inst)
        return inst


def _assert_all_stretched(inst: PartitionedInstance) -> None:
    for e in inst.edges:
        blocks = {inst.block_of(v) for v in e}
        if len(blocks) != inst.r:
            raise AssertionError(f"built a non-stretched edge {e}")


# -- shared recursion ---------------------------------------------------------

Consumable = Callable[["_Accum"], Callable[[int], None]]


def _product_attach(acc: _Accum, light_sets: tuple[tuple[int, ...], ...]):
    def attach(v: int) -> None:
        for combo in itertools.product(*light_sets):
            acc.add_edge((v, *combo))

    return attach


def _plain_grade1(t: int, r: int) -> Consumable:
    """(r-1) fresh single-block grade-1 units of t light vertices each."""

    def consumable(acc: _Accum):
        sets = []
        for _ in range(r - 1):
            lights, _ = acc.add_block(1, t, 0)
            sets.append(lights)
        return _product_attach(acc, tuple(sets))

    return consumable


def _join_gadget(t: int, r: int, part_sizes: tuple[int, ...]) -> Consumable:
    """Grade-1 gadget: r blocks carrying a complete r-partite join.

    The join parts are the heavy tails of the blocks; the remaining light
    vertices form the forced set.  Heavy vertices of the consuming grade are
    joined to every forced vertex combined with all tuples over the first
    r - 2 blocks (which have full-size parts, hence no forced vertices).
    """
    for m in part_sizes[: r - 2]:
        if m != t:
            raise ParameterError("all but the last two join parts must have size t")

    def consumable(acc: _Accum):
        parts: list[tuple[int, ...]] = []
        witness_blocks: list[tuple[int, ...]] = []
        forced: list[int] = []
        for i, m in enumerate(part_sizes):
            lights, heavies = acc.add_block(1, t - m, m)
            parts.append(heavies)
            if i < r - 2:
                witness_blocks.append(lights + heavies)
            else:
                forced.extend(lights)
        for combo in itertools.product(*parts):
            acc.add_edge(combo)

        def attach(v: int) -> None:
            for s in forced:
                for xs in itertools.product(*witness_blocks):
                    acc.add_edge((v, s, *xs))

        return attach

    return consumable


def _build_tree(
    acc: _Accum,
    grade: int,
    t: int,
    values: Sequence[int],
    r: int,
    grade1: Consumable,
) -> tuple[int, ...]:
    """Build one unit of the given grade (>= 2); return its root light set."""
    n = values[grade - 1]
    attachers = []
    for _ in range(n):
        if grade == 2:
            attachers.append(grade1(acc))
        else:
            subs = tuple(
                _build_tree(acc, grade - 1, t, values, r, grade1)
                for _ in range(r - 1)
            )
            attachers.append(_product_attach(acc, subs))
    lights, heavies = acc.add_block(grade, t - n, n)
    for heavy, attach in zip(heavies, attachers):
        attach(heavy)
    return lights


# -- size prediction ----------------------------------------------------------


def predict_size(
    t: int,
    r: int,
    values: Sequence[int],
    gadget_parts: tuple[int, ...] | None = None,
) -> SizePrediction:
    """Blocks, vertices and edges of the recursive build, without building it."""
    k = len(values)
    if gadget_parts is None:
        unit_blocks = r - 1  # grade-2 consumable: (r-1) plain grade-1 blocks
        unit_edges = 0
        grade2_heavy_degree = (t - values[0]) ** (r - 1)
    else:
        unit_blocks = r
        unit_edges = math.prod(gadget_parts)
        forced = r * t - sum(gadget_parts)
        grade2_heavy_degree = forced * t ** (r - 2)

    blocks = unit_blocks
    edges = unit_edges
    for j in range(1, k):
        n = values[j]
        if j == 1:
            blocks = 1 + n * blocks
            edges = n * (edges + grade2_heavy_degree)
        else:
            edges = n * ((r - 1) * edges + (t - values[j - 1]) ** (r - 1))
            blocks = 1 + n * (r - 1) * blocks
    return SizePrediction(blocks=blocks, vertices=blocks * t, edges=edges)


def _check_budget(pred: SizePrediction, max_cells: int | None, what: str) -> None:
    if max_cells is None:
        return
    if pred.vertices > max_cells or pred.edges > max_cells:
        raise BuildSizeError(
            f"{what} would materialize {pred.blocks} blocks, {pred.vertices} "
            f"vertices and {pred.edges} edges, beyond the budget of "
            f"{max_cells}; the construction grows multiplicatively per grade",
            predicted_blocks=pred.blocks,
            predicted_vertices=pred.vertices,
        )


# -- plain builders -----------------------------------------------------------


def build_forest(
    t: int, seq: GradeSequence, max_cells: int | None = DEFAULT_MAX_CELLS
) -> PartitionedInstance:
    """The recursive forest: grade-1 blocks are independent sets of size t,
    each higher heavy vertex is fully joined to the light set of a private
    lower unit.  Light vertices have degree at most 1 and the result is
    always a forest."""
    if seq.t != t:
        raise SequenceError(f"sequence was generated for t={seq.t}, not t={t}")
    violations = validate_sequence(seq)
    if violations:
        raise SequenceError(f"invalid sequence: {violations}")
    inst = _build_recursive(
        t,
        2,
        seq.values,
        _plain_grade1(t, 2),
        None,
        max_cells,
        meta={
            "builder": "forest",
            "t": str(t),
            "epsilon": str(seq.epsilon),
            "sequence": _seq_str(seq.values),
        },
    )
    return inst


def build_hypergraph(
    t: int,
    r: int,
    epsilon: Fraction | None = None,
    sequence_override: Sequence[int] | None = None,
    max_cells: int | None = DEFAULT_MAX_CELLS,
) -> PartitionedInstance:
    """The r-uniform extension: each heavy vertex owns a private (r-1)-tuple
    of lower units and is joined to all light tuples across them.

    With ``sequence_override`` the values are only checked structurally and
    the implied epsilon (smallest making every per-grade block degree fit
    (c_r + eps) t^r) is recorded in the metadata.
    """
    if sequence_override is not None:
        values = tuple(sequence_override)
        _check_override(t, values)
        eps_implied = _implied_hypergraph_epsilon(t, r, values)
        meta_eps = str(eps_implied)
        seq_source = "override"
    else:
        if epsilon is None:
            raise ParameterError("epsilon is required unless a sequence is given")
        seq = hypergraph_grade_sequence(t, r, Fraction(epsilon))
        values = seq.values
        _assert_grade_degree_bounds(t, r, values, Fraction(epsilon))
        meta_eps = str(seq.epsilon)
        seq_source = "generated"
    inst = _build_recursive(
        t,
        r,
        values,
        _plain_grade1(t, r),
        None,
        max_cells,
        meta={
            "builder": "hypergraph",
            "t": str(t),
            "r": str(r),
            "epsilon": meta_eps,
            "sequence": _seq_str(values),
            "sequence_source": seq_source,
        },
    )
    pred = predict_size(t, r, values)
    if pred.blocks > ((r - 1) * t) ** len(values):
        raise AssertionError("block count exceeded ((r-1) t)^k")
    return inst


def _check_override(t: int, values: tuple[int, ...]) -> None:
    if len(values) < 2 or values[0] != 0 or values[-1] != t:
        raise SequenceError(f"override must run from 0 to t={t}, got {values}")
    if any(values[i + 1] <= values[i] for i in range(len(values) - 1)):
        raise SequenceError(f"override must be strictly increasing, got {values}")


def _implied_hypergraph_epsilon(t: int, r: int, values: tuple[int, ...]) -> Fraction:
    c_r = threshold_constant(r)
    worst = max(
        Fraction(
            values[j + 1] * (t - values[j]) ** (r - 1)
            + (t - values[j + 1]) ** (r - 1),
            t**r,
        )
        for j in range(len(values) - 1)
    )
    return max(worst - c_r, Fraction(0))


def _assert_grade_degree_bounds(
    t: int, r: int, values: tuple[int, ...], epsilon: Fraction
) -> None:
    c_r = threshold_constant(r)
    budget = (c_r + epsilon) * t**r
    for j in range(len(values) - 1):
        lhs = values[j + 1] * (t - values[j]) ** (r - 1) + (t - values[j + 1]) ** (
            r - 1
        )
        if lhs > budget:
            raise AssertionError(
                f"grade {j + 2} block degree {lhs} exceeds (c_r+eps)t^r = {budget}"
            )


def _build_recursive(
    t: int,
    r: int,
    values: Sequence[int],
    grade1: Consumable,
    gadget_parts: tuple[int, ...] | None,
    max_cells: int | None,
    meta: dict[str, str],
) -> PartitionedInstance:
    pred = predict_size(t, r, values, gadget_parts)
    _check_budget(pred, max_cells, meta["builder"])
    acc = _Accum(r)
    _build_tree(acc, len(values), t, values, r, grade1)
    inst = acc.finish(meta)
    if inst.num_blocks != pred.blocks or len(inst.edges) != pred.edges:
        raise AssertionError(
            f"size prediction mismatch: predicted {pred}, "
            f"built {inst.num_blocks} blocks / {len(inst.edges)} edges"
        )
    return inst


def _seq_str(values: Sequence[int]) -> str:
    return ",".join(str(v) for v in values)


# -- degree-bounded profiles and builders (r = 2) ------------------------------


def bounded_degree_profile(
    t: int,
    epsilon: Fraction,
    alpha: Fraction | None = None,
) -> DegreeBoundedProfile:
    """Exact numerology of the maximum-degree-bounded graph build.

    The grade-1 gadget is a complete bipartite join between A and B inside a
    pair of blocks, |A| = ceil(alpha t), |B| = ceil(t / (4 alpha)); the
    forced set has size 2t - |A| - |B| and the grade recurrence continues
    from the effective value |A| + |B| - t.
    """
    alpha = Fraction(alpha) if alpha is not None else DEFAULT_BOUNDED_ALPHA
    if not Fraction(1, 2) <= alpha < 1:
        raise ParameterError(f"alpha must lie in [1/2, 1), got {alpha}")
    epsilon = Fraction(epsilon)
    a_size = math.ceil(alpha * t)
    b_size = math.ceil(t / (4 * alpha))
    # Degrees are governed by max(alpha, 2 - alpha - 1/(4 alpha)); the two
    # agree at the optimal alpha = 1/2 + 1/(2 sqrt 2), just below 0.854.
    ratio = max(alpha, 2 - alpha - 1 / (4 * alpha))
    return _pair_profile(
        t,
        epsilon,
        alpha,
        a_size,
        b_size,
        n2=None,
        bound=math.ceil(ratio * t),
        bound_is_local=False,
    )


def local_degree_profile(t: int, epsilon: Fraction) -> DegreeBoundedProfile:
    """Numerology of the local-degree-bounded build (alpha fixed at 0.731,
    grade-2 size set directly to ceil((2 - alpha - 1/(4 alpha))^-1 t/4))."""
    epsilon = Fraction(epsilon)
    alpha = LOCAL_ALPHA
    a_size = math.ceil(alpha * t)
    b_size = math.ceil(t / (4 * alpha))
    n2 = math.ceil(1 / (2 - alpha - 1 / (4 * alpha)) * Fraction(t, 4))
    return _pair_profile(
        t,
        epsilon,
        alpha,
        a_size,
        b_size,
        n2=n2,
        bound=math.ceil(LOCAL_DEGREE_RATIO * t),
        bound_is_local=True,
    )


def _pair_profile(
    t: int,
    epsilon: Fraction,
    alpha: Fraction,
    a_size: int,
    b_size: int,
    n2: int | None,
    bound: int,
    bound_is_local: bool,
) -> DegreeBoundedProfile:
    if a_size >= t or b_size >= t or a_size < 1 or b_size < 1:
        raise ParameterError(
            f"join parts |A|={a_size}, |B|={b_size} must be strictly between 0 and t={t}"
        )
    forced = 2 * t - a_size - b_size
    start = a_size + b_size - t
    if start < 0:
        raise ParameterError(
            f"effective first value {start} is negative; t={t} is too small"
        )
    delta = epsilon / 2
    if delta * t <= 2:
        raise ParameterError(
            f"t={t} too small for epsilon={epsilon} (need epsilon*t/2 > 2)",
            minimal_t=math.floor(Fraction(4) / epsilon) + 1,
        )
    if n2 is None:
        values = tuple(_run_floor_recurrence(t, delta, start=start))
    else:
        if n2 <= start:
            raise ParameterError(f"grade-2 size {n2} must exceed the start {start}")
        values = (start,) + tuple(_run_floor_recurrence(t, delta, start=n2))

    # Per-block degrees: the gadget pair first, then grades 2..k.
    degrees = [
        a_size * b_size + (t - a_size),
        a_size * b_size + (t - b_size),
    ]
    for j in range(1, len(values)):
        incoming = t - values[j] if j < len(values) - 1 else 0
        degrees.append(values[j] * (t - values[j - 1]) + incoming)
    budget = (Fraction(1, 4) + epsilon) * t * t
    for i, d in enumerate(degrees):
        if d > budget:
            raise ParameterError(
                f"block degree {d} (entry {i}) exceeds (1/4+eps)t^2 = {budget}; "
                f"epsilon={epsilon} is too small for this geometry"
            )

    max_deg = max(a_size, b_size, forced)
    local = max(a_size, b_size, t - a_size, t - b_size, t - values[1])
    checked = local if bound_is_local else max_deg
    if checked > bound:
        raise ParameterError(
            f"{'local degree' if bound_is_local else 'maximum degree'} {checked} "
            f"exceeds the target bound {bound}"
        )
    pred = predict_size(t, 2, values, gadget_parts=(a_size, b_size))
    return DegreeBoundedProfile(
        t=t,
        r=2,
        epsilon=epsilon,
        alpha=alpha,
        part_sizes=(a_size, b_size),
        forced_size=forced,
        grade_values=values,
        max_degree=max_deg,
        max_degree_bound=bound,
        local_degree=local,
        block_degrees=tuple(degrees),
        prediction=pred,
    )


def build_bounded_degree(
    t: int,
    epsilon: Fraction,
    alpha: Fraction | None = None,
    max_cells: int | None = DEFAULT_MAX_CELLS,
) -> PartitionedInstance:
    """Materialize the maximum-degree-bounded variant and certify it."""
    profile = bounded_degree_profile(t, epsilon, alpha)
    return _build_pair_variant(profile, "bounded_degree", max_cells)


def build_local_degree(
    t: int,
    epsilon: Fraction,
    max_cells: int | None = DEFAULT_MAX_CELLS,
) -> PartitionedInstance:
    """Materialize the local-degree-bounded variant and certify it."""
    profile = local_degree_profile(t, epsilon)
    return _build_pair_variant(profile, "local_degree", max_cells)


def _build_pair_variant(
    profile: DegreeBoundedProfile, name: str, max_cells: int | None
) -> PartitionedInstance:
    from . import solving  # local import; solving depends on model only
    from .model import local_degree as local_degree_metric
    from .model import max_block_average_degree, max_degree

    t = profile.t
    _check_budget(profile.prediction, max_cells, name)
    gadget = _join_gadget(t, 2, profile.part_sizes)
    inst = _build_recursive(
        t,
        2,
        profile.grade_values,
        gadget,
        profile.part_sizes,
        max_cells,
        meta={
            "builder": name,
            "t": str(t),
            "epsilon": str(profile.epsilon),
            "alpha": str(profile.alpha),
            "sequence": _seq_str(profile.grade_values),
        },
    )
    if name == "bounded_degree":
        actual = max_degree(inst)
        if actual != profile.max_degree or actual > profile.max_degree_bound:
            raise AssertionError(
                f"max degree {actual} disagrees with profile "
                f"{profile.max_degree} (bound {profile.max_degree_bound})"
            )
    else:
        actual = local_degree_metric(inst)
        if actual != profile.local_degree or actual > profile.max_degree_bound:
            raise AssertionError(
                f"local degree {actual} disagrees with profile "
                f"{profile.local_degree} (bound {profile.max_degree_bound})"
            )
    mbad = max_block_average_degree(inst)
    if mbad > (Fraction(1, 4) + profile.epsilon) * t:
        raise AssertionError(f"block average degree {mbad} exceeds the bound")
    if solving.propagate_certificate(inst) is None:
        raise AssertionError(f"{name} build was not refuted by propagation")
    return inst


# -- degree-bounded hypergraph -------------------------------------------------


def hypergraph_bounded_parts(t: int, r: int) -> tuple[int, ...]:
    """Join part sizes for the degree-bounded r-uniform gadget.

    All parts have size t except the last two: m_{r-1} = ceil((1 - c_r/3) t)
    and m_r = floor(c_r t^2 / m_{r-1}), so the part product stays at most
    c_r t^r.
    """
    c_r = threshold_constant(r)
    m_second = math.ceil((1 - c_r / 3) * t)
    if m_second >= t:
        raise ParameterError(
            f"t={t} too small to separate the intermediate part (need t >= 3/c_r)",
            minimal_t=math.ceil(3 / c_r),
        )
    m_last = math.floor(c_r * t * t / m_second)
    if m_last < 1:
        raise ParameterError(f"t={t} too small: minimal part would be empty")
    return (t,) * (r - 2) + (m_second, m_last)


def hypergraph_bounded_profile(
    t: int,
    r: int,
    epsilon: Fraction | None = None,
    sequence_override: Sequence[int] | None = None,
) -> DegreeBoundedProfile:
    """Exact numerology of the degree-bounded r-uniform build."""
    parts = hypergraph_bounded_parts(t, r)
    c_r = threshold_constant(r)
    forced = r * t - sum(parts)
    if sequence_override is not None:
        values = tuple(sequence_override)
        _check_override(t, values)
    else:
        if epsilon is None:
            raise ParameterError("epsilon is required unless a sequence is given")
        values = hypergraph_grade_sequence(t, r, Fraction(epsilon)).values

    # Vertex degrees: join parts, forced vertices, then heavy grades.
    part_degrees = []
    for i in range(r):
        d = math.prod(parts[:i] + parts[i + 1 :])
        if i < r - 2:
            d += forced * t ** (r - 3)
        part_degrees.append(d)
    grade2_heavy = forced * t ** (r - 2)
    tail = [
        (t - values[j - 1]) ** (r - 1) for j in range(2, len(values))
    ]
    max_deg = max(part_degrees + [grade2_heavy] + tail + [t ** (r - 2)])
    bound = math.ceil((1 - c_r / 3) * t ** (r - 1)) + r

    # Stretched-edge counts per block: gadget blocks then grades 2..k.
    prod_all = math.prod(parts)
    degrees = []
    for i in range(r):
        if i < r - 2:
            degrees.append(prod_all + forced * t ** (r - 2))
        else:
            degrees.append(prod_all + (t - parts[i]) * t ** (r - 2))
    for j in range(1, len(values)):
        incoming = (t - values[j]) ** (r - 1) if j < len(values) - 1 else 0
        own = grade2_heavy if j == 1 else (t - values[j - 1]) ** (r - 1)
        degrees.append(values[j] * own + incoming)

    if sequence_override is not None:
        eps = max(Fraction(max(degrees), t**r) - c_r, Fraction(0))
    else:
        eps = Fraction(epsilon)
        budget = (c_r + eps) * t**r
        if max(degrees) > budget:
            raise ParameterError(
                f"block degree {max(degrees)} exceeds (c_r+eps)t^r = {budget}"
            )

    if max_deg > bound:
        raise ParameterError(
            f"maximum degree {max_deg} exceeds the target bound {bound}"
        )
    pred = predict_size(t, r, values, gadget_parts=parts)
    return DegreeBoundedProfile(
        t=t,
        r=r,
        epsilon=eps,
        alpha=None,
        part_sizes=parts,
        forced_size=forced,
        grade_values=values,
        max_degree=max_deg,
        max_degree_bound=bound,
        local_degree=None,
        block_degrees=tuple(degrees),
        prediction=pred,
    )


def build_hypergraph_bounded_degree(
    t: int,
    r: int,
    epsilon: Fraction | None = None,
    sequence_override: Sequence[int] | None = None,
    max_cells: int | None = DEFAULT_MAX_CELLS,
) -> PartitionedInstance:
    """Materialize the degree-bounded r-uniform variant.

    Grade-1 units are r-block gadgets carrying a complete r-partite join;
    each grade-2 heavy vertex is joined to every forced vertex of its private
    gadget combined with all tuples over the gadget's full-size blocks.
    """
    profile = hypergraph_bounded_profile(t, r, epsilon, sequence_override)
    from .model import max_degree

    inst = _build_recursive(
        t,
        r,
        profile.grade_values,
        _join_gadget(t, r, profile.part_sizes),
        profile.part_sizes,
        max_cells,
        meta={
            "builder": "hypergraph_bounded_degree",
            "t": str(t),
            "r": str(r),
            "epsilon": str(profile.epsilon),
            "parts": _seq_str(profile.part_sizes),
            "sequence": _seq_str(profile.grade_values),
            "sequence_source": "override" if sequence_override is not None else "generated",
        },
    )
    actual = max_degree(inst)
    if actual != profile.max_degree or actual > profile.max_degree_bound:
        raise AssertionError(
            f"max degree {actual} disagrees with profile {profile.max_degree} "
            f"(bound {profile.max_degree_bound})"
        )
    return inst


# -- stars ---------------------------------------------------------------------


def build_star_counterexample(k: int) -> PartitionedInstance:
    """k^2 disjoint stars with k+1 vertices each: one block holds all the
    centers and each star's leaves form their own block.  Every block meets
    exactly |B|^2 / k edges, yet no independent transversal exists."""
    if k < 1:
        raise ParameterError(f"k must be positive, got {k}")
    acc = _Accum(2)
    _, centers = acc.add_block(None, 0, k * k)
    leaf_blocks = [acc.add_block(None, k, 0)[0] for _ in range(k * k)]
    for center, leaves in zip(centers, leaf_blocks):
        for leaf in leaves:
            acc.add_edge((center, leaf))
    inst = acc.finish({"builder": "stars", "k": str(k)})
    # Incidence check: the center block meets k^3 = (k^2)^2 / k edges and
    # every leaf block meets k = k^2 / k edges.
    assert len(inst.edges) == k**3
    return inst


# -- padding -------------------------------------------------------------------


def pad_blocks(instance: PartitionedInstance, target_n: int) -> PartitionedInstance:
    """Append padding blocks of t isolated light vertices until the instance
    has ``target_n`` blocks.  Metrics and certificates remain valid."""
    current = instance.num_blocks
    if target_n < current:
        raise ParameterError(
            f"target block count {target_n} is below the current count {current}"
        )
    if target_n == current:
        return instance
    t_str = instance.meta.get("t")
    from .model import thickness

    t = int(t_str) if t_str is not None and t_str.isdigit() else thickness(instance)
    if t < 1:
        raise ParameterError("cannot infer a positive block size for padding")
    blocks = list(instance.blocks)
    roles = list(instance.roles)
    nxt = instance.num_vertices
    for b in range(current, target_n):
        members = tuple(range(nxt, nxt + t))
        nxt += t
        blocks.append(Block(id=b, members=members, grade=None, padding=True))
        roles.extend([LIGHT] * t)
    return PartitionedInstance(
        instance.r, blocks, instance.edges, roles=roles, meta=dict(instance.meta)
    )


# -- recipe dispatch -----------------------------------------------------------


def build(recipe: BuildRecipe, max_cells: int | None = DEFAULT_MAX_CELLS) -> PartitionedInstance:
    """Build from a flag-level recipe (the CLI entry point)."""
    kind = recipe.kind
    if kind == "stars":
        if recipe.k_stars is None:
            raise ParameterError("stars need k")
        return build_star_counterexample(recipe.k_stars)
    if recipe.t is None:
        raise ParameterError(f"kind {kind!r} needs t")
    t = recipe.t
    if kind == "forest":
        if recipe.sequence_override is not None:
            seq = GradeSequence.from_values(t, recipe.sequence_override)
        elif recipe.epsilon is not None:
            seq = forest_grade_sequence(t, recipe.epsilon)
        else:
            raise ParameterError("forest needs epsilon or an explicit sequence")
        return build_forest(t, seq, max_cells=max_cells)
    if kind == "bounded_degree":
        if recipe.epsilon is None:
            raise ParameterError("bounded_degree needs epsilon")
        return build_bounded_degree(t, recipe.epsilon, recipe.alpha, max_cells=max_cells)
    if kind == "local_degree":
        if recipe.epsilon is None:
            raise ParameterError("local_degree needs epsilon")
        return build_local_degree(t, recipe.epsilon, max_cells=max_cells)
    if kind == "hypergraph":
        return build_hypergraph(
            t, recipe.r, recipe.epsilon, recipe.sequence_override, max_cells=max_cells
        )
    if kind == "hypergraph_bounded_degree":
        return build_hypergraph_bounded_degree(
            t, recipe.r, recipe.epsilon, recipe.sequence_override, max_cells=max_cells
        )
    raise ParameterError(f"unknown build kind {recipe.kind!r}")
