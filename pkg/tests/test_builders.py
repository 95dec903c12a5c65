import math
from fractions import Fraction

import pytest

from transversals import (
    HEAVY,
    LIGHT,
    BuildRecipe,
    BuildSizeError,
    GradeSequence,
    ParameterError,
    SequenceError,
    block_degree,
    bounded_degree_profile,
    build,
    build_bounded_degree,
    build_forest,
    build_hypergraph,
    build_hypergraph_bounded_degree,
    build_local_degree,
    build_star_counterexample,
    hypergraph_bounded_parts,
    hypergraph_bounded_profile,
    is_forest,
    local_degree,
    local_degree_profile,
    max_block_average_degree,
    max_degree,
    pad_blocks,
    predict_size,
    serialize_instance,
    simple_sequence,
    thickness,
)


def seq_of(t, values):
    return GradeSequence.from_values(t, values)


class TestBuildForest:
    def test_two_grades_t3(self):
        inst = build_forest(3, seq_of(3, [0, 3]))
        assert inst.num_blocks == 4
        assert inst.num_vertices == 12
        assert len(inst.edges) == 9
        top = max(inst.blocks, key=lambda b: b.grade)
        assert all(inst.roles[v] == HEAVY for v in top.members)

    def test_three_grades_t2(self):
        inst = build_forest(2, seq_of(2, [0, 1, 2]))
        # block recurrence N_1 = 1, N_{j+1} = 1 + n_{j+1} N_j gives 1, 2, 5
        assert inst.num_blocks == 5
        assert len(inst.edges) == 6

    def test_block_count_recurrence_simple_t6(self):
        inst = build_forest(6, simple_sequence(6))
        counts = [1]
        for n in simple_sequence(6).values[1:]:
            counts.append(1 + n * counts[-1])
        assert counts == [1, 2, 5, 16, 65, 326, 1957]
        assert inst.num_blocks == counts[-1]
        assert inst.num_vertices == counts[-1] * 6

    def test_edge_count_recurrence(self):
        # independent oracle: E_1 = 0, E_{j+1} = n_{j+1} (E_j + (t - n_j))
        t, values = 6, simple_sequence(6).values
        expected = 0
        for j in range(1, len(values)):
            expected = values[j] * (expected + (t - values[j - 1]))
        inst = build_forest(t, simple_sequence(t))
        assert len(inst.edges) == expected == 9786

    def test_structural_properties(self):
        inst = build_forest(6, simple_sequence(6))
        assert is_forest(inst)
        assert thickness(inst) == 6
        adjacency = inst.adjacency()
        for blk in inst.blocks:
            lights = [v for v in blk.members if inst.roles[v] == LIGHT]
            heavies = [v for v in blk.members if inst.roles[v] == HEAVY]
            assert len(heavies) == (0 if blk.grade == 1 else simple_sequence(6).values[blk.grade - 1])
            for v in lights:
                assert len(adjacency[v]) <= 1
        # no intra-block edges
        for u, v in inst.edges:
            assert inst.block_of(u) != inst.block_of(v)

    def test_heavy_degrees_match_grades(self):
        t, seq = 6, simple_sequence(6)
        inst = build_forest(t, seq)
        adjacency = inst.adjacency()
        for blk in inst.blocks:
            if blk.grade == 1:
                continue
            heavies = [v for v in blk.members if inst.roles[v] == HEAVY]
            expected = t - seq.values[blk.grade - 2]
            assert all(len(adjacency[v]) == expected for v in heavies)

    def test_heavy_degree_monotone_in_grade(self):
        t, seq = 6, simple_sequence(6)
        inst = build_forest(t, seq)
        adjacency = inst.adjacency()
        by_grade = {}
        for blk in inst.blocks:
            heavies = [v for v in blk.members if inst.roles[v] == HEAVY]
            if heavies:
                by_grade[blk.grade] = len(adjacency[heavies[0]])
        grades = sorted(by_grade)
        assert all(by_grade[a] >= by_grade[b] for a, b in zip(grades, grades[1:]))

    def test_average_degree_bound(self):
        seq = simple_sequence(6)
        inst = build_forest(6, seq)
        assert max_block_average_degree(inst) == Fraction(5, 2)
        assert max_block_average_degree(inst) <= (Fraction(1, 4) + seq.epsilon) * 6

    def test_rejects_mismatched_or_invalid_sequences(self):
        with pytest.raises(SequenceError):
            build_forest(5, seq_of(3, [0, 3]))
        with pytest.raises(ParameterError):
            build_forest(3, seq_of(3, [0, 2]))  # does not end at t

    def test_deterministic_bytes(self):
        a = build_forest(4, seq_of(4, [0, 2, 4]))
        b = build_forest(4, seq_of(4, [0, 2, 4]))
        assert serialize_instance(a) == serialize_instance(b)


class TestBuildHypergraph:
    def test_r2_matches_forest_edges(self):
        seq = seq_of(4, [0, 2, 4])
        forest = build_forest(4, seq)
        hyper = build_hypergraph(4, 2, sequence_override=[0, 2, 4])
        assert forest.edges == hyper.edges
        assert [b.members for b in forest.blocks] == [b.members for b in hyper.blocks]
        assert forest.roles == hyper.roles

    def test_r3_reference_instance(self):
        inst = build_hypergraph(3, 3, sequence_override=[0, 1, 3])
        assert inst.num_blocks == 19
        assert inst.num_vertices == 57
        assert len(inst.edges) == 66

    def test_r3_every_edge_stretched(self):
        inst = build_hypergraph(3, 3, sequence_override=[0, 1, 3])
        for e in inst.edges:
            assert len({inst.block_of(v) for v in e}) == 3

    def test_r3_per_block_degree_formula(self):
        # grade-(j+1) blocks meet n_{j+1} (t-n_j)^{r-1} + (t-n_{j+1})^{r-1} edges
        t, values = 3, (0, 1, 3)
        inst = build_hypergraph(t, 3, sequence_override=values)
        expected = {1: 9, 2: 13, 3: 12}
        for blk in inst.blocks:
            assert block_degree(inst, blk.id) == expected[blk.grade]
        for j in range(1, len(values)):
            own = values[j] * (t - values[j - 1]) ** 2
            incoming = (t - values[j]) ** 2 if j < len(values) - 1 else 0
            assert expected[j + 1] == own + incoming

    def test_light_vertex_degree_formula(self):
        # a light vertex of an attached grade-j root lies in (t-n_j)^(r-2) edges
        inst = build_hypergraph(3, 3, sequence_override=[0, 1, 3])
        incident = inst.incident_edges()
        top = max(b.grade for b in inst.blocks)
        for blk in inst.blocks:
            if blk.grade == top:
                continue
            lights = [v for v in blk.members if inst.roles[v] == LIGHT]
            expected = (3 - (0, 1, 3)[blk.grade - 1]) ** 1
            got = sorted(len(incident[v]) for v in lights)
            # roots of the top unit are consumed once; all are attached here
            assert got == [expected] * len(lights)

    def test_override_blocks_meet_recorded_budget(self):
        inst = build_hypergraph(6, 2, sequence_override=[0, 2, 4, 6])
        eps = Fraction(inst.meta["epsilon"])
        budget = (Fraction(1, 4) + eps) * 6**2
        for blk in inst.blocks:
            assert block_degree(inst, blk.id) <= budget
        # the implied epsilon is tight: some block attains the budget
        assert any(block_degree(inst, b.id) == budget for b in inst.blocks)

    def test_size_guard(self):
        with pytest.raises(BuildSizeError) as err:
            build_hypergraph(579, 3, epsilon=Fraction(7, 100))
        assert err.value.predicted_blocks > 10**20


class TestBoundedDegreeBuild:
    def test_profile_t1000(self):
        p = bounded_degree_profile(1000, Fraction(1, 20))
        assert p.part_sizes == (854, 293)
        assert p.forced_size == 853
        assert p.grade_values == (147, 322, 405, 462, 511, 562, 627, 737, 1000)
        assert p.max_degree == 854
        assert p.max_degree_bound == 854
        assert max(p.block_degrees) <= (Fraction(1, 4) + Fraction(1, 20)) * 1000**2
        assert p.prediction.blocks == 16015873279513212909001

    def test_alpha_half_degenerates_to_full_join(self):
        p = bounded_degree_profile(40, Fraction(3, 10), alpha=Fraction(1, 2))
        assert p.part_sizes == (20, 20)
        assert p.forced_size == 40
        assert p.max_degree == 40

    def test_alpha_range(self):
        with pytest.raises(ParameterError):
            bounded_degree_profile(100, Fraction(1, 10), alpha=Fraction(1, 4))
        with pytest.raises(ParameterError):
            bounded_degree_profile(100, Fraction(1, 10), alpha=Fraction(1))

    def test_materialized_small_instance(self):
        inst = build_bounded_degree(14, Fraction(3, 10))
        p = bounded_degree_profile(14, Fraction(3, 10))
        assert p.part_sizes == (12, 5)
        assert p.grade_values == (3, 7, 11, 14)
        assert inst.num_blocks == p.prediction.blocks == 2325
        assert len(inst.edges) == p.prediction.edges == 77658
        assert max_degree(inst) == p.max_degree == 12
        assert max_degree(inst) <= -(-854 * 14 // 1000)
        assert not is_forest(inst)  # the bipartite join contains 4-cycles
        assert thickness(inst) == 14
        assert max_block_average_degree(inst) <= (Fraction(1, 4) + Fraction(3, 10)) * 14

    def test_t1000_build_refused_as_too_large(self):
        with pytest.raises(BuildSizeError) as err:
            build_bounded_degree(1000, Fraction(1, 20))
        assert err.value.predicted_blocks == 16015873279513212909001


class TestLocalDegreeBuild:
    def test_profile_t1000(self):
        p = local_degree_profile(1000, Fraction(1, 20))
        assert p.part_sizes == (731, 342)
        assert p.grade_values[1] == 270
        assert 1000 - p.grade_values[1] == 730
        assert p.local_degree == 731
        assert p.max_degree_bound == 731
        # max edges from a grade-2 heavy vertex into one block is t - |B|
        assert 1000 - p.part_sizes[1] == 658

    def test_materialized_small_instance(self):
        inst = build_local_degree(14, Fraction(3, 10))
        p = local_degree_profile(14, Fraction(3, 10))
        assert p.grade_values == (2, 4, 7, 11, 14)
        assert inst.num_blocks == p.prediction.blocks == 9871
        assert local_degree(inst) == p.local_degree
        assert local_degree(inst) <= -(-731 * 14 // 1000)

    def test_t1000_build_refused_as_too_large(self):
        with pytest.raises(BuildSizeError):
            build_local_degree(1000, Fraction(1, 20))


class TestHypergraphBoundedDegree:
    def test_parts_r2_reduction(self):
        # with c_2 = 1/4: m_1 = ceil(11t/12), m_2 = floor(t^2/4 / m_1)
        assert hypergraph_bounded_parts(12, 2) == (11, 3)
        assert hypergraph_bounded_parts(24, 2) == (22, 6)

    def test_parts_r3(self):
        assert hypergraph_bounded_parts(21, 3) == (21, 20, 3)
        with pytest.raises(ParameterError) as err:
            hypergraph_bounded_parts(20, 3)
        assert err.value.minimal_t == 21

    def test_profile_degrees(self):
        p = hypergraph_bounded_profile(21, 3, sequence_override=[0, 3, 21])
        assert p.part_sizes == (21, 20, 3)
        assert p.forced_size == 3 * 21 - 44 == 19
        # minimal-part vertices meet all tuples over the other parts
        assert p.max_degree == 21 * 20
        assert p.max_degree_bound == math.ceil((1 - Fraction(4, 81)) * 441) + 3
        assert p.max_degree <= p.max_degree_bound

    def test_materialized_instance(self):
        inst = build_hypergraph_bounded_degree(21, 3, sequence_override=[0, 3, 21])
        p = hypergraph_bounded_profile(21, 3, sequence_override=[0, 3, 21])
        assert inst.num_blocks == p.prediction.blocks
        assert len(inst.edges) == p.prediction.edges
        assert max_degree(inst) == p.max_degree == 420
        # grade-2 heavy degree is forced_size * t^(r-2)
        incident = inst.incident_edges()
        grade2 = [b for b in inst.blocks if b.grade == 2]
        heavies = [v for b in grade2 for v in b.members if inst.roles[v] == HEAVY]
        assert {len(incident[v]) for v in heavies} == {19 * 21}


class TestStars:
    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_shape(self, k):
        inst = build_star_counterexample(k)
        assert inst.num_blocks == k * k + 1
        assert inst.num_vertices == k * k * (k + 1)
        assert len(inst.edges) == k**3

    def test_block_incidence_equals_size_squared_over_k(self):
        for k in (2, 3, 4, 5):
            inst = build_star_counterexample(k)
            for blk in inst.blocks:
                d = block_degree(inst, blk.id)
                assert d == blk.size**2 // k
                assert d * k == blk.size**2  # exact, no rounding

    def test_k4_reference(self):
        inst = build_star_counterexample(4)
        assert inst.num_blocks == 17
        assert block_degree(inst, 0) == 64

    def test_k2_reference(self):
        inst = build_star_counterexample(2)
        assert inst.num_blocks == 5
        assert inst.num_vertices == 12
        assert len(inst.edges) == 8

    def test_thickness_is_leaf_block_size(self):
        assert thickness(build_star_counterexample(4)) == 4


class TestPadBlocks:
    def test_padding_preserves_metrics(self):
        inst = build_forest(3, seq_of(3, [0, 3]))
        padded = pad_blocks(inst, 10)
        assert padded.num_blocks == 10
        assert all(b.padding for b in padded.blocks[4:])
        assert max_block_average_degree(padded) == max_block_average_degree(inst)
        assert thickness(padded) == 3

    def test_pad_to_current_is_identity(self):
        inst = build_forest(3, seq_of(3, [0, 3]))
        assert pad_blocks(inst, inst.num_blocks) == inst

    def test_pad_below_current_rejected(self):
        inst = build_forest(3, seq_of(3, [0, 3]))
        with pytest.raises(ParameterError):
            pad_blocks(inst, 2)


class TestRecipes:
    def test_forest_recipe_with_simple_sequence(self):
        inst = build(
            BuildRecipe(kind="forest", t=6, sequence_override=simple_sequence(6).values)
        )
        assert inst.num_blocks == 1957

    def test_unknown_kind(self):
        with pytest.raises(ParameterError):
            build(BuildRecipe(kind="mystery", t=3))

    def test_predict_matches_build(self):
        values = (0, 2, 4)
        pred = predict_size(4, 2, values)
        inst = build_forest(4, seq_of(4, list(values)))
        assert (inst.num_blocks, inst.num_vertices, len(inst.edges)) == (
            pred.blocks,
            pred.vertices,
            pred.edges,
        )
