import numpy as np
import pytest

from helpers import fd_jacobian, random_framework, rel_err
from weakrig import (
    Configuration,
    DegenerateConfigurationError,
    DomainError,
    Framework,
    Graph,
    InputError,
    TripleSet,
    UnsupportedRegimeError,
    check_iwr_via_spanning_tree,
    distance_triple,
    edge_weak_rigidity_matrix,
    full_triple_set,
    incidence,
    is_infinitesimally_rigid,
    is_infinitesimally_weakly_rigid,
    points_span_full_dimension,
    required_rank,
    restrict_triples_to_tree,
    rigidity_function,
    rigidity_matrix,
    spanning_tree,
    trivial_motion_basis,
    weak_rigidity_function,
    weak_rigidity_matrix,
)

RIGHT_TRIANGLE = Framework(
    Graph(3, ((1, 2), (1, 3), (2, 3))),
    Configuration(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])),
)


def random_triple_subset(rng, graph, keep=0.7):
    full = full_triple_set(graph)
    kept = tuple(t for t in full.triples if rng.random() < keep)
    return TripleSet(kept if kept else full.triples[:1])


class TestConfiguration:
    def test_rejects_nonfinite(self):
        with pytest.raises(InputError):
            Configuration(np.array([[0.0, np.inf]]))

    def test_rejects_flat_vector(self):
        with pytest.raises(InputError):
            Configuration(np.arange(4.0))

    def test_stacked_roundtrip(self):
        c = Configuration(np.arange(6.0).reshape(3, 2))
        assert np.array_equal(Configuration.from_stacked(c.stacked(), 2).points, c.points)

    def test_immutable(self):
        c = Configuration(np.zeros((2, 2)))
        with pytest.raises(ValueError):
            c.points[0, 0] = 1.0

    def test_framework_size_mismatch(self):
        with pytest.raises(InputError):
            Framework(Graph(3, ((1, 2),)), Configuration(np.zeros((2, 2))))


class TestTripleSet:
    def test_unordered_legs_rejected(self):
        with pytest.raises(InputError):
            TripleSet(((1, 3, 2),))

    def test_apex_equal_leg_rejected(self):
        with pytest.raises(InputError):
            TripleSet(((1, 1, 2),))

    def test_duplicate_angle_rejected(self):
        with pytest.raises(InputError):
            TripleSet(((1, 2, 3), (1, 2, 3)))

    def test_duplicate_distance_both_orientations_rejected(self):
        with pytest.raises(InputError):
            TripleSet(((2, 1, 1), (1, 2, 2)))

    def test_noncanonical_distance_allowed(self):
        ts = TripleSet(((1, 3, 3),))
        assert ts.triples == ((1, 3, 3),)

    def test_distance_triple_canonical_form(self):
        assert distance_triple(1, 2) == (2, 1, 1)
        assert distance_triple(5, 3) == (5, 3, 3)


class TestRigidityFunction:
    def test_hexagon_side_lengths(self, hexagon_framework):
        assert np.allclose(rigidity_function(hexagon_framework), 4.0, atol=1e-12)

    def test_coincident_points(self):
        fw = Framework(Graph(2, ((1, 2),)),
                       Configuration(np.array([[1.0, 2.0], [1.0, 2.0]])))
        assert rigidity_function(fw) == pytest.approx([0.0])

    def test_three_four_five(self):
        fw = Framework(Graph(2, ((1, 2),)),
                       Configuration(np.array([[0.0, 0.0], [3.0, 4.0]])))
        assert rigidity_function(fw) == pytest.approx([25.0])


class TestWeakRigidityFunction:
    def test_hexagon_angle_component(self, hexagon_framework):
        val = weak_rigidity_function(hexagon_framework, TripleSet(((1, 2, 6),)))
        assert val == pytest.approx([-2.0])

    def test_hexagon_distance_component(self, hexagon_framework):
        val = weak_rigidity_function(hexagon_framework, TripleSet(((2, 1, 1),)))
        assert val == pytest.approx([4.0])

    def test_orthogonal_legs(self):
        val = weak_rigidity_function(RIGHT_TRIANGLE, TripleSet(((1, 2, 3),)))
        assert val == pytest.approx([0.0])

    def test_non_edge_triple_rejected(self):
        fw = Framework(Graph(3, ((1, 2),)), Configuration(np.zeros((3, 2)) + np.arange(3)[:, None]))
        with pytest.raises(InputError):
            weak_rigidity_function(fw, TripleSet(((1, 2, 3),)))

    def test_distance_components_match_rigidity_function(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            fw = random_framework(rng, 6, 2)
            ts = TripleSet(tuple(distance_triple(i, j) for i, j in fw.graph.edges))
            assert np.allclose(weak_rigidity_function(fw, ts), rigidity_function(fw))


class TestRigidityMatrix:
    def test_single_edge_row(self):
        fw = Framework(Graph(2, ((1, 2),)),
                       Configuration(np.array([[0.0, 0.0], [1.0, 0.0]])))
        assert np.array_equal(rigidity_matrix(fw), [[-2.0, 0.0, 2.0, 0.0]])

    def test_hexagon_rank(self, hexagon_framework):
        assert np.linalg.matrix_rank(rigidity_matrix(hexagon_framework)) == 5

    def test_triangle_rank(self):
        assert np.linalg.matrix_rank(rigidity_matrix(RIGHT_TRIANGLE)) == 3

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            fw = random_framework(rng, 5, 2)

            def func(x, g=fw.graph, d=fw.d):
                return rigidity_function(Framework(g, Configuration.from_stacked(x, d)))

            fd = fd_jacobian(func, fw.config.stacked())
            assert rel_err(rigidity_matrix(fw), fd) < 1e-6


class TestWeakRigidityMatrix:
    def test_distance_rows_equal_rigidity_rows(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            fw = random_framework(rng, 6, 3)
            ts = TripleSet(tuple(distance_triple(i, j) for i, j in fw.graph.edges))
            assert np.array_equal(weak_rigidity_matrix(fw, ts), rigidity_matrix(fw))

    def test_hexagon_full_rank(self, hexagon_framework, hexagon_triples):
        rw = weak_rigidity_matrix(hexagon_framework, hexagon_triples)
        assert np.linalg.matrix_rank(rw) == 9

    def test_angle_row_blocks(self):
        row = weak_rigidity_matrix(RIGHT_TRIANGLE, TripleSet(((1, 2, 3),)))[0]
        assert row == pytest.approx([-1.0, -1.0, 0.0, 1.0, 1.0, 0.0])

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(5)
        for _ in range(5):
            fw = random_framework(rng, 6, 2)
            ts = random_triple_subset(rng, fw.graph)

            def func(x, g=fw.graph, d=fw.d, t=ts):
                return weak_rigidity_function(Framework(g, Configuration.from_stacked(x, d)), t)

            fd = fd_jacobian(func, fw.config.stacked())
            assert rel_err(weak_rigidity_matrix(fw, ts), fd) < 1e-6


class TestEdgeMatrix:
    def test_hexagon_rank(self, hexagon_framework, hexagon_triples):
        tree = spanning_tree(hexagon_framework.graph)
        re = edge_weak_rigidity_matrix(hexagon_framework, tree, hexagon_triples)
        assert re.shape == (9, 10)
        assert np.linalg.matrix_rank(re) == 9

    def test_collinear_star_rank_deficient(self, collinear_star):
        tree = spanning_tree(collinear_star.graph)
        re = edge_weak_rigidity_matrix(
            collinear_star, tree, full_triple_set(collinear_star.graph))
        assert np.linalg.matrix_rank(re) < 3

    def test_chain_rule_identity(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            fw = random_framework(rng, int(rng.integers(3, 8)), int(rng.integers(2, 4)))
            tree = spanning_tree(fw.graph)
            ts = random_triple_subset(rng, fw.graph)
            kept = restrict_triples_to_tree(tree, ts)
            re = edge_weak_rigidity_matrix(fw, tree, ts)
            h_bar = np.kron(incidence(tree), np.eye(fw.d))
            rw = weak_rigidity_matrix(fw, kept)
            assert np.max(np.abs(re @ h_bar - rw)) < 1e-12 * max(1.0, np.max(np.abs(rw)))

    def test_non_spanning_tree_rejected(self, hexagon_framework):
        not_spanning = Graph(6, ((1, 2), (2, 3), (3, 4), (4, 5), (5, 6)))
        with pytest.raises(DomainError):
            edge_weak_rigidity_matrix(hexagon_framework, not_spanning,
                                      full_triple_set(hexagon_framework.graph))


class TestTrivialMotionBasis:
    def test_planar_count_and_rotation_direction(self, hexagon_config):
        basis = trivial_motion_basis(hexagon_config)
        assert basis.shape == (12, 3)
        assert np.allclose(basis.T @ basis, np.eye(3), atol=1e-12)
        pts = hexagon_config.points
        rot = np.column_stack([-pts[:, 1], pts[:, 0]]).reshape(-1)
        proj = basis @ (basis.T @ rot)
        assert np.allclose(proj, rot, atol=1e-9)

    def test_annihilated_by_weak_matrix(self, hexagon_framework, hexagon_triples):
        basis = trivial_motion_basis(hexagon_framework.config)
        rw = weak_rigidity_matrix(hexagon_framework, hexagon_triples)
        assert np.max(np.abs(rw @ basis)) < 1e-10 * max(1.0, np.max(np.abs(rw)))

    def test_spatial_count(self):
        rng = np.random.default_rng(8)
        basis = trivial_motion_basis(Configuration(rng.uniform(-1, 1, (5, 3))))
        assert basis.shape == (15, 6)

    def test_coincident_points_degenerate(self):
        with pytest.raises(DegenerateConfigurationError):
            trivial_motion_basis(Configuration(np.ones((4, 2))))

    def test_annihilation_property(self):
        rng = np.random.default_rng(9)
        for _ in range(25):
            d = int(rng.integers(2, 4))
            fw = random_framework(rng, int(rng.integers(d + 1, 8)), d)
            ts = random_triple_subset(rng, fw.graph)
            basis = trivial_motion_basis(fw.config)
            rw = weak_rigidity_matrix(fw, ts)
            assert np.max(np.abs(rw @ basis)) < 1e-10 * max(1.0, np.max(np.abs(rw)))


class TestRankTests:
    def test_triangle_rigid(self):
        assert is_infinitesimally_rigid(RIGHT_TRIANGLE)

    def test_hexagon_not_rigid(self, hexagon_framework):
        assert not is_infinitesimally_rigid(hexagon_framework)

    def test_collinear_points_not_rigid(self):
        pts = np.column_stack([np.arange(4.0), np.zeros(4)])
        fw = Framework(Graph(4, ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))),
                       Configuration(pts))
        assert not is_infinitesimally_rigid(fw)

    def test_too_few_points_rejected(self):
        fw = Framework(Graph(2, ((1, 2),)),
                       Configuration(np.array([[0.0, 0.0], [1.0, 0.0]])))
        with pytest.raises(UnsupportedRegimeError):
            is_infinitesimally_rigid(fw)

    def test_hexagon_weakly_rigid(self, hexagon_framework, hexagon_triples):
        assert is_infinitesimally_weakly_rigid(hexagon_framework, hexagon_triples)

    def test_fourcycle_weakly_rigid_in_3d(self, fourcycle_3d):
        graph, ts = fourcycle_3d
        rng = np.random.default_rng(10)
        for _ in range(5):
            fw = Framework(graph, Configuration(rng.uniform(-1, 1, (4, 3))))
            assert is_infinitesimally_weakly_rigid(fw, ts)
            assert np.linalg.matrix_rank(weak_rigidity_matrix(fw, ts)) == 6

    def test_collinear_star_not_weakly_rigid(self, collinear_star):
        assert not is_infinitesimally_weakly_rigid(
            collinear_star, full_triple_set(collinear_star.graph))

    def test_rigidity_implies_weak_rigidity(self):
        rng = np.random.default_rng(12)
        hits = 0
        for _ in range(20):
            n = int(rng.integers(3, 7))
            complete = Graph(n, tuple((i, j) for i in range(1, n + 1)
                                      for j in range(i + 1, n + 1)))
            fw = random_framework(rng, n, 2, graph=complete)
            if is_infinitesimally_rigid(fw):
                hits += 1
                ts = TripleSet(tuple(distance_triple(i, j) for i, j in fw.graph.edges))
                assert is_infinitesimally_weakly_rigid(fw, ts)
        assert hits > 0

    def test_rank_bound(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            d = int(rng.integers(2, 4))
            fw = random_framework(rng, int(rng.integers(d + 1, 8)), d)
            rw = weak_rigidity_matrix(fw, full_triple_set(fw.graph))
            assert np.linalg.matrix_rank(rw) <= required_rank(fw.n, fw.d)


class TestSpanningTreeCheck:
    def test_hexagon_sufficient(self, hexagon_framework, hexagon_triples):
        tree = spanning_tree(hexagon_framework.graph)
        assert check_iwr_via_spanning_tree(hexagon_framework, tree, hexagon_triples)

    def test_path_3d_insufficient(self, path_3d):
        graph, ts = path_3d
        rng = np.random.default_rng(14)
        fw = Framework(graph, Configuration(rng.uniform(-1, 1, (4, 3))))
        assert not check_iwr_via_spanning_tree(fw, graph, ts)

    def test_fourcycle_trees_inconclusive(self, fourcycle_3d):
        # The sufficient test fails on every spanning tree of the 4-cycle even
        # though the full framework is infinitesimally weakly rigid in R^3.
        graph, ts = fourcycle_3d
        rng = np.random.default_rng(15)
        fw = Framework(graph, Configuration(rng.uniform(-1, 1, (4, 3))))
        assert is_infinitesimally_weakly_rigid(fw, ts)
        from itertools import combinations
        trees = []
        for keep in combinations(graph.edges, 3):
            candidate = Graph(4, keep)
            from weakrig import is_connected
            if is_connected(candidate):
                trees.append(candidate)
        assert len(trees) == 4
        for tree in trees:
            assert not check_iwr_via_spanning_tree(fw, tree, ts)


class TestPointsSpanFullDimension:
    def test_hexagon(self, hexagon_config):
        assert points_span_full_dimension(hexagon_config)

    def test_collinear(self):
        pts = np.column_stack([np.arange(3.0), np.zeros(3)])
        assert not points_span_full_dimension(Configuration(pts))

    def test_simplex(self):
        pts = np.vstack([np.zeros(3), np.eye(3)])
        assert points_span_full_dimension(Configuration(pts))

    def test_too_few_points(self):
        with pytest.raises(UnsupportedRegimeError):
            points_span_full_dimension(Configuration(np.zeros((2, 2))))
