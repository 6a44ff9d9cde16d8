from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from distlap.generators import complete_graph, cycle_graph, path_graph, random_connected_graph
from distlap.graphs import (
    DisconnectedGraphError,
    DistanceMatrix,
    Graph,
    GraphParseError,
    GraphValidationError,
    MetricValidationError,
    bfs_apsp,
    encode_graph6,
    find_metric_violations,
    metric_from_graph,
    parse_edge_list,
    parse_graph6,
    parse_metric_csv,
    transmission,
    validate_metric,
)


class TestGraphType:
    def test_rejects_loop(self):
        with pytest.raises(GraphValidationError):
            Graph.from_edges(3, [(1, 1)])

    def test_rejects_out_of_range(self):
        with pytest.raises(GraphValidationError):
            Graph(2, frozenset({(0, 2)}))

    def test_dedup_and_orientation(self):
        g = Graph.from_edges(3, [(1, 0), (0, 1), (1, 2)])
        assert g.edges == frozenset({(0, 1), (1, 2)})

    def test_single_vertex_ok(self):
        assert Graph.from_edges(1, []).n == 1


class TestParseEdgeList:
    def test_basic(self):
        g = parse_edge_list("0 1\n1 2")
        assert g.n == 3
        assert g.edges == frozenset({(0, 1), (1, 2)})

    def test_loop_rejected(self):
        with pytest.raises(GraphValidationError):
            parse_edge_list("0 0")

    def test_explicit_n_allows_disconnected(self):
        g = parse_edge_list("n 4\n0 1")
        assert g.n == 4
        assert not g.is_connected()

    def test_malformed_token_reports_line(self):
        with pytest.raises(GraphParseError) as err:
            parse_edge_list("0 1\n1 x")
        assert err.value.line == 2

    def test_wrong_arity_reports_line(self):
        with pytest.raises(GraphParseError) as err:
            parse_edge_list("0 1 2")
        assert err.value.line == 1

    def test_blank_lines_skipped(self):
        g = parse_edge_list("\n0 1\n\n1 2\n")
        assert g.n == 3


class TestGraph6:
    # decoded by hand from the 6-bit column-major layout
    def test_k2(self):
        assert parse_graph6("A_") == Graph.from_edges(2, [(0, 1)])

    def test_p3(self):
        g = parse_graph6("BW")
        assert g.edges == frozenset({(0, 2), (1, 2)})

    def test_k4(self):
        assert parse_graph6("C~") == complete_graph(4)

    def test_header_stripped(self):
        assert parse_graph6(">>graph6<<A_") == Graph.from_edges(2, [(0, 1)])

    def test_bytes_accepted(self):
        assert parse_graph6(b"C~") == complete_graph(4)

    def test_long_form_rejected(self):
        with pytest.raises(GraphParseError):
            parse_graph6("~??")

    def test_truncated_rejected(self):
        with pytest.raises(GraphParseError):
            parse_graph6("C")

    def test_bad_data_byte_rejected(self):
        with pytest.raises(GraphParseError):
            parse_graph6("B\x05")

    def test_canonical_reencode(self):
        for s in ("A_", "BW", "C~", "DQc"):
            assert encode_graph6(parse_graph6(s)) == s

    @settings(max_examples=200, deadline=None)
    @given(st.data())
    def test_roundtrip_random(self, data):
        n = data.draw(st.integers(min_value=1, max_value=20))
        nbits = n * (n - 1) // 2
        mask = data.draw(st.integers(min_value=0, max_value=(1 << nbits) - 1))
        pairs = list(combinations(range(n), 2))
        g = Graph.from_edges(n, (pairs[i] for i in range(nbits) if (mask >> i) & 1))
        assert parse_graph6(encode_graph6(g)) == g


class TestBfsApsp:
    def test_path3(self):
        d = bfs_apsp(path_graph(3))
        assert d.rows == ((0, 1, 2), (1, 0, 1), (2, 1, 0))

    def test_complete3(self):
        d = bfs_apsp(complete_graph(3))
        assert all(d.rows[u][v] == 1 for u in range(3) for v in range(3) if u != v)

    def test_cycle4(self):
        # hand BFS on the 4-cycle: adjacent 1, opposite 2
        d = bfs_apsp(cycle_graph(4))
        assert d.rows == ((0, 1, 2, 1), (1, 0, 1, 2), (2, 1, 0, 1), (1, 2, 1, 0))

    def test_disconnected_names_representatives(self):
        g = Graph.from_edges(4, [(0, 1), (2, 3)])
        with pytest.raises(DisconnectedGraphError) as err:
            bfs_apsp(g)
        u, v = err.value.representatives
        assert u == 0 and v in (2, 3)

    def test_single_vertex(self):
        assert bfs_apsp(Graph.from_edges(1, [])).rows == ((0,),)


class TestTransmission:
    def test_path3(self):
        assert transmission(bfs_apsp(path_graph(3))) == (3, 2, 3)

    def test_k4(self):
        assert transmission(bfs_apsp(complete_graph(4))) == (3, 3, 3, 3)

    def test_cycle4(self):
        assert transmission(bfs_apsp(cycle_graph(4))) == (4, 4, 4, 4)

    @settings(max_examples=100, deadline=None)
    @given(st.data())
    def test_sum_identity(self, data):
        n = data.draw(st.integers(min_value=2, max_value=8))
        seed = data.draw(st.integers(min_value=0, max_value=10**6))
        g = random_connected_graph(n, 0.5, np.random.default_rng(seed))
        d = bfs_apsp(g)
        t = transmission(d)
        pair_sum = sum(d.rows[u][v] for u in range(n) for v in range(u + 1, n))
        assert sum(t) == 2 * pair_sum


class TestValidateMetric:
    def test_two_point(self):
        space = validate_metric([[0, 1], [1, 0]])
        assert space.n == 2 and not space.from_graph

    def test_triangle_violation_reported(self):
        with pytest.raises(MetricValidationError) as err:
            validate_metric([[0, 1, 3], [1, 0, 1], [3, 1, 0]])
        assert any("triangle violation (0, 2) via 1" in v for v in err.value.violations)

    def test_every_axiom_listed(self):
        violations = find_metric_violations([[1, -1], [2, 0]])
        kinds = "".join(violations)
        assert "diagonal" in kinds and "asymmetry" in kinds and "nonpositive" in kinds

    def test_nonsquare(self):
        with pytest.raises(MetricValidationError):
            validate_metric([[0, 1], [1, 0, 2]])

    def test_graph_metrics_valid(self):
        # shortest-path matrices satisfy every axiom
        rng = np.random.default_rng(7)
        for _ in range(50):
            n = int(rng.integers(2, 8))
            g = random_connected_graph(n, 0.4, rng)
            space = validate_metric(bfs_apsp(g).rows)
            assert space.n == n

    def test_metric_from_graph_flag(self):
        assert metric_from_graph(path_graph(3)).from_graph


class TestMetricCsv:
    def test_integers_stay_exact(self):
        rows = parse_metric_csv("0,1\n1,0")
        assert rows == [[0, 1], [1, 0]] and isinstance(rows[0][1], int)

    def test_floats(self):
        rows = parse_metric_csv("0,1.5\n1.5,0")
        assert rows[0][1] == 1.5

    def test_bad_token(self):
        with pytest.raises(GraphParseError):
            parse_metric_csv("0,x\nx,0")


class TestDistanceMatrixType:
    def test_asymmetry_rejected(self):
        with pytest.raises(ValueError):
            DistanceMatrix(2, ((0, 1), (2, 0)))

    def test_nonzero_diagonal_rejected(self):
        with pytest.raises(ValueError):
            DistanceMatrix(2, ((1, 1), (1, 0)))

    def test_as_array(self):
        arr = bfs_apsp(path_graph(3)).as_array()
        assert arr.dtype == float and arr[0, 2] == 2.0
