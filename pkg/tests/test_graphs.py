import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netgame import KINDS, GraphValidationError, SocialGraph, generate, load_graph, save_graph, validate_graph
from netgame.graphs import require_valid

from conftest import draw_graph


def test_validation_reports_nonzero_diagonal():
    w = np.zeros((3, 3))
    w[0, 0] = 0.5
    w[0, 1] = 0.5
    w[1, 2] = 1.0
    w[2, 0] = 1.0
    v = validate_graph(SocialGraph(3, w))
    assert "nonzero diagonal at 0" in v


def test_validation_reports_row_sum():
    w = np.zeros((3, 3))
    w[0, 1] = 0.9
    w[1, 2] = 1.0
    w[2, 0] = 1.0
    v = validate_graph(SocialGraph(3, w))
    assert "row 0 sum 0.9" in v


def test_validation_reports_negative_weight():
    w = np.zeros((2, 2))
    w[0, 1] = 1.0
    w[1, 0] = -1.0
    v = validate_graph(SocialGraph(2, w))
    assert "negative weight at (1, 0)" in v


def test_validation_rejects_single_agent():
    v = validate_graph(SocialGraph(1, np.zeros((1, 1))))
    assert v == ["n 1 below minimum of 2"]


def test_valid_graph_has_no_violations():
    assert validate_graph(generate("star", 5)) == []


def test_weights_are_read_only():
    g = generate("balanced", 4)
    with pytest.raises(ValueError):
        g.weights[0, 0] = 1.0


def test_shape_mismatch_rejected():
    with pytest.raises(ValueError, match="shape"):
        SocialGraph(3, np.zeros((2, 2)))


@pytest.mark.parametrize("kind", [k for k in KINDS if k != "l_star"])
@pytest.mark.parametrize("n", [2, 3, 7, 15])
def test_generators_produce_valid_graphs(kind, n):
    g = generate(kind, n, seed=0)
    assert g.n == n
    assert validate_graph(g) == []


@pytest.mark.parametrize("n,l", [(3, 2), (7, 3), (15, 3), (15, 14)])
def test_l_star_generator_valid(n, l):
    g = generate("l_star", n, l=l)
    assert validate_graph(g) == []
    # peripherals listen only to hubs, uniformly
    assert np.allclose(g.weights[l:, :l], 1.0 / l)
    assert np.all(g.weights[l:, l:] == 0.0)


def test_l_star_rejects_bad_l():
    for l in (None, 1, 15):
        with pytest.raises(ValueError):
            generate("l_star", 15, l=l)


def test_unknown_kind_rejected():
    with pytest.raises(ValueError, match="unknown graph kind"):
        generate("wheel", 5)


def test_balanced_is_a_cycle():
    g = generate("balanced", 5)
    assert np.array_equal(np.nonzero(g.weights[0])[0], [1])
    assert g.weights.sum(axis=0).tolist() == [1.0] * 5


def test_star_shape():
    g = generate("star", 4)
    assert np.all(g.weights[1:, 0] == 1.0)
    assert np.allclose(g.weights[0, 1:], 1.0 / 3.0)


def test_random_generator_deterministic_in_seed():
    a = generate("random", 9, seed=42, density=0.4)
    b = generate("random", 9, seed=42, density=0.4)
    c = generate("random", 9, seed=43, density=0.4)
    assert np.array_equal(a.weights, b.weights)
    assert not np.array_equal(a.weights, c.weights)


def test_random_generator_survives_sparse_density():
    # density low enough that all-zero rows must get redrawn
    g = generate("random", 6, seed=7, density=0.05)
    assert validate_graph(g) == []


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 12), seed=st.integers(0, 10**6))
def test_json_round_trip(n, seed):
    g = generate("random", n, seed=seed)
    back = SocialGraph.from_json(g.to_json())
    assert back.n == g.n
    assert np.array_equal(back.weights, g.weights)


def test_save_load_round_trip(tmp_path, rng):
    g = draw_graph(rng, 8)
    path = tmp_path / "g.json"
    save_graph(g, str(path))
    back = load_graph(str(path))
    assert np.array_equal(back.weights, g.weights)


def test_load_rejects_invalid_graph(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"n": 2, "edges": [[0, 1, 0.5]]}))
    with pytest.raises(GraphValidationError, match="row 0 sum 0.5"):
        load_graph(str(path))


def test_from_dict_rejects_duplicate_edge():
    with pytest.raises(ValueError, match="duplicate edge"):
        SocialGraph.from_dict({"n": 2, "edges": [[0, 1, 0.5], [0, 1, 0.5]]})


def test_from_dict_rejects_out_of_range():
    with pytest.raises(ValueError, match="out of range"):
        SocialGraph.from_dict({"n": 2, "edges": [[0, 2, 1.0]]})


def test_from_dict_rejects_malformed_entry():
    with pytest.raises(ValueError, match="not \\[i, j, weight\\]"):
        SocialGraph.from_dict({"n": 2, "edges": [[0, 1]]})


def test_from_dict_rejects_missing_keys():
    with pytest.raises(ValueError, match="'n' and 'edges'"):
        SocialGraph.from_dict({"edges": []})


def test_require_valid_message_joins_violations():
    w = np.zeros((2, 2))
    w[0, 0] = 1.0
    w[1, 0] = 0.5
    with pytest.raises(GraphValidationError) as exc:
        require_valid(SocialGraph(2, w))
    msg = str(exc.value)
    assert "nonzero diagonal at 0" in msg and "row 1 sum 0.5" in msg
