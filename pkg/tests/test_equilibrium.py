import numpy as np
import pytest

from netgame import (
    BudgetSpec,
    best_response_quality,
    centrality,
    discounted_utilities,
    generate,
    solve_nash,
    solve_nash_iterative,
    symmetric_nash,
    water_fill_seeding,
)
from netgame.equilibrium import CASE_BOUNDARY, CASE_INTERIOR, CASE_SATURATED

from conftest import (
    bounded_argmax,
    draw_costs,
    draw_graph,
    draw_instance,
    draw_params,
    random_seeding,
)


def _assert_water_filled(seeding: np.ndarray, order: np.ndarray) -> None:
    along = seeding[order]
    assert np.all(along >= -1e-12) and np.all(along <= 0.5 + 1e-12)
    assert np.all(np.diff(along) <= 1e-9)
    partial = np.nonzero((along > 1e-12) & (along < 0.5 - 1e-12))[0]
    assert len(partial) <= 1


def test_water_fill_structure(example_params):
    v = centrality(generate("l_star", 15, l=3), example_params)
    seeding, marginal = water_fill_seeding(v, 1.3)
    assert seeding.sum() == pytest.approx(1.3, abs=1e-12)
    assert marginal == 3
    _assert_water_filled(seeding, v.order)
    assert seeding[v.order[2]] == pytest.approx(0.3, abs=1e-12)


def test_water_fill_rejects_out_of_range(example_params):
    v = centrality(generate("balanced", 4), example_params)
    with pytest.raises(ValueError):
        water_fill_seeding(v, -0.5)
    with pytest.raises(ValueError):
        water_fill_seeding(v, 2.5)


def test_best_response_matches_numeric_oracle(rng):
    for _ in range(8):
        n = int(rng.integers(2, 10))
        p = draw_params(rng)
        g = draw_graph(rng, n)
        v = centrality(g, p)
        c_s, c_q = draw_costs(rng)
        K = float(rng.uniform(0.5, c_s * n / 2.0 + c_q))
        q_opp = float(rng.uniform(0.3, 3.0))
        lam = p.quality_weight(n)

        def objective(q):
            spend = (K - c_q * q) / c_s
            seeding, _ = water_fill_seeding(v, min(spend, n / 2.0))
            return float(v.values @ seeding) + lam * (q - q_opp) / (q + q_opp)

        q_lo = max(p.epsilon, (K - c_s * n / 2.0) / c_q)
        _, oracle_val = bounded_argmax(objective, q_lo, K / c_q, coarse=800)
        q_star, seeding, val = best_response_quality(v, p, K, c_s, c_q, q_opp)
        assert val >= oracle_val - 1e-9
        assert val == pytest.approx(objective(q_star), abs=1e-12)
        _assert_water_filled(seeding, v.order)


def test_best_response_spends_whole_budget(rng):
    p = draw_params(rng)
    g = draw_graph(rng, 6)
    v = centrality(g, p)
    q, seeding, _ = best_response_quality(v, p, 2.0, 1.0, 1.0, 1.0)
    assert seeding.sum() + q == pytest.approx(2.0, abs=1e-9)


def test_symmetric_balanced_example(example_params):
    out = symmetric_nash(generate("balanced", 15), example_params, 2.0, 1.0, 1.0)
    assert out.strategy_a.seeding_total == pytest.approx(0.125, abs=1e-12)
    assert out.strategy_a.quality == pytest.approx(1.875, abs=1e-12)
    assert out.k == 1 and out.case_a == CASE_INTERIOR
    assert out.v_tilde_k == pytest.approx(4.0 / 3.0, abs=1e-12)


def test_symmetric_three_star_example(example_params):
    out = symmetric_nash(generate("l_star", 15, l=3), example_params, 2.0, 1.0, 1.0)
    assert out.strategy_a.seeding_total == pytest.approx(17.0 / 16.0, abs=1e-12)
    assert out.strategy_a.quality == pytest.approx(15.0 / 16.0, abs=1e-12)
    s = out.strategy_a.seeding[out.strategy_a.seeding.argsort()[::-1]]
    assert np.allclose(s[:2], 0.5, atol=1e-12)
    assert s[2] == pytest.approx(1.0 / 16.0, abs=1e-12)
    assert np.allclose(s[3:], 0.0, atol=1e-12)
    assert out.k == 3 and out.case_a == CASE_INTERIOR


def test_symmetric_star_example(example_params):
    out = symmetric_nash(generate("star", 15), example_params, 2.0, 1.0, 1.0)
    assert out.strategy_a.seeding_total == pytest.approx(0.5, abs=1e-12)
    assert out.strategy_a.quality == pytest.approx(1.5, abs=1e-12)
    assert out.case_a == CASE_BOUNDARY and out.k == 2
    assert out.v_tilde_k == pytest.approx(5.0 / 3.0, abs=1e-12)


def test_symmetric_matches_general_solver(rng):
    for _ in range(6):
        n = int(rng.integers(2, 10))
        p = draw_params(rng)
        g = draw_graph(rng, n)
        c_s, c_q = draw_costs(rng)
        K = float(rng.uniform(0.5, c_s * n / 2.0 + c_q))
        sym = symmetric_nash(g, p, K, c_s, c_q)
        gen = solve_nash(g, p, BudgetSpec(K, K, c_s, c_q))
        assert gen.strategy_a.quality == pytest.approx(sym.strategy_a.quality, abs=1e-9)
        assert gen.strategy_b.quality == pytest.approx(sym.strategy_a.quality, abs=1e-9)
        assert gen.strategy_a.seeding_total == pytest.approx(
            sym.strategy_a.seeding_total, abs=1e-9
        )


def test_asymmetric_three_star_pinned(example_params):
    # pinned by the best-response iteration; both routes land here exactly
    g = generate("l_star", 15, l=3)
    out = solve_nash(g, example_params, BudgetSpec(2.0, 1.0, 1.0, 1.0))
    assert out.strategy_a.quality == pytest.approx(0.9375, abs=1e-9)
    assert out.strategy_b.quality == pytest.approx(0.9375, abs=1e-9)
    assert out.strategy_a.seeding_total == pytest.approx(1.0625, abs=1e-9)
    assert out.strategy_b.seeding_total == pytest.approx(0.0625, abs=1e-9)


def test_outcome_invariants(rng):
    for _ in range(10):
        g, p, budget = draw_instance(rng)
        n = g.n
        c_s, c_q = budget.c_s, budget.c_q
        out = solve_nash(g, p, budget)
        v = centrality(g, p)
        lam = p.quality_weight(n)
        ratio = c_s / c_q
        q_a, q_b = out.strategy_a.quality, out.strategy_b.quality
        # whole budget spent
        assert out.strategy_a.spend(c_s, c_q) == pytest.approx(budget.K_a, abs=1e-9)
        assert out.strategy_b.spend(c_s, c_q) == pytest.approx(budget.K_b, abs=1e-9)
        # seeding water-filled along the centrality order
        _assert_water_filled(out.strategy_a.seeding, v.order)
        _assert_water_filled(out.strategy_b.seeding, v.order)
        # marginal virtual centralities reproduce the qualities
        den = (out.v_tilde_k + out.v_tilde_l) ** 2
        assert q_a == pytest.approx(2 * lam * ratio * out.v_tilde_l / den, abs=1e-9)
        assert q_b == pytest.approx(2 * lam * ratio * out.v_tilde_k / den, abs=1e-9)
        # fixed-sum utilities
        assert out.utility_a + out.utility_b == pytest.approx(
            n / (1.0 - p.delta), abs=1e-9
        )
        rep = discounted_utilities(
            g, p, q_a, q_b, out.strategy_a.seeding, out.strategy_b.seeding
        )
        assert out.utility_a == pytest.approx(rep.u_a, abs=1e-9)


def test_enumeration_matches_iteration(rng):
    for _ in range(10):
        g, p, budget = draw_instance(rng)
        enum = solve_nash(g, p, budget)
        iter_ = solve_nash_iterative(g, p, budget)
        assert enum.strategy_a.quality == pytest.approx(
            iter_.strategy_a.quality, abs=1e-6
        )
        assert enum.strategy_b.quality == pytest.approx(
            iter_.strategy_b.quality, abs=1e-6
        )
        assert enum.strategy_a.seeding_total == pytest.approx(
            iter_.strategy_a.seeding_total, abs=1e-6
        )


def test_no_profitable_deviation(rng):
    for _ in range(4):
        g, p, budget = draw_instance(rng, n_max=7)
        n = g.n
        c_s, c_q, k_a = budget.c_s, budget.c_q, budget.K_a
        out = solve_nash(g, p, budget)
        v = centrality(g, p)
        lam = p.quality_weight(n)

        def utility_a(s_a, q_a):
            gap = lam * (q_a - out.strategy_b.quality) / (q_a + out.strategy_b.quality)
            return float(v.values @ (s_a - out.strategy_b.seeding)) + gap

        base_val = utility_a(out.strategy_a.seeding, out.strategy_a.quality)
        q_lo = max(p.epsilon, (k_a - c_s * n / 2.0) / c_q)
        for q in np.linspace(q_lo, k_a / c_q, 40):
            seeding, _ = water_fill_seeding(v, min((k_a - c_q * q) / c_s, n / 2.0))
            assert utility_a(seeding, q) <= base_val + 1e-6
        for _ in range(10):
            q = float(rng.uniform(q_lo, k_a / c_q))
            spend = min((k_a - c_q * q) / c_s, n / 2.0)
            assert utility_a(random_seeding(rng, n, spend), q) <= base_val + 1e-6


def test_saturated_case_reached(example_params):
    # budget big enough to fully seed everyone and still buy quality
    out = symmetric_nash(generate("balanced", 4), example_params, 5.0, 1.0, 1.0)
    assert out.case_a == CASE_SATURATED
    assert np.allclose(out.strategy_a.seeding, 0.5, atol=1e-12)
    assert out.strategy_a.quality == pytest.approx(3.0, abs=1e-12)


def test_rejects_budget_below_quality_floor(example_params):
    g = generate("balanced", 4)
    with pytest.raises(ValueError, match="afford"):
        solve_nash(g, example_params, BudgetSpec(1e-9, 1.0, 1.0, 1.0))


def test_budget_spec_validation():
    with pytest.raises(ValueError, match="costs"):
        BudgetSpec(1.0, 1.0, 0.0, 1.0)
    with pytest.raises(ValueError, match="nonnegative"):
        BudgetSpec(-1.0, 1.0, 1.0, 1.0)


def test_outcome_serialization(example_params):
    out = symmetric_nash(generate("star", 5), example_params, 1.0, 1.0, 1.0)
    d = out.to_dict()
    assert d["qualities"]["a"] == d["qualities"]["b"]
    assert len(d["seeding"]["a"]) == 5
    assert d["case"]["a"] in {CASE_INTERIOR, CASE_BOUNDARY, CASE_SATURATED}
    assert d["k"] == out.k and d["l"] == out.l
