import json
import math

import pytest

import profile_lab as pl


def test_bidding_tradeoff_endpoint():
    p = pl.bidding_tradeoff(1.0)
    assert p.rho == pytest.approx(math.e, rel=1e-14)
    assert p.chi == pytest.approx(math.e, rel=1e-12)
    assert pl.solve_xi_bidding(0.8) == pytest.approx(1.25577, abs=1e-4)


def test_linear_search_constants():
    assert pl.s_star() == pytest.approx(1.0 + pl.lambert_w0(1.0 / math.e), rel=1e-15)
    assert pl.rho_ls_star() == pytest.approx(4.59112, abs=1e-4)
    assert pl.solve_sK() == pytest.approx(0.5878, abs=1e-4)
    end = pl.linear_tradeoff(pl.s_star())
    assert end.strategy.rho == pytest.approx(end.strategy.chi, abs=1e-4)
    lb = pl.linear_lower_bound(0.5)
    assert lb.rho_ls >= lb.rho_ls_raw or lb.rho_ls == pytest.approx(pl.rho_ls_star())


def test_build_verify_and_simulate_bidding():
    prof = pl.build_profile(0.5)
    report = pl.verify(prof)
    assert report.passed
    assert prof.integral_upto(1.0) == pytest.approx(pl.bidding_tradeoff(0.5).chi, rel=1e-4)
    sim = pl.simulate_bidding(prof, 1.0, 200000, 7)
    assert abs(sim.mean - prof.expected_cost(1.0)) <= 4.0 * sim.stderr
    keys = list(json.loads(sim.to_json()).keys())
    assert keys == ["mean", "stderr", "n", "seed", "target"]
    assert pl.simulate_bidding(prof, 1.0, 50000, 3, threads=1).mean == pl.simulate_bidding(prof, 1.0, 50000, 3).mean


def test_build_and_verify_excursion():
    prof = pl.build_excursion_profile(0.4)
    assert pl.verify_excursion(prof, 1e-4, 1e-5).passed
    assert prof.strategy_cost(1.0) == pytest.approx(1.0 + 2.0 * prof.chi, rel=1e-5)
    sim = pl.simulate_linear(prof, -0.7, 100000, 11)
    assert abs(sim.mean - prof.strategy_cost(-0.7)) <= 4.0 * sim.stderr


def test_domain_errors_raise():
    with pytest.raises(ValueError):
        pl.build_profile(0.0)
    with pytest.raises(pl.ConvergenceError):
        pl.build_profile(0.5, max_iter=3)


def test_dominance_of_inverse_profile():
    ds = pl.DiscreteStrategy([pl.Outcome(0.5, [1.0, 2.0, 8.0]), pl.Outcome(0.5, [0.5, 4.0, 8.0])])
    report = pl.cost_dominance_check(ds, [0.5, 1.0, 3.0, 8.0])
    assert report.holds
    assert pl.aggregate_measure(ds)[8.0] == pytest.approx(1.0)


def test_cli_in_process(tmp_path):
    code, out, _ = pl.run_cli(["tradeoff", "--problem", "bidding", "--s-min", "0.5", "--s-max", "1", "--steps", "2"])
    assert code == 0
    assert out.splitlines()[0].startswith("s,")
    path = tmp_path / "p.json"
    assert pl.run_cli(["profile", "build", "--s", "0.7", "--out", str(path)])[0] == 0
    loaded = pl.load_profile(str(path))
    assert isinstance(loaded, pl.BiddingProfile)
    assert loaded.s == 0.7
    assert pl.run_cli(["tradeoff", "--s-min", "2", "--s-max", "1"])[0] == 2
