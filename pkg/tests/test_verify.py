"""Tests for the verification sweeps."""

from types import SimpleNamespace

import pytest
from pydantic import ValidationError

from stmod.algebra.exactlin import PrimeField
from stmod.algebra.groups import cyclic, direct_product
from stmod.algebra.reps import trivial_module
from stmod.config.settings import Settings
from stmod.errors import HypothesisError
from stmod.harness import verify
from stmod.harness.sampling import random_module
from stmod.harness.trials import trial_rng
from stmod.harness.verify import (
    SearchConfig,
    default_adjunction_subgroup,
    verify_adjunction,
    verify_counterexamples,
    verify_decomposition,
    verify_no_ghosts,
    verify_syzygies,
    verify_tate_fullness,
)
from stmod.io.formats import module_payload
from stmod.io.report import CheckOutcome
from stmod.stable.category import field_for
from stmod.stable.ghosts import is_dual_ghost

KLEIN = direct_product(cyclic(2), cyclic(2))


def _cfg(**overrides):
    values = {"seed": 11, "trials": 6, "dim_bound": 4, "ghost_degree_bound": 2, "max_workers": 2}
    values.update(overrides)
    return SearchConfig(**values)


def _checks(report):
    return {check.name: check for check in report.checks}


def test_search_config_from_settings():
    """Test the per-characteristic dimension bound and None overrides."""
    settings = Settings(_env_file=None)
    cfg = SearchConfig.from_settings(settings, 3, 5, trials=12, dim_bound=None)
    assert cfg.dim_bound == 9
    assert cfg.trials == 12
    assert cfg.seed == 5
    assert SearchConfig.from_settings(settings, 2, 5).dim_bound == 8
    assert "record_timing" not in cfg.payload()


def test_search_config_rejects_negative_seed():
    """Test that seeds are non-negative."""
    with pytest.raises(ValidationError):
        SearchConfig(seed=-1)


def test_no_ghosts_refuses_groups_with_ghosts():
    """Test that C4 needs the explicit override."""
    with pytest.raises(HypothesisError, match="override-unsafe"):
        verify_no_ghosts(cyclic(4), _cfg())


def test_decomposition_needs_cyclic_group():
    """Test that C2×C2 is refused."""
    with pytest.raises(HypothesisError, match="not cyclic"):
        verify_decomposition(KLEIN, _cfg())


def test_fullness_needs_gh_group():
    """Test that C4 is refused."""
    with pytest.raises(HypothesisError, match="not C2 or C3"):
        verify_tate_fullness(cyclic(4), _cfg())


@pytest.mark.slow
@pytest.mark.parametrize("n", [2, 3])
def test_no_ghosts_on_gh_groups(n):
    """Test that sampled ghosts over C2 and C3 are all stably trivial."""
    report = verify_no_ghosts(cyclic(n), _cfg())
    checks = _checks(report)
    assert report.passed
    assert checks["no_ghosts.empirical"].details["violations"] == 0
    assert checks["no_ghosts.structural"].details["decomposes"]


@pytest.mark.slow
def test_no_ghosts_override_finds_violations_over_c4():
    """Test the falsification run: ghosts over C4 are found and agree with the prediction."""
    report = verify_no_ghosts(cyclic(4), _cfg(trials=30), override_unsafe=True)
    checks = _checks(report)
    assert report.passed
    empirical = checks["no_ghosts.empirical"]
    assert empirical.details["violations"] > 0
    assert empirical.witness is not None
    assert not checks["no_ghosts.structural"].details["decomposes"]


@pytest.mark.slow
def test_decomposition_over_c3():
    """Test that random C3-modules are sums of Ω^0 k and Ω^1 k."""
    report = verify_decomposition(cyclic(3), _cfg())
    assert report.passed
    assert _checks(report)["decomposition.sampled"].details["not_decomposable"] == 0


@pytest.mark.slow
def test_decomposition_over_c4_reports_length_two_witness():
    """Test that L2 over C4 is flagged as not a sum of suspensions of k."""
    report = verify_decomposition(cyclic(4), _cfg())
    witness = _checks(report)["decomposition.length_two_witness"]
    assert report.passed
    assert witness.details == {"decomposes": False, "jordan": [2]}


@pytest.mark.slow
def test_counterexamples_are_verified():
    """Test every shipped ghost, its dual and the C3 control."""
    report = verify_counterexamples(_cfg(ghost_degree_bound=1))
    assert report.passed
    names = [check.name for check in report.checks]
    assert "counterexample.cyclic_length2_ghost(4)" in names
    assert "counterexample.induced_ghost(C4 ≤ C8)" in names
    assert "control.cyclic_length2(3)" in names


@pytest.mark.slow
def test_tate_fullness_over_c2():
    """Test the degree-window comparison over C2."""
    report = verify_tate_fullness(cyclic(2), _cfg(fullness_window=1, fullness_samples=1))
    check = _checks(report)["fullness.window"]
    assert report.passed
    assert check.details["mismatches"] == 0
    assert check.details["pairs"] == 3 * 5


@pytest.mark.slow
def test_adjunction_dimensions_agree():
    """Test stable Hom dims against induced modules along ⟨σ²⟩ ≤ C8."""
    report = verify_adjunction(default_adjunction_subgroup(), _cfg(), count=3, degrees=range(-1, 2))
    assert report.passed


@pytest.mark.slow
def test_syzygies_and_reproducible_reports():
    """Test the exact syzygy facts and byte-identical reports for one seed."""
    first = verify_syzygies(_cfg())
    assert first.passed
    assert first.to_json() == verify_syzygies(_cfg()).to_json()


@pytest.mark.slow
def test_sampled_reports_do_not_depend_on_worker_count():
    """Test that the same seed gives the same checks for 1 and 4 workers."""
    one = verify_no_ghosts(cyclic(3), _cfg(max_workers=1))
    four = verify_no_ghosts(cyclic(3), _cfg(max_workers=4))
    assert [c.model_dump() for c in one.checks] == [c.model_dump() for c in four.checks]


def test_trial_errors_carry_a_replayable_witness(monkeypatch):
    """Test that a raising trial fails the sweep with its seed and module."""

    def boom(M, N):
        raise RuntimeError("boom")

    monkeypatch.setattr(verify, "_ghost_candidates", boom)
    report = verify_no_ghosts(cyclic(2), _cfg(trials=2))
    expected = module_payload(random_module(cyclic(2), PrimeField(2), 4, trial_rng(11, 0)))
    assert not report.passed
    for name in ("no_ghosts.structural", "no_ghosts.empirical"):
        witness = _checks(report)[name].witness
        assert witness["seed"] == 11
        assert witness["trial"] == 0
        assert witness["error"] == "RuntimeError: boom"
        assert witness["module"] == expected


def test_decomposition_trial_errors_carry_a_witness(monkeypatch):
    """Test the same witness for the decomposition sweep."""

    def boom(M):
        raise RuntimeError("boom")

    monkeypatch.setattr(verify, "projective_free_core", boom)
    report = verify_decomposition(cyclic(3), _cfg(trials=2))
    check = _checks(report)["decomposition.sampled"]
    assert not report.passed
    assert check.witness["error"] == "RuntimeError: boom"
    assert check.witness["module"]["group"] == "C3"


@pytest.mark.slow
def test_failed_duality_record_carries_the_map(monkeypatch):
    """Test that a record failing only on the dual of the dual map still ships the map."""
    calls = []

    def second_call_fails(f, bound):
        calls.append(f)
        if len(calls) % 2 == 0:
            return SimpleNamespace(is_ghost=False, summary=lambda: {"kind": "non_ghost"})
        return is_dual_ghost(f, bound)

    monkeypatch.setattr(verify, "is_dual_ghost", second_call_fails)
    report = verify_counterexamples(_cfg(ghost_degree_bound=1))
    duality = [check for check in report.checks if check.name.startswith("duality.")]
    assert duality
    for check in duality:
        assert check.outcome == CheckOutcome.FAIL
        assert check.witness["map"]["matrix"]


@pytest.mark.slow
def test_failed_syzygy_records_carry_the_module(monkeypatch):
    """Test that wrong syzygy dimensions are reported with the offending module."""
    monkeypatch.setattr(verify, "omega_k", lambda G, i: trivial_module(G, field_for(G)))
    checks = _checks(verify_syzygies(_cfg()))
    assert checks["syzygy.omega_dim.C2"].witness is None
    failed = checks["syzygy.omega_dim.C3"]
    assert failed.outcome == CheckOutcome.FAIL
    k = trivial_module(cyclic(3), PrimeField(3))
    assert failed.witness == {"module": module_payload(k), "degree": 1}
    growth = checks["syzygy.klein_four_growth"]
    assert growth.outcome == CheckOutcome.FAIL
    assert growth.witness["degree"] == 1
    assert growth.witness["module"]["dim"] == 1
