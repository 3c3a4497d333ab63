"""The cross-check suite itself: it must pass, render deterministically,
and actually catch a corrupted closed form."""

import pytest

from ramseybias import McConfig, TransmonParams, pe_avg_double, run_validation
from ramseybias.units import ghz

TRANSMON = TransmonParams.from_ghz(0.5, 100.0, 0.46, 0.49)
ETA = ghz(0.1)
MC = McConfig(20000, 42)


@pytest.fixture(scope="module")
def report():
    return run_validation(TRANSMON, ETA, MC, mc_draws=3)


def test_all_checks_pass(report):
    failed = [c.name for c in report.checks if not c.passed]
    assert failed == []
    assert report.all_passed


def test_expected_checks_present(report):
    names = {c.name for c in report.checks}
    assert {"closed_vs_composed_double", "closed_vs_composed_triple",
            "train_norm_preservation", "moment_dawson_vs_quadrature",
            "double_avg_vs_monte_carlo", "triple_avg_vs_monte_carlo_resonant",
            "triple_closed_vs_numeric_resonant", "dispersive_phase_vs_exact",
            "double_avg_probability_range", "mc_determinism"} <= names


def test_render_is_deterministic(report):
    again = run_validation(TRANSMON, ETA, MC, mc_draws=3)
    assert report.render() == again.render()
    assert "overall = pass" in report.render()


def test_underpowered_sampling_still_passes():
    # tiny sample counts widen the Monte Carlo band but stay inside it
    small = run_validation(TRANSMON, ETA, McConfig(100, 7), mc_draws=2)
    mc_checks = [c for c in small.checks if "monte_carlo" in c.name]
    assert all(c.passed for c in mc_checks)


def test_corrupted_closed_form_is_caught():
    # negative control: bias the closed form by 0.02 and the sampled
    # comparison must fail
    corrupted = lambda q_res, q_disp, avg: pe_avg_double(q_res, q_disp, avg) + 0.02
    report = run_validation(TRANSMON, ETA, MC, mc_draws=3,
                            pe_double_fn=corrupted)
    by_name = {c.name: c for c in report.checks}
    assert not by_name["double_avg_vs_monte_carlo"].passed
    assert not report.all_passed
    assert "overall = FAIL" in report.render()
