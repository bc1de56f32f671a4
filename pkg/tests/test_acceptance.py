"""Acceptance gate: one test per release criterion.

Each test prints a single PASS/FAIL line outside pytest's capture so the
run log shows the verdict for every criterion even when the test passes.
"""

import time

import numpy as np
import pytest

from disopt.bounds import (
    admissible_step_window,
    constants,
    lemma1_bound,
    neighborhood_size,
    quantizer_admissible,
    recursion_bound,
    subgradient_admissible,
)
from disopt.config import parse_config, preset_config
from disopt.engine import mean_recursion_residual
from disopt.harness import build_bound_report, run_experiment, run_single
from disopt.quantizer import UniformQuantizer


def _report(capsys, num: int, passed: bool, detail: str) -> None:
    verdict = "PASS" if passed else "FAIL"
    with capsys.disabled():
        print(f"[criterion {num}] {verdict}: {detail}", flush=True)


def test_criterion_1_quantizer_error_bound(capsys):
    """Random in-range sweep never exceeds l / 2**(b+1)."""
    rng = np.random.default_rng(0)
    start = time.perf_counter()
    violations = 0
    worst_margin = np.inf
    for bits in range(1, 9):
        for length in (0.5, 1.0):
            q = UniformQuantizer(bits=bits, interval_length=length)
            x = rng.uniform(-length / 2, length / 2, 100_000)
            err = np.abs(q.quantization_error(x))
            bound = length / 2 ** (bits + 1)
            violations += int(np.count_nonzero(err > bound))
            worst_margin = min(worst_margin, bound - float(np.max(err)))
    elapsed = time.perf_counter() - start
    passed = violations == 0 and elapsed < 1.0
    _report(
        capsys,
        1,
        passed,
        f"{violations} violations over 16x100000 samples, "
        f"slack >= {worst_margin:.3e}, {elapsed:.2f}s",
    )
    assert violations == 0
    assert elapsed < 1.0


def test_criterion_2_exact_mode_contraction(capsys):
    """With exact communication the mean error follows 0.3**k exactly."""
    start = time.perf_counter()
    cfg = parse_config(
        {
            "n": 10,
            "p": 1,
            "topology": {"type": "complete"},
            "roles": ["honest"] * 10,
            "objective": {"name": "quadratic", "box": {"lo": -1.0, "hi": 1.0}},
            "quantizer": None,
            "alpha": 0.7,
            "iterations": 30,
            "seeds": [1],
        }
    )
    result = run_single(cfg, 1)
    e0 = result.traces[0].err_all
    errors = [t.err_all for t in result.traces] + [result.final_err_all]
    deviations = [abs(errors[k] - 0.3**k * e0) for k in range(31)]
    # precondition of the closed form: no projection residual anywhere
    assert all(t.xi_bar_norm == 0.0 for t in result.traces)
    worst = max(deviations)
    elapsed = time.perf_counter() - start
    passed = worst <= 1e-9 and elapsed < 1.0
    _report(capsys, 2, passed, f"max |err(k) - 0.3^k err(0)| = {worst:.3e} for k <= 30, {elapsed:.2f}s")
    assert worst <= 1e-9
    assert elapsed < 1.0


def test_criterion_3_mean_recursion_identity(preset_runs, capsys):
    """The mean-iterate bookkeeping identity is exact on every preset step."""
    worst = 0.0
    steps = 0
    for name, (cfg, results) in preset_runs.items():
        for result in results:
            for t in result.traces:
                worst = max(worst, mean_recursion_residual(t, cfg.alpha))
                steps += 1
    passed = worst <= 1e-10
    _report(capsys, 3, passed, f"max residual {worst:.3e} over {steps} steps")
    assert worst <= 1e-10


def test_criterion_4_projection_error_dominance(preset_runs, capsys):
    """The projection-error bound must hold at every unsaturated step."""
    violations = []
    saturated_excluded = 0
    steps = 0
    for name, (cfg, results) in preset_runs.items():
        for seed, result in zip(cfg.seeds, results):
            for t in result.traces:
                steps += 1
                if t.saturation_count > 0:
                    saturated_excluded += 1
                    continue
                if not t.lemma1_ok:
                    violations.append((name, seed, t.k, t.xi_bar_norm, t.lemma1_rhs))
    passed = not violations
    _report(
        capsys,
        4,
        passed,
        f"{len(violations)} unsaturated violations over {steps} steps "
        f"({saturated_excluded} saturated steps excluded); "
        + (
            "clean"
            if passed
            else "worst "
            + ", ".join(
                f"{n} seed {s} k={k}: {x:.6f} > {r:.6f}" for n, s, k, x, r in violations[:3]
            )
        ),
    )
    assert violations == [], (
        "projection-error bound exceeded at unsaturated steps; the bound "
        "carries no attack-dependent term, yet adversarial projection "
        "clipping enters the measured residual"
    )


def test_criterion_5_ordinal_reproduction(preset_runs, capsys):
    """Seed-averaged final honest error orders fig2b < fig2a < fig2c."""
    means = {}
    for name, (cfg, results) in preset_runs.items():
        means[name] = float(np.mean([r.final_err_honest for r in results]))
    margin_ab = (means["fig2a"] - means["fig2b"]) / means["fig2a"]
    margin_ac = (means["fig2c"] - means["fig2a"]) / means["fig2c"]
    passed = means["fig2b"] < means["fig2a"] < means["fig2c"] and min(margin_ab, margin_ac) >= 0.10
    _report(
        capsys,
        5,
        passed,
        f"fig2b={means['fig2b']:.4f} < fig2a={means['fig2a']:.4f} < "
        f"fig2c={means['fig2c']:.4f}, margins {margin_ab:.1%} and {margin_ac:.1%}",
    )
    assert means["fig2b"] < means["fig2a"] < means["fig2c"]
    assert margin_ab >= 0.10
    assert margin_ac >= 0.10


def test_criterion_6_golden_values(capsys):
    """Closed-form quantities match frozen hand values to 12 digits."""
    rel = 1e-12
    checks = [
        (constants(1.0, 1.0)[0], 1.0),
        (constants(1.0, 1.0)[1], 1.0),
        (constants(0.5, 1.5)[0], 1.0),
        (constants(0.5, 1.5)[1], 0.75),
        (constants(0.5, 2.0)[0], 0.8),
        (constants(0.5, 2.0)[1], 0.8),
        (admissible_step_window(1.0, 1.0).lower, 0.6666666666666666),
        (admissible_step_window(1.0, 1.0).upper, 1.0),
        (admissible_step_window(1.0, 100.0).lower, 0.33666666666666667),
        (admissible_step_window(1.0, 100.0).upper, 0.019801980198019802),
        (admissible_step_window(2.0, 2.0).lower, 0.3333333333333333),
        (admissible_step_window(2.0, 2.0).upper, 0.5),
        (lemma1_bound(0.25, 0.1, 0.7, 10), 0.7170062761231591),
        (lemma1_bound(0.015625, 1.0, 0.7, 10), 0.14318912319027588),
        (neighborhood_size(1.0, 1, 0.0, 0.0, 0.0), 1.224744871391589),
        (neighborhood_size(1.0, 5, 0.1, 0.7, 1.0), 1.980061644025674),
        (recursion_bound(2, 10.0, 0.9, 1.0, 0.0, 1, 0.0, 0.0), 2.999999999999999),
        (recursion_bound(0, 2.5, 0.7, 1.0, 1.0, 5, 0.1, 0.5), 3.6140362402412354),
        (recursion_bound(10**6, 1.0, 0.7, 1.0, 1.0, 5, 0.1, 0.5), 1.1140362402412354),
    ]
    bool_checks = [
        (quantizer_admissible(1.0, 1), False),
        (quantizer_admissible(1.0, 2), True),
        (quantizer_admissible(0.5, 1), True),
        (subgradient_admissible(0.5832118435198044, 0.7), True),
        (subgradient_admissible(0.5832118435198045, 0.7), False),
    ]
    worst = max(
        abs(got - want) / max(abs(want), 1e-300) for got, want in checks
    )
    bool_ok = all(got is want for got, want in bool_checks)
    passed = worst <= 1e-12 and bool_ok
    _report(
        capsys,
        6,
        passed,
        f"{len(checks)} numeric goldens (worst rel err {worst:.2e}) "
        f"and {len(bool_checks)} threshold flags",
    )
    for got, want in checks:
        assert got == pytest.approx(want, rel=rel)
    assert bool_ok


def test_criterion_7_bound_dominance(capsys):
    """Where every hypothesis holds, the recursion bound dominates the run."""
    cfg = parse_config(
        {
            "n": 10,
            "p": 1,
            "topology": {"type": "complete"},
            "roles": ["honest"] * 10,
            "objective": {"name": "quadratic", "box": {"lo": -0.5, "hi": 0.5}},
            "quantizer": {"bits": 3, "interval_length": 0.5, "midpoint": 0.0},
            "alpha": 0.7,
            "iterations": 200,
            "seeds": list(range(20)),
        }
    )
    results = [run_single(cfg, seed) for seed in cfg.seeds]
    report = build_bound_report(cfg, results)
    flags = report.admissible
    assert all(flags.values()), f"hypotheses not satisfied: {flags}"
    worst_excess = -np.inf
    violations = 0
    for result in results:
        errors = [t.err_all for t in result.traces] + [result.final_err_all]
        for k, err in enumerate(errors):
            excess = err - report.per_k_bound(k)
            worst_excess = max(worst_excess, excess)
            if excess > 0:
                violations += 1
    passed = violations == 0
    _report(
        capsys,
        7,
        passed,
        f"{violations} violations across 20 seeds x 201 points, "
        f"max err - bound = {worst_excess:.3e}",
    )
    assert violations == 0


def test_criterion_8_deterministic_artifacts(tmp_path, capsys):
    """Re-running a preset with the same seed yields byte-identical CSVs."""
    cfg = preset_config("fig2a", seeds=[0])
    a = run_experiment(cfg, tmp_path / "a", name="fig2a")
    b = run_experiment(cfg, tmp_path / "b", name="fig2a")
    csv_same = a.csv_paths[0].read_bytes() == b.csv_paths[0].read_bytes()
    json_same = a.report_path.read_bytes() == b.report_path.read_bytes()
    passed = csv_same and json_same
    _report(
        capsys,
        8,
        passed,
        f"csv bytes identical: {csv_same}, report bytes identical: {json_same}",
    )
    assert csv_same and json_same
