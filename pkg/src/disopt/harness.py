"""Experiment runner: execute configs over seed lists and write artifacts.

One CSV trace per seed, one JSON bound report per scenario, and a CSV
summary for parameter sweeps.  All outputs are byte-identical across
re-runs of the same config and seed.
"""

from __future__ import annotations

import csv
import itertools
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import engine
from .adversary import max_attack_norm
from .bounds import BoundReport
from .config import ConfigError, ExperimentConfig, parse_config, preset_document
from .objective import suite_subgrad_bound


@dataclass(frozen=True)
class ExperimentArtifacts:
    name: str
    csv_paths: tuple
    report_path: Path | None
    results: tuple  # one RunResult per seed
    report: BoundReport | None

    @property
    def strict_violations(self) -> list:
        """(seed, k) pairs where the projection-error bound failed unsaturated."""
        out = []
        for seed, result in zip(self._seeds, self.results):
            out.extend((seed, k) for k in result.unsaturated_lemma1_violations)
        return out

    @property
    def _seeds(self):
        return [int(p.stem.rsplit("seed", 1)[1]) for p in self.csv_paths]

    @property
    def mean_final_honest_err(self) -> float:
        return float(np.mean([r.final_err_honest for r in self.results]))

    @property
    def max_final_honest_err(self) -> float:
        return float(np.max([r.final_err_honest for r in self.results]))


def _fmt(value) -> str:
    # shortest round-trip decimal form keeps the CSV deterministic
    return repr(float(value))


def run_single(config: ExperimentConfig, seed: int) -> engine.RunResult:
    """One deterministic run of a validated config with one seed."""
    topology = config.build_topology()
    objectives, x_star = config.build_objectives()
    feasible = config.build_feasible_set()
    specs = config.build_specs()
    init = np.asarray(config.init, dtype=float) if config.init is not None else None
    return engine.run(
        specs=specs,
        topology=topology,
        objectives=objectives,
        feasible=feasible,
        alpha=config.alpha,
        iterations=config.iterations,
        x_star=x_star,
        seed=seed,
        explicit_init=init,
        adversary_quantizes=config.adversary_quantizes,
        strict=False,  # strict handling is aggregated at the harness level
    )


def build_bound_report(config: ExperimentConfig, results) -> BoundReport | None:
    """Closed-form report for a scenario; None in exact-communication mode."""
    if config.quantizer_bits is None:
        return None
    objectives, _ = config.build_objectives()
    attack_norm = 0.0
    for agent, policy in config.attack.items():
        attack_norm = max(attack_norm, max_attack_norm(policy, config.p))
    initial_error = max(r.traces[0].err_all for r in results) if results else 0.0
    return BoundReport(
        mu=min(o.mu for o in objectives),
        lipschitz=max(o.lipschitz for o in objectives),
        alpha=config.alpha,
        bits=config.quantizer_bits,
        interval_length=config.max_interval_length,
        subgrad_bound=suite_subgrad_bound(objectives),
        attack_norm=attack_norm,
        initial_error=initial_error,
    )


def write_trace_csv(
    path: Path,
    result: engine.RunResult,
    report: BoundReport | None,
    include_agents: bool = False,
) -> None:
    """Trace rows k = 0..K-1 plus one closing row for the final state."""
    n = result.final_iterates.shape[0]
    header = [
        "k",
        "err_mean_all",
        "err_mean_honest",
        "delta_bar",
        "xi_bar_norm",
        "lemma1_bound",
        "theorem_bound",
        "saturation_count",
    ]
    if include_agents:
        header += [f"err_agent_{i}" for i in range(n)]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for t in result.traces:
            row = [
                str(t.k),
                _fmt(t.err_all),
                _fmt(t.err_honest),
                _fmt(t.delta_bar),
                _fmt(t.xi_bar_norm),
                _fmt(t.lemma1_rhs),
                _fmt(report.per_k_bound(t.k)) if report else "",
                str(t.saturation_count),
            ]
            if include_agents:
                row += [_fmt(e) for e in t.per_agent_err]
            writer.writerow(row)
        final_k = len(result.traces)
        row = [
            str(final_k),
            _fmt(result.final_err_all),
            _fmt(result.final_err_honest),
            "",
            "",
            "",
            _fmt(report.per_k_bound(final_k)) if report else "",
            "",
        ]
        if include_agents:
            row += [
                _fmt(np.linalg.norm(result.final_iterates[i] - result.x_star))
                for i in range(n)
            ]
        writer.writerow(row)


def run_experiment(
    config: ExperimentConfig,
    outdir,
    name: str = "experiment",
    include_agents: bool = False,
) -> ExperimentArtifacts:
    """Run every seed of a scenario and write its CSV/JSON artifacts."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    results = [run_single(config, seed) for seed in config.seeds]
    report = build_bound_report(config, results)

    csv_paths = []
    for seed, result in zip(config.seeds, results):
        path = outdir / f"{name}_seed{seed}.csv"
        write_trace_csv(path, result, report, include_agents=include_agents)
        csv_paths.append(path)

    report_path = None
    if report is not None:
        report_path = outdir / f"{name}_bounds.json"
        payload = report.to_dict()
        payload["seeds"] = list(config.seeds)
        payload["mean_final_honest_err"] = float(
            np.mean([r.final_err_honest for r in results])
        )
        with open(report_path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")

    return ExperimentArtifacts(
        name=name,
        csv_paths=tuple(csv_paths),
        report_path=report_path,
        results=tuple(results),
        report=report,
    )


def run_preset(name: str, outdir, seeds=None, strict: bool = False, include_agents=False):
    config = parse_config(preset_document(name, seeds=seeds, strict=strict))
    return run_experiment(config, outdir, name=name, include_agents=include_agents)


# ---- sweeps ----------------------------------------------------------------

_GRID_KEYS = ("bits", "interval_length", "alpha", "attack_high")


def _apply_point(base: dict, point: dict) -> dict:
    doc = json.loads(json.dumps(base))  # deep copy via round-trip
    if "bits" in point:
        doc.setdefault("quantizer", {})["bits"] = point["bits"]
    if "interval_length" in point:
        doc.setdefault("quantizer", {})["interval_length"] = point["interval_length"]
    if "alpha" in point:
        doc["alpha"] = point["alpha"]
    if "attack_high" in point:
        if "attack" not in doc or "kind" not in doc["attack"]:
            raise ConfigError(
                [("grid.attack_high", "base config has no shared attack policy")]
            )
        lo = doc["attack"].get("range", [0.0, 0.0])[0]
        doc["attack"]["range"] = [lo, point["attack_high"]]
    return doc


def expand_grid(grid_doc: dict) -> list:
    """Validate a sweep document and return (point, config) pairs.

    Every grid point is validated before anything runs; an invalid point
    aborts the whole sweep with its field path.
    """
    if not isinstance(grid_doc, dict) or "base" not in grid_doc:
        raise ConfigError([("base", "sweep document needs a 'base' config or preset name")])
    base = grid_doc["base"]
    if isinstance(base, str):
        base = preset_document(base)
    axes = grid_doc.get("grid", {})
    unknown = [k for k in axes if k not in _GRID_KEYS]
    if unknown:
        raise ConfigError([(f"grid.{k}", "unknown grid axis") for k in unknown])
    extra = [k for k in grid_doc if k not in ("base", "grid")]
    if extra:
        raise ConfigError([(k, "unknown key") for k in extra])

    names = [k for k in _GRID_KEYS if k in axes]
    value_lists = [axes[k] for k in names]
    if any(not isinstance(v, list) or not v for v in value_lists):
        raise ConfigError([("grid", "every axis must be a nonempty list")])
    combos = list(itertools.product(*value_lists)) if names else []
    if not combos:
        raise ConfigError([("grid", "empty grid: provide at least one axis")])

    points = []
    for combo in combos:
        point = dict(zip(names, combo))
        doc = _apply_point(base, point)
        try:
            cfg = parse_config(doc)
        except ConfigError as exc:
            raise ConfigError(
                [(f"grid point {point}: {path}", msg) for path, msg in exc.errors]
            ) from exc
        points.append((point, cfg))
    return points


def sweep(grid_doc: dict, outdir) -> list:
    """Run a validated grid and write one summary row per point."""
    points = expand_grid(grid_doc)
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    names = sorted({k for point, _ in points for k in point})
    rows = []
    for point, cfg in points:
        results = [run_single(cfg, seed) for seed in cfg.seeds]
        report = build_bound_report(cfg, results)
        rows.append(
            {
                **{k: point.get(k, "") for k in names},
                "mean_final_honest_err": float(
                    np.mean([r.final_err_honest for r in results])
                ),
                "max_final_honest_err": float(
                    np.max([r.final_err_honest for r in results])
                ),
                "neighborhood": report.neighborhood if report else "",
            }
        )

    path = outdir / "sweep_summary.csv"
    header = names + ["mean_final_honest_err", "max_final_honest_err", "neighborhood"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [_fmt(row[c]) if isinstance(row[c], float) else str(row[c]) for c in header]
            )
    return rows
