"""Named experiments: deterministic sweeps writing tables, figures, manifests.

Each experiment is a pure function of (config, seed) producing a list of
row dicts plus a summary; ``run_experiment`` handles file layout.  Output
files for a run named ``born-sweep`` are ``born_sweep.csv`` (or ``.json``),
``born_sweep.png`` and ``born_sweep_manifest.json`` inside the output
directory.
"""
from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import numpy as np

from .amplitudes import (
    ResourceError,
    path_count,
    path_sum_amplitude,
    setup_amplitude,
    wave_function_of,
)
from .arrays import entropy_drift, great_circle_curve
from .born import FrequencyWindow, born_distance_sq, enumerated_replica_distance_sq
from .config import ConfigError, ExperimentConfig
from .dynamics import Dynamics
from .lattice import Measure, WaveFunction, norm_sq
from .observables import ComplexDetector, apparatus_unitary, build_observable, measure
from .reporting import write_manifest, write_table
from .sampling import (
    random_and_pair,
    random_distributive_triple,
    random_or_pair,
    random_or_triple,
    random_state,
)
from .setups import CompositionError, Filter, Setup, SpacetimePoint, and_compose, or_compose
from .setupdoc import parse_setup, serialize_setup

__all__ = ["EXPERIMENT_NAMES", "run_experiment"]


class _LawTally:
    def __init__(self, law: str):
        self.law = law
        self.trials = 0
        self.value_failures = 0
        self.max_residual = 0.0

    def record(self, ok: bool = True, residual: float = 0.0):
        self.trials += 1
        if not ok:
            self.value_failures += 1
        self.max_residual = max(self.max_residual, residual)

    def row(self) -> dict:
        return {
            "law": self.law,
            "trials": self.trials,
            "value_failures": self.value_failures,
            "max_amplitude_residual": self.max_residual,
        }


def _algebra_check(cfg: ExperimentConfig):
    opts = cfg.algebra_check
    trials = int(opts.get("trials", 200))
    size = int(opts.get("lattice_size", min(cfg.lattice_size, 8)))
    rng = cfg.rng("algebra-check generates random setups")
    if size == cfg.lattice_size:
        d = cfg.build_dynamics()
    else:
        d = Dynamics(size=size, hopping=cfg.hopping, dt=cfg.dt, boundary=cfg.boundary)

    def amp(s: Setup) -> complex:
        return setup_amplitude(s, d)

    tallies = {
        name: _LawTally(name)
        for name in (
            "or_commutative", "or_associative", "and_associative",
            "and_distributes_over_or", "sum_rule", "product_rule",
            "full_holes_is_no_filter", "and_not_commutative_witness",
            "invalid_compositions_rejected",
        )
    }

    for _ in range(trials):
        a1, a2 = random_or_pair(rng, size)
        u12, u21 = or_compose(a1, a2), or_compose(a2, a1)
        tallies["or_commutative"].record(u12 == u21, abs(amp(u12) - amp(u21)))
        tallies["sum_rule"].record(True, abs(amp(u12) - (amp(a1) + amp(a2))))

        x, y, z = random_or_triple(rng, size)
        left = or_compose(or_compose(x, y), z)
        right = or_compose(x, or_compose(y, z))
        tallies["or_associative"].record(left == right, abs(amp(left) - amp(right)))

        a, b = random_and_pair(rng, size)
        ab = and_compose(a, b)
        tallies["product_rule"].record(True, abs(amp(ab) - amp(a) * amp(b)))
        # chain a third leg for associativity of `and`
        c = Setup(b.detector, (), SpacetimePoint(
            int(rng.integers(0, size)), b.detector.time + int(rng.integers(2, 5))))
        abc_left = and_compose(and_compose(a, b), c)
        abc_right = and_compose(a, and_compose(b, c))
        tallies["and_associative"].record(
            abc_left == abc_right, abs(amp(abc_left) - amp(abc_right)))

        a, b1, b2 = random_distributive_triple(rng, size)
        lhs = and_compose(a, or_compose(b1, b2))
        rhs = or_compose(and_compose(a, b1), and_compose(a, b2))
        tallies["and_distributes_over_or"].record(
            lhs == rhs,
            max(abs(amp(lhs) - amp(rhs)),
                abs(amp(lhs) - (amp(and_compose(a, b1)) + amp(and_compose(a, b2))))),
        )

        # a filter totally covered with holes versus no filter at all
        src_site, det_site = int(rng.integers(0, size)), int(rng.integers(0, size))
        t_mid, t_end = int(rng.integers(1, 4)), int(rng.integers(4, 8))
        bare = Setup(SpacetimePoint(src_site, 0), (), SpacetimePoint(det_site, t_end))
        full = Setup(bare.source, (Filter(t_mid, frozenset(range(size))),), bare.detector)
        tallies["full_holes_is_no_filter"].record(True, abs(amp(full) - amp(bare)))

        # ab is allowed here while ba never is (b ends after a starts)
        witness_ok = True
        try:
            and_compose(b, a)
            witness_ok = False
        except CompositionError:
            pass
        tallies["and_not_commutative_witness"].record(witness_ok)

        rejected = True
        try:
            and_compose(a, Setup(SpacetimePoint((a.detector.site + 1) % size,
                                                a.detector.time),
                                 (), SpacetimePoint(0, a.detector.time + 2)))
            rejected = False
        except CompositionError:
            pass
        try:
            or_compose(u12, a1)  # holes of a1 are contained in the union: overlap
            rejected = False
        except CompositionError:
            pass
        tallies["invalid_compositions_rejected"].record(rejected)

    rows = [t.row() for t in tallies.values()]
    header = ["law", "trials", "value_failures", "max_amplitude_residual"]
    summary = {
        "trials": trials,
        "lattice_size": size,
        "all_value_checks_passed": all(t.value_failures == 0 for t in tallies.values()),
        "max_amplitude_residual": max(t.max_residual for t in tallies.values()),
    }
    return header, rows, summary


def _born_sweep(cfg: ExperimentConfig):
    opts = cfg.born_sweep
    p = float(opts.get("p", 0.3))
    epsilon = Fraction(str(opts.get("epsilon", "1/50")))
    n_values = [int(n) for n in opts.get("n_values", [100, 1000, 10000])]
    f_values = opts.get("f_values")
    f_values = [Fraction(str(f)) for f in f_values] if f_values else [Fraction(p)]
    oracle_max = int(opts.get("oracle_max_replicas", 12))
    if not 0.0 < p < 1.0:
        raise ConfigError("born_sweep.p must lie strictly between 0 and 1")

    # two-site state realizing the requested per-replica probability
    psi = WaveFunction([np.sqrt(p), np.sqrt(1.0 - p)])
    flat2 = Measure.flat(2)

    rows = []
    for f in f_values:
        window = FrequencyWindow(f, epsilon)
        for n in sorted(set(n_values) | {oracle_max}):
            dist = born_distance_sq(p, n, window)
            row = {
                "n_replicas": n,
                "f": float(f),
                "epsilon": float(epsilon),
                "p": p,
                "distance_sq": dist,
                "hoeffding_bound": 2.0 * float(np.exp(-2.0 * n * float(epsilon) ** 2)),
                "oracle_distance_sq": None,
            }
            if n <= oracle_max:
                row["oracle_distance_sq"] = enumerated_replica_distance_sq(
                    psi, 0, window, n, flat2)
            rows.append(row)

    header = ["n_replicas", "f", "epsilon", "p", "distance_sq",
              "hoeffding_bound", "oracle_distance_sq"]
    checked = [r for r in rows if r["oracle_distance_sq"] is not None]
    summary = {
        "p": p,
        "epsilon": str(epsilon),
        "oracle_rows": len(checked),
        "oracle_max_gap": max(
            (abs(r["distance_sq"] - r["oracle_distance_sq"]) for r in checked),
            default=None),
    }
    return header, rows, summary


def _entropy_run(cfg: ExperimentConfig):
    opts = cfg.entropy_run
    steps = int(opts.get("steps", 1000))
    samples = int(opts.get("samples", 1000))
    size = cfg.lattice_size
    site_a = int(opts.get("site_a", size // 4))
    site_b = int(opts.get("site_b", (3 * size) // 4))
    alpha_max = float(opts.get("alpha_max", np.pi / 2))
    m = cfg.build_measure()
    d = cfg.build_dynamics()
    curve = great_circle_curve(size, site_a, site_b, samples, alpha_max, m)
    series = entropy_drift(curve, d, steps)
    s0 = series[0].entropy
    rows = [
        {
            "step": s.step,
            "time": s.step * d.dt,
            "gamma": d.gamma,
            "entropy": s.entropy,
            "entropy_drift": s.entropy - s0,
            "max_segment_drift": s.max_length_drift,
            "max_step_segment_drift": s.max_step_length_drift,
        }
        for s in series
    ]
    header = ["step", "time", "gamma", "entropy", "entropy_drift",
              "max_segment_drift", "max_step_segment_drift"]
    summary = {
        "gamma": d.gamma,
        "steps": steps,
        "samples": samples,
        "initial_entropy": s0,
        "final_entropy_drift": rows[-1]["entropy_drift"],
        "max_segment_drift": max(r["max_segment_drift"] for r in rows),
        "max_step_segment_drift": max(r["max_step_segment_drift"] for r in rows),
    }
    return header, rows, summary


def _observable_demo(cfg: ExperimentConfig):
    opts = cfg.observable_demo
    size = int(opts.get("size", min(cfg.lattice_size, 16)))
    rng = cfg.rng("observable-demo draws detector values and a trial state")
    m = Measure.flat(size)  # complex detectors are defined on the flat measure
    targets = tuple(int(t) for t in rng.permutation(size))
    values = tuple(
        complex(r * np.cos(th), r * np.sin(th))
        for r, th in zip(rng.uniform(0.5, 1.5, size), rng.uniform(0, 2 * np.pi, size))
    )
    det = ComplexDetector.fourier(size, targets, values)
    psi = random_state(rng, size, m)

    w = apparatus_unitary(det, m)
    q = build_observable(det)
    probs = measure(psi, det, m)
    overlaps = (det.basis.conj() * m.weights) @ psi.coefficients
    via_projection = np.abs(overlaps) ** 2

    rows = [
        {
            "n": n,
            "target_site": targets[n],
            "f_real": values[n].real,
            "f_imag": values[n].imag,
            "prob_apparatus": float(probs[n]),
            "prob_projection": float(via_projection[n]),
        }
        for n in range(size)
    ]
    header = ["n", "target_site", "f_real", "f_imag", "prob_apparatus", "prob_projection"]
    summary = {
        "size": size,
        "unitarity_residual": float(np.max(np.abs(w.conj().T @ w - np.eye(size)))),
        "normality_residual": float(np.max(np.abs(
            q @ q.conj().T - q.conj().T @ q))),
        "probability_sum": float(np.sum(probs)),
        "max_route_gap": float(np.max(np.abs(probs - via_projection))),
    }
    return header, rows, summary


def _amplitude_eval(cfg: ExperimentConfig, setup_text: str):
    setup = parse_setup(setup_text, lattice_size=cfg.lattice_size)
    d = cfg.build_dynamics()
    amp = setup_amplitude(setup, d)
    try:
        amp_paths = path_sum_amplitude(setup, d)
        path_gap = abs(amp - amp_paths)
    except ResourceError:
        amp_paths, path_gap = None, None
    wf = wave_function_of(setup.without_detector(), d, setup.detector.time)
    m = cfg.build_measure()
    mass = m.weights * np.abs(wf.coefficients) ** 2
    rows = [
        {
            "site": i,
            "psi_real": float(wf.coefficients[i].real),
            "psi_imag": float(wf.coefficients[i].imag),
            "weighted_mass": float(mass[i]),
        }
        for i in range(cfg.lattice_size)
    ]
    header = ["site", "psi_real", "psi_imag", "weighted_mass"]
    summary = {
        "setup": serialize_setup(setup),
        "n_paths": path_count(setup),
        "amplitude_real": amp.real,
        "amplitude_imag": amp.imag,
        "path_sum_real": None if amp_paths is None else amp_paths.real,
        "path_sum_imag": None if amp_paths is None else amp_paths.imag,
        "path_sum_gap": path_gap,
        "detector_site": setup.detector.site,
        "state_norm_sq": norm_sq(wf, m),
    }
    return header, rows, summary, setup


EXPERIMENT_NAMES = (
    "algebra-check", "born-sweep", "entropy-run", "observable-demo", "amplitude-eval",
)


def run_experiment(
    name: str,
    cfg: ExperimentConfig,
    out_dir: str | Path | None = None,
    fmt: str | None = None,
    setup_text: str | None = None,
) -> dict:
    """Run one named experiment; returns the manifest dict after writing files."""
    if name not in EXPERIMENT_NAMES:
        raise ValueError(f"unknown experiment {name!r}; choose from {EXPERIMENT_NAMES}")
    out = Path(out_dir if out_dir is not None else cfg.output_path)
    out.mkdir(parents=True, exist_ok=True)
    fmt = fmt or cfg.output_format
    stem = name.replace("-", "_")

    detector_site = None
    if name == "amplitude-eval":
        if setup_text is None:
            raise ValueError("amplitude-eval needs a setup document (--setup)")
        header, rows, summary, setup = _amplitude_eval(cfg, setup_text)
        detector_site = setup.detector.site
    else:
        fn = {
            "algebra-check": _algebra_check,
            "born-sweep": _born_sweep,
            "entropy-run": _entropy_run,
            "observable-demo": _observable_demo,
        }[name]
        header, rows, summary = fn(cfg)

    table_path = out / f"{stem}.{fmt}"
    write_table(table_path, header, rows, fmt)
    outputs = {"table": table_path.name, "manifest": f"{stem}_manifest.json"}

    if cfg.figures:
        from . import plots  # deferred: keeps matplotlib out of library-only use

        figure_path = out / f"{stem}.png"
        if name == "born-sweep":
            plots.born_sweep_figure(rows, figure_path)
        elif name == "entropy-run":
            plots.entropy_drift_figure(rows, figure_path)
        elif name == "observable-demo":
            plots.observable_figure(rows, figure_path)
        elif name == "algebra-check":
            plots.algebra_figure(rows, figure_path)
        else:
            plots.wavefunction_figure(rows, detector_site, figure_path)
        outputs["figure"] = figure_path.name

    manifest = write_manifest(
        out / outputs["manifest"], name, {**cfg.to_dict(), "output_format": fmt},
        outputs, summary,
    )
    return manifest
