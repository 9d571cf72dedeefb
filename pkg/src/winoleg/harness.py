"""Monte-Carlo error experiments, conditioning tables and report emission.

Randomness contract: trial t of an experiment with seed s uses
``numpy.random.default_rng([s, t])`` (PCG64 keyed by the SeedSequence of the
pair), drawing the input tensor first and the weight tensor second.  Streams
are independent per trial, so serial and parallel execution produce the same
report, byte for byte.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .construct import InterpolationPoints, WinogradPlan, build_plan, condition_number, plan_to_float
from .errors import DimensionError
from .pipeline import BASE_MODES, conv2d_winograd
from .quantize import QuantConfig, conv2d_direct_quantized, conv2d_winograd_quantized
from .reference import conv2d_direct

CSV_HEADER = "mode,qconfig,metric,mean,std,median,max,trials,seed"
METRICS = ("max_abs_err", "rel_l2_err")
DISTRIBUTIONS = ("standard-normal", "uniform")
FLOAT_QCONFIG = "float"
DIRECT_MODE = "direct"


def load_tensor(path) -> np.ndarray:
    """Read a tensor JSON file: {"shape": [...], "data": [row-major numbers]}."""
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or "shape" not in doc or "data" not in doc:
        raise ValueError(f"{path}: tensor files need 'shape' and 'data' keys")
    shape = [int(v) for v in doc["shape"]]
    data = np.asarray(doc["data"], dtype=np.float64)
    expected = int(np.prod(shape)) if shape else 1
    if data.size != expected:
        raise DimensionError(
            f"{path}: shape {shape} needs {expected} values, file has {data.size}")
    return data.reshape(shape)


def save_tensor(path, tensor: np.ndarray) -> None:
    doc = {"shape": list(tensor.shape),
           "data": [float(v) for v in np.asarray(tensor, dtype=np.float64).ravel()]}
    with open(path, "w") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def _normalize_distribution(name: str) -> str:
    name = name.strip().lower()
    if name in ("uniform", "uniform(-1,1)"):
        return "uniform"
    if name in ("standard-normal", "normal", "standard_normal"):
        return "standard-normal"
    raise ValueError(f"unknown input distribution {name!r}")


def _parse_qconfigs(entries) -> tuple[tuple[str, QuantConfig], ...]:
    parsed = []
    for entry in entries:
        if isinstance(entry, str):
            parsed.append((entry, QuantConfig.from_name(entry)))
        elif isinstance(entry, dict):
            entry = dict(entry)
            try:
                name = entry.pop("name")
            except KeyError:
                raise ValueError("qconfig objects need a 'name' field") from None
            parsed.append((name, QuantConfig(**entry) if entry else QuantConfig.from_name(name)))
        else:
            raise ValueError(f"cannot interpret qconfig entry {entry!r}")
    names = [n for n, _ in parsed]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate qconfig names in {names}")
    return tuple(parsed)


@dataclass
class ExperimentConfig:
    """One Monte-Carlo error experiment: geometry, pipelines and sampling."""

    o: int = 4
    k: int = 3
    points: str | None = None
    modes: tuple[str, ...] = ("canonical", "legendre")
    qconfigs: tuple[tuple[str, QuantConfig], ...] = (
        ("8b", QuantConfig.uniform(8)),
        ("8b+9b", QuantConfig.uniform(8, hadamard_bits=9)),
    )
    trials: int = 1000
    seed: int = 1234
    input_distribution: str = "standard-normal"
    channels: tuple[int, int] = (3, 2)
    spatial: tuple[int, int] = (13, 14)

    def __post_init__(self):
        self.modes = tuple(self.modes)
        for mode in self.modes:
            if mode not in BASE_MODES:
                raise ValueError(f"unknown mode {mode!r}")
        self.qconfigs = tuple((str(n), qc) for n, qc in self.qconfigs)
        self.input_distribution = _normalize_distribution(self.input_distribution)
        self.channels = (int(self.channels[0]), int(self.channels[1]))
        self.spatial = (int(self.spatial[0]), int(self.spatial[1]))
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if min(self.channels) < 1:
            raise ValueError(f"channel counts must be >= 1, got {self.channels}")
        if min(self.spatial) < self.k:
            raise ValueError(f"spatial extents {self.spatial} smaller than kernel {self.k}")

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        doc = dict(doc)
        known = {"o", "k", "points", "modes", "qconfigs", "trials", "seed",
                 "input_distribution", "channels", "spatial"}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "qconfigs" in doc:
            doc["qconfigs"] = _parse_qconfigs(doc["qconfigs"])
        for key in ("modes", "channels", "spatial"):
            if key in doc:
                doc[key] = tuple(doc[key])
        return cls(**doc)

    def interpolation_points(self) -> InterpolationPoints:
        if self.points is None:
            return InterpolationPoints.default(self.o + self.k - 1)
        return InterpolationPoints.parse(self.points)

    def describe(self) -> dict:
        doc = asdict(self)
        doc["points"] = str(self.interpolation_points())
        doc["qconfigs"] = [{"name": n, **asdict(qc)} for n, qc in self.qconfigs]
        doc["modes"] = list(self.modes)
        doc["channels"] = list(self.channels)
        doc["spatial"] = list(self.spatial)
        return doc


@dataclass
class ErrorReport:
    """Aggregated experiment output: metric rows plus reporting side tables."""

    rows: list[dict]
    stage_stats: list[dict]
    condition_table: list[dict]
    config: dict = field(default_factory=dict)

    def csv_text(self) -> str:
        lines = [CSV_HEADER]
        for row in self.rows:
            lines.append(",".join([
                row["mode"], row["qconfig"], row["metric"],
                repr(float(row["mean"])), repr(float(row["std"])),
                repr(float(row["median"])), repr(float(row["max"])),
                str(int(row["trials"])), str(int(row["seed"])),
            ]))
        return "\n".join(lines) + "\n"

    def json_dict(self) -> dict:
        return {"config": self.config, "rows": self.rows,
                "stage_stats": self.stage_stats,
                "condition_numbers": self.condition_table}

    def write(self, base_path) -> tuple[str, str]:
        csv_path, json_path = f"{base_path}.csv", f"{base_path}.json"
        with open(csv_path, "w", newline="") as fh:
            fh.write(self.csv_text())
        with open(json_path, "w") as fh:
            json.dump(self.json_dict(), fh, indent=2)
            fh.write("\n")
        return csv_path, json_path


def condition_table(plan: WinogradPlan) -> list[dict]:
    """Two-norm and Frobenius condition numbers of every pipeline factor."""
    plan = plan_to_float(plan)
    mats = [("B^T", plan.B.T), ("G", plan.G), ("A^T", plan.A.T)]
    if plan.base_change is not None:
        mats += [("B_P^T", plan.B_P.T), ("G_P", plan.G_P), ("A_P^T", plan.A_P.T),
                 ("P^T", plan.base_change.P.T),
                 ("P^-T", plan.base_change.P_inv.T)]
    return [{"matrix": name,
             "two_norm": condition_number(mat, "two"),
             "frobenius": condition_number(mat, "frobenius")}
            for name, mat in mats]


def _draw(rng: np.random.Generator, distribution: str, shape) -> np.ndarray:
    if distribution == "uniform":
        return rng.uniform(-1.0, 1.0, shape)
    return rng.standard_normal(shape)


def _error_metrics(y: np.ndarray, ref: np.ndarray) -> tuple[float, float]:
    diff = y - ref
    max_abs = float(np.max(np.abs(diff))) if diff.size else 0.0
    denom = float(np.linalg.norm(ref.ravel()))
    num = float(np.linalg.norm(diff.ravel()))
    rel = num / denom if denom > 0 else (0.0 if num == 0.0 else float("inf"))
    return max_abs, rel


def _run_trial_block(config: ExperimentConfig, start: int, stop: int) -> list[dict]:
    plan = build_plan(config.o, config.k, config.interpolation_points(),
                      use_legendre=True)
    fplan = plan_to_float(plan)
    c_in, c_out = config.channels
    h, w_ext = config.spatial
    results = []
    for trial in range(start, stop):
        rng = np.random.default_rng([config.seed, trial])
        x = _draw(rng, config.input_distribution, (c_in, h, w_ext))
        w = _draw(rng, config.input_distribution, (c_out, c_in, config.k, config.k))
        ref = conv2d_direct(x, w)
        metrics: dict = {}
        stages: dict = {}
        for mode in config.modes:
            metrics[(mode, FLOAT_QCONFIG)] = _error_metrics(
                conv2d_winograd(x, w, fplan, mode), ref)
            for qname, qc in config.qconfigs:
                y, st = conv2d_winograd_quantized(x, w, fplan, mode, qc)
                metrics[(mode, qname)] = _error_metrics(y, ref)
                stages[(mode, qname)] = [(s.stage, s.bits, s.max_abs, s.scale)
                                         for s in st]
        metrics[(DIRECT_MODE, FLOAT_QCONFIG)] = (0.0, 0.0)
        for qname, qc in config.qconfigs:
            metrics[(DIRECT_MODE, qname)] = _error_metrics(
                conv2d_direct_quantized(x, w, qc), ref)
        results.append({"metrics": metrics, "stages": stages})
    return results


def run_error_benchmark(config: ExperimentConfig, workers: int = 1) -> ErrorReport:
    """Run the configured trials (optionally in parallel) and aggregate."""
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    workers = min(workers, config.trials)
    if workers == 1:
        trial_results = _run_trial_block(config, 0, config.trials)
    else:
        bounds = np.linspace(0, config.trials, workers + 1, dtype=int)
        blocks = [(config, int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:])]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_trial_block_star, blocks))
        trial_results = [r for chunk in chunks for r in chunk]

    modes_all = list(config.modes) + [DIRECT_MODE]
    qnames_all = [FLOAT_QCONFIG] + [name for name, _ in config.qconfigs]
    rows = []
    for mode in modes_all:
        for qname in qnames_all:
            per_trial = np.array([r["metrics"][(mode, qname)] for r in trial_results])
            for idx, metric in enumerate(METRICS):
                vals = per_trial[:, idx]
                rows.append({
                    "mode": mode, "qconfig": qname, "metric": metric,
                    "mean": float(np.mean(vals)), "std": float(np.std(vals)),
                    "median": float(np.median(vals)), "max": float(np.max(vals)),
                    "trials": config.trials, "seed": config.seed,
                })

    stage_rows = []
    for mode in config.modes:
        for qname, _ in config.qconfigs:
            per_trial = [r["stages"][(mode, qname)] for r in trial_results]
            names = [s[0] for s in per_trial[0]]
            bits = [s[1] for s in per_trial[0]]
            max_abs = np.array([[s[2] for s in t] for t in per_trial])
            scales = np.array([[s[3] for s in t] for t in per_trial])
            for j, stage in enumerate(names):
                stage_rows.append({
                    "mode": mode, "qconfig": qname, "stage": stage,
                    "bits": bits[j],
                    "mean_max_abs": float(np.mean(max_abs[:, j])),
                    "mean_scale": float(np.mean(scales[:, j])),
                })

    plan = build_plan(config.o, config.k, config.interpolation_points(),
                      use_legendre=True)
    return ErrorReport(rows=rows, stage_stats=stage_rows,
                       condition_table=condition_table(plan),
                       config=config.describe())


def _run_trial_block_star(args):
    return _run_trial_block(*args)
