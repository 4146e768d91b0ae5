"""Experiment grid execution.

A grid is the cartesian product (alpha values) x (sigma1 values) x
(widths) x (seeds) over one shared dataset. Cells are independent units
of work: they may run concurrently on a bounded worker pool, results are
appended to the output CSV as they complete (so an interrupted sweep
resumes by skipping rows already on disk), and the final file is
rewritten sorted by (alpha, sigma1, d, seed) so its content does not
depend on execution order.

Each cell's random stream is keyed by the cell seed plus the (sigma,
width) grid indices only. Alpha is deliberately excluded from the key:
noise-free cells then share their trajectory across alpha, and noisy
cells see common underlying randomness, which makes the correlation
between alpha and the gap less noisy.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from threading import Lock

from .analysis import RunRecord, robust_gap
from .bounds import BoundInputs, bound_estimate, integral_estimate
from .data import (
    SyntheticSpec,
    append_records,
    generate_synthetic,
    load_idx,
    read_records,
    subsample,
    write_records,
)
from .errors import InvalidParameterError
from .models import Dataset, ModelSpec, param_count
from .rng import RngStream, mix64
from .sde import TrainConfig, run_training

WORKERS_ENV = "LEVYBOUND_WORKERS"


@dataclass(frozen=True)
class IdxSource:
    train_images: str
    train_labels: str
    test_images: str
    test_labels: str
    subsample_fraction: float = 1.0
    subsample_seed: int = 0


@dataclass(frozen=True)
class GridSpec:
    """One experiment sweep; width 0 denotes the linear model."""

    alphas: tuple[float, ...]
    sigma1s: tuple[float, ...]
    widths: tuple[int, ...]
    seeds: tuple[int, ...]
    train: TrainConfig
    data: SyntheticSpec | IdxSource
    out: str
    init_scale: float = 1.0
    window: int = 2000
    trim: float = 0.15
    radius: float = 1.0

    def __post_init__(self):
        for name in ("alphas", "sigma1s", "widths", "seeds"):
            if not getattr(self, name):
                raise InvalidParameterError(f"grid list {name} must be nonempty")
        if any(not 1.0 < a <= 2.0 for a in self.alphas):
            raise InvalidParameterError("grid alphas must be in (1, 2]")
        if any(s < 0.0 for s in self.sigma1s):
            raise InvalidParameterError("grid sigma1 values must be >= 0")
        if any(w < 0 for w in self.widths):
            raise InvalidParameterError("grid widths must be >= 0 (0 = linear)")

    @property
    def cell_count(self) -> int:
        return len(self.alphas) * len(self.sigma1s) * len(self.widths) * len(self.seeds)


def load_grid_datasets(grid: GridSpec) -> tuple[Dataset, Dataset]:
    if isinstance(grid.data, SyntheticSpec):
        return generate_synthetic(grid.data)
    src = grid.data
    train = load_idx(src.train_images, src.train_labels)
    test = load_idx(src.test_images, src.test_labels)
    if src.subsample_fraction < 1.0:
        train = subsample(train, src.subsample_fraction, src.subsample_seed)
    return train, test


def _model_for(width: int, train: Dataset) -> ModelSpec:
    if width == 0:
        return ModelSpec((train.input_dim, train.num_classes))
    return ModelSpec((train.input_dim, width, train.num_classes))


def _run_cell(grid, train, test, alpha, sigma1, width, seed, i_sigma, i_width) -> RunRecord:
    spec = _model_for(width, train)
    d = param_count(spec)
    cfg = replace(grid.train, alpha=alpha, sigma1=sigma1, seed=seed)
    stream = RngStream(seed, mix64(i_sigma, i_width))
    nan = float("nan")
    try:
        trace = run_training(spec, train, test, cfg, grid.init_scale, rng=stream)
        if trace.diverged:
            return RunRecord(alpha, sigma1, d, width, train.n, seed, nan, nan, nan, True)
        gap = robust_gap(trace, grid.window, grid.trim)
        i_hat = integral_estimate(trace)
        g_hat = nan
        if sigma1 > 0.0:
            inputs = BoundInputs(
                alpha=alpha, d=d, n=train.n, sigma1=sigma1,
                gamma=cfg.gamma, eta=cfg.eta, radius=grid.radius,
            )
            g_hat = bound_estimate(i_hat, inputs)
        return RunRecord(alpha, sigma1, d, width, train.n, seed, gap, i_hat, g_hat, False)
    except Exception:
        # a failed cell is recorded as diverged, never aborts the sweep
        return RunRecord(alpha, sigma1, d, width, train.n, seed, nan, nan, nan, True)


def sort_key(r: RunRecord):
    return (r.alpha, r.sigma1, r.d, r.seed)


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        count = int(raw)
    except ValueError:
        raise InvalidParameterError(f"{WORKERS_ENV} must be an integer, got {raw!r}")
    if count < 1:
        raise InvalidParameterError(f"{WORKERS_ENV} must be >= 1, got {count}")
    return count


def execute_grid(grid: GridSpec, progress=None) -> list[RunRecord]:
    """Run every pending cell, persist incrementally, return the sorted records."""
    train, test = load_grid_datasets(grid)
    if grid.train.batch_size is not None and grid.train.batch_size > train.n:
        raise InvalidParameterError(
            f"batch_size {grid.train.batch_size} exceeds training rows {train.n}"
        )

    done: dict[tuple, RunRecord] = {}
    if os.path.exists(grid.out):
        for r in read_records(grid.out):
            done[(r.alpha, r.sigma1, r.width, r.seed)] = r

    pending = []
    for alpha in grid.alphas:
        for i_sigma, sigma1 in enumerate(grid.sigma1s):
            for i_width, width in enumerate(grid.widths):
                for seed in grid.seeds:
                    if (alpha, sigma1, width, seed) not in done:
                        pending.append((alpha, sigma1, width, seed, i_sigma, i_width))

    lock = Lock()

    def run_one(cell):
        alpha, sigma1, width, seed, i_sigma, i_width = cell
        record = _run_cell(grid, train, test, alpha, sigma1, width, seed, i_sigma, i_width)
        with lock:
            append_records(grid.out, [record])
            done[(alpha, sigma1, width, seed)] = record
            if progress is not None:
                progress(record)
        return record

    workers = worker_count()
    if pending:
        if workers == 1:
            for cell in pending:
                run_one(cell)
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                list(pool.map(run_one, pending))

    records = sorted(done.values(), key=sort_key)
    write_records(grid.out, records)
    return records
