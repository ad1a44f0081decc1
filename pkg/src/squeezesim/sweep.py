"""Squeezing-strength sweeps of the CHSH experiment with CSV output.

Each grid point runs an independent experiment seeded by
``mix_seed(base_seed, grid_index)``, so rows never depend on one another,
on the worker count, or on how many grid points the sweep has.  CSV cells
are either finite numbers (floats at 17 significant digits, round-trip
exact) or the literal token ``NA`` for starved estimators; the CSV bytes
are a pure function of the configuration.
"""

from __future__ import annotations

import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .detection import UndefinedStatisticError, run_chsh
from .model import (
    BELL_SINGLET_ALPHA,
    SEPARABLE_UNIFORM_ALPHA,
    SqueezingSpec,
    load_xi_file,
    mix_seed,
    two_photon_squeezing,
)

DEFAULT_SAMPLES = 1 << 20
DEFAULT_SEED = 20210403

CSV_HEADER = "r,c11,c12,c21,c22,s,s_stderr,eta,n_coincidence_min,samples,seed"

PRESET_ALPHAS = {
    "bell-singlet": BELL_SINGLET_ALPHA,
    "separable-uniform": SEPARABLE_UNIFORM_ALPHA,
}
STATES = tuple(PRESET_ALPHAS) + ("custom-file",)


@dataclass
class SweepConfig:
    """Parameters of one r sweep."""

    r_min: float = 0.0
    r_max: float = 3.0
    r_steps: int = 31
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    gamma: float = 1.0
    sigma2: float = 0.5
    state: str = "bell-singlet"
    alpha: tuple | None = None
    xi_file: str | Path | None = None
    out_csv: str | Path | None = None
    out_svg: str | Path | None = None

    def __post_init__(self):
        if self.r_min > self.r_max:
            raise ValueError("r_min must be <= r_max")
        if self.r_steps < 1:
            raise ValueError("r_steps must be >= 1")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")
        if not self.sigma2 > 0:
            raise ValueError("sigma2 must be > 0")
        if self.state not in STATES:
            raise ValueError(f"unknown state {self.state!r}; expected one of {STATES}")
        if self.state == "custom-file" and self.xi_file is None and self.alpha is None:
            raise ValueError("state 'custom-file' needs --xi-file (or an alpha override)")
        if self.alpha is not None:
            self.alpha = tuple(complex(a) for a in self.alpha)
            if len(self.alpha) != 4:
                raise ValueError("alpha must have exactly 4 amplitudes")


@dataclass
class SweepRow:
    """One grid point of a sweep.  Statistic fields are None when post-
    selection starved the estimators; such rows serialize as NA cells and
    carry the reason outside the CSV."""

    r: float
    c11: float | None
    c12: float | None
    c21: float | None
    c22: float | None
    s: float | None
    s_stderr: float | None
    eta: float | None
    n_coincidence_min: int | None
    samples: int
    seed: int
    reason: str | None = field(default=None, compare=False)


def grid_values(config: SweepConfig) -> list[float]:
    """The exact uniform grid, endpoints inclusive when r_steps > 1."""
    if config.r_steps == 1:
        return [float(config.r_min)]
    step = (config.r_max - config.r_min) / (config.r_steps - 1)
    return [config.r_min + i * step for i in range(config.r_steps)]


def _spec_for(config: SweepConfig, base_matrix, r: float) -> SqueezingSpec:
    if config.alpha is not None:
        return two_photon_squeezing(config.alpha, r)
    if config.state == "custom-file":
        return SqueezingSpec(matrix=r * base_matrix)
    return two_photon_squeezing(PRESET_ALPHAS[config.state], r)


def _run_point(config: SweepConfig, base_matrix, index: int, r: float) -> SweepRow:
    row_seed = mix_seed(config.seed, index)
    spec = _spec_for(config, base_matrix, r)
    try:
        res = run_chsh(spec, sigma2=config.sigma2, gamma=config.gamma,
                       n=config.samples, seed=row_seed)
    except UndefinedStatisticError as exc:
        return SweepRow(r=r, c11=None, c12=None, c21=None, c22=None, s=None,
                        s_stderr=None, eta=None, n_coincidence_min=None,
                        samples=config.samples, seed=row_seed, reason=str(exc))
    return SweepRow(r=r, c11=res.c11, c12=res.c12, c21=res.c21, c22=res.c22,
                    s=res.s, s_stderr=res.s_stderr, eta=res.eta,
                    n_coincidence_min=res.n_coincidence_min,
                    samples=config.samples, seed=row_seed)


def _format_cell(value) -> str:
    if value is None:
        return "NA"
    if isinstance(value, int):
        return str(value)
    return format(float(value), ".17g")


def format_row(row: SweepRow) -> str:
    cells = (row.r, row.c11, row.c12, row.c21, row.c22, row.s, row.s_stderr,
             row.eta, row.n_coincidence_min, row.samples, row.seed)
    return ",".join(_format_cell(c) for c in cells)


def run_sweep(config: SweepConfig, workers: int = 1) -> list[SweepRow]:
    """Evaluate every grid point, streaming rows to CSV in grid order.

    Grid points may be evaluated concurrently (``workers`` threads); output
    is identical regardless because every point derives its own seed.  Rows
    with undefined statistics are reported on stderr and the sweep continues.
    """
    values = grid_values(config)
    base_matrix = None
    if config.state == "custom-file" and config.alpha is None:
        base_matrix = load_xi_file(config.xi_file).matrix

    out = None
    if config.out_csv is not None:
        out = open(config.out_csv, "w", newline="")
        out.write(CSV_HEADER + "\n")

    rows: list[SweepRow] = []
    try:
        if workers <= 1:
            produced = (_run_point(config, base_matrix, i, r) for i, r in enumerate(values))
            for row in produced:
                rows.append(row)
                if row.reason:
                    print(f"sweep: r={row.r:g}: {row.reason}; row marked NA", file=sys.stderr)
                if out is not None:
                    out.write(format_row(row) + "\n")
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                futures = [pool.submit(_run_point, config, base_matrix, i, r)
                           for i, r in enumerate(values)]
                for future in futures:
                    row = future.result()
                    rows.append(row)
                    if row.reason:
                        print(f"sweep: r={row.r:g}: {row.reason}; row marked NA", file=sys.stderr)
                    if out is not None:
                        out.write(format_row(row) + "\n")
    finally:
        if out is not None:
            out.close()

    if config.out_svg is not None:
        from .svgplot import emit_svg

        emit_svg(rows, config.out_svg)
    return rows
