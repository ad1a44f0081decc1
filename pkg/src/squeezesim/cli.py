"""Command line interface: r sweeps, impropriety reports, self-validation.

Exit codes: 0 success, 1 usage error, 2 runtime/numerical error,
3 validation failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .model import (
    analytic_moments,
    impropriety,
    load_xi_file,
    separability_threshold,
)
from .linalg import svd
from .sweep import DEFAULT_SAMPLES, DEFAULT_SEED, STATES, SweepConfig, run_sweep
from .validate import DEFAULT_SAMPLES as VALIDATE_SAMPLES
from .validate import format_report, run_validation

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2
EXIT_VALIDATION = 3


class _ArgumentParser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; this CLI reserves 2 for runtime."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_alpha(text: str) -> tuple[complex, ...]:
    parts = text.split(",")
    if len(parts) != 8:
        raise ValueError("--alpha needs 8 comma-separated floats: a1r,a1i,...,a4r,a4i")
    try:
        values = [float(p) for p in parts]
    except ValueError as exc:
        raise ValueError(f"--alpha: {exc}") from exc
    return tuple(complex(values[2 * k], values[2 * k + 1]) for k in range(4))


def _matrix_block(name: str, m: np.ndarray) -> str:
    body = np.array2string(m, precision=6, suppress_small=True)
    return f"{name} =\n{body}"


def report_impropriety(xi_path, sigma2: float) -> str:
    """Text report: polar data, second moments, and the impropriety degree."""
    spec = load_xi_file(xi_path)
    singular_values = svd(spec.matrix).s
    polar = spec.polar()
    moments = analytic_moments(polar, sigma2)
    det_gamma = np.linalg.det(moments.cov)
    det_c = np.linalg.det(moments.pseudo_cov)
    lines = [
        f"modes d = {spec.d}, sigma2 = {sigma2:g}",
        "singular values: " + ", ".join(f"{s:.12g}" for s in singular_values),
        f"||R||_F = {np.linalg.norm(polar.psd):.12g}",
        _matrix_block("Gamma", moments.cov),
        _matrix_block("C", moments.pseudo_cov),
        f"det Gamma = {det_gamma.real:.12g}",
        f"det C = {det_c:.12g}",
        f"impropriety = {impropriety(moments):.12g}",
    ]
    if spec.d == 2:
        m = spec.matrix
        off_equal = abs(m[0, 1] - m[1, 0]) <= 1e-10 * (1 + abs(m[0, 1]))
        diag_zero = max(abs(m[0, 0]), abs(m[1, 1])) <= 1e-10 * (1 + np.linalg.norm(m))
        if off_equal and diag_zero:
            verdict = separability_threshold(sigma2, abs(m[0, 1]))
            state = "entangled" if verdict.entangled else "separable"
            lines.append(
                f"symmetric two-mode form detected (r = {abs(m[0, 1]):.12g}): "
                f"{state} (threshold r = {verdict.threshold_r:.12g})"
            )
    return "\n".join(lines)


def _cmd_sweep(args) -> int:
    try:
        config = SweepConfig(
            r_min=args.r_min, r_max=args.r_max, r_steps=args.r_steps,
            samples=args.samples, seed=args.seed, gamma=args.gamma,
            sigma2=args.sigma2, state=args.state,
            alpha=_parse_alpha(args.alpha) if args.alpha else None,
            xi_file=args.xi_file, out_csv=args.out, out_svg=args.svg,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rows = run_sweep(config, workers=args.workers)
    n_valid = sum(row.s is not None for row in rows)
    print(f"wrote {len(rows)} rows ({n_valid} valid) to {args.out}")
    if args.svg:
        print(f"wrote figure to {args.svg}")
    return EXIT_OK


def _cmd_impropriety(args) -> int:
    print(report_impropriety(args.xi_file, args.sigma2))
    return EXIT_OK


def _cmd_validate(args) -> int:
    results = run_validation(samples=args.samples, seed=args.seed)
    print(format_report(results))
    return EXIT_OK if all(res.passed for res in results) else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="squeezesim",
        description="Classical simulator of multi-mode squeezed light: "
                    "improper Gaussian statistics and threshold-detection Bell tests.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="sweep the squeezing strength and tabulate S and eta")
    sweep.add_argument("--r-min", type=float, default=0.0)
    sweep.add_argument("--r-max", type=float, default=3.0)
    sweep.add_argument("--r-steps", type=int, default=31)
    sweep.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    sweep.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sweep.add_argument("--gamma", type=float, default=1.0)
    sweep.add_argument("--sigma2", type=float, default=0.5)
    sweep.add_argument("--state", choices=STATES, default="bell-singlet")
    sweep.add_argument("--alpha", default=None,
                       help="8 comma-separated floats a1r,a1i,...,a4r,a4i overriding the preset")
    sweep.add_argument("--xi-file", default=None,
                       help="JSON squeezing matrix; scaled by r at each grid point (custom-file)")
    sweep.add_argument("--out", required=True, help="output CSV path")
    sweep.add_argument("--svg", default=None, help="optional output SVG path")
    sweep.add_argument("--workers", type=int, default=1,
                       help="grid points evaluated concurrently (output identical)")
    sweep.set_defaults(func=_cmd_sweep)

    improp = sub.add_parser("impropriety", help="report moments and impropriety of a squeezing matrix")
    improp.add_argument("--xi-file", required=True, help="JSON squeezing matrix")
    improp.add_argument("--sigma2", type=float, default=0.5)
    improp.set_defaults(func=_cmd_impropriety)

    val = sub.add_parser("validate", help="run the analytic/statistical self-checks")
    val.add_argument("--samples", type=int, default=VALIDATE_SAMPLES)
    val.add_argument("--seed", type=int, default=0x5EED)
    val.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
