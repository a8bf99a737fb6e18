"""Command-line front end.

Commands: sweep, delayed, chsh, fidelity, paper-numbers, report.  Tables go
to --out (or stdout) as CSV or JSON; diagnostics go to stderr.  Exit codes:
0 success, 1 internal failure, 2 usage or I/O error.  Repeating an
invocation with the same seed reproduces output files byte for byte.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .chsh import chsh_max, i_corr_from_s
from .delayed import (
    ExperimentConfig,
    InsufficientDataError,
    delayed_chsh,
    run_experiment,
    summarize,
    write_runlog_csv,
    write_summary_json,
)
from .estimator import analytic_fidelity, average_fidelity, fidelity_bound_from_chsh
from .infometrics import i_corr, i_ind
from .qstate import StateError, X_DIR, Y_DIR, Z_DIR, project, reduced_density
from .swapkit import (
    OUTCOME_NAMES,
    PSI_MINUS,
    conditional_state,
    make_alpha_basis,
    make_total_state,
)

SWEEP_COLUMNS = ("alpha", "i_zz", "i_xx", "i_ind", "i_corr", "s_max", "fidelity", "complementarity_sum")

_NAMED_DIRECTIONS = {"z": Z_DIR, "x": X_DIR, "y": Y_DIR}


def _fmt(x: float) -> str:
    # 12 significant digits, '.' separator, locale-independent
    return f"{x:.12g}"


def parse_direction(text: str) -> np.ndarray:
    """Accepts a named axis (z, x, y, optionally '-' prefixed) or
    'theta,phi' spherical angles in degrees."""
    t = text.strip().lower()
    sign = 1.0
    if t.startswith("-") and t[1:] in _NAMED_DIRECTIONS:
        sign, t = -1.0, t[1:]
    if t in _NAMED_DIRECTIONS:
        return sign * _NAMED_DIRECTIONS[t]
    parts = t.split(",")
    if len(parts) == 2:
        try:
            theta, phi = math.radians(float(parts[0])), math.radians(float(parts[1]))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad direction {text!r}") from None
        return np.array(
            [math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)]
        )
    raise argparse.ArgumentTypeError(f"bad direction {text!r}: use z|x|y|-z|... or 'theta,phi' degrees")


def parse_alpha(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"alpha must be a number, got {text!r}") from None
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"alpha must be in [0, 1], got {value}")
    return value


def parse_outcome(text: str) -> int:
    t = text.strip().lower()
    if t in OUTCOME_NAMES:
        return OUTCOME_NAMES.index(t)
    if t.isdigit() and int(t) in (0, 1, 2, 3):
        return int(t)
    raise argparse.ArgumentTypeError(f"outcome must be 0..3 or one of {OUTCOME_NAMES}, got {text!r}")


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    i_zz: float
    i_xx: float
    i_ind: float
    i_corr: float
    s_max: float
    fidelity: float
    complementarity_sum: float

    def __post_init__(self):
        if abs(self.complementarity_sum - 2.0) > 1e-10:
            raise StateError(f"complementarity sum {self.complementarity_sum} != 2")
        if abs(self.s_max**2 / 4.0 - self.i_corr) > 1e-6:
            raise StateError("s_max^2/4 and i_corr disagree")

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in SWEEP_COLUMNS}


def sweep_row(alpha: float) -> SweepRow:
    """Evaluate all sweep observables at one alpha, from simulated states."""
    basis = make_alpha_basis(alpha).projective()
    _, post = project(make_total_state(), basis, PSI_MINUS)
    cond = conditional_state(alpha, PSI_MINUS)
    ind = i_ind(reduced_density(post, (1,))).i_ind
    measures = i_corr(cond, method="analytic")
    s_max = chsh_max(cond, method="analytic").s_value
    return SweepRow(
        alpha=float(alpha),
        i_zz=measures.i_zz,
        i_xx=measures.i_xx,
        i_ind=ind,
        i_corr=measures.i_corr,
        s_max=s_max,
        fidelity=analytic_fidelity(alpha),
        complementarity_sum=ind + measures.i_corr,
    )


def sweep_rows(alphas) -> list[SweepRow]:
    return [sweep_row(a) for a in alphas]


def _rows_to_csv(columns, dicts) -> str:
    lines = [",".join(columns)]
    for row in dicts:
        lines.append(",".join(_fmt(row[c]) if isinstance(row[c], float) else str(row[c]) for c in columns))
    return "\n".join(lines) + "\n"


def _dump_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_sweep(args) -> int:
    if args.alpha_steps < 2:
        print("error: --alpha-steps must be >= 2", file=sys.stderr)
        return 2
    alphas = list(np.linspace(0.0, 1.0, args.alpha_steps))
    if args.include_special:
        alphas = sorted(set(alphas) | {1.0 / math.sqrt(2.0)})
    rows = [r.as_dict() for r in sweep_rows(alphas)]
    if args.format == "csv":
        _emit(_rows_to_csv(SWEEP_COLUMNS, rows), args.out)
    else:
        _emit(_dump_json(rows), args.out)
    return 0


def _build_config(args) -> ExperimentConfig:
    return ExperimentConfig(
        victor_alpha=args.alpha,
        victor_mode=args.victor_mode,
        alice_dir=args.alice_dir,
        bob_dir=args.bob_dir,
        shots=args.shots,
        seed=args.seed,
    )


def cmd_delayed(args) -> int:
    config = _build_config(args)
    outdir = Path(args.out if args.out is not None else ".")
    outdir.mkdir(parents=True, exist_ok=True)

    log = run_experiment(config)
    summary = summarize(log)

    settings = chsh_max(conditional_state(config.effective_alpha, PSI_MINUS), "analytic").settings
    summary["chsh_settings"] = {
        name: [float(x) for x in getattr(settings, name)] for name in ("a", "a_prime", "b", "b_prime")
    }
    try:
        estimates = delayed_chsh(config, settings)
        summary["chsh_estimates"] = {
            OUTCOME_NAMES[k]: {"s_hat": est.s_hat, "stderr": est.stderr} for k, est in estimates.items()
        }
    except InsufficientDataError as exc:
        print(f"warning: skipping CHSH estimates: {exc}", file=sys.stderr)
        summary["chsh_estimates"] = {name: None for name in OUTCOME_NAMES}

    runlog_path = outdir / "runlog.csv"
    summary_path = outdir / "summary.json"
    write_runlog_csv(log, runlog_path)
    write_summary_json(summary, summary_path)
    print(runlog_path)
    print(summary_path)
    return 0


def cmd_chsh(args) -> int:
    state = conditional_state(args.alpha, args.outcome)
    result = chsh_max(state, method=args.method)
    payload = {
        "alpha": args.alpha,
        "outcome": args.outcome,
        "outcome_name": OUTCOME_NAMES[args.outcome],
        "method": args.method,
        "s_max": result.s_value,
        "i_corr": i_corr_from_s(result.s_value),
        "settings": {
            name: [float(x) for x in getattr(result.settings, name)]
            for name in ("a", "a_prime", "b", "b_prime")
        },
    }
    if args.format == "csv":
        columns = ("alpha", "outcome", "s_max", "i_corr")
        _emit(_rows_to_csv(columns, [{c: payload[c] for c in columns}]), args.out)
    else:
        _emit(_dump_json(payload), args.out)
    return 0


def cmd_fidelity(args) -> int:
    alphas = args.alpha if args.alpha else [0.0, 0.25, 1.0 / math.sqrt(2.0), 0.9, 1.0]
    rows = []
    for a in alphas:
        res = average_fidelity(a, samples=args.samples, seed=args.seed)
        rows.append(
            {
                "alpha": res.alpha,
                "f_analytic": res.f_analytic,
                "f_montecarlo": res.f_montecarlo,
                "stderr": res.stderr,
                "samples": res.samples,
            }
        )
    columns = ("alpha", "f_analytic", "f_montecarlo", "stderr", "samples")
    if args.format == "csv":
        _emit(_rows_to_csv(columns, rows), args.out)
    else:
        _emit(_dump_json(rows), args.out)
    return 0


def cmd_paper_numbers(args) -> int:
    s, err = args.s_value, args.s_error
    corr = i_corr_from_s(s)
    bound = fidelity_bound_from_chsh(s)
    sigma = (s - 2.0) / err
    f_cl = 2.0 / 3.0
    lines = [
        f"measured Bell parameter:      S = {s:.3f} +/- {err:.3f}",
        f"information in correlations:  i_corr = S^2/4 = {corr:.4f}",
        f"individual-information bound: i_ind <= 2 - i_corr = {bound.i_ind_bound:.4f}",
        f"fidelity bound:               f <= 1/2 + i_ind/6 = {bound.f_bound:.4f}",
        f"classical teleportation limit: f_cl = 2/3 = {f_cl:.4f}",
        f"violation of the local-realistic bound 2: {sigma:.1f} sigma",
    ]
    print("\n".join(lines))
    if args.out is not None:
        payload = {
            "s_value": s,
            "s_error": err,
            "i_corr": corr,
            "i_ind_bound": bound.i_ind_bound,
            "f_bound": bound.f_bound,
            "f_classical": f_cl,
            "sigma_violation": sigma,
        }
        Path(args.out).write_text(_dump_json(payload))
    return 0


def cmd_report(args) -> int:
    if args.alpha_steps < 2:
        print("error: --alpha-steps must be >= 2", file=sys.stderr)
        return 2
    from .report import render_sweep_figures

    outdir = Path(args.out if args.out is not None else ".")
    outdir.mkdir(parents=True, exist_ok=True)
    alphas = sorted(set(np.linspace(0.0, 1.0, args.alpha_steps)) | {1.0 / math.sqrt(2.0)})
    rows = [r.as_dict() for r in sweep_rows(alphas)]
    if args.format == "csv":
        table_path = outdir / "sweep.csv"
        table_path.write_text(_rows_to_csv(SWEEP_COLUMNS, rows))
    else:
        table_path = outdir / "sweep.json"
        table_path.write_text(_dump_json(rows))
    written = [table_path] + render_sweep_figures(rows, outdir)
    for path in written:
        print(path)
    return 0


def _add_common(parser, format_default="csv") -> None:
    parser.add_argument("--seed", type=int, default=0, help="64-bit RNG seed (default 0)")
    parser.add_argument("--out", default=None, help="output file or directory")
    parser.add_argument("--format", choices=("csv", "json"), default=format_default, help="table format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swaplab",
        description="Delayed-choice entanglement swapping: simulation and information analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="alpha sweep of all information measures")
    _add_common(p)
    p.add_argument("--alpha-steps", type=int, default=101, help="grid points on [0, 1]")
    p.add_argument("--include-special", action="store_true", help="add the exact alpha = 1/sqrt(2) row")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("delayed", help="run the delayed-choice record harness")
    _add_common(p)
    p.add_argument("--alpha", type=parse_alpha, default=1.0 / math.sqrt(2.0))
    p.add_argument("--shots", type=int, default=100_000)
    p.add_argument("--alice-dir", type=parse_direction, default=Z_DIR)
    p.add_argument("--bob-dir", type=parse_direction, default=Z_DIR)
    p.add_argument("--victor-mode", choices=("generalized-basis", "separable-z"), default="generalized-basis")
    p.set_defaults(func=cmd_delayed)

    p = sub.add_parser("chsh", help="maximal Bell parameter of a swapped state")
    _add_common(p, format_default="json")
    p.add_argument("--alpha", type=parse_alpha, default=1.0 / math.sqrt(2.0))
    p.add_argument("--outcome", type=parse_outcome, default=PSI_MINUS)
    p.add_argument("--method", choices=("analytic", "numeric"), default="analytic")
    p.set_defaults(func=cmd_chsh)

    p = sub.add_parser("fidelity", help="classical teleportation fidelity table")
    _add_common(p)
    p.add_argument("--alpha", type=parse_alpha, action="append", help="repeatable; default set of five")
    p.add_argument("--samples", type=int, default=100_000)
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("paper-numbers", help="derivation chain from the measured S")
    _add_common(p, format_default="json")
    p.add_argument("--s-value", type=float, default=2.421)
    p.add_argument("--s-error", type=float, default=0.091)
    p.set_defaults(func=cmd_paper_numbers)

    p = sub.add_parser("report", help="sweep table plus rendered figures")
    _add_common(p)
    p.add_argument("--alpha-steps", type=int, default=101)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # internal failure
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
