"""Command-line front end.

Subcommands: ``fidelity`` (distinguishability summary of a channel file),
``optimal-povm`` (emit the fidelity- or curvature-optimal measurement),
``sweep`` (CSV of information bounds across priors), ``verify`` (run the
measurement-search report), ``random`` (write a random channel file).

Exit codes: 0 success, 1 verify found failing checks, 2 input/validation
error, 3 numerical conditioning error, 4 I/O error. Printed numbers use 9
significant digits; CSV and written files use 17.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from .channel_io import fmt17, load_channel, matrix_lines, save_channel
from .errors import ConditioningError, DivergenceInfiniteError, ValidationError
from .fidelity import bures_optimal_measurement, fidelity_root, naive_lower_bound
from .holevo import (
    fuchs_measurement,
    holevo_chi,
    i_second_derivative,
    lower_bound_m,
    mutual_information,
)
from .oracle import SearchConfig, VerificationReport, build_report, oracle_max_mutual_information
from .states import Povm, random_channel

SWEEP_HEADER_BASE = "t,i_bures,i_fuchs,m_lower,chi"


@dataclass(frozen=True)
class SweepRow:
    """One CSV row of the prior sweep; oracle_best only when sampling ran."""

    t: float
    i_bures: float
    i_fuchs: float
    m_lower: float
    chi: float
    oracle_best: float | None = None


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConditioningError, DivergenceInfiniteError) as exc:
        print(f"conditioning error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdistinfo",
        description="Distinguishability measures and information bounds for binary quantum channels.",
    )
    sub = parser.add_subparsers(required=True)

    p = sub.add_parser("fidelity", help="print the distinguishability summary of a channel")
    p.add_argument("--channel", required=True, help="channel file path")
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("optimal-povm", help="write the optimal measurement to a file")
    p.add_argument("--channel", required=True)
    p.add_argument("--which", required=True, choices=("bures", "fuchs"))
    p.add_argument("--out", required=True, help="output POVM file path")
    p.set_defaults(func=cmd_optimal_povm)

    p = sub.add_parser("sweep", help="CSV of information bounds at t = k/(steps+1)")
    p.add_argument("--channel", required=True)
    p.add_argument("--steps", type=int, required=True, help="number of interior grid points")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--samples", type=int, default=None, help="add an oracle_best column from this many sampled POVMs")
    p.add_argument("--seed", type=int, default=0, help="base seed for sampled POVMs")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run every optimality check against the measurement search")
    p.add_argument("--channel", required=True)
    p.add_argument("--samples", type=int, default=200, help="sampled POVMs per search")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bits", action="store_true", help="print information quantities in bits")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("random", help="write a random channel file")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--t", type=float, default=0.5)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_random)

    return parser


def cmd_fidelity(args) -> int:
    channel = load_channel(args.channel)
    root = fidelity_root(channel.rho0, channel.rho1)
    lines = [
        f"dim:                {channel.dim}",
        f"prior t:            {_g9(channel.t)}",
        f"fidelity_root:      {_g9(root)}",
        f"bures_angle:        {_g9(math.acos(min(max(root, 0.0), 1.0)))}",
        f"uhlmann_probability:{_g9(root * root):>{len(_g9(root * root)) + 1}}",
        f"naive_lower_bound:  {_g9(naive_lower_bound(channel.rho0, channel.rho1))}",
        f"commutator_norm:    {_g9(channel.commutator_norm())}",
    ]
    print("\n".join(lines))
    return 0


def cmd_optimal_povm(args) -> int:
    channel = load_channel(args.channel)
    if args.which == "bures":
        res = bures_optimal_measurement(channel.rho0, channel.rho1)
        povm = res.optimal_povm
        achieved = sum(
            math.sqrt(p0 * p1)
            for p0, p1 in zip(*(map(lambda r: _probs(r, povm), (channel.rho0, channel.rho1))))
        )
        metrics = {
            "bhattacharyya_coefficient": achieved,
            "fidelity_root": res.fidelity_root,
            "bures_angle": res.bures_angle,
        }
    else:
        povm = fuchs_measurement(channel)
        metrics = {
            "t": channel.t,
            "mutual_information": mutual_information(channel, povm),
            "i_second_derivative": i_second_derivative(channel, povm),
        }
    _write_povm_file(args.out, args.which, povm, metrics)
    print(f"wrote {args.which} POVM ({len(povm)} elements, dim {povm.dim}) to {args.out}")
    for key, value in metrics.items():
        print(f"  {key}: {_g9(value)}")
    return 0


def cmd_sweep(args) -> int:
    if args.steps < 1:
        raise ValidationError(f"steps must be >= 1, got {args.steps}")
    channel = load_channel(args.channel)
    bures_povm = bures_optimal_measurement(channel.rho0, channel.rho1).optimal_povm
    config = None
    if args.samples is not None:
        config = SearchConfig(samples=args.samples, seed=args.seed)

    rows = []
    for k in range(1, args.steps + 1):
        t = k / (args.steps + 1)
        at_t = channel.with_prior(t)
        oracle_best = None
        if config is not None:
            oracle_best, _ = oracle_max_mutual_information(channel, t, config)
        rows.append(
            SweepRow(
                t=t,
                i_bures=mutual_information(at_t, bures_povm),
                i_fuchs=mutual_information(at_t, fuchs_measurement(at_t)),
                m_lower=lower_bound_m(at_t),
                chi=holevo_chi(at_t),
                oracle_best=oracle_best,
            )
        )

    header = SWEEP_HEADER_BASE + (",oracle_best" if config is not None else "")
    lines = [header]
    for r in rows:
        cells = [_g17(r.t), _g17(r.i_bures), _g17(r.i_fuchs), _g17(r.m_lower), _g17(r.chi)]
        if config is not None:
            cells.append(_g17(r.oracle_best))
        lines.append(",".join(cells))
    Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(rows)} rows to {args.out}")
    print("note: t=0 and t=1 are excluded; every information quantity is exactly 0 there")
    return 0


def cmd_verify(args) -> int:
    channel = load_channel(args.channel)
    config = SearchConfig(samples=args.samples, seed=args.seed)
    report = build_report(channel, config)
    print(render_report(report, bits=args.bits))
    if report.all_passed:
        return 0
    print(f"failing checks: {', '.join(report.failing())}", file=sys.stderr)
    return 1


def cmd_random(args) -> int:
    if args.dim < 1:
        raise ValidationError(f"dim must be >= 1, got {args.dim}")
    if not (0.0 <= args.t <= 1.0):
        raise ValidationError(f"t must lie in [0, 1], got {args.t}")
    channel = random_channel(args.dim, args.seed, args.t)
    save_channel(channel, args.out)
    print(f"wrote random channel (dim {args.dim}, seed {args.seed}, t {_g9(args.t)}) to {args.out}")
    return 0


def render_report(report: VerificationReport, bits: bool = False) -> str:
    """Deterministic text rendering: same report, same bytes."""
    unit = "bits" if bits else "nats"
    scale = 1.0 / math.log(2.0) if bits else 1.0

    def info(x):
        return "-" if x is None else _g9(x * scale)

    lines = [
        f"channel: dim={report.dim}, t={_g9(report.t)}",
        f"rho0 spectrum: {', '.join(_g9(x) for x in report.rho0_spectrum)}",
        f"rho1 spectrum: {', '.join(_g9(x) for x in report.rho1_spectrum)}",
        f"commutator norm: {_g9(report.commutator_norm)}",
        "fidelity:",
        f"  closed form:    {_g9(report.fidelity.closed_form)}",
        f"  naive bound:    {_g9(report.fidelity.naive_bound)}",
        f"  oracle min:     {_g9(report.fidelity.oracle_min)}  [{report.fidelity.oracle_tag}]",
        f"  bures achieved: {info(report.fidelity.bures_achieved) if report.fidelity.bures_achieved is None else _g9(report.fidelity.bures_achieved)}",
        f"relative information ({unit}):",
        f"  bures-measurement bound: {info(report.kl.bures_bound)}",
        f"  fuchs-basis bound:       {info(report.kl.fuchs_bound)}",
        f"  oracle max:              {info(report.kl.oracle_max)}  [{report.kl.oracle_tag}]",
        f"  divergent samples:       {report.kl.divergent_samples}",
        f"information bounds ({unit}):",
    ]
    for row in report.info:
        lines.append(
            f"  t={_g9(row.t)}: I[bures]={info(row.i_bures)} I[fuchs]={info(row.i_fuchs)} "
            f"M={info(row.m_lower)} chi={info(row.chi)} oracle={info(row.oracle_best)} [{row.oracle_tag}]"
        )
    lines.append("checks:")
    n_pass = n_fail = n_skip = 0
    for c in report.checks:
        if c.status == "pass":
            n_pass += 1
            lines.append(f"  pass {c.name}  margin={c.margin:.3e}")
        elif c.status == "fail":
            n_fail += 1
            lines.append(f"  FAIL {c.name}  margin={c.margin:.3e}")
        else:
            n_skip += 1
            lines.append(f"  skip {c.name}  ({c.note})")
    lines.append(f"result: {n_pass} passed, {n_fail} failed, {n_skip} skipped")
    return "\n".join(lines)


def _write_povm_file(path, which: str, povm: Povm, metrics: dict) -> None:
    lines = ["{", f'  "dim": {povm.dim},', f'  "which": "{which}",', '  "elements": [']
    for i, e in enumerate(povm.elements):
        comma = "," if i + 1 < len(povm.elements) else ""
        lines.append("    [")
        lines.extend(matrix_lines(e, "      "))
        lines.append(f"    ]{comma}")
    lines.append("  ],")
    lines.append('  "metrics": {')
    items = list(metrics.items())
    for i, (key, value) in enumerate(items):
        comma = "," if i + 1 < len(items) else ""
        lines.append(f'    "{key}": {fmt17(value)}{comma}')
    lines.append("  }")
    lines.append("}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _probs(rho, povm):
    from .states import outcome_distribution

    return outcome_distribution(rho, povm)


def _g9(x: float) -> str:
    return f"{x:.9g}"


def _g17(x: float) -> str:
    return f"{x:.17g}"


if __name__ == "__main__":
    sys.exit(main())
