#!/usr/bin/env python3
"""
Command-line front end

    plan      minimal-call sure-success plan as JSON
    sweep     oracle-call curves c_e, c_o, c over a theta grid as CSV or JSON
    verify    plan, then simulate in the subspace (and on N items if given)
    simulate  per-iteration success probability trace on N items as JSON

Exit codes: 0 success, 1 validation or I/O error, 2 numerical failure
(no convergence, degenerate angle, or a failed sure-success check).
Machine output goes to stdout or --output; diagnostics go to stderr.
"""

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any, List, Optional, Sequence

from .closed_form import MemberKind, sweep, theta_grid
from .config import DEFAULT_CONFIG
from .errors import QuantumSearchError, SureSuccessViolation
from .operator_core import Geometry
from .planner import Plan, make_plan, plan_for_theta
from .simulator import run_full, run_subspace

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NUMERICAL = 2

CSV_HEADER = ['theta', 'c_even', 'c_odd', 'c_grover']


@dataclass
class CliConfig:
    """Parsed and validated command-line request"""
    command: str
    member: Optional[MemberKind] = None
    beta: Optional[float] = None
    n_items: Optional[int] = None
    marked: List[int] = field(default_factory=list)
    theta_min: float = 0.2
    theta_max: float = 2.0 * math.pi - 0.2
    steps: int = 2001
    theta_override: Optional[float] = None
    output_path: Optional[str] = None
    format: str = 'csv'
    quiet: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "CliConfig":
        member = getattr(args, 'member', None)
        marked = getattr(args, 'marked', None)
        config = cls(
            command=args.command,
            member=MemberKind.parse(member) if member else None,
            beta=getattr(args, 'beta', None),
            n_items=getattr(args, 'n_items', None),
            marked=_parse_marked(marked) if marked is not None else [],
            theta_min=getattr(args, 'theta_min', cls.theta_min),
            theta_max=getattr(args, 'theta_max', cls.theta_max),
            steps=getattr(args, 'steps', cls.steps),
            theta_override=getattr(args, 'theta_override', None),
            output_path=args.output,
            format=getattr(args, 'format', 'csv'),
            quiet=args.quiet,
        )
        config.validate()
        return config

    def validate(self):
        has_beta = self.beta is not None
        has_counts = self.n_items is not None or bool(self.marked)
        if self.command == 'sweep':
            if not has_beta:
                raise ValueError("sweep needs --beta")
            if self.steps < 2:
                raise ValueError(f"--steps must be at least 2, got {self.steps}")
            if not self.theta_min < self.theta_max:
                raise ValueError("--theta-min must be below --theta-max")
        elif has_beta == has_counts:
            raise ValueError("give exactly one of --beta or --n-items with --marked")
        if self.command == 'simulate' and not has_counts:
            raise ValueError("simulate needs --n-items and --marked")
        if has_counts:
            if self.n_items is None or not self.marked:
                raise ValueError("--n-items and --marked must be given together")
            if self.n_items > DEFAULT_CONFIG.max_items:
                raise ValueError(
                    f"--n-items {self.n_items} exceeds the limit of {DEFAULT_CONFIG.max_items}")
            # rejects empty sets and indices outside [0, N)
            Geometry.from_marked(self.n_items, self.marked)
        if has_beta and self.command != 'sweep':
            if not math.isfinite(self.beta) or not 0.0 < self.beta < math.pi / 2:
                raise ValueError(f"--beta must lie in (0, pi/2), got {self.beta}")
        if self.command != 'sweep' and self.member is None:
            raise ValueError("--member is required")

    @property
    def problem_beta(self) -> float:
        if self.beta is not None:
            return self.beta
        return Geometry.from_marked(self.n_items, self.marked).beta


def _parse_marked(text: str) -> List[int]:
    try:
        return [int(item) for item in text.split(',') if item.strip()]
    except ValueError:
        raise ValueError(f"--marked must be comma-separated integers, got {text!r}") from None


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors become ValueError so they share exit code 1"""

    def error(self, message):
        raise ValueError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog='sure_search',
        description='Sure-success quantum search planning and verification')
    sub = parser.add_subparsers(dest='command', required=True)

    def common(p: argparse.ArgumentParser, instance: bool = True):
        p.add_argument('--output', default=None, help='Output file (default: stdout)')
        p.add_argument('--quiet', action='store_true', help='Suppress stderr summary')
        if instance:
            p.add_argument('--beta', type=float, help='Problem angle, sin(beta) = sqrt(M/N)')
            p.add_argument('--n-items', type=int, help='Number of items N')
            p.add_argument('--marked', help='Comma-separated marked indices')
            p.add_argument('--member', choices=[m.value for m in MemberKind],
                           help='Family member')
            p.add_argument('--theta-override', type=float,
                           help='Run at this theta instead of theta_op (not sure-success)')

    common(sub.add_parser('plan', help='Minimal-call sure-success plan'))
    common(sub.add_parser('verify', help='Plan and verify by simulation'))
    common(sub.add_parser('simulate', help='Success probability trace on N items'))

    sweep_parser = sub.add_parser('sweep', help='Oracle-call curves over theta')
    common(sweep_parser, instance=False)
    sweep_parser.add_argument('--beta', type=float, required=True)
    sweep_parser.add_argument('--theta-min', type=float, default=0.2)
    sweep_parser.add_argument('--theta-max', type=float, default=2.0 * math.pi - 0.2)
    sweep_parser.add_argument('--steps', type=int, default=2001)
    sweep_parser.add_argument('--format', choices=['csv', 'json'], default='csv')
    return parser


def sanitize_for_json(obj: Any) -> Any:
    """NaN and infinities become null"""
    if isinstance(obj, dict):
        return {k: sanitize_for_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize_for_json(item) for item in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def _json_text(document: Any) -> str:
    return json.dumps(sanitize_for_json(document), indent=2, allow_nan=False) + '\n'


def _emit(text: str, output_path: Optional[str]):
    if output_path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(output_path, 'w', encoding='utf-8', newline='\n') as handle:
        handle.write(text)


def _log(config: CliConfig, message: str):
    if not config.quiet:
        print(f"[CLI] {message}", file=sys.stderr)


def _plan(config: CliConfig) -> Plan:
    beta = config.problem_beta
    if config.theta_override is not None:
        return plan_for_theta(config.member, beta, config.theta_override)
    return make_plan(config.member, beta)


def format_sweep_csv(rows) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([format(value, '.15g')
                         for value in (row.theta, row.c_even, row.c_odd, row.c_grover)])
    return buffer.getvalue()


# =============================================================================
# COMMANDS
# =============================================================================

def cmd_plan(config: CliConfig) -> int:
    plan = _plan(config)
    _emit(_json_text(plan.to_dict()), config.output_path)
    _log(config, f"{plan.member.value} beta={plan.beta:.6g}: {plan.oracle_calls} oracle calls "
                 f"at theta={plan.theta:.12g}")
    return EXIT_OK


def cmd_sweep(config: CliConfig) -> int:
    rows = sweep(config.beta, theta_grid(config.theta_min, config.theta_max, config.steps))
    if config.format == 'json':
        text = _json_text([
            {'theta': r.theta, 'c_even': r.c_even, 'c_odd': r.c_odd, 'c_grover': r.c_grover}
            for r in rows
        ])
    else:
        text = format_sweep_csv(rows)
    _emit(text, config.output_path)
    _log(config, f"beta={config.beta:.6g}: {len(rows)} rows")
    return EXIT_OK


def cmd_verify(config: CliConfig) -> int:
    plan = _plan(config)
    subspace = run_subspace(plan)
    report = plan.to_dict()
    report.pop('solve', None)
    report['theta_override'] = config.theta_override is not None
    report['p_subspace'] = subspace.success_probability
    report['p_full'] = None
    report['difference'] = None
    probabilities = [subspace.success_probability]
    if config.n_items is not None:
        full = run_full(plan, config.n_items, config.marked)
        report['p_full'] = full.success_probability
        report['difference'] = abs(full.success_probability - subspace.success_probability)
        probabilities.append(full.success_probability)
    passed = min(probabilities) >= 1.0 - DEFAULT_CONFIG.success_tolerance
    report['passed'] = passed
    _emit(_json_text(report), config.output_path)
    _log(config, f"{plan.member.value}: p={subspace.success_probability:.15f} "
                 f"({'sure success' if passed else 'FAILED'})")
    if not passed:
        raise SureSuccessViolation(
            f"success probability {min(probabilities):.15f} below 1 - {DEFAULT_CONFIG.success_tolerance}")
    return EXIT_OK


def cmd_simulate(config: CliConfig) -> int:
    plan = _plan(config)
    result = run_full(plan, config.n_items, config.marked, record_trace=True)
    _emit(_json_text(result.trace), config.output_path)
    _log(config, f"{plan.member.value} N={config.n_items}: {len(result.trace)} checkpoints, "
                 f"final p={result.success_probability:.15f}")
    return EXIT_OK


COMMANDS = {
    'plan': cmd_plan,
    'sweep': cmd_sweep,
    'verify': cmd_verify,
    'simulate': cmd_simulate,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point"""
    try:
        args = build_parser().parse_args(argv)
        config = CliConfig.from_args(args)
        return COMMANDS[config.command](config)
    except SureSuccessViolation as e:
        print(f"[CLI] ERROR: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except QuantumSearchError as e:
        print(json.dumps({'error': f"{type(e).__name__}: {e}"}))
        print(f"[CLI] ERROR: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as e:
        print(json.dumps({'error': f"{type(e).__name__}: {e}"}))
        print(f"[CLI] ERROR: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == '__main__':
    sys.exit(main())
