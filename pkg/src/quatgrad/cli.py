"""Command-line front end.

Exit codes: 0 success, 1 parse error (arguments, quaternion strings,
config files), 2 domain error, 3 validation-suite failure, 4 divergent
QLMS run.
"""

import argparse
import re
import sys
from pathlib import Path

from . import qlms, validate
from .errors import DomainError
from .hr import Side, left_from_real, right_from_real
from .quaternion import Quaternion
from .regular import Elementary

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_DOMAIN = 2
EXIT_VALIDATION = 3
EXIT_DIVERGED = 4


class _Parser(argparse.ArgumentParser):
    """argparse reports usage problems with exit code 1 (parse failure)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="quatgrad",
        description="Quaternion HR-gradient calculator and QLMS runner.")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p_eval = sub.add_parser(
        "eval-grad", help="evaluate the HR gradient of a named function")
    p_eval.add_argument("function",
                        help="exp | ln | tanh | power:<n>[:<center>]")
    p_eval.add_argument("point", help="quaternion a+bi+cj+dk")
    p_eval.add_argument("--side", choices=("left", "right"), default="left")
    # let points with a negative real part ("-1+0i+0j+0k") parse as
    # positionals instead of being mistaken for option flags
    p_eval._negative_number_matcher = re.compile(r"^-\d")

    p_val = sub.add_parser("validate", help="run the self-check suites")
    p_val.add_argument("suite", nargs="?", default="all",
                       choices=("all",) + validate.SUITE_NAMES)
    p_val.add_argument("--seed", type=int, default=20_240_601)

    p_run = sub.add_parser("qlms-run",
                           help="run a QLMS system-identification experiment")
    p_run.add_argument("config", help="key=value config file")
    p_run.add_argument("output", help="CSV output path")
    return parser


def _parse_function(text: str) -> Elementary:
    if text == "exp":
        return Elementary.exp()
    if text == "ln":
        return Elementary.ln()
    if text == "tanh":
        return Elementary.tanh()
    if text.startswith("power:"):
        fields = text.split(":")
        if len(fields) not in (2, 3):
            raise ValueError(f"bad power argument {text!r}, "
                             "expected power:<n>[:<center>]")
        n = int(fields[1])
        center = Quaternion.from_string(fields[2]) if len(fields) == 3 \
            else Quaternion(0.0)
        return Elementary.power(n, center)
    raise ValueError(f"unknown function {text!r} "
                     "(expected exp, ln, tanh or power:<n>[:<center>])")


def _cmd_eval_grad(args) -> int:
    try:
        fn = _parse_function(args.function)
        point = Quaternion.from_string(args.point)
    except ValueError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    side = Side.LEFT if args.side == "left" else Side.RIGHT
    try:
        grad = fn.real_gradient(point)
    except (DomainError, ZeroDivisionError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    h = left_from_real(grad) if side is Side.LEFT else right_from_real(grad)
    print(f"side: {h.side.value}")
    for label, value in zip(("d1", "dI", "dJ", "dK"), h.as_tuple()):
        print(f"{label}: {value}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    names = validate.SUITE_NAMES if args.suite == "all" else (args.suite,)
    reports = validate.run_suites(names, seed=args.seed)
    all_ok = True
    for report in reports:
        for check in report.checks:
            status = "pass" if check.ok else "FAIL"
            print(f"[{report.suite}] {check.name}: {status} "
                  f"({check.passed} passed, {check.failed} failed, "
                  f"worst error {check.worst_error:.2e})")
            for line in check.lines:
                print(line)
        print(f"{report.suite}: {'PASS' if report.ok else 'FAIL'} "
              f"(worst error {report.worst_error:.2e})")
        all_ok = all_ok and report.ok
    print(f"overall: {'PASS' if all_ok else 'FAIL'}")
    return EXIT_OK if all_ok else EXIT_VALIDATION


_CONFIG_KEYS = ("M", "mu", "iterations", "noise_power", "seed", "true_weights")


def load_experiment_config(path) -> qlms.ExperimentConfig:
    """Parse a key=value config file into an ExperimentConfig.

    Required keys: M, mu, iterations, noise_power, seed.  Optional:
    true_weights as semicolon-separated quaternion strings; when omitted,
    the target weights are drawn standard-normal from a generator seeded
    with (seed, 1) so they stay decorrelated from the input signal.
    """
    text = Path(path).read_text()
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        values[key] = value.strip()
    missing = [k for k in _CONFIG_KEYS[:-1] if k not in values]
    if missing:
        raise ValueError(f"missing required keys: {', '.join(missing)}")

    m = int(values["M"])
    seed = int(values["seed"])
    if "true_weights" in values:
        weights = tuple(Quaternion.from_string(part)
                        for part in values["true_weights"].split(";"))
    else:
        import numpy as np
        rng = np.random.default_rng([seed, 1])
        weights = tuple(Quaternion(*(float(x) for x in rng.standard_normal(4)))
                        for _ in range(m))
    return qlms.ExperimentConfig(
        filter_length=m,
        true_weights=weights,
        noise_power=float(values["noise_power"]),
        step_size=float(values["mu"]),
        iterations=int(values["iterations"]),
        rng_seed=seed,
    )


def _cmd_qlms_run(args) -> int:
    try:
        cfg = load_experiment_config(args.config)
    except (OSError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    record = qlms.run_system_identification(cfg)
    qlms.write_record_csv(record, args.output)
    print(f"wrote {args.output} ({len(record.squared_error)} iterations)")
    if record.diverged:
        print(f"diverged: weight norm exceeded {qlms.DIVERGENCE_LIMIT:.0e} "
              f"after {len(record.squared_error)} iterations", file=sys.stderr)
        return EXIT_DIVERGED
    final_err_sq = sum((w - wt).norm_sq()
                       for w, wt in zip(record.final_weights, cfg.true_weights))
    print(f"final weight error norm: {final_err_sq ** 0.5!r}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_PARSE
    if args.command == "eval-grad":
        return _cmd_eval_grad(args)
    if args.command == "validate":
        return _cmd_validate(args)
    return _cmd_qlms_run(args)


if __name__ == "__main__":
    sys.exit(main())
