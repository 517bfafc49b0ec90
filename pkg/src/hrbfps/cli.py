"""
Command line entry point.

    hrbfps run   --problem poisson1d --n 9 --epsilon 1.444 --alpha 0.7404 --beta 0.0406
    hrbfps sweep --problem poisson1d --axis nodes --values 9,16,25 --out sweep.csv

Exit status: 0 success, 1 usage error, 2 solver failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import fields

from .bench import ExperimentConfig, UsageError, reports_to_text, run_experiment, run_sweep

EXIT_OK, EXIT_USAGE, EXIT_SOLVER = 0, 1, 2

_PROBLEMS = ["poisson1d", "helmholtz2d-source", "helmholtz2d-exact", "transport1d", "laplace2d"]
_CONFIG_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(p):
    S = argparse.SUPPRESS
    p.add_argument("--config", default=S, help="key = value file; flags override it")
    p.add_argument("--problem", choices=_PROBLEMS + ["helmholtz2d_source", "helmholtz2d_exact"], default=S)
    p.add_argument("--n", type=int, default=S, help="nodes per dimension")
    p.add_argument("--kernel", choices=["gaussian", "cubic", "hybrid"], default=S)
    p.add_argument("--epsilon", type=float, default=S)
    p.add_argument("--alpha", type=float, default=S)
    p.add_argument("--beta", type=float, default=S)
    p.add_argument("--k", type=float, default=S, help="Helmholtz wavenumber")
    p.add_argument("--c", type=float, default=S, help="transport speed")
    p.add_argument("--dt", type=float, default=S)
    p.add_argument("--t-final", dest="t_final", type=float, default=S)
    p.add_argument("--literal-bc", dest="literal_bc", action="store_true", default=S,
                   help="Laplace: put sin(3 pi x)/5, not sin(3 pi z)/5, on the x = 1 edge")
    p.add_argument("--optimize", choices=["none", "rms", "loocv"], default=S)
    p.add_argument("--swarm", type=int, default=S)
    p.add_argument("--generations", type=int, default=S)
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--spectrum", action="store_true", default=S)
    p.add_argument("--no-timing", dest="timing", action="store_false", default=S,
                   help="leave wall_time empty so reruns are byte-identical")
    p.add_argument("--out", default=S)
    p.add_argument("--format", choices=["csv", "json"], default=S)
    p.add_argument("--history-out", dest="history_out", default=S)
    p.add_argument("--solution-out", dest="solution_out", default=S)
    p.add_argument("--spectrum-out", dest="spectrum_out", default=S)
    p.add_argument("-v", "--verbose", action="store_true", default=False)


def build_parser():
    parser = _Parser(prog="hrbfps", description="Hybrid RBF-PS benchmark runner")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add_common(sub.add_parser("run", help="run one experiment"))
    sw = sub.add_parser("sweep", help="run one experiment per value")
    _add_common(sw)
    sw.add_argument("--axis", choices=["nodes", "epsilon"], required=True)
    sw.add_argument("--values", required=True, help="comma-separated list")
    return parser


def _coerce(key, text):
    t = _CONFIG_TYPES[key]
    t = t if isinstance(t, str) else getattr(t, "__name__", str(t))
    if "bool" in t:
        low = text.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise UsageError(key, f"not a boolean: {text!r}")
    try:
        if "int" in t:
            return int(text)
        if "float" in t:
            return float(text)
    except ValueError:
        raise UsageError(key, f"cannot parse {text!r}") from None
    return text.strip()


def read_config_file(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment; keys use flag names."""
    out = {}
    try:
        lines = open(path).read().splitlines()
    except OSError as exc:
        raise UsageError("config", str(exc)) from None
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError("config", f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key == "no_timing":
            key, value = "timing", str(value.lower() not in ("1", "true", "yes", "on"))
        if key in ("axis", "values"):
            out[key] = value
            continue
        if key not in _CONFIG_TYPES:
            raise UsageError(key, f"unknown key in {path}")
        out[key] = _coerce(key, value)
    return out


def main(argv=None):
    parser = build_parser()
    args = vars(parser.parse_args(argv))
    logging.basicConfig(level=logging.DEBUG if args.pop("verbose") else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    command = args.pop("command")
    try:
        settings = read_config_file(args.pop("config")) if "config" in args else {}
        settings.update(args)
        axis, values = settings.pop("axis", None), settings.pop("values", None)
        config = ExperimentConfig(**settings)
        if command == "run":
            reports = [run_experiment(config)]
        else:
            try:
                parsed = [float(v) for v in str(values).split(",") if v.strip()]
            except ValueError:
                raise UsageError("values", f"cannot parse {values!r}") from None
            if axis == "nodes":
                if any(v != int(v) for v in parsed):
                    raise UsageError("values", "node counts must be integers")
                parsed = [int(v) for v in parsed]
            reports = run_sweep(config, axis, parsed)
    except UsageError as exc:
        print(f"hrbfps: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not config.out:
        sys.stdout.write(reports_to_text(reports, config.format))
    failed = [r for r in reports if r.status != "ok"]
    for r in failed:
        print(f"hrbfps: {r.problem} n={r.n} failed: {r.message}", file=sys.stderr)
    return EXIT_SOLVER if failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
