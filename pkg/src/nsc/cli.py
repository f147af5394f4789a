"""Command-line front end.

Usage examples::

    nsc entropy --input probs.txt --kind coupled --alpha 1 --kappa 1
    nsc sweep --figure 3 --output fig3.csv
    nsc verify --suite all
    nsc sample --alpha 1 --kappa 1 --sigma 1 --n 1000 --seed 7 --output draws.csv
    nsc replay fig3.csv --output again.csv

Every output starts with a ``# nsc-manifest: {...}`` comment. ``nsc replay``
regenerates a file from that line; the result is byte-identical for the same
inputs and release.

Exit codes: 0 success, 1 verification failure, 2 input error,
3 normalization error, 4 numerical failure.
"""

import argparse
import json
import math
import os
import sys
import tempfile

from . import __version__
from .algebra import Coupling
from .distributions import CoupledDensityParams, sample
from .entropy import EntropyKind, EntropySpec, _from_log_gm
from .escort import DiscreteDistribution
from .exceptions import NormalizationError, NSCError, QuadratureError
from .figures import figure_rows
from .uncertainty import _log_gm_discrete
from .verify import SUITES, run_suite

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT = 2
EXIT_NORMALIZATION = 3
EXIT_NUMERICAL = 4

MANIFEST_PREFIX = "# nsc-manifest: "


class InputError(ValueError):
    """Malformed user input (exit code 2)."""


# ---------------------------------------------------------------- formatting


def format_value(value):
    """17 significant digits for floats, ``str`` for everything else."""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def format_csv(columns, rows):
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(format_value(row[c]) for c in columns))
    return "\n".join(lines) + "\n"


def make_manifest(command, parameters, output_path=None, seed=None):
    return {
        "command": command,
        "parameters": parameters,
        "output_path": output_path,
        "seed": seed,
        "version": __version__,
    }


def manifest_line(manifest):
    return MANIFEST_PREFIX + json.dumps(manifest, sort_keys=True, separators=(",", ":")) + "\n"


def read_manifest(path):
    """Return the manifest embedded in an output file."""
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith(MANIFEST_PREFIX):
                return json.loads(line[len(MANIFEST_PREFIX):])
    raise InputError(f"{path}: no nsc manifest header found")


def read_probabilities(path):
    """Parse one probability per line; ``#`` starts a comment."""
    values = []
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                text = raw.split("#", 1)[0].strip()
                if not text:
                    continue
                try:
                    values.append(float(text))
                except ValueError:
                    raise InputError(f"{path}:{lineno}: not a number: {text!r}") from None
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    if not values:
        raise InputError(f"{path}: no probabilities found")
    return values


def _float_list(text):
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _str_list(text):
    return [v.strip() for v in str(text).split(",") if v.strip()]


# ---------------------------------------------------------------- renderers
# Each renderer maps a manifest to the complete output text, so replaying a
# manifest goes through exactly the same code as the original run.


def render_entropy(manifest):
    p = manifest["parameters"]
    probs = DiscreteDistribution(read_probabilities(p["input"]), renormalize=p["renormalize"]).probs
    kinds = list(EntropyKind) if p["kind"] == "all" else [EntropyKind.parse(p["kind"])]
    coupling = Coupling(p["kappa"], p["alpha"])
    columns = ["kind", "alpha", "kappa", "moment", "average_uncertainty", "entropy"]
    rows = []
    for kind in kinds:
        spec = EntropySpec(kind, coupling)
        log_gm = _log_gm_discrete(probs, spec.moment)
        rows.append(
            {
                "kind": kind.value,
                "alpha": coupling.alpha,
                "kappa": coupling.kappa,
                "moment": float(spec.moment),
                "average_uncertainty": math.exp(log_gm),
                "entropy": _from_log_gm(log_gm, spec),
            }
        )
    return manifest_line(manifest) + format_csv(columns, rows)


def render_sweep(manifest):
    p = dict(manifest["parameters"])
    figure = p.pop("figure")
    overrides = {k: v for k, v in p.items() if v is not None}
    if "kinds" in overrides:
        overrides["kinds"] = [EntropyKind.parse(k) for k in overrides["kinds"]]
    columns, rows = figure_rows(figure, **overrides)
    return manifest_line(manifest) + format_csv(columns, rows)


def render_sample(manifest):
    p = manifest["parameters"]
    params = CoupledDensityParams(mu=p["mu"], sigma=p["sigma"], kappa=p["kappa"], alpha=p["alpha"])
    xs = sample(params, p["n"], manifest["seed"])
    body = "x\n" + "".join(f"{v:.17g}\n" for v in xs)
    return manifest_line(manifest) + body


def render_verify(manifest):
    results = run_suite(manifest["parameters"]["suite"])
    lines = [f"[{suite}] {r.line()}" for suite, r in results]
    failed = sum(1 for _, r in results if not r.passed)
    lines.append(f"{len(results) - failed} passed, {failed} failed")
    return manifest_line(manifest) + "\n".join(lines) + "\n", failed == 0


RENDERERS = {
    "entropy": render_entropy,
    "sweep": render_sweep,
    "sample": render_sample,
}


# ---------------------------------------------------------------- output


def write_output(text, path):
    """Write to ``path`` atomically, or to standard output when ``path`` is None."""
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".nsc-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


# ---------------------------------------------------------------- commands


def cmd_entropy(args):
    kind = args.kind if args.kind == "all" else EntropyKind.parse(args.kind).value
    manifest = make_manifest(
        "entropy",
        {
            "input": args.input,
            "kind": kind,
            "alpha": args.alpha,
            "kappa": args.kappa,
            "renormalize": args.renormalize,
        },
        args.output,
    )
    write_output(render_entropy(manifest), args.output)
    return EXIT_OK


def cmd_sweep(args):
    params = {"figure": args.figure, "mu": args.mu}
    if args.figure == 1:
        params.update(kappas=args.kappa, sigma=_single(args.sigma, "sigma", 1.0))
    elif args.figure == 2:
        params.update(
            dist_kappas=args.kappa,
            metric_kappas=args.metric_kappa,
            sigma=_single(args.sigma, "sigma", 1.0),
            scale=args.scale,
        )
    else:
        params.update(sigmas=args.sigma, kappas=args.kappa, kinds=_kinds(args.kind))
    output = args.output or f"fig{args.figure}.csv"
    manifest = make_manifest("sweep", params, output)
    write_output(render_sweep(manifest), output)
    print(f"wrote {output}", file=sys.stderr)
    return EXIT_OK


def _single(values, name, default):
    if values is None:
        return default
    if len(values) != 1:
        raise InputError(f"--{name} takes a single value for this figure")
    return values[0]


def _kinds(text):
    if text is None or text == "all":
        return None
    return [EntropyKind.parse(k).value for k in _str_list(text)]


def cmd_sample(args):
    params = {"alpha": args.alpha, "kappa": args.kappa, "sigma": args.sigma, "mu": args.mu, "n": args.n}
    # validate before touching the output
    CoupledDensityParams(mu=args.mu, sigma=args.sigma, kappa=args.kappa, alpha=args.alpha)
    manifest = make_manifest("sample", params, args.output, seed=args.seed)
    write_output(render_sample(manifest), args.output)
    return EXIT_OK


def cmd_verify(args):
    manifest = make_manifest("verify", {"suite": args.suite}, args.output)
    text, ok = render_verify(manifest)
    write_output(text, args.output)
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def cmd_replay(args):
    manifest = read_manifest(args.file)
    command = manifest.get("command")
    if command == "verify":
        text, ok = render_verify(manifest)
        write_output(text, args.output)
        return EXIT_OK if ok else EXIT_VERIFY_FAILED
    if command not in RENDERERS:
        raise InputError(f"cannot replay command {command!r}")
    write_output(RENDERERS[command](manifest), args.output)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser():
    parser = argparse.ArgumentParser(
        prog="nsc", description="Nonlinear statistical coupling toolkit."
    )
    parser.add_argument("--version", action="version", version=f"nsc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", help="entropy and average uncertainty of a probability file")
    p.add_argument("--input", required=True, help="text file, one probability per line")
    p.add_argument("--kind", default="coupled", help="entropy kind or 'all' (default: coupled)")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--kappa", type=float, default=0.0)
    p.add_argument("--renormalize", action="store_true", help="rescale probabilities to sum to one")
    p.add_argument("--output", default=None, help="write here instead of standard output")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("sweep", help="grid data behind a figure, as CSV")
    p.add_argument("--figure", type=int, required=True, choices=(1, 2, 3, 4))
    p.add_argument("--output", default=None, help="CSV path (default: figN.csv)")
    p.add_argument("--kappa", type=_float_list, default=None,
                   help="comma-separated couplings (distribution couplings for figure 2)")
    p.add_argument("--sigma", type=_float_list, default=None,
                   help="scale; a comma-separated list for figures 3 and 4")
    p.add_argument("--metric-kappa", type=_float_list, default=None, help="figure 2 metric couplings")
    p.add_argument("--kind", default=None, help="figures 3/4: comma-separated entropy kinds")
    p.add_argument("--scale", choices=("coupled-moment", "fixed"), default="coupled-moment",
                   help="figure 2 scale constraint")
    p.add_argument("--mu", type=float, default=0.0)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("--suite", default="all", choices=sorted(SUITES) + ["all"])
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sample", help="seeded draws from a coupled density")
    p.add_argument("--alpha", type=int, default=1, choices=(1, 2))
    p.add_argument("--kappa", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("replay", help="regenerate an output file from its manifest")
    p.add_argument("file")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NormalizationError as exc:
        print(f"nsc: normalization error: {exc}", file=sys.stderr)
        return EXIT_NORMALIZATION
    except QuadratureError as exc:
        print(f"nsc: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (InputError, NSCError, ValueError, KeyError) as exc:
        print(f"nsc: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
