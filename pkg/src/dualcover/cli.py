"""Command-line entry point. Every subcommand prints one JSON run report.

Exit codes: 0 success, 2 invalid input, 3 size cap exceeded, 64 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

from . import covering, duality, gallery, instances, schauder
from .errors import DualCoverError, SizeCapError
from .exact import ComplexPair, parse_scalar
from .semimetric import (
    DualityKernel,
    FiniteSemimetricSpace,
    induced_dA,
    induced_dB,
    kernel_from_json,
    kernel_to_json,
    read_space_csv,
    space_to_csv,
    validate_space,
)
from .serialize import to_jsonable

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CAP = 3
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


class _Run:
    """Collects input digests and phase timings for the report."""

    def __init__(self, float_mode: bool):
        self.float_mode = float_mode
        self.files: list[bytes] = []
        self.timings: dict[str, float] = {}
        self.approximate = float_mode

    def read(self, path) -> str:
        data = Path(path).read_bytes()
        self.files.append(data)
        return data.decode("utf-8")

    @contextmanager
    def phase(self, name: str):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] = round((time.perf_counter() - t0) * 1000, 3)

    def digest(self) -> str | None:
        if not self.files:
            return None
        h = hashlib.sha256()
        for data in self.files:
            h.update(hashlib.sha256(data).digest())
        return h.hexdigest()

    def scalar(self, text):
        value = parse_scalar(text, allow_float=self.float_mode)
        return float(value) if self.float_mode else value


def _to_float(x):
    if isinstance(x, ComplexPair):
        return ComplexPair(float(x.re), float(x.im))
    return float(x)


def _load_space(run: _Run, path) -> FiniteSemimetricSpace:
    space = read_space_csv(run.read(path), allow_float=run.float_mode)
    if run.float_mode:
        space = FiniteSemimetricSpace(
            space.labels, [[float(x) for x in row] for row in space.dist]
        )
    return space


def _load_kernel(run: _Run, path) -> DualityKernel:
    kernel = kernel_from_json(run.read(path), allow_float=run.float_mode)
    if run.float_mode:
        kernel = DualityKernel(
            kernel.a_labels,
            kernel.b_labels,
            [[_to_float(x) for x in row] for row in kernel.h],
            kernel.field,
        )
    return kernel


# --- subcommands -----------------------------------------------------------


def cmd_validate(args, run: _Run):
    with run.phase("parse"):
        if args.kernel:
            kernel = _load_kernel(run, args.kernel)
            spaces = {"d_A": induced_dA(kernel), "d_B": induced_dB(kernel)}
        else:
            spaces = {"space": _load_space(run, args.space)}
    with run.phase("compute"):
        out = {}
        for name, space in spaces.items():
            violations = validate_space(space)
            out[name] = {
                "points": len(space),
                "valid": not violations,
                "violations": [
                    {"axiom": v.axiom, "indices": list(v.indices), "detail": v.detail}
                    for v in violations
                ],
            }
    valid = all(v["valid"] for v in out.values())
    results = {"valid": valid, **out}
    if not valid:
        first = next(v["violations"][0] for v in out.values() if v["violations"])
        return results, f"{first['axiom']} violated at {first['indices']}: {first['detail']}"
    return results, None


def cmd_cover(args, run: _Run):
    with run.phase("parse"):
        space = _load_space(run, args.space)
        eps = run.scalar(args.epsilon)
    with run.phase("compute"):
        if args.kind == "intrinsic":
            fn = covering.greedy_net if args.greedy else covering.exact_intrinsic_cover
        else:
            fn = covering.greedy_diameter_cover if args.greedy else covering.exact_diameter_cover
        sol = fn(space, eps)
    return sol, None


def cmd_profile(args, run: _Run):
    with run.phase("parse"):
        space = _load_space(run, args.space)
    with run.phase("compute"):
        prof = covering.covering_profile(space)
    return prof, None


def cmd_dual_cover(args, run: _Run):
    with run.phase("parse"):
        kernel = _load_kernel(run, args.kernel)
        eps = run.scalar(args.epsilon)
        delta = run.scalar(args.delta)
        net = None
        if args.net:
            try:
                net = [int(x) for x in args.net.split(",")]
            except ValueError:
                raise UsageError(f"--net must be comma-separated indices, got {args.net!r}")
    with run.phase("compute"):
        if net is None:
            net = covering.exact_intrinsic_cover(induced_dA(kernel), eps).certificate
        part = duality.grid_partition(kernel, net, delta, eps)
    results = to_jsonable(part)
    results["nonempty_count"] = part.nonempty_count
    results["violations"] = part.violations()
    return results, None


def cmd_bounds(args, run: _Run):
    with run.phase("parse"):
        C = run.scalar(args.C)
        delta = run.scalar(args.delta)
        n = parse_scalar(args.n)
        if getattr(n, "denominator", 1) != 1:
            raise UsageError("--n must be an integer")
    with run.phase("compute"):
        fn = duality.bound_complex if args.field == "complex" else duality.bound_real
        bound = fn(C, delta, int(n))
    return {"bound": bound}, None


def cmd_schauder(args, run: _Run):
    with run.phase("parse"):
        data = json.loads(run.read(args.instance))
        if run.float_mode:
            data = _floats_to_text(data)
        inst = schauder.instance_from_json(data)
        eps = run.scalar(args.epsilon)
        delta = run.scalar(args.delta)
    with run.phase("compute"):
        report = schauder.schauder_report(inst, eps, delta)
    if report.forward.approximate or (report.backward and report.backward.approximate):
        run.approximate = True
    results = to_jsonable(report)
    results["holds"] = report.holds
    return results, None


def _floats_to_text(obj):
    # float entries become the exact binary rational they denote
    if isinstance(obj, float):
        return str(Fraction(obj))
    if isinstance(obj, list):
        return [_floats_to_text(x) for x in obj]
    if isinstance(obj, dict):
        return {k: _floats_to_text(v) for k, v in obj.items()}
    return obj


def _parse_params(text: str | None) -> dict:
    if not text:
        return {}
    out = {}
    for part in text.split(","):
        key, sep, value = part.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"--params entries must look like key=value, got {part!r}")
        out[key.strip()] = value.strip()
    return out


def cmd_examples(args, run: _Run):
    if args.action == "list":
        return [
            {"name": item.name, "description": item.description, "params": item.params}
            for item in gallery.GALLERY.values()
        ], None
    if not args.name:
        raise UsageError("examples run needs --name")
    with run.phase("compute"):
        report = gallery.run_example(args.name, _parse_params(args.params))
    return report, None


def cmd_generate(args, run: _Run):
    rng = random.Random(args.seed)
    with run.phase("compute"):
        if args.kind == "space":
            space = instances.random_space(rng, args.n, args.space_kind)
            text = space_to_csv(space)
            payload = {"kind": "space", "csv": text}
        elif args.kind == "kernel":
            kernel = instances.random_kernel(rng, args.n, args.m or args.n, args.field)
            payload = {"kind": "kernel", "kernel": kernel_to_json(kernel)}
            text = json.dumps(payload["kernel"], indent=2)
        else:
            inst = instances.random_operator(rng, max_dim=min(args.n, 4))
            payload = {"kind": "operator", "instance": schauder.instance_to_json(inst)}
            text = json.dumps(payload["instance"], indent=2)
    if args.out:
        Path(args.out).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
        payload["written"] = str(args.out)
    payload["seed"] = args.seed
    return payload, None


# --- wiring ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--float",
        action="store_true",
        default=argparse.SUPPRESS,
        help="accept decimal inputs and run in approximate arithmetic",
    )
    common.add_argument(
        "--seed", type=int, default=argparse.SUPPRESS, help="seed for random instances"
    )

    p = _Parser(prog="dualcover", description="Covering numbers of dual semimetric spaces.")
    p.add_argument("--float", action="store_true", help=argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=0, help=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    v = sub.add_parser("validate", parents=[common], help="check semimetric axioms")
    src = v.add_mutually_exclusive_group(required=True)
    src.add_argument("--space", help="distance matrix CSV")
    src.add_argument("--kernel", help="kernel JSON; validates both induced spaces")
    v.set_defaults(func=cmd_validate)

    c = sub.add_parser("cover", parents=[common], help="covering number at one radius")
    c.add_argument("--space", required=True)
    c.add_argument("--epsilon", required=True)
    c.add_argument("--kind", choices=("intrinsic", "diameter"), default="intrinsic")
    mode = c.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--greedy", action="store_true")
    c.set_defaults(func=cmd_cover)

    pr = sub.add_parser("profile", parents=[common], help="covering numbers at every breakpoint")
    pr.add_argument("--space", required=True)
    pr.set_defaults(func=cmd_profile)

    d = sub.add_parser("dual-cover", parents=[common], help="grid partition of B")
    d.add_argument("--kernel", required=True)
    d.add_argument("--epsilon", required=True)
    d.add_argument("--delta", required=True)
    d.add_argument("--net", help="comma-separated A-indices (default: an optimal net)")
    d.set_defaults(func=cmd_dual_cover)

    b = sub.add_parser("bounds", parents=[common], help="ceil(C/delta)^n style bounds")
    b.add_argument("--C", required=True)
    b.add_argument("--delta", required=True)
    b.add_argument("--n", required=True)
    b.add_argument("--field", choices=("real", "complex"), default="real")
    b.set_defaults(func=cmd_bounds)

    s = sub.add_parser("schauder", parents=[common], help="operator instance report")
    s.add_argument("--instance", required=True)
    s.add_argument("--epsilon", required=True)
    s.add_argument("--delta", required=True)
    s.set_defaults(func=cmd_schauder)

    e = sub.add_parser("examples", parents=[common], help="worked examples")
    e.add_argument("action", choices=("list", "run"))
    e.add_argument("--name", choices=tuple(gallery.GALLERY))
    e.add_argument("--params", help="key=value pairs separated by commas")
    e.set_defaults(func=cmd_examples)

    g = sub.add_parser("generate", parents=[common], help="seeded random instance")
    g.add_argument("--kind", choices=("space", "kernel", "operator"), default="space")
    g.add_argument("--n", type=int, default=6, help="points (space), |A| (kernel), max dim")
    g.add_argument("--m", type=int, help="|B| for kernels (default: n)")
    g.add_argument("--space-kind", choices=instances.SPACE_KINDS)
    g.add_argument("--field", choices=("real", "complex"), default="real")
    g.add_argument("--out", help="also write the instance to this file")
    g.set_defaults(func=cmd_generate)
    return p


def _diagnostic(kind: str, message: str) -> None:
    tag = f"{kind}:"
    if sys.stderr.isatty() and not os.environ.get("NO_COLOR"):
        tag = f"\x1b[31m{tag}\x1b[0m"
    print(f"{tag} {message}", file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError(parser.format_usage() + "dualcover: error: missing subcommand")
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    run = _Run(bool(args.float))
    try:
        results, failure = args.func(args, run)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except SizeCapError as exc:
        _diagnostic("size cap", str(exc))
        return EXIT_CAP
    except (DualCoverError, ValueError, KeyError, TypeError, OSError) as exc:
        _diagnostic("invalid input", str(exc) or type(exc).__name__)
        return EXIT_INVALID

    report = {
        "command": args.command,
        "inputs_digest": run.digest(),
        "results": to_jsonable(results),
        "timings": run.timings,
        "exactness": "float-approx" if run.approximate else "exact-rational",
    }
    print(json.dumps(report, sort_keys=True, indent=2))
    if failure:
        _diagnostic("invalid input", failure)
        return EXIT_INVALID
    return EXIT_OK


__all__ = ["main", "build_parser", "EXIT_OK", "EXIT_INVALID", "EXIT_CAP", "EXIT_USAGE"]

