"""Command-line front end.

Verbs: eval, dual, verify, fuzz, suite, quad.  Structured output is always
the same JSON record the library produces; the human-readable view is just
a formatting of it.  Exit codes: 0 all checks pass, 1 any check failed,
2 usage or config error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Sequence

from .errors import MzvError
from .identities import IDENTITIES, IdentityCheck
from .indices import MzvIndex, dual
from .quadrature import QUAD_CHECKS, run_quad_grid
from .report import load_config, render_table, report_from_records, run_suite
from .rng import XorShift64Star
from .series import NestedSumSpec, evaluate, mzv

__all__ = ["main"]

# flags each identity's checker accepts (first tuple: required)
_VERIFY_PARAMS: dict[str, tuple[tuple[str, ...], tuple[str, ...]]] = {
    "duality": (("index",), ()),
    "sum_formula": (("m", "p"), ()),
    "ohno": (("index", "m"), ()),
    "eq12": (("p", "q", "m"), ()),
    "theorem1": (("p", "q", "r", "m"), ("a",)),
    "cor15": (("p", "m", "r"), ()),
    "eq24": (("pvec", "qvec"), ("a",)),
    "theorem3": (("p", "q", "r", "m"), ()),
    "restricted_sum": (("p", "q", "r"), ()),
    "section4": (("m", "p"), ()),
}

_QUAD_PARAMS: dict[str, tuple[str, ...]] = {
    "anchor": (),
    "zeta2": (),
    "ones": ("m", "n"),
    "blocks": ("p", "q", "r", "ell"),
    "trunc": ("p", "q", "a", "r"),
    "threeway": ("p", "q", "r", "m"),
}


def _int_vec(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p", type=int)
    parser.add_argument("--q", type=int)
    parser.add_argument("--r", type=int)
    parser.add_argument("--m", type=float)
    parser.add_argument("--n", type=int)
    parser.add_argument("--ell", type=int)
    parser.add_argument("--a", type=float)
    parser.add_argument("--index")
    parser.add_argument("--pvec", type=_int_vec)
    parser.add_argument("--qvec", type=_int_vec)


def _add_report_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--acc", type=float, default=None, help="per-side accuracy target")
    parser.add_argument("--tolerance", type=float, default=None)
    parser.add_argument("--json", action="store_true", help="print the JSON report")
    parser.add_argument("--out", help="also write the JSON report to this file")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mzv",
        description="Evaluate nested zeta sums and verify their duality identities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate an index or a nested-sum spec file")
    p_eval.add_argument("index", nargs="?", help='index like "(1,2)" or "{1}^2,3"')
    p_eval.add_argument("--spec", help="JSON file holding a nested-sum spec")
    p_eval.add_argument("--acc", type=float, default=1e-10)
    p_eval.add_argument("--json", action="store_true")

    p_dual = sub.add_parser("dual", help="print the dual of an admissible index")
    p_dual.add_argument("index")

    p_verify = sub.add_parser("verify", help="check one identity instance")
    p_verify.add_argument("identity", choices=sorted(IDENTITIES))
    _add_param_flags(p_verify)
    _add_report_flags(p_verify)

    p_fuzz = sub.add_parser("fuzz", help="seeded random identity instances")
    p_fuzz.add_argument("--identity", required=True, choices=sorted(IDENTITIES))
    p_fuzz.add_argument("--seed", type=int, default=0)
    p_fuzz.add_argument("--count", type=int, default=10)
    p_fuzz.add_argument("--ranges", help="JSON object of parameter ranges")
    _add_report_flags(p_fuzz)

    p_suite = sub.add_parser("suite", help="run a config-driven verification suite")
    p_suite.add_argument("--config", help="suite config JSON (default: packaged grid)")
    _add_report_flags(p_suite)

    p_quad = sub.add_parser("quad", help="quadrature cross-checks of the integral forms")
    p_quad.add_argument("form", choices=sorted(QUAD_CHECKS))
    _add_param_flags(p_quad)
    _add_report_flags(p_quad)

    return parser


def _emit(report: dict, args: argparse.Namespace) -> int:
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text if args.json else render_table(report))
    return 0 if report["summary"]["failed"] == 0 else 1


def _check_report(checks: list[IdentityCheck], echo: dict, started: float, seeds=None) -> dict:
    return report_from_records([c.as_dict() for c in checks], echo, started, seeds)


def _gather_params(args: argparse.Namespace, required: Sequence[str], optional: Sequence[str]) -> dict:
    params = {}
    for name in (*required, *optional):
        value = getattr(args, name, None)
        if value is None:
            if name in required:
                raise MzvError(f"missing required flag --{name}")
            continue
        if name == "m" and float(value).is_integer():
            value = int(value)
        params[name] = value
    allowed = set(required) | set(optional)
    for name in ("p", "q", "r", "m", "n", "ell", "a", "index", "pvec", "qvec"):
        if getattr(args, name, None) is not None and name not in allowed:
            raise MzvError(f"flag --{name} does not apply here")
    return params


def _cmd_eval(args: argparse.Namespace) -> int:
    if (args.index is None) == (args.spec is None):
        raise MzvError("need exactly one of an index argument or --spec FILE")
    if args.spec is not None:
        with open(args.spec, "r", encoding="utf-8") as fh:
            spec = NestedSumSpec.from_dict(json.load(fh))
        result = evaluate(spec, args.acc)
        label = args.spec
    else:
        index = MzvIndex.parse(args.index)
        result = mzv(index, args.acc)
        label = str(index)
    if args.json:
        print(json.dumps({"input": label, **result.as_dict()}, indent=2, sort_keys=True))
    else:
        print(f"{label} = {result.value!r}")
        print(
            f"  tail_bound={result.tail_bound:.3e} cutoff={result.cutoff} "
            f"mode={result.mode} accuracy_met={result.accuracy_met}"
            + (f" flags={','.join(result.flags)}" if result.flags else "")
        )
    return 0


def _cmd_dual(args: argparse.Namespace) -> int:
    print(dual(MzvIndex.parse(args.index)))
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    required, optional = _VERIFY_PARAMS[args.identity]
    params = _gather_params(args, required, optional)
    kwargs = {}
    if args.acc is not None:
        kwargs["acc"] = args.acc
    check = IDENTITIES[args.identity].check(tolerance=args.tolerance, **params, **kwargs)
    echo = {"identity": args.identity, "params": check.params}
    return _emit(_check_report([check], echo, time.time()), args)


def _cmd_fuzz(args: argparse.Namespace) -> int:
    if args.count < 0:
        raise MzvError("--count must be >= 0")
    ranges = json.loads(args.ranges) if args.ranges else {}
    if not isinstance(ranges, dict):
        raise MzvError("--ranges must be a JSON object")
    from .identities import draw_params

    started = time.time()
    rng = XorShift64Star(args.seed)
    info = IDENTITIES[args.identity]
    checks = []
    for _ in range(args.count):
        params = draw_params(args.identity, rng, ranges)
        kwargs = {"acc": args.acc} if args.acc is not None else {}
        checks.append(info.check(tolerance=args.tolerance, **params, **kwargs))
    echo = {"identity": args.identity, "seed": args.seed, "count": args.count, "ranges": ranges}
    return _emit(_check_report(checks, echo, started, [args.seed]), args)


def _cmd_suite(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    if args.acc is not None:
        config["accuracy"] = args.acc
    if args.tolerance is not None:
        config["tolerance"] = args.tolerance
    return _emit(run_suite(config), args)


def _cmd_quad(args: argparse.Namespace) -> int:
    names = _QUAD_PARAMS[args.form]
    given = {n: getattr(args, n) for n in names if getattr(args, n, None) is not None}
    for name in ("p", "q", "r", "m", "n", "ell", "a", "index", "pvec", "qvec"):
        if getattr(args, name, None) is not None and name not in names:
            raise MzvError(f"flag --{name} does not apply to quad form {args.form!r}")
    started = time.time()
    acc = args.acc if args.acc is not None else 1e-9
    if names and len(given) == len(names):
        params = dict(given)
        if "m" in params and args.form == "threeway":
            m = params["m"]
            params["m"] = int(m) if float(m).is_integer() else m
        elif "m" in params:
            params["m"] = int(params["m"])
        check_fn = QUAD_CHECKS[args.form][0]
        checks = [check_fn(acc=acc, tolerance=args.tolerance, **params)]
    elif given:
        raise MzvError(f"quad form {args.form!r} needs all of {names} (or none, for the default grid)")
    else:
        checks = run_quad_grid(args.form, None, acc, args.tolerance)
    echo = {"quad": args.form, "params": given or "default-grid", "accuracy": acc}
    return _emit(_check_report(checks, echo, started), args)


_COMMANDS = {
    "eval": _cmd_eval,
    "dual": _cmd_dual,
    "verify": _cmd_verify,
    "fuzz": _cmd_fuzz,
    "suite": _cmd_suite,
    "quad": _cmd_quad,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except MzvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
