"""Command-line interface; runs the operation layer in-process, or against a
running service when --server is given, with identical output either way."""

import argparse
import json
import sys

from . import api
from .errors import DomainError, ParseError, UsageError

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


class CliConfig:
    """Validated per-invocation settings."""

    __slots__ = ("p", "max_steps", "precision_start", "output", "max_p", "server")

    def __init__(self, p, max_steps=10000, precision_start=64, output="text",
                 max_p=api.DEFAULT_MAX_P, server=None):
        if not 3 <= p <= max_p:
            raise UsageError("p must satisfy 3 <= p <= %d, got %d" % (max_p, p))
        if max_steps < 1:
            raise UsageError("max-steps must be at least 1")
        if output not in ("text", "json"):
            raise UsageError("output must be text or json")
        self.p = p
        self.max_steps = max_steps
        self.precision_start = precision_start
        self.output = output
        self.max_p = max_p
        self.server = server


def _word_or_none(a):
    return a.get("word")


_OPS = {
    "group check": {
        "path": "/group/check",
        "inputs": (),
        "local": lambda ctx, a, cfg: api.op_group_check(ctx),
        "body": lambda a, cfg: {},
    },
    "cf expand": {
        "path": "/cf/expand",
        "inputs": ("number",),
        "local": lambda ctx, a, cfg: api.op_cf_expand(ctx, a["number"], cfg.max_steps),
        "body": lambda a, cfg: {"number": a["number"], "max_steps": cfg.max_steps},
    },
    "cf eval": {
        "path": "/cf/eval",
        "inputs": ("cf",),
        "local": lambda ctx, a, cfg: api.op_cf_eval(ctx, a["cf"], cfg.max_steps),
        "body": lambda a, cfg: {"cf": a["cf"], "max_steps": cfg.max_steps},
    },
    "form reduce": {
        "path": "/form/reduce",
        "inputs": ("form",),
        "local": lambda ctx, a, cfg: api.op_form_reduce(ctx, a["form"], cfg.max_steps),
        "body": lambda a, cfg: {"form": a["form"], "max_steps": cfg.max_steps},
    },
    "form cycle": {
        "path": "/form/cycle",
        "inputs": ("form",),
        "local": lambda ctx, a, cfg: api.op_form_cycle(ctx, a["form"], cfg.max_steps),
        "body": lambda a, cfg: {"form": a["form"], "max_steps": cfg.max_steps},
    },
    "form equiv": {
        "path": "/form/equiv",
        "inputs": ("form", "other"),
        "local": lambda ctx, a, cfg: api.op_form_equiv(
            ctx, a["form"], a["other"], cfg.max_steps, a.get("witness", False)),
        "body": lambda a, cfg: {"form": a["form"], "other": a["other"],
                                "with_witness": a.get("witness", False),
                                "max_steps": cfg.max_steps},
    },
    "form act": {
        "path": "/form/act",
        "inputs": ("form",),
        "local": lambda ctx, a, cfg: api.op_form_act(
            ctx, a["form"], _word_or_none(a), a.get("matrix")),
        "body": lambda a, cfg: {"form": a["form"], "word": _word_or_none(a),
                                "matrix": a.get("matrix")},
    },
    "number of-form": {
        "path": "/number/of-form",
        "inputs": ("form",),
        "local": lambda ctx, a, cfg: api.op_number_of_form(ctx, a["form"]),
        "body": lambda a, cfg: {"form": a["form"]},
    },
    "form of-number": {
        "path": "/form/of-number",
        "inputs": ("number",),
        "local": lambda ctx, a, cfg: api.op_form_of_number(ctx, a["number"], cfg.max_steps),
        "body": lambda a, cfg: {"number": a["number"], "max_steps": cfg.max_steps},
    },
    "simple set": {
        "path": "/simple/set",
        "inputs": ("form",),
        "local": lambda ctx, a, cfg: api.op_simple_set(ctx, a["form"], cfg.max_steps),
        "body": lambda a, cfg: {"form": a["form"], "max_steps": cfg.max_steps},
    },
    "phi apply": {
        "path": "/phi/apply",
        "inputs": ("number",),
        "local": lambda ctx, a, cfg: api.op_phi_apply(ctx, a["number"]),
        "body": lambda a, cfg: {"number": a["number"]},
    },
    "phi orbit": {
        "path": "/phi/orbit",
        "inputs": ("number",),
        "local": lambda ctx, a, cfg: api.op_phi_orbit(ctx, a["number"], cfg.max_steps),
        "body": lambda a, cfg: {"number": a["number"], "max_steps": cfg.max_steps},
    },
    "stabilizer": {
        "path": "/stabilizer",
        "inputs": ("number",),
        "local": lambda ctx, a, cfg: api.op_stabilizer(ctx, a["number"], cfg.max_steps),
        "body": lambda a, cfg: {"number": a["number"], "max_steps": cfg.max_steps},
    },
}


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, required=True, help="group index p >= 3")
    common.add_argument("--json", action="store_true", help="machine output")
    common.add_argument("--max-steps", type=int, default=10000)
    common.add_argument("--precision-start", type=int, default=64,
                        help="starting interval precision in bits")
    common.add_argument("--server", metavar="URL", default=None,
                        help="send the request to a running service instead")

    parser = argparse.ArgumentParser(
        prog="heckeforms",
        description="Binary quadratic forms and lambda-continued fractions "
                    "over Hecke groups. Use '-' for a positional to read "
                    "newline-delimited inputs from stdin.")
    top = parser.add_subparsers(dest="command", required=True)

    group = top.add_parser("group", help="group-level checks").add_subparsers(
        dest="subcommand", required=True)
    group.add_parser("check", parents=[common], help="verify defining relations")

    cf = top.add_parser("cf", help="continued fractions").add_subparsers(
        dest="subcommand", required=True)
    q = cf.add_parser("expand", parents=[common], help="expand a number")
    q.add_argument("number", help="surd text, e.g. \"(1 + 1*sqrt(L+5))/2\"")
    q = cf.add_parser("eval", parents=[common], help="evaluate a CF")
    q.add_argument("cf", help="CF text, e.g. \"[2; 3, (2, 1, 1, 4)]\"")

    form = top.add_parser("form", help="quadratic forms").add_subparsers(
        dest="subcommand", required=True)
    q = form.add_parser("reduce", parents=[common], help="reduction trace")
    q.add_argument("form", help="form text \"[A, B, C]\"")
    q = form.add_parser("cycle", parents=[common], help="reduced cycle")
    q.add_argument("form")
    q = form.add_parser("equiv", parents=[common], help="equivalence test")
    q.add_argument("form")
    q.add_argument("other")
    q.add_argument("--witness", action="store_true", help="also produce a matrix")
    q = form.add_parser("act", parents=[common], help="apply a group element")
    q.add_argument("form")
    q.add_argument("word", nargs="?", default=None, help="word text \"[2, 3]\"")
    q.add_argument("--matrix", default=None, help="matrix JSON instead of a word")
    q = form.add_parser("of-number", parents=[common], help="stabilizer form of a number")
    q.add_argument("number")

    number = top.add_parser("number", help="numbers from forms").add_subparsers(
        dest="subcommand", required=True)
    q = number.add_parser("of-form", parents=[common], help="plus root of a form")
    q.add_argument("form")

    simple = top.add_parser("simple", help="simple numbers").add_subparsers(
        dest="subcommand", required=True)
    q = simple.add_parser("set", parents=[common], help="simple set of a form's class")
    q.add_argument("form")

    phi = top.add_parser("phi", help="the transfer map").add_subparsers(
        dest="subcommand", required=True)
    q = phi.add_parser("apply", parents=[common], help="one step")
    q.add_argument("number")
    q = phi.add_parser("orbit", parents=[common], help="full orbit")
    q.add_argument("number")

    q = top.add_parser("stabilizer", parents=[common], help="stabilizer generators")
    q.add_argument("number")

    return parser


def _emit(payload, cfg, out):
    if cfg.output == "json":
        out.write(json.dumps(payload["result"], sort_keys=True) + "\n")
    else:
        for line in payload["text"]:
            out.write(line + "\n")


def _run_remote(cfg, op, values):
    import httpx

    body = {"p": cfg.p, "precision_start": cfg.precision_start}
    body.update(op["body"](values, cfg))
    resp = httpx.post(cfg.server.rstrip("/") + op["path"], json=body, timeout=120.0)
    if resp.status_code == 200:
        return resp.json()
    if resp.status_code == 422:
        raise UsageError("service rejected the request: %s" % resp.text)
    try:
        detail = resp.json()["detail"]
    except (KeyError, ValueError):
        raise DomainError("service error %d: %s" % (resp.status_code, resp.text))
    kind, message = detail.get("kind"), detail.get("message", "")
    if kind == "parse":
        raise ParseError(message)
    if kind == "usage":
        raise UsageError(message)
    raise DomainError(message)


def _run_one(cfg, op, values):
    if cfg.server is not None:
        return _run_remote(cfg, op, values)
    ctx = api.get_context(cfg.p, start_bits=cfg.precision_start)
    return op["local"](ctx, values, cfg)


def _classify_error(exc):
    if isinstance(exc, ParseError):
        return "parse error", EXIT_USAGE
    if isinstance(exc, UsageError):
        return "usage error", EXIT_USAGE
    return "error", EXIT_DOMAIN


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    key = args.command if args.command == "stabilizer" \
        else "%s %s" % (args.command, args.subcommand)
    op = _OPS[key]

    try:
        cfg = CliConfig(p=args.p, max_steps=args.max_steps,
                        precision_start=args.precision_start,
                        output="json" if args.json else "text",
                        server=args.server)
        values = {}
        for name in op["inputs"]:
            values[name] = getattr(args, name)
        if getattr(args, "witness", False):
            values["witness"] = True
        if getattr(args, "word", None) is not None:
            values["word"] = args.word
        if getattr(args, "matrix", None) is not None:
            try:
                values["matrix"] = json.loads(args.matrix)
            except ValueError:
                raise ParseError("matrix JSON is not valid JSON")
    except (ParseError, UsageError, DomainError) as exc:
        label, code = _classify_error(exc)
        sys.stderr.write("%s: %s\n" % (label, exc))
        return code

    streamed = [n for n in op["inputs"] if values.get(n) == "-"]
    if not streamed:
        try:
            payload = _run_one(cfg, op, values)
        except (ParseError, UsageError, DomainError) as exc:
            label, code = _classify_error(exc)
            sys.stderr.write("%s: %s\n" % (label, exc))
            return code
        _emit(payload, cfg, sys.stdout)
        return EXIT_OK

    if len(streamed) > 1:
        sys.stderr.write("usage error: only one positional may be '-'\n")
        return EXIT_USAGE
    slot = streamed[0]
    worst = EXIT_OK
    first = True
    for lineno, line in enumerate(sys.stdin, 1):
        line = line.strip()
        if not line:
            continue
        batch_values = dict(values)
        batch_values[slot] = line
        try:
            payload = _run_one(cfg, op, batch_values)
        except (ParseError, UsageError, DomainError) as exc:
            label, code = _classify_error(exc)
            sys.stderr.write("line %d: %s: %s\n" % (lineno, label, exc))
            worst = max(worst, code)
            continue
        if cfg.output == "text" and not first:
            sys.stdout.write("\n")
        _emit(payload, cfg, sys.stdout)
        first = False
    return worst


if __name__ == "__main__":
    sys.exit(main())
