"""Command line front end.

    qradial <radial|iwasawa|regular|verify|catalog> [--config PATH] [--expr SRC]
            [--word 1,2,..] [--shift m1,..] [--reps PATH] [--counit] [--latex]
            [--parallel]

Exit codes: 0 ok, 2 parse error, 3 identically singular, 4 invalid
configuration, 5 verification mismatch.
"""

import argparse
import json
import sys

from . import catalog
from .cartan import CartanMatrix
from .errors import (IdenticallySingular, IndexOutOfRange, InvalidConfig, MissingGeneratorImage,
                     NotSymmetrizable, ParseError)
from .parser import parse_element, parse_scalar
from .qsp import QSPContext
from .radial import (Rep, apply_reps, counit_rep, expand_to_uq, iwasawa_decompose, klambda, pi,
                     pi_regularity_conditions, radial_decompose_word, regularity_conditions, symbol_text)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_SINGULAR = 3
EXIT_CONFIG = 4
EXIT_MISMATCH = 5

SCHEMA = 1

_PARAM_KEYS = ("c", "s", "d", "t")


class RunConfig:
    def __init__(self, ctx, expr=None, name=None):
        self.ctx = ctx
        self.expr = expr
        self.name = name


def _scalars(values, key):
    if isinstance(values, dict):
        return {int(k): parse_scalar(v) for k, v in values.items()}
    if not isinstance(values, list):
        raise InvalidConfig(f"{key} must be a list or an index map")
    return [parse_scalar(v) for v in values]


def load_config(data):
    """JSON object → RunConfig."""
    if not isinstance(data, dict):
        raise InvalidConfig("configuration must be a JSON object")
    known = {"schema", "catalog", "cartan", "symmetrizer", "X", "tau", "counit_offset",
             "right_counit_offset", "expr", *_PARAM_KEYS}
    extra = set(data) - known
    if extra:
        raise InvalidConfig(f"unknown configuration keys: {', '.join(sorted(extra))}")
    params = {}
    for key in _PARAM_KEYS:
        if key in data:
            params[key] = _scalars(data[key], key)
    if "counit_offset" in data:
        params["offset"] = bool(data["counit_offset"])
    if "right_counit_offset" in data:
        params["right_offset"] = bool(data["right_counit_offset"])
    name = data.get("catalog")
    try:
        if name is not None:
            e = catalog.entry(name)
            for key in ("cartan", "X", "tau"):
                if key in data:
                    raise InvalidConfig(f"{key} cannot be combined with a catalog entry")
            ctx = e.context(**params)
        else:
            if "cartan" not in data:
                raise InvalidConfig("configuration needs either catalog or cartan")
            cart = CartanMatrix(data["cartan"], data.get("symmetrizer"))
            tau = data.get("tau")
            ctx = QSPContext(cart, tuple(data.get("X", ())), tuple(tau) if tau is not None else None, **params)
    except (NotSymmetrizable, TypeError) as exc:
        raise InvalidConfig(str(exc)) from None
    except ValueError as exc:
        if isinstance(exc, (ParseError, InvalidConfig)):
            raise
        raise InvalidConfig(str(exc)) from None
    return RunConfig(ctx, data.get("expr"), name)


def _parse_ints(src, what):
    try:
        return tuple(int(x) for x in src.replace(" ", "").split(",") if x)
    except ValueError:
        raise InvalidConfig(f"{what} must be a comma separated list of integers") from None


def _symbol_lookup(ctx):
    table = {}
    for i in ctx.nonX:
        table[symbol_text(("B", i))] = ("B", i)
    for j in ctx.X:
        table[symbol_text(("E", j))] = ("E", j)
        table[symbol_text(("F", j))] = ("F", j)
    return table


def _parse_ktext(text):
    if text.startswith("K[") and text.endswith("]"):
        return ("K", tuple(int(x) for x in text[2:-1].split(",")))
    return None


def load_rep(ctx, data, side):
    if not isinstance(data, dict) or "dim" not in data:
        raise InvalidConfig(f"{side} representation needs dim and images")
    dim = data["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise InvalidConfig("dim must be a positive integer")
    table = _symbol_lookup(ctx)
    images = {}
    for key, rows in data.get("images", {}).items():
        sym = table.get(key)
        if sym is None:
            try:
                sym = _parse_ktext(key.replace(" ", ""))
            except ValueError:
                sym = None
        if sym is None:
            raise InvalidConfig(f"{key!r} is not a generator of the {side} coideal")
        if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
            raise InvalidConfig(f"image of {key} must be a matrix")
        images[sym] = [[parse_scalar(x) for x in row] for row in rows]
    k_image = None
    if data.get("trivial_torus", False):
        def k_image(beta):
            return [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
    try:
        return Rep(dim, images, k_image)
    except ValueError as exc:
        raise InvalidConfig(str(exc)) from None


def load_reps(ctx, data):
    if not isinstance(data, dict) or "left" not in data or "right" not in data:
        raise InvalidConfig("representation file needs left and right entries")
    return load_rep(ctx, data["left"], "left"), load_rep(ctx, data["right"], "right")


def _element(cfg, args):
    src = args.expr if args.expr is not None else cfg.expr
    if src is None:
        raise InvalidConfig("no element given: use --expr or an expr key in the configuration")
    return parse_element(src, cfg.ctx.alg)


def _with_latex(doc, obj, args):
    if args.latex:
        doc["latex"] = obj.text(latex=True)
    return doc


def _reps(cfg, args):
    if args.reps:
        return load_reps(cfg.ctx, _read_json(args.reps))
    return counit_rep(cfg.ctx, "left"), counit_rep(cfg.ctx, "right")


def cmd_radial(cfg, args):
    ctx = cfg.ctx
    if args.word is not None:
        d = radial_decompose_word(ctx, _parse_ints(args.word, "--word"),
                                  _parse_ints(args.shift, "--shift") if args.shift else None)
    else:
        d = pi(ctx, _element(cfg, args), parallel=args.parallel)
    t1, t2 = _reps(cfg, args)
    op = apply_reps(d, t1, t2)
    doc = {"decomposition": _with_latex(d.to_json(), d, args),
           "operator": _with_latex(op.to_json(), op, args),
           "reps": "counit" if not args.reps else "custom"}
    return EXIT_OK, doc


def cmd_iwasawa(cfg, args):
    ban = iwasawa_decompose(cfg.ctx, _element(cfg, args))
    return EXIT_OK, {"decomposition": _with_latex(ban.to_json(), ban, args)}


def cmd_regular(cfg, args):
    ctx = cfg.ctx
    if args.word is not None:
        conds = regularity_conditions(ctx, _parse_ints(args.word, "--word"),
                                      _parse_ints(args.shift, "--shift") if args.shift else None)
    else:
        conds = pi_regularity_conditions(ctx, _element(cfg, args))
    fatal = [c for c in conds if c.fatal]
    doc = {"conditions": [c.to_json() for c in conds], "fatal": len(fatal)}
    return (EXIT_SINGULAR if fatal else EXIT_OK), doc


def cmd_verify(cfg, args):
    ctx = cfg.ctx
    if args.word is not None:
        U = _parse_ints(args.word, "--word")
        shift = _parse_ints(args.shift, "--shift") if args.shift else None
        d = radial_decompose_word(ctx, U, shift)
        target = klambda(ctx, ctx.alg.monomial((), None, None, U), shift)
    else:
        y = _element(cfg, args)
        d = pi(ctx, y, parallel=args.parallel)
        target = klambda(ctx, y)
    ok = expand_to_uq(ctx, d) == target
    return (EXIT_OK if ok else EXIT_MISMATCH), {"match": ok, "terms": len(d)}


def cmd_catalog(cfg, args):
    if args.name:
        return EXIT_OK, {"entry": catalog.entry_json(catalog.entry(args.name))}
    return EXIT_OK, {"entries": [catalog.entry_json(e) for e in catalog.ENTRIES.values()],
                     "classification": catalog.classification_table()}


COMMANDS = {
    "radial": cmd_radial,
    "iwasawa": cmd_iwasawa,
    "regular": cmd_regular,
    "verify": cmd_verify,
    "catalog": cmd_catalog,
}


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InvalidConfig(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InvalidConfig(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None


def build_parser():
    p = argparse.ArgumentParser(prog="qradial", description="Radial parts for quantum symmetric pairs.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", help="JSON configuration file")
    p.add_argument("--expr", help="element of U_q(g), e.g. 'E1*F1 + K[2]'")
    p.add_argument("--word", help="F-word as comma separated indices, instead of --expr")
    p.add_argument("--shift", help="torus shift in half units, used with --word")
    legs = p.add_mutually_exclusive_group()
    legs.add_argument("--reps", help="JSON file with left/right coideal representations")
    legs.add_argument("--counit", action="store_true", help="apply the counit on both legs (default)")
    p.add_argument("--latex", action="store_true", help="add LaTeX renderings")
    p.add_argument("--parallel", action="store_true", help="run independent radial jobs on a thread pool")
    p.add_argument("--name", help="catalog entry to show")
    return p


def run(cfg, command, args):
    """Execute one subcommand; returns (exit code, document)."""
    code, doc = COMMANDS[command](cfg, args)
    out = {"schema": SCHEMA, "command": command}
    if cfg is not None and cfg.name:
        out["catalog"] = cfg.name
    out.update(doc)
    return code, out


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        cfg = None
        if args.command != "catalog" or args.config:
            if not args.config:
                raise InvalidConfig("--config is required")
            cfg = load_config(_read_json(args.config))
        code, doc = run(cfg, args.command, args)
    except ParseError as exc:
        code, doc = EXIT_PARSE, {"schema": SCHEMA, "error": "parse", "message": str(exc), "position": exc.pos}
    except IdenticallySingular as exc:
        code, doc = EXIT_SINGULAR, {"schema": SCHEMA, "error": "singular", "message": str(exc)}
    except (InvalidConfig, IndexOutOfRange, MissingGeneratorImage) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        code, doc = EXIT_CONFIG, {"schema": SCHEMA, "error": "config", "message": str(msg)}
    stream = stdout if code in (EXIT_OK, EXIT_MISMATCH, EXIT_SINGULAR) and "error" not in doc else stderr
    json.dump(doc, stream, ensure_ascii=False, indent=2)
    stream.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
