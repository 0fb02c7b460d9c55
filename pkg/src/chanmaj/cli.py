"""Command-line interface: JSON in, one JSON envelope out.

Exit codes: 0 decided (either way), 1 usage or input error, 2 internal or
numeric failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .channel import Channel, GameSpec, channel_majorizes, standard_form, t_game_payoff
from .conditional import JointDist, cond_game_payoff, conditionally_majorizes
from .entropy import EntropySpec, channel_entropy, optimal_lower_bound, optimal_upper_bound
from .lp import LpNumericError
from .majorization import majorizes, witness_doubly_stochastic
from .numerics import DomainError, InternalConsistencyError, Tolerance
from .relative import lower_lorenz, relatively_majorizes


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --- JSON output with 17 significant digits ---------------------------------

def _encode(obj, indent: int | None = None, level: int = 0) -> str:
    pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
    close = "" if indent is None else "\n" + " " * (indent * level)
    sep = ": " if indent is not None else ":"
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}{sep}{_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{" + ",".join(items) + close + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[" + ",".join(pad + _encode(v, indent, level + 1) for v in obj) + close + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return '"nan"'
        if math.isinf(x):
            return '"inf"' if x > 0 else '"-inf"'
        s = format(x + 0.0, ".17g")
        return s if any(c in s for c in ".e") else s + ".0"
    return json.dumps(obj)


def dumps(obj, pretty: bool = False) -> str:
    """JSON text with every float written to 17 significant digits."""
    return _encode(obj, 2 if pretty else None)


# --- input -------------------------------------------------------------------

def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _vector(obj, path):
    if isinstance(obj, dict):
        for key in ("p", "v", "vector"):
            if key in obj:
                return obj[key]
        raise UsageError(f'{path}: expected a list or an object with key "p"')
    return obj


def _pair(obj, path):
    if isinstance(obj, dict) and "p" in obj and "q" in obj:
        return obj["p"], obj["q"]
    if isinstance(obj, list) and len(obj) == 2:
        return obj[0], obj[1]
    raise UsageError(f'{path}: expected {{"p": [...], "q": [...]}}')


def _joint(obj, path, tol):
    if isinstance(obj, dict) and "w" in obj:
        w = np.asarray(obj["w"], dtype=float)
        if "n" in obj and "m" in obj:
            w = w.reshape(int(obj["n"]), int(obj["m"]))
        return JointDist(w, tol)
    if isinstance(obj, list):
        return JointDist(obj, tol)
    raise UsageError(f'{path}: expected {{"n": n, "m": m, "w": [...]}}')


def _channel(obj, path, tol):
    if isinstance(obj, dict):
        return Channel.from_json(obj, tol)
    raise UsageError(f'{path}: expected {{"cols": [[...], ...]}}')


# --- Lorenz SVG --------------------------------------------------------------

def lorenz_svg(vertices) -> str:
    """Polyline of the curve plus the two axes in a 600 x 600 view box."""
    pts = " ".join(f"{20 + 560 * a:.6g},{580 - 560 * b:.6g}" for a, b in vertices)
    return (
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 600 600" width="600" height="600">\n'
        '<line x1="20" y1="580" x2="580" y2="580" stroke="black"/>\n'
        '<line x1="20" y1="580" x2="20" y2="20" stroke="black"/>\n'
        f'<polyline points="{pts}" fill="none" stroke="black"/>\n'
        "</svg>\n"
    )


# --- commands ----------------------------------------------------------------

def _cmd_maj_vec(args, tol):
    a, b = _vector(_load(args.a), args.a), _vector(_load(args.b), args.b)
    fwd, rev = majorizes(a, b, tol), majorizes(b, a, tol)
    out = {"result": {"majorizes": fwd, "reverse": rev}}
    if fwd and args.witness:
        out["certificate"] = {"doubly_stochastic": witness_doubly_stochastic(a, b, tol).matrix}
    return out


def _cmd_maj_rel(args, tol):
    x, y = _pair(_load(args.x), args.x), _pair(_load(args.y), args.y)
    res = relatively_majorizes(x, y, tol)
    cx, cy = lower_lorenz(x, tol=tol), lower_lorenz(y, tol=tol)
    out = {"result": {"majorizes": res.holds, "lorenz_x": cx.vertices, "lorenz_y": cy.vertices}}
    if res.holds:
        out["certificate"] = {"stochastic_map": res.stochastic}
    else:
        a, fx, fy = res.violation
        out["certificate"] = {"abscissa": a, "curve_x": fx, "curve_y": fy}
    if args.lorenz:
        with open(args.lorenz, "w", encoding="utf-8") as fh:
            fh.write(lorenz_svg(cx.vertices))
    return out


def _cmd_maj_cond(args, tol):
    P, Q = _joint(_load(args.p), args.p, tol), _joint(_load(args.q), args.q, tol)
    res = conditionally_majorizes(P, Q, tol)
    cert = {"R": res.R} if res.holds else {"S": res.S}
    return {"result": {"majorizes": res.holds}, "certificate": cert}


def _cmd_maj_chan(args, tol):
    N, M = _channel(_load(args.n), args.n, tol), _channel(_load(args.m), args.m, tol)
    res = channel_majorizes(N, M, tol, sort=not args.unsorted, jobs=args.jobs)
    out = {"result": {"majorizes": res.holds}}
    diags = ["unsorted columns: a negative answer is not conclusive"] if args.unsorted else []
    if res.holds:
        if args.witness:
            out["certificate"] = {"weights": res.weights.T}  # one row per target column
    else:
        out["certificate"] = {"refuter": res.refuter, "column": res.column}
    out["diagnostics"] = diags
    return out


def _cmd_std_form(args, tol):
    N = _channel(_load(args.n), args.n, tol)
    return {"result": standard_form(N, tol).to_json()}


def _cmd_entropy(args, tol):
    N = _channel(_load(args.n), args.n, tol)
    spec = EntropySpec.parse(args.spec)
    return {"result": {"value_bits": channel_entropy(N, spec, args.ext, tol), "spec": str(spec), "ext": args.ext}}


def _cmd_game_chan(args, tol):
    N = _channel(_load(args.n), args.n, tol)
    t = np.atleast_2d(np.asarray(_load(args.t), dtype=float))
    return {"result": {"payoff": t_game_payoff(N, GameSpec.of(t, tol), tol)}}


def _cmd_game_cond(args, tol):
    P = _joint(_load(args.p), args.p, tol)
    T = np.asarray(_load(args.T), dtype=float)
    if T.ndim == 1:
        T = T[:, None]
    return {"result": {"payoff": cond_game_payoff(P, T, tol)}}


def _cmd_bounds(args, tol):
    A = [_vector(_load(f), f) for f in args.files]
    return {"result": {"lower": optimal_lower_bound(A, tol), "upper": optimal_upper_bound(A, tol)}}


def _cmd_selftest(args, tol):
    from .selftest import run

    rows = run(fast=args.fast)
    return {"result": {"criteria": [{"id": i, "passed": ok, "detail": d} for i, ok, d in rows]},
            "_table": "\n".join(f"{'PASS' if ok else 'FAIL'} criterion {i:2d}: {d}" for i, ok, d in rows)}


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="chanmaj", description="Majorization decisions for vectors, dichotomies, joint distributions and channels.")
    ap.add_argument("--version", action="version", version=f"chanmaj {__version__}")
    ap.add_argument("--pretty", action="store_true", help="indent JSON output")
    ap.add_argument("--seed", type=int, default=None, help="seed recorded in the envelope")
    ap.add_argument("--tol", type=float, default=1e-9, help="absolute and relative tolerance")
    ap.add_argument("--jobs", type=int, default=1, help="threads for per-column LPs")
    # the same options are accepted after the subcommand
    common = _Parser(add_help=False)
    common.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    maj = sub.add_parser("maj", help="majorization decisions")
    msub = maj.add_subparsers(dest="kind", parser_class=_Parser)
    p = msub.add_parser("vec", parents=[common], help="vector majorization")
    p.add_argument("a"), p.add_argument("b")
    p.add_argument("--witness", action="store_true")
    p.set_defaults(func=_cmd_maj_vec)
    p = msub.add_parser("rel", parents=[common], help="relative majorization of pairs")
    p.add_argument("x"), p.add_argument("y")
    p.add_argument("--lorenz", metavar="SVG")
    p.set_defaults(func=_cmd_maj_rel)
    p = msub.add_parser("cond", parents=[common], help="conditional majorization of joints")
    p.add_argument("p"), p.add_argument("q")
    p.set_defaults(func=_cmd_maj_cond)
    p = msub.add_parser("chan", parents=[common], help="channel majorization")
    p.add_argument("n"), p.add_argument("m")
    p.add_argument("--witness", action="store_true")
    p.add_argument("--unsorted", action="store_true", help="diagnostic: mix unsorted columns")
    p.set_defaults(func=_cmd_maj_chan)

    p = sub.add_parser("std-form", parents=[common], help="standard form of a channel")
    p.add_argument("n")
    p.set_defaults(func=_cmd_std_form)

    p = sub.add_parser("entropy", parents=[common], help="channel entropy")
    p.add_argument("--spec", default="shannon", help="shannon, min, max or renyi:<alpha>")
    p.add_argument("--ext", default="max", choices=["max", "min", "choi", "kl-rand"])
    p.add_argument("n")
    p.set_defaults(func=_cmd_entropy)

    game = sub.add_parser("game", parents=[common], help="game payoffs")
    gsub = game.add_subparsers(dest="kind", parser_class=_Parser)
    p = gsub.add_parser("chan", parents=[common], help="channel game payoff")
    p.add_argument("n")
    p.add_argument("--t", required=True)
    p.set_defaults(func=_cmd_game_chan)
    p = gsub.add_parser("cond", parents=[common], help="conditional game payoff")
    p.add_argument("p")
    p.add_argument("--T", required=True)
    p.set_defaults(func=_cmd_game_cond)

    p = sub.add_parser("bounds", parents=[common], help="optimal bounds of a vector set, one file per vector")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("selftest", parents=[common], help="run the numbered acceptance checks")
    p.add_argument("--fast", action="store_true")
    p.add_argument("--json", action="store_true", help="emit the envelope instead of the table")
    p.set_defaults(func=_cmd_selftest)
    return ap


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    env = {"ok": False, "result": None, "diagnostics": [], "version": __version__}
    pretty = False
    try:
        args = build_parser().parse_args(argv)
        pretty = args.pretty
        if not hasattr(args, "func"):
            raise UsageError("chanmaj: a command is required (try --help)")
        if args.jobs < 1:
            raise UsageError("--jobs must be positive")
        if args.seed is not None:
            env["seed"] = args.seed
        tol = Tolerance(args.tol, args.tol)
        out = args.func(args, tol)
        table = out.pop("_table", None)
        env["diagnostics"] += out.pop("diagnostics", [])
        env.update(out)
        env["ok"] = True
        if table is not None and not args.json:
            print(table, file=stdout)
            return 0
        code = 0
    except UsageError as exc:
        env["diagnostics"].append(str(exc))
        code = 1
    except DomainError as exc:
        env["diagnostics"].append(f"invalid input: {exc}")
        code = 1
    except (InternalConsistencyError, LpNumericError, ArithmeticError) as exc:
        env["diagnostics"].append(f"{type(exc).__name__}: {exc}")
        code = 2
    order = ["ok", "result", "certificate", "diagnostics", "version", "seed"]
    print(dumps({k: env[k] for k in order if k in env}, pretty), file=stdout)
    if code:
        print(env["diagnostics"][-1], file=stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
