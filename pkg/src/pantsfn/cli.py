"""Command-line entry point.

Every run writes its reports plus ``manifest.json`` into ``--out``. Exit
status is 0 on success, 1 for invalid input and 2 when the numerics
degenerate.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import platform
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .closure import closure_criterion, convergence_study, generator, study_floor
from .curves import CurveWord, beta_curve
from .errors import NumericalDegeneration, UnknownGenerator, ValidationError
from .families import GRAPHS, random_surface
from .fn_map import FNVector, bilipschitz_probe, fn_forward, fn_inverse
from .pants_surface import build_base, load_surface, save_surface
from .spectrum import CurveFamily, cuff_family, default_family, dls_estimate
from .twist_flow import DEFAULT_EPS0, derivative_trials, lengths_along, second_differences


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2, which is reserved for numerical failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


class Run:
    """Collects output files and writes the manifest."""

    def __init__(self, args, argv):
        self.out = Path(args.out)
        self.out.mkdir(parents=True, exist_ok=True)
        self.args = args
        self.argv = list(argv)
        self.files: list[Path] = []
        self.family = None

    def path(self, name: str) -> Path:
        p = self.out / name
        self.files.append(p)
        return p

    def write_json(self, name: str, data) -> Path:
        p = self.path(name)
        p.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
        return p

    def write_csv(self, name: str, header, rows) -> Path:
        p = self.path(name)
        with open(p, "w", newline="") as fh:
            wr = csv.writer(fh, lineterminator="\n")
            wr.writerow(header)
            wr.writerows(rows)
        return p

    def save_surface(self, name: str, s) -> Path:
        p = self.path(name)
        save_surface(s, p)
        return p

    def finish(self):
        outputs = {p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in self.files}
        manifest = {
            "argv": self.argv,
            "seed": self.args.seed,
            "tol": self.args.tol,
            "family": self.family,
            "outputs": outputs,
            "versions": {"pantsfn": __version__, "numpy": np.__version__,
                         "python": platform.python_version()},
        }
        (self.out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _fmt(x) -> str:
    return repr(float(x)) if isinstance(x, (float, np.floating)) else str(x)


def _grid(text: str) -> list[float]:
    try:
        a, b, n = text.split(":")
        n = int(n)
        vals = np.linspace(float(a), float(b), n)
    except ValueError:
        raise ValidationError(f"grid {text!r} must look like a:b:n") from None
    if n < 1:
        raise ValidationError(f"grid {text!r} needs at least one point")
    return [float(v) for v in vals]


def _ints(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ValidationError(f"expected comma-separated integers, got {text!r}") from None


def _family(args, s) -> CurveFamily:
    if args.family == "cuffs":
        return cuff_family(s)
    if args.family == "default":
        return default_family(s, _ints(args.k), args.eps0)
    try:
        data = json.loads(Path(args.family).read_text())
    except FileNotFoundError:
        raise ValidationError(f"family file {args.family} not found") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"family file {args.family}: not valid JSON ({exc})") from None
    labels = tuple(str(c.get("label", f"curve{k}")) for k, c in enumerate(data))
    words = tuple(CurveWord.from_dict(c) for c in data)
    return CurveFamily(labels, words, f"file:{args.family}")


def _load(path):
    try:
        return load_surface(path)
    except FileNotFoundError:
        raise ValidationError(f"surface file {path} not found") from None


# --- subcommands --------------------------------------------------------------

def cmd_generate(args, run: Run):
    if args.name == "closure":
        gen = generator(args.gen)
        X0, X = gen.surfaces(args.depth)
        run.save_surface("X0.json", X0)
        run.save_surface("X.json", X)
        return
    if args.name not in GRAPHS:
        raise UnknownGenerator(f"unknown family {args.name!r}; choose from "
                               f"{sorted(GRAPHS) + ['closure']}")
    g = GRAPHS[args.name](args.n)
    if args.cuff is not None:
        s = build_base(g, [args.cuff] * len(g.cuffs), args.cuff)
    else:
        s = random_surface(g, args.lo, args.hi, np.random.default_rng(args.seed))
    run.save_surface(f"{args.name}.json", s)


def cmd_spectrum(args, run: Run):
    X, Y = _load(args.x), _load(args.y)
    fam = _family(args, X)
    run.family = fam.description
    rep = dls_estimate(X, Y, fam)
    run.path("spectrum.csv").write_text(rep.to_csv())
    run.write_json("spectrum.json", rep.summary())
    print(f"dls >= {rep.dls_estimate:.12g} (argmax {rep.argmax_label}, {len(fam)} curves)")


def cmd_fnmap(args, run: Run):
    X0 = _load(args.base)
    if args.direction == "forward":
        if not args.x:
            raise ValidationError("fnmap forward needs --x")
        v = fn_forward(X0, _load(args.x))
        run.write_json("fn.json", v.to_dict(X0))
        print(f"sup norm {v.sup_norm:.12g}")
    else:
        if not args.vec:
            raise ValidationError("fnmap inverse needs --vec")
        v = FNVector.from_dict(X0, json.loads(Path(args.vec).read_text()))
        run.save_surface("surface.json", fn_inverse(X0, v))


def cmd_probe(args, run: Run):
    X0 = _load(args.base)
    fam = default_family(X0, _ints(args.family), args.eps0)
    run.family = fam.description
    rep = bilipschitz_probe(X0, FNVector.zero(X0), args.radius, args.samples, fam, args.seed)
    run.write_csv("probe.csv", ["sample", "dist", "dls", "ratio", "argmax"],
                  [[s.index, _fmt(s.dist), _fmt(s.dls), _fmt(s.ratio), s.argmax]
                   for s in rep.samples])
    run.write_json("probe.json", rep.summary())
    print(f"r in [{rep.min_ratio:.6g}, {rep.max_ratio:.6g}], distortion {rep.distortion:.6g}")


def cmd_twistflow(args, run: Run):
    if args.mode == "derivcheck":
        trials = derivative_trials(args.seed, args.trials, args.h)
        run.write_csv("derivcheck.csv", ["trial", "graph", "cuff", "exact", "fd", "error"],
                      [[t.trial, t.graph, t.cuff, _fmt(t.exact), _fmt(t.fd), _fmt(t.error)]
                       for t in trials])
        worst = max(t.error for t in trials)
        print(f"{len(trials)} trials, max |exact - fd| = {worst:.3g}")
        return
    if not args.spec:
        raise ValidationError("twistflow convexity needs --spec")
    s = _load(args.spec)
    if args.cuff is None and not s.graph.interior_cuffs:
        raise ValidationError(f"{args.spec}: surface has no interior cuff to twist")
    cuff = args.cuff if args.cuff is not None else s.graph.interior_cuffs[0]
    if args.word:
        w = CurveWord.from_dict(json.loads(Path(args.word).read_text()))
    else:
        w = beta_curve(s, cuff)
    grid = _grid(args.grid) if args.grid else [s.length(cuff) * k / 10 for k in range(11)]
    vals = lengths_along(s, w, cuff, grid)
    d2 = [math.nan] + second_differences(grid, vals) + [math.nan]
    run.write_csv("convexity.csv", ["t", "length", "second_difference"],
                  [[_fmt(t), _fmt(v), _fmt(d)] for t, v, d in zip(grid, vals, d2)])
    convex = all(d >= -args.tol for d in d2[1:-1])
    run.write_json("convexity.json", {"cuff": cuff, "convex": convex,
                                      "min_second_difference": min(d2[1:-1], default=None)})
    print("convex" if convex else "not convex")


def cmd_closure(args, run: Run):
    if args.mode == "verdict":
        if not (args.spec and args.base):
            raise ValidationError("closure verdict needs --spec and --base")
        v = closure_criterion(_load(args.base), _load(args.spec), args.window)
        run.write_csv("tail.csv", ["s", "T"], [[_fmt(a), _fmt(b)] for a, b in zip(v.grid, v.tail)])
        run.write_json("verdict.json", v.summary())
        print(f"{v.verdict} (floor {v.floor:.6g}, |log l| in [{v.log_range[0]:.3g}, {v.log_range[1]:.3g}])")
        return
    X0, X = generator(args.gen).surfaces(args.depth)
    fam = default_family(X0)
    run.family = fam.description
    i_grid = _grid(args.igrid) if args.igrid else [float(i) for i in range(21)]
    rows = convergence_study(X0, X, i_grid, fam)
    run.write_csv("study.csv", ["i", "dls", "argmax_curve"],
                  [[_fmt(r.i), _fmt(r.dls), r.argmax] for r in rows])
    run.write_json("study.json", {"generator": args.gen, "depth": args.depth,
                                  "floor": study_floor(rows, max(i_grid)),
                                  "verdict": closure_criterion(X0, X).summary()})
    print(f"final dls {rows[-1].dls:.6g}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pantsfn", description="Fenchel-Nielsen experiments on surfaces glued from pants.")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    # repeated on every subcommand; SUPPRESS keeps a value given before the
    # subcommand from being reset to the default
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", parents=[common], help="write surface spec files")
    g.add_argument("name", help="chain, tree, genus2, torus or closure")
    g.add_argument("--n", type=int, default=4, help="number of pants")
    g.add_argument("--cuff", type=float, help="uniform cuff length (twists 0)")
    g.add_argument("--lo", type=float, default=0.1)
    g.add_argument("--hi", type=float, default=1.0)
    g.add_argument("--gen", default="sqrt", help="closure generator")
    g.add_argument("--depth", type=int, default=30)
    g.set_defaults(func=cmd_generate)

    fam_help = "default, cuffs, or a JSON list of curve words"
    s = sub.add_parser("spectrum", parents=[common], help="length-spectrum comparison")
    s.add_argument("--x", required=True)
    s.add_argument("--y", required=True)
    s.add_argument("--family", default="default", help=fam_help)
    s.add_argument("--k", help="full-twist grid for the default family, e.g. 1,2")
    s.add_argument("--eps0", type=float)
    s.set_defaults(func=cmd_spectrum)

    f = sub.add_parser("fnmap", parents=[common], help="normalized Fenchel-Nielsen map")
    f.add_argument("direction", choices=["forward", "inverse"])
    f.add_argument("--base", required=True)
    f.add_argument("--x")
    f.add_argument("--vec")
    f.set_defaults(func=cmd_fnmap)

    pr = sub.add_parser("probe", parents=[common], help="local biLipschitz probe")
    pr.add_argument("--base", required=True)
    pr.add_argument("--radius", type=float, default=0.25)
    pr.add_argument("--samples", type=int, default=100)
    pr.add_argument("--family", help="full-twist grid k0,k1,...")
    pr.add_argument("--eps0", type=float, default=DEFAULT_EPS0)
    pr.set_defaults(func=cmd_probe)

    t = sub.add_parser("twistflow", parents=[common], help="twist derivatives and convexity")
    t.add_argument("mode", choices=["derivcheck", "convexity"])
    t.add_argument("--trials", type=int, default=100)
    t.add_argument("--h", type=float, default=1e-4)
    t.add_argument("--spec")
    t.add_argument("--cuff", type=int)
    t.add_argument("--word")
    t.add_argument("--grid", help="a:b:n twist offsets")
    t.set_defaults(func=cmd_twistflow)

    c = sub.add_parser("closure", parents=[common], help="tail criterion and truncations")
    c.add_argument("mode", choices=["verdict", "study"])
    c.add_argument("--spec")
    c.add_argument("--base")
    c.add_argument("--window", type=float, default=1.0)
    c.add_argument("--gen", default="half")
    c.add_argument("--depth", type=int, default=30)
    c.add_argument("--igrid", help="a:b:n truncation levels")
    c.set_defaults(func=cmd_closure)
    return p


def run(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        r = Run(args, argv)
        args.func(args, r)
        r.finish()
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalDegeneration as exc:
        print(f"numerical degeneration: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
