"""Command-line front end: ``lpcc gen``, ``lpcc bench``, ``lpcc dot``.

The library is the primary interface; this wrapper only wires the seeded
generators and the benchmark harness to the shell.
"""
from __future__ import annotations

import argparse
import sys

from . import bench as bench_mod
from . import model
from .generate import Family, GenSpec, generate
from .relax import conflict_graph_of


def _size_for(args) -> tuple[int, ...]:
    fam = Family(args.family)
    if fam is Family.TPESC:
        if args.s is None or args.d is None:
            raise SystemExit("tpesc needs --s and --d")
        return (args.s, args.d)
    if fam is Family.CMKPC:
        if args.n is None or args.m is None:
            raise SystemExit("cmkpc needs --n and --m")
        return (args.n, args.m)
    if args.n is None or args.p is None or args.m is None:
        raise SystemExit("one_reg needs --n, --p and --m")
    return (args.n, args.p, args.m)


def cmd_gen(args) -> int:
    spec = GenSpec(Family(args.family), _size_for(args), args.rho, args.seed)
    inst = generate(spec)
    if args.out:
        model.save(inst, args.out)
    else:
        sys.stdout.write(model.to_json(inst) + "\n")
    return 0


def cmd_bench(args) -> int:
    if args.config:
        sizes = [tuple(int(s) for s in c.split("x")) for c in args.config]
        rhos = args.rho or [0.0]
        configs = [GenSpec(Family(args.family), size, rho)
                   for size in sizes for rho in rhos]
    else:
        presets = bench_mod.PRESETS_LARGE if args.large else bench_mod.PRESETS
        configs = presets[Family(args.family).value]
    seeds = list(range(args.seed0, args.seed0 + args.seeds))
    methods = [bench_mod.Method(m) for m in args.methods]
    result = bench_mod.run_experiment(configs, seeds, methods,
                                      csv_path=args.csv, md_path=args.md,
                                      time_limit=args.time_limit)
    for (config, method), gap in sorted(result.means.items()):
        print(f"{config:>40s}  {method:>10s}  mean gap {gap:8.3f}%")
    if result.violations:
        for v in result.violations:
            print("INVARIANT VIOLATION:", v, file=sys.stderr)
        return 1
    return 0


def cmd_dot(args) -> int:
    inst = model.load(args.instance)
    text = conflict_graph_of(inst).to_dot()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lpcc")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate one benchmark instance as JSON")
    g.add_argument("--family", required=True,
                   choices=[f.value for f in Family])
    g.add_argument("--s", type=int, help="sources (tpesc)")
    g.add_argument("--d", type=int, help="destinations (tpesc)")
    g.add_argument("--n", type=int, help="items (cmkpc) / pairs (one_reg)")
    g.add_argument("--m", type=int, help="rows (cmkpc, one_reg)")
    g.add_argument("--p", type=int, help="x-variables (one_reg)")
    g.add_argument("--rho", type=float, default=0.0,
                   help="conflict density")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", help="output path (default: stdout)")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="run the gap benchmark")
    b.add_argument("--family", required=True,
                   choices=[f.value for f in Family])
    b.add_argument("--config", nargs="*",
                   help="explicit sizes like 20x5 (default: presets)")
    b.add_argument("--rho", type=float, nargs="*",
                   help="densities for explicit --config sizes")
    b.add_argument("--large", action="store_true",
                   help="use the full-size preset table")
    b.add_argument("--seeds", type=int, default=5,
                   help="number of seeds per configuration")
    b.add_argument("--seed0", type=int, default=0, help="first seed")
    b.add_argument("--methods", nargs="*",
                   default=[m.value for m in bench_mod.Method],
                   choices=[m.value for m in bench_mod.Method])
    b.add_argument("--csv", help="per-row CSV output path")
    b.add_argument("--md", help="mean-gap markdown table path")
    b.add_argument("--time-limit", type=float, default=None,
                   help="exact-solver budget per instance, seconds")
    b.set_defaults(func=cmd_bench)

    d = sub.add_parser("dot", help="dump a conflict graph in DOT format")
    d.add_argument("instance", help="instance JSON path")
    d.add_argument("--out", help="output path (default: stdout)")
    d.set_defaults(func=cmd_dot)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
