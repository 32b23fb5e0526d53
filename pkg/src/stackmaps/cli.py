"""Command-line entry point.

Subcommands: sample, enumerate, count, verify, stats, draw, frag, ball,
passage.  Exit codes: 0 success, 1 usage error, 2 failed verification.
The seed comes from --seed, falling back to the STACKMAP_SEED environment
variable, then 0; identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import counting, fragmentation, localtopo, maps, stats, trees
from .passage import (
    gamma,
    gamma_prime_literal,
    quad_root_distance,
    quad_type,
    tau_decomposition,
    tri_type,
)

FAMILIES = {"tri": maps.TRIANGULATION, "quad": maps.QUADRANGULATION}
ARITY = {"tri": 3, "quad": 2}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as f:
            f.write(text)
            if not text.endswith("\n"):
                f.write("\n")
    else:
        print(text)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("STACKMAP_SEED", "0"))


def _sample_tree(family: str, law: str, size: int, seed: int) -> trees.OrderedTree:
    rng = trees.rng_from_seed(seed)
    arity = ARITY[family]
    if law == "uniform":
        return trees.sample_uniform_tree(arity, size, rng)
    return trees.sample_increasing_tree(arity, size, rng).shape()


def cmd_sample(args) -> int:
    t = _sample_tree(args.family, args.law, args.size, _seed(args))
    m = maps.map_from_tree(t, FAMILIES[args.family])
    if args.format == "svg":
        _emit(maps.to_svg(m), args.out)
    else:
        _emit(m.to_json(), args.out)
    return 0


def cmd_enumerate(args) -> int:
    ts = trees.enumerate_trees(ARITY[args.family], args.size, bound=args.size + 1)
    _emit(json.dumps([t.to_parens() for t in ts]), args.out)
    return 0


def cmd_count(args) -> int:
    if args.what == "trees":
        val = counting.count_trees(ARITY[args.family], args.n)
    elif args.what == "forests":
        val = counting.count_forests(ARITY[args.family], args.m, args.n)
    else:
        val = counting.histories_total(args.n)
    _emit(str(val), args.out)
    return 0


def cmd_stats(args) -> int:
    params = {}
    if args.n is not None:
        params["n"] = args.n
    if args.reps is not None:
        params["reps"] = args.reps
    report = stats.run_experiment(args.experiment, params, _seed(args))
    text = report.to_csv() if args.format == "csv" else report.to_json()
    _emit(text, args.out)
    return 0


def cmd_draw(args) -> int:
    t = _sample_tree(args.family, args.law, args.size, _seed(args))
    m = maps.map_from_tree(t, FAMILIES[args.family])
    _emit(maps.to_svg(m), args.out)
    return 0


def cmd_frag(args) -> int:
    rng = trees.rng_from_seed(_seed(args))
    ft = fragmentation.build_fragmentation_tree(args.arity, args.k, rng)
    _emit(ft.to_json(), args.out)
    return 0


def cmd_ball(args) -> int:
    rng = trees.rng_from_seed(_seed(args))
    t = localtopo.sample_spine_tree(ARITY[args.family], args.r, rng)
    m = localtopo.infinite_map_ball(t, args.r)
    if args.format == "svg":
        _emit(maps.to_svg(m), args.out)
    else:
        _emit(m.to_json(), args.out)
    return 0


def cmd_passage(args) -> int:
    word = tuple(int(c) for c in args.word)
    if args.family == "tri":
        info = {
            "word": args.word,
            "tau": tau_decomposition(word),
            "gamma": gamma(word),
            "type": list(tri_type(word)),
        }
    else:
        info = {
            "word": args.word,
            "type": list(quad_type(word)),
            "root_distance": quad_root_distance(word),
            "gamma_prime_literal": gamma_prime_literal(word),
        }
    _emit(json.dumps(info, sort_keys=True), args.out)
    return 0


# ---------------------------------------------------------------------------
# verify: every module-level invariant, each with a stable ID


def cmd_verify(args) -> int:
    from . import verify as verify_mod

    results = verify_mod.run_all(level=args.level, max_exhaustive=args.max_exhaustive)
    failed = [name for name, ok, _ in results if not ok]
    for name, ok, detail in results:
        line = f"{'PASS' if ok else 'FAIL'} {name}"
        if detail:
            line += f"  ({detail})"
        print(line)
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 2 if failed else 0


def build_parser() -> _Parser:
    p = _Parser(prog="stackmaps", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp, law=True):
        sp.add_argument("--family", choices=("tri", "quad"), default="tri")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--out", default=None)
        if law:
            sp.add_argument("--law", choices=("uniform", "growth"), default="uniform")

    sp = sub.add_parser("sample", help="sample a random stack-map")
    common(sp)
    sp.add_argument("--size", type=int, required=True)
    sp.add_argument("--format", choices=("json", "svg"), default="json")
    sp.set_defaults(fn=cmd_sample)

    sp = sub.add_parser("enumerate", help="list all trees of a given size")
    common(sp, law=False)
    sp.add_argument("--size", type=int, required=True)
    sp.set_defaults(fn=cmd_enumerate)

    sp = sub.add_parser("count", help="exact counting formulas")
    common(sp, law=False)
    sp.add_argument("--what", choices=("trees", "forests", "histories"), required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, default=1)
    sp.set_defaults(fn=cmd_count)

    sp = sub.add_parser("verify", help="run the invariant suites")
    sp.add_argument("--level", choices=("quick", "full"), default="quick")
    sp.add_argument("--max-exhaustive", type=int, default=4)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("stats", help="Monte-Carlo experiments")
    common(sp, law=False)
    sp.add_argument("--experiment", required=True, choices=sorted(stats.EXPERIMENTS))
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--reps", type=int, default=None)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.set_defaults(fn=cmd_stats)

    sp = sub.add_parser("draw", help="SVG drawing of a sampled map")
    common(sp)
    sp.add_argument("--size", type=int, required=True)
    sp.set_defaults(fn=cmd_draw)

    sp = sub.add_parser("frag", help="sample a fragmentation tree")
    common(sp, law=False)
    sp.add_argument("--arity", type=int, choices=(2, 3), default=3)
    sp.add_argument("--k", type=int, required=True)
    sp.set_defaults(fn=cmd_frag)

    sp = sub.add_parser("ball", help="finite ball of the local-limit map")
    common(sp, law=False)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--format", choices=("json", "svg"), default="json")
    sp.set_defaults(fn=cmd_ball)

    sp = sub.add_parser("passage", help="evaluate passage statistics of a word")
    common(sp, law=False)
    sp.add_argument("action", nargs="?", default="eval", choices=("eval",))
    sp.add_argument("--word", required=True)
    sp.set_defaults(fn=cmd_passage)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
