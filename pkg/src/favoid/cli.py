"""Command-line entry point: density, construct, simulate, estimate,
regcheck, and verify subcommands.

Conventions shared by every command: exact rationals print as `p/q` strings,
JSON output is key-sorted so seeded runs are byte-identical, randomized
commands require an explicit --seed, and a run manifest (command echo,
version, seeds, timing, output digests) is emitted on stderr and optionally
to --manifest.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction

from . import __version__
from .constructions import SizeExplosionError, densest_member, enumerate_Fk
from .densities import (
    balancedness,
    m,
    m1,
    m2,
    m2_bar,
    premise_check,
    threshold_exponent,
)
from .estimator import ExperimentPlan, outcomes_to_csv, run_experiment
from .game import STRATEGIES, GameConfig, edge_count, play
from .graphs import (
    BUILTIN_GRAPHS,
    Graph,
    SizeExceededError,
    graph_to_text,
    named_graph,
    parse_graph_text,
)
from .regularity import (
    PartiteSystem,
    RootHypergraph,
    check_lower_regular,
    check_regular_pair,
    check_upper_extensible,
    check_upper_uniform,
    codegree_function,
)
from .verifier import (
    LemmaResult,
    check_building,
    check_density_chain,
    check_forbidden_density,
    check_fstar_density,
    check_klr_density,
    check_m2_le_2m,
    check_prod_density,
    check_rooted_density,
    check_FtimesFstar,
    default_suite,
)

EXIT_OK = 0
EXIT_FALSIFIED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _load_graph(spec: str) -> Graph:
    if spec in BUILTIN_GRAPHS:
        return named_graph(spec)
    if os.path.exists(spec):
        try:
            return parse_graph_text(open(spec).read())
        except ValueError as exc:
            raise UsageError(f"malformed graph file {spec}: {exc}") from exc
    raise UsageError(f"unknown graph name or missing file: {spec!r}")


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _write_output(path: str, text: str, outputs: dict):
    with open(path, "w") as fh:
        fh.write(text)
    outputs[path] = hashlib.sha256(text.encode()).hexdigest()


class Manifest:
    def __init__(self, argv):
        self.argv = list(argv)
        self.started = time.time()
        self.seeds: dict = {}
        self.outputs: dict = {}

    def emit(self, manifest_path: str | None):
        data = {
            "schema": "favoid.manifest/1",
            "command": self.argv,
            "version": __version__,
            "seeds": self.seeds,
            "elapsed_seconds": round(time.time() - self.started, 3),
            "outputs": self.outputs,
        }
        line = json.dumps(data, sort_keys=True)
        print(line, file=sys.stderr)
        if manifest_path:
            with open(manifest_path, "w") as fh:
                fh.write(line + "\n")


# ---------------------------------------------------------------------------
# density
# ---------------------------------------------------------------------------


def cmd_density(args, manifest: Manifest) -> int:
    g = _load_graph(args.graph)
    r = args.r
    flags = balancedness(g)
    rows = [
        ("m", m(g).value),
        ("m1", m1(g).value),
        ("m2", m2(g).value),
    ]
    if g.edge_count >= 1:
        rows.append((f"m2_bar[r={r}]", m2_bar(g, r).value))
        rows.append((f"exponent[r={r}]", threshold_exponent(g, r)))
        if args.all:
            for rr in range(1, r + 1):
                rows.append((f"m2_bar[r={rr}]", m2_bar(g, rr).value))
                rows.append((f"exponent[r={rr}]", threshold_exponent(g, rr)))
    flag_dict = {
        "balanced": flags.balanced,
        "strictly_balanced": flags.strictly_balanced,
        "one_balanced": flags.one_balanced,
        "strictly_one_balanced": flags.strictly_one_balanced,
        "two_balanced": flags.two_balanced,
        "strictly_two_balanced": flags.strictly_two_balanced,
    }
    if args.json:
        out = {
            "schema": "favoid.density/1",
            "graph": {"vertices": g.vertex_count, "edges": sorted(map(list, g.edges))},
            "values": {k: str(v) for k, v in rows},
            "balancedness": flag_dict,
        }
        if not g.is_forest():
            pr = premise_check(g)
            out["premise"] = {
                "is_2_balanced": pr.is_2_balanced,
                "witness_edges": sorted(map(list, pr.witnesses)),
                "satisfied": pr.satisfied,
            }
        sys.stdout.write(_dump_json(out))
    else:
        for k, v in rows:
            print(f"{k} = {v}")
        for k, v in flag_dict.items():
            print(f"{k} = {'yes' if v else 'no'}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# construct
# ---------------------------------------------------------------------------


def _tree_to_dict(tree) -> dict:
    out = {
        "kind": tree.kind,
        "level": tree.level,
        "realized": {
            "vertices": tree.realized.graph.vertex_count,
            "edges": sorted(map(list, tree.realized.graph.edges)),
            "roots": list(tree.realized.roots),
        },
    }
    if tree.kind == "product":
        out["attachments"] = [
            {"edge": list(e), "subtree": _tree_to_dict(sub)}
            for e, sub in tree.attachments
        ]
    if tree.kind == "join":
        out["branches"] = [_tree_to_dict(b) for b in tree.branches]
        out["designated_f_minus"] = [
            {"vertices": list(h.vertices), "edges": sorted(map(list, h.edges))}
            for h in tree.designated
        ]
    return out


def cmd_construct(args, manifest: Manifest) -> int:
    pattern = _load_graph(args.F)
    try:
        u, w = (int(x) for x in args.edge.split(","))
    except ValueError:
        raise UsageError("--edge expects `u,w`") from None
    try:
        members = enumerate_Fk(pattern, (u, w), args.k)
    except (ValueError, SizeExplosionError) as exc:
        raise UsageError(str(exc)) from exc
    selected = [densest_member(members)] if args.densest else members
    for member in selected:
        sys.stdout.write(graph_to_text(member.realized.graph))
        print(f"# roots {member.realized.roots[0]} {member.realized.roots[1]}")
    sidecar = {
        "schema": "favoid.construct/1",
        "pattern": {"vertices": pattern.vertex_count, "edges": sorted(map(list, pattern.edges))},
        "root_edge": [u, w],
        "k": args.k,
        "members": [_tree_to_dict(t) for t in selected],
    }
    _write_output(args.sidecar, _dump_json(sidecar), manifest.outputs)
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def cmd_simulate(args, manifest: Manifest) -> int:
    pattern = _load_graph(args.F)
    total = edge_count(args.n)
    max_rounds = total if args.max_rounds is None else min(args.max_rounds, total)
    config = GameConfig(
        n=args.n,
        pattern=pattern,
        colors=args.r,
        max_rounds=max_rounds,
        seed=args.seed,
        strategy=args.strategy,
    )
    manifest.seeds["game"] = args.seed
    record = play(config, record_transcript=args.transcript is not None)
    record_dict = record.to_json_dict()
    transcript = record_dict.pop("transcript", None)
    if args.transcript is not None:
        lines = "".join(
            json.dumps(entry, sort_keys=True) + "\n" for entry in transcript
        )
        _write_output(args.transcript, lines, manifest.outputs)
    record_dict["schema"] = "favoid.simulate/1"
    sys.stdout.write(_dump_json(record_dict))
    return EXIT_OK


# ---------------------------------------------------------------------------
# estimate
# ---------------------------------------------------------------------------


def cmd_estimate(args, manifest: Manifest) -> int:
    pattern = _load_graph(args.F)
    try:
        grid = tuple(int(x) for x in args.grid.split(","))
    except ValueError:
        raise UsageError("--grid expects comma-separated integers") from None
    plan = ExperimentPlan(
        pattern=pattern,
        colors=args.r,
        n_grid=grid,
        trials_per_n=args.trials,
        seed_root=args.seed,
        strategy=args.strategy,
    )
    manifest.seeds["seed_root"] = args.seed
    estimate = run_experiment(plan, jobs=args.jobs)
    if args.csv:
        _write_output(args.csv, outcomes_to_csv(estimate.outcomes), manifest.outputs)
    out = estimate.to_json_dict()
    out["schema"] = "favoid.estimate/1"
    sys.stdout.write(_dump_json(out))
    return EXIT_OK


# ---------------------------------------------------------------------------
# regcheck
# ---------------------------------------------------------------------------


def _verdict_out(verdict) -> tuple[dict, int]:
    data = {
        "schema": "favoid.regcheck/1",
        "status": verdict.status,
        "samples": verdict.samples,
        "certificate": verdict.certificate,
    }
    code = EXIT_FALSIFIED if verdict.status == "falsified" else EXIT_OK
    return data, code


def _mode_args(args) -> dict:
    if args.samples is not None:
        if args.seed is None:
            raise UsageError("sampled mode requires --seed")
        return {"mode": "sampled", "samples": args.samples, "seed": args.seed}
    return {"mode": "exact"}


def cmd_regcheck(args, manifest: Manifest) -> int:
    kind = args.kind
    if kind == "pair":
        spec = json.load(open(args.input))
        verdict = check_regular_pair(
            spec["U"],
            spec["W"],
            [tuple(e) for e in spec["edges"]],
            Fraction(args.eps),
            Fraction(args.p),
            **_mode_args(args),
        )
    elif kind == "uniform":
        g = _load_graph(args.input)
        verdict = check_upper_uniform(
            g, Fraction(args.eta), Fraction(args.p), **_mode_args(args)
        )
    elif kind in ("lower", "extensible"):
        spec = json.load(open(args.input))
        roots = RootHypergraph(
            part_size=spec["parts"]["size"],
            arity=len(spec["roots"][0]) if spec["roots"] else 2,
            edges=frozenset(tuple(e) for e in spec["roots"]),
        )
        pattern = _load_graph(args.F)
        if kind == "lower":
            verdict = check_lower_regular(
                roots, pattern, Fraction(args.q), Fraction(args.eps), **_mode_args(args)
            )
        else:
            ok, worst = check_upper_extensible(
                roots, pattern, Fraction(args.q), Fraction(args.A)
            )
            out = {
                "schema": "favoid.regcheck/1",
                "status": "verified" if ok else "falsified",
                "certificate": worst,
            }
            sys.stdout.write(_dump_json(out))
            return EXIT_OK if ok else EXIT_FALSIFIED
    elif kind == "codegree":
        spec = json.load(open(args.input))
        report = codegree_function(
            spec["vertices"], [tuple(e) for e in spec["edges"]], args.tau
        )
        out = {
            "schema": "favoid.regcheck/1",
            "tau": report.tau,
            "arity": report.arity,
            "average_degree": report.average_degree,
            "per_level": [list(x) for x in report.per_level],
            "delta": report.delta,
        }
        sys.stdout.write(_dump_json(out))
        return EXIT_OK
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown regcheck kind {kind}")
    data, code = _verdict_out(verdict)
    sys.stdout.write(_dump_json(data))
    return code


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

LEMMA_IDS = (
    "chain",
    "m2-le-2m",
    "building",
    "fstar-density",
    "klr-density",
    "rooted-density",
    "forbidden-density",
    "prod-density",
    "f-times-fstar",
    "all",
)


def _run_lemma(lemma: str, args) -> list[LemmaResult]:
    patterns = args.patterns.split(",")
    results = []
    if lemma == "chain":
        results.append(check_density_chain(args.vmax, args.r))
    elif lemma == "m2-le-2m":
        results.append(check_m2_le_2m(args.vmax))
    elif lemma == "building":
        results.append(check_building(patterns))
    elif lemma == "forbidden-density":
        results.append(check_forbidden_density(args.vmax, args.r))
    elif lemma == "prod-density":
        results.append(check_prod_density())
    elif lemma == "all":
        return default_suite(args.vmax, tuple(patterns), args.k, args.r)
    else:
        for name in patterns:
            pattern = named_graph(name)
            root_edge = min(pattern.edges)
            if lemma == "fstar-density":
                for r in range(2, args.r + 1):
                    results.append(check_fstar_density(pattern, root_edge, args.k, r))
            elif lemma == "klr-density":
                results.append(check_klr_density(pattern, root_edge, args.r))
            elif lemma == "rooted-density":
                results.append(check_rooted_density(pattern, root_edge, args.k))
            elif lemma == "f-times-fstar":
                for r in range(2, min(args.k, 3) + 1):
                    results.append(check_FtimesFstar(pattern, root_edge, r))
    return results


def cmd_verify(args, manifest: Manifest) -> int:
    results = _run_lemma(args.lemma, args)
    any_fail = False
    for res in results:
        status = "pass" if res.passed else "FAIL"
        print(f"[{status}] {res.lemma}: {res.checked} checks ({res.universe})")
        if not res.passed:
            any_fail = True
            for ce in res.counterexamples[:5]:
                print(f"    counterexample: {ce['params']} lhs={ce['lhs']} rhs={ce['rhs']}")
    if args.json:
        report = {
            "schema": "favoid.verify/1",
            "results": [r.to_json_dict() for r in results],
            "passed": not any_fail,
        }
        _write_output(args.json, _dump_json(report), manifest.outputs)
    return EXIT_FALSIFIED if any_fail else EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="favoid",
        description="Workbench for online pattern-avoidance games on random graphs",
    )
    parser.add_argument("--manifest", help="also write the run manifest to this path")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("density", help="exact densities and threshold exponents")
    p.add_argument("graph", help="builtin name (K3, C5, ...) or graph text file")
    p.add_argument("--r", type=int, default=2, help="number of colors (default 2)")
    p.add_argument("--all", action="store_true", help="print every level up to r")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("construct", help="enumerate forced-structure classes")
    p.add_argument("--F", required=True, help="pattern graph")
    p.add_argument("--edge", required=True, help="root edge as `u,w`")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--list", action="store_true", help="list all members (default)")
    p.add_argument("--densest", action="store_true", help="only the densest member")
    p.add_argument(
        "--sidecar",
        default="fk_trees.json",
        help="construction-tree JSON sidecar path (default fk_trees.json)",
    )
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("simulate", help="play one seeded avoidance game")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--F", required=True)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--strategy", choices=STRATEGIES, default="greedy")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-rounds", type=int, default=None, dest="max_rounds")
    p.add_argument("--transcript", help="write per-round JSONL transcript here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", help="Monte Carlo threshold-exponent estimate")
    p.add_argument("--F", required=True)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--strategy", choices=STRATEGIES, default="greedy")
    p.add_argument("--grid", default="64,128,256,512")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--csv", help="write per-trial CSV here")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("regcheck", help="regularity-style checkers")
    p.add_argument(
        "kind", choices=("pair", "uniform", "lower", "extensible", "codegree")
    )
    p.add_argument("input", help="input file (JSON spec or graph text)")
    p.add_argument("--F", help="pattern graph (lower/extensible)")
    p.add_argument("--eps", default="0.1")
    p.add_argument("--eta", default="0.1")
    p.add_argument("--p", default="1")
    p.add_argument("--q", default="0.5")
    p.add_argument("--A", default="1")
    p.add_argument("--tau", type=float, default=0.5)
    p.add_argument("--exact", action="store_true", help="exact mode (default)")
    p.add_argument("--samples", type=int, default=None, help="sampled mode")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_regcheck)

    p = sub.add_parser("verify", help="brute-force lemma verification")
    p.add_argument("lemma", choices=LEMMA_IDS, nargs="?", default="all")
    p.add_argument("--vmax", type=int, default=6)
    p.add_argument("--r", type=int, default=4)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--patterns", default="K3,C4,K4,C5")
    p.add_argument("--json", help="write the JSON report here")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    manifest = Manifest(["favoid"] + argv)
    try:
        code = args.func(args, manifest)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SizeExceededError, SizeExplosionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    manifest.emit(args.manifest)
    return code


if __name__ == "__main__":
    sys.exit(main())
