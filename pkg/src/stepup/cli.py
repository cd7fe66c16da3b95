"""Command-line front end: reproducible search / verify / walk pipelines.

Exit codes: 0 pass, 1 property fails (witness written), 2 search exhausted,
3 usage, 4 budget exceeded.  All randomness flows from explicit seed flags;
every command that writes artifacts also writes a manifest with content
digests, and `stepup rerun` replays a manifest and compares digests.
"""

from __future__ import annotations

import argparse
import json
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from . import __version__
from .backend import set_workers
from .colorings import (
    PATTERNS,
    Exhaustive,
    Sampled,
    SearchConfig,
    SearchFailure,
    load_coloring,
    save_coloring,
    search_coloring,
    verify_universal,
)
from .constructions import RULESETS, RuleSet, build_hypergraph
from .errors import BudgetExceededError
from .hypergraphs import (
    Certificate,
    alpha_clique,
    alpha_pattern,
    is_clique_free,
    load_hypergraph,
)
from .layers import Exhausted as WalkExhausted
from .layers import build_layers, greedy_lrs, walk_section3
from .manifest import RunManifest, load_manifest, sha256_file, write_manifest

EXIT_OK = 0
EXIT_PROPERTY_FAIL = 1
EXIT_EXHAUSTED = 2
EXIT_USAGE = 3
EXIT_BUDGET = 4


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE) -> None:
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit 2; the taxonomy says 3
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> _Parser:
    p = _Parser(prog="stepup", description=__doc__)
    p.add_argument("--version", action="version", version=f"stepup {__version__}")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp):
        sp.add_argument("--workers", type=int, default=None,
                        help="worker threads for partitioned scans (default: all)")
        sp.add_argument("--no-manifest", action="store_true")

    sp = sub.add_parser("search", help="randomized restart search for a coloring")
    sp.add_argument("--pattern", required=True, choices=sorted(PATTERNS))
    sp.add_argument("--D", required=True, type=int)
    sp.add_argument("--n", required=True, type=int)
    sp.add_argument("--restarts", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--sample-count", type=int, default=None,
                    help="verify restarts on sampled n-subsets instead of exhaustively")
    sp.add_argument("--max-subsets", type=int, default=10**6)
    sp.add_argument("--out", required=True)
    common(sp)

    sp = sub.add_parser("verify", help="freeness / independence / universal checks")
    sp.add_argument("--check", required=True, choices=["k6free", "alpha", "universal"])
    sp.add_argument("--hypergraph", help="explicit hypergraph file")
    sp.add_argument("--rules", choices=sorted(RULESETS))
    sp.add_argument("--ruleset-json", help="custom rule set JSON file")
    sp.add_argument("--coloring", help="coloring file (with --rules)")
    sp.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    sp.add_argument("--samples", type=int, default=10**6)
    sp.add_argument("--sample-seed", type=int, default=0)
    sp.add_argument("--budget", type=int, default=10**8)
    sp.add_argument("--materialize-cap", type=int, default=10**7)
    sp.add_argument("--t", type=int, help="pattern edge count (check=alpha)")
    sp.add_argument("--family", choices=["pattern", "clique"], default="pattern")
    sp.add_argument("--m", type=int, default=None,
                    help="require independence < m (check=alpha)")
    sp.add_argument("--max-n", type=int, default=64)
    sp.add_argument("--pattern", dest="tuple_pattern", choices=sorted(PATTERNS),
                    help="good-tuple template (check=universal)")
    sp.add_argument("--n", type=int, help="subset size (check=universal)")
    sp.add_argument("--out", required=True)
    common(sp)

    sp = sub.add_parser("walk", help="witness-hunting walks over random or given tuples")
    sp.add_argument("--which", required=True, choices=["section3", "section4"])
    sp.add_argument("--coloring", required=True)
    sp.add_argument("--n", required=True, type=int)
    sp.add_argument("--q-file", help="explicit tuples, one per line")
    sp.add_argument("--q-count", type=int)
    sp.add_argument("--q-seed", type=int, default=0)
    sp.add_argument("--q-size", type=int, help="must match the walk's required size")
    sp.add_argument("--materialize-cap", type=int, default=10**7)
    sp.add_argument("--out-dir", required=True)
    common(sp)

    sp = sub.add_parser("rerun", help="replay a manifest and compare output digests")
    sp.add_argument("manifest")
    sp.add_argument("--out-dir", default=None,
                    help="redirect outputs here (default: temp dir)")
    common(sp)
    return p


# ---------------------------------------------------------------------------

def _load_ruleset(args) -> RuleSet:
    if getattr(args, "ruleset_json", None):
        return RuleSet.from_json(Path(args.ruleset_json).read_text())
    if args.rules:
        return RULESETS[args.rules]()
    raise CliError("need --rules or --ruleset-json")


def _json_out(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(doc, indent=2) + "\n")


def cmd_search(args, record) -> int:
    pat = PATTERNS[args.pattern]()
    mode = Exhaustive() if args.sample_count is None else Sampled(args.sample_count, args.seed)
    cfg = SearchConfig(
        max_restarts=args.restarts, verify_mode=mode, rng_seed=args.seed,
        max_subsets=args.max_subsets,
    )
    record["seeds"]["search"] = args.seed
    result = search_coloring(args.D, args.n, pat, cfg)
    out = Path(args.out)
    if isinstance(result, SearchFailure):
        best_path = out.with_suffix(out.suffix + ".best")
        save_coloring(result.best_coloring, best_path)
        failure_path = out.with_suffix(out.suffix + ".failure.json")
        _json_out(failure_path, {
            "format": 1,
            "status": "exhausted",
            "pattern": args.pattern,
            "D": args.D,
            "n": args.n,
            "restarts": result.restarts,
            "best_seed": f"0x{result.best_seed:016x}",
            "best_bad_count": result.best_bad_count,
            "best_counterexample": list(result.best_counterexample or ()),
            "best_coloring_file": best_path.name,
        })
        record["outputs"].extend([failure_path, best_path])
        print(f"search exhausted after {result.restarts} restarts; "
              f"best attempt misses {result.best_bad_count} subsets")
        return EXIT_EXHAUSTED
    save_coloring(result, out)
    record["outputs"].append(out)
    print(f"found coloring with seed 0x{result.seed:016x} -> {out}")
    return EXIT_OK


def _verify_input_graph(args, record):
    if args.hypergraph:
        record["inputs"].append(Path(args.hypergraph))
        return load_hypergraph(args.hypergraph), None
    if not args.coloring:
        raise CliError("need --hypergraph or --coloring with --rules/--ruleset-json")
    rs = _load_ruleset(args)
    if getattr(args, "ruleset_json", None):
        record["inputs"].append(Path(args.ruleset_json))
    record["inputs"].append(Path(args.coloring))
    phi = load_coloring(args.coloring)
    H = build_hypergraph(rs, phi, materialize_cap=args.materialize_cap)
    return H, phi


def cmd_verify(args, record) -> int:
    out = Path(args.out)
    if args.check == "universal":
        if not (args.coloring and args.tuple_pattern and args.n):
            raise CliError("check=universal needs --coloring, --pattern and --n")
        record["inputs"].append(Path(args.coloring))
        phi = load_coloring(args.coloring)
        pat = PATTERNS[args.tuple_pattern]()
        mode = (
            Exhaustive() if args.mode == "exhaustive"
            else Sampled(args.samples, args.sample_seed)
        )
        record["seeds"]["sample"] = args.sample_seed
        rep = verify_universal(phi, args.n, pat, mode, max_subsets=args.budget)
        _json_out(out, {
            "format": 1,
            "check": "universal",
            "pattern": args.tuple_pattern,
            "D": phi.D,
            "n": args.n,
            "mode": args.mode,
            "holds": rep.holds,
            "sets_checked": rep.sets_checked,
            "counterexample": list(rep.counterexample or ()),
        })
        record["outputs"].append(out)
        print(f"universal {'holds' if rep.holds else 'fails'} "
              f"({rep.sets_checked} subsets checked)")
        return EXIT_OK if rep.holds else EXIT_PROPERTY_FAIL

    H, phi = _verify_input_graph(args, record)
    if args.check == "k6free":
        mode = (
            Exhaustive() if args.mode == "exhaustive"
            else Sampled(args.samples, args.sample_seed)
        )
        record["seeds"]["sample"] = args.sample_seed
        rep = is_clique_free(H, 6, mode, max_subsets=args.budget)
        kind = "FreenessChecked" if rep.free else "CliqueFound"
        cert = Certificate(
            kind=kind, k=H.k, s_or_t=6, N=H.N, m=None,
            witness=rep.witness or (), provenance=dict(H.provenance),
            recheck=f"is_clique_free(s=6, {args.mode}) over {rep.subsets_checked} subsets",
        )
        out.write_text(cert.to_json())
        record["outputs"].append(out)
        print(f"K6-free: {rep.free} ({rep.subsets_checked} subsets)")
        return EXIT_OK if rep.free else EXIT_PROPERTY_FAIL

    if args.t is None:
        raise CliError("check=alpha needs --t")
    alpha = (
        alpha_pattern(H, args.t, max_n=args.max_n)
        if args.family == "pattern"
        else alpha_clique(H, args.t, max_n=args.max_n)
    )
    passed = args.m is None or alpha.value < args.m
    cert = Certificate(
        kind="AlphaBound", k=H.k, s_or_t={"t": args.t}, N=H.N,
        m=alpha.value + 1, witness=alpha.witness,
        provenance=dict(H.provenance),
        recheck=f"alpha_{args.family}(t={args.t}).value == {alpha.value}",
        family=args.family,
    )
    out.write_text(cert.to_json())
    record["outputs"].append(out)
    print(f"alpha_{args.family}(t={args.t}) = {alpha.value} "
          f"(witness size {len(alpha.witness)}, {alpha.nodes} nodes)")
    if not passed:
        print(f"required alpha < {args.m}: FAILED")
    return EXIT_OK if passed else EXIT_PROPERTY_FAIL


def _required_q_size(which: str, n: int) -> int:
    return (2 * n) ** 5 + 1 if which == "section3" else n * n


def _load_qs(args, N: int, size: int, record) -> list[np.ndarray]:
    if args.q_file:
        record["inputs"].append(Path(args.q_file))
        rows = []
        for ln in Path(args.q_file).read_text().splitlines():
            ln = ln.strip()
            if not ln or ln.startswith("format="):
                continue
            rows.append(np.array([int(x) for x in ln.split()], np.int64))
        for row in rows:
            if len(row) != size:
                raise CliError(f"tuple size {len(row)} != required {size}")
            if row.max() >= N or row.min() < 0 or (np.diff(row) <= 0).any():
                raise CliError("tuples must be increasing subsets of the vertex set")
        return rows
    if not args.q_count:
        raise CliError("need --q-file or --q-count")
    if args.q_size is not None and args.q_size != size:
        raise CliError(f"--q-size {args.q_size} != required size {size}")
    if size > N:
        raise CliError(f"tuple size {size} exceeds vertex count {N}")
    rng = np.random.default_rng(args.q_seed)
    return [
        np.sort(rng.choice(N, size=size, replace=False)).astype(np.int64)
        for _ in range(args.q_count)
    ]


def cmd_walk(args, record) -> int:
    record["inputs"].append(Path(args.coloring))
    phi = load_coloring(args.coloring)
    rs = RULESETS[args.which]()
    H = build_hypergraph(rs, phi, materialize_cap=args.materialize_cap)
    size = _required_q_size(args.which, args.n)
    record["seeds"]["q"] = args.q_seed
    qs = _load_qs(args, H.N, size, record)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    counts: dict[str, int] = {}
    any_exhausted = False
    for qi, Q in enumerate(qs):
        if args.which == "section3":
            built = build_layers(Q, args.n)
            outcome = built if not hasattr(built, "layers") else walk_section3(built, phi, H)
        else:
            outcome = greedy_lrs(Q, H, args.n, phi)
        counts[outcome.tag] = counts.get(outcome.tag, 0) + 1
        any_exhausted |= isinstance(outcome, WalkExhausted)
        lines = [
            f"format=1 which={args.which} q_index={qi} outcome={outcome.tag}",
            "Q " + " ".join(str(int(v)) for v in Q),
        ]
        if outcome.tag == "PatternCertificate":
            lines.append("vertices " + " ".join(map(str, outcome.vertices)))
            lines.append(f"target {outcome.target} branch {outcome.branch}")
            for e in outcome.edges:
                lines.append("edge " + " ".join(map(str, e)))
        elif outcome.tag == "MonotoneRun":
            lines.append(
                f"run start={outcome.start} length={outcome.length} "
                f"direction={outcome.direction} layer={outcome.layer}"
            )
            lines.append("positions " + " ".join(map(str, outcome.positions)))
        else:
            lines.extend("trace " + t for t in outcome.trace)
        path = out_dir / f"q_{qi:04d}.outcome.txt"
        path.write_text("\n".join(lines) + "\n")
        record["outputs"].append(path)
    summary = out_dir / "summary.json"
    _json_out(summary, {
        "format": 1, "which": args.which, "n": args.n,
        "q_count": len(qs), "outcomes": dict(sorted(counts.items())),
    })
    record["outputs"].append(summary)
    for tag in sorted(counts):
        print(f"{tag}: {counts[tag]}")
    return EXIT_PROPERTY_FAIL if any_exhausted else EXIT_OK


def cmd_rerun(args) -> int:
    man = load_manifest(args.manifest)
    out_dir = Path(args.out_dir) if args.out_dir else Path(tempfile.mkdtemp(prefix="stepup-rerun-"))
    out_dir.mkdir(parents=True, exist_ok=True)
    argv = list(man.command)
    mapping: dict[str, Path] = {}
    for i, tok in enumerate(argv):
        if tok in ("--out", "--out-dir") and i + 1 < len(argv):
            old = argv[i + 1]
            new = out_dir / Path(old).name if tok == "--out" else out_dir
            argv[i + 1] = str(new)
            mapping[tok] = Path(old)
    argv.append("--no-manifest")
    code = main(argv)
    ok = True
    for old_path, digest in man.outputs.items():
        old = Path(old_path)
        if "--out-dir" in mapping and mapping["--out-dir"] in old.parents:
            new = out_dir / old.relative_to(mapping["--out-dir"])
        else:
            new = out_dir / old.name
        if not new.exists():
            print(f"MISSING {new}")
            ok = False
            continue
        got = sha256_file(new)
        status = "OK" if got == digest else "DIGEST-MISMATCH"
        ok &= got == digest
        print(f"{status} {old.name}")
    print(f"rerun exit={code} reproducible={ok}")
    return EXIT_OK if ok else EXIT_PROPERTY_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    set_workers(args.workers)
    if args.cmd == "rerun":
        return cmd_rerun(args)
    record = {"inputs": [], "outputs": [], "seeds": {}}
    t0 = time.perf_counter()
    try:
        if args.cmd == "search":
            code = cmd_search(args, record)
        elif args.cmd == "verify":
            code = cmd_verify(args, record)
        elif args.cmd == "walk":
            code = cmd_walk(args, record)
        else:  # pragma: no cover
            raise CliError(f"unknown command {args.cmd}")
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    if not args.no_manifest:
        cmd_argv = list(argv) if argv is not None else sys.argv[1:]
        man = RunManifest(
            command=[str(a) for a in cmd_argv],
            tool_version=__version__,
            seeds=record["seeds"],
            wall_clock_s=time.perf_counter() - t0,
            inputs={str(p): sha256_file(p) for p in record["inputs"]},
            outputs={str(p): sha256_file(p) for p in record["outputs"]},
        )
        if args.cmd == "walk":
            man_path = Path(args.out_dir) / "manifest.json"
        else:
            out = Path(args.out)
            man_path = out.with_suffix(out.suffix + ".manifest.json")
        write_manifest(man_path, man)
    return code


if __name__ == "__main__":
    sys.exit(main())
