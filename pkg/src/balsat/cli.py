"""Command line entry point: ``balsat <subcommand> ...``.

Every artifact carries the fully resolved configuration (JSON under a
``config`` key, or ``# config:`` comment lines for CSV and edge lists), which
is enough to reproduce it.  Exit status: 0 success, 1 failed certificate or
verification, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict
from fractions import Fraction
from pathlib import Path

from . import __version__
from .enumeration import enumerate_copies
from .family import (
    build_balanced_family,
    codegree_function,
    family_from_dict,
    family_to_dict,
    replay_audit,
    verify_certificate,
)
from .hypergraph import Hypergraph, format_edgelist, gnp_sample, read_edgelist
from .metrics import Pattern, builtin_pattern, pattern_summary
from .turan import CSV_COLUMNS, BudgetExceeded, ex_exact, random_turan_sweep, sweep_summary


class UsageError(Exception):
    pass


def load_pattern(spec: str) -> Pattern:
    if spec.startswith("builtin:"):
        return builtin_pattern(spec[len("builtin:"):])
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"pattern file not found: {spec}")
    return Pattern.of(read_edgelist(path), name=path.stem)


def load_host(spec: str, seed: int | None) -> Hypergraph:
    """An edge-list file, or ``gnp:N:P[:R]`` sampled with ``seed``."""
    if spec.startswith("gnp:"):
        parts = spec.split(":")[1:]
        n, p = int(parts[0]), float(parts[1])
        r = int(parts[2]) if len(parts) > 2 else 2
        return gnp_sample(n, p, r, 0 if seed is None else seed)
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"host file not found: {spec}")
    return read_edgelist(path)


def read_config(path: str) -> list[str]:
    """Flat ``key = value`` lines turned into ``--key value`` flags."""
    args: list[str] = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"bad config line: {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        args += [f"--{key.replace('_', '-')}", value]
    return args


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _alpha(text: str) -> Fraction:
    try:
        return Fraction(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"alpha must be rational like 3/2 or 1.5, got {text!r}") from exc


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="balsat", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", help="flat key = value file; flags override it")
        p.add_argument("--out", help="output path (default: stdout)")
        return p

    p = add("metrics", "densities and exponents of a pattern")
    p.add_argument("--pattern", required=True)
    p.add_argument("--alpha", type=_alpha, required=True)
    p.add_argument("--k", type=float)
    p.add_argument("--n", type=int)

    p = add("enumerate", "stream copies of a pattern as JSON lines of edge indices")
    p.add_argument("--host", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--limit", type=int)
    p.add_argument("--forbidden", help="file with one forbidden edge-index set per line")
    p.add_argument("--seed", type=int, default=0)

    p = add("build-family", "greedy balanced family with certificate bundle")
    p.add_argument("--host", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--alpha", type=_alpha, required=True)
    p.add_argument("--beta-mode", default="thm1", help="thm1, thm2 or an explicit beta")
    p.add_argument("--n-target", type=int)
    p.add_argument("--c", type=float)
    p.add_argument("--k", type=float)
    p.add_argument("--delta-prime", type=float, default=1.0)
    p.add_argument("--cutoff", choices=["l", "l-1"], default="l-1")
    p.add_argument("--seed", type=int, default=0)

    p = add("verify", "re-verify a certificate bundle from scratch")
    p.add_argument("--bundle", required=True)

    p = add("codegree", "co-degree function delta(F, tau) of a bundle's family")
    p.add_argument("--bundle", required=True)
    p.add_argument("--tau", type=Fraction, required=True)

    p = add("ex-exact", "exact extremal number ex(n, H)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--budget", type=int, default=200_000)

    p = add("random-turan", "sweep ex(G(n,p), H) against the bound formulas")
    p.add_argument("--pattern", required=True)
    p.add_argument("--alpha", type=_alpha, required=True)
    p.add_argument("--n-list", type=_ints, required=True)
    p.add_argument("--p-list", type=_floats, required=True)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--mode", choices=["exact", "greedy"], default="greedy")
    p.add_argument("--variant", choices=["general", "es_good"], default="general")
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--copy-budget", type=int, default=5_000)
    p.add_argument("--node-budget", type=int, default=500_000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)

    p = add("sample", "write a G(n,p) sample as an edge list")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    return parser


def resolved(args: argparse.Namespace) -> dict:
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in ("config", "out"):
            continue
        if isinstance(value, Fraction):
            value = str(value)
        out[key] = value
    return out


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj, compact: bool = False) -> str:
    if compact:
        return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_metrics(args) -> int:
    pattern = load_pattern(args.pattern)
    body = pattern_summary(pattern, args.alpha, args.k, args.n)
    _emit(_dump({"config": resolved(args), **body}), args.out)
    return 0


def _read_sets(path: str) -> list[list[int]]:
    sets = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            sets.append([int(tok) for tok in line.replace(",", " ").split()])
    return sets


def cmd_enumerate(args) -> int:
    host = load_host(args.host, args.seed)
    pattern = load_pattern(args.pattern)
    forbidden = _read_sets(args.forbidden) if args.forbidden else None
    lines = [json.dumps({"config": resolved(args)})]
    lines += [json.dumps(list(c.edges)) for c in enumerate_copies(host, pattern, args.limit, forbidden)]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_build_family(args) -> int:
    host = load_host(args.host, args.seed)
    pattern = load_pattern(args.pattern)
    mode = args.beta_mode if args.beta_mode in ("thm1", "thm2") else float(args.beta_mode)
    fam, report = build_balanced_family(
        host, pattern, args.alpha, k=args.k, n_target=args.n_target, C=args.c,
        beta_mode=mode, cutoff=args.cutoff, delta_prime=args.delta_prime,
    )
    bundle = {"config": resolved(args), **family_to_dict(fam), "report": asdict(report)}
    _emit(_dump(bundle, compact=True), args.out)
    ok = report.reached_target and bundle["certificate"]["satisfied"]
    return 0 if ok else 1


def cmd_verify(args) -> int:
    data = json.loads(Path(args.bundle).read_text())
    fam = family_from_dict(data)
    cert = verify_certificate(fam)
    stored = data.get("per_size_max_degree")
    matches = stored is None or stored == cert.per_size_max_degree
    audit = replay_audit(fam)
    ok = cert.ok and matches and not audit
    result = {
        "ok": ok,
        "satisfied": cert.satisfied,
        "worst_ratio": cert.worst_ratio,
        "worst_S": list(cert.worst_S) if cert.worst_S else None,
        "per_size_max_degree": cert.per_size_max_degree,
        "stored_degrees_match": matches,
        "invalid_members": cert.invalid_members,
        "members_distinct": cert.members_distinct,
        "replay_violations": len(audit),
    }
    _emit(_dump({"config": resolved(args), **result}), args.out)
    return 0 if ok else 1


def cmd_codegree(args) -> int:
    fam = family_from_dict(json.loads(Path(args.bundle).read_text()))
    value = codegree_function(fam, args.tau)
    _emit(_dump({"config": resolved(args), "delta": float(value), "delta_exact": str(value)}), args.out)
    return 0


def cmd_ex_exact(args) -> int:
    pattern = load_pattern(args.pattern)
    try:
        rec = ex_exact(args.n, pattern, budget=args.budget)
    except BudgetExceeded as exc:
        _emit(_dump({"config": resolved(args), "exact": False, "reason": str(exc)}), args.out)
        return 1
    body = {"n": rec.n, "ex": rec.ex_value, "method": rec.method,
            "witness": [list(e) for e in rec.witness.edges]}
    _emit(_dump({"config": resolved(args), **body}), args.out)
    return 0


def cmd_random_turan(args) -> int:
    pattern = load_pattern(args.pattern)
    records = random_turan_sweep(
        pattern, args.alpha, args.n_list, args.p_list, args.trials, args.mode, args.seed,
        args.variant, args.c, args.copy_budget, args.node_budget, args.workers,
    )
    buf = io.StringIO()
    buf.write(f"# config: {json.dumps(resolved(args), sort_keys=True)}\n")
    buf.write(f"# summary: {json.dumps(sweep_summary(records), sort_keys=True)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        row = asdict(rec)
        row["measured"] = "" if rec.measured is None else rec.measured
        row["bound_value"] = repr(rec.bound_value)
        row["runtime_ms"] = f"{rec.runtime_ms:.3f}"
        writer.writerow([row[c] for c in CSV_COLUMNS])
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_sample(args) -> int:
    g = gnp_sample(args.n, args.p, args.r, args.seed)
    header = [f"config: {json.dumps(resolved(args), sort_keys=True)}"]
    _emit(format_edgelist(g, header), args.out)
    return 0


COMMANDS = {
    "metrics": cmd_metrics,
    "enumerate": cmd_enumerate,
    "build-family": cmd_build_family,
    "verify": cmd_verify,
    "codegree": cmd_codegree,
    "ex-exact": cmd_ex_exact,
    "random-turan": cmd_random_turan,
    "sample": cmd_sample,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = make_parser()
    try:
        if "--config" in argv:
            i = argv.index("--config")
            if i + 1 >= len(argv):
                raise UsageError("--config needs a path")
            # file values first so explicit flags win
            argv = argv[:1] + read_config(argv[i + 1]) + argv[1:]
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except (UsageError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"balsat: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
