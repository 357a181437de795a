"""Command-line interface: run, gen, summarize, verify."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict

from . import adversary, harness
from .errors import InvariantBreached, StabledgError
from .oracle import OracleBudget
from .stream import write_stream

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INVARIANT = 2


def _budget(args) -> OracleBudget | None:
    if args.budget is None:
        return None
    return OracleBudget(max_vertices=args.budget)


def _seed(args) -> int:
    env = os.environ.get(harness.SEED_ENV_VAR)
    if env is not None:
        return int(env)
    return args.seed


def _add_run_like_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alg", required=True, choices=["directed", "phase2", "phasek", "is2", "is6", "sas"])
    p.add_argument("--stream", required=True)
    p.add_argument("--oracle", choices=["on", "off"], default="off")
    p.add_argument("--budget", type=int, default=None, help="oracle vertex cap")
    p.add_argument("--sparse-oracle", type=int, default=1, metavar="K", help="solve every K-th event only")
    p.add_argument("--target", choices=["auto", "oracle", "greedy"], default="auto")
    p.add_argument("--d", type=int, default=None, help="degree-bound override")
    p.add_argument("--sense", choices=["min-ds", "max-is"], default="min-ds")
    p.add_argument("--eps", default="1", help="approximation slack, e.g. 1/2 or 0.5")
    p.add_argument("--f", type=int, default=2, help="swap size cap")
    p.add_argument("--seed", type=int, default=0)


def _config(args, strict: bool, out=None) -> harness.RunConfig:
    return harness.RunConfig(
        alg=args.alg,
        stream=args.stream,
        oracle="exact" if args.oracle == "on" else "off",
        strict=strict,
        seed=_seed(args),
        out=out,
        oracle_every=args.sparse_oracle,
        budget=_budget(args),
        target=args.target,
        d=args.d,
        params={"sense": args.sense, "eps": args.eps, "f": args.f},
    )


def _cmd_run(args) -> int:
    cfg = _config(args, strict=args.strict, out=args.out)
    records = harness.replay(cfg)
    if records:
        alg_sense = "max" if args.alg in ("is2", "is6") or (args.alg == "sas" and args.sense == "max-is") else "min"
        summary = harness.summarize(records, alg_sense)
        summary.algorithm = args.alg
        print(json.dumps(asdict(summary)))
    else:
        print(json.dumps({"algorithm": args.alg, "events": 0}))
    return EXIT_OK


def _cmd_summarize(args) -> int:
    records = harness.read_trace_csv(args.trace)
    summary = harness.summarize(records, args.sense)
    print(json.dumps(asdict(summary)))
    return EXIT_OK


def _cmd_verify(args) -> int:
    cfg = _config(args, strict=True)
    records, checks = harness.evaluate_bounds(cfg)
    ok = True
    for check in checks:
        status = "PASS" if check.ok else "FAIL"
        ok = ok and check.ok
        print(f"{status} {check.name}" + (f": {check.detail}" if check.detail else ""))
    print(f"{'PASS' if ok else 'FAIL'} overall ({len(records)} events)")
    return EXIT_OK if ok else EXIT_ERROR


def _expander_to_json(exp: adversary.BipartiteExpander) -> dict:
    return {
        "left": exp.left,
        "right": exp.right,
        "edges": [list(e) for e in exp.edges],
        "params": asdict(exp.params),
        "provenance": {
            **exp.provenance,
            "parent_edges": [list(e) for e in exp.provenance.get("parent_edges", [])],
        },
    }


def _expander_from_json(obj: dict) -> adversary.BipartiteExpander:
    return adversary.BipartiteExpander(
        left=list(obj["left"]),
        right=list(obj["right"]),
        edges=[tuple(e) for e in obj["edges"]],
        params=adversary.ExpanderParams(**obj["params"]),
        provenance={
            **obj.get("provenance", {}),
            "parent_edges": [tuple(e) for e in obj.get("provenance", {}).get("parent_edges", [])],
        },
    )


def _obtain_expander(args) -> tuple[adversary.BipartiteExpander, dict]:
    if getattr(args, "expander", None):
        with open(args.expander) as fh:
            exp = _expander_from_json(json.load(fh))
        certificates = {"source": args.expander}
    else:
        exp = adversary.generate_expander_candidate(
            args.n, args.epsilon, args.mu, _seed(args), delta=args.delta, t_radius=args.t_radius
        )
        certificates = {
            "seed": _seed(args),
            "max_degree": exp.max_degree(),
            "transversal_spacing_ok": adversary.transversal_spacing_ok(exp),
        }
    if args.verify_cap:
        result = adversary.verify_expansion(exp, args.verify_cap, args.factor)
        certificates["expansion"] = {
            "certified": result.certified,
            "size_cap": args.verify_cap,
            "factor": args.factor,
            "subsets_checked": result.subsets_checked,
            "counterexample": None
            if result.counterexample is None
            else [sorted(result.counterexample[0]), sorted(result.counterexample[1])],
        }
    return exp, certificates


def _write_sidecar(out: str, payload: dict) -> None:
    with open(f"{out}.meta.json", "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)


def _cmd_gen(args) -> int:
    if args.kind == "expander":
        exp, certificates = _obtain_expander(args)
        with open(args.out, "w") as fh:
            json.dump(_expander_to_json(exp), fh)
        _write_sidecar(args.out, {"certificates": certificates, "params": asdict(exp.params)})
        return EXIT_OK
    if args.kind in ("is-lb", "ds-lb"):
        exp, certificates = _obtain_expander(args)
        build = adversary.is_lowerbound_stream if args.kind == "is-lb" else adversary.domset_lowerbound_stream
        lb = build(exp)
        write_stream(lb.stream, args.out)
        layer_counts: dict[str, int] = {}
        for tag in lb.layers.values():
            layer_counts[tag] = layer_counts.get(tag, 0) + 1
        _write_sidecar(
            args.out,
            {
                "landmarks": lb.landmarks,
                "layer_counts": layer_counts,
                "params": asdict(exp.params),
                "certificates": certificates,
            },
        )
        return EXIT_OK
    if args.kind == "tight":
        stream = adversary.directed_domset_tight_stream(args.d)
        write_stream(stream, args.out)
        _write_sidecar(args.out, {"landmarks": {"t_final": len(stream.events)}, "d": args.d})
        return EXIT_OK
    if args.kind == "star":
        stream = adversary.star_adversary_stream(args.n)
        write_stream(stream, args.out)
        _write_sidecar(args.out, {"landmarks": {"t_final": len(stream.events)}, "n": args.n})
        return EXIT_OK
    raise ValueError(f"unknown generator {args.kind!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stabledg", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="replay a stream with one algorithm and write a trace")
    _add_run_like_args(p_run)
    p_run.add_argument("--out", default=None, help="trace CSV path")
    p_run.add_argument("--strict", action="store_true", help="abort on any stability-cap breach")
    p_run.set_defaults(fn=_cmd_run)

    p_gen = sub.add_parser("gen", help="generate adversarial streams and expander candidates")
    p_gen.add_argument("kind", choices=["expander", "is-lb", "ds-lb", "tight", "star"])
    p_gen.add_argument("--out", required=True)
    p_gen.add_argument("--n", type=int, default=40)
    p_gen.add_argument("--d", type=int, default=3)
    p_gen.add_argument("--epsilon", type=float, default=0.1)
    p_gen.add_argument("--mu", type=float, default=0.005)
    p_gen.add_argument("--delta", type=float, default=0.1)
    p_gen.add_argument("--t-radius", type=int, default=None)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--expander", default=None, help="reuse a previously generated expander JSON")
    p_gen.add_argument("--verify-cap", type=int, default=0, help="certify expansion up to this subset size")
    p_gen.add_argument("--factor", type=float, default=1.99)
    p_gen.set_defaults(fn=_cmd_gen)

    p_sum = sub.add_parser("summarize", help="summarize a trace CSV")
    p_sum.add_argument("--trace", required=True)
    p_sum.add_argument("--sense", choices=["min", "max"], default="min")
    p_sum.set_defaults(fn=_cmd_summarize)

    p_ver = sub.add_parser("verify", help="replay strictly and check every applicable bound")
    _add_run_like_args(p_ver)
    p_ver.set_defaults(fn=_cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except InvariantBreached as exc:
        print(f"FAIL {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except StabledgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
