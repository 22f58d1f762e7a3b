"""Command line interface.

Exit codes: 0 success, 1 validation or verification failure, 2 usage or
parse error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import formats
from .cuts import all_subsets, connected_cuts, default_family, tree_edge_cuts
from .embedding import validate_embedding
from .errors import IsingEmbedError, ParseError, PreprocessableError, SizeError
from .generators import random_connected_graph, random_embedding, random_instance, random_model, random_tree
from .ising import brute_force_minimum, c_max, evaluate
from .lp import build_lp, solve_simplex, to_lp_format
from .oracle import majority_vote, psi, synchronize, tau, verify_end_to_end, verify_solution_gap
from .preprocess import preprocess
from .setter import baseline_uniform, report, set_parameters
from .subproblem import Strategy

OK, FAILED, USAGE = 0, 1, 2
IDENTITY_TOL = 1e-9


class Output:
    """Collects a machine-readable payload and the matching human report."""

    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.lines: list[str] = []

    def line(self, text: str = ""):
        self.lines.append(text)

    def emit(self, payload):
        if self.as_json:
            sys.stdout.write(formats.dumps(formats.jsonable(payload)))
        else:
            sys.stdout.write("\n".join(self.lines) + "\n")


def _fmt(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, float):
        return f"{x:.10g}"
    return str(x)


def _verdicts(reports) -> dict:
    return {
        v: {"passed": r.passed, "worst_margin": r.worst_margin, "required_gap": r.required_gap}
        for v, r in reports.items()
    }


# commands


def cmd_validate(args, out: Output) -> int:
    model = formats.load_problem(args.problem)
    H, phi = formats.load_embedding(args.embedding)
    rep = validate_embedding(model.graph, H, phi)
    for line in rep.lines():
        out.line(line)
    out.emit({"valid": rep.ok, "failures": [{"condition": c, "message": m} for c, m in rep.failures]})
    return OK if rep.ok else FAILED


def cmd_preprocess(args, out: Output) -> int:
    model = formats.load_problem(args.problem)
    res = preprocess(model, strict=args.strict)
    reduced = formats.model_to_dict(res.reduced)
    if args.output:
        formats.write_json(args.output, reduced)
    out.line(f"fixed {len(res.fixed)} of {len(model.vertices)} vertices, offset {_fmt(res.offset)}")
    for ev in res.events:
        out.line(f"  {ev.vertex} = {ev.value:+d}  (|W| = {_fmt(abs(ev.weight))}, incident {_fmt(ev.incident)})")
    out.line(f"remaining vertices: {' '.join(res.reduced.vertices) or '-'}")
    out.emit({"reduced": reduced, "fixed": res.fixed, "offset": res.offset})
    return OK


def cmd_set_params(args, out: Output) -> int:
    model = formats.load_problem(args.problem)
    H, phi = formats.load_embedding(args.embedding)
    try:
        emb = set_parameters(model, H, phi, args.gamma, args.strategy, use_spanning_tree=not args.no_tree)
    except PreprocessableError as exc:
        print(f"error: {exc}; see `isingembed preprocess`", file=sys.stderr)
        return FAILED
    data = formats.result_to_dict(emb)
    if args.output:
        formats.write_json(args.output, data)
    if args.dump_lp:
        _dump_lps(emb, Path(args.dump_lp))
    rep = report(emb)
    out.line(f"gamma {_fmt(args.gamma)}  strategy {rep['strategy']}  qubits {rep['qubits']}")
    out.line(f"C_max {_fmt(rep['c_max'])} (original {_fmt(rep['c_max_original'])})  offset c {_fmt(rep['offset_c'])}")
    for v, rec in sorted(emb.records.items()):
        omega = " ".join(f"{q}={_fmt(rec.sign * w)}" for q, w in sorted(rec.omega.items()))
        out.line(f"  {v}: theta {_fmt(rec.theta)}  weights {omega}  rows {rec.n_constraints}")
    out.emit(data if not args.output else {"report": rep, "result": str(args.output)})
    return OK


def _dump_lps(emb, folder: Path):
    folder.mkdir(parents=True, exist_ok=True)
    for v, rec in sorted(emb.records.items()):
        if rec.theta is None or rec.instance is None:
            continue
        lp = build_lp(rec.instance, default_family(rec.instance.graph))
        (folder / f"{v}.lp").write_text(to_lp_format(lp), encoding="utf-8")


def cmd_verify(args, out: Output) -> int:
    emb = formats.load_result(args.result)
    reps = verify_solution_gap(emb)
    ok = all(r.passed for r in reps.values())
    for v, r in reps.items():
        out.line(f"{v}: {'pass' if r.passed else 'FAIL'}  worst margin {_fmt(r.worst_margin)}  required {_fmt(r.required_gap)}")
        if not r.passed and r.witness is not None:
            out.line(f"    witness r={r.witness[0]} s={r.witness[1]}")
    payload = {"sufficiency": _verdicts(reps), "passed": ok}
    if args.end_to_end:
        eq = verify_end_to_end(emb)
        ok = ok and eq.passed
        out.line(f"end-to-end: {'pass' if eq.passed else 'FAIL'}  original min {_fmt(eq.original_min)}  "
                 f"embedded min + c {_fmt(eq.embedded_min + eq.offset)}")
        for p in eq.problems:
            out.line(f"    {p}")
        payload["end_to_end"] = {
            "passed": eq.passed,
            "original_min": eq.original_min,
            "embedded_min": eq.embedded_min,
            "offset_c": eq.offset,
            "problems": eq.problems,
        }
        payload["passed"] = ok
    out.emit(payload)
    return OK if ok else FAILED


def cmd_solve(args, out: Output) -> int:
    model = formats.load_any_model(args.problem)
    value, minimizers = brute_force_minimum(model)
    out.line(f"minimum {_fmt(value)}  ({len(minimizers)} minimizers)")
    for s in minimizers:
        out.line("  " + " ".join(f"{v}={x:+d}" for v, x in s.items()))
    out.emit({"value": value, "minimizers": minimizers})
    return OK


def cmd_deembed(args, out: Output) -> int:
    emb = formats.load_result(args.result)
    samples = formats.load_samples(args.samples)
    rows, ok = [], True
    for i, s in enumerate(samples):
        energy = evaluate(emb.model, s)
        row = {"index": i, "synchronized": bool(psi(emb, s)), "embedded_energy": energy}
        if row["synchronized"]:
            t = tau(emb, s)
            orig = evaluate(emb.original, t)
            err = abs(energy + emb.offset - orig)
            good = err <= IDENTITY_TOL * max(1.0, abs(orig))
            ok = ok and good
            row.update(assignment=t, original_energy=orig, identity_error=err, identity_ok=good)
            out.line(f"#{i}: synchronized  energy {_fmt(energy)} + c = {_fmt(energy + emb.offset)}  "
                     f"original {_fmt(orig)}  {'ok' if good else 'MISMATCH'}")
        elif args.majority:
            t = majority_vote(emb, s)
            row.update(assignment=t, original_energy=evaluate(emb.original, t), majority=True)
            out.line(f"#{i}: unsynchronized, majority vote gives original energy {_fmt(row['original_energy'])}")
        else:
            out.line(f"#{i}: unsynchronized, no original assignment (use --majority)")
        if "assignment" in row:
            out.line("    " + " ".join(f"{v}={x:+d}" for v, x in row["assignment"].items()))
        rows.append(row)
    out.emit({"offset_c": emb.offset, "samples": rows})
    return OK if ok else FAILED


def _safe_gap(emb, raw_gap=None):
    try:
        return verify_solution_gap(emb, raw_gap)
    except SizeError:
        return None


def cmd_compare(args, out: Output) -> int:
    model = formats.load_problem(args.problem)
    H, phi = formats.load_embedding(args.embedding)
    try:
        opt = set_parameters(model, H, phi, args.gamma)
    except PreprocessableError as exc:
        print(f"error: {exc}; see `isingembed preprocess`", file=sys.stderr)
        return FAILED
    base = baseline_uniform(model, H, phi, args.factor)
    raw_gap = 2.0 * args.gamma
    opt_reps = _safe_gap(opt)
    base_reps = _safe_gap(base, raw_gap)
    base_strict = _safe_gap(base)
    cmax = c_max(model)
    bound = 2.0 * cmax + raw_gap
    out.line(f"gamma {_fmt(args.gamma)}  factor {_fmt(args.factor)}  C_max(original) {_fmt(cmax)}")
    out.line(f"C_max embedded: optimal {_fmt(c_max(opt.model))}  baseline {_fmt(c_max(base.model))}")
    out.line(f"{'vertex':>8} {'theta*':>12} {'F*C_max':>12} {'optimal':>8} {'baseline':>9} {'base>0':>7}")
    rows = {}
    for v in model.vertices:
        def verdict(reps):
            return None if reps is None else reps[v].passed

        row = {
            "theta_optimal": opt.records[v].theta,
            "theta_baseline": base.records[v].theta,
            "optimal_passes": verdict(opt_reps),
            "baseline_passes": verdict(base_reps),
            "baseline_separates": verdict(base_strict),
        }
        rows[v] = row
        out.line(f"{v:>8} {_fmt(row['theta_optimal']):>12} {_fmt(row['theta_baseline']):>12} "
                 f"{_yes(row['optimal_passes']):>8} {_yes(row['baseline_passes']):>9} {_yes(row['baseline_separates']):>7}")
    max_theta = max((t for t in opt.thetas.values()), default=0.0)
    base_ok = base_reps is not None and all(r.passed for r in base_reps.values())
    within = max_theta <= bound + 1e-9
    out.line(f"max theta* {_fmt(max_theta)}  bound 2*C_max + 2*gamma = {_fmt(bound)}  "
             f"{'within' if within else 'exceeds'}{'' if base_ok else ' (baseline fails, bound not asserted)'}")
    out.emit({
        "gamma": args.gamma,
        "factor": args.factor,
        "c_max_original": cmax,
        "c_max_optimal": c_max(opt.model),
        "c_max_baseline": c_max(base.model),
        "max_theta_optimal": max_theta,
        "bound": bound,
        "within_bound": within,
        "baseline_passes": base_ok,
        "vertices": rows,
    })
    return OK


def _yes(x) -> str:
    return "skip" if x is None else ("yes" if x else "NO")


def cmd_distribute(args, out: Output) -> int:
    inst = formats.instance_from_dict(formats.read_json(args.instance), str(args.instance))
    family = {"default": default_family, "tree": tree_edge_cuts, "connected": connected_cuts, "all": all_subsets}[args.family](inst.graph)
    lp = build_lp(inst, family)
    if args.dump_lp:
        Path(args.dump_lp).write_text(to_lp_format(lp), encoding="utf-8")
    sol = solve_simplex(lp)
    out.line(f"theta {_fmt(sol.theta)}  rows {len(lp)}  family {family.kind}  pivots {sol.iterations}")
    out.line("omega " + " ".join(f"{q}={_fmt(w)}" for q, w in sol.omega.items()))
    out.emit({"theta": sol.theta, "omega": sol.omega, "rows": len(lp), "tight_cuts": sol.tight_cuts})
    return OK


def cmd_gen_tree(args, out: Output) -> int:
    rng = np.random.default_rng(args.seed)
    inst = random_instance(random_tree(args.n, rng), rng, gamma=args.gamma)
    data = formats.instance_to_dict(inst)
    _write_or_print(args, out, data)
    return OK


def cmd_gen_instance(args, out: Output) -> int:
    rng = np.random.default_rng(args.seed)
    G = random_connected_graph(args.n, rng, p=args.p)
    model = random_model(G, rng)
    H, phi = random_embedding(G, rng, max_hardware=args.max_hardware)
    data = {"problem": formats.model_to_dict(model), "embedding": formats.embedding_to_dict(H, phi)}
    if args.output:
        folder = Path(args.output)
        folder.mkdir(parents=True, exist_ok=True)
        formats.write_json(folder / "problem.json", data["problem"])
        formats.write_json(folder / "embedding.json", data["embedding"])
        out.line(f"wrote {folder / 'problem.json'} and {folder / 'embedding.json'}")
        out.emit({"problem": str(folder / "problem.json"), "embedding": str(folder / "embedding.json")})
    else:
        sys.stdout.write(formats.dumps(data))
    return OK


def _write_or_print(args, out: Output, data):
    if args.output:
        formats.write_json(args.output, data)
        out.line(f"wrote {args.output}")
        out.emit({"output": str(args.output)})
    else:
        sys.stdout.write(formats.dumps(data))


# parser


def _positive(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (x > 0 and math.isfinite(x)):
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return x


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    parser = argparse.ArgumentParser(
        prog="isingembed",
        description="Set and verify parameters of embedded Ising models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check the minor-embedding conditions")
    p.add_argument("-p", "--problem", required=True)
    p.add_argument("-e", "--embedding", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("preprocess", parents=[common], help="fix spins dominated by their weight")
    p.add_argument("-p", "--problem", required=True)
    p.add_argument("--strict", action="store_true", help="fix only when |W| strictly exceeds incident strength")
    p.add_argument("-o", "--output", help="write the reduced problem here")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("set-params", parents=[common], help="optimal weights and chain couplings")
    p.add_argument("-p", "--problem", required=True)
    p.add_argument("-e", "--embedding", required=True)
    p.add_argument("--gamma", type=_positive, required=True)
    p.add_argument("--strategy", choices=[s.value for s in Strategy], default=Strategy.UNIFORM_SPLIT.value)
    p.add_argument("--no-tree", action="store_true", help="couple every intra edge, not just a spanning tree")
    p.add_argument("-o", "--output", help="write the result file here")
    p.add_argument("--dump-lp", metavar="DIR", help="write each per-vertex LP in CPLEX LP format")
    p.set_defaults(func=cmd_set_params)

    p = sub.add_parser("verify", parents=[common], help="exhaustive sufficiency check of a result")
    p.add_argument("-r", "--result", required=True)
    p.add_argument("--end-to-end", action="store_true", help="also brute-force both models")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", parents=[common], help="brute-force minimum of a model")
    p.add_argument("-p", "--problem", required=True, help="problem or result file")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("deembed", parents=[common], help="map embedded samples back")
    p.add_argument("-r", "--result", required=True)
    p.add_argument("-s", "--samples", required=True)
    p.add_argument("--majority", action="store_true", help="majority vote on unsynchronized samples")
    p.set_defaults(func=cmd_deembed)

    p = sub.add_parser("compare", parents=[common], help="optimal parameters against the uniform baseline")
    p.add_argument("-p", "--problem", required=True)
    p.add_argument("-e", "--embedding", required=True)
    p.add_argument("--gamma", type=_positive, required=True)
    p.add_argument("--factor", type=_positive, default=2.0)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("distribute", parents=[common], help="solve one weight distribution instance")
    p.add_argument("-i", "--instance", required=True)
    p.add_argument("--family", choices=["default", "tree", "connected", "all"], default="default")
    p.add_argument("--dump-lp", metavar="FILE")
    p.set_defaults(func=cmd_distribute)

    p = sub.add_parser("gen-tree", parents=[common], help="random tree weight distribution instance")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gamma", type=_positive, default=1.0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen_tree)

    p = sub.add_parser("gen-instance", parents=[common], help="random problem and embedding")
    p.add_argument("-n", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p", type=float, default=0.4, help="extra edge probability")
    p.add_argument("--max-hardware", type=int, default=12)
    p.add_argument("-o", "--output", metavar="DIR")
    p.set_defaults(func=cmd_gen_instance)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(getattr(args, "json", False))
    try:
        return args.func(args, out)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return USAGE
    except IsingEmbedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
