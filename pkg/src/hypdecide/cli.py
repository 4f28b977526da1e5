"""Command line: hypdecide {candidates,decide,verify,reject,accept}.

Exit codes: 0 hyperbolic (or: certificate valid, representation accepted),
1 not hyperbolic (or: certificate invalid, representation rejected),
2 inconclusive.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import RunConfig
from .errors import DomainError
from .orchestrator import EXIT_CODES, add_candidate, emit, ingest, report, run
from .poincare import AcceptConfig, AcceptState, Certificate, accept_step
from .reject import RejectState, reject_step
from .repfind import Budget, ParseError, Representation, candidate_reps, parse_presentation


def _config(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if getattr(args, "config", None) else RunConfig()
    b = cfg.budgets
    for name in ("groebner_steps", "max_rounds", "reject_batch", "accept_batch", "membership_budget"):
        v = getattr(args, name, None)
        if v is not None:
            setattr(b, name, v)
    if getattr(args, "no_irreducible", False):
        cfg.assume_irreducible = False
    return cfg


def _load_rep(args):
    """(Presentation, Representation) from --fixture or PRESENTATION + --rep."""
    if args.fixture:
        from .fixtures import load_fixture
        return load_fixture(args.fixture)
    if not args.presentation or not args.rep:
        raise SystemExit("need a presentation file and --rep, or --fixture")
    pres = parse_presentation(Path(args.presentation).read_text())
    d = json.loads(Path(args.rep).read_text())
    from .algnum import field_from_json
    fields = [field_from_json(f) for f in d.get("fields", [])]
    if "candidates" in d:
        rep = Representation.from_json(d["candidates"][args.index], fields)
    else:
        rep = Representation.from_json(d, fields)
    return pres, rep


def cmd_candidates(args) -> int:
    pres = parse_presentation(Path(args.presentation).read_text())
    cfg = _config(args)
    cl = candidate_reps(pres, Budget(cfg.budgets.groebner_steps, cfg.budgets.grid_cap))
    fields = []
    reps = [r.to_json(fields) for r in cl.reps]
    from .algnum import field_to_json
    doc = {"complete": cl.complete,
           "warnings": [{"code": w.code, "message": w.message} for w in cl.warnings],
           "pairs": {f"{k},{l}": v for (k, l), v in sorted(cl.pairs.items())},
           "candidates": reps,
           "fields": [field_to_json(F) for F in fields]}
    text = json.dumps(doc, sort_keys=True, indent=1) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    print(f"{len(cl.reps)} candidates; complete: {cl.complete}")
    for w in cl.warnings:
        print(f"warning [{w.code}]: {w.message}")
    return 0


def cmd_decide(args) -> int:
    cfg = _config(args)
    if args.fixture:
        pres, rep = _load_rep(args)
        state = ingest(pres, args.oracle, cfg)
        state.enumerated = True
        add_candidate(state, rep)
    else:
        state = ingest(Path(args.presentation).read_text(), args.oracle, cfg)
    run(state)
    if args.out_dir:
        emit(state, args.out_dir)
    sys.stdout.write(report(state))
    return state.verdict.exit_code


def cmd_verify(args) -> int:
    cert = Certificate.loads(Path(args.certificate).read_text())
    oracle = None
    if args.oracle:
        from .wordproblem import oracle_from_spec
        oracle = oracle_from_spec(args.oracle, cert.presentation.gens)
    v = cert.verify(oracle)
    print("certificate valid" if v.ok else f"certificate invalid: {v.message}")
    return 0 if v.ok else 1


def cmd_reject(args) -> int:
    pres, rep = _load_rep(args)
    from .wordproblem import oracle_from_spec
    oracle = oracle_from_spec(args.oracle, pres.gens)
    st = RejectState(rep, pres.gens, check_reducible=not args.skip_reducible)
    for _ in range(args.steps):
        reject_step(st, oracle, args.batch)
        if st.rejected:
            print(f"rejected after {st.steps} steps: {st.verdict.reason} "
                  f"{json.dumps(st.verdict.witness, sort_keys=True)}")
            return 1
    print(f"no rejection after {st.steps} steps ({len(st.words)} words)")
    return 2


def cmd_accept(args) -> int:
    pres, rep = _load_rep(args)
    cfg = _config(args)
    from .wordproblem import oracle_from_spec
    oracle = oracle_from_spec(args.oracle, pres.gens)
    st = AcceptState(rep, pres, AcceptConfig(cfg.budgets.eps, cfg.budgets.membership_budget))
    for _ in range(args.steps):
        accept_step(st, oracle, args.batch)
        if st.accepted:
            print(f"accepted after {st.steps} steps")
            if args.out_dir:
                out = Path(args.out_dir)
                out.mkdir(parents=True, exist_ok=True)
                (out / "certificate.json").write_text(st.certificate.dumps())
                (out / "polyhedron.off").write_text(st.certificate.complex.to_off())
            return 0
    print(f"continue after {st.steps} steps (last stage: {st.status})")
    return 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hypdecide", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    def budgets(q):
        q.add_argument("--config", help="JSON file with budget overrides")
        q.add_argument("--groebner-steps", dest="groebner_steps", type=int)
        q.add_argument("--max-rounds", dest="max_rounds", type=int)
        q.add_argument("--reject-batch", dest="reject_batch", type=int)
        q.add_argument("--accept-batch", dest="accept_batch", type=int)
        q.add_argument("--membership-budget", dest="membership_budget", type=int)

    def rep_source(q):
        q.add_argument("presentation", nargs="?")
        q.add_argument("--rep", help="representation JSON (or a candidates file with --index)")
        q.add_argument("--index", type=int, default=0)
        q.add_argument("--fixture", help="bundled fixture, e.g. seifert_weber")
        q.add_argument("--oracle", default="free",
                       help='"free", "abelian", "exec:<command>", "linear:<fixture>", or a JSON oracle file')

    q = sub.add_parser("candidates", help="list rigid candidate representations")
    q.add_argument("presentation")
    q.add_argument("--out")
    budgets(q)
    q.set_defaults(func=cmd_candidates)

    q = sub.add_parser("decide", help="run the full decision procedure")
    q.add_argument("presentation", nargs="?")
    q.add_argument("--fixture", help="use a bundled fixture's representation as the only candidate")
    q.add_argument("--oracle", default="free")
    q.add_argument("--out-dir")
    q.add_argument("--no-irreducible", action="store_true",
                   help="do not assert irreducibility of the manifold")
    budgets(q)
    q.set_defaults(func=cmd_decide, rep=None, index=0)

    q = sub.add_parser("verify", help="re-check a certificate from scratch")
    q.add_argument("certificate")
    q.add_argument("--oracle", help="override the oracle recorded in the certificate")
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("reject", help="run the rejection loop on one representation")
    rep_source(q)
    q.add_argument("--steps", type=int, default=100)
    q.add_argument("--batch", type=int, default=16)
    q.add_argument("--skip-reducible", action="store_true")
    q.set_defaults(func=cmd_reject)

    q = sub.add_parser("accept", help="run the accept loop on one representation")
    rep_source(q)
    q.add_argument("--steps", type=int, default=100)
    q.add_argument("--batch", type=int, default=16)
    q.add_argument("--out-dir")
    budgets(q)
    q.set_defaults(func=cmd_accept)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.cmd == "decide" and not args.presentation and not args.fixture:
        print("decide needs a presentation file or --fixture", file=sys.stderr)
        return EXIT_CODES["inconclusive"]
    try:
        return args.func(args)
    except (ParseError, DomainError, ValueError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CODES["inconclusive"]


if __name__ == "__main__":
    sys.exit(main())
