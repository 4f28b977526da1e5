"""The decision procedure: candidates, then reject and accept loops dovetailed
over all candidates, then a verdict with its evidence."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .config import RunConfig
from .errors import ResourceLimitError
from .poincare import AcceptConfig, AcceptState, Certificate, accept_step
from .reject import RejectState, reject_step
from .repfind import Budget, Presentation, Representation, candidate_reps, parse_presentation
from .wordproblem import OracleError, oracle_from_spec

HYPERBOLIC = "hyperbolic"
NOT_HYPERBOLIC = "not_hyperbolic"
INCONCLUSIVE = "inconclusive"
EXIT_CODES = {HYPERBOLIC: 0, NOT_HYPERBOLIC: 1, INCONCLUSIVE: 2}


@dataclass
class Verdict:
    kind: str
    reason: str | None = None
    certificate: Certificate | None = None

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.kind]


@dataclass
class Candidate:
    index: int
    rep: Representation
    reject: RejectState
    accept: AcceptState

    @property
    def live(self) -> bool:
        return not self.reject.rejected and not self.accept.accepted


@dataclass
class PipelineState:
    presentation: Presentation
    oracle: object
    config: RunConfig = field(default_factory=RunConfig)
    candidates: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    complete: bool = True
    enumerated: bool = False
    verdict: Verdict | None = None
    rounds: int = 0
    trace: list = field(default_factory=list)     # (round, candidate, loop, outcome)


def ingest(presentation, oracle_spec="free", config: RunConfig | None = None) -> PipelineState:
    """presentation: text, a path, or a Presentation."""
    if isinstance(presentation, Path) or (isinstance(presentation, str) and "gens:" not in presentation):
        presentation = Path(presentation).read_text()
    if isinstance(presentation, str):
        presentation = parse_presentation(presentation)
    oracle = oracle_spec if hasattr(oracle_spec, "is_trivial") else oracle_from_spec(oracle_spec, presentation.gens)
    return PipelineState(presentation, oracle, config or RunConfig())


def add_candidate(state: PipelineState, rep: Representation, check_reducible: bool = True) -> Candidate:
    b = state.config.budgets
    c = Candidate(len(state.candidates), rep,
                  RejectState(rep, state.presentation.gens, check_reducible=check_reducible),
                  AcceptState(rep, state.presentation, AcceptConfig(b.eps, b.membership_budget)))
    state.candidates.append(c)
    return c


def enumerate_candidates(state: PipelineState) -> PipelineState:
    b = state.config.budgets
    try:
        cl = candidate_reps(state.presentation, Budget(b.groebner_steps, b.grid_cap))
    except ResourceLimitError as e:
        state.verdict = Verdict(INCONCLUSIVE, f"budget: {e.what}")
        state.enumerated = True
        return state
    state.warnings = list(cl.warnings)
    state.complete = cl.complete
    for rep in cl.reps:
        add_candidate(state, rep)
    state.enumerated = True
    return state


def _finish_if_all_rejected(state: PipelineState) -> bool:
    if any(c.live for c in state.candidates):
        return False
    if state.complete:
        state.verdict = Verdict(NOT_HYPERBOLIC)
    else:
        state.verdict = Verdict(INCONCLUSIVE, "candidate_incompleteness")
    return True


def run(state: PipelineState, max_rounds: int | None = None) -> PipelineState:
    """Round-robin over live candidates; each gets one reject step and one
    accept step per round."""
    if state.verdict is not None:
        return state
    if not state.enumerated:
        enumerate_candidates(state)
        if state.verdict is not None:
            return state
    b = state.config.budgets
    limit = b.max_rounds if max_rounds is None else max_rounds
    try:
        while True:
            if _finish_if_all_rejected(state):
                return state
            if state.rounds >= limit:
                state.verdict = Verdict(INCONCLUSIVE, "budget: rounds")
                return state
            state.rounds += 1
            for c in state.candidates:
                if not c.live:
                    continue
                reject_step(c.reject, state.oracle, b.reject_batch)
                state.trace.append((state.rounds, c.index, "reject",
                                    c.reject.verdict.reason if c.reject.rejected else "continue"))
                if c.reject.rejected:
                    continue
                accept_step(c.accept, state.oracle, b.accept_batch)
                state.trace.append((state.rounds, c.index, "accept", c.accept.outcome))
                if c.accept.accepted:
                    state.verdict = Verdict(HYPERBOLIC, certificate=c.accept.certificate)
                    return state
    except OracleError as e:
        state.verdict = Verdict(INCONCLUSIVE, f"oracle_error: {e}")
        return state
    except ResourceLimitError as e:
        state.verdict = Verdict(INCONCLUSIVE, f"budget: {e.what}")
        return state


def report(state: PipelineState) -> str:
    v = state.verdict
    gens = state.presentation.gens
    lines = [f"verdict: {v.kind if v else 'undecided'}"]
    if v and v.reason:
        lines.append(f"reason: {v.reason}")
    if state.config.assume_irreducible:
        lines.append("note: the verdict is conditional on the manifold being irreducible, "
                     "as asserted by the caller")
    else:
        lines.append("note: irreducibility was not asserted; a hyperbolic verdict still holds "
                     "for the certified representation, other verdicts are unsupported")
    lines.append(f"presentation: {len(gens)} generators, {len(state.presentation.relators)} relators")
    lines.append(f"candidate list complete: {'yes' if state.complete else 'no'}")
    for w in state.warnings:
        lines.append(f"warning [{w.code}]: {w.message}")
    lines.append(f"candidates: {len(state.candidates)}, rounds: {state.rounds}")
    for c in state.candidates:
        if c.reject.rejected:
            r = c.reject.verdict
            lines.append(f"  candidate {c.index}: rejected ({r.reason}) {json.dumps(r.witness, sort_keys=True)}")
        elif c.accept.accepted:
            lines.append(f"  candidate {c.index}: accepted")
        else:
            lines.append(f"  candidate {c.index}: undecided (last accept stage: {c.accept.status})")
    return "\n".join(lines) + "\n"


def emit(state: PipelineState, out_dir) -> dict:
    """Write report.txt, verdict.json, and for a hyperbolic verdict also
    certificate.json and polyhedron.off."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {}
    v = state.verdict
    summary = {"verdict": v.kind, "reason": v.reason, "complete": state.complete,
               "rejections": [c.reject.verdict.to_json() if c.reject.rejected else None
                              for c in state.candidates]}
    paths["verdict"] = out / "verdict.json"
    paths["verdict"].write_text(json.dumps(summary, sort_keys=True, indent=1) + "\n")
    paths["report"] = out / "report.txt"
    paths["report"].write_text(report(state))
    if v.kind == HYPERBOLIC:
        paths["certificate"] = out / "certificate.json"
        paths["certificate"].write_text(v.certificate.dumps())
        paths["off"] = out / "polyhedron.off"
        paths["off"].write_text(v.certificate.complex.to_off())
    return paths


def decide(presentation, oracle_spec="free", config: RunConfig | None = None) -> PipelineState:
    return run(ingest(presentation, oracle_spec, config))
