"""Small tour of the decision procedure on three groups.

  trivial group   <g | g>            -> not hyperbolic
  Z^2             <a, b | [a, b]>    -> inconclusive (candidate list incomplete)
  Seifert-Weber   bundled fixture    -> hyperbolic, with a certificate

Usage: python scripts/demo.py [output directory]
"""
import sys
import time

from hypdecide.config import RunConfig
from hypdecide.fixtures import load_fixture
from hypdecide.orchestrator import add_candidate, decide, emit, ingest, report, run


def show(title, state):
    print(f"== {title}")
    print(report(state))


def main(out_dir=None):
    t = time.perf_counter()
    show("trivial group", decide("gens: g\nrel: g\n"))
    show("Z^2", decide("gens: a b\nrel: a b A B\n", "abelian"))

    pres, rep = load_fixture("seifert_weber")
    state = ingest(pres, "linear:seifert_weber", RunConfig.from_dict({"accept_batch": 12}))
    # the presentation is too large for the candidate search, so the known
    # representation is handed in directly
    state.enumerated = True
    add_candidate(state, rep)
    run(state)
    show("Seifert-Weber dodecahedral space", state)
    if out_dir:
        paths = emit(state, out_dir)
        for name, p in sorted(paths.items()):
            print(f"wrote {name}: {p}")
    print(f"total {time.perf_counter() - t:.1f}s")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else None)
