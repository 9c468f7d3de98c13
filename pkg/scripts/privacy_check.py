"""Run the privacy auditor on the small setting and on two leaky mutants."""
import argparse

from lagrange_ppc.analysis import audit_privacy, desired_plus_mutant, extra_desired_mutant
from lagrange_ppc.polyspace import default_candidate_set
from lagrange_ppc.query_engine import plan
from lagrange_ppc.rs_lagrange import make_context

ap = argparse.ArgumentParser()
ap.add_argument("--seeds", type=int, default=1000)
args = ap.parse_args()

ctx = make_context(4, 2, 2)
cs = default_candidate_set(2, 2, 3, ctx.q)
base = lambda c, s, v, seed: plan(c, s, v, seed)  # noqa: E731
for name, b in [("honest", base),
                ("extra desired 1-sum", extra_desired_mutant(base)),
                ("desired term always +1", desired_plus_mutant(base))]:
    r = audit_privacy(ctx, cs, args.seeds, builder=b)
    pv = ", ".join(f"{p:.3g}" for p in r.p_values.values())
    print(f"{name:24s} structural={r.structural_ok} distributional={r.distributional_ok} p=[{pv}]")
