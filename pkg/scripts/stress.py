"""Larger run: n=5, k=2, g=2, f=2, mu=5 (beta = 5^5 general, 4^5 systematic)."""
import sys
import time

from lagrange_ppc.analysis import audit_download
from lagrange_ppc.polyspace import default_candidate_set
from lagrange_ppc.recovery import ground_truth, run_pipeline
from lagrange_ppc.rs_lagrange import make_context

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
for scheme in ("general", "systematic"):
    ctx = make_context(5, 2, 2, systematic=scheme == "systematic")
    cs = default_candidate_set(2, 2, 5, ctx.q)
    for v in range(cs.mu):
        t = time.time()
        p, ms, ans, rec = run_pipeline(ctx, cs, v, seed, scheme)
        rep = audit_download(p)
        good = rec.X == ground_truth(cs, ms, v)
        print(f"{scheme:10s} v={v + 1} ({cs[v]}): beta={p.beta} D={rep.simulated_D} "
              f"per-db={sum(p.per_round_counts(0))} rate={float(rep.simulated_rate):.9f} "
              f"exact={good} {time.time() - t:.2f}s")
