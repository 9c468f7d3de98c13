"""Decoding the desired candidate table from database answers."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .polyspace import compile_candidate
from .query_engine import QueryPlan, plan as make_plan
from .rs_lagrange import eval_through
from .storage_sim import MessageStore, answer_all, encode_store


class DecodeError(RuntimeError):
    pass


@dataclass(frozen=True)
class RecoveredFunction:
    X: tuple   # beta rows of k values

    def __getitem__(self, t):
        return self.X[t]


def _answer_map(plan: QueryPlan, answers) -> dict:
    if len(answers) != plan.ctx.n:
        raise DecodeError(f"expected answers from {plan.ctx.n} databases, got {len(answers)}")
    out = {}
    for j, (qs, ans) in enumerate(zip(plan.queries, answers)):
        if len(ans) != len(qs):
            raise DecodeError(f"DB{j + 1}: {len(ans)} answers for {len(qs)} queries")
        for s, a in zip(qs, ans):
            out[s.sid] = a % plan.ctx.q
    return out


def offline_reconstruct(plan: QueryPlan, answers) -> dict:
    """Values (by sum id) of every sum the user computes instead of downloading.

    Round-1 sums of dependent candidates come from the projections' values on
    the same coded column; dropped higher-round types come from the fixed
    linear relation with the retained sums of their group at that database.
    """
    q, f = plan.ctx.q, plan.f
    ans = answers if isinstance(answers, dict) else _answer_map(plan, answers)
    fns = [compile_candidate(c) for c in plan.cs.candidates]
    out = {}
    for j, qs in enumerate(plan.offline):
        for s in qs:
            g = plan.groups[s.group]
            if s.round == 1:
                point = []
                for m in range(f):
                    p = g.sums[(j, (m,))]
                    point.append(ans[p.sid] * p.terms[0].sign % q)
                out[s.sid] = s.terms[0].sign * fns[s.type[0]](point) % q
            else:
                expr = plan.redundancy.get(s.type)
                if expr is None:
                    raise DecodeError(f"no relation for dropped type {s.type}")
                acc = 0
                for T, c in expr.items():
                    r = g.sums.get((j, T))
                    if r is None or r.sid not in ans:
                        raise DecodeError(f"relation for {s.type} needs missing type {T} at DB{j + 1}")
                    acc += c * ans[r.sid]
                out[s.sid] = acc % q
    return out


class _Unit:
    """An interference sum of one group, known at the group's databases."""
    __slots__ = ("canon", "known", "xs", "ys")

    def __init__(self, canon):
        self.canon = canon      # candidate -> (row, sign)
        self.known = {}         # db -> value in canonical sign convention
        self.xs = self.ys = None


def _ratio(terms, canon, q, what):
    c = None
    for t in terms:
        row, sign = canon.get(t.candidate, (None, None))
        if row != t.row:
            raise DecodeError(f"{what}: term {t.candidate + 1}:{t.row + 1} not in unit")
        r = t.sign * sign   # signs are +-1
        if c is None:
            c = r
        elif r != c:
            raise DecodeError(f"{what}: inconsistent signs against unit")
    if c is None or len(terms) != len(canon):
        raise DecodeError(f"{what}: term count differs from unit")
    return c


def decode(plan: QueryPlan, answers) -> RecoveredFunction:
    ctx = plan.ctx
    q, kt, v = ctx.q, ctx.k_tilde, plan.v
    alpha = ctx.alpha
    vals = _answer_map(plan, answers)
    vals.update(offline_reconstruct(plan, vals))
    units: dict = {}
    X = [None] * plan.beta

    def unit_at(u: _Unit, x):
        if u.xs is None:
            return None
        return eval_through(u.xs, u.ys, x, q)

    for g in plan.groups:
        tau = g.round
        # interference units of this group
        for T in combinations([m for m in range(plan.mu) if m != v], tau):
            s0 = g.sums[(g.dbs[0], T)]
            u = _Unit({t.candidate: (t.row, t.sign) for t in s0.terms})
            for j in g.dbs:
                s = g.sums[(j, T)]
                u.known[j] = vals[s.sid] * _ratio(s.terms, u.canon, q, f"unit {T} group {g.gid}") % q
            if len(u.known) >= kt:
                pts = list(u.known.items())
                u.xs = tuple(alpha[j] for j, _ in pts[:kt])
                u.ys = tuple(y for _, y in pts[:kt])
                for j, y in pts[kt:]:
                    if eval_through(u.xs, u.ys, alpha[j], q) != y:
                        raise DecodeError(
                            f"unit {tuple(m + 1 for m in T)} of group {g.gid} is not a "
                            f"codeword of the decoding code (DB{j + 1})")
            units[(g.gid, T)] = u

        # desired rows of this group
        for S, row in g.rows.items():
            T = tuple(sorted(S | {v}))
            clean, pending, punit, pc = {}, {}, None, None
            for j in g.dbs:
                s = g.sums[(j, T)]
                cv = s.coefficient(v)
                y = vals[s.sid] * cv % q
                if tau == 1:
                    clean[j] = y
                    continue
                side = [t for t in s.terms if t.candidate != v]
                base = tuple(m for m in T if m != v)
                u = units[(g.side[j], base)]
                c = cv * _ratio(side, u.canon, q, f"desired row {row + 1} at DB{j + 1}")
                if j in u.known:
                    uv = u.known[j]
                else:
                    uv = unit_at(u, alpha[j])
                if uv is not None:
                    clean[j] = (y - c * uv) % q
                else:
                    if punit is None:
                        punit, pc = u, c
                    elif punit is not u or pc != c:
                        raise DecodeError(f"desired row {row + 1}: mixed undecodable interference")
                    pending[j] = y
            X[row] = _finish_row(ctx, row, clean, pending, punit, pc)
    if any(r is None for r in X):
        raise DecodeError("some desired rows were never covered")
    return RecoveredFunction(tuple(X))


def _finish_row(ctx, row, clean, pending, punit, pc):
    q, kt, alpha, gamma = ctx.q, ctx.k_tilde, ctx.alpha, ctx.gamma
    if not pending:
        pts = clean
        shift = None
    else:
        # P = psi + pc * U is a codeword; clean points are shifted onto P
        pts = dict(pending)
        for j, y in clean.items():
            uv = punit.known.get(j)
            if uv is None:
                raise DecodeError(f"desired row {row + 1}: interference unknown at DB{j + 1}")
            pts[j] = (y + pc * uv) % q
        shift = punit
    if len(pts) < kt:
        # direct reads at systematic positions (bottom blocks)
        if shift is None and ctx.systematic and all(g in {alpha[j] for j in pts} for g in gamma):
            where = {alpha[j]: y for j, y in pts.items()}
            return tuple(where[g] for g in gamma)
        raise DecodeError(f"desired row {row + 1}: only {len(pts)} evaluations, need {kt}")
    items = sorted(pts.items())
    xs = tuple(alpha[j] for j, _ in items[:kt])
    ys = tuple(y for _, y in items[:kt])
    for j, y in items[kt:]:
        if eval_through(xs, ys, alpha[j], q) != y:
            raise DecodeError(f"desired row {row + 1}: evaluations exceed degree {kt - 1} (DB{j + 1})")
    out = []
    for gm in gamma:
        val = eval_through(xs, ys, gm, q)
        if shift is not None:
            js = [j for j in shift.known if alpha[j] == gm]
            if not js:
                raise DecodeError(f"desired row {row + 1}: interference unknown at {gm}")
            val = (val - pc * shift.known[js[0]]) % q
        out.append(val)
    return tuple(out)


def ground_truth(cs, ms: MessageStore, v: int) -> tuple:
    fn = compile_candidate(cs.candidates[v])
    return tuple(tuple(fn(ms.point(t, i)) for i in range(ms.k)) for t in range(ms.beta))


def run_pipeline(ctx, cs, v, seed=0, scheme=None, rate_matrix=None):
    """encode -> plan -> answer -> decode; returns (plan, store, answers, recovered)."""
    p = make_plan(ctx, cs, v, seed, scheme, rate_matrix)
    ms = MessageStore.random(cs.f, p.beta, ctx.k, ctx.q, seed)
    nodes = encode_store(ctx, ms)
    ans = answer_all(nodes, cs, p)
    return p, ms, ans, decode(p, ans)


def verify_recovery(ctx, cs, v, seed=0, scheme=None) -> bool:
    try:
        _, ms, _, rec = run_pipeline(ctx, cs, v, seed, scheme)
    except DecodeError:
        return False
    return rec.X == ground_truth(cs, ms, v)
