"""In-process databases holding RS-coded message columns."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .polyspace import CandidateSet, compile_candidate
from .rs_lagrange import CodingContext, _generator_cached


@dataclass(frozen=True)
class MessageStore:
    """f messages, each beta x k, entries are int residues."""
    messages: tuple
    q: int

    @property
    def f(self) -> int:
        return len(self.messages)

    @property
    def beta(self) -> int:
        return len(self.messages[0])

    @property
    def k(self) -> int:
        return len(self.messages[0][0])

    def __post_init__(self):
        shapes = {(len(W), len(W[0]) if W else 0) for W in self.messages}
        if len(shapes) != 1:
            raise ValueError("messages must share dimensions")
        if any(len(r) != self.k for W in self.messages for r in W):
            raise ValueError("ragged message rows")

    @classmethod
    def random(cls, f: int, beta: int, k: int, q: int, seed: int = 0) -> "MessageStore":
        rng = random.Random(f"{seed}:messages")
        msgs = tuple(tuple(tuple(rng.randrange(q) for _ in range(k)) for _ in range(beta))
                     for _ in range(f))
        return cls(msgs, q)

    @classmethod
    def zeros(cls, f: int, beta: int, k: int, q: int) -> "MessageStore":
        row = (0,) * k
        return cls(tuple((row,) * beta for _ in range(f)), q)

    def point(self, t: int, i: int) -> tuple:
        """(W^(1)_{t,i}, ..., W^(f)_{t,i})."""
        return tuple(W[t][i] for W in self.messages)


@dataclass(frozen=True)
class DatabaseNode:
    j: int
    columns: tuple    # columns[t] = (C^(1)_{t,j}, ..., C^(f)_{t,j})

    @property
    def beta(self) -> int:
        return len(self.columns)


def encode_store(ctx: CodingContext, ms: MessageStore) -> list[DatabaseNode]:
    if ms.k != ctx.k:
        raise ValueError(f"messages have {ms.k} columns, code dimension is {ctx.k}")
    if ms.q != ctx.q:
        raise ValueError("message store and code use different fields")
    G = _generator_cached(ctx)
    q, k, n = ctx.q, ctx.k, ctx.n
    cols = [[None] * ms.beta for _ in range(n)]
    for t in range(ms.beta):
        coded = []
        for W in ms.messages:
            w = W[t]
            coded.append([sum(w[i] * G[i][j] for i in range(k)) % q for j in range(n)])
        for j in range(n):
            cols[j][t] = tuple(c[j] for c in coded)
    return [DatabaseNode(j, tuple(cols[j])) for j in range(n)]


def answer(node: DatabaseNode, cs: CandidateSet, queries: Sequence) -> list[int]:
    """One field element per query: sum of sign * phi_cand(column at row)."""
    fns = [compile_candidate(c) for c in cs.candidates]
    q = cs.q
    out = []
    cols = node.columns
    for s in queries:
        acc = 0
        for t in s.terms:
            if not 0 <= t.candidate < len(fns):
                raise IndexError(f"candidate {t.candidate + 1} out of range")
            if not 0 <= t.row < len(cols):
                raise IndexError(f"row {t.row + 1} out of range")
            acc += t.sign * fns[t.candidate](cols[t.row])
        out.append(acc % q)
    return out


def answer_all(nodes: Sequence[DatabaseNode], cs: CandidateSet, plan) -> list[list[int]]:
    return [answer(node, cs, plan.queries[node.j]) for node in nodes]
