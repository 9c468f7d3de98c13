"""Achievable rate matrices (general and systematic) and interference matrices.

Rows index blocks, columns index databases; both 0-based internally.
"""
from __future__ import annotations

from dataclasses import dataclass

from .rs_lagrange import CodingContext, ConfigError, is_information_set


@dataclass(frozen=True)
class RateMatrix:
    rows: tuple          # nu tuples of n bits
    kappa: int
    variant: str = "general"   # or "systematic"; systematic top rows come first

    @property
    def nu(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])

    def support(self, u: int) -> tuple:
        return tuple(j for j, b in enumerate(self.rows[u]) if b)

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def grid(self) -> str:
        return "\n".join(" ".join(str(b) for b in r) for r in self.rows)

    @classmethod
    def from_lists(cls, rows, kappa=None, variant="general") -> "RateMatrix":
        rows = tuple(tuple(int(b) for b in r) for r in rows)
        if kappa is None:
            kappa = sum(r[0] for r in rows)
        return cls(rows, kappa, variant)


@dataclass(frozen=True)
class InterferenceMatrices:
    A: tuple   # kappa x n, 0-based block indices, ascending down each column
    B: tuple   # (nu - kappa) x n

    def column_A(self, j: int) -> tuple:
        return tuple(r[j] for r in self.A)

    def column_B(self, j: int) -> tuple:
        return tuple(r[j] for r in self.B)


def _require(ctx: CodingContext):
    if ctx.g * (ctx.k - 1) + 1 > ctx.n:
        raise ConfigError("g(k-1)+1 must not exceed n")


def build_general(ctx: CodingContext) -> RateMatrix:
    """Cyclic witness: row u covers databases u, u+1, ..., u+k~-1 (mod n)."""
    _require(ctx)
    n, kt = ctx.n, ctx.k_tilde
    rows = []
    for u in range(n):
        sup = {(u + s) % n for s in range(kt)}
        rows.append(tuple(1 if j in sup else 0 for j in range(n)))
    return RateMatrix(tuple(rows), kt, "general")


def systematic_nu(n: int, k: int, k_tilde: int) -> int:
    return k + min(k, n - k_tilde)


def build_systematic(ctx: CodingContext) -> RateMatrix:
    """Top k rows: all parity coordinates plus k-r systematic ones, cyclically;
    bottom r = min(k, n-k~) rows: exactly the systematic coordinates."""
    _require(ctx)
    n, k, kt = ctx.n, ctx.k, ctx.k_tilde
    r = min(k, n - kt)
    rows = []
    for i in range(k):
        sup = set(range(k, n)) | {(i + s) % k for s in range(k - r)}
        rows.append(tuple(1 if j in sup else 0 for j in range(n)))
    for _ in range(r):
        rows.append(tuple(1 if j < k else 0 for j in range(n)))
    return RateMatrix(tuple(rows), k, "systematic")


def interference(lam: RateMatrix) -> InterferenceMatrices:
    n = lam.n
    a_cols, b_cols = [], []
    for j in range(n):
        col = lam.column(j)
        a_cols.append([u for u, b in enumerate(col) if b])
        b_cols.append([u for u, b in enumerate(col) if not b])
    if any(len(c) != lam.kappa for c in a_cols):
        raise ValueError("rate matrix is not column regular")
    A = tuple(tuple(a_cols[j][i] for j in range(n)) for i in range(lam.kappa))
    B = tuple(tuple(b_cols[j][i] for j in range(n)) for i in range(lam.nu - lam.kappa))
    return InterferenceMatrices(A, B)


def from_interference(im: InterferenceMatrices, n: int) -> RateMatrix:
    entries = [u for r in im.A + im.B for u in r]
    nu = max(entries) + 1
    rows = [[0] * n for _ in range(nu)]
    for r in im.A:
        for j, u in enumerate(r):
            rows[u][j] = 1
    return RateMatrix.from_lists(rows, kappa=len(im.A))


def validate(lam: RateMatrix, ctx: CodingContext) -> list[str]:
    """Violations of the variant's definition; empty when valid."""
    out = []
    if lam.n != ctx.n:
        return [f"matrix has {lam.n} columns, code length is {ctx.n}"]
    for j in range(lam.n):
        w = sum(lam.column(j))
        if w != lam.kappa:
            out.append(f"column {j + 1} has weight {w}, expected {lam.kappa}")
    kt = ctx.k_tilde
    if lam.variant == "general":
        for u in range(lam.nu):
            if not is_information_set(ctx, kt, lam.support(u)):
                out.append(f"row {u + 1} support is not an information set")
    elif lam.variant == "systematic":
        if lam.nu < lam.kappa:
            out.append("fewer rows than kappa")
        sys_support = tuple(range(ctx.k))
        for u in range(min(lam.kappa, lam.nu)):
            if not is_information_set(ctx, kt, lam.support(u)):
                out.append(f"top row {u + 1} support contains no information set")
        for u in range(lam.kappa, lam.nu):
            if lam.support(u) != sys_support:
                out.append(f"bottom row {u + 1} support is not the systematic set")
    else:
        out.append(f"unknown variant {lam.variant!r}")
    return out
