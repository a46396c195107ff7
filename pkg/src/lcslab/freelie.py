"""Lyndon-basis free Lie algebra and rank measurements of the map into [A, A].

The degree-d component of the free Lie algebra maps onto the degree-d part
of the d-th lower central series term, so its rank inside a quotient can be
measured two ways: expanding a Lyndon basis and reducing (faithful to the
definition, kept for moderate degrees), or growing the single-letter bracket
chain degree by degree (same subspace, scales to the large-degree runs).
Both routes are exposed and cross-checked.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .freealg import FieldSpec, FreePolynomial, UsageError, commutator
from .lcs import LcsEngine, QuotientContext
from .linalg import Subspace, matmul_mod
from .presented import GradedQuotient
from .series import c_series, witt

__all__ = [
    "LyndonElement",
    "lyndon_words",
    "lyndon_basis",
    "expand_bracket",
    "CrossCheckError",
    "psi_rank",
    "psi_table",
    "twocon_check",
]

LYNDON_EXPAND_CAP = 13  # expansion route materializes normal forms of all words
C_LINALG_CAP = 17  # commutator-span measurement by pairs stays affordable here


class CrossCheckError(RuntimeError):
    """Two independent routes to the same number disagreed."""


def lyndon_words(n: int, d: int) -> list[tuple]:
    """All Lyndon words of length exactly d over [0, n), lexicographic (Duval)."""
    if d < 1:
        raise UsageError("lyndon_words needs d >= 1")
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m == d:
            out.append(tuple(w))
        # extend periodically to full length, then trim
        while len(w) < d:
            w.append(w[len(w) - m])
        while w and w[-1] == n - 1:
            w.pop()
    return out


def _standard_factorization(w: tuple) -> tuple:
    """w = u.v with v the lexicographically least proper suffix; u, v Lyndon."""
    best = 1
    for s in range(2, len(w)):
        if w[s:] < w[best:]:
            best = s
    return w[:best], w[best:]


@dataclass(frozen=True)
class LyndonElement:
    """A Lyndon word with its standard bracketing."""

    word: tuple
    bracketing: object  # letter index, or (left, right) pair of bracketings

    @property
    def degree(self) -> int:
        return len(self.word)


def _bracketing(w: tuple):
    if len(w) == 1:
        return w[0]
    u, v = _standard_factorization(w)
    return (_bracketing(u), _bracketing(v))


def lyndon_basis(n: int, d: int) -> list[LyndonElement]:
    """Standard-bracketed Lyndon basis of the degree-d free Lie component."""
    return [LyndonElement(w, _bracketing(w)) for w in lyndon_words(n, d)]


def expand_bracket(el: LyndonElement, n: int, field: FieldSpec) -> FreePolynomial:
    """Associative expansion of the standard bracketing."""

    def rec(node):
        if isinstance(node, int):
            return FreePolynomial.generator(n, node, field)
        left, right = node
        return commutator(rec(left), rec(right))

    return rec(el.bracketing)


# -- rank of the free-Lie image ------------------------------------------------


def _nf_columns(q: GradedQuotient, d: int) -> np.ndarray:
    """Normal forms of all n^d words as columns (dim(d) x n^d)."""
    n, p = q.n, q.field.p
    N = np.ones((1, 1), dtype=q._dt)
    for k in range(d):
        N = np.hstack([matmul_mod(q.X[k][i], N, p) for i in range(n)])
    return N


def _psi_matrix_lyndon(q: GradedQuotient, d: int) -> np.ndarray:
    """Rows: normal forms of expanded Lyndon basis elements of degree d."""
    n, p = q.n, q.field.p
    if n**d > 1 << 14:
        raise UsageError("Lyndon expansion route is capped; use the chain route")
    N = _nf_columns(q, d)
    basis = lyndon_basis(n, d)
    E = np.zeros((len(basis), n**d), dtype=np.int64)
    for r, el in enumerate(basis):
        poly = expand_bracket(el, n, q.field)
        for w, c in poly.terms.items():
            idx = 0
            for letter in w:
                idx = idx * n + letter
            E[r, idx] = int(c)
    return matmul_mod(E % p, np.ascontiguousarray(N.T), p)


def psi_rank(
    q: GradedQuotient,
    d: int,
    engine: LcsEngine | None = None,
    method: str = "auto",
    c_route: str = "auto",
) -> dict:
    """Rank data of the free-Lie-to-commutator map in degree d.

    method 'lyndon' reduces an expanded Lyndon basis; 'chain' grows the
    bracket chain through the lower central series engine (identical image).
    c_route 'linalg' measures dim [A,A][d] as the span of commutators of
    basis monomials; 'series' uses the closed-form route, available for one
    relation on two generators, and the two are cross-checked when both run.
    """
    if engine is None:
        engine = LcsEngine(QuotientContext(q), d)
    a_d = witt(q.n, d)
    if method == "auto":
        method = "lyndon" if q.n**d <= 1 << 14 and d <= LYNDON_EXPAND_CAP else "chain"
    if method == "lyndon":
        M = _psi_matrix_lyndon(q, d)
        rank = Subspace.span(M, q.dim(d), q.field).rank
    elif method == "chain":
        rank = engine.dim_L(d, d)
    else:
        raise UsageError(f"unknown psi method {method!r}")

    series_available = q.n == 2 and len(q.pres.relations) == 1
    if c_route == "auto":
        # the commutator span measurement is quadratic in the pair count;
        # past the cap the closed-form route takes over where it exists
        c_route = "linalg" if not series_available or d <= C_LINALG_CAP else "series"
    c_from_series = c_series(q.pres.degrees[0], d)[d] if series_available else None
    c_val = engine.dim_L(2, d) if c_route == "linalg" else None
    if c_val is not None and c_from_series is not None and c_val != c_from_series:
        raise CrossCheckError(
            f"commutator dimension mismatch at degree {d}: "
            f"linear algebra {c_val}, series {c_from_series}"
        )
    if c_val is None:
        if c_from_series is None:
            raise UsageError("series c-route needs one relation on two generators")
        c_val = c_from_series
    return {
        "d": d,
        "a": a_d,
        "c": c_val,
        "rank": rank,
        "coker": c_val - rank,
        "method": method,
    }


def psi_table(
    n: int,
    degrees,
    relation_degrees,
    seeds,
    primes,
    D: int | None = None,
    c_route: str = "auto",
    method: str = "chain",
) -> list[dict]:
    """psi_rank rows across a seed x prime grid with a stability verdict.

    A row's numbers are reported from the first run; 'stable' records
    whether every run agreed on (a, c, rank).
    """
    from .presented import presentation_from_degrees

    degrees = list(degrees)
    D = D or max(degrees)
    rows: dict[int, dict] = {}
    stable: dict[int, bool] = {d: True for d in degrees}
    for seed in seeds:
        for p in primes:
            field = FieldSpec.prime(p)
            pres = presentation_from_degrees(n, relation_degrees, seed, field)
            q = GradedQuotient(pres, D, engine="table")
            engine = LcsEngine(QuotientContext(q), D)
            for d in degrees:
                rec = psi_rank(q, d, engine=engine, method=method, c_route=c_route)
                rec["seed"], rec["prime"] = seed, p
                if d not in rows:
                    rows[d] = rec
                else:
                    ref = rows[d]
                    if (ref["a"], ref["c"], ref["rank"]) != (rec["a"], rec["c"], rec["rank"]):
                        stable[d] = False
    out = []
    for d in degrees:
        row = dict(rows[d])
        row["stable"] = stable[d]
        row.pop("seed", None)
        row.pop("prime", None)
        out.append(row)
    return out


def twocon_check(q: GradedQuotient, m: int, engine: LcsEngine | None = None) -> dict:
    """Surjectivity of the free-Lie map in degrees m-1 and m, and what follows.

    Needs the top nonzero degree q_top of B_2 to satisfy m >= q_top + 1.
    When the map is onto in both degrees, every commutator component in
    degree >= m - 1 is spanned by the bracket chain: for each computed
    degree l this is exactly dim [A,A][l] = dim L_l[l], which also forces
    B_s[l] = 0 for 2 <= s <= l - 1 through the chain
    L_l[l] <= L_s[l] <= L_2[l].
    """
    if engine is None:
        engine = LcsEngine(QuotientContext(q), q.D)
    b2 = [engine.dim_L(2, r) - engine.dim_L(3, r) for r in range(min(q.D, 2 * max(q.pres.degrees)) + 1)]
    q_top = max((r for r, v in enumerate(b2) if v), default=0)
    out = {"m": m, "B2_top_degree": q_top}
    if m < q_top + 1 or m > q.D:
        out["applicable"] = False
        return out
    ranks = {}
    surjective = {}
    for dd in (m - 1, m):
        rec = psi_rank(q, dd, engine=engine, c_route="linalg")
        ranks[dd] = rec
        surjective[dd] = rec["coker"] == 0
    out["applicable"] = True
    out["ranks"] = ranks
    out["surjective"] = surjective
    if all(surjective.values()):
        consequences = []
        for ell in range(m + 1, q.D + 1):
            rec = psi_rank(q, ell, engine=engine, c_route="linalg")
            consequences.append(
                {
                    "degree": ell,
                    "commutator_dim": rec["c"],
                    "chain_dim": rec["rank"],
                    "middle_B_vanish": rec["coker"] == 0,
                }
            )
        out["consequences"] = consequences
    return out
