"""Lower central series engine.

Per-degree subspaces L_i (iterated commutator spans) and M_i = A * L_i are
built over one of two contexts:

* FreeContext: the free algebra, with components optionally refined into
  multidegree cells (all linear algebra goes block-diagonal there; valid
  because brackets and products of multihomogeneous vectors stay
  multihomogeneous).  Words multiply by index arithmetic, no tables.
* QuotientContext: a finitely presented algebra through its multiplication
  tables; products against basis words are chains of table applications,
  shared across words through suffix (left) and prefix (right) tries.

Spanning sets follow the defining recursion L_{i+1} = [A, L_i] with loops
ordered by (split degree, word index, basis row); results are canonical
row-reduced bases, so dimensions and subspace comparisons are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .freealg import (
    FieldSpec,
    FreePolynomial,
    UsageError,
    left_normed_bracket,
    word_to_index,
)
from .linalg import Subspace, matmul_mod
from .presented import GradedQuotient, TruncationError

__all__ = [
    "FreeContext",
    "QuotientContext",
    "LcsEngine",
    "FiltrationTable",
    "filtration_table",
    "check_product_inclusion",
    "check_m2_power",
    "check_b_generation",
    "check_fs3",
    "check_polylinear_identities",
    "check_m_right_stability",
    "vanishing_report",
]

IDENTITY = "identity-rows"


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


class FreeContext:
    """Free algebra component store with optional multidegree refinement."""

    def __init__(self, n: int, field: FieldSpec, blocked: bool = True):
        self.n = n
        self.field = field
        self.blocked = blocked
        self._cells_by_degree: dict[int, dict] = {}

    def degree_of(self, cell) -> int:
        return sum(cell) if self.blocked else cell

    def dim_of_degree(self, d: int) -> int:
        return self.n**d

    def cells_of_degree(self, d: int) -> list:
        if not self.blocked:
            return [d]
        return sorted(self._cell_table(d))

    def _cell_table(self, d: int) -> dict:
        if d not in self._cells_by_degree:
            idx = np.arange(self.n**d, dtype=np.int64)
            counts = np.zeros((self.n**d, self.n), dtype=np.int16)
            tmp = idx.copy()
            for _ in range(d):
                tmp, r = np.divmod(tmp, self.n)
                for j in range(self.n):
                    counts[:, j] += r == j
            table: dict[tuple, list] = {}
            order = np.lexsort(counts.T[::-1])
            sorted_counts = counts[order]
            sorted_idx = idx[order]
            start = 0
            while start < len(order):
                md = tuple(int(v) for v in sorted_counts[start])
                end = start
                while end < len(order) and tuple(int(v) for v in sorted_counts[end]) == md:
                    end += 1
                table[md] = np.sort(sorted_idx[start:end])
                start = end
            self._cells_by_degree[d] = table
        return self._cells_by_degree[d]

    def cell_indices(self, cell) -> np.ndarray:
        if not self.blocked:
            return np.arange(self.n**cell, dtype=np.int64)
        return self._cell_table(sum(cell))[cell]

    def cell_dim(self, cell) -> int:
        return len(self.cell_indices(cell))

    def cell_add(self, c1, c2):
        if not self.blocked:
            return c1 + c2
        return tuple(a + b for a, b in zip(c1, c2))

    def subsplits(self, cell, e: int) -> list:
        """(u-cell, v-cell) pairs with deg u-cell = e composing to cell."""
        if not self.blocked:
            return [(e, cell - e)]
        out = []
        for bu in _compositions(e, self.n):
            if all(a <= b for a, b in zip(bu, cell)):
                out.append((bu, tuple(b - a for a, b in zip(bu, cell))))
        return out

    # -- vector production ---------------------------------------------------

    def _rows_of(self, rows, cell):
        if isinstance(rows, str) and rows == IDENTITY:
            dim = self.cell_dim(cell)
            if self.field.is_exact:
                return [{k: 1} for k in range(dim)]
            return np.eye(dim, dtype=np.int64)
        return rows

    def _positions(self, target_cell, global_idx: np.ndarray) -> np.ndarray:
        tgt = self.cell_indices(target_cell)
        pos = np.searchsorted(tgt, global_idx)
        return pos

    def iter_bracket_blocks(self, ucell, rows, vcell, triangular: bool = False):
        """Yield row blocks spanning [word, row] over words of ucell, rows over vcell."""
        e = self.degree_of(ucell)
        f = self.degree_of(vcell)
        tcell = self.cell_add(ucell, vcell)
        R = self._rows_of(rows, vcell)
        v_idx = self.cell_indices(vcell)
        dimT = self.cell_dim(tcell)
        for k_u, u in enumerate(self.cell_indices(ucell)):
            lpos = self._positions(tcell, u * self.n**f + v_idx)
            rpos = self._positions(tcell, v_idx * self.n**e + int(u))
            if self.field.is_exact:
                block = []
                for j, row in enumerate(R):
                    if triangular and j <= k_u:
                        continue
                    vec: dict = {}
                    for c, val in row.items():
                        vec[int(lpos[c])] = vec.get(int(lpos[c]), 0) + val
                        vec[int(rpos[c])] = vec.get(int(rpos[c]), 0) - val
                    block.append(vec)
                if block:
                    yield block
            else:
                Rm = R[k_u + 1 :] if triangular else R
                B = np.zeros((Rm.shape[0], dimT), dtype=np.int64)
                B[:, lpos] = Rm
                B[:, rpos] = B[:, rpos] - Rm
                if B.size:
                    yield B % self.field.p

    def iter_product_blocks(self, ucell, rows, vcell, side: str = "left"):
        """Row blocks spanning word * row (side 'left') or row * word ('right')."""
        e = self.degree_of(ucell)
        f = self.degree_of(vcell)
        tcell = self.cell_add(ucell, vcell)
        R = self._rows_of(rows, vcell)
        v_idx = self.cell_indices(vcell)
        dimT = self.cell_dim(tcell)
        for u in self.cell_indices(ucell):
            if side == "left":
                pos = self._positions(tcell, u * self.n**f + v_idx)
            else:
                pos = self._positions(tcell, v_idx * self.n**e + int(u))
            if self.field.is_exact:
                yield [{int(pos[c]): val for c, val in row.items()} for row in R]
            else:
                B = np.zeros((R.shape[0], dimT), dtype=np.int64)
                B[:, pos] = R
                yield B % self.field.p

    def pair_product_blocks(self, S1: Subspace, c1, S2: Subspace, c2):
        """Row blocks spanning (row of S1) * (row of S2)."""
        e, f = self.degree_of(c1), self.degree_of(c2)
        tcell = self.cell_add(c1, c2)
        idx1, idx2 = self.cell_indices(c1), self.cell_indices(c2)
        dimT = self.cell_dim(tcell)
        if self.field.is_exact:
            rows2 = S2.row_dicts()
            for a in S1.row_dicts():
                block = []
                for b in rows2:
                    vec: dict = {}
                    for ca, va in a.items():
                        base = int(idx1[ca]) * self.n**f
                        for cb, vb in b.items():
                            t = int(
                                np.searchsorted(self.cell_indices(tcell), base + int(idx2[cb]))
                            )
                            vec[t] = vec.get(t, 0) + va * vb
                    block.append({c: v for c, v in vec.items() if v})
                yield block
        else:
            R1 = S1.rows_matrix()
            R2 = S2.rows_matrix()
            p = self.field.p
            # position grid: target coordinate of (word of c1) * (word of c2)
            grid = np.searchsorted(
                self.cell_indices(tcell),
                idx1[:, None] * self.n**f + idx2[None, :],
            )
            for a in R1:
                B = np.zeros((R2.shape[0], dimT), dtype=np.int64)
                nz = np.nonzero(a)[0]
                for c in nz:
                    B[:, grid[c]] += int(a[c]) * R2
                    B %= p
                yield B

    def vector_of(self, poly: FreePolynomial, cell):
        """Coordinates of a polynomial living inside one cell."""
        idx = self.cell_indices(cell)
        lookup = {int(g): k for k, g in enumerate(idx)}
        if self.field.is_exact:
            out: dict = {}
        else:
            out = np.zeros(len(idx), dtype=np.int64)
        for w, c in poly.terms.items():
            g = word_to_index(w, self.n)
            if g not in lookup:
                raise UsageError("polynomial has a term outside the cell")
            out[lookup[g]] = c if self.field.is_exact else int(c)
        return out


class QuotientContext:
    """Graded quotient components accessed through multiplication tables."""

    def __init__(self, quotient: GradedQuotient):
        if quotient.engine != "table":
            raise UsageError("lower central series on a quotient needs the table engine")
        self.q = quotient
        self.n = quotient.n
        self.field = quotient.field
        self.blocked = False

    def degree_of(self, cell) -> int:
        return cell

    def cells_of_degree(self, d: int) -> list:
        return [d]

    def cell_dim(self, cell) -> int:
        return self.q.dim(cell)

    def cell_add(self, c1, c2):
        return c1 + c2

    def subsplits(self, cell, e: int) -> list:
        return [(e, cell - e)]

    def _rows_T(self, rows, f: int) -> np.ndarray:
        q = self.q
        if isinstance(rows, str) and rows == IDENTITY:
            return np.eye(q.dim(f), dtype=q._dt)
        return np.ascontiguousarray(rows.T.astype(q._dt))

    def iter_bracket_blocks(self, ucell, rows, vcell, triangular: bool = False):
        """[basis word of degree e, rows]: X-chains minus Y-chains, trie-shared."""
        e, f = ucell, vcell
        q, p = self.q, self.field.p
        R = self._rows_T(rows, f)
        left = self._left_chain_levels(e, f, R)
        words = q.basis_words(e)
        right_memo: dict[tuple, np.ndarray] = {(): R}
        for b, w in enumerate(words):
            W = self._right_chain(w, f, right_memo)
            D = (left[b] - W) % p
            if triangular:
                D = D[:, b + 1 :]
            if D.size:
                yield np.ascontiguousarray(D.T)

    def iter_product_blocks(self, ucell, rows, vcell, side: str = "left"):
        e, f = ucell, vcell
        q = self.q
        R = self._rows_T(rows, f)
        if side == "left":
            for M in self._left_chain_levels(e, f, R):
                yield np.ascontiguousarray(M.T)
        else:
            memo: dict[tuple, np.ndarray] = {(): R}
            for w in q.basis_words(e):
                yield np.ascontiguousarray(self._right_chain(w, f, memo).T)

    def _left_chain_levels(self, e: int, f: int, R: np.ndarray):
        """nf(word(b) * columns of R) for every degree-e basis element b.

        Level k holds one matrix per degree-k basis element; level k+1 is a
        single table application on the suffix's matrix, so chains share all
        common suffixes.
        """
        q, p = self.q, self.field.p
        level = [R]
        for k in range(1, e + 1):
            lead, suffix = q._lead[k], q._suffix[k]
            nxt = []
            for b in range(q.dim(k)):
                nxt.append(matmul_mod(q.X[f + k - 1][int(lead[b])], level[int(suffix[b])], p))
            level = nxt
        return level

    def _right_chain(self, w: tuple, f: int, memo: dict) -> np.ndarray:
        """nf(columns of R * w) with prefixes shared through memo."""
        q, p = self.q, self.field.p
        best = len(w)
        while best and w[:best] not in memo:
            best -= 1
        M = memo[w[:best]]
        for k in range(best, len(w)):
            M = matmul_mod(q.Y[f + k][w[k]], M, p)
            memo[w[: k + 1]] = M
        return M

    def pair_product_blocks(self, S1, c1, S2, c2):
        raise UsageError("subspace products are only available on free contexts")

    def vector_of(self, poly: FreePolynomial, cell):
        nf = self.q.nf(poly)
        if nf.is_zero():
            return np.zeros(self.q.dim(cell), dtype=np.int64)
        words = {w: k for k, w in enumerate(self.q.basis_words(cell))}
        out = np.zeros(self.q.dim(cell), dtype=np.int64)
        for w, c in nf.terms.items():
            out[words[w]] = int(c)
        return out


class LcsEngine:
    """Lazily computed L_i and M_i subspaces over a context."""

    def __init__(self, ctx, D: int):
        self.ctx = ctx
        self.D = D
        self._L: dict = {}
        self._M: dict = {}

    # -- subspaces -----------------------------------------------------------

    def _empty(self, cell) -> Subspace:
        return Subspace(self.ctx.cell_dim(cell), self.ctx.field)

    def L(self, i: int, cell) -> Subspace:
        """L_i restricted to one cell; i >= 2 (L_1 is the full component)."""
        if i < 2:
            raise UsageError("L_1 is the full component; ask for dims instead")
        d = self.ctx.degree_of(cell)
        if d > self.D:
            raise TruncationError(f"degree {d} beyond engine bound {self.D}")
        key = (i, cell)
        if key in self._L:
            return self._L[key]
        S = self._empty(cell)
        if d >= i:
            if i == 2:
                for e in range(1, d // 2 + 1):
                    for ucell, vcell in self.ctx.subsplits(cell, e):
                        if e == d - e and not self._cell_le(ucell, vcell):
                            continue
                        triangular = e == d - e and ucell == vcell
                        for block in self.ctx.iter_bracket_blocks(
                            ucell, IDENTITY, vcell, triangular=triangular
                        ):
                            S.add(block)
            else:
                for e in range(1, d - (i - 1) + 1):
                    for ucell, vcell in self.ctx.subsplits(cell, e):
                        prev = self.L(i - 1, vcell)
                        if prev.rank == 0:
                            continue
                        rows = prev.row_dicts() if self.ctx.field.is_exact else prev.rows_matrix()
                        for block in self.ctx.iter_bracket_blocks(ucell, rows, vcell):
                            S.add(block)
        self._L[key] = S
        return S

    @staticmethod
    def _cell_le(c1, c2) -> bool:
        return c1 <= c2

    def M(self, i: int, cell) -> Subspace:
        """M_i = L_i + A^+ * L_i restricted to one cell; i >= 2."""
        d = self.ctx.degree_of(cell)
        key = (i, cell)
        if key in self._M:
            return self._M[key]
        S = self._empty(cell)
        if d >= i:
            Li = self.L(i, cell)
            if Li.rank:
                S.add(Li.row_dicts() if self.ctx.field.is_exact else Li.rows_matrix())
            for e in range(1, d - i + 1):
                for ucell, vcell in self.ctx.subsplits(cell, e):
                    prev = self.L(i, vcell)
                    if prev.rank == 0:
                        continue
                    rows = prev.row_dicts() if self.ctx.field.is_exact else prev.rows_matrix()
                    for block in self.ctx.iter_product_blocks(ucell, rows, vcell, side="left"):
                        S.add(block)
        self._M[key] = S
        return S

    # -- dimensions ------------------------------------------------------------

    def dim_A(self, d: int) -> int:
        return sum(self.ctx.cell_dim(c) for c in self.ctx.cells_of_degree(d))

    def dim_L(self, i: int, d: int) -> int:
        if i == 1:
            return self.dim_A(d)
        return sum(self.L(i, c).rank for c in self.ctx.cells_of_degree(d))

    def dim_M(self, i: int, d: int) -> int:
        if i == 1:
            return self.dim_A(d)
        return sum(self.M(i, c).rank for c in self.ctx.cells_of_degree(d))


# -- filtration table ---------------------------------------------------------


@dataclass
class FiltrationTable:
    """Dimension table of the four series through (I_max, D)."""

    algebra: str
    I_max: int
    D: int
    L: list  # L[i-1][d]
    M: list
    B: list
    N: list
    meta: dict = dc_field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "algebra": self.algebra,
            "L": self.L,
            "M": self.M,
            "B": self.B,
            "N": self.N,
            "meta": {"I_max": self.I_max, "D": self.D, **self.meta},
        }

    def series_tsv(self, name: str) -> str:
        table = getattr(self, name)
        lines = ["\t".join(["i\\d"] + [str(d) for d in range(self.D + 1)])]
        for i, row in enumerate(table, start=1):
            lines.append("\t".join([str(i)] + [str(v) for v in row]))
        return "\n".join(lines) + "\n"


def filtration_table(engine: LcsEngine, I_max: int, D: int, algebra: str = "", meta=None):
    L = [[engine.dim_L(i, d) for d in range(D + 1)] for i in range(1, I_max + 2)]
    M = [[engine.dim_M(i, d) if i > 1 else engine.dim_A(d) for d in range(D + 1)] for i in range(1, I_max + 2)]
    B = [[L[i][d] - L[i + 1][d] for d in range(D + 1)] for i in range(I_max)]
    N = [[M[i][d] - M[i + 1][d] for d in range(D + 1)] for i in range(I_max)]
    return FiltrationTable(algebra, I_max, D, L[:I_max], M[:I_max], B, N, meta or {})


# -- checks -------------------------------------------------------------------


def _rows_of_subspace(S: Subspace, exact: bool):
    return S.row_dicts() if exact else S.rows_matrix()


def check_product_inclusion(engine: LcsEngine, i: int, j: int, D: int, strong: bool = True):
    """Per-degree defect of span(M_i * M_j) against M_{i+j-2} and M_{i+j-1}."""
    ctx = engine.ctx
    report = {"i": i, "j": j, "per_degree": {}}
    for d in range(i + j, D + 1):
        weak = {c: Subspace(ctx.cell_dim(c), ctx.field) for c in ctx.cells_of_degree(d)}
        strongr = {c: Subspace(ctx.cell_dim(c), ctx.field) for c in ctx.cells_of_degree(d)} if strong else None
        for d1 in range(i, d - j + 1):
            d2 = d - d1
            for c1 in ctx.cells_of_degree(d1):
                S1 = engine.M(i, c1)
                if S1.rank == 0:
                    continue
                for c2 in ctx.cells_of_degree(d2):
                    S2 = engine.M(j, c2)
                    if S2.rank == 0:
                        continue
                    tcell = ctx.cell_add(c1, c2)
                    for block in ctx.pair_product_blocks(S1, c1, S2, c2):
                        tgt = engine.M(i + j - 2, tcell)
                        weak[tcell].add(tgt.reduce_rows(block))
                        if strong:
                            tgt2 = engine.M(i + j - 1, tcell)
                            strongr[tcell].add(tgt2.reduce_rows(block))
        entry = {"weak_defect": sum(S.rank for S in weak.values())}
        if strong:
            entry["strong_defect"] = sum(S.rank for S in strongr.values())
        report["per_degree"][d] = entry
    return report


def check_m2_power(engine: LcsEngine, r: int, D: int):
    """Defect of span(M_2^r) against M_3, per total degree."""
    ctx = engine.ctx
    report = {"r": r, "per_degree": {}}
    for d in range(2 * r, D + 1):
        defect = {c: Subspace(ctx.cell_dim(c), ctx.field) for c in ctx.cells_of_degree(d)}
        # power[k][cell]: span of k-fold products of M_2 cells at this total degree
        def power_cells(k: int, deg: int):
            if k == 1:
                return {c: engine.M(2, c) for c in ctx.cells_of_degree(deg) if engine.M(2, c).rank}
            out: dict = {}
            for d1 in range(2 * (k - 1), deg - 1):
                d2 = deg - d1
                if d2 < 2:
                    continue
                for c1, S1 in power_cells(k - 1, d1).items():
                    for c2 in ctx.cells_of_degree(d2):
                        S2 = engine.M(2, c2)
                        if S2.rank == 0:
                            continue
                        tcell = ctx.cell_add(c1, c2)
                        T = out.setdefault(tcell, Subspace(ctx.cell_dim(tcell), ctx.field))
                        for block in ctx.pair_product_blocks(S1, c1, S2, c2):
                            T.add(block)
            return {c: S for c, S in out.items() if S.rank}
        for tcell, S in power_cells(r, d).items():
            tgt = engine.M(3, tcell)
            defect[tcell].add(tgt.reduce_rows(_rows_of_subspace(S, ctx.field.is_exact)))
        report["per_degree"][d] = {"defect": sum(S.rank for S in defect.values())}
    return report


def check_b_generation(engine: LcsEngine, m: int, D: int):
    """L_{m+1} = span([A_{<=2}, L_m]) + L_{m+2}, per degree."""
    ctx = engine.ctx
    report = {"m": m, "per_degree": {}}
    for d in range(m + 1, D + 1):
        ok = True
        for cell in ctx.cells_of_degree(d):
            target = engine.L(m + 1, cell)
            S = Subspace(ctx.cell_dim(cell), ctx.field)
            upper = engine.L(m + 2, cell)
            if upper.rank:
                S.add(_rows_of_subspace(upper, ctx.field.is_exact))
            for e in (1, 2):
                if d - e < m:
                    continue
                for ucell, vcell in ctx.subsplits(cell, e):
                    prev = engine.L(m, vcell)
                    if prev.rank == 0:
                        continue
                    rows = _rows_of_subspace(prev, ctx.field.is_exact)
                    for block in ctx.iter_bracket_blocks(ucell, rows, vcell):
                        S.add(block)
            if not (S.rank == target.rank and target.contains_all(
                _rows_of_subspace(S, ctx.field.is_exact)
            )):
                ok = False
        report["per_degree"][d] = {"equal": ok}
    return report


def check_fs3(engine: LcsEngine, D: int):
    """L_2 meet M_3 = L_3, per degree (cellwise)."""
    ctx = engine.ctx
    report = {"per_degree": {}}
    for d in range(2, D + 1):
        equal = True
        for cell in ctx.cells_of_degree(d):
            inter = engine.L(2, cell).intersect(engine.M(3, cell))
            if not (inter == engine.L(3, cell)):
                equal = False
        report["per_degree"][d] = {"equal": equal}
    return report


def check_m_right_stability(engine: LcsEngine, i: int, D: int, e_max: int = 2):
    """M_i[d] * A[e] inside M_i[d+e] for small e (so A*L_i = A*L_i*A)."""
    ctx = engine.ctx
    report = {"i": i, "checks": []}
    for d in range(i, D + 1):
        for e in range(1, min(e_max, D - d) + 1):
            residual: dict = {}
            for cell in ctx.cells_of_degree(d):
                S = engine.M(i, cell)
                if S.rank == 0:
                    continue
                rows = _rows_of_subspace(S, ctx.field.is_exact)
                for ecell in ctx.cells_of_degree(e):
                    tcell = ctx.cell_add(cell, ecell)
                    tgt = engine.M(i, tcell)
                    acc = residual.setdefault(
                        tcell, Subspace(ctx.cell_dim(tcell), ctx.field)
                    )
                    for block in ctx.iter_product_blocks(ecell, rows, cell, side="right"):
                        acc.add(tgt.reduce_rows(block))
            report["checks"].append(
                {"d": d, "e": e, "defect": sum(S.rank for S in residual.values())}
            )
    return report


def check_polylinear_identities(field: FieldSpec):
    """Membership of [x[y,z,u],v] in the polylinear parts of L_3 and L_4 of A_5.

    Lands in L_3 over every field; lands in L_4 away from characteristic 3.
    """
    n = 5
    ctx = FreeContext(n, field, blocked=True)
    engine = LcsEngine(ctx, 5)
    cell = (1, 1, 1, 1, 1)
    x, y, z, u, v = FreePolynomial.generators(n, field)
    elem = (x * left_normed_bracket([y, z, u])) * v - v * (x * left_normed_bracket([y, z, u]))
    vec = ctx.vector_of(elem, cell)
    in_l3 = engine.L(3, cell).contains(vec)
    in_l4 = engine.L(4, cell).contains(vec)
    return {
        "field": str(field),
        "element": "[x[y,z,u],v]",
        "in_L3": bool(in_l3),
        "in_L4": bool(in_l4),
        "expected_in_L4": field.characteristic != 3,
    }


def vanishing_report(engine: LcsEngine, d_relation: int, m_max: int, D: int):
    """Vanishing degrees of B_m and N_m against the proven and conjectural bounds.

    Proven: B_m[r] = 0 for r >= 2d + 2m - 5, N_m[r] = 0 for r >= 2d + 2m - 4.
    Conjectural (reported, never asserted): both vanish for r >= 2d + m - 3.
    """
    rows = []
    violations = []
    for m in range(2, m_max + 1):
        B = [engine.dim_L(m, r) - engine.dim_L(m + 1, r) for r in range(D + 1)]
        N = [engine.dim_M(m, r) - engine.dim_M(m + 1, r) for r in range(D + 1)]
        b_bound = 2 * d_relation + 2 * m - 5
        n_bound = 2 * d_relation + 2 * m - 4
        conj = 2 * d_relation + m - 3
        top_B = max((r for r in range(D + 1) if B[r]), default=None)
        top_N = max((r for r in range(D + 1) if N[r]), default=None)
        for r in range(b_bound, D + 1):
            if B[r]:
                violations.append({"series": "B", "m": m, "r": r, "dim": B[r]})
        for r in range(n_bound, D + 1):
            if N[r]:
                violations.append({"series": "N", "m": m, "r": r, "dim": N[r]})
        rows.append(
            {
                "m": m,
                "B_dims": B,
                "N_dims": N,
                "top_B": top_B,
                "top_N": top_N,
                "proven_bound_B": b_bound,
                "proven_bound_N": n_bound,
                "conjectural_bound": conj,
                "conjecture_holds_B": all(B[r] == 0 for r in range(conj, D + 1)),
                "conjecture_holds_N": all(N[r] == 0 for r in range(conj, D + 1)),
            }
        )
    return {"d": d_relation, "m_max": m_max, "D": D, "rows": rows, "violations": violations}
