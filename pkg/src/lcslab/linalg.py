"""Exact linear algebra on per-degree coordinate spaces.

Two engines sit behind one Subspace interface:

* prime field: dense row-reduced echelon kept in numpy arrays, with batched
  reductions routed through BLAS float64 matmuls.  Chunk sizes are chosen so
  every intermediate stays below 2^53 (or 2^63 on the integer fallback), so
  results are exact and independent of summation order.
* exact rationals: sparse integer-primitive echelon rows (dicts), reduced by
  cross-multiplication.  Canonical form: content 1, positive pivot, fully
  back-substituted.

Row-reduced echelon form is canonical for the subspace, so identical spans
produce identical matrices regardless of input order.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .freealg import EXACT, FieldSpec, UsageError

__all__ = [
    "InclusionViolationError",
    "Subspace",
    "matmul_mod",
    "span",
    "quotient_dim",
]

# Largest modulus for which a single float64 product fits under 2^53.
F64_PRIME_MAX = 94906265


class InclusionViolationError(ValueError):
    """quotient_dim was asked for small/big with small not inside big."""


def matmul_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """Exact (A @ B) mod p.

    Inputs must already be reduced into [0, p).  The inner dimension is
    chunked so accumulated products never exceed the exact-integer range of
    the working dtype (float64 below F64_PRIME_MAX, int64 above).
    """
    m, k = A.shape
    k2, n = B.shape
    if k != k2:
        raise UsageError(f"matmul_mod shapes {A.shape} x {B.shape}")
    use_f64 = p <= F64_PRIME_MAX
    if use_f64:
        limit, dtype = (1 << 53) - p, np.float64
    else:
        limit, dtype = (1 << 63) - 1 - p, np.int64
    chunk = max(1, limit // ((p - 1) ** 2))
    if k == 0 or m == 0 or n == 0:
        return np.zeros((m, n), dtype=dtype)
    A = A.astype(dtype, copy=False)
    B = B.astype(dtype, copy=False)
    if k <= chunk:
        out = A @ B
        out %= p
        return out
    out = np.zeros((m, n), dtype=dtype)
    for s in range(0, k, chunk):
        e = min(k, s + chunk)
        out += A[:, s:e] @ B[s:e]
        out %= p
    return out


def _nonzero_rows(M: np.ndarray) -> np.ndarray:
    return M[M.any(axis=1)] if M.size else M


class _ModEchelon:
    """Dense RREF over F_p with batched streaming insertion."""

    def __init__(self, dim: int, p: int):
        self.dim = dim
        self.p = p
        self.dtype = np.float64 if p <= F64_PRIME_MAX else np.int64
        self.rows = np.zeros((0, dim), dtype=self.dtype)
        self.pivots = np.zeros(0, dtype=np.int64)

    @property
    def rank(self) -> int:
        return self.rows.shape[0]

    def reduce_block(self, M: np.ndarray) -> np.ndarray:
        """Residual of the rows of M after reduction against the echelon."""
        M = np.mod(M.astype(self.dtype, copy=True), self.p)
        if self.rank and M.shape[0]:
            coef = np.ascontiguousarray(M[:, self.pivots])
            M = (M - matmul_mod(coef, self.rows, self.p)) % self.p
        return M

    def _echelonize_small(self, C: np.ndarray):
        """RREF of a small pre-reduced block by plain row operations.

        On the float64 path full-block reductions are deferred: each
        elimination grows magnitudes by at most p^2, so up to defer_cap
        updates stay exact before a block-wide mod is due.
        """
        p = self.p
        defer_cap = max(1, ((1 << 53) - p) // ((p - 1) ** 2)) if self.dtype == np.float64 else 1
        pending = 0
        new_rows, new_pivs = [], []
        for r in range(C.shape[0]):
            row = C[r] % p
            nz = row.nonzero()[0]
            if nz.size == 0:
                continue
            c = int(nz[0])
            inv = pow(int(row[c]), -1, p)
            row = row * inv % p
            C[r] = row
            if r + 1 < C.shape[0]:
                f = C[r + 1 :, c : c + 1] % p
                if f.any():
                    C[r + 1 :] -= f * row[None, :]
                    pending += 1
                    if pending >= defer_cap:
                        C[r + 1 :] %= p
                        pending = 0
            new_rows.append(row)
            new_pivs.append(c)
        if not new_rows:
            return None, None
        NR = np.array(new_rows, dtype=self.dtype)
        order = np.argsort(new_pivs, kind="stable")
        NR = NR[order]
        pivs = np.array(new_pivs, dtype=np.int64)[order]
        # back-substitute inside the block so zeros sit above every pivot
        pending = 0
        for i in range(len(pivs) - 1, 0, -1):
            c = pivs[i]
            NR[i] %= p  # may carry deferred updates from later pivots
            f = NR[:i, c : c + 1] % p
            if f.any():
                NR[:i] -= f * NR[i][None, :]
                pending += 1
                if pending >= defer_cap:
                    NR[:i] %= p
                    pending = 0
        if pending:
            NR %= p
        return NR, pivs

    def _echelonize_block(self, C: np.ndarray, base: int = 256):
        """RREF of a pre-reduced block; bulk eliminations go through matmuls."""
        rows, pivs = None, None
        for s in range(0, C.shape[0], base):
            S = C[s : s + base]
            if rows is not None:
                f = np.ascontiguousarray(S[:, pivs])
                if f.any():
                    S = (S - matmul_mod(f, rows, self.p)) % self.p
            NR, np_ = self._echelonize_small(np.array(S))
            if NR is None:
                continue
            if rows is None:
                rows, pivs = NR, np_
                continue
            f = np.ascontiguousarray(rows[:, np_])
            if f.any():
                rows = (rows - matmul_mod(f, NR, self.p)) % self.p
            rows = np.vstack([rows, NR])
            pivs = np.concatenate([pivs, np_])
        return rows, pivs

    def add_block(self, M: np.ndarray, chunk: int = 4096) -> int:
        """Insert rows of M; returns the number of new pivots."""
        added = 0
        for s in range(0, M.shape[0], chunk):
            C = self.reduce_block(M[s : s + chunk])
            C = _nonzero_rows(C)
            if C.shape[0] == 0:
                continue
            NR, pivs = self._echelonize_block(C)
            if NR is None:
                continue
            if self.rank:
                f = np.ascontiguousarray(self.rows[:, pivs])
                if f.any():
                    self.rows = (self.rows - matmul_mod(f, NR, self.p)) % self.p
            self.rows = np.vstack([self.rows, NR])
            self.pivots = np.concatenate([self.pivots, pivs])
            order = np.argsort(self.pivots, kind="stable")
            self.rows = np.ascontiguousarray(self.rows[order])
            self.pivots = self.pivots[order]
            added += len(pivs)
        return added

    def export_rows(self) -> np.ndarray:
        return self.rows.astype(np.int64)


class _ExactEchelon:
    """Sparse integer-primitive RREF over the rationals.

    Rows are dicts col -> int with gcd 1 and positive leading entry; scaling
    a row is harmless since only the rational row space matters.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.by_pivot: dict[int, dict] = {}

    @property
    def rank(self) -> int:
        return len(self.by_pivot)

    @property
    def pivots(self) -> list[int]:
        return sorted(self.by_pivot)

    @staticmethod
    def _strip(v: dict) -> dict:
        if not v:
            return v
        g = 0
        for val in v.values():
            g = math.gcd(g, val)
        if g > 1:
            v = {c: val // g for c, val in v.items()}
        return v

    def reduce(self, vec: dict) -> dict:
        v = {c: int(val) for c, val in vec.items() if val}
        while True:
            hit = None
            for c in sorted(v):
                if c in self.by_pivot:
                    hit = c
                    break
            if hit is None:
                return v
            q = self.by_pivot[hit]
            a, b = q[hit], v[hit]
            g = math.gcd(a, b)
            fa, fb = a // g, b // g
            nv = {c: fa * val for c, val in v.items()}
            for c, val in q.items():
                nv[c] = nv.get(c, 0) - fb * val
            v = self._strip({c: val for c, val in nv.items() if val})

    def insert(self, vec: dict) -> bool:
        v = self.reduce(vec)
        if not v:
            return False
        c = min(v)
        if v[c] < 0:
            v = {col: -val for col, val in v.items()}
        for pk, row in self.by_pivot.items():
            if c in row:
                a, b = v[c], row[c]
                g = math.gcd(a, b)
                fa, fb = a // g, b // g
                merged = {col: fa * val for col, val in row.items()}
                for col, val in v.items():
                    merged[col] = merged.get(col, 0) - fb * val
                merged = self._strip({col: val for col, val in merged.items() if val})
                if merged[pk] < 0:
                    merged = {col: -val for col, val in merged.items()}
                self.by_pivot[pk] = merged
        self.by_pivot[c] = v
        return True


def _as_exact_dict(vec) -> dict:
    """Coerce a vector (dict / sequence, int or Fraction entries) to an int dict."""
    if isinstance(vec, dict):
        items = vec.items()
    else:
        items = ((i, v) for i, v in enumerate(vec))
    frac = {}
    denlcm = 1
    for c, v in items:
        if not v:
            continue
        f = v if isinstance(v, Fraction) else Fraction(v)
        frac[c] = f
        denlcm = denlcm * f.denominator // math.gcd(denlcm, f.denominator)
    return {c: int(f * denlcm) for c, f in frac.items()}


class Subspace:
    """Row-reduced basis of a linear subspace of one graded component."""

    def __init__(self, ambient_dim: int, field: FieldSpec):
        self.ambient_dim = ambient_dim
        self.field = field
        if field.kind == EXACT:
            self._ech = _ExactEchelon(ambient_dim)
        else:
            self._ech = _ModEchelon(ambient_dim, field.p)

    # -- construction ------------------------------------------------------

    @staticmethod
    def span(vectors, ambient_dim: int, field: FieldSpec) -> "Subspace":
        S = Subspace(ambient_dim, field)
        S.add(vectors)
        return S

    @property
    def is_exact(self) -> bool:
        return self.field.kind == EXACT

    def add(self, vectors) -> int:
        """Insert vectors (matrix, or iterable of vectors/dicts); returns new rank gained."""
        if self.is_exact:
            added = 0
            for v in vectors:
                d = _as_exact_dict(v)
                self._check_dict(d)
                added += bool(self._ech.insert(d))
            return added
        M = self._coerce_matrix(vectors)
        return self._ech.add_block(M)

    def _check_dict(self, d: dict):
        if d and (min(d) < 0 or max(d) >= self.ambient_dim):
            raise UsageError("vector coordinate out of range")

    def _coerce_matrix(self, vectors) -> np.ndarray:
        if isinstance(vectors, np.ndarray):
            M = np.atleast_2d(vectors)
        else:
            vectors = list(vectors)
            if not vectors:
                return np.zeros((0, self.ambient_dim), dtype=np.int64)
            if isinstance(vectors[0], dict):
                M = np.zeros((len(vectors), self.ambient_dim), dtype=np.int64)
                for i, d in enumerate(vectors):
                    self._check_dict(d)
                    for c, v in d.items():
                        M[i, c] = int(v) % self.field.p
            else:
                M = np.array([list(v) for v in vectors], dtype=np.int64)
        if M.shape[1] != self.ambient_dim:
            raise UsageError(f"vector length {M.shape[1]} != ambient {self.ambient_dim}")
        return M

    # -- queries -----------------------------------------------------------

    @property
    def rank(self) -> int:
        return self._ech.rank

    @property
    def pivots(self) -> list[int]:
        if self.is_exact:
            return self._ech.pivots
        return [int(c) for c in self._ech.pivots]

    def rows_matrix(self) -> np.ndarray:
        """Dense int64 RREF rows (exact rows come out integer-primitive)."""
        if not self.is_exact:
            return self._ech.export_rows()
        M = np.zeros((self.rank, self.ambient_dim), dtype=object)
        for i, c in enumerate(self.pivots):
            for col, val in self._ech.by_pivot[c].items():
                M[i, col] = val
        return M

    def row_dicts(self) -> list[dict]:
        if self.is_exact:
            return [dict(self._ech.by_pivot[c]) for c in self.pivots]
        out = []
        for row in self._ech.rows:
            nz = row.nonzero()[0]
            out.append({int(c): int(row[c]) for c in nz})
        return out

    def reduce_vector(self, v):
        if self.is_exact:
            return self._ech.reduce(_as_exact_dict(v))
        M = self._coerce_matrix([v] if isinstance(v, dict) or np.ndim(v) == 1 else v)
        return self._ech.reduce_block(M)

    def reduce_rows(self, vectors):
        """Residuals of many vectors at once (list of dicts when exact)."""
        if self.is_exact:
            if isinstance(vectors, Subspace):
                vectors = vectors.row_dicts()
            return [self._ech.reduce(_as_exact_dict(v)) for v in vectors]
        if isinstance(vectors, Subspace):
            vectors = vectors.rows_matrix()
        return self._ech.reduce_block(self._coerce_matrix(vectors))

    def contains(self, v) -> bool:
        r = self.reduce_vector(v)
        if self.is_exact:
            return not r
        return not r.any()

    def contains_all(self, vectors) -> bool:
        if self.is_exact:
            return all(self.contains(v) for v in vectors)
        M = self._coerce_matrix(vectors)
        return not self._ech.reduce_block(M).any()

    def defect_dim(self, vectors) -> int:
        """dim of span(vectors) outside this subspace."""
        extra = Subspace(self.ambient_dim, self.field)
        if self.is_exact:
            n = 0
            for v in vectors:
                n += extra.add([self.reduce_vector(v)])
            return n
        M = self._coerce_matrix(vectors)
        return extra.add(self._ech.reduce_block(M))

    def copy(self) -> "Subspace":
        out = Subspace(self.ambient_dim, self.field)
        out.add(self.row_dicts() if self.is_exact else self.rows_matrix())
        return out

    def rows_tsv(self) -> str:
        """Debug dump of the echelon rows."""
        lines = []
        for row in self.rows_matrix():
            lines.append("\t".join(str(int(v) if not self.is_exact else v) for v in row))
        return "\n".join(lines) + ("\n" if lines else "")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        if self.ambient_dim != other.ambient_dim or self.field != other.field:
            return False
        if self.pivots != other.pivots:
            return False
        if self.is_exact:
            return [self._ech.by_pivot[c] for c in self.pivots] == [
                other._ech.by_pivot[c] for c in other.pivots
            ]
        return bool(np.array_equal(self._ech.rows, other._ech.rows))

    def __le__(self, other: "Subspace") -> bool:
        return other.contains_all(self.row_dicts() if self.is_exact else self.rows_matrix())

    # -- lattice operations --------------------------------------------------

    def sum(self, other: "Subspace") -> "Subspace":
        self._check_peer(other)
        out = self.copy()
        out.add(other.row_dicts() if other.is_exact else other.rows_matrix())
        return out

    def intersect(self, other: "Subspace") -> "Subspace":
        """Zassenhaus: echelonize [R1|R1; R2|0]; rows with zero left half give the meet."""
        self._check_peer(other)
        m = self.ambient_dim
        out = Subspace(m, self.field)
        if self.rank == 0 or other.rank == 0:
            return out
        stacked = Subspace(2 * m, self.field)
        if self.is_exact:
            for d in self.row_dicts():
                d2 = dict(d)
                d2.update({c + m: v for c, v in d.items()})
                stacked.add([d2])
            stacked.add(other.row_dicts())
            for piv, row in zip(stacked.pivots, stacked.row_dicts()):
                if piv >= m:
                    out.add([{c - m: v for c, v in row.items()}])
        else:
            R1 = self.rows_matrix()
            R2 = other.rows_matrix()
            stacked.add(np.hstack([R1, R1]))
            stacked.add(np.hstack([R2, np.zeros_like(R2)]))
            rows = stacked.rows_matrix()
            keep = np.array(stacked.pivots) >= m
            if keep.any():
                out.add(rows[keep][:, m:])
        return out

    def _check_peer(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim or self.field != other.field:
            raise UsageError("subspaces disagree on ambient dimension or field")


def span(vectors, ambient_dim: int, field: FieldSpec) -> Subspace:
    return Subspace.span(vectors, ambient_dim, field)


def quotient_dim(big: Subspace, small: Subspace) -> int:
    """rank(big) - rank(small), after checking small really sits inside big."""
    big._check_peer(small)
    if not (small <= big):
        raise InclusionViolationError("claimed subspace inclusion fails")
    return big.rank - small.rank
