"""Finitely presented graded algebras, realized degree by degree.

Two interchangeable realizations of A = A_n / <f_1, ..., f_m>:

* ``table`` (prime fields): degree d is built as a quotient of V (x) A[d-1];
  the kernel there is spanned by the images of f * (basis of A[d - deg f]),
  so only matrices of size ~ dim A[d] are ever eliminated.  Left and right
  multiplication tables by generators come out of the same reduction, and
  every normal form is a chain of table applications.  This follows the
  grading A[d] = (V (x) A[d-1]) / image(I[d-1]*V + relations[d]).
* ``echelon`` (any field, small degrees): the two-sided ideal component I[d]
  is spanned directly by u * f * v inside the full n^d-dimensional word
  space and row-reduced; normal form is vector reduction against it.

The quotient basis of the table engine is a tree basis: every basis element
of degree d is x_i * (basis element of degree d-1), so the basis word set is
suffix-closed.
"""

from __future__ import annotations

import hashlib
import warnings
from dataclasses import dataclass

import numpy as np

from .freealg import (
    FieldSpec,
    FreePolynomial,
    UsageError,
    format_polynomial,
    index_to_word,
    parse_polynomial,
    word_to_index,
)
from .linalg import F64_PRIME_MAX, Subspace, matmul_mod

__all__ = [
    "Presentation",
    "GradedQuotient",
    "TruncationError",
    "random_relation",
    "abelianization_squarefree",
    "parse_relation_file",
    "presentation_from_degrees",
    "ideal_component",
]

AMBIENT_CAP = 4096


class TruncationError(RuntimeError):
    """A degree beyond the built truncation was requested."""


@dataclass(frozen=True)
class Presentation:
    """Homogeneous presentation A_n / <relations> over a fixed field."""

    n: int
    field: FieldSpec
    relations: tuple = ()
    seed: int | None = None

    def __post_init__(self):
        for f in self.relations:
            if f.n != self.n or f.field != self.field:
                raise UsageError("relation disagrees with presentation on n or field")
            if not f.is_homogeneous() or f.is_zero():
                raise UsageError("relations must be nonzero homogeneous polynomials")

    @property
    def degrees(self) -> tuple:
        return tuple(f.degree() for f in self.relations)

    @property
    def is_free(self) -> bool:
        return not self.relations

    def canonical_text(self) -> str:
        lines = [f"generators: {self.n}"]
        lines.append("prime: exact" if self.field.is_exact else f"prime: {self.field.p}")
        if self.seed is not None:
            lines.append(f"seed: {self.seed}")
        for f in self.relations:
            lines.append(format_polynomial(f))
        return "\n".join(lines) + "\n"

    def content_hash(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()


def parse_relation_file(text: str) -> Presentation:
    """Relation file: 'generators:'/'prime:' header, '#' comments, one polynomial per line."""
    n = None
    field = None
    seed = None
    body = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        low = line.lower()
        if low.startswith("generators:"):
            n = int(line.split(":", 1)[1])
        elif low.startswith("prime:"):
            val = line.split(":", 1)[1].strip()
            field = FieldSpec.rationals() if val == "exact" else FieldSpec.prime(int(val))
        elif low.startswith("seed:"):
            seed = int(line.split(":", 1)[1])
        else:
            body.append(line)
    if n is None:
        raise UsageError("relation file is missing a 'generators: n' header")
    if field is None:
        raise UsageError("relation file is missing a 'prime: p | exact' header")
    rels = tuple(parse_polynomial(line, n, field) for line in body)
    return Presentation(n, field, rels, seed)


# -- random generic relations ------------------------------------------------


def _poly_gcd_degree(a: list, b: list, field: FieldSpec) -> int:
    """Degree of gcd of two univariate polynomials over the field (-1 for gcd 0)."""

    def trim(c):
        while c and c[-1] == field.zero():
            c.pop()
        return c

    a, b = trim(list(a)), trim(list(b))
    while b:
        # a mod b
        inv = field.inv(b[-1])
        while len(a) >= len(b):
            f = field.mul(a[-1], inv)
            shift = len(a) - len(b)
            for i, bc in enumerate(b):
                a[shift + i] = field.sub(a[shift + i], field.mul(f, bc))
            trim(a)
            if not a:
                break
        a, b = b, a
    return len(a) - 1


def abelianization_squarefree(P: FreePolynomial) -> bool:
    """Whether the commutative image of P factors into distinct linear forms.

    Only n = 2 is supported: the binary form is dehomogenized to g(t) and the
    test is gcd(g, g') = 1 together with multiplicity <= 1 at infinity (the
    top two binary-form coefficients must not both vanish).
    """
    if P.n != 2:
        raise UsageError("squarefree certification is only available for n = 2")
    if P.is_zero() or not P.is_homogeneous():
        return False
    d = P.degree()
    fld = P.field
    b = [fld.zero()] * (d + 1)  # b[k] = coefficient of x^k y^(d-k)
    for w, c in P.terms.items():
        k = sum(1 for letter in w if letter == 0)
        b[k] = fld.add(b[k], c)
    if b[d] == fld.zero() and b[d - 1] == fld.zero():
        return False
    gprime = [fld.mul(fld.normalize(k), b[k]) for k in range(1, d + 1)]
    return _poly_gcd_degree(b, gprime, fld) == 0


def random_relation(n: int, d: int, seed, field: FieldSpec, require_squarefree: bool = True):
    """Uniformly random homogeneous degree-d relation over F_p.

    For n = 2 the draw is resampled until the abelianization is squarefree.
    Returns (polynomial, attempts).
    """
    if field.is_exact:
        raise UsageError("random relations are drawn over a prime field")
    if d < 2:
        raise UsageError("random relations need degree >= 2")
    if require_squarefree and n != 2:
        raise UsageError("squarefree gate unavailable for n >= 3; pass require_squarefree=False")
    if field.p <= d:
        warnings.warn(f"p = {field.p} <= degree {d}: squarefree draws may be atypical")
    rng = np.random.default_rng(seed)
    attempts = 0
    while True:
        attempts += 1
        coeffs = rng.integers(0, field.p, size=n**d)
        poly = FreePolynomial(
            n, field, {index_to_word(i, n, d): int(c) for i, c in enumerate(coeffs) if c}
        )
        if not require_squarefree or abelianization_squarefree(poly):
            return poly, attempts
        if attempts > 64:
            raise RuntimeError("squarefree resampling failed to terminate")


def presentation_from_degrees(n, degrees, seed, field) -> Presentation:
    """Weil-generic presentation: independent per-relation seeds spawned from one."""
    ss = np.random.SeedSequence(seed)
    children = ss.spawn(len(degrees))
    rels = tuple(random_relation(n, d, child, field)[0] for d, child in zip(degrees, children))
    return Presentation(n, field, rels, seed)


# -- the two-sided ideal, definitional route --------------------------------


def ideal_component(pres: Presentation, d: int, cap: int = AMBIENT_CAP) -> Subspace:
    """Span of all u * f * v of degree d inside the full word space.

    Independent of the table construction; guarded by the ambient cap since
    it materializes n^d coordinates.
    """
    n = pres.n
    dim = n**d
    if dim > cap:
        raise UsageError(f"ideal_component ambient {dim} exceeds cap {cap}")
    S = Subspace(dim, pres.field)
    for f in pres.relations:
        e = f.degree()
        if e > d:
            continue
        fvec = [(word_to_index(w, n), c) for w, c in sorted(f.terms.items())]
        for a in range(0, d - e + 1):
            c_len = d - e - a
            block = []
            for u in range(n**a):
                base_u = u * n ** (e + c_len)
                for v in range(n**c_len):
                    if pres.field.is_exact:
                        block.append({base_u + wi * n**c_len + v: cv for wi, cv in fvec})
                    else:
                        row = np.zeros(dim, dtype=np.int64)
                        for wi, cv in fvec:
                            row[base_u + wi * n**c_len + v] = cv
                        block.append(row)
            S.add(block if pres.field.is_exact else np.array(block))
    return S


# -- graded quotient ----------------------------------------------------------


class GradedQuotient:
    """A presentation realized through degree D with normal-form reduction."""

    def __init__(self, pres: Presentation, D: int, engine: str = "auto", cap: int = AMBIENT_CAP):
        self.pres = pres
        self.n = pres.n
        self.field = pres.field
        self.D = D
        if engine == "auto":
            engine = "echelon" if (pres.field.is_exact or pres.n**D <= 512) else "table"
        if pres.is_free:
            engine = "free"
        self.engine = engine
        self.dims: list[int] = [1]
        self._words: list[list[tuple]] = [[()]]
        if engine == "table":
            self._build_table()
        elif engine == "echelon":
            self._build_echelon(cap)
        elif engine == "free":
            self.dims = [pres.n**d for d in range(D + 1)]
        else:
            raise UsageError(f"unknown engine {engine!r}")

    # -- table engine --------------------------------------------------------

    def _build_table(self):
        if self.field.is_exact:
            raise UsageError("the table engine runs over a prime field")
        n, p, D = self.n, self.field.p, self.D
        self._dt = np.float64 if p <= F64_PRIME_MAX else np.int64
        self.X: list[list[np.ndarray]] = []  # X[d][i]: A[d] -> A[d+1]
        self.Y: list[list[np.ndarray]] = []
        self._lead: list[np.ndarray | None] = [None]
        self._suffix: list[np.ndarray | None] = [None]
        rel_vecs = []
        for f in self.pres.relations:
            terms = {w: int(c) for w, c in sorted(f.terms.items())}
            rel_vecs.append((f.degree(), terms))
        for d in range(1, D + 1):
            h_prev = self.dims[d - 1]
            ambient = n * h_prev
            ech = Subspace(ambient, self.field)
            for e, terms in rel_vecs:
                if e > d:
                    continue
                block = self._relation_kernel_block(terms, e, d)
                if block.shape[0]:
                    ech.add(block)
            E = ech.rows_matrix()
            piv = np.array(ech.pivots, dtype=np.int64)
            mask = np.ones(ambient, dtype=bool)
            mask[piv] = False
            ncols = np.nonzero(mask)[0]
            h_d = len(ncols)
            red = np.zeros((h_d, ambient), dtype=np.int64)
            red[np.arange(h_d), ncols] = 1
            if len(piv):
                red[:, piv] = (-E[:, ncols].T) % p
            X_d = [
                np.ascontiguousarray(red[:, i * h_prev : (i + 1) * h_prev]).astype(self._dt)
                for i in range(n)
            ]
            lead, suffix = np.divmod(ncols, h_prev)
            Y_d = []
            for j in range(n):
                Yj = np.zeros((h_d, h_prev), dtype=self._dt)
                if d == 1:
                    Yj[:, 0] = X_d[j][:, 0]
                else:
                    prev_lead, prev_suffix = self._lead[d - 1], self._suffix[d - 1]
                    Yprev = self.Y[d - 2][j]
                    for i in range(n):
                        sel = np.nonzero(prev_lead == i)[0]
                        if sel.size:
                            Yj[:, sel] = matmul_mod(X_d[i], Yprev[:, prev_suffix[sel]], p)
                Y_d.append(Yj)
            self.X.append(X_d)
            self.Y.append(Y_d)
            self._lead.append(lead)
            self._suffix.append(suffix)
            self.dims.append(h_d)
            self._words.append(None)  # built lazily

    def _relation_kernel_block(self, terms: dict, e: int, d: int) -> np.ndarray:
        """Rows spanning the image of f * A[d-e] inside V (x) A[d-1] coordinates."""
        n, p = self.n, self.field.p
        h_prev, h_lo = self.dims[d - 1], self.dims[d - e]
        by_lead: list[dict] = [dict() for _ in range(n)]
        for w, c in terms.items():
            by_lead[w[0]][w[1:]] = c
        blocks = []
        for i in range(n):
            Q = self._horner_chain(by_lead[i], d - e)
            if Q is None:
                blocks.append(np.zeros((h_lo, h_prev), dtype=np.int64))
            elif np.isscalar(Q):
                blocks.append((Q % p) * np.eye(h_lo, dtype=np.int64))
            else:
                blocks.append(Q.T)
        return np.hstack(blocks)

    def _horner_chain(self, terms: dict, lo: int):
        """sum_w c_w X_{w_1} ... X_{w_L} as a matrix A[lo] -> A[lo + L], or a scalar for L = 0."""
        if not terms:
            return None
        L = len(next(iter(terms)))
        if L == 0:
            return next(iter(terms.values()))
        n, p = self.n, self.field.p
        out = None
        for j in range(n):
            sub = {w[1:]: c for w, c in terms.items() if w[0] == j}
            child = self._horner_chain(sub, lo)
            if child is None:
                continue
            Xj = self.X[lo + L - 1][j]
            contrib = (child % p) * Xj % p if np.isscalar(child) else matmul_mod(Xj, child, p)
            out = contrib if out is None else (out + contrib) % p
        return out

    # -- echelon engine ------------------------------------------------------

    def _build_echelon(self, cap: int):
        self._ideal: list[Subspace] = []
        self._complement: list[np.ndarray] = []
        for d in range(0, self.D + 1):
            if self.n**d > cap:
                raise UsageError(
                    f"echelon engine ambient {self.n ** d} exceeds cap {cap}; use the table engine"
                )
            I = ideal_component(self.pres, d, cap) if d else Subspace(1, self.field)
            mask = np.ones(self.n**d, dtype=bool)
            if d:
                mask[list(I.pivots)] = False
            else:
                mask[:] = True
            comp = np.nonzero(mask)[0]
            self._ideal.append(I)
            self._complement.append(comp)
            if d:
                self.dims.append(int(mask.sum()))
                self._words.append(None)

    def ideal_subspace(self, d: int) -> Subspace:
        if self.engine != "echelon":
            return ideal_component(self.pres, d)
        self._check_degree(d)
        return self._ideal[d]

    # -- shared interface ------------------------------------------------------

    def _check_degree(self, d: int):
        if d > self.D:
            raise TruncationError(f"degree {d} beyond truncation {self.D}")

    def dim(self, d: int) -> int:
        self._check_degree(d)
        return self.dims[d]

    def hilbert_dims(self) -> list[int]:
        return list(self.dims)

    def basis_words(self, d: int) -> list[tuple]:
        """Word labels of the degree-d basis, in coordinate order."""
        self._check_degree(d)
        if self.engine == "free":
            return [index_to_word(i, self.n, d) for i in range(self.n**d)]
        if self._words[d] is None:
            if self.engine == "table":
                prev = self.basis_words(d - 1)
                self._words[d] = [
                    (int(i),) + prev[int(s)] for i, s in zip(self._lead[d], self._suffix[d])
                ]
            else:
                self._words[d] = [index_to_word(int(i), self.n, d) for i in self._complement[d]]
        return self._words[d]

    def nf_word_vector(self, word: tuple) -> np.ndarray:
        """Coordinates of the class of a word on the degree-len(word) basis."""
        d = len(word)
        self._check_degree(d)
        if self.engine == "free":
            v = np.zeros(self.n**d, dtype=np.int64)
            v[word_to_index(word, self.n)] = 1
            return v
        if self.engine == "table":
            p = self.field.p
            v = np.ones((1, 1), dtype=self._dt)
            for k, letter in enumerate(reversed(word)):
                v = matmul_mod(self.X[k][letter], v, p)
            return v[:, 0].astype(np.int64)
        # echelon engine
        dim = self.n**d
        vec = np.zeros(dim, dtype=np.int64) if not self.field.is_exact else {}
        idx = word_to_index(word, self.n)
        if self.field.is_exact:
            vec = {idx: 1}
            red = self._reduce_exact(vec, d)
            comp = {int(c): i for i, c in enumerate(self._complement[d])}
            out = np.zeros(self.dims[d], dtype=object)
            for c, val in red.items():
                out[comp[c]] = val
            return out
        vec[idx] = 1
        red = self._ideal[d].reduce_vector(vec)[0].astype(np.int64)
        return red[self._complement[d]]

    def _reduce_exact(self, vec: dict, d: int) -> dict:
        """Affine reduction of an exact vector against the ideal echelon (unscaled)."""
        from fractions import Fraction

        rows = {min(r): r for r in self._ideal[d].row_dicts()}
        v = {c: Fraction(val) for c, val in vec.items() if val}
        while True:
            hit = next((c for c in sorted(v) if c in rows), None)
            if hit is None:
                return v
            row = rows[hit]
            f = v[hit] / row[hit]
            for c, val in row.items():
                nv = v.get(c, Fraction(0)) - f * val
                if nv:
                    v[c] = nv
                else:
                    v.pop(c, None)

    def nf(self, poly: FreePolynomial) -> FreePolynomial:
        """The representative supported on the complement (tree or non-pivot) basis."""
        if poly.n != self.n or poly.field != self.field:
            raise UsageError("polynomial disagrees with quotient on n or field")
        out = FreePolynomial.zero(self.n, self.field)
        for d in sorted(poly.degrees()):
            self._check_degree(d)
            comp = poly.homogeneous_component(d)
            words = self.basis_words(d)
            acc = None
            for w, c in sorted(comp.terms.items()):
                v = self.nf_word_vector(w)
                if self.field.is_exact:
                    term = v * c
                    acc = term if acc is None else acc + term
                else:
                    term = v * (int(c) % self.field.p)
                    acc = term if acc is None else (acc + term) % self.field.p
            if self.field.is_exact:
                terms = {words[k]: acc[k] for k in range(len(words)) if acc[k]}
            else:
                acc = acc % self.field.p
                terms = {words[k]: int(acc[k]) for k in np.nonzero(acc)[0]}
            out = out + FreePolynomial(self.n, self.field, terms)
        return out
