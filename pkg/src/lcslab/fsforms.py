"""Polynomial differential forms with the star product alpha*beta = alpha^beta + (1/2)dalpha^dbeta.

Terms are indexed by (exponent vector, index-subset bitmask); both x_i and
dx_i carry degree 1, so the algebra map sending x_i to x_i preserves total
degree.  Even forms under star are associative and satisfy [[a,b],c] = 0,
which makes them the target of the quotient by the third ideal filtration
step; the checks in this module verify that picture degree by degree.
"""

from __future__ import annotations

from .freealg import FieldSpec, FreePolynomial, UnsupportedCharacteristicError, UsageError
from .lcs import FreeContext, LcsEngine
from .linalg import Subspace

__all__ = [
    "DifferentialForm",
    "wedge",
    "de_rham",
    "star",
    "phi",
    "form_basis",
    "check_fs_parts",
    "check_contraction_kernel",
]


def _mask_sign(m1: int, m2: int) -> int:
    """Sign of sorting dx-factors of m1 before m2 (0 if they overlap)."""
    if m1 & m2:
        return 0
    inversions = 0
    m = m1
    while m:
        low = m & -m
        inversions += bin(m2 & (low - 1)).count("1")
        m ^= low
    return -1 if inversions % 2 else 1


class DifferentialForm:
    """Element of the polynomial de Rham complex on n coordinates."""

    __slots__ = ("n", "field", "terms")

    def __init__(self, n: int, field: FieldSpec, terms: dict | None = None):
        self.n = n
        self.field = field
        clean = {}
        for (alpha, mask), c in (terms or {}).items():
            c = field.normalize(c)
            if c != field.zero():
                clean[(tuple(alpha), int(mask))] = c
        self.terms = clean

    @staticmethod
    def zero(n, field) -> "DifferentialForm":
        return DifferentialForm(n, field)

    @staticmethod
    def one(n, field) -> "DifferentialForm":
        return DifferentialForm(n, field, {((0,) * n, 0): 1})

    @staticmethod
    def coordinate(n, i, field) -> "DifferentialForm":
        alpha = [0] * n
        alpha[i] = 1
        return DifferentialForm(n, field, {(tuple(alpha), 0): 1})

    def _check(self, other):
        if self.n != other.n or self.field != other.field:
            raise UsageError("forms disagree on n or field")

    def __eq__(self, other):
        return (
            isinstance(other, DifferentialForm)
            and (self.n, self.field, self.terms) == (other.n, other.field, other.terms)
        )

    def __add__(self, other):
        self._check(other)
        f = self.field
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = f.add(out.get(k, f.zero()), c)
        return DifferentialForm(self.n, f, out)

    def __neg__(self):
        f = self.field
        return DifferentialForm(self.n, f, {k: f.neg(c) for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        f = self.field
        c = f.normalize(c)
        return DifferentialForm(self.n, f, {k: f.mul(v, c) for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def total_degrees(self) -> set:
        return {sum(a) + bin(m).count("1") for (a, m) in self.terms}

    def form_ranks(self) -> set:
        return {bin(m).count("1") for (_, m) in self.terms}

    def component(self, total_degree: int) -> "DifferentialForm":
        return DifferentialForm(
            self.n,
            self.field,
            {
                (a, m): c
                for (a, m), c in self.terms.items()
                if sum(a) + bin(m).count("1") == total_degree
            },
        )

    def is_even(self) -> bool:
        return all(r % 2 == 0 for r in self.form_ranks())


def wedge(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    a._check(b)
    f = a.field
    out: dict = {}
    for (al, m1), c1 in a.terms.items():
        for (be, m2), c2 in b.terms.items():
            s = _mask_sign(m1, m2)
            if s == 0:
                continue
            key = (tuple(x + y for x, y in zip(al, be)), m1 | m2)
            c = f.mul(c1, c2)
            if s < 0:
                c = f.neg(c)
            out[key] = f.add(out.get(key, f.zero()), c)
    return DifferentialForm(a.n, f, out)


def de_rham(a: DifferentialForm) -> DifferentialForm:
    """Exterior derivative: graded Leibniz rule, d(dx) = 0."""
    f = a.field
    out: dict = {}
    for (alpha, mask), c in a.terms.items():
        for i in range(a.n):
            if alpha[i] == 0 or (mask >> i) & 1:
                continue
            # dx_i wedged in front of the existing factors below index i
            below = bin(mask & ((1 << i) - 1)).count("1")
            s = -1 if below % 2 else 1
            newalpha = list(alpha)
            newalpha[i] -= 1
            coeff = f.mul(c, f.normalize(alpha[i]))
            if s < 0:
                coeff = f.neg(coeff)
            key = (tuple(newalpha), mask | (1 << i))
            out[key] = f.add(out.get(key, f.zero()), coeff)
    return DifferentialForm(a.n, f, out)


def star(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    """a^b + (1/2) da^db; associative, noncommutative on even forms."""
    if a.field.characteristic == 2:
        raise UnsupportedCharacteristicError("the star product needs 1/2")
    half = a.field.div_int(1, 2)
    return wedge(a, b) + wedge(de_rham(a), de_rham(b)).scale(half)


def star_commutator(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    return star(a, b) - star(b, a)


def phi(p: FreePolynomial) -> DifferentialForm:
    """The algebra map from the free algebra sending x_i to x_i (star target)."""
    out = DifferentialForm.zero(p.n, p.field)
    for w, c in sorted(p.terms.items()):
        if w:
            form = DifferentialForm.coordinate(p.n, w[-1], p.field)
            for letter in reversed(w[:-1]):
                form = star(DifferentialForm.coordinate(p.n, letter, p.field), form)
        else:
            form = DifferentialForm.one(p.n, p.field)
        out = out + form.scale(c)
    return out


def form_basis(n: int, total_degree: int, parity: str = "all") -> list:
    """(exponent, mask) basis keys of the total-degree component, sorted."""
    out = []
    for mask in range(1 << n):
        r = bin(mask).count("1")
        if parity == "even" and r % 2:
            continue
        if parity == "odd" and r % 2 == 0:
            continue
        poly_deg = total_degree - r
        if poly_deg < 0:
            continue
        for alpha in _exponents(n, poly_deg):
            out.append((alpha, mask))
    return sorted(out)


def _exponents(n: int, d: int):
    if n == 1:
        yield (d,)
        return
    for first in range(d + 1):
        for rest in _exponents(n - 1, d - first):
            yield (first,) + rest


def form_vector(form: DifferentialForm, basis_index: dict, field: FieldSpec):
    if field.is_exact:
        return {basis_index[k]: c for k, c in form.terms.items()}
    return {basis_index[k]: int(c) for k, c in form.terms.items()}


def _exact_even_dim(n: int, d: int, field: FieldSpec) -> int:
    """dim of exact even forms of total degree d = rank of d on odd forms."""
    odd = form_basis(n, d, "odd")
    even = form_basis(n, d, "even")
    even_index = {k: i for i, k in enumerate(even)}
    S = Subspace(len(even), field)
    for alpha, mask in odd:
        img = de_rham(DifferentialForm(n, field, {(alpha, mask): 1}))
        S.add([form_vector(img, even_index, field)])
    return S.rank


def check_fs_parts(n: int, D: int, field: FieldSpec | None = None) -> dict:
    """Degreewise verification of the quotient-to-even-forms picture.

    Per degree d: (1) the kernel of the map on the degree-d component is
    exactly M_3[d] and the image fills the even forms; (2) the image of
    M_2[d] is the positive-rank even forms; (4) the image of L_2[d] is the
    exact even forms; (5) dim B_1[d] - dim Z[d] matches the non-exact even
    forms, Z the image of M_3 in B_1.
    """
    field = field or FieldSpec.rationals()
    ctx = FreeContext(n, field, blocked=True)
    engine = LcsEngine(ctx, D)
    out = {"n": n, "D": D, "field": str(field), "per_degree": {}}
    for d in range(1, D + 1):
        even = form_basis(n, d, "even")
        even_index = {k: i for i, k in enumerate(even)}
        dim_even = len(even)
        dim_even_pos = sum(1 for (_, m) in even if m)
        dim_exact = _exact_even_dim(n, d, field)

        image = Subspace(dim_even, field)          # phi(A[d])
        image_m2 = Subspace(dim_even, field)       # phi(M_2[d])
        image_l2 = Subspace(dim_even, field)       # phi(L_2[d])
        m3_in_kernel = True
        l2_image_exact = True
        m2_image_positive = True
        dim_m3 = 0
        dim_m3_plus_l2 = 0
        for cell in ctx.cells_of_degree(d):
            idx = ctx.cell_indices(cell)
            cols = []
            for g in idx:
                w = tuple(_digits(int(g), n, ctx.degree_of(cell)))
                cols.append(phi(FreePolynomial(n, field, {w: 1})))
            image.add([form_vector(fm, even_index, field) for fm in cols])

            M3 = engine.M(3, cell)
            dim_m3 += M3.rank
            dim_m3_plus_l2 += M3.sum(engine.L(2, cell)).rank
            for row in M3.row_dicts():
                fm = _combine(cols, row, n, field)
                if not fm.is_zero():
                    m3_in_kernel = False

            M2 = engine.M(2, cell)
            vecs = []
            for row in M2.row_dicts():
                fm = _combine(cols, row, n, field)
                vecs.append(form_vector(fm, even_index, field))
                if any(m == 0 for (_, m) in fm.terms):
                    m2_image_positive = False
            image_m2.add(vecs)

            L2 = engine.L(2, cell)
            vecs = []
            for row in L2.row_dicts():
                fm = _combine(cols, row, n, field)
                vecs.append(form_vector(fm, even_index, field))
                if any(m == 0 for (_, m) in fm.terms) or not de_rham(fm).is_zero():
                    l2_image_exact = False
            image_l2.add(vecs)

        part1 = (
            m3_in_kernel
            and image.rank == dim_even
            and dim_m3 == n**d - dim_even
        )
        part2 = m2_image_positive and image_m2.rank == dim_even_pos
        part4 = l2_image_exact and image_l2.rank == dim_exact
        part5 = (n**d - dim_m3_plus_l2) == dim_even - dim_exact
        out["per_degree"][d] = {
            "kernel_is_M3": part1,
            "M2_hits_positive_even": part2,
            "L2_hits_exact_even": part4,
            "B1bar_matches_nonexact": part5,
            "dim_A_mod_M3": dim_even,
        }
    return out


def _digits(g: int, n: int, d: int) -> list:
    out = [0] * d
    for k in range(d - 1, -1, -1):
        g, out[k] = divmod(g, n)
    return out


def _combine(cols, row: dict, n: int, field: FieldSpec) -> DifferentialForm:
    out = DifferentialForm.zero(n, field)
    for c, val in row.items():
        out = out + cols[c].scale(val)
    return out


def check_contraction_kernel(n: int, d: int, field: FieldSpec | None = None) -> dict:
    """Kernel of (alpha_i) -> sum_i d(alpha_i)^dx_i against its three spanning families.

    The families: closed forms in any slot; beta^dx_i in slot i and the
    symmetric pairs beta^dx_j (x) e_i + beta^dx_i (x) e_j; gradients of
    functions.  Verified by comparing spans and ranks on the degree-d part.
    """
    field = field or FieldSpec.rationals()
    dom = form_basis(n, d, "all")
    dom_index = {k: i for i, k in enumerate(dom)}
    tgt = form_basis(n, d + 1, "all")
    tgt_index = {k: i for i, k in enumerate(tgt)}
    dim_dom = len(dom) * n

    def zeta_vec(slot_forms):
        img = DifferentialForm.zero(n, field)
        for i, fm in enumerate(slot_forms):
            img = img + wedge(de_rham(fm), _dx(n, i, field))
        return form_vector(img, tgt_index, field)

    def slots_of_row(row):
        slots = [DifferentialForm.zero(n, field) for _ in range(n)]
        for c, val in row.items():
            i, k = divmod(c, len(dom))
            slots[i] = slots[i] + DifferentialForm(n, field, {dom[k]: val})
        return slots

    # rank of the contraction map
    zeta = Subspace(len(tgt), field)
    for i in range(n):
        for key in dom:
            slots = [DifferentialForm.zero(n, field)] * n
            slots[i] = DifferentialForm(n, field, {key: 1})
            zeta.add([zeta_vec(slots)])
    dim_ker = dim_dom - zeta.rank

    def tensor_vec(slot_forms):
        vec: dict = {}
        for i, fm in enumerate(slot_forms):
            for k, c in form_vector(fm, dom_index, field).items():
                vec[i * len(dom) + k] = c
        return vec

    span = Subspace(dim_dom, field)
    # (1) closed forms in a single slot
    closed = _closed_basis(n, d, field, dom, dom_index)
    for i in range(n):
        for row in closed:
            span.add([{i * len(dom) + k: v for k, v in row.items()}])
    # (2) beta ^ dx_i tensor e_i, and the symmetrized off-diagonal pairs
    for beta_key in form_basis(n, d - 1, "all"):
        beta = DifferentialForm(n, field, {beta_key: 1})
        for i in range(n):
            slots = [DifferentialForm.zero(n, field)] * n
            slots[i] = wedge(beta, _dx(n, i, field))
            span.add([tensor_vec(slots)])
            for j in range(i + 1, n):
                slots = [DifferentialForm.zero(n, field)] * n
                slots[i] = wedge(beta, _dx(n, j, field))
                slots[j] = wedge(beta, _dx(n, i, field))
                span.add([tensor_vec(slots)])
    # (3) gradients
    for alpha in _exponents(n, d + 1):
        f0 = DifferentialForm(n, field, {(alpha, 0): 1})
        grad = []
        for i in range(n):
            gi = de_rham(f0)
            # partial derivative: the dx_i component of df
            comp = DifferentialForm(
                n,
                field,
                {
                    (a, 0): c
                    for (a, m), c in gi.terms.items()
                    if m == (1 << i)
                },
            )
            grad.append(comp)
        span.add([tensor_vec(grad)])

    in_kernel = all(not zeta_vec(slots_of_row(r)) for r in span.row_dicts())

    return {
        "n": n,
        "d": d,
        "kernel_dim": dim_ker,
        "span_dim": span.rank,
        "span_is_kernel": span.rank == dim_ker and in_kernel,
    }


def _dx(n: int, i: int, field: FieldSpec) -> DifferentialForm:
    return DifferentialForm(n, field, {((0,) * n, 1 << i): 1})


def _closed_basis(n: int, d: int, field: FieldSpec, dom, dom_index) -> list:
    """Kernel of d on the degree-d component, as rows over the dom index.

    Echelonizes the graph rows [d(v) | v] with target columns first; rows
    whose pivot falls in the source part have zero image, and those span the
    kernel.  The exterior derivative preserves total degree, so source and
    target run over the same degree.
    """
    tgt = form_basis(n, d, "all")
    tgt_index = {k: i for i, k in enumerate(tgt)}
    graph = Subspace(len(tgt) + len(dom), field)
    for k, key in enumerate(dom):
        img = de_rham(DifferentialForm(n, field, {key: 1}))
        vec = dict(form_vector(img, tgt_index, field))
        vec[len(tgt) + k] = field.one() if field.is_exact else 1
        graph.add([vec])
    out = []
    for piv, row in zip(graph.pivots, graph.row_dicts()):
        if piv >= len(tgt):
            out.append({c - len(tgt): v for c, v in row.items()})
    return out
