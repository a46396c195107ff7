"""Acceptance criteria, one test per criterion.

Each test prints one PASS line when its assertions hold (run with -s to see
them).  The heavy modular measurements (criteria 3 and 4) run the full
two-seeds-times-two-primes stability grid and take minutes each; setting
LCSLAB_ACCEPT_EXTENDED=1 additionally runs the optional degree 17-19 rows
of criterion 3 (hours).
"""

import os

import numpy as np
import pytest

from conftest import PRIME, SECOND_PRIME
from lcslab.freealg import (
    FieldSpec,
    alt_five_variable_identity_check,
    cube_bracket_identity_check,
    jacobi_check,
    leibniz_expansion_check,
)
from lcslab.fsforms import check_fs_parts
from lcslab.lcs import (
    FreeContext,
    LcsEngine,
    QuotientContext,
    check_b_generation,
    check_fs3,
    check_m2_power,
    check_polylinear_identities,
    check_product_inclusion,
    vanishing_report,
)
from lcslab.linalg import Subspace
from lcslab.presented import GradedQuotient, presentation_from_degrees
from lcslab.series import (
    TruncSeries,
    c_series,
    extract_exponents,
    necklace_count,
    positivity_threshold,
    quotient_hilbert_series,
    witt,
)

SEEDS = (0, 1)
PRIMES = (PRIME, SECOND_PRIME)
EXTENDED = os.environ.get("LCSLAB_ACCEPT_EXTENDED") == "1"


def ok(name):
    print(f"ACCEPTANCE {name}: PASS")


@pytest.fixture(scope="module")
def cubic12():
    pres = presentation_from_degrees(2, [3], SEEDS[0], FieldSpec.prime(PRIME))
    q = GradedQuotient(pres, 12, engine="table")
    return q, LcsEngine(QuotientContext(q), 12)


@pytest.fixture(scope="module")
def free_engines():
    out = {}
    for n, D in ((2, 8), (3, 7)):
        for field in (FieldSpec.prime(PRIME), FieldSpec.rationals()):
            out[(n, str(field))] = LcsEngine(FreeContext(n, field, blocked=True), D)
    return out


def test_c01_witt_numbers():
    assert [witt(2, d) for d in (16, 17, 18, 19)] == [4080, 7710, 14532, 27594]
    ok("C1 witt numbers 4080/7710/14532/27594")


def test_c02_commutator_series_and_linalg_route(cubic12):
    c = c_series(3, 19)
    assert [c[d] for d in (16, 17, 18, 19)] == [4036, 6552, 10615, 17216]
    q, engine = cubic12
    for d in range(2, 13):
        assert engine.dim_L(2, d) == c[d], d
    ok("C2 commutator dims: series values exact, linear-algebra route equal through 12")


def test_c03_psi_rank_degree_16_stability_grid():
    from lcslab.freelie import psi_table

    degrees = [16] + ([17, 18, 19] if EXTENDED else [])
    rows = psi_table(
        2, degrees, [3], seeds=SEEDS, primes=PRIMES,
        method="chain", c_route="linalg" if not EXTENDED else "auto",
    )
    by_d = {r["d"]: r for r in rows}
    assert by_d[16]["stable"]
    assert (by_d[16]["rank"], by_d[16]["coker"]) == (4031, 5)
    if EXTENDED:
        expected = {17: (6548, 4), 18: (10610, 5), 19: (17212, 4)}
        for d, (rank, coker) in expected.items():
            assert by_d[d]["stable"]
            assert (by_d[d]["rank"], by_d[d]["coker"]) == (rank, coker)
    ok("C3 free-Lie image rank 4031 / cokernel 5 at degree 16, stable over 2 seeds x 2 primes")


def test_c04_two_relation_surjectivity():
    from lcslab.freelie import psi_rank, twocon_check

    records = {}
    twocon = None
    for seed in SEEDS:
        for p in PRIMES:
            pres = presentation_from_degrees(2, [3, 8], seed, FieldSpec.prime(p))
            q = GradedQuotient(pres, 16, engine="table")
            engine = LcsEngine(QuotientContext(q), 16)
            recs = {d: psi_rank(q, d, engine=engine, c_route="linalg") for d in (15, 16)}
            records[(seed, p)] = {d: (r["c"], r["rank"]) for d, r in recs.items()}
            if twocon is None:
                twocon = twocon_check(q, 16, engine=engine)
    reference = records[(SEEDS[0], PRIMES[0])]
    assert all(rec == reference for rec in records.values()), "unstable across seeds/primes"
    assert reference[15] == (1974, 1974)
    assert reference[16] == (3045, 3045)
    assert twocon["applicable"] and twocon["surjective"] == {15: True, 16: True}
    ok("C4 twin-relation map onto in degrees 15 and 16, ranks 1974 and 3045")


def test_c05_quotient_hilbert_series_degree_16():
    pres = presentation_from_degrees(2, [3], SEEDS[0], FieldSpec.prime(PRIME))
    q = GradedQuotient(pres, 16, engine="table")
    expected = list(quotient_hilbert_series([3], 16).coeffs)
    assert q.hilbert_dims() == expected
    assert expected[-2:] == [2583, 4180]
    ok("C5 generic-cubic quotient dims match 1/(1-2t+t^3) through degree 16")


def test_c06_b2_row_of_cubic_quotient(cubic12):
    q, engine = cubic12
    b2 = [engine.dim_L(2, d) - engine.dim_L(3, d) for d in range(2, 13)]
    assert b2[:3] == [1, 2, 1]
    assert all(v == 0 for v in b2[3:])
    ok("C6 quotient B_2 dims (1, 2, 1) then zero through degree 12")


def test_c07_even_forms_suite():
    for n, D in ((2, 8), (3, 6)):
        rep = check_fs_parts(n, D)
        for d, entry in rep["per_degree"].items():
            assert entry["kernel_is_M3"], (n, d)
            assert entry["M2_hits_positive_even"], (n, d)
            assert entry["L2_hits_exact_even"], (n, d)
            assert entry["B1bar_matches_nonexact"], (n, d)
            if n == 2:
                assert entry["dim_A_mod_M3"] == 2 * d
    ok("C7 even-forms realization: kernel/image checks pass, quotient dims 2d for n=2")


def test_c08_l2_meet_m3_equals_l3(free_engines):
    for n, D in ((2, 8), (3, 7)):
        rep = check_fs3(free_engines[(n, "Q")], D)
        assert all(e["equal"] for e in rep["per_degree"].values()), n
    ok("C8 L_2 meet M_3 = L_3 per degree (n=2 to 8, n=3 to 7, exact)")


def test_c09_inclusion_theorem_suite(free_engines):
    grids = ((2, 8), (3, 7))
    for n, D in grids:
        for field_key in (f"F_{PRIME}", "Q"):
            engine = free_engines[(n, field_key)]
            for i, j in ((2, 2), (2, 3), (3, 3)):
                strong = (i + j) % 2 == 1
                rep = check_product_inclusion(engine, i, j, D, strong=strong)
                for d, e in rep["per_degree"].items():
                    assert e["weak_defect"] == 0, (n, field_key, i, j, d)
                    if strong:
                        assert e["strong_defect"] == 0, (n, field_key, i, j, d)
            rep = check_m2_power(engine, 2, D)
            assert all(e["defect"] == 0 for e in rep["per_degree"].values()), (n, field_key)
            for m in (2, 3, 4):
                rep = check_b_generation(engine, m, D)
                assert all(e["equal"] for e in rep["per_degree"].values()), (n, field_key, m)
    ok("C9 product inclusions, square of second ideal, and bracket generation: zero defects")


def test_c10_characteristic_sensitivity():
    expectations = [
        (FieldSpec.rationals(), True),
        (FieldSpec.prime(2, True), True),
        (FieldSpec.prime(5), True),
        (FieldSpec.prime(3, True), False),
    ]
    for field, in_l4 in expectations:
        rep = check_polylinear_identities(field)
        assert rep["in_L3"], field
        assert rep["in_L4"] == in_l4, field
    ok("C10 [x[y,z,u],v] in L_3 always; in L_4 over Q, F_2, F_5; not over F_3")


def test_c11_identity_suite():
    Q = FieldSpec.rationals()
    assert cube_bracket_identity_check(Q)
    assert alt_five_variable_identity_check(Q)
    assert leibniz_expansion_check(2, Q)
    assert leibniz_expansion_check(3, Q)
    ok("C11 exact bracket identities (cube, antisymmetrized five-variable, Leibniz)")


def test_c12_positivity_threshold():
    threshold, evidence = positivity_threshold(3, 64)
    assert threshold == 8
    assert all(n in evidence for n in range(1, 8))
    ok("C12 smallest all-positive tail degree is 8 (witnesses for 1..7)")


def test_c13_vanishing_bounds(cubic12):
    q, engine = cubic12
    rep = vanishing_report(engine, 3, 3, 12)
    assert rep["violations"] == []
    for row in rep["rows"]:
        m = row["m"]
        bound = 2 * 3 + 2 * m - 5
        assert all(row["B_dims"][r] == 0 for r in range(bound, 13)), m
        assert "conjecture_holds_B" in row  # reported, never asserted
    ok("C13 proven vanishing bounds hold for m = 2, 3; conjectural bound report-only")


def test_c14_property_suites():
    Q = FieldSpec.rationals()
    F = FieldSpec.prime(PRIME)
    assert jacobi_check(Q) and jacobi_check(F)

    from lcslab.fsforms import DifferentialForm, de_rham, form_basis, star

    keys = form_basis(2, 4, "all")
    import random

    rng = random.Random(1)
    for _ in range(8):
        f = DifferentialForm(2, Q, {k: rng.randint(-3, 3) for k in rng.sample(keys, 3)})
        assert de_rham(de_rham(f)).is_zero()
    evens = [
        DifferentialForm.coordinate(2, 0, Q),
        DifferentialForm.coordinate(2, 1, Q),
        DifferentialForm(2, Q, {((0, 0), 3): 1}),
    ]
    for a in evens:
        for b in evens:
            for c in evens:
                assert star(star(a, b), c) == star(a, star(b, c))

    D = 30
    assert extract_exponents(TruncSeries.from_list([1, -2], D)) == [
        witt(2, d) for d in range(1, D + 1)
    ]
    prod = TruncSeries.one(D)
    for k in range(1, D + 1):
        prod = prod * TruncSeries.from_list([1] + [0] * (k - 1) + [-3], D)
    assert extract_exponents(prod) == [necklace_count(3, d) for d in range(1, D + 1)]

    rng2 = np.random.default_rng(2)
    for _ in range(6):
        S1 = Subspace.span(rng2.integers(0, PRIME, (5, 11)), 11, F)
        S2 = Subspace.span(rng2.integers(0, PRIME, (4, 11)), 11, F)
        assert S1.sum(S2).rank + S1.intersect(S2).rank == S1.rank + S2.rank
    ok("C14 standalone property suites: Jacobi, d^2 = 0, star associativity, extraction, modularity")
