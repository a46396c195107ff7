"""Free polynomial arithmetic, brackets, and the text syntax."""

from fractions import Fraction

import pytest

from lcslab.freealg import (
    DegreeIndex,
    FieldSpec,
    FreePolynomial,
    UnsupportedCharacteristicError,
    UsageError,
    alt_five_variable_identity_check,
    commutator,
    cube_bracket_identity_check,
    format_polynomial,
    index_to_word,
    jacobi_check,
    leibniz_expansion_check,
    left_normed_bracket,
    parse_polynomial,
    symmetrize3,
    word_to_index,
)


@pytest.fixture
def gens(Q):
    return FreePolynomial.generators(2, Q)


def test_degree_index_roundtrip():
    di = DegreeIndex(3, 4)
    for idx in range(di.size):
        assert di.encode(di.decode(idx)) == idx
    assert di.encode((0, 1, 2, 0)) == 0 * 27 + 1 * 9 + 2 * 3 + 0


def test_multiply_concatenates(gens):
    x, y = gens
    assert (x * y).terms == {(0, 1): Fraction(1)}


def test_unit_law(Q, gens):
    x, _ = gens
    one = FreePolynomial.unit(2, Q)
    p = parse_polynomial("3*xxy - 2*yxy + xyy", 2, Q)
    assert one * p == p == p * one


def test_product_expansion_brute(gens):
    # (x+y)(x-y) expanded by hand
    x, y = gens
    got = (x + y) * (x - y)
    expected = {(0, 0): 1, (0, 1): -1, (1, 0): 1, (1, 1): -1}
    assert got.terms == {w: Fraction(c) for w, c in expected.items()}


def test_degree_additivity(Q):
    p = parse_polynomial("xx + 2*xy", 2, Q)
    q = parse_polynomial("yyy", 2, Q)
    assert (p * q).degree() == 5


def test_commutator_basics(gens):
    x, y = gens
    assert commutator(x, x).is_zero()
    assert commutator(x, y).terms == {(0, 1): Fraction(1), (1, 0): Fraction(-1)}
    # [x,[x,y]] = xxy - 2xyx + yxx, by direct multiplication
    lhs = commutator(x, commutator(x, y))
    rhs = x * x * y - (x * y * x).scale(2) + y * x * x
    assert lhs == rhs


def test_left_normed_bracket_convention(gens):
    x, y = gens
    assert left_normed_bracket([x]) == x
    assert left_normed_bracket([x, y]) == commutator(x, y)
    z = x * y - y * x
    assert left_normed_bracket([x, y, x]) == commutator(x, commutator(y, x))


def test_left_normed_bracket_empty(Q):
    with pytest.raises(UsageError):
        left_normed_bracket([])


def test_mismatched_operands(Q, F):
    x2 = FreePolynomial.generator(2, 0, Q)
    x3 = FreePolynomial.generator(3, 0, Q)
    xf = FreePolynomial.generator(2, 0, F)
    with pytest.raises(UsageError):
        x2 * x3
    with pytest.raises(UsageError):
        x2 * xf


def test_symmetrize3(Q, gens):
    x, y = gens
    one = FreePolynomial.unit(2, Q)
    assert symmetrize3(x, x, x) == x * x * x
    # six-term expansion oracle for S(x, y, 1)
    six = (x * y + x * y + y * x + y * x + x * y + y * x).scale(Fraction(1, 6))
    assert symmetrize3(x, y, one) == six
    assert six == (x * y + y * x).scale(Fraction(1, 2))


def test_symmetrize3_char3():
    F3 = FieldSpec.prime(3, allow_small_char=True)
    x, y = FreePolynomial.generators(2, F3)
    with pytest.raises(UnsupportedCharacteristicError):
        symmetrize3(x, y, x)


def test_field_validation():
    with pytest.raises(UsageError):
        FieldSpec.prime(10)
    with pytest.raises(UsageError):
        FieldSpec.prime(3)
    assert FieldSpec.prime(3, allow_small_char=True).p == 3
    with pytest.raises(UsageError):
        FieldSpec.prime(2**31 + 11)


def test_parse_format_roundtrip(Q, F):
    for field in (Q, F):
        for text in ("3*xxy - 2*yxy + xyy", "x + y", "1/2*xy - 1/2*yx + 1" if field is Q else "xy"):
            p = parse_polynomial(text, 2, field)
            again = parse_polynomial(format_polynomial(p), 2, field)
            assert p == again


def test_parse_numbered_generators(Q):
    p = parse_polynomial("2*x1x2x1 - x2", 4, Q)
    assert p.terms == {(0, 1, 0): Fraction(2), (1,): Fraction(-1)}
    with pytest.raises(UsageError):
        parse_polynomial("x", 4, Q)


def test_vector_roundtrip(F):
    p = parse_polynomial("3*xxy - 2*yxy + xyy", 2, F)
    v = p.to_vector(3)
    assert FreePolynomial.from_vector(v, 2, 3, F) == p


def test_jacobi(Q, F):
    assert jacobi_check(Q, trials=6)
    assert jacobi_check(F, trials=6)


def test_leibniz_expansion(Q):
    for m in (2, 3):
        assert leibniz_expansion_check(m, Q)


def test_leibniz_expansion_modp(F):
    assert leibniz_expansion_check(2, F)


def test_cube_bracket_identity(Q):
    assert cube_bracket_identity_check(Q)
    assert cube_bracket_identity_check(FieldSpec.prime(5))


def test_alt_five_variable_identity(Q):
    assert alt_five_variable_identity_check(Q)


def test_multidegree_word_index():
    from lcslab.freealg import multidegree

    w = (0, 2, 1, 0)
    assert multidegree(w, 3) == (2, 1, 1)
    assert index_to_word(word_to_index(w, 3), 3, 4) == w
