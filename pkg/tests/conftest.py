"""Shared fixtures and an independent rational row-reduction oracle."""

from fractions import Fraction

import pytest

from lcslab.freealg import FieldSpec

PRIME = 1048573
SECOND_PRIME = 1048583


@pytest.fixture(scope="session")
def F():
    return FieldSpec.prime(PRIME)


@pytest.fixture(scope="session")
def F2():
    return FieldSpec.prime(SECOND_PRIME)


@pytest.fixture(scope="session")
def Q():
    return FieldSpec.rationals()


def fraction_rank(rows):
    """Plain Gauss elimination over Fraction lists; the reference for ranks."""
    M = [[Fraction(x) for x in row] for row in rows]
    if not M:
        return 0
    ncols = len(M[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = Fraction(1) / M[r][c]
        M[r] = [v * inv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
    return r
