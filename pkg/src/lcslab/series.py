"""Truncated integer power series and the counting identities built on them.

Everything here is exact arbitrary-precision integer arithmetic; results of
an operation are valid through the smaller truncation order of its operands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "TruncSeries",
    "extract_exponents",
    "necklace_count",
    "witt",
    "b_series",
    "c_series",
    "quotient_hilbert_series",
    "positivity_threshold",
    "rationality_check",
]

DEFAULT_TRUNCATION = 64


@dataclass(frozen=True)
class TruncSeries:
    """Integer power series truncated at degree D (inclusive)."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @property
    def D(self) -> int:
        return len(self.coeffs) - 1

    @staticmethod
    def from_list(coeffs, D=None) -> "TruncSeries":
        coeffs = list(coeffs)
        if D is not None:
            coeffs = (coeffs + [0] * (D + 1))[: D + 1]
        return TruncSeries(tuple(coeffs))

    @staticmethod
    def one(D: int) -> "TruncSeries":
        return TruncSeries((1,) + (0,) * D)

    @staticmethod
    def monomial(coeff: int, deg: int, D: int) -> "TruncSeries":
        c = [0] * (D + 1)
        if deg <= D:
            c[deg] = coeff
        return TruncSeries(tuple(c))

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k]

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        D = min(self.D, other.D)
        return TruncSeries(tuple(self.coeffs[k] + other.coeffs[k] for k in range(D + 1)))

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        D = min(self.D, other.D)
        return TruncSeries(tuple(self.coeffs[k] - other.coeffs[k] for k in range(D + 1)))

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        D = min(self.D, other.D)
        out = [0] * (D + 1)
        for i, a in enumerate(self.coeffs[: D + 1]):
            if a == 0:
                continue
            for j in range(0, D + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] += a * b
        return TruncSeries(tuple(out))

    def scale(self, c: int) -> "TruncSeries":
        return TruncSeries(tuple(c * a for a in self.coeffs))

    def inverse(self) -> "TruncSeries":
        """Multiplicative inverse; the constant term must be +1 or -1."""
        a0 = self.coeffs[0]
        if a0 not in (1, -1):
            raise ValueError(f"series inverse needs constant term +-1, got {a0}")
        D = self.D
        out = [0] * (D + 1)
        out[0] = a0
        for k in range(1, D + 1):
            s = sum(self.coeffs[j] * out[k - j] for j in range(1, k + 1))
            out[k] = -a0 * s
        return TruncSeries(tuple(out))

    def truncate(self, D: int) -> "TruncSeries":
        return TruncSeries.from_list(self.coeffs, D)


def _binom(e: int, j: int) -> int:
    # binomial coefficient with possibly negative integer top argument
    if j < 0:
        return 0
    if e >= 0:
        return math.comb(e, j)
    return (-1) ** j * math.comb(-e + j - 1, j)


def _one_minus_tk_pow(k: int, e: int, D: int) -> TruncSeries:
    """(1 - t^k)^e for any integer e, expanded through degree D."""
    out = [0] * (D + 1)
    for j in range(0, D // k + 1):
        out[k * j] = _binom(e, j) * (-1) ** j
    return TruncSeries(tuple(out))


def extract_exponents(F: TruncSeries) -> list[int]:
    """Exponents e_1..e_D with prod_i (1 - t^i)^(e_i) = F mod t^(D+1).

    The e_i are determined degree by degree: after dividing out the factors
    of index < k, the residual series is 1 - e_k t^k + O(t^(k+1)).
    """
    if F.coeffs[0] != 1:
        raise ValueError("exponent extraction needs constant term 1")
    D = F.D
    residual = F
    exps = []
    for k in range(1, D + 1):
        e_k = -residual.coeffs[k]
        exps.append(e_k)
        if e_k:
            residual = residual * _one_minus_tk_pow(k, -e_k, D)
    return exps


def _sieve_mobius(D: int) -> list[int]:
    mu = [0] * (D + 1)
    if D >= 1:
        mu[1] = 1
    primes = []
    is_comp = [False] * (D + 1)
    for i in range(2, D + 1):
        if not is_comp[i]:
            primes.append(i)
            mu[i] = -1
        for q in primes:
            if i * q > D:
                break
            is_comp[i * q] = True
            if i % q == 0:
                mu[i * q] = 0
                break
            mu[i * q] = -mu[i]
    return mu


def _sieve_totient(D: int) -> list[int]:
    phi = list(range(D + 1))
    for i in range(2, D + 1):
        if phi[i] == i:  # i prime
            for j in range(i, D + 1, i):
                phi[j] -= phi[j] // i
    return phi


def necklace_count(n: int, d: int) -> int:
    """Number of length-d words over n letters up to cyclic rotation."""
    if n < 1 or d < 1:
        raise ValueError("necklace_count needs n >= 1, d >= 1")
    phi = _sieve_totient(d)
    return sum(phi[e] * n ** (d // e) for e in range(1, d + 1) if d % e == 0) // d


def witt(n: int, d: int) -> int:
    """Dimension of the degree-d part of the free Lie algebra on n letters."""
    if n < 1 or d < 1:
        raise ValueError("witt needs n >= 1, d >= 1")
    mu = _sieve_mobius(d)
    return sum(mu[e] * n ** (d // e) for e in range(1, d + 1) if d % e == 0) // d


def quotient_hilbert_series(relation_degrees, D: int) -> TruncSeries:
    """1 / (1 - 2t + sum_j t^(d_j)) expanded through degree D.

    Generic-quotient Hilbert series for two generators and homogeneous
    relations of the given degrees (empty list gives the free algebra).
    """
    denom = [0] * (D + 1)
    denom[0] = 1
    denom[1] = -2
    for dj in relation_degrees:
        if dj <= D:
            denom[dj] += 1
    return TruncSeries(tuple(denom)).inverse()


def b_series(d_relation: int, D: int) -> list[int]:
    """Graded dims b_i of A/[A,A] for one generic relation of degree d.

    Determined by prod_i (1 - t^i)^(b_i) = prod_s (1 - 2t^s + t^(d*s)).
    Returns [b_0..b_D] with b_0 = 1 by convention.
    """
    prod = TruncSeries.one(D)
    for s in range(1, D + 1):
        factor = [0] * (D + 1)
        factor[0] = 1
        if s <= D:
            factor[s] -= 2
        if d_relation * s <= D:
            factor[d_relation * s] += 1
        prod = prod * TruncSeries(tuple(factor))
    exps = extract_exponents(prod)
    return [1] + exps


def c_series(d_relation: int, D: int) -> list[int]:
    """Graded dims c_i of [A,A] for one generic relation of degree d.

    c_i = [t^i] 1/(1 - 2t + t^d) - b_i; entries at i = 0, 1 are zero.
    Returns [c_0..c_D].
    """
    h = quotient_hilbert_series([d_relation], D)
    b = b_series(d_relation, D)
    out = [h[i] - b[i] for i in range(D + 1)]
    assert out[0] == 0 and out[1] == 0
    return out


def positivity_threshold(d: int = 3, D: int = DEFAULT_TRUNCATION, n_cap: int = 32):
    """Smallest n with all coefficients of 1/(1 - 2t + t^d + t^n) positive.

    Positivity is tested through degree D. Returns (threshold, evidence)
    where evidence maps each rejected n to its first nonpositive degree.
    """
    evidence = {}
    for m in range(1, n_cap + 1):
        denom = [0] * (D + 1)
        denom[0] = 1
        denom[1] = -2
        denom[d] += 1
        if m <= D:
            denom[m] += 1
        inv = TruncSeries(tuple(denom)).inverse()
        bad = next((k for k in range(D + 1) if inv[k] <= 0), None)
        if bad is None:
            return m, evidence
        evidence[m] = bad
    raise ValueError(f"no all-positive member found with n <= {n_cap}")


def rationality_check(dims, n: int, m: int, kind: str = "B") -> dict:
    """Multiply a B_m (or N_m) dimension row by (1-t)^n and inspect the result.

    The numerator coefficients are trusted only through degree D - n, where D
    is the truncation of the input row. Verdict requires nonnegative integer
    coefficients there, vanishing above the degree bound; the bound applies
    for m >= 3, lower m is reported without enforcement.
    """
    if kind not in ("B", "N"):
        raise ValueError("kind must be 'B' or 'N'")
    dims = list(dims)
    D = len(dims) - 1
    series = TruncSeries(tuple(dims))
    numer = series * _one_minus_tk_pow(1, n, D)
    valid = D - n
    bound = (2 * m - 3 if kind == "B" else 2 * m - 2) + 2 * ((n - 2) // 2)
    coeffs = list(numer.coeffs[: valid + 1])
    nonneg = all(c >= 0 for c in coeffs)
    vanish = all(c == 0 for k, c in enumerate(coeffs) if k > bound)
    return {
        "numerator": coeffs,
        "degree_bound": bound,
        "valid_through": valid,
        "nonnegative": nonneg,
        "vanishes_above_bound": vanish,
        "bound_enforced": m >= 3,
        "ok": nonneg and (vanish or m < 3),
    }
