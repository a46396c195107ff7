"""Words, coefficient fields, and free noncommutative polynomial arithmetic.

Words over n generators are plain tuples of letter indices in [0, n); the
empty tuple is the unit monomial. Polynomials are sparse term maps over an
exact coefficient field: the rationals, or a prime field F_p.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "UsageError",
    "UnsupportedCharacteristicError",
    "FieldSpec",
    "DegreeIndex",
    "Word",
    "FreePolynomial",
    "word_to_index",
    "index_to_word",
    "multidegree",
    "multiply",
    "commutator",
    "left_normed_bracket",
    "symmetrize3",
    "parse_polynomial",
    "format_polynomial",
    "is_prime",
]

Word = tuple  # a word is a tuple of generator indices

EXACT = "exact-rational"
PRIME = "prime-field"

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class UsageError(ValueError):
    """Caller violated an operation's preconditions."""


class UnsupportedCharacteristicError(UsageError):
    """Operation needs an invertible element the field does not have."""


def is_prime(p: int) -> bool:
    """Deterministic Miller-Rabin, exact for p below 3.3 * 10^24."""
    if p < 2:
        return False
    for q in _MR_WITNESSES:
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: exact rationals, or F_p for a prime p < 2^31.

    Primes p <= 3 are admitted only on request (characteristic-specific
    checks); the default floor keeps 1/6 invertible.
    """

    kind: str
    p: int | None = None

    @staticmethod
    def rationals() -> "FieldSpec":
        return FieldSpec(EXACT, None)

    @staticmethod
    def prime(p: int, allow_small_char: bool = False) -> "FieldSpec":
        if not is_prime(p):
            raise UsageError(f"{p} is not prime")
        if p >= 1 << 31:
            raise UsageError("prime moduli must be below 2^31")
        if p <= 3 and not allow_small_char:
            raise UsageError("p <= 3 needs an explicit characteristic-specific request")
        return FieldSpec(PRIME, p)

    @property
    def is_exact(self) -> bool:
        return self.kind == EXACT

    @property
    def characteristic(self) -> int:
        return 0 if self.is_exact else self.p

    def zero(self):
        return Fraction(0) if self.is_exact else 0

    def one(self):
        return Fraction(1) if self.is_exact else 1

    def normalize(self, c):
        if self.is_exact:
            return c if isinstance(c, Fraction) else Fraction(c)
        return int(c) % self.p

    def add(self, a, b):
        return a + b if self.is_exact else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.is_exact else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.is_exact else (a * b) % self.p

    def neg(self, a):
        return -a if self.is_exact else (-a) % self.p

    def inv(self, a):
        if self.is_exact:
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            return 1 / Fraction(a)
        return pow(int(a), -1, self.p)

    def div_int(self, a, k: int):
        """a / k for an integer k; fails in characteristic dividing k."""
        if self.is_exact:
            return Fraction(a) / k
        if k % self.p == 0:
            raise UnsupportedCharacteristicError(f"1/{k} does not exist mod {self.p}")
        return a * pow(k % self.p, -1, self.p) % self.p

    def from_literal(self, text: str):
        text = text.strip()
        if "/" in text:
            num, den = text.split("/")
            if self.is_exact:
                return Fraction(int(num), int(den))
            return self.div_int(int(num), int(den))
        return self.normalize(int(text))

    def coeff_str(self, c) -> str:
        return str(c)

    def __str__(self) -> str:
        return "Q" if self.is_exact else f"F_{self.p}"


def multidegree(word: Word, n: int) -> tuple:
    md = [0] * n
    for letter in word:
        md[letter] += 1
    return tuple(md)


def word_to_index(word: Word, n: int) -> int:
    """Base-n value of the letter sequence, left letter most significant."""
    idx = 0
    for letter in word:
        idx = idx * n + letter
    return idx


def index_to_word(idx: int, n: int, d: int) -> Word:
    letters = [0] * d
    for k in range(d - 1, -1, -1):
        idx, letters[k] = divmod(idx, n)
    return tuple(letters)


@dataclass(frozen=True)
class DegreeIndex:
    """Bijection between words of degree d over n letters and [0, n^d)."""

    n: int
    d: int

    @property
    def size(self) -> int:
        return self.n**self.d

    def encode(self, word: Word) -> int:
        if len(word) != self.d:
            raise UsageError(f"word has degree {len(word)}, index expects {self.d}")
        return word_to_index(word, self.n)

    def decode(self, idx: int) -> Word:
        return index_to_word(idx, self.n, self.d)


class FreePolynomial:
    """Element of the free associative algebra on n generators.

    Immutable by convention: operations return new instances, terms with
    zero coefficient are never stored.
    """

    __slots__ = ("n", "field", "terms")

    def __init__(self, n: int, field: FieldSpec, terms: dict | None = None):
        self.n = n
        self.field = field
        clean = {}
        for word, c in (terms or {}).items():
            c = field.normalize(c)
            if c != field.zero():
                clean[tuple(word)] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(n: int, field: FieldSpec) -> "FreePolynomial":
        return FreePolynomial(n, field)

    @staticmethod
    def unit(n: int, field: FieldSpec) -> "FreePolynomial":
        return FreePolynomial(n, field, {(): 1})

    @staticmethod
    def generator(n: int, i: int, field: FieldSpec) -> "FreePolynomial":
        if not 0 <= i < n:
            raise UsageError(f"generator index {i} out of range for n={n}")
        return FreePolynomial(n, field, {(i,): 1})

    @staticmethod
    def generators(n: int, field: FieldSpec) -> list:
        return [FreePolynomial.generator(n, i, field) for i in range(n)]

    # -- basic structure ---------------------------------------------------

    def _check_compatible(self, other: "FreePolynomial"):
        if self.n != other.n or self.field != other.field:
            raise UsageError("operands disagree on generator count or field")

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FreePolynomial)
            and self.n == other.n
            and self.field == other.field
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n, self.field, frozenset(self.terms.items())))

    def __add__(self, other: "FreePolynomial") -> "FreePolynomial":
        self._check_compatible(other)
        out = dict(self.terms)
        f = self.field
        for w, c in other.terms.items():
            out[w] = f.add(out.get(w, f.zero()), c)
        return FreePolynomial(self.n, f, out)

    def __neg__(self) -> "FreePolynomial":
        f = self.field
        return FreePolynomial(self.n, f, {w: f.neg(c) for w, c in self.terms.items()})

    def __sub__(self, other: "FreePolynomial") -> "FreePolynomial":
        return self + (-other)

    def scale(self, c) -> "FreePolynomial":
        f = self.field
        c = f.normalize(c)
        return FreePolynomial(self.n, f, {w: f.mul(v, c) for w, v in self.terms.items()})

    def __mul__(self, other: "FreePolynomial") -> "FreePolynomial":
        self._check_compatible(other)
        f = self.field
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                c = f.mul(c1, c2)
                prev = out.get(w)
                out[w] = c if prev is None else f.add(prev, c)
        return FreePolynomial(self.n, f, out)

    # -- grading -----------------------------------------------------------

    def degrees(self) -> set:
        return {len(w) for w in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int:
        """Degree of a homogeneous polynomial (zero polynomial has degree 0)."""
        degs = self.degrees()
        if len(degs) > 1:
            raise UsageError("degree of a non-homogeneous polynomial")
        return degs.pop() if degs else 0

    def homogeneous_component(self, d: int) -> "FreePolynomial":
        return FreePolynomial(
            self.n, self.field, {w: c for w, c in self.terms.items() if len(w) == d}
        )

    def to_vector(self, d: int) -> list:
        """Dense coefficient list over the degree-d word index ordering."""
        comp = [self.field.zero()] * self.n**d
        for w, c in self.terms.items():
            if len(w) != d:
                raise UsageError("to_vector needs a homogeneous polynomial of degree d")
            comp[word_to_index(w, self.n)] = c
        return comp

    @staticmethod
    def from_vector(vec, n: int, d: int, field: FieldSpec) -> "FreePolynomial":
        terms = {}
        for idx, c in enumerate(vec):
            if c:
                terms[index_to_word(idx, n, d)] = c
        return FreePolynomial(n, field, terms)

    def __repr__(self):
        return f"FreePolynomial({self.n}, {self.field}, {format_polynomial(self)!r})"


def multiply(p: FreePolynomial, q: FreePolynomial) -> FreePolynomial:
    return p * q


def commutator(p: FreePolynomial, q: FreePolynomial) -> FreePolynomial:
    return p * q - q * p


def left_normed_bracket(args) -> FreePolynomial:
    """[a_1, a_2, ..., a_m] := [a_1, [a_2, [..., [a_{m-1}, a_m]...]]]."""
    args = list(args)
    if not args:
        raise UsageError("left_normed_bracket needs at least one argument")
    out = args[-1]
    for a in reversed(args[:-1]):
        out = commutator(a, out)
    return out


def symmetrize3(a: FreePolynomial, b: FreePolynomial, c: FreePolynomial) -> FreePolynomial:
    """Average of the six ordered products of a, b, c; needs 1/6 in the field."""
    a._check_compatible(b)
    a._check_compatible(c)
    if a.field.characteristic in (2, 3):
        raise UnsupportedCharacteristicError("symmetrize3 needs characteristic not in {2, 3}")
    total = a * b * c + a * c * b + b * a * c + b * c * a + c * a * b + c * b * a
    return total.scale(a.field.div_int(1, 6))


# -- identity suite ----------------------------------------------------------


def jacobi_check(field: FieldSpec, trials: int = 8, seed: int = 0, n: int = 2) -> bool:
    """[p,[q,r]] + [q,[r,p]] + [r,[p,q]] = 0 on random homogeneous inputs."""
    import random

    rng = random.Random(seed)

    def rand_poly():
        d = rng.randint(1, 3)
        terms = {}
        for _ in range(rng.randint(1, 4)):
            w = tuple(rng.randrange(n) for _ in range(d))
            terms[w] = rng.randint(-5, 5) if field.is_exact else rng.randrange(field.p)
        return FreePolynomial(n, field, terms)

    for _ in range(trials):
        p, q, r = rand_poly(), rand_poly(), rand_poly()
        s = (
            commutator(p, commutator(q, r))
            + commutator(q, commutator(r, p))
            + commutator(r, commutator(p, q))
        )
        if not s.is_zero():
            return False
    return True


def leibniz_expansion_check(n_args: int, field: FieldSpec) -> bool:
    """[c_1,...,c_m,ab] equals its shuffle expansion into bracket products.

    The expansion runs over ascending splits of the c's: the first group
    closes on a, the second on b, and the two brackets multiply.
    """
    m = n_args
    gens = FreePolynomial.generators(m + 2, field)
    cs, a, b = gens[:m], gens[m], gens[m + 1]
    lhs = left_normed_bracket(cs + [a * b])
    rhs = FreePolynomial.zero(m + 2, field)
    for j in range(m + 1):
        for subset in itertools.combinations(range(m), j):
            rest = [i for i in range(m) if i not in subset]
            left = left_normed_bracket([cs[i] for i in subset] + [a])
            right = left_normed_bracket([cs[i] for i in rest] + [b])
            rhs = rhs + left * right
    return lhs == rhs


def cube_bracket_identity_check(field: FieldSpec) -> bool:
    """[u^3,[v,w]] against its seven-term bracket expansion; needs 1/2."""
    if field.characteristic == 2:
        raise UnsupportedCharacteristicError("identity needs 1/2")
    u, v, w = FreePolynomial.generators(3, field)
    u2, u3 = u * u, u * u * u
    half3 = field.div_int(3, 2)
    c = commutator
    lhs = c(u3, c(v, w))
    rhs = (
        c(u2, c(u * v, w)).scale(3)
        - c(u, c(u2 * v, w)).scale(3)
        + c(u2, c(v, c(u, w))).scale(half3)
        - c(u, c(v, c(u2, w))).scale(half3)
        + c(u, c(u, c(u, c(v, w))))
        - c(u, c(u, c(v, c(u, w)))).scale(half3)
        + c(u, c(v, c(u, c(u, w)))).scale(half3)
    )
    return lhs == rhs


def _sym(a: FreePolynomial, b: FreePolynomial) -> FreePolynomial:
    half = a.field.div_int(1, 2)
    return (a * b + b * a).scale(half)


def alt_five_variable_identity_check(field: FieldSpec) -> bool:
    """Antisymmetrized five-variable identity behind the odd-filtration step.

    With a*b the symmetrized product, antisymmetrize over permutations of
    {x, y, v} times {z, u}:  Alt[x*[y,z,u],v] = Alt(4[z*x,y,v,u] - 2[x,z,y,u*v]).
    Exact equality of the two polylinear polynomials in five generators.
    """
    if field.characteristic in (2, 3):
        raise UnsupportedCharacteristicError("identity needs 1/6")
    gens = FreePolynomial.generators(5, field)

    def term_lhs(x, y, z, u, v):
        return commutator(_sym(x, left_normed_bracket([y, z, u])), v)

    def term_rhs(x, y, z, u, v):
        t1 = left_normed_bracket([_sym(z, x), y, v, u]).scale(4)
        t2 = left_normed_bracket([x, z, y, _sym(u, v)]).scale(2)
        return t1 - t2

    def alt(term):
        out = FreePolynomial.zero(5, field)
        for sigma in itertools.permutations(range(3)):
            sgn_s = _perm_sign(sigma)
            for tau in itertools.permutations(range(2)):
                sgn = sgn_s * _perm_sign(tau)
                xyv = [gens[[0, 1, 4][i]] for i in sigma]
                zu = [gens[[2, 3][i]] for i in tau]
                val = term(xyv[0], xyv[1], zu[0], zu[1], xyv[2])
                out = out + (val if sgn > 0 else -val)
        return out

    return alt(term_lhs) == alt(term_rhs)


def _perm_sign(perm) -> int:
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


# -- text syntax -----------------------------------------------------------
#
# Terms joined by + / -, each term  coeff*word  (or a bare word / coefficient),
# coefficients integer or a/b, words over generator names x1..xn with
# aliases x, y, z admitted when n <= 3.

_TOKEN = re.compile(r"\s*([+-])?\s*([^+-]+)")
_COEFF = re.compile(r"^(\d+(?:/\d+)?)")
_LETTER = re.compile(r"x(\d+)|([xyz])")

_ALIASES = {"x": 0, "y": 1, "z": 2}


def _parse_word(text: str, n: int) -> Word:
    letters = []
    pos = 0
    while pos < len(text):
        m = _LETTER.match(text, pos)
        if not m:
            raise UsageError(f"cannot read generator name at {text[pos:]!r}")
        if m.group(1) is not None:
            i = int(m.group(1)) - 1
        else:
            if n > 3:
                raise UsageError("aliases x, y, z are only valid for n <= 3")
            i = _ALIASES[m.group(2)]
        if not 0 <= i < n:
            raise UsageError(f"generator index {i + 1} out of range for n={n}")
        letters.append(i)
        pos = m.end()
    return tuple(letters)


def parse_polynomial(text: str, n: int, field: FieldSpec) -> FreePolynomial:
    """Parse the relation-file / CLI polynomial syntax, e.g. '3*xxy - 2*yxy'."""
    text = text.strip()
    if not text:
        raise UsageError("empty polynomial text")
    out = FreePolynomial.zero(n, field)
    pos = 0
    first = True
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise UsageError(f"cannot parse polynomial near {text[pos:]!r}")
        sign, body = m.group(1), m.group(2).strip()
        if sign is None and not first:
            raise UsageError(f"missing +/- before {body!r}")
        coeff = field.one()
        cm = _COEFF.match(body)
        if cm:
            coeff = field.from_literal(cm.group(1))
            body = body[cm.end() :].lstrip(" *").strip()
        if sign == "-":
            coeff = field.neg(coeff)
        word = () if body in ("1", "") else _parse_word(body, n)
        out = out + FreePolynomial(n, field, {word: coeff})
        pos = m.end()
        first = False
    return out


def _word_str(word: Word, n: int) -> str:
    if not word:
        return "1"
    if n <= 3:
        return "".join("xyz"[i] for i in word)
    return "".join(f"x{i + 1}" for i in word)


def format_polynomial(p: FreePolynomial) -> str:
    if not p.terms:
        return "0"
    items = sorted(p.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))
    parts = []
    for word, c in items:
        cs = p.field.coeff_str(c)
        body = _word_str(word, p.n)
        if body == "1":
            term = cs
        elif cs == "1":
            term = body
        elif cs == "-1":
            term = f"-{body}"
        else:
            term = f"{cs}*{body}"
        parts.append(term)
    out = " + ".join(parts)
    return out.replace("+ -", "- ")
