"""Exact arithmetic in Z[v,v^-1] and Q[v,v^-1].

Laurent polynomials are kept in canonical sparse form: a map from integer
exponent to nonzero coefficient.  Coefficients are arbitrary-precision
(``int`` for ``LaurentPoly``, ``fractions.Fraction`` for ``RatLaurentPoly``),
so every operation here is exact.  On top of the ring arithmetic this module
provides the quantum integers ``[n]_s``, Gaussian binomials, cyclotomic
polynomials, the bar involution ``v -> v^-1``, unit normalization, and exact
vanishing tests at roots of unity (computed in Z[v]/Phi_m(v), never in
floating point).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping


def _normalized(terms: dict) -> dict:
    return {e: c for e, c in terms.items() if c}


class LaurentPoly:
    """A Laurent polynomial over Z in the variable v, as a sparse exponent map."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, int] | None = None):
        t = {}
        if terms:
            for e, c in terms.items():
                if not isinstance(e, int):
                    raise TypeError(f"exponent {e!r} is not an integer")
                if isinstance(c, Fraction):
                    if c.denominator != 1:
                        raise TypeError(f"coefficient {c} is not an integer")
                    c = c.numerator
                elif not isinstance(c, int):
                    raise TypeError(f"coefficient {c!r} is not an integer")
                if c:
                    t[e] = c
        self._terms = t

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def const(c: int) -> LaurentPoly:
        return LaurentPoly({0: c})

    @staticmethod
    def monomial(coeff: int, exp: int) -> LaurentPoly:
        return LaurentPoly({exp: coeff})

    # -- basic queries ---------------------------------------------------------

    @property
    def terms(self) -> dict:
        """The exponent-to-coefficient map (a copy; instances are immutable)."""
        return dict(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def min_exp(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no exponents")
        return min(self._terms)

    @property
    def max_exp(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no exponents")
        return max(self._terms)

    def coefficient(self, e: int) -> int:
        return self._terms.get(e, 0)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self._terms.items(), reverse=True))

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        if isinstance(other, int):
            return self._terms == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    # -- ring arithmetic --------------------------------------------------------

    def __add__(self, other) -> LaurentPoly:
        other = _coerce_int_poly(other)
        if other is None:
            return NotImplemented
        r = dict(self._terms)
        for e, c in other._terms.items():
            s = r.get(e, 0) + c
            if s:
                r[e] = s
            else:
                r.pop(e, None)
        out = LaurentPoly.__new__(LaurentPoly)
        out._terms = r
        return out

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        out = LaurentPoly.__new__(LaurentPoly)
        out._terms = {e: -c for e, c in self._terms.items()}
        return out

    def __sub__(self, other) -> LaurentPoly:
        other = _coerce_int_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> LaurentPoly:
        other = _coerce_int_poly(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> LaurentPoly:
        if isinstance(other, int):
            if not other:
                return ZERO
            out = LaurentPoly.__new__(LaurentPoly)
            out._terms = {e: c * other for e, c in self._terms.items()}
            return out
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self._terms, other._terms
        if len(a) > len(b):
            a, b = b, a
        r: dict[int, int] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = e1 + e2
                s = r.get(e, 0) + c1 * c2
                if s:
                    r[e] = s
                else:
                    del r[e]
        out = LaurentPoly.__new__(LaurentPoly)
        out._terms = r
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentPoly:
        if n < 0:
            raise ValueError("negative powers are not defined in Z[v,v^-1]")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- structure maps ----------------------------------------------------------

    def bar(self) -> LaurentPoly:
        """The Q-algebra involution v -> v^-1 (exponent negation)."""
        out = LaurentPoly.__new__(LaurentPoly)
        out._terms = {-e: c for e, c in self._terms.items()}
        return out

    def subst_power(self, s: int) -> LaurentPoly:
        """The ring homomorphism v -> v^s for nonzero s."""
        if s == 0:
            raise ValueError("v -> v^0 is not a ring homomorphism of Z[v,v^-1]")
        out = LaurentPoly.__new__(LaurentPoly)
        out._terms = {e * s: c for e, c in self._terms.items()}
        return out

    def shift(self, k: int) -> LaurentPoly:
        """Multiplication by the unit v^k."""
        out = LaurentPoly.__new__(LaurentPoly)
        out._terms = {e + k: c for e, c in self._terms.items()}
        return out

    def at_one(self) -> int:
        """Exact evaluation at v = 1."""
        return sum(self._terms.values())

    def content(self) -> int:
        """gcd of the coefficients (0 for the zero polynomial)."""
        return math.gcd(*self._terms.values()) if self._terms else 0

    def is_bar_invariant(self) -> bool:
        return all(self._terms.get(-e, 0) == c for e, c in self._terms.items())

    def to_rational(self) -> "RatLaurentPoly":
        out = RatLaurentPoly.__new__(RatLaurentPoly)
        out._terms = {e: Fraction(c) for e, c in self._terms.items()}
        return out

    # -- presentation ---------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        bits = []
        for e, c in sorted(self._terms.items(), reverse=True):
            if e == 0:
                body = str(abs(c))
            else:
                vpow = "v" if e == 1 else f"v^{e}"
                body = vpow if abs(c) == 1 else f"{abs(c)}*{vpow}"
            if not bits:
                bits.append(body if c > 0 else "-" + body)
            else:
                bits.append(("+ " if c > 0 else "- ") + body)
        return " ".join(bits)

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    # -- JSON encoding (exponents/coefficients as decimal strings) -------------

    def to_json(self) -> dict:
        return {"terms": {str(e): str(c) for e, c in sorted(self._terms.items())}}

    @staticmethod
    def from_json(obj: dict) -> LaurentPoly:
        return LaurentPoly({int(e): int(c) for e, c in obj["terms"].items()})


class RatLaurentPoly:
    """A Laurent polynomial over Q, with reduced Fraction coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, Fraction | int] | None = None):
        t = {}
        if terms:
            for e, c in terms.items():
                c = Fraction(c)
                if c:
                    t[int(e)] = c
        self._terms = t

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if isinstance(other, RatLaurentPoly):
            return self._terms == other._terms
        if isinstance(other, LaurentPoly):
            return self._terms == {e: Fraction(c) for e, c in other._terms.items()}
        if isinstance(other, (int, Fraction)):
            return self._terms == ({0: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other) -> RatLaurentPoly:
        other = _coerce_rat_poly(other)
        if other is None:
            return NotImplemented
        r = dict(self._terms)
        for e, c in other._terms.items():
            s = r.get(e, 0) + c
            if s:
                r[e] = s
            else:
                r.pop(e, None)
        out = RatLaurentPoly.__new__(RatLaurentPoly)
        out._terms = r
        return out

    __radd__ = __add__

    def __neg__(self) -> RatLaurentPoly:
        out = RatLaurentPoly.__new__(RatLaurentPoly)
        out._terms = {e: -c for e, c in self._terms.items()}
        return out

    def __sub__(self, other) -> RatLaurentPoly:
        other = _coerce_rat_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> RatLaurentPoly:
        other = _coerce_rat_poly(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> RatLaurentPoly:
        if isinstance(other, (int, Fraction)):
            if not other:
                return RatLaurentPoly()
            out = RatLaurentPoly.__new__(RatLaurentPoly)
            out._terms = {e: c * other for e, c in self._terms.items()}
            return out
        other = _coerce_rat_poly(other)
        if other is None:
            return NotImplemented
        r: dict[int, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                s = r.get(e, 0) + c1 * c2
                if s:
                    r[e] = s
                else:
                    del r[e]
        out = RatLaurentPoly.__new__(RatLaurentPoly)
        out._terms = r
        return out

    __rmul__ = __mul__

    def bar(self) -> RatLaurentPoly:
        out = RatLaurentPoly.__new__(RatLaurentPoly)
        out._terms = {-e: c for e, c in self._terms.items()}
        return out

    def at_one(self) -> Fraction:
        return sum(self._terms.values(), Fraction(0))

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._terms.values())

    def to_laurent(self) -> LaurentPoly:
        """Reduce to LaurentPoly; fails unless every denominator is 1."""
        if not self.is_integral:
            raise ValueError(f"{self} has non-integer coefficients")
        out = LaurentPoly.__new__(LaurentPoly)
        out._terms = {e: c.numerator for e, c in self._terms.items()}
        return out

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        bits = []
        for e, c in sorted(self._terms.items(), reverse=True):
            vpow = "" if e == 0 else ("v" if e == 1 else f"v^{e}")
            body = f"{abs(c)}" + (f"*{vpow}" if vpow else "")
            bits.append((("+ " if c > 0 else "- ") if bits else ("" if c > 0 else "-")) + body)
        return " ".join(bits)

    def __repr__(self) -> str:
        return f"RatLaurentPoly({self})"

    def to_json(self) -> dict:
        def enc(c: Fraction) -> str:
            return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"

        return {"terms": {str(e): enc(c) for e, c in sorted(self._terms.items())}}

    @staticmethod
    def from_json(obj: dict) -> RatLaurentPoly:
        return RatLaurentPoly({int(e): Fraction(c) for e, c in obj["terms"].items()})


def _coerce_int_poly(x):
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly({0: x})
    return None


def _coerce_rat_poly(x):
    if isinstance(x, RatLaurentPoly):
        return x
    if isinstance(x, LaurentPoly):
        return x.to_rational()
    if isinstance(x, (int, Fraction)):
        return RatLaurentPoly({0: x})
    return None


ZERO = LaurentPoly()
ONE = LaurentPoly({0: 1})
V = LaurentPoly({1: 1})


# ---------------------------------------------------------------------------
# quantum integers and relatives
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def quantum_int(n: int, s: int = 1) -> LaurentPoly:
    """The balanced quantum integer [n]_s = sum_{k=1}^{n} v^{(n+1-2k)s}.

    Extended to all n by [0]_s = 0 and [-n]_s = -[n]_s.  Bar-invariant, and
    [n]_s at v=1 equals n.
    """
    if s < 1:
        raise ValueError("s must be a positive integer")
    if n == 0:
        return ZERO
    if n < 0:
        return -quantum_int(-n, s)
    return LaurentPoly({(n + 1 - 2 * k) * s: 1 for k in range(1, n + 1)})


def quantum_factorial(n: int, s: int = 1) -> LaurentPoly:
    """[n]_s! = prod_{m=1}^{n} [m]_s."""
    if n < 0:
        raise ValueError("quantum factorial needs n >= 0")
    out = ONE
    for m in range(1, n + 1):
        out = out * quantum_int(m, s)
    return out


def quantum_binomial(n: int, m: int, s: int = 1) -> LaurentPoly:
    """The Gaussian binomial [n]_s! / ([m]_s! [n-m]_s!), exact in Z[v,v^-1]."""
    if n < m:
        raise ValueError(f"binomial needs n >= m, got n={n}, m={m}")
    if m < 0:
        raise ValueError("binomial needs m >= 0")
    num = quantum_factorial(n, s)
    den = quantum_factorial(m, s) * quantum_factorial(n - m, s)
    q = divide_exact(num, den)
    assert q is not None, "Gaussian binomial divisibility failed"
    return q


@lru_cache(maxsize=None)
def cyclotomic(m: int) -> LaurentPoly:
    """The m-th cyclotomic polynomial Phi_m(v), via v^m - 1 = prod_{d|m} Phi_d."""
    if m < 1:
        raise ValueError("cyclotomic index must be >= 1")
    num = LaurentPoly({m: 1, 0: -1})
    for d in range(1, m):
        if m % d == 0:
            num = divide_exact(num, cyclotomic(d))
            assert num is not None
    return num


def kss_bracket(n: int, s: int) -> LaurentPoly:
    """{n}_s = (v^{ns} + (-1)^s v^{-ns}) / (v^s + (-1)^s v^{-s}) for odd n.

    At v=1 this is n for odd s and 1 for even s.
    """
    if n < 1 or n % 2 == 0:
        raise ValueError("{n}_s is defined for odd positive n only")
    if s < 1:
        raise ValueError("s must be a positive integer")
    sign = -1 if s % 2 else 1
    num = LaurentPoly({n * s: 1, -n * s: sign})
    den = LaurentPoly({s: 1, -s: sign})
    q = divide_exact(num, den)
    if q is None:
        raise ArithmeticError(f"{{n}}_s division not exact for n={n}, s={s}")
    return q


def su_bracket(p: int) -> LaurentPoly:
    """[p]^su = (v^p + v^-p) / (v + v^-1) for odd p; equals 1 at v=1."""
    if p < 1 or p % 2 == 0:
        raise ValueError("[p]^su is defined for odd positive p only")
    q = divide_exact(LaurentPoly({p: 1, -p: 1}), LaurentPoly({1: 1, -1: 1}))
    if q is None:
        raise ArithmeticError(f"[p]^su division not exact for p={p}")
    return q


# ---------------------------------------------------------------------------
# units, exact division, root-of-unity vanishing
# ---------------------------------------------------------------------------


def normalize_unit(a: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """Write a = unit * canonical with unit = +-v^k.

    The canonical representative has lowest exponent 0 and positive leading
    (highest-exponent) coefficient; this picks one element per orbit of the
    unit group of Z[v,v^-1].
    """
    if a.is_zero:
        raise ValueError("cannot unit-normalize 0")
    k = a.min_exp
    sign = 1 if a.coefficient(a.max_exp) > 0 else -1
    canonical = a.shift(-k) * sign
    return LaurentPoly({k: sign}), canonical


def divide_exact(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly | None:
    """Return q with a = q*b if q exists in Z[v,v^-1], else None."""
    if b.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    if a.is_zero:
        return ZERO
    shift = a.min_exp - b.min_exp
    ra = a.shift(-a.min_exp).terms
    rb = b.shift(-b.min_exp).terms
    db = max(rb)
    lead_b = rb[db]
    q: dict[int, int] = {}
    r = ra
    while r:
        dr = max(r)
        if dr < db:
            return None
        c, rem = divmod(r[dr], lead_b)
        if rem:
            return None
        q[dr - db] = c
        for e, cb in rb.items():
            ee = e + dr - db
            s = r.get(ee, 0) - c * cb
            if s:
                r[ee] = s
            else:
                r.pop(ee, None)
    return LaurentPoly(q).shift(shift)


@dataclass(frozen=True)
class CyclotomicResidue:
    """A residue in Z[v]/Phi_m(v): exact arithmetic at a primitive m-th root."""

    m: int
    residue: LaurentPoly

    @property
    def is_zero(self) -> bool:
        return self.residue.is_zero


def reduce_mod_cyclotomic(a: LaurentPoly, m: int) -> CyclotomicResidue:
    """Reduce a (cleared of its v-power denominator) modulo Phi_m(v).

    Since v is invertible modulo Phi_m, clearing the denominator does not
    change whether the value at a primitive m-th root of unity is zero; in
    fact v^m = 1 there, so exponents fold modulo m before the division.
    """
    if m < 1:
        raise ValueError("cyclotomic index must be >= 1")
    if a.is_zero:
        return CyclotomicResidue(m, ZERO)
    phi = cyclotomic(m).terms
    dphi = max(phi)
    r: dict[int, int] = {}
    for e, c in a._terms.items():
        e %= m
        s = r.get(e, 0) + c
        if s:
            r[e] = s
        else:
            del r[e]
    while r and max(r) >= dphi:
        dr = max(r)
        c = r[dr]  # Phi_m is monic, so the reduction stays over Z
        for e, cp in phi.items():
            ee = e + dr - dphi
            s = r.get(ee, 0) - c * cp
            if s:
                r[ee] = s
            else:
                r.pop(ee, None)
    return CyclotomicResidue(m, LaurentPoly(r))


def vanishes_at_primitive_root(a: LaurentPoly, m: int) -> bool:
    """True iff a vanishes at exp(2*pi*i/m), decided exactly in Z[v]/Phi_m(v)."""
    return reduce_mod_cyclotomic(a, m).is_zero


# ---------------------------------------------------------------------------
# canonical factorization of products of quantum integers
# ---------------------------------------------------------------------------
#
# [n]_k = v^{-(n-1)k} * prod_{j | 2nk, j not| 2k} Phi_j(v).  A formal product
# of brackets is therefore determined by a v-power and a multiset of
# cyclotomic indices; two products are equal in Z[v,v^-1] iff these data
# agree.  This lets huge products (degrees in the tens of thousands) be
# compared exactly without expansion.


@lru_cache(maxsize=None)
def _divisors(n: int) -> tuple[int, ...]:
    out = [d for d in range(1, int(math.isqrt(n)) + 1) if n % d == 0]
    out += [n // d for d in reversed(out) if d * d != n]
    return tuple(out)


class QProduct:
    """A formal product of quantum integers in cyclotomic-factored form."""

    __slots__ = ("vshift", "factors")

    def __init__(self):
        self.vshift = 0
        self.factors: dict[int, int] = {}

    def mul_bracket(self, n: int, k: int, power: int = 1) -> "QProduct":
        """Multiply by [n]_k^power (n >= 1, k >= 1)."""
        if power == 0 or n == 1:
            return self
        if n < 1 or k < 1 or power < 0:
            raise ValueError("QProduct tracks products of [n]_k with n,k >= 1")
        self.vshift -= (n - 1) * k * power
        twok = set(_divisors(2 * k))
        for j in _divisors(2 * n * k):
            if j not in twok:
                self.factors[j] = self.factors.get(j, 0) + power
                if not self.factors[j]:
                    del self.factors[j]
        return self

    def key(self) -> tuple:
        return (self.vshift, tuple(sorted(self.factors.items())))

    def __eq__(self, other) -> bool:
        if not isinstance(other, QProduct):
            return NotImplemented
        return self.key() == other.key()

    def expand(self) -> LaurentPoly:
        out = LaurentPoly({self.vshift: 1})
        for j, e in sorted(self.factors.items()):
            out = out * cyclotomic(j) ** e
        return out
