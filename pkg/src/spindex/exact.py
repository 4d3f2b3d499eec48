"""Exact real scalars: rationals, quadratic irrationals, guarded decimals.

A value is either

* rational  ``num/den``,
* quadratic ``(num + rad*sqrt(d))/den`` with squarefree ``d >= 2``, or
* a guarded decimal ``v ~ g``: a rational center with an explicit guard
  radius, standing in for a real known only to that accuracy.

All floor, nearest-integer and comparison queries are decided exactly on
the first two kinds using integer arithmetic (``math.isqrt`` certificates,
no floating point).  Guarded decimals answer only when the whole interval
``[v-g, v+g]`` agrees, and raise ``PrecisionError`` otherwise.

Values in distinct quadratic fields (sqrt 2 vs sqrt 3) can be *compared*,
via a two-radical sign certificate, but not added or multiplied; mixing
fields in arithmetic raises ``ExactArithmeticError``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Union

from .errors import (
    ExactArithmeticError,
    HalfIntegerAmbiguity,
    ParseError,
    PrecisionError,
)

Coercible = Union["ExactReal", int, Fraction, str]


def _icmp(x: int, y: int) -> int:
    return (x > y) - (x < y)


@lru_cache(maxsize=None)
def _squarefree_split(n: int) -> tuple[int, int]:
    """n = core * f**2 with core squarefree; returns (core, f)."""
    if n <= 0:
        raise ExactArithmeticError(f"radicand must be positive, got {n}")
    core, f = 1, 1
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if e % 2:
                core *= p
            f *= p ** (e // 2)
        p += 1 if p == 2 else 2
    core *= m
    return core, f


def _cmp_bsqrt(b: int, dn: int, r: int) -> int:
    """Sign of b*sqrt(dn) - r for integers, dn >= 0."""
    if b == 0 or dn == 0:
        return _icmp(0, r)
    if b > 0:
        if r < 0:
            return 1
        return _icmp(b * b * dn, r * r)
    if r >= 0:
        return -1
    return _icmp(r * r, b * b * dn)


def _sign_quad(a: int, b: int, d: int) -> int:
    """Sign of a + b*sqrt(d)."""
    return _cmp_bsqrt(b, d, -a)


def _sign_two_radicals(a: int, p: int, d: int, q: int, e: int) -> int:
    """Sign of a + p*sqrt(d) + q*sqrt(e); d != e squarefree, p*q != 0."""
    if p >= 0 and q >= 0:
        s1 = 1
    elif p <= 0 and q <= 0:
        s1 = -1
    else:
        # p^2 d == q^2 e would force d == e, excluded
        s1 = _icmp(p * p * d, q * q * e) * (1 if p > 0 else -1)
    if a == 0:
        return s1
    sa = 1 if a > 0 else -1
    if s1 == sa:
        return s1
    r = a * a - p * p * d - q * q * e
    t = _cmp_bsqrt(2 * p * q, d * e, r)  # sign of (p sqrt d + q sqrt e)^2 - a^2
    if t == 0:
        # would force sqrt(d*e) rational, impossible for d != e squarefree
        return 0
    return s1 if t > 0 else sa


def qfloor(num: int, rad: int, den: int, d: int) -> int:
    """floor((num + rad*sqrt(d))/den) for integers, den >= 1."""
    if rad == 0:
        return num // den
    s = isqrt(rad * rad * d)
    fl = s if rad > 0 else -s - 1  # floor(rad*sqrt(d)), exact: irrational
    n = (num + fl) // den
    while _sign_quad(num - (n + 1) * den, rad, d) >= 0:
        n += 1
    while _sign_quad(num - n * den, rad, d) < 0:
        n -= 1
    return n


class ExactReal:
    """Immutable exact scalar; see module docstring for the three kinds."""

    __slots__ = ("num", "rad", "den", "d", "guard")

    def __init__(self, num: int, rad: int = 0, den: int = 1, d: int = 0,
                 guard: Fraction | None = None):
        if den == 0:
            raise ZeroDivisionError("denominator 0")
        if den < 0:
            num, rad, den = -num, -rad, -den
        if rad != 0:
            if guard is not None:
                raise ExactArithmeticError("guarded decimal cannot carry a radical")
            core, f = _squarefree_split(d)
            rad *= f
            d = core
            if d == 1:
                num += rad
                rad, d = 0, 0
        if rad == 0:
            d = 0
        g = gcd(gcd(abs(num), abs(rad)), den)
        if g > 1:
            num //= g
            rad //= g
            den //= g
        if guard is not None:
            if guard < 0:
                raise ExactArithmeticError("guard must be nonnegative")
            if guard == 0:
                guard = None  # exact rational after all
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "rad", rad)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "guard", guard)

    def __setattr__(self, *a):
        raise AttributeError("ExactReal is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def rational(p, q: int = 1) -> "ExactReal":
        f = Fraction(p, q)
        return ExactReal(f.numerator, 0, f.denominator)

    @staticmethod
    def quad(a, b, d: int) -> "ExactReal":
        fa, fb = Fraction(a), Fraction(b)
        den = fa.denominator * fb.denominator // gcd(fa.denominator, fb.denominator)
        return ExactReal(fa.numerator * (den // fa.denominator),
                         fb.numerator * (den // fb.denominator), den, d)

    @staticmethod
    def sqrt(d: int) -> "ExactReal":
        return ExactReal(0, 1, 1, d)

    @staticmethod
    def guarded(v, g) -> "ExactReal":
        fv, fg = Fraction(v), Fraction(g)
        return ExactReal(fv.numerator, 0, fv.denominator, 0, fg)

    @staticmethod
    def parse(text: str) -> "ExactReal":
        return _parse(text)

    # -- views --------------------------------------------------------

    @property
    def kind(self) -> str:
        if self.guard is not None:
            return "dec"
        return "quad" if self.rad else "rat"

    @property
    def center(self) -> Fraction:
        """Rational part num/den (exact value for rat/dec kinds)."""
        return Fraction(self.num, self.den)

    def is_rational(self) -> bool:
        return self.rad == 0 and self.guard is None

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ExactArithmeticError(f"{self!r} is not an exact rational")
        return Fraction(self.num, self.den)

    def __float__(self) -> float:
        x = self.num / self.den
        if self.rad:
            x += self.rad / self.den * self.d ** 0.5
        return x

    def __bool__(self) -> bool:
        return not (self.num == 0 and self.rad == 0 and self.guard is None)

    def __hash__(self):
        if self.guard is None and self.rad == 0:
            return hash(Fraction(self.num, self.den))
        return hash((self.num, self.rad, self.den, self.d, self.guard))

    def __repr__(self) -> str:
        return f"ExactReal({self.to_text()!r})"

    # -- arithmetic ---------------------------------------------------

    def _coerce(self, other) -> "ExactReal":
        if isinstance(other, ExactReal):
            return other
        if isinstance(other, int):
            return ExactReal(other)
        if isinstance(other, Fraction):
            return ExactReal(other.numerator, 0, other.denominator)
        if isinstance(other, str):
            return _parse(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other) -> "ExactReal":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.guard is not None or o.guard is not None:
            if self.rad or o.rad:
                raise ExactArithmeticError("cannot mix guarded decimal with radical")
            g = (self.guard or Fraction(0)) + (o.guard or Fraction(0))
            v = self.center + o.center
            return ExactReal(v.numerator, 0, v.denominator, 0, g)
        if self.rad and o.rad and self.d != o.d:
            raise ExactArithmeticError(
                f"cross-field addition sqrt{self.d} vs sqrt{o.d}")
        d = self.d or o.d
        den = self.den * o.den
        return ExactReal(self.num * o.den + o.num * self.den,
                         self.rad * o.den + o.rad * self.den, den, d)

    __radd__ = __add__

    def __neg__(self) -> "ExactReal":
        return ExactReal(-self.num, -self.rad, self.den, self.d, self.guard)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.__add__(-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (-self).__add__(o)

    def __mul__(self, other) -> "ExactReal":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.guard is not None or o.guard is not None:
            if self.rad or o.rad:
                raise ExactArithmeticError("cannot mix guarded decimal with radical")
            g1 = self.guard or Fraction(0)
            g2 = o.guard or Fraction(0)
            v1, v2 = self.center, o.center
            g = abs(v1) * g2 + abs(v2) * g1 + g1 * g2
            v = v1 * v2
            return ExactReal(v.numerator, 0, v.denominator, 0, g)
        if self.rad and o.rad and self.d != o.d:
            raise ExactArithmeticError(
                f"cross-field product sqrt{self.d} vs sqrt{o.d}")
        d = self.d or o.d
        num = self.num * o.num + self.rad * o.rad * d
        rad = self.num * o.rad + self.rad * o.num
        return ExactReal(num, rad, self.den * o.den, d)

    __rmul__ = __mul__

    def _invert(self) -> "ExactReal":
        if self.guard is not None:
            raise ExactArithmeticError("cannot divide by a guarded decimal")
        if not self:
            raise ZeroDivisionError("division by zero ExactReal")
        if self.rad == 0:
            return ExactReal(self.den * (1 if self.num > 0 else -1), 0, abs(self.num))
        # den/(num + rad sqrt d) = den(num - rad sqrt d)/(num^2 - rad^2 d)
        n2 = self.num * self.num - self.rad * self.rad * self.d
        return ExactReal(self.den * self.num, -self.den * self.rad, n2, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.__mul__(o._invert())

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o.__mul__(self._invert())

    def __abs__(self) -> "ExactReal":
        return -self if self.sign() < 0 else self

    # -- comparisons --------------------------------------------------

    def sign(self) -> int:
        if self.guard is not None:
            v, g = self.center, self.guard
            if v - g > 0:
                return 1
            if v + g < 0:
                return -1
            raise PrecisionError(f"sign of {self.to_text()} inside guard band")
        return _sign_quad(self.num, self.rad, self.d)

    def _cmp(self, o: "ExactReal") -> int:
        if self.guard is not None or o.guard is not None:
            lo1, hi1 = self._interval()
            lo2, hi2 = o._interval()
            if _interval_lt(hi1, lo2):
                return -1
            if _interval_lt(hi2, lo1):
                return 1
            if self.guard is not None and o.guard is not None and \
                    self.num == o.num and self.den == o.den and self.guard == o.guard:
                return 0  # same measurement
            raise PrecisionError(
                f"comparison {self.to_text()} vs {o.to_text()} inside guard band")
        if self.rad and o.rad and self.d != o.d:
            a = self.num * o.den - o.num * self.den
            return _sign_two_radicals(a, self.rad * o.den, self.d,
                                      -o.rad * self.den, o.d)
        d = self.d or o.d
        return _sign_quad(self.num * o.den - o.num * self.den,
                          self.rad * o.den - o.rad * self.den, d)

    def _interval(self):
        # (lo, hi) bounds; exact kinds collapse to a point (self twice)
        if self.guard is None:
            return self, self
        v, g = self.center, self.guard
        return (ExactReal.rational(v - g), ExactReal.rational(v + g))

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._cmp(o) == 0

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def __lt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._cmp(o) < 0

    def __le__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._cmp(o) <= 0

    def __gt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._cmp(o) > 0

    def __ge__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._cmp(o) >= 0

    # -- integer queries ----------------------------------------------

    def floor(self) -> int:
        if self.guard is not None:
            v, g = self.center, self.guard
            f = v.numerator // v.denominator
            if v - f <= g or (f + 1) - v <= g:
                raise PrecisionError(
                    f"floor of {self.to_text()}: integer boundary inside guard")
            return f
        return qfloor(self.num, self.rad, self.den, self.d)

    def ceil(self) -> int:
        return -((-self).floor())

    def is_integer(self) -> bool:
        if self.guard is not None:
            v, g = self.center, self.guard
            f = v.numerator // v.denominator
            if min(v - f, (f + 1) - v) <= g:
                raise PrecisionError(
                    f"integrality of {self.to_text()} undecidable within guard")
            return False
        return self.rad == 0 and self.den == 1

    def nearest_int(self) -> int:
        """Nearest integer; exact half integers are refused."""
        if self.guard is not None:
            v, g = self.center, self.guard
            f = v.numerator // v.denominator
            q = v - f  # in [0, 1); decision boundary sits at 1/2
            if abs(q - Fraction(1, 2)) <= g:
                raise PrecisionError(
                    f"nearest integer of {self.to_text()}: half-integer boundary "
                    f"inside guard")
            return f if q < Fraction(1, 2) else f + 1
        if self.rad == 0:
            if self.den == 2:
                raise HalfIntegerAmbiguity(
                    f"nearest integer of exact half integer {self.to_text()}")
            return (2 * self.num + self.den) // (2 * self.den)
        return qfloor(2 * self.num + self.den, 2 * self.rad, 2 * self.den, self.d)

    def frac(self) -> "ExactReal":
        """self - floor(self)."""
        return self - self.floor()

    def dist_to_int(self) -> "ExactReal":
        """Distance to the nearest integer; exactly 1/2 at half integers."""
        f = self.frac()
        g = ExactReal(1) - f
        return f if f._cmp(g) <= 0 else g

    # -- serialization ------------------------------------------------

    def to_text(self) -> str:
        if self.guard is not None:
            return f"{Fraction(self.num, self.den)}~{self.guard}"
        if self.rad == 0:
            return str(Fraction(self.num, self.den))
        parts = []
        if self.num:
            parts.append(str(Fraction(self.num, self.den)))
        b = Fraction(self.rad, self.den)
        if b == 1:
            rp = f"sqrt{self.d}"
        elif b == -1:
            rp = f"-sqrt{self.d}"
        else:
            rp = f"{b}*sqrt{self.d}"
        if parts and not rp.startswith("-"):
            parts.append("+")
        parts.append(rp)
        return "".join(parts)

    def to_json(self):
        if self.guard is not None:
            return {"kind": "dec", "v": str(Fraction(self.num, self.den)),
                    "g": str(self.guard)}
        if self.rad == 0:
            return str(Fraction(self.num, self.den))
        return {"kind": "quad", "a": str(Fraction(self.num, self.den)),
                "b": str(Fraction(self.rad, self.den)), "d": self.d}

    @staticmethod
    def from_json(obj) -> "ExactReal":
        if isinstance(obj, (int, str)):
            return _parse(str(obj))
        if isinstance(obj, dict):
            kind = obj.get("kind")
            try:
                if kind == "quad":
                    return ExactReal.quad(Fraction(obj["a"]), Fraction(obj["b"]),
                                          int(obj["d"]))
                if kind == "dec":
                    return ExactReal.guarded(Fraction(obj["v"]), Fraction(obj["g"]))
                if kind == "rat":
                    return ExactReal.rational(Fraction(obj["v"]))
            except (KeyError, ValueError, TypeError) as exc:
                raise ParseError(f"bad ExactReal object {obj!r}: {exc}") from None
        raise ParseError(f"cannot decode ExactReal from {obj!r}")


def _interval_lt(hi: ExactReal, lo: ExactReal) -> bool:
    # endpoints produced by _interval are always exact
    return hi._cmp(lo) < 0


class SortKey:
    """Adapter so ExactReals (possibly across fields) sort via sorted()."""

    __slots__ = ("x",)

    def __init__(self, x: ExactReal):
        self.x = x

    def __lt__(self, other) -> bool:
        return self.x < other.x

    def __eq__(self, other) -> bool:
        return self.x == other.x


def exact(x: Coercible) -> ExactReal:
    """Coerce int, Fraction, str or ExactReal to ExactReal."""
    if isinstance(x, ExactReal):
        return x
    if isinstance(x, int):
        return ExactReal(x)
    if isinstance(x, Fraction):
        return ExactReal(x.numerator, 0, x.denominator)
    if isinstance(x, str):
        return _parse(x)
    raise ParseError(f"cannot coerce {x!r} to ExactReal")


def _parse_rat(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational literal {text!r}: {exc}") from None


def _parse(text: str) -> ExactReal:
    """Parse '3/5', '0.15', 'sqrt2', '-1/2+1/2*sqrt5', '1-sqrt2', '0.15~1e-9'."""
    if not isinstance(text, str):
        raise ParseError(f"expected string, got {text!r}")
    s = text.strip().replace(" ", "")
    if not s:
        raise ParseError("empty numeric literal")
    if "~" in s:
        vpart, _, gpart = s.partition("~")
        v = _parse_rat(vpart)
        g = _parse_rat(gpart)
        return ExactReal.guarded(v, g)
    # split into signed terms at top level ('e-9' exponents are excluded
    # because guards were handled above and plain terms use / not e)
    terms = []
    cur = ""
    for i, ch in enumerate(s):
        if ch in "+-" and i > 0 and s[i - 1] not in "+-eE":
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    terms.append(cur)
    total = ExactReal(0)
    field = 0
    for term in terms:
        t = term
        sign = 1
        while t and t[0] in "+-":
            if t[0] == "-":
                sign = -sign
            t = t[1:]
        if not t:
            raise ParseError(f"dangling sign in {text!r}")
        if "sqrt" in t:
            coefpart, _, dpart = t.partition("sqrt")
            coefpart = coefpart.rstrip("*")
            coef = _parse_rat(coefpart) if coefpart else Fraction(1)
            if not dpart.isdigit():
                raise ParseError(f"bad radicand in {text!r}")
            d = int(dpart)
            piece = ExactReal.quad(0, sign * coef, d)
            if piece.rad:
                if field and piece.d != field:
                    raise ParseError(
                        f"mixed radicands sqrt{field} and sqrt{piece.d} in {text!r}")
                field = piece.d
        else:
            piece = ExactReal.rational(sign * _parse_rat(t))
        total = total + piece
    return total
