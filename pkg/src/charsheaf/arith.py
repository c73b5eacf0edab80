"""Exact scalars and polynomials.

Scalars are plain ``int``/``Fraction`` whenever possible; ``Cyclotomic`` only
appears once a non-rational root of unity is involved.  All three arithmetic
types below (``Cyclotomic``, ``LaurentPoly``, ``RationalFunction``) are
immutable value objects.
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, Iterable, List, Sequence, Tuple, Union

import sympy

from .errors import ValidationError

Rational = Fraction


class PoleAtZeroError(ValueError):
    """Raised when a power-series expansion is requested at a pole."""


# ---------------------------------------------------------------------------
# cyclotomic numbers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> Tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, constant term first."""
    x = sympy.Symbol("x")
    coeffs = sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _mobius(n: int) -> int:
    return int(sympy.mobius(n))


def _reduce_mod_cyclotomic(poly: List, n: int) -> Tuple:
    """Reduce a coefficient list (constant first) modulo the monic n-th cyclotomic polynomial."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    poly = list(poly)
    for top in range(len(poly) - 1, deg - 1, -1):
        c = poly[top]
        if c:
            shift = top - deg
            for i in range(deg + 1):
                if phi[i]:
                    poly[shift + i] -= c * phi[i]
    poly = poly[:deg] + [0] * (deg - len(poly))
    return tuple(Fraction(c) for c in poly)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class Cyclotomic:
    """An element of the cyclotomic field Q(zeta_N) in the power basis.

    ``coeffs[k]`` is the coefficient of zeta_N**k, 0 <= k < phi(N), with
    zeta_N = exp(2*pi*i/N).  Values of different conductors are compared and
    combined after embedding both into the field of the lcm conductor.
    """

    __slots__ = ("conductor", "coeffs")

    def __init__(self, conductor: int, coeffs: Sequence):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        deg = euler_phi(conductor)
        if len(coeffs) != deg:
            coeffs = _reduce_mod_cyclotomic(list(coeffs), conductor)
        self.conductor = conductor
        self.coeffs = tuple(Fraction(c) for c in coeffs)

    # construction helpers
    @classmethod
    def from_exponents(cls, conductor: int, terms: Dict[int, object]) -> "Cyclotomic":
        poly = [0] * conductor
        for k, c in terms.items():
            poly[k % conductor] += c
        return cls(conductor, _reduce_mod_cyclotomic(poly, conductor))

    @classmethod
    def rational(cls, value) -> "Cyclotomic":
        return cls(1, (Fraction(value),))

    @staticmethod
    def coerce(value) -> "Cyclotomic":
        if isinstance(value, Cyclotomic):
            return value
        if isinstance(value, (int, Fraction)):
            return Cyclotomic(1, (Fraction(value),))
        raise TypeError(f"cannot coerce {type(value).__name__} to Cyclotomic")

    def embed(self, conductor: int) -> "Cyclotomic":
        """Return the same number written over Q(zeta_conductor)."""
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise ValueError("target conductor must be a multiple")
        step = conductor // self.conductor
        poly = [0] * conductor
        for k, c in enumerate(self.coeffs):
            if c:
                poly[(k * step) % conductor] += c
        return Cyclotomic(conductor, _reduce_mod_cyclotomic(poly, conductor))

    def _unify(self, other: "Cyclotomic") -> Tuple["Cyclotomic", "Cyclotomic"]:
        if self.conductor == other.conductor:
            return self, other
        m = _lcm(self.conductor, other.conductor)
        return self.embed(m), other.embed(m)

    # queries
    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def to_complex(self) -> complex:
        import cmath
        z = cmath.exp(2j * cmath.pi / self.conductor)
        return sum(complex(float(c)) * z ** k for k, c in enumerate(self.coeffs))

    def normalized_trace(self) -> Fraction:
        """Trace to Q divided by the field degree; independent of the conductor."""
        n = self.conductor
        total = Fraction(0)
        for k, c in enumerate(self.coeffs):
            if c:
                m = n // gcd(n, k)
                total += c * Fraction(_mobius(m), euler_phi(m))
        return total

    # arithmetic
    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.conductor, (self.coeffs[0] + other,) + self.coeffs[1:])
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b = self._unify(other)
        return Cyclotomic(a.conductor, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.conductor, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.conductor, tuple(c * other for c in self.coeffs))
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b = self._unify(other)
        n = a.conductor
        if n == 1:
            return Cyclotomic(1, (a.coeffs[0] * b.coeffs[0],))
        prod = [0] * (2 * len(a.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return Cyclotomic(n, _reduce_mod_cyclotomic(prod, n))

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise ZeroDivisionError("cyclotomic zero")
        n = self.conductor
        d = len(self.coeffs)
        if d == 1:
            return Cyclotomic(1, (1 / self.coeffs[0],))
        # columns: self * zeta^j expressed in the power basis
        cols = []
        for j in range(d):
            poly = [0] * j + list(self.coeffs)
            cols.append(_reduce_mod_cyclotomic(poly, n))
        matrix = [[cols[j][i] for j in range(d)] for i in range(d)]
        rhs = [Fraction(1)] + [Fraction(0)] * (d - 1)
        return Cyclotomic(n, solve_linear(matrix, rhs))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, Cyclotomic):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return Cyclotomic.coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = Cyclotomic.rational(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conjugate(self) -> "Cyclotomic":
        n = self.conductor
        if n == 1:
            return self
        poly = [0] * n
        for k, c in enumerate(self.coeffs):
            if c:
                poly[(-k) % n] += c
        return Cyclotomic(n, _reduce_mod_cyclotomic(poly, n))

    def galois(self, k: int) -> "Cyclotomic":
        """Apply the field automorphism zeta -> zeta**k (k prime to the conductor)."""
        n = self.conductor
        poly = [0] * n
        for j, c in enumerate(self.coeffs):
            if c:
                poly[(j * k) % n] += c
        return Cyclotomic(n, _reduce_mod_cyclotomic(poly, n))

    # comparison
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b = self._unify(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        return hash(self.normalized_trace())

    def __bool__(self):
        return not self.is_zero()

    def sort_key(self):
        if self.is_rational():
            return (0, self.coeffs[0])
        return (1, self.conductor, self.coeffs)

    def __repr__(self):
        return f"Cyclotomic({self})"

    def __str__(self):
        if self.is_rational():
            return str(self.coeffs[0])
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                parts.append(str(c))
                continue
            root = f"E({self.conductor})" + (f"^{k}" if k > 1 else "")
            if c == 1:
                parts.append(root)
            elif c == -1:
                parts.append("-" + root)
            else:
                parts.append(f"{c}*{root}")
        return "+".join(parts).replace("+-", "-")


def cyclo_embed(root_order: int, power: int) -> Cyclotomic:
    """The root of unity exp(2*pi*i*power/root_order) as a canonical cyclotomic number."""
    if root_order < 1:
        raise ValueError("root order must be positive")
    return Cyclotomic.from_exponents(root_order, {power % root_order: 1})


Scalar = Union[int, Fraction, Cyclotomic]


def simplify(x):
    """Drop to ``Fraction``/``int`` when a cyclotomic value happens to be rational."""
    if isinstance(x, Cyclotomic):
        if x.is_rational():
            x = x.coeffs[0]
        else:
            return x
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def conj(x):
    if isinstance(x, Cyclotomic):
        return x.conjugate()
    return x


def is_zero(x) -> bool:
    return not x


def to_cyclotomic(x) -> Cyclotomic:
    return Cyclotomic.coerce(x)


def scalar_str(x) -> str:
    x = simplify(x)
    return str(x)


def scalar_key(x):
    x = simplify(x)
    if isinstance(x, Cyclotomic):
        return x.sort_key()
    return (0, Fraction(x))


def solve_linear(matrix: List[List], rhs: List) -> List:
    """Solve a square nonsingular linear system exactly by Gaussian elimination."""
    n = len(matrix)
    a = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / Fraction(a[col][col]) if not isinstance(a[col][col], Cyclotomic) else a[col][col].inverse()
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------

VARIABLES = ("t", "q", "q½")


class LaurentPoly:
    """A Laurent polynomial sum(coeffs[i] * var**(low + i)).

    The variable tag is ``t`` (Molien series), ``q`` or ``q½`` (a square root of q,
    used when exponents (dim G + a)/2 may be half-integers).
    """

    __slots__ = ("coeffs", "low", "var")

    def __init__(self, coeffs: Iterable = (), low: int = 0, var: str = "q"):
        if var not in VARIABLES:
            raise ValueError(f"unknown variable {var!r}")
        cs = [simplify(c) for c in coeffs]
        start = 0
        while start < len(cs) and not cs[start]:
            start += 1
        end = len(cs)
        while end > start and not cs[end - 1]:
            end -= 1
        self.coeffs = tuple(cs[start:end])
        self.low = low + start if self.coeffs else 0
        self.var = var

    @classmethod
    def monomial(cls, exponent: int, coeff=1, var: str = "q") -> "LaurentPoly":
        return cls((coeff,), exponent, var)

    @classmethod
    def constant(cls, value, var: str = "q") -> "LaurentPoly":
        return cls((value,), 0, var)

    @classmethod
    def from_dict(cls, terms: Dict[int, object], var: str = "q") -> "LaurentPoly":
        if not terms:
            return cls((), 0, var)
        lo, hi = min(terms), max(terms)
        cs = [0] * (hi - lo + 1)
        for e, c in terms.items():
            cs[e - lo] += c
        return cls(cs, lo, var)

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def high(self) -> int:
        return self.low + len(self.coeffs) - 1

    def terms(self) -> Dict[int, object]:
        return {self.low + i: c for i, c in enumerate(self.coeffs) if c}

    def coeff(self, exponent: int):
        i = exponent - self.low
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def _check(self, other: "LaurentPoly"):
        if self.var != other.var and self.coeffs and other.coeffs:
            raise ValueError(f"variable mismatch {self.var} vs {other.var}")

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, Cyclotomic)):
            return LaurentPoly.constant(other, self.var)
        raise TypeError(f"cannot combine LaurentPoly with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if not other.coeffs:
            return self
        if not self.coeffs:
            return LaurentPoly(other.coeffs, other.low, self.var if self.coeffs else other.var)
        lo = min(self.low, other.low)
        hi = max(self.high, other.high)
        cs = [0] * (hi - lo + 1)
        for i, c in enumerate(self.coeffs):
            cs[self.low - lo + i] += c
        for i, c in enumerate(other.coeffs):
            cs[other.low - lo + i] += c
        return LaurentPoly(cs, lo, self.var)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly([-c for c in self.coeffs], self.low, self.var)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            return LaurentPoly([c * other for c in self.coeffs], self.low, self.var)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check(other)
        if not self.coeffs or not other.coeffs:
            return LaurentPoly((), 0, self.var)
        cs = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        cs[i + j] += a * b
        return LaurentPoly(cs, self.low + other.low, self.var)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            if len(self.coeffs) == 1:
                c = self.coeffs[0]
                inv = Cyclotomic.coerce(c).inverse() if isinstance(c, Cyclotomic) else Fraction(1) / c
                return LaurentPoly((inv,), -self.low, self.var) ** (-e)
            raise ValueError("negative power of a non-monomial")
        result = LaurentPoly.constant(1, self.var)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by var**k."""
        return LaurentPoly(self.coeffs, self.low + k, self.var)

    def scale(self, c) -> "LaurentPoly":
        return self * c

    def invert_variable(self) -> "LaurentPoly":
        """Substitute var -> 1/var."""
        return LaurentPoly(list(reversed(self.coeffs)), -self.high, self.var) if self.coeffs else self

    def conjugate(self) -> "LaurentPoly":
        return LaurentPoly([conj(c) for c in self.coeffs], self.low, self.var)

    def evaluate(self, x):
        total = 0
        for i, c in enumerate(self.coeffs):
            e = self.low + i
            if e >= 0:
                total += c * x ** e
            else:
                total += c * Fraction(1, 1) / Fraction(x) ** (-e)
        return simplify(total)

    def substitute_power(self, k: int) -> "LaurentPoly":
        """Substitute var -> var**k."""
        return LaurentPoly.from_dict({e * k: c for e, c in self.terms().items()}, self.var)

    def with_var(self, var: str) -> "LaurentPoly":
        return LaurentPoly(self.coeffs, self.low, var)

    def to_half(self) -> "LaurentPoly":
        """Rewrite a polynomial in q as a polynomial in q½."""
        if self.var != "q":
            raise ValueError("expected a polynomial in q")
        return self.substitute_power(2).with_var("q½")

    def from_half(self) -> "LaurentPoly":
        """Rewrite a polynomial in q½ as one in q, asserting all exponents are even."""
        if self.var != "q½":
            raise ValueError("expected a polynomial in q½")
        terms = self.terms()
        odd = [e for e in terms if e % 2]
        if odd:
            raise ParityError(f"odd power of q½ survives: exponents {sorted(odd)}")
        return LaurentPoly.from_dict({e // 2: c for e, c in terms.items()}, "q")

    def is_polynomial(self) -> bool:
        return not self.coeffs or self.low >= 0

    def is_rational(self) -> bool:
        return all(not isinstance(c, Cyclotomic) for c in self.coeffs)

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            other = LaurentPoly.constant(other, self.var)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if not self.coeffs and not other.coeffs:
            return True
        return self.var == other.var and self.low == other.low and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.var, self.low, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def to_json(self) -> dict:
        return {"low": self.low, "coeffs": [scalar_str(c) if isinstance(c, Cyclotomic) else
                                            (c if isinstance(c, int) else str(c)) for c in self.coeffs]}

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        out = []
        for e in sorted(self.terms(), reverse=True):
            c = simplify(self.terms()[e])
            if e == 0:
                mono = ""
            elif e == 1:
                mono = self.var
            else:
                mono = f"{self.var}^{e}" if e > 0 else f"{self.var}^({e})"
            if not mono:
                term = scalar_str(c)
                if isinstance(c, Cyclotomic):
                    term = f"({term})"
            elif c == 1:
                term = mono
            elif c == -1:
                term = "-" + mono
            elif isinstance(c, Cyclotomic) or (isinstance(c, Fraction)):
                term = f"({scalar_str(c)})*{mono}"
            else:
                term = f"{c}*{mono}"
            out.append(term)
        return " + ".join(out).replace("+ -", "- ")


class ParityError(AssertionError):
    """A half-integral power of q survived where an integral one is required."""


def _inverse_scalar(c):
    if isinstance(c, Cyclotomic):
        return simplify(c.inverse())
    return Fraction(1) / c


def poly_divmod(a: LaurentPoly, b: LaurentPoly) -> Tuple[LaurentPoly, LaurentPoly]:
    """Euclidean division of genuine polynomials (exponents >= 0)."""
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    var = a.var if a.coeffs else b.var
    num = [0] * a.low + list(a.coeffs) if a.coeffs else []
    den = [0] * b.low + list(b.coeffs)
    lead_inv = _inverse_scalar(den[-1])
    quot = [0] * max(len(num) - len(den) + 1, 0)
    num = list(num)
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1]
        if c:
            f = c * lead_inv
            quot[i] = f
            for j, d in enumerate(den):
                if d:
                    num[i + j] -= f * d
    return LaurentPoly(quot, 0, var), LaurentPoly(num, 0, var)


def poly_gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Monic gcd of two polynomials over the field generated by their coefficients."""
    while not b.is_zero():
        _, r = poly_divmod(a, b)
        a, b = b, r
    if a.is_zero():
        return a
    return a * _inverse_scalar(a.coeffs[-1])


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------

class RationalFunction:
    """A quotient of Laurent polynomials kept in lowest terms.

    Normal form: numerator and denominator coprime, the denominator is an
    ordinary polynomial with constant term 1 (the monomial part is moved into
    the numerator).
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly = None):
        if den is None:
            den = LaurentPoly.constant(1, num.var)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        var = num.var if num.coeffs else den.var
        num = num.with_var(var)
        den = den.with_var(var)
        if num.is_zero():
            self.num = LaurentPoly((), 0, var)
            self.den = LaurentPoly.constant(1, var)
            return
        # move monomial factors out of the denominator
        shift = den.low
        num = num.shift(-shift)
        den = den.shift(-shift)
        nshift = num.low
        num = num.shift(-nshift)
        if den.high > 0:
            g = poly_gcd(num, den)
            if g.high > 0:
                num, _ = poly_divmod(num, g)
                den, _ = poly_divmod(den, g)
        c0 = _inverse_scalar(den.coeffs[0])
        self.num = (num * c0).shift(nshift)
        self.den = den * c0

    @classmethod
    def from_poly(cls, p: LaurentPoly) -> "RationalFunction":
        return cls(p)

    @property
    def var(self) -> str:
        return self.num.var

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, LaurentPoly):
            return RationalFunction(other)
        if isinstance(other, (int, Fraction, Cyclotomic)):
            return RationalFunction(LaurentPoly.constant(other, self.var))
        raise TypeError(type(other).__name__)

    def __add__(self, other):
        return ratfun_add_mul(self, self._coerce(other), "add")

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        return ratfun_add_mul(self, self._coerce(other), "mul")

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent(self) -> bool:
        return self.den.high == 0

    def to_laurent(self) -> LaurentPoly:
        if not self.is_laurent():
            raise ValueError(f"{self} is not a Laurent polynomial")
        return self.num * _inverse_scalar(self.den.coeffs[0])

    def invert_variable(self) -> "RationalFunction":
        return RationalFunction(self.num.invert_variable(), self.den.invert_variable())

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        if self.is_laurent():
            return str(self.to_laurent())
        return f"({self.num})/({self.den})"


def ratfun_add_mul(a: RationalFunction, b: RationalFunction, mode: str) -> RationalFunction:
    """Exact sum or product of two rational functions, returned in normal form."""
    if mode == "add":
        return RationalFunction(a.num * b.den + b.num * a.den, a.den * b.den)
    if mode == "mul":
        return RationalFunction(a.num * b.num, a.den * b.den)
    raise ValueError(f"mode must be 'add' or 'mul', not {mode!r}")


def series_inverse(coeffs: Sequence, order: int) -> List:
    """Power-series inverse of a series with nonzero constant term, to t**order."""
    c0 = coeffs[0]
    if not c0:
        raise PoleAtZeroError("pole at zero: constant term vanishes")
    inv0 = _inverse_scalar(c0)
    out = [inv0]
    for n in range(1, order + 1):
        s = 0
        for k in range(1, min(n, len(coeffs) - 1) + 1):
            if coeffs[k]:
                s += coeffs[k] * out[n - k]
        out.append(simplify(-s * inv0))
    return out


def series_mul(a: Sequence, b: Sequence, order: int) -> List:
    out = [0] * (order + 1)
    for i, x in enumerate(a[:order + 1]):
        if x:
            for j, y in enumerate(b[:order + 1 - i]):
                if y:
                    out[i + j] += x * y
    return [simplify(c) for c in out]


def series_expand(f: Union[RationalFunction, LaurentPoly], order: int) -> List:
    """Coefficients of t**0 .. t**order in the power-series expansion of f."""
    if isinstance(f, LaurentPoly):
        f = RationalFunction(f)
    if order < 0:
        raise ValueError("order must be nonnegative")
    if not f.num.is_zero() and f.num.low < 0:
        raise PoleAtZeroError(f"pole at zero of order {-f.num.low}")
    num = [0] * (f.num.low if f.num.coeffs else 0) + list(f.num.coeffs)
    inv = series_inverse(list(f.den.coeffs), order)
    return series_mul(num, inv, order)


def poly_from_series(coeffs: Sequence, var: str = "q") -> LaurentPoly:
    return LaurentPoly(coeffs, 0, var)


def require(condition: bool, message: str):
    if not condition:
        raise ValidationError(message)
