"""Univariate polynomial helpers and the rational function type.

Polynomials are flint ``fmpq_poly`` / ``nmod_poly`` objects; the helpers
here add JSON encoding, Taylor shifts, factorization with a deterministic
order and valuations at closed points.
"""
from ..errors import SchemaError


def deg(f):
    return f.degree()


def is_zero(f):
    return f.degree() < 0


def monic(f):
    if f.degree() < 0:
        return f
    return f / f.leading_coefficient() if f.leading_coefficient() != 1 else f


def coeffs(F, f):
    """Coefficient list, low degree first, as field scalars."""
    cs = f.coeffs()
    return [F(c) for c in cs]


def coeff(F, f, i):
    if i < 0 or i > f.degree():
        return F.zero
    return F(f.coeffs()[i])


def poly_to_json(F, f):
    return [F.to_json_scalar(c) for c in f.coeffs()]


def poly_from_json(F, obj, path="$"):
    if isinstance(obj, (int, str)) and not isinstance(obj, bool):
        return F.poly([F.from_json_scalar(obj, path)])
    if not isinstance(obj, list):
        raise SchemaError("polynomial must be a coefficient array", path)
    return F.poly([F.from_json_scalar(c, f"{path}[{i}]") for i, c in enumerate(obj)])


def taylor_shift(F, f, a):
    """Return f(x + a)."""
    if f.degree() <= 0 or a == 0:
        return f
    return f(F.poly([a, 1]))


def poly_key(F, f):
    return (f.degree(), tuple(F.sort_key(c) for c in reversed(f.coeffs())))


def factor(F, f):
    """Monic irreducible factors with multiplicities, sorted by (degree, coefficients)."""
    if f.degree() <= 0:
        return []
    _, facs = f.factor()
    out = [(monic(g), e) for g, e in facs]
    out.sort(key=lambda ge: poly_key(F, ge[0]))
    return out


def is_irreducible(F, f):
    if f.degree() < 1:
        return False
    facs = factor(F, f)
    return len(facs) == 1 and facs[0][1] == 1


def valuation(f, p):
    """Exponent of the irreducible p in f (f nonzero)."""
    if f.degree() < 0:
        raise ValueError("valuation of zero")
    v = 0
    while True:
        q, r = divmod(f, p)
        if r.degree() >= 0:
            return v
        f = q
        v += 1


def poly_pow(F, f, e):
    out = F.poly([1])
    for _ in range(e):
        out = out * f
    return out


def lcm(f, g):
    if f.degree() < 0 or g.degree() < 0:
        raise ValueError("lcm with zero")
    return monic(divmod(f * g, f.gcd(g))[0])


def exact_div(f, g):
    q, r = divmod(f, g)
    if r.degree() >= 0:
        raise ArithmeticError("inexact polynomial division")
    return q


class RatFunc:
    """Reduced fraction num/den with monic denominator."""

    __slots__ = ("F", "num", "den")

    def __init__(self, F, num, den=None):
        self.F = F
        num = F.coerce_poly(num)
        den = F.poly([1]) if den is None else F.coerce_poly(den)
        if den.degree() < 0:
            raise ZeroDivisionError("zero denominator")
        if num.degree() < 0:
            self.num, self.den = num, F.poly([1])
            return
        g = num.gcd(den)
        if g.degree() > 0:
            num = divmod(num, g)[0]
            den = divmod(den, g)[0]
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        self.num, self.den = num, den

    def _lift(self, other):
        if isinstance(other, RatFunc):
            return other
        return RatFunc(self.F, self.F.coerce_poly(other) if not isinstance(other, int)
                       else self.F.poly([other]))

    def __add__(self, other):
        o = self._lift(other)
        return RatFunc(self.F, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(self.F, -self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return RatFunc(self.F, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.num.degree() < 0:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.F, self.num * o.den, self.den * o.num)

    def __eq__(self, other):
        o = self._lift(other)
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((str(self.num), str(self.den)))

    def is_zero(self):
        return self.num.degree() < 0

    def is_poly(self):
        return self.den.degree() == 0

    def valuation(self, p):
        if self.is_zero():
            return None
        return valuation(self.num, p) - valuation(self.den, p)

    def __repr__(self):
        if self.is_poly():
            return f"({self.num})"
        return f"({self.num})/({self.den})"

    def to_json(self):
        if self.is_poly():
            return poly_to_json(self.F, self.num)
        return {"num": poly_to_json(self.F, self.num), "den": poly_to_json(self.F, self.den)}

    @classmethod
    def from_json(cls, F, obj, path="$"):
        if isinstance(obj, dict):
            if "num" not in obj:
                raise SchemaError("rational function needs 'num'", path)
            num = poly_from_json(F, obj["num"], path + ".num")
            den = poly_from_json(F, obj.get("den", [1]), path + ".den")
            if den.degree() < 0:
                raise SchemaError("zero denominator", path + ".den")
            return cls(F, num, den)
        return cls(F, poly_from_json(F, obj, path))
