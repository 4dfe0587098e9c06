"""Truncated Laurent series in a uniformizer t.

A value is t^floor * p(t) + O(t^prec) for a flint polynomial p.  With
``prec=None`` the value is an exact Laurent polynomial; exact values are
used internally for canonical bases, whose entries are finite.
"""
from ..errors import SchemaError, PrecisionExhausted


class TruncLaurent:
    __slots__ = ("F", "floor", "poly", "prec")

    def __init__(self, F, floor, poly, prec=None):
        self.F = F
        if isinstance(poly, (list, tuple)):
            poly = F.poly([F(c) for c in poly])
        if prec is not None:
            if prec <= floor:
                # no known coefficients: the value is O(t^prec)
                floor, poly = prec, F.poly([])
            elif poly.degree() >= prec - floor:
                poly = poly.truncate(prec - floor)
        self.floor = floor
        self.poly = poly
        self.prec = prec

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, F, prec=None):
        return cls(F, 0, F.poly([]), prec)

    @classmethod
    def scalar(cls, F, c, prec=None):
        return cls(F, 0, F.poly([F(c)]), prec)

    @classmethod
    def monomial(cls, F, e, c=1, prec=None):
        return cls(F, e, F.poly([F(c)]), prec)

    @classmethod
    def from_poly(cls, F, f, prec=None):
        return cls(F, 0, f, prec)

    # -- inspection ---------------------------------------------------
    def is_exact(self):
        return self.prec is None

    def valuation(self):
        """First nonzero exponent, None for an exact zero, prec for O(t^prec)."""
        cs = self.poly.coeffs()
        for i, c in enumerate(cs):
            if c != 0:
                return self.floor + i
        return self.prec

    def is_zero(self):
        return self.poly.degree() < 0

    def coeff(self, e):
        i = e - self.floor
        if i < 0:
            return self.F.zero
        if self.prec is not None and e >= self.prec:
            raise PrecisionExhausted(f"coefficient t^{e} beyond precision {self.prec}")
        if i > self.poly.degree():
            return self.F.zero
        return self.F(self.poly.coeffs()[i])

    def terms(self):
        """(exponent, coefficient) pairs of nonzero known terms."""
        return [(self.floor + i, c) for i, c in enumerate(self.poly.coeffs()) if c != 0]

    def max_exponent(self):
        d = self.poly.degree()
        return None if d < 0 else self.floor + d

    def normalized(self):
        v = self.valuation()
        if v is None or (self.prec is not None and v >= self.prec):
            return TruncLaurent(self.F, 0 if self.prec is None else self.prec,
                                self.F.poly([]), self.prec)
        if v == self.floor:
            return self
        return TruncLaurent(self.F, v, self.poly.right_shift(v - self.floor), self.prec)

    # -- arithmetic ---------------------------------------------------
    def _align(self, other):
        f = min(self.floor, other.floor)
        a = self.poly.left_shift(self.floor - f) if self.floor > f else self.poly
        b = other.poly.left_shift(other.floor - f) if other.floor > f else other.poly
        return f, a, b

    @staticmethod
    def _minprec(p, q):
        if p is None:
            return q
        if q is None:
            return p
        return min(p, q)

    def _coerce(self, other):
        if isinstance(other, TruncLaurent):
            return other
        return TruncLaurent.scalar(self.F, other)

    def __add__(self, other):
        other = self._coerce(other)
        f, a, b = self._align(other)
        return TruncLaurent(self.F, f, a + b, self._minprec(self.prec, other.prec))

    __radd__ = __add__

    def __neg__(self):
        return TruncLaurent(self.F, self.floor, -self.poly, self.prec)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if (self.prec is None and self.is_zero()) or (other.prec is None and other.is_zero()):
            return TruncLaurent.zero(self.F, None)
        va, vb = self.valuation(), other.valuation()
        cands = []
        if self.prec is not None:
            cands.append(self.prec + vb)
        if other.prec is not None:
            cands.append(other.prec + va)
        prec = min(cands) if cands else None
        return TruncLaurent(self.F, self.floor + other.floor, self.poly * other.poly, prec)

    __rmul__ = __mul__

    def shift(self, k):
        """Multiply by t^k."""
        return TruncLaurent(self.F, self.floor + k, self.poly,
                            None if self.prec is None else self.prec + k)

    def scale(self, c):
        return TruncLaurent(self.F, self.floor, self.poly * self.F(c), self.prec)

    def truncate(self, prec):
        if self.prec is not None and prec > self.prec:
            raise PrecisionExhausted(f"cannot raise precision {self.prec} to {prec}")
        return TruncLaurent(self.F, self.floor, self.poly, prec)

    def inverse(self, prec=None):
        """Multiplicative inverse; needs a finite target precision for non-monomials."""
        a = self.normalized()
        v = a.valuation()
        if v is None or (a.prec is not None and v >= a.prec):
            raise ZeroDivisionError("inverse of zero series")
        u = a.poly  # unit part, u(0) != 0
        if a.prec is not None:
            rel = a.prec - v
            target = rel if prec is None else min(rel, prec + v)
            out_prec = target - v
        else:
            if u.degree() == 0:
                return TruncLaurent(self.F, -v, self.F.poly([self.F.one / u.coeffs()[0]]), None)
            if prec is None:
                raise PrecisionExhausted("exact inverse of a non-monomial needs a precision")
            target = prec + v
            out_prec = prec
        inv = _series_inverse(self.F, u, target)
        return TruncLaurent(self.F, -v, inv, out_prec)

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, TruncLaurent):
            other = TruncLaurent.scalar(self.F, other, self.prec)
        if self.prec != other.prec:
            raise PrecisionExhausted("comparison of series with different precision")
        return self.terms() == other.terms()

    def __hash__(self):
        return hash((self.prec, tuple((e, str(c)) for e, c in self.terms())))

    def __repr__(self):
        ts = self.terms()
        body = " + ".join(f"{c}*t^{e}" for e, c in ts) if ts else "0"
        return body if self.prec is None else f"{body} + O(t^{self.prec})"

    # -- JSON ---------------------------------------------------------
    def to_json(self, prec=None):
        prec = self.prec if prec is None else prec
        if prec is None:
            raise ValueError("exact series need an explicit precision for JSON")
        if self.prec is not None and prec > self.prec:
            raise PrecisionExhausted("requested precision exceeds known precision")
        v = self.valuation()
        floor = v if (v is not None and v < prec) else min(0, prec - 1)
        cs = [self.F.to_json_scalar(self.coeff(e)) for e in range(floor, prec)]
        return {"floor": floor, "prec": prec, "coeffs": cs}

    @classmethod
    def from_json(cls, F, obj, path="$"):
        if isinstance(obj, (int, str)) and not isinstance(obj, bool):
            # bare scalar: exact constant, precision supplied by the caller
            return cls.scalar(F, F.from_json_scalar(obj, path), None)
        if not isinstance(obj, dict):
            raise SchemaError("series must be {'floor','prec','coeffs'}", path)
        for k in ("floor", "prec", "coeffs"):
            if k not in obj:
                raise SchemaError(f"series missing '{k}'", path)
        floor, prec, cs = obj["floor"], obj["prec"], obj["coeffs"]
        if not isinstance(floor, int) or not isinstance(prec, int) or not isinstance(cs, list):
            raise SchemaError("series fields have wrong types", path)
        if prec <= floor:
            raise SchemaError("precision must exceed the valuation floor", path + ".prec")
        if len(cs) > prec - floor:
            raise SchemaError("more coefficients than the precision allows", path + ".coeffs")
        vals = [F.from_json_scalar(c, f"{path}.coeffs[{i}]") for i, c in enumerate(cs)]
        return cls(F, floor, F.poly(vals), prec)


def _series_inverse(F, u, n):
    """Inverse of the unit power series u modulo t^n."""
    if n <= 0:
        return F.poly([])
    if hasattr(u, "inverse_series_trunc"):
        return u.inverse_series_trunc(n)
    cs = u.coeffs()
    inv0 = F.one / cs[0]
    out = [inv0]
    for k in range(1, n):
        acc = F.zero
        for i in range(1, min(k, len(cs) - 1) + 1):
            acc += cs[i] * out[k - i]
        out.append(-acc * inv0)
    return F.poly(out)


def laurent_from_terms(F, terms):
    """Exact Laurent polynomial from (exponent, coefficient) pairs."""
    terms = [(e, c) for e, c in terms if c != 0]
    if not terms:
        return TruncLaurent.zero(F)
    lo = min(e for e, _ in terms)
    hi = max(e for e, _ in terms)
    cs = [F.zero] * (hi - lo + 1)
    for e, c in terms:
        cs[e - lo] += F(c)
    return TruncLaurent(F, lo, F.poly(cs), None)
