"""Closed points of the affine or projective line."""
from ..errors import NotIrreducible, SchemaError, NonRationalPoint
from . import polys


class ClosedPoint:
    """A monic irreducible polynomial, or the point at infinity."""

    __slots__ = ("F", "poly")

    def __init__(self, F, poly=None, infinity=False):
        self.F = F
        if infinity:
            self.poly = None
            return
        f = F.coerce_poly(poly)
        if f.degree() < 1 or f.leading_coefficient() != 1 or not polys.is_irreducible(F, f):
            raise NotIrreducible(f"{f} is not monic irreducible")
        self.poly = f

    @classmethod
    def rational(cls, F, a):
        return cls(F, F.poly([-F(a), 1]))

    @classmethod
    def infinity(cls, F):
        return cls(F, infinity=True)

    @property
    def is_infinity(self):
        return self.poly is None

    @property
    def degree(self):
        return 1 if self.poly is None else self.poly.degree()

    @property
    def is_rational(self):
        return self.poly is None or self.poly.degree() == 1

    def root(self):
        """The coordinate a of a finite rational point x = a."""
        if self.poly is None or self.poly.degree() != 1:
            raise NonRationalPoint(f"{self} has no rational coordinate")
        return -self.F(self.poly.coeffs()[0])

    def key(self):
        if self.poly is None:
            return (1,)
        return (0,) + polys.poly_key(self.F, self.poly)

    def __eq__(self, other):
        return isinstance(other, ClosedPoint) and self.F == other.F and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.poly is None:
            return "(inf)"
        return f"({self.poly})"

    def to_json(self):
        if self.poly is None:
            return {"infinity": True}
        return {"poly": polys.poly_to_json(self.F, self.poly)}

    @classmethod
    def from_json(cls, F, obj, path="$"):
        if isinstance(obj, dict) and obj.get("infinity") is True:
            return cls.infinity(F)
        if isinstance(obj, dict) and "poly" in obj:
            f = polys.poly_from_json(F, obj["poly"], path + ".poly")
            try:
                return cls(F, f)
            except NotIrreducible as exc:
                raise NotIrreducible(exc.message, path + ".poly")
        if isinstance(obj, dict) and "at" in obj:
            return cls.rational(F, F.from_json_scalar(obj["at"], path + ".at"))
        raise SchemaError("point must be {'poly': [...]}, {'at': a} or {'infinity': true}", path)
