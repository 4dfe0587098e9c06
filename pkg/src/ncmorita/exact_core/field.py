"""Base fields: the rationals and prime fields F_p.

Scalars are python-flint values (``fmpq`` or ``nmod``).  The field object
also builds the matching polynomial and matrix types so callers never
touch flint constructors directly.
"""
from dataclasses import dataclass
from fractions import Fraction

import flint

from ..errors import SchemaError


@dataclass(frozen=True)
class FieldSpec:
    characteristic: int = 0

    def __post_init__(self):
        p = self.characteristic
        if p < 0 or (p != 0 and not flint.fmpz(p).is_prime()):
            raise SchemaError(f"characteristic {p} is neither 0 nor prime")

    # -- identity -----------------------------------------------------
    @property
    def kind(self):
        return "Q" if self.characteristic == 0 else "Fp"

    @property
    def is_rational(self):
        return self.characteristic == 0

    def __repr__(self):
        return "QQ" if self.is_rational else f"GF({self.characteristic})"

    def to_json(self):
        if self.is_rational:
            return {"kind": "Q"}
        return {"kind": "Fp", "p": self.characteristic}

    @classmethod
    def from_json(cls, obj, path="$"):
        if obj is None:
            return QQ
        if not isinstance(obj, dict) or "kind" not in obj:
            raise SchemaError("field must be an object with 'kind'", path)
        if obj["kind"] == "Q":
            return QQ
        if obj["kind"] == "Fp":
            p = obj.get("p")
            if not isinstance(p, int):
                raise SchemaError("prime field needs integer 'p'", path + ".p")
            try:
                return cls(p)
            except SchemaError as exc:
                raise SchemaError(exc.message, path + ".p")
        raise SchemaError(f"unknown field kind {obj['kind']!r}", path + ".kind")

    # -- scalars ------------------------------------------------------
    def __call__(self, x):
        p = self.characteristic
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            if p == 0:
                return flint.fmpq(x.numerator, x.denominator)
            return flint.nmod(x.numerator, p) / flint.nmod(x.denominator, p)
        if p == 0:
            if isinstance(x, flint.nmod):
                raise TypeError("cannot coerce an F_p scalar into Q")
            return flint.fmpq(x)
        if isinstance(x, flint.fmpq):
            return flint.nmod(int(x.p), p) / flint.nmod(int(x.q), p)
        if isinstance(x, flint.nmod):
            if x.modulus() != p:
                raise TypeError("modulus mismatch")
            return x
        return flint.nmod(int(x), p)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def size(self):
        """Number of elements, or None when infinite."""
        return None if self.is_rational else self.characteristic

    def elements(self):
        if self.is_rational:
            raise ValueError("Q is infinite")
        return [self(i) for i in range(self.characteristic)]

    def to_json_scalar(self, s):
        if self.is_rational:
            s = flint.fmpq(s)
            if s.q == 1:
                return int(s.p)
            return f"{int(s.p)}/{int(s.q)}"
        return int(s)

    def from_json_scalar(self, v, path="$"):
        if isinstance(v, bool) or not isinstance(v, (int, str)):
            raise SchemaError("scalar must be an integer or 'a/b' string", path)
        try:
            return self(v)
        except (ValueError, ZeroDivisionError):
            raise SchemaError(f"bad scalar {v!r}", path)

    def sort_key(self, s):
        if self.is_rational:
            s = flint.fmpq(s)
            return Fraction(int(s.p), int(s.q))
        return int(s)

    def to_int_pair(self, s):
        """(numerator, denominator) as python ints."""
        if self.is_rational:
            return int(s.p), int(s.q)
        return int(s), 1

    # -- polynomials and matrices ------------------------------------
    def poly(self, coeffs=()):
        if self.is_rational:
            return flint.fmpq_poly([flint.fmpq(c) if not isinstance(c, flint.fmpq) else c
                                    for c in coeffs])
        return flint.nmod_poly([int(c) for c in coeffs], self.characteristic)

    def gen(self):
        return self.poly([0, 1])

    def coerce_poly(self, f):
        if isinstance(f, (flint.fmpq_poly, flint.nmod_poly)):
            return f
        if isinstance(f, (list, tuple)):
            return self.poly([self(c) for c in f])
        return self.poly([self(f)])

    def matrix(self, rows, ncols=None):
        rows = [list(r) for r in rows]
        m = len(rows)
        n = len(rows[0]) if m else (ncols or 0)
        flat = [c for r in rows for c in r]
        if self.is_rational:
            return flint.fmpq_mat(m, n, flat)
        return flint.nmod_mat(m, n, [int(c) for c in flat], self.characteristic)

    def zero_matrix(self, m, n):
        if self.is_rational:
            return flint.fmpq_mat(m, n)
        return flint.nmod_mat(m, n, self.characteristic)


QQ = FieldSpec(0)


def GF(p):
    return FieldSpec(p)
