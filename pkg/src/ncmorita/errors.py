"""Error taxonomy shared by every module.

Each error carries a stable ``code`` string that the CLI copies into its
verdict JSON, plus an optional JSON ``path`` locating bad input.
"""


class NcmError(Exception):
    code = "Error"

    def __init__(self, message="", path=None):
        super().__init__(message)
        self.message = message
        self.path = path

    def to_json(self):
        out = {"code": self.code, "message": self.message}
        if self.path is not None:
            out["path"] = self.path
        return out


def _make(name, doc):
    cls = type(name, (NcmError,), {"code": name, "__doc__": doc})
    return cls


SchemaError = _make("SchemaError", "Input does not match the expected JSON shape.")
BadParameters = _make("BadParameters", "Parameters violate a stated precondition.")
RankDeficient = _make("RankDeficient", "Generators span less than full rank.")
PrecisionExhausted = _make("PrecisionExhausted", "Truncation is too coarse to certify the answer.")
NotContained = _make("NotContained", "Inner lattice is not contained in the outer one.")
NotIrreducible = _make("NotIrreducible", "Closed point polynomial is not monic irreducible.")
UnsupportedField = _make("UnsupportedField", "Algorithm hypotheses fail for this field.")
SplitFailure = _make("SplitFailure", "A central factor could not be split over the base field.")
NotSemisimple = _make("NotSemisimple", "Algebra has nonzero radical.")
NotSplit = _make("NotSplit", "A simple block is not a matrix algebra over the base field.")
LengthMismatch = _make("LengthMismatch", "Dimension vectors have different lengths.")
NotCentral = _make("NotCentral", "Order fails the centrality check.")
NotInvertible = _make("NotInvertible", "Matrix is not invertible.")
NotHereditary = _make("NotHereditary", "Order is not recognized as hereditary.")
InconsistentRank = _make("InconsistentRank", "Assignment rank differs from the lattice rank.")
ClosureCheckFailed = _make("ClosureCheckFailed", "Result failed ring or module closure verification.")
NotStable = _make("NotStable", "Lattice is not stable under the order action.")
NonRationalPoint = _make("NonRationalPoint", "Operation needs a rational (degree one) point.")
NotAnOrder = _make("NotAnOrder", "Lattice is not an order.")
