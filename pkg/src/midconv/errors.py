"""Exception types. Each carries a short machine-readable code for the CLI."""


class MidconvError(Exception):
    code = "error"


def _make(name, code):
    return type(name, (MidconvError,), {"code": code})


NotPrime = _make("NotPrime", "not_prime")
SizeLimitExceeded = _make("SizeLimitExceeded", "size_limit")
DegreeMismatch = _make("DegreeMismatch", "degree_mismatch")
DivisionByZero = _make("DivisionByZero", "division_by_zero")
ZeroInput = _make("ZeroInput", "zero_input")
ZeroScalar = _make("ZeroScalar", "zero_scalar")
PointCollision = _make("PointCollision", "point_collision")
NotIrreducible = _make("NotIrreducible", "not_irreducible")
TrivialConvolutionChar = _make("TrivialConvolutionChar", "trivial_convolution_char")
NotStandardSituation = _make("NotStandardSituation", "not_standard")
ExcludedKummerTranslate = _make("ExcludedKummerTranslate", "excluded_kummer_translate")
MissingStalkDet = _make("MissingStalkDet", "missing_stalk_det")
PointInS = _make("PointInS", "point_in_s")
UnknownInvariantScalar = _make("UnknownInvariantScalar", "unknown_invariant_scalar")
HypothesisFailed = _make("HypothesisFailed", "hypothesis_failed")
UnknownStalk = _make("UnknownStalk", "unknown_stalk")
DimensionOverflow = _make("DimensionOverflow", "dimension_overflow")
InconsistentTraces = _make("InconsistentTraces", "inconsistent_traces")
CrossCheckFailed = _make("CrossCheckFailed", "cross_check_failed")
SchemaError = _make("SchemaError", "schema_error")
