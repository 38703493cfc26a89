"""Exception hierarchy. Every error carries a stable machine-readable ``code``."""


class LawsonError(Exception):
    code = "lawson_error"

    def __init__(self, detail=""):
        super().__init__(detail)
        self.detail = detail


class NonFinite(LawsonError):
    code = "non_finite"


class SingularMatrix(LawsonError):
    code = "singular_matrix"


class NonUnimodular(LawsonError):
    code = "non_unimodular"


class MixedLattice(LawsonError):
    code = "mixed_lattice"


class DegenerateG(LawsonError):
    code = "degenerate_g"


class ZeroZeta(LawsonError):
    code = "zero_zeta"


class PoleEvaluation(LawsonError):
    code = "pole_evaluation"


class PoleApproach(LawsonError):
    code = "pole_approach"


class InadmissiblePath(LawsonError):
    code = "inadmissible_path"


class StepLimitExceeded(LawsonError):
    code = "step_limit_exceeded"


class MismatchedParams(LawsonError):
    code = "mismatched_params"


class GridTooSmall(LawsonError):
    code = "grid_too_small"


class TraceTargetFailure(LawsonError):
    """Root finder gave up. ``reason`` is one of Singular, MaxIter, LeftDomain."""

    code = "trace_target_failure"

    def __init__(self, reason, detail="", last=None):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason
        self.last = last
