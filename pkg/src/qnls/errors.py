"""Exception types shared across the package."""


class QnlsError(Exception):
    """Base class for all package-specific errors."""


# --- grid / series construction ---

class NonPositiveStep(QnlsError):
    """A sampling step (dt or dx) is zero or negative."""


# --- fractional calculus ---

class OrderOutOfRange(QnlsError):
    """Fractional order outside the operational range (-2, inf)."""


class UnsupportedSupport(QnlsError):
    """Differentiation branch requires the signal to vanish at its start."""


# --- spectral operations ---

class NonPositiveA(QnlsError):
    """Dispersion coefficient a must be positive."""


class AliasRisk(QnlsError):
    """Significant spectral energy within 1% of the Nyquist band."""


class ParamOrderViolated(QnlsError):
    """Exponent pair (b, b') outside -1/2 < b' <= 0 <= b <= b'+1, or T outside (0, 1]."""


# --- dispersion / resonance ---

class BelowResonance(QnlsError):
    """mu(a) requested for a < 1/2 where the formula is undefined."""


class ResonantA(QnlsError):
    """No lower bound is claimed at the resonant value a = 1/2."""


class SchemeMismatch(QnlsError):
    """Region scheme incompatible with the given a."""


class ParamDomainViolated(QnlsError):
    """Estimate parameters outside the lemma's admissible window."""


# --- quadrature / bilinear sweeps ---

class QuadratureNonConvergent(QnlsError):
    """Estimated truncation tail exceeds 5% of the integral value."""


class ZeroDenominator(QnlsError):
    """A ratio was requested with a vanishing denominator."""


# --- boundary forcing operator ---

class LambdaOutOfRange(QnlsError):
    """Forcing-class order lambda outside the operational window."""


class SingularQuadratureFail(QnlsError):
    """Oscillatory singular quadrature error estimate exceeds 1%."""


class WindowViolation(QnlsError):
    """(lambda, s) outside the stated window of the requested estimate branch."""


class SupportViolation(QnlsError):
    """Test function support leaves the region where the pairing is defined."""


# --- IBVP solver ---

class BlowUpDetected(QnlsError):
    """Solution norm exceeded 1e6 times its initial scale."""


class NonConvergentNonlinearIteration(QnlsError):
    """Per-step fixed-point sweeps failed to reduce the update."""


class CompatibilityViolation(QnlsError):
    """Endpoint compatibility u0(0)=f(0) (or v0(0)=g(0)) fails for the declared class."""


class EmptyLedger(QnlsError):
    """Mass ledger has no recorded samples."""


class DivergentIteration(QnlsError):
    """Contraction iterate distances increased for three consecutive steps."""


# --- CLI ---

class UnknownCommand(QnlsError):
    """Experiment command not recognized."""


class InvalidConfig(QnlsError):
    """Experiment configuration missing or malformed."""


class EmptyDirectory(QnlsError):
    """Report emission requires at least one manifest in the directory."""
