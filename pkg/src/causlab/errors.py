"""Exception hierarchy and warnings.

Two error families matter to callers: scenario validation problems (bad
input files, exit code 2 from the CLI) and numerical guard trips (a
computation refused to return a number it could not stand behind, exit
code 3).  Every guard carries a short stable name so reports and the CLI
can say *which* guard fired.
"""

from __future__ import annotations


class CauslabError(Exception):
    """Base class for all errors raised by this package."""


class ScenarioValidationError(CauslabError):
    """A scenario file is malformed, inconsistent, or out of range."""


class UnsupportedModelError(CauslabError):
    """The requested operation is undefined for this dielectric model."""


class NumericalGuardError(CauslabError):
    """A runtime numerical guard fired.

    Attributes:
        guard: short stable identifier of the guard that tripped.
    """

    guard = "numerical-guard"

    def __str__(self) -> str:  # prepend the guard name for CLI/report use
        return f"[{self.guard}] {super().__str__()}"


class PoleEvaluationError(NumericalGuardError):
    """A query coincides with a pole of the rational epsilon."""

    guard = "pole-evaluation"


class TailDominanceError(NumericalGuardError):
    """High-frequency tail beyond the grid is too large to neglect."""

    guard = "tail-dominance"


class PVAlignmentError(NumericalGuardError):
    """A real-axis Kramers-Kronig query does not sit on a grid sample.

    The principal-value scheme symmetrizes sample pairs about the
    singular sample and therefore cannot evaluate between samples.
    """

    guard = "pv-alignment"


class BranchPointProximityError(NumericalGuardError):
    """A refractive-index query landed too close to a branch point."""

    guard = "branch-point-proximity"


class DenominatorZeroError(NumericalGuardError):
    """The slab transmission denominator vanished at the query point."""

    guard = "denominator-zero"


class PhaseUnwrapError(NumericalGuardError):
    """Adjacent phase samples jumped too far to unwrap reliably."""

    guard = "phase-unwrap"


class AliasingError(NumericalGuardError):
    """Pulse carrier too close to the Nyquist rate of the time grid."""

    guard = "aliasing"


class ResolutionError(NumericalGuardError):
    """Frequency grid does not resolve the model's resonance structure."""

    guard = "resolution"


class WraparoundError(NumericalGuardError):
    """Signal energy reached the end of the padded FFT window."""

    guard = "wraparound"


class ContainmentError(NumericalGuardError):
    """Pulse is not contained by the time grid to the required level."""

    guard = "containment"


class EmptyWindowError(NumericalGuardError):
    """The guard band left no samples ahead of the front to inspect."""

    guard = "empty-pre-front-window"


class WindingResolutionError(NumericalGuardError):
    """A contour winding could not be resolved by adaptive subdivision."""

    guard = "winding-unresolved"


class MissingArtifactError(CauslabError):
    """A rendering step needs an artifact file no run has produced."""


class BranchCrossingWarning(UserWarning):
    """The square-root continuity path passed a branch point (cut crossing).

    The value is still returned; the crossing itself is the physically
    interesting event for acausal media, so it is reported, not fatal.
    """
