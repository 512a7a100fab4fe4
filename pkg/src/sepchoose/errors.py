"""Exception types shared across the package.

Every failure mode named by a module contract gets its own class so callers
can catch precisely; all derive from SepchooseError.
"""


class SepchooseError(Exception):
    pass


# -- plane graph construction / queries -------------------------------------

class InconsistentRotation(SepchooseError):
    """Rotation lists are not a valid embedding description."""


class OuterFaceNotFound(SepchooseError):
    """An outer-face hint matched no facial walk."""


class DisconnectedGraph(SepchooseError):
    """Operation requires a connected plane graph."""


class NotACycle(SepchooseError):
    """A CycleRef does not describe a cycle of the graph."""


class QNotInterior(SepchooseError):
    """Q is not a chord/k-chord of the outer cycle."""


class ForbiddenCyclePresent(SepchooseError):
    """Input contains a 5- or 6-cycle where the operation forbids one."""


# -- lists / solver ----------------------------------------------------------

class MissingList(SepchooseError):
    """A list assignment does not cover every vertex."""


class SeparationViolated(SepchooseError):
    """A list assignment violates its declared separation bound."""


class BudgetExceeded(SepchooseError):
    """Deterministic node/structure budget exhausted.

    Carries enough progress information to resume or report.
    """

    def __init__(self, message, emitted=0, nodes=0, cursor=None):
        super().__init__(message)
        self.emitted = emitted
        self.nodes = nodes
        self.cursor = cursor


class PinnedConflict(SepchooseError):
    """A pinned partial coloring is already improper or off-list."""


# -- constructive algorithms -------------------------------------------------

class HypothesisViolated(SepchooseError):
    """Instance fails a theorem hypothesis at entry."""

    def __init__(self, violations):
        super().__init__("hypotheses violated: %s" % ", ".join(violations))
        self.violations = list(violations)


class InternalProofMismatch(SepchooseError):
    """A proof-step precondition failed at runtime.

    This is a first-class outcome: it would falsify the underlying argument
    on this instance.  The payload holds a JSON-serializable reproduction.
    """

    def __init__(self, step, payload=None):
        super().__init__("proof step failed at runtime: %s" % step)
        self.step = step
        self.payload = payload or {}


class XSelectionFailed(InternalProofMismatch):
    """No partial coloring satisfies the X-selection rules."""


# -- discharging / reducibility ---------------------------------------------

class PreconditionViolated(SepchooseError):
    """A discharging precondition (structural assumption) fails."""


class BadHypothesis(SepchooseError):
    """List assignment is not of the required discharging shape."""


class VertexNotEligible(SepchooseError):
    """glue() target vertex has no unique external neighbor."""


class NotFoundWithinBudget(SepchooseError):
    """Bounded search ended without a witness; carries the certificate."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate or {}
