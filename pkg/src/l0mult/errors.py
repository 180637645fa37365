"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed numeric token or instance file."""


class DimensionError(ValueError):
    """Row/column counts inconsistent with the declared dimensions."""


class InfeasiblePoint(ValueError):
    """A point claimed feasible violates the constraint system."""


class EmptyPolyhedron(Exception):
    """The affine/inequality system of a restricted problem has no point at all.

    Distinct from "nonempty polyhedron whose best residual exceeds epsilon^2";
    callers such as region tests need the difference.
    """


class NoSolutionWithinCap(Exception):
    """No feasible support was found for any cardinality up to the cap."""


class WorkCapExceeded(Exception):
    """A combinatorial loop would exceed the configured work-unit budget."""


class InvalidDirection(ValueError):
    """A direction does not satisfy the defining memberships of its condition label."""


class VerificationFailure(AssertionError):
    """A constructed family member failed exact re-verification.

    This is never expected for a valid construction; it indicates a bug,
    not a property of the input.
    """
