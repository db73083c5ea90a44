"""Exception hierarchy shared by every module."""


class CubeComplexError(Exception):
    pass


class StructuralError(CubeComplexError, ValueError):
    """The input is not a well-formed finite simple graph (or wallspace)."""


class NotMedianError(CubeComplexError, ValueError):
    """An operation that needs a validated median graph received something else."""

    def __init__(self, report):
        self.report = report
        super().__init__(f"graph is not a median graph: {report.reason} (witness {report.witness})")


class CapExceeded(CubeComplexError):
    pass


class NotConvexError(CubeComplexError, ValueError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"vertex set is not convex: {witness[2]} lies on a geodesic "
                         f"between {witness[0]} and {witness[1]}")


class NotAnAutomorphism(CubeComplexError, ValueError):
    def __init__(self, message, edge=None):
        self.edge = edge
        super().__init__(message if edge is None else f"{message}: edge {edge}")


class LawViolation(CubeComplexError, AssertionError):
    """A structural identity that must hold on median graphs failed at run time."""
