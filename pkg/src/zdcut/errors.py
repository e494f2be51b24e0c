"""Exception types shared across the package."""


class NetworkError(ValueError):
    """A network description violates a structural invariant.

    ``path`` names the offending field (e.g. ``channels[2].params.matrix``).
    """

    def __init__(self, message, path=None):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class GuardError(RuntimeError):
    """A computation would exceed a state-space or enumeration guard."""


class InfeasibleProfileError(ValueError):
    """A delay profile is not feasible for the requested operation sequence."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"delay profile infeasible, witness {witness}")


class SandboxViolation(RuntimeError):
    """An encoder asked for a received symbol it is not allowed to read."""

    def __init__(self, encoding_edge, requested_edge, slot):
        self.encoding_edge = encoding_edge
        self.edge = requested_edge
        self.slot = slot
        super().__init__(
            f"encoder for edge {encoding_edge} requested Y{requested_edge} "
            f"at slot {slot}, which is not available"
        )


class ConvergenceError(RuntimeError):
    """An iterative solver ran out of iterations before reaching tolerance."""

    def __init__(self, message, gap):
        self.gap = gap
        super().__init__(f"{message} (last gap {gap:.3e})")
