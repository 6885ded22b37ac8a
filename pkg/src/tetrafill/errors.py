"""Exception types shared across the package."""


class ZeroProjection(Exception):
    """A tensor has no component in the invariant subspace."""


class NoConvergence(Exception):
    """The sigma solver exhausted its restarts above tolerance."""

    def __init__(self, best_residual, restarts):
        super().__init__(
            f"no solution below tolerance after {restarts} restarts "
            f"(best residual {best_residual:.3e})"
        )
        self.best_residual = best_residual
        self.restarts = restarts


class InvalidDensity(Exception):
    """A matrix fails the density-matrix checks (PSD within tolerance, unit trace)."""


class InvalidGeometry(Exception):
    """Sigma values do not describe a realizable inscribed-sphere tetrahedron."""


class DegenerateConfig(Exception):
    """Closed-configuration angles too close to 0 or pi; the circle frame is ill-defined."""


class ExcessFailures(Exception):
    """Too many rows of a campaign failed to solve."""

    def __init__(self, failures, total):
        super().__init__(f"{failures} of {total} rows failed")
        self.failures = failures
        self.total = total
