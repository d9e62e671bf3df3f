"""
Error taxonomy for the sparse VAR network toolkit.

Every domain error derives from NetworkInferenceError and carries the exit code
the command line reports for it:

- 2  data ingestion and standardization problems
- 3  singular covariance in the unpenalized estimator
- 4  active-set solver failures (5 for non-convergence)
- 6  penalty construction and class inference
- 7  penalty grid and path selection
- 8  simulation
- 10 configuration
"""

from typing import Optional


class NetworkInferenceError(Exception):
    """Root of all toolkit errors."""

    exit_code = 1


# ----------------------------------------------------------------------------
# Data
# ----------------------------------------------------------------------------


class DataError(NetworkInferenceError):
    exit_code = 2


class ConstantColumn(DataError):
    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"Column '{name}' is constant and cannot be standardized")


class MissingValueWithImputeOff(DataError):
    def __init__(self, row: int, col: int) -> None:
        self.row = row
        self.col = col
        super().__init__(
            f"Missing value at row {row}, column {col} (enable imputation to fill it)"
        )


class AllMissingColumn(DataError):
    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"Column '{name}' has no observed value")


class NotStandardized(DataError):
    def __init__(self) -> None:
        super().__init__("Empirical moments require a standardized time-course matrix")


class DimensionMismatch(DataError):
    pass


class DataFormatError(DataError):
    def __init__(self, path: str, line: Optional[int], message: str) -> None:
        self.path = path
        self.line = line
        where = f"{path}:{line}" if line is not None else path
        super().__init__(f"{where}: {message}")


# ----------------------------------------------------------------------------
# Estimation
# ----------------------------------------------------------------------------


class SingularCovariance(NetworkInferenceError):
    exit_code = 3

    def __init__(self, condition: float, cap: float) -> None:
        self.condition = condition
        self.cap = cap
        super().__init__(
            f"Covariance matrix S is singular (condition number {condition:.3g} exceeds {cap:.3g})"
        )


class SolverError(NetworkInferenceError):
    """Failure of the active-set solver, optionally tied to a network column."""

    exit_code = 4

    def __init__(self, message: str, column: Optional[int] = None) -> None:
        self.message = message
        self.column = column
        prefix = f"column {column}: " if column is not None else ""
        super().__init__(prefix + message)

    def at_column(self, column: int) -> "SolverError":
        return type(self)(self.message, column=column)


class SingularActiveBlock(SolverError):
    pass


class NonConvergence(SolverError):
    exit_code = 5


# ----------------------------------------------------------------------------
# Penalties and classes
# ----------------------------------------------------------------------------


class PenaltyError(NetworkInferenceError):
    exit_code = 6


class MissingInit(PenaltyError):
    def __init__(self, regime: str) -> None:
        super().__init__(f"Penalty regime '{regime}' requires an initial estimate")


class MissingClassification(PenaltyError):
    def __init__(self) -> None:
        super().__init__("Penalty regime 'known' requires a node classification")


class NonPositiveRho(PenaltyError):
    def __init__(self, rho: float) -> None:
        super().__init__(f"Penalty level must be positive, got {rho}")


class AllInfinitePenalties(PenaltyError):
    def __init__(self) -> None:
        super().__init__("Every penalty weight is infinite or zero; no finite null level exists")


class DegenerateInput(PenaltyError):
    pass


# ----------------------------------------------------------------------------
# Selection
# ----------------------------------------------------------------------------


class SelectionError(NetworkInferenceError):
    exit_code = 7


class InvalidGrid(SelectionError):
    pass


class EmptyPath(SelectionError):
    def __init__(self) -> None:
        super().__init__("Cannot select a model from an empty penalty path")


# ----------------------------------------------------------------------------
# Simulation
# ----------------------------------------------------------------------------


class SimulationError(NetworkInferenceError):
    exit_code = 8


class InfeasibleEdgeCount(SimulationError):
    def __init__(self, edges: int, capacity: int) -> None:
        self.edges = edges
        self.capacity = capacity
        super().__init__(f"Cannot place {edges} distinct edges; only {capacity} pairs available")


class SingularSupportBlock(SimulationError):
    def __init__(self, column: int) -> None:
        self.column = column
        super().__init__(f"Covariance block on the true support of column {column} is singular")


class UnstableCoefficients(SimulationError):
    def __init__(self, draws: int, radius: float) -> None:
        self.draws = draws
        self.radius = radius
        super().__init__(
            f"No coefficient draw with spectral radius below 1 in {draws} attempt(s) "
            f"(smallest radius {radius:.3g})"
        )


class DivergentTrajectory(SimulationError):
    def __init__(self) -> None:
        super().__init__("Simulated trajectory overflowed; reduce n or the coefficient scale")


# ----------------------------------------------------------------------------
# Configuration
# ----------------------------------------------------------------------------


class ConfigError(NetworkInferenceError):
    exit_code = 10
