"""Exception hierarchy shared by the numerical modules and the scenario runner.

Configuration errors map to exit status 2, numerical failures to exit status 3.
"""

CONFIG_ERROR_STATUS = 2
NUMERICAL_ERROR_STATUS = 3


class PhotonicMoleculesError(Exception):
    """Base class for every error raised by this package."""

    exit_status = 1

    def to_record(self) -> dict:
        record = {"type": type(self).__name__, "message": str(self)}
        for key, value in vars(self).items():
            if key.startswith("_") or key == "message":
                continue
            if isinstance(value, (int, float, str, bool)) or value is None:
                record[key] = value
        return record


class ConfigurationError(PhotonicMoleculesError, ValueError):
    """The requested configuration cannot be run."""

    exit_status = CONFIG_ERROR_STATUS


class NumericalError(PhotonicMoleculesError, ArithmeticError):
    """A numerical stage failed or produced an untrustworthy result."""

    exit_status = NUMERICAL_ERROR_STATUS


class InvalidParameterError(ConfigurationError):
    """Exception raised when a physical parameter is outside its domain.

    Args:
        name (str): The offending parameter.
        value: The rejected value.
        message (str, optional): A message explaining the error.
    """

    def __init__(self, name, value, message=None):
        default_message = "Parameter {} = {!r} is not allowed.".format(name, value)

        self.name = name
        self.value = value
        self.message = message or default_message
        super().__init__(self.message)


class SingularInputError(InvalidParameterError):
    """The bare potential was evaluated at zero separation."""

    def __init__(self, name="r", value=0.0, message=None):
        super().__init__(name, value, message or "The bare van der Waals potential is singular at r = 0.")


class IncompleteConfigurationError(ConfigurationError):
    """Exception raised when an optional input needed by an operation is absent.

    Args:
        names (list of str): The missing inputs.
        operation (str): The operation that needed them.
    """

    def __init__(self, names, operation, message=None):
        default_message = "{} needs {}.".format(operation, ", ".join(names))

        self.names = ", ".join(names)
        self.operation = operation
        self.message = message or default_message
        super().__init__(self.message)


class CFLViolationError(ConfigurationError):
    """The requested time step is unusable for the chosen scheme."""

    def __init__(self, dt, limit, message=None):
        self.dt = dt
        self.limit = limit
        self.message = message or "Time step {:g} exceeds the allowed {:g}.".format(dt, limit)
        super().__init__(self.message)


class SweepCapExceededError(ConfigurationError):
    def __init__(self, n_points, cap):
        self.n_points = n_points
        self.cap = cap
        self.message = "Sweep has {} points, the cap is {}; refusing to start.".format(n_points, cap)
        super().__init__(self.message)


class QuadratureError(NumericalError):
    """An adaptive quadrature did not reach its tolerance."""

    def __init__(self, quantity, detail=None):
        self.quantity = quantity
        self.detail = detail
        self.message = "Quadrature for {} did not converge{}".format(
            quantity, ": {}".format(detail) if detail else "."
        )
        super().__init__(self.message)


class EigensolverError(NumericalError):
    """An eigenpair failed the residual check.

    Args:
        index (int): Position of the offending eigenpair.
        residual (float): Its relative residual.
    """

    def __init__(self, index, residual=float("nan"), message=None):
        self.index = index
        self.residual = residual
        self.message = message or "Eigenpair {} has relative residual {:.3e}.".format(index, residual)
        super().__init__(self.message)


class ResonanceError(NumericalError):
    def __init__(self, quantity, omega):
        self.quantity = quantity
        self.omega = complex(omega).real
        self.message = "Denominator of {} vanishes near omega = {!r}.".format(quantity, omega)
        super().__init__(self.message)


class IllConditionedError(NumericalError):
    def __init__(self, omega, condition):
        self.omega = complex(omega).real
        self.condition = condition
        self.message = "Integral equation at omega = {!r} is ill-conditioned (cond = {:.3e}).".format(
            omega, condition
        )
        super().__init__(self.message)


class InvalidFrequencyError(NumericalError):
    def __init__(self, omega, message=None):
        self.omega = complex(omega).real
        self.message = message or "No decaying branch of the free propagator at omega = {!r}.".format(omega)
        super().__init__(self.message)


class TruncationError(NumericalError):
    """The wave packet reached the edge of the computational grid."""

    def __init__(self, time, edge_fraction):
        self.time = time
        self.edge_fraction = edge_fraction
        self.message = "Field reached the grid edge at t = {:g} (edge weight {:.3e}).".format(time, edge_fraction)
        super().__init__(self.message)


class GridTooSmallError(NumericalError):
    def __init__(self, message):
        self.message = message
        super().__init__(self.message)


class NoBoundStateError(NumericalError):
    def __init__(self, message=None):
        self.message = message or "No bound state exists for these parameters."
        super().__init__(self.message)


class NoCrossingError(NumericalError):
    """The bound term dominates the continuum over the whole search window."""

    def __init__(self, t_max):
        self.t_max = t_max
        self.message = "No bound/continuum crossover for t <= {:g}.".format(t_max)
        super().__init__(self.message)


class FitRejectedError(NumericalError):
    """A two-component fit exceeded its residual limit.

    Args:
        residual (float): Relative L2 misfit of the rejected fit.
        limit (float): The acceptance limit.
        diagnostics (dict, optional): Fitted values kept for inspection.
    """

    def __init__(self, residual, limit, diagnostics=None):
        self.residual = residual
        self.limit = limit
        self.diagnostics = diagnostics or {}
        self.message = "Fit rejected: residual {:.3e} > {:g}.".format(residual, limit)
        super().__init__(self.message)


class ConvergenceError(NumericalError):
    def __init__(self, quantity, change, limit):
        self.quantity = quantity
        self.change = change
        self.limit = limit
        self.message = "{} changed by {:.3e} under refinement (limit {:g}).".format(quantity, change, limit)
        super().__init__(self.message)


class ScenarioError(NumericalError):
    """Raised by a scenario rule that cannot produce its result."""

    def __init__(self, message):
        self.message = message
        super().__init__(self.message)
