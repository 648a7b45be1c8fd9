class PanelBoundsError(Exception):
    """Root of all errors raised by panelbounds.

    Controllers translate subclasses of `ArgumentError` to exit code 2 and
    subclasses of `NumericalError` to exit code 3.
    """
    EXIT_CODE = 1


class ArgumentError(PanelBoundsError):
    EXIT_CODE = 2


class ConfigError(ArgumentError):
    """For unknown or malformed configuration keys."""

    def __init__(self, key, message):
        self.key = key
        ArgumentError.__init__(self, 'config key %r: %s' % (key, message))


class PanelFormatError(ArgumentError):
    """For malformed panel CSV input.

    :param message: Description of the problem.
    :param row: The 1-based data row number, if one row is at fault.
    :param ids: The offending unit ids, if the problem is per unit.
    """

    def __init__(self, message, row=None, ids=None):
        self.row = row
        self.ids = list(ids) if ids is not None else []

        if row is not None:
            message = 'row %d: %s' % (row, message)

        if self.ids:
            message = '%s (ids: %s)' % (
                message, ', '.join(str(i) for i in self.ids))

        ArgumentError.__init__(self, message)


class UnsupportedReductionError(ArgumentError):
    pass


class NumericalError(PanelBoundsError):
    EXIT_CODE = 3


class SolverError(NumericalError):
    """Raised when a program that must have an optimum does not reach one."""

    def __init__(self, message, status=None, z_index=None):
        self.status = status
        self.z_index = z_index

        if z_index is not None:
            message = '%s (z index %s)' % (message, z_index)

        NumericalError.__init__(self, message)


class IdentificationError(NumericalError):
    pass


class EstimationError(NumericalError):

    def __init__(self, message, half=None):
        self.half = half

        if half is not None:
            message = 'half %d: %s' % (half, message)

        NumericalError.__init__(self, message)


class InfeasibleSlackError(NumericalError):

    def __init__(self, slack, minimal_slack, z_index=None):
        self.slack = slack
        self.minimal_slack = minimal_slack
        self.z_index = z_index
        NumericalError.__init__(
            self, 'identified-set program infeasible at slack %g for z index'
            ' %s; minimal feasible slack is %.3g' % (
                slack, z_index, minimal_slack))
