"""Exception types shared across the solver."""


class ConfigError(Exception):
    """Invalid user configuration (bad config file, unknown problem, bad mesh)."""


class NumericalStateError(RuntimeError):
    """The solution left the admissible set or produced non-finite values.

    Carries enough context to report where the run died.
    """

    def __init__(self, message, step=None, time=None, family=None):
        super().__init__(message)
        self.step = step
        self.time = time
        self.family = family
