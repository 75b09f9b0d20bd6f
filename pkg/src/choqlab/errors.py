"""Exception hierarchy shared by all choqlab modules."""


class ChoqlabError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(ChoqlabError):
    """Invalid configuration: bad parameter ranges, malformed documents,
    mismatched grid/table pairs."""


class NumericError(ChoqlabError):
    """A numerical routine failed to converge (root finds, solvers)."""


class DegenerateDirectionError(ChoqlabError):
    """A ray through the given field never reaches negative energy, so no
    scaling onto the stationary-ray set exists."""


class DegenerateStartError(ChoqlabError):
    """The descent iterate collapsed to the zero field."""


class HypothesesNotVerified(ChoqlabError):
    """An operation that relies on the structural hypotheses of the
    coefficient model was called before those hypotheses were checked."""


class WindowError(ChoqlabError):
    """A fit window is invalid (too few nodes, non-positive data, or
    outside the trusted part of the domain)."""
