"""Exception types raised by horosurf."""


class HorosurfError(Exception):
    """Base class for all library errors."""


class DomainError(HorosurfError, ValueError):
    """A point lies outside the domain of a field or map, or too close to its boundary."""


class ChartError(DomainError):
    """A point cannot be expressed in a stereographic chart (it is the projection pole),
    or two charts that must agree do not."""


class RangeError(HorosurfError, ValueError):
    """A value is outside the numerically safe range (for example |rho| > 700)."""


class FocalBlowup(HorosurfError, ArithmeticError):
    """A curvature becomes infinite under the parallel flow.

    ``t_star`` is the time at which the blowup occurs.
    """

    def __init__(self, message, t_star):
        super().__init__(message)
        self.t_star = t_star


class ConfigError(HorosurfError):
    """Malformed or unknown configuration."""
