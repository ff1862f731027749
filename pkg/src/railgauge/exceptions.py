class RailgaugeError(Exception):
    pass


class InvalidModeCount(RailgaugeError, ValueError):
    pass


class NotPowerOfTwo(InvalidModeCount):
    pass


class InvalidPort(RailgaugeError, IndexError):
    pass


class DimensionMismatch(RailgaugeError, ValueError):
    pass


class InvalidProbability(RailgaugeError, ValueError):
    pass


class InvalidPhase(RailgaugeError, ValueError):
    pass


class InvalidSigns(RailgaugeError, ValueError):
    pass


class NotDiscriminating(RailgaugeError, ValueError):
    pass


class InvalidAmplitude(RailgaugeError, ValueError):
    pass


class ConfigError(RailgaugeError, ValueError):
    pass
