"""Exception types raised across discordlab."""


class DiscordLabError(ValueError):
    """Base class for all domain errors."""


class NotSquare(DiscordLabError):
    pass


class NotHermitian(DiscordLabError):
    pass


class DimensionMismatch(DiscordLabError):
    pass


class InvalidDimension(DiscordLabError):
    pass


class InvalidRank(DiscordLabError):
    pass


class InvalidState(DiscordLabError):
    """Matrix fails density-matrix validation (Hermiticity, trace, positivity)."""


class InvalidMeasurement(DiscordLabError):
    pass


class AlphaOutOfRange(DiscordLabError):
    pass


class ReconstructionNotPSD(DiscordLabError):
    pass


class LengthMismatch(DiscordLabError):
    pass


class WrongDimension(DiscordLabError):
    pass


class InsufficientGrid(DiscordLabError):
    pass


class InsufficientCount(DiscordLabError):
    pass


class InvalidConfig(DiscordLabError):
    pass


class IoError(OSError):
    """Output could not be written."""
