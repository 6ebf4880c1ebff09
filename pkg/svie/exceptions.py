class SvieError(Exception):
    '''Base class for every error raised by svie'''


class DomainError(SvieError, ValueError):
    '''Argument outside the mathematical domain of an operation'''


class InvalidExponentError(DomainError):
    pass


class GridError(DomainError):
    '''Invalid partition, misaligned window or non-divisible length'''


class NoiseError(SvieError, LookupError):
    pass


class CacheError(SvieError, LookupError):
    pass


class RegressionError(SvieError):
    pass


class ConfigError(SvieError):
    '''Invalid run configuration

    The offending key, when there is one, is kept in ``key``.
    '''

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key
