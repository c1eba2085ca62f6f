"""Exception types shared across the toolkit."""


class AstveilError(Exception):
    """Base class for all toolkit errors."""


class UnsupportedLanguageError(AstveilError):
    pass


class NonUtf8InputError(AstveilError):
    pass


class EmptyGraphError(AstveilError):
    pass


class SpanOutOfBoundsError(AstveilError):
    pass


class DisconnectedPatternError(AstveilError):
    pass


class NoInstanceFoundError(AstveilError):
    pass


class IndentationUnresolvableError(AstveilError):
    pass


class EmptyTrainingSetError(AstveilError):
    pass


class LengthMismatchError(AstveilError):
    pass


class DegenerateLabelsError(AstveilError):
    pass


class ClientUnavailableError(AstveilError):
    """Remote victim or filler endpoint is unreachable (HTTP 503 etc.)."""


class MalformedResponseError(AstveilError):
    """Remote endpoint answered with a schema-violating payload."""


class ConfigError(AstveilError):
    pass
