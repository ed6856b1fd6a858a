"""Exception types shared across the package."""


class SonolensError(Exception):
    """Base class for all package errors."""


class UnreadableFile(SonolensError):
    pass


class UnsupportedEncoding(SonolensError):
    pass


class EmptyAudio(SonolensError):
    pass


class NoMatches(SonolensError):
    pass


class OutOfRangeAnnotation(SonolensError):
    pass


class InvalidParams(SonolensError):
    pass


class ClipTooShort(SonolensError):
    pass


class NonPositiveFrequency(SonolensError):
    pass


class UnknownSelection(SonolensError):
    pass


class KTooLarge(SonolensError):
    pass


class RenderFailure(SonolensError):
    pass


class BundleMissing(Warning):
    """Raised as a warning when the interactive HTML bundle is unavailable."""
