"""Exception types shared across the kernel."""


class KernelError(Exception):
    """Base class for every error raised by the kernel."""


class UnknownNode(KernelError):
    pass


class UnknownModel(KernelError):
    pass


class UnknownLink(KernelError):
    pass


class UnknownListener(KernelError):
    pass


class DuplicateLink(KernelError):
    pass


class InvalidLink(KernelError):
    pass


class InvalidGeometry(KernelError):
    pass


class InvalidKey(KernelError):
    pass


class InvalidPeriod(KernelError):
    pass


class InvalidDistance(KernelError):
    pass


class InvalidArgument(KernelError):
    pass


class DegenerateDirection(KernelError):
    pass


class MissingWaypoint(KernelError):
    pass


class CapabilityError(KernelError):
    """A behavior reached for a service its handle does not grant."""


class ConfigError(KernelError):
    """Scenario text failed to parse or validate.

    `location` names the offending field (dot path) or the parse position.
    """

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        if location:
            message = f"{message} (at {location})"
        super().__init__(message)
