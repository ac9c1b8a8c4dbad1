"""Exception types shared across the package."""


class MapforgeError(Exception):
    pass


class InvalidArgument(MapforgeError, ValueError):
    """A structural precondition was violated (bad arity, leaf, corner, edge...)."""


class ResourceLimit(MapforgeError, RuntimeError):
    """An enumeration or plan computation would exceed the configured guard."""


DEFAULT_GUARD = 10**6
