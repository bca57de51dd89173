from functools import wraps
from numbers import Integral

from .errors import DomainError


def coerce_n(n) -> int:
    if isinstance(n, bool) or not isinstance(n, (Integral, float)):
        raise DomainError(f"n must be an integer, got {n!r}")
    if int(n) != n:
        raise DomainError(f"n must be an integer, got {n!r}")
    if n < 3:
        raise DomainError(f"n must be at least 3, got {n!r}")
    return int(n)


def checked_n(func):
    """Validate and normalize the leading ``n`` argument of a public operation."""

    @wraps(func)
    def wrapper(n, *args, **kwargs):
        return func(coerce_n(n), *args, **kwargs)

    return wrapper


def positive(*names):
    """Reject non-positive values for the named keyword or positional parameters."""

    def wrapper(func):
        code = func.__code__
        positions = {name: code.co_varnames.index(name) for name in names}

        @wraps(func)
        def checked(*args, **kwargs):
            for name, index in positions.items():
                value = kwargs.get(name, args[index] if index < len(args) else None)
                if value is not None and not value > 0:
                    raise DomainError(f"{name} must be positive, got {value!r}")
            return func(*args, **kwargs)

        return checked

    return wrapper

