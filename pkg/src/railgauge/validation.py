from __future__ import annotations

from functools import wraps
from inspect import signature
import math
from numbers import Integral
from numbers import Real
from typing import Any
from typing import Callable

from .exceptions import InvalidModeCount
from .exceptions import InvalidPhase
from .exceptions import InvalidProbability
from .exceptions import NotDiscriminating


def validate_arguments(*validators: Callable[..., None]):
    """Decorator to run argument validators before running function.

    Inspects the signature of the decorated function which when called will
    run all validators with the argument(s) they request to validate. The
    validators will be passed with only the arguments with the same name,
    defaults applied. These are expected to raise if an argument is invalid
    or return.

    Args:
        *validators: Functions whose parameter names are the names of the
            arguments they intend to validate.
    """

    def inner(f):
        sig = signature(f)
        validator_arg_names_pairs = tuple(
            (v, tuple(signature(v).parameters.keys())) for v in validators
        )

        @wraps(f)
        def wrapper(*args, **kwargs):
            bound_args = sig.bind(*args, **kwargs)
            bound_args.apply_defaults()

            for validator, arg_names in validator_arg_names_pairs:
                v_kwargs = {
                    arg_name: bound_args.arguments[arg_name] for arg_name in arg_names
                }
                validator(**v_kwargs)
            return f(*args, **kwargs)

        return wrapper

    return inner


def is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def mode_count_validator(n: Any) -> None:
    if isinstance(n, bool) or not isinstance(n, Integral):
        raise TypeError("mode count must be an integer")
    if n < 1:
        raise InvalidModeCount(f"mode count must be positive, got {n}")
    return None


def phi_validator(phi: Any) -> None:
    if isinstance(phi, bool) or not isinstance(phi, Real):
        raise TypeError("phi must be a real number")
    if not 0.0 <= phi < 2.0 * math.pi:
        raise InvalidPhase(f"phi must lie in [0, 2pi), got {phi}")
    return None


def probability_pair_validator(p_plus: Any, p_minus: Any) -> None:
    for name, p in (("p_plus", p_plus), ("p_minus", p_minus)):
        if p < 0:
            raise InvalidProbability(f"{name} must be non-negative, got {p}")
    return None


def alpha_validator(alpha: Any) -> None:
    if isinstance(alpha, bool) or not isinstance(alpha, Real):
        raise TypeError("alpha must be a real number")
    if alpha == 0:
        raise NotDiscriminating("alpha = 0 cannot discriminate |+> from |->")
    return None
