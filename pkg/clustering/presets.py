# clustering/presets.py
# Named method variants (MA, MVM, MVP, EVM, EVP, GL) as solver configurations

import re
from enum import Enum

from django.conf import settings
from pydantic import ValidationError

from mlouvain.exceptions import ConfigurationError

from .config import QualityConfig, SolverConfig, Variant


class Method(str, Enum):
    MA = "MA"
    MVM = "MVM"
    MVP = "MVP"
    EVM = "EVM"
    EVP = "EVP"
    GL = "GL"


VARIANTS = {
    Method.MA: Variant.MEAN,
    Method.GL: Variant.MEAN,
    Method.MVM: Variant.VAR_MINUS,
    Method.EVM: Variant.VAR_MINUS,
    Method.MVP: Variant.VAR_PLUS,
    Method.EVP: Variant.VAR_PLUS,
}

# methods that carry a list length in their label, e.g. "MVM2"
LIST_METHODS = {Method.MA, Method.MVM, Method.MVP}
GAMMA_METHODS = {Method.MVM, Method.MVP, Method.EVM, Method.EVP}

_LABEL = re.compile(r"^(MA|MVM|MVP|EVM|EVP|GL)(\d*)$")


def solver_defaults() -> dict:
    return {
        "max_outer_iters": getattr(settings, "LOUVAIN_MAX_OUTER_ITERS", 100),
        "max_inner_sweeps": getattr(settings, "LOUVAIN_MAX_INNER_SWEEPS", 1000),
        "check_invariants": getattr(settings, "LOUVAIN_CHECK_INVARIANTS", False),
    }


def preset(name, h: int | None = None, gamma: float | None = None, **options) -> SolverConfig:
    """Solver configuration for method ``name``.

    MA needs ``h``; MVM and MVP need ``h >= 2`` and ``gamma``; EVM and EVP
    fix ``h = 1`` and need ``gamma``; GL is the mean variant with ``h = 1``.
    Extra keyword arguments (``ordering``, ``seed``, bounds, ...) go to
    :class:`SolverConfig`.

    Raises:
        ConfigurationError: arguments do not fit the method.

    """
    try:
        method = Method(str(name).upper())
    except ValueError:
        raise ConfigurationError(f"unknown method {name!r}") from None

    if method in (Method.EVM, Method.EVP, Method.GL):
        if h not in (None, 1):
            raise ConfigurationError(f"{method.value} runs with h=1, got h={h}")
        h = 1
    elif h is None:
        raise ConfigurationError(f"{method.value} needs a list length h")
    elif method in (Method.MVM, Method.MVP) and h < 2:
        raise ConfigurationError(f"{method.value} needs h >= 2, got h={h}")

    if method in GAMMA_METHODS:
        if gamma is None:
            raise ConfigurationError(f"{method.value} needs gamma")
    elif gamma is not None:
        raise ConfigurationError(f"{method.value} does not take gamma")

    quality_options = {"variant": VARIANTS[method], "h": h}
    if gamma is not None:
        quality_options["gamma"] = gamma
    try:
        return SolverConfig(
            quality=QualityConfig(**quality_options), **{**solver_defaults(), **options}
        )
    except ValidationError as e:
        raise ConfigurationError(f"invalid {method.value} configuration: {e}") from e


def parse_method(label: str):
    """Split a method label such as ``"MVM2"`` into ``(Method.MVM, 2)``.

    Labels without digits give ``h = None``; ``GL``, ``EVM`` and ``EVP`` reject digits.
    """
    match = _LABEL.match(label.strip().upper())
    if match is None:
        raise ConfigurationError(f"unknown method label {label!r}")
    method = Method(match.group(1))
    digits = match.group(2)
    if digits and method not in LIST_METHODS:
        raise ConfigurationError(f"{method.value} does not take a list length")
    return method, int(digits) if digits else None


def uses_gamma(method: Method) -> bool:
    return method in GAMMA_METHODS
