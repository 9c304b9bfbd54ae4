"""Parsing of spec strings and CLI parameters."""

from __future__ import annotations

import json
import math
from collections.abc import Mapping
from typing import Any

from .copula import Copula, build_copula
from .distortion import Distortion, build_distortion
from .exceptions import CodDomainError
from .marginal import Marginal, build_marginal
from .riskcore import BivariateModel


def _coerce_override(key: str, raw: Any, default: Any) -> Any:
    """Convert one override to the type of the panel default it replaces."""
    if isinstance(default, list):
        if not isinstance(raw, list) or not raw:
            raise CodDomainError(
                f"Parameter '{key}' expects a non-empty list of numbers, got {raw!r}"
            )
        return [_coerce_override(key, item, 0.0) for item in raw]

    if isinstance(raw, bool) or not isinstance(raw, int | float):
        raise CodDomainError(f"Parameter '{key}' expects a number, got {raw!r}")
    if not math.isfinite(raw):
        raise CodDomainError(f"Parameter '{key}' must be finite, got {raw!r}")
    if isinstance(default, int):
        if raw != int(raw):
            raise CodDomainError(f"Parameter '{key}' expects an integer, got {raw!r}")
        return int(raw)
    return float(raw)


def parse_overrides(items: list[str], defaults: Mapping[str, Any]) -> dict[str, Any]:
    """Parse panel parameter overrides from the command line.

    Accepts either 'key=value' items ('points=20', 'thetas=[1, 2, 4]') or a
    single JSON object. Values are coerced to the type of the default they
    replace: integer, float or list of floats.

    Args:
        items: Strings collected by argparse (nargs='*').
        defaults: Parameters of the chosen panel.

    Returns:
        Overrides keyed by parameter name.

    Raises:
        CodDomainError: Malformed item, unknown parameter or wrong value type.
    """
    if not items:
        return {}

    if len(items) == 1 and items[0].strip().startswith("{"):
        try:
            raw = json.loads(items[0])
        except json.JSONDecodeError:
            raise CodDomainError(
                "Overrides appear to be JSON but could not be parsed."
            ) from None
    else:
        raw = {}
        for item in items:
            key, sep, text = item.partition("=")
            if not sep:
                raise CodDomainError(
                    f"Invalid argument format '{item}'. Expected key=value."
                )
            try:
                raw[key.strip()] = json.loads(text)
            except json.JSONDecodeError:
                raise CodDomainError(
                    f"Value of '{key.strip()}' could not be parsed: {text!r}"
                ) from None

    unknown = sorted(set(raw) - set(defaults))
    if unknown:
        raise CodDomainError(
            f"Unknown parameter(s): {', '.join(unknown)}",
            {"allowed": sorted(defaults)},
        )
    return {
        key: _coerce_override(key, value, defaults[key]) for key, value in raw.items()
    }


def _split_spec(text: str) -> tuple[str, tuple[float, ...]]:
    """Split 'family:p1,p2' into its family and float parameters."""
    family, _, rest = text.strip().partition(":")
    if not rest:
        return family, ()
    try:
        return family, tuple(float(x) for x in rest.split(","))
    except ValueError:
        raise CodDomainError(f"Malformed parameters in spec '{text}'") from None


def parse_distortion(text: str) -> Distortion:
    """Parse 'var:0.95', 'power:2', 'id' or 'dual(<spec>)' into a Distortion."""
    text = text.strip()
    if text.startswith("dual(") and text.endswith(")"):
        return parse_distortion(text[5:-1]).dual()
    return build_distortion(*_split_spec(text))


def parse_marginal(text: str) -> Marginal:
    """Parse 'normal:0,1', 'gamma:0.5,1', 'exp:1', ... into a Marginal."""
    return build_marginal(*_split_spec(text))


def parse_copula(text: str) -> Copula:
    """Parse 'gumbel:2', 'fgm:-0.8', 'indep' or 'comono' into a Copula."""
    return build_copula(*_split_spec(text))


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def parse_model(text: str) -> BivariateModel:
    """Parse '<copula>,<marginal_x>,<marginal_y>' into a BivariateModel.

    Tokens are separated by commas; a token that is not a number opens a new
    component, so 'gumbel:2,normal:0,1,normal:0,1' has three components.

    Raises:
        CodDomainError: If the string does not have exactly three components.
    """
    components: list[list[str]] = []
    for token in (part.strip() for part in text.split(",")):
        if not token:
            continue
        if _is_number(token):
            if not components:
                raise CodDomainError(f"Model spec '{text}' starts with a number")
            components[-1].append(token)
        else:
            components.append([token])

    if len(components) != 3:
        raise CodDomainError(
            f"Model spec '{text}' needs a copula and two marginals, "
            f"got {len(components)} component(s)"
        )
    copula, marginal_x, marginal_y = (",".join(part) for part in components)
    return BivariateModel(
        parse_copula(copula), parse_marginal(marginal_x), parse_marginal(marginal_y)
    )


def format_float(value: float) -> str:
    """Shortest decimal string that round-trips to the same double."""
    return repr(float(value))
