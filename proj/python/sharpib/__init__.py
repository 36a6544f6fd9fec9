"""Python front end for the sharpib immersed-boundary simulator."""

import json

from ._sharpib import (
    ConfigError,
    SolverError,
    __version__,
    ib4_kernel,
    inflating_ring_inner_pressure,
    property_suite,
    static_ring_pressure,
)
from . import _sharpib


def _text(settings):
    if isinstance(settings, str):
        return settings
    return "".join(f"{k} = {str(v).lower() if isinstance(v, bool) else v}\n" for k, v in settings.items())


def config(settings):
    """Resolved configuration for a dict of settings or config-file text."""
    return json.loads(_sharpib.config_json(_text(settings)))


def run(settings, output_dir=""):
    """Run one scenario. Returns the manifest and the final fields."""
    result = _sharpib.run(_text(settings), output_dir)
    result["manifest"] = json.loads(result["manifest"])
    return result


__all__ = [
    "ConfigError",
    "SolverError",
    "__version__",
    "config",
    "ib4_kernel",
    "inflating_ring_inner_pressure",
    "property_suite",
    "run",
    "static_ring_pressure",
]
