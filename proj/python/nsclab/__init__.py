"""Python bindings of the Navier-Stokes-Cattaneo numerical laboratory."""

import json as _json

from ._core import (
    ConfigKeyError,
    InvalidParams,
    NsclabError,
    PhysicalParams,
    eigenvalues,
    fit_decay,
    green,
    linear_decay,
    nonlinear,
    normalize,
    symbol,
)
from ._core import accept_json as _accept_json
from ._core import config_json as _config_json


def accept(criteria="all", config="", overrides=()):
    """Run acceptance criteria and return the report as a dict."""
    return _json.loads(_accept_json(criteria, config, list(overrides)))


def config(text="", overrides=()):
    """Resolved configuration as a dict of sections."""
    return _json.loads(_config_json(text, list(overrides)))


__all__ = [
    "ConfigKeyError",
    "InvalidParams",
    "NsclabError",
    "PhysicalParams",
    "accept",
    "config",
    "eigenvalues",
    "fit_decay",
    "green",
    "linear_decay",
    "nonlinear",
    "normalize",
    "symbol",
]
