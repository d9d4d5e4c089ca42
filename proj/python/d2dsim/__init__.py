"""Python bindings for the d2dsim simulator."""

import json

from ._core import (
    ConfigError,
    NetworkState,
    StructureError,
    Topology,
    __version__,
    dbscan,
    default_config_json,
    fspl_db,
    fuzzy_art,
    generate_topology,
    kmeans,
    link_se,
    make_topology,
    mec,
)
from . import _core

STRATEGIES = ("dais", "sumrate", "random", "nond2d", "fuzzyart", "dbscan", "mec")


def default_config():
    return json.loads(default_config_json())


def _dump(config):
    return "" if config is None else json.dumps(config)


def build_state(strategy, topology, config=None):
    """Run one strategy on a topology. config is a (partial) scenario dict."""
    return _core.build_state(strategy, topology, _dump(config))


def run_tables(out_dir, n_values=(5, 50, 100, 200), config=None):
    """Write the CSV tables and manifest for a scenario to out_dir."""
    _core.run_tables(_dump(config), list(n_values), str(out_dir))


__all__ = [
    "ConfigError",
    "NetworkState",
    "STRATEGIES",
    "StructureError",
    "Topology",
    "__version__",
    "build_state",
    "dbscan",
    "default_config",
    "fspl_db",
    "fuzzy_art",
    "generate_topology",
    "kmeans",
    "link_se",
    "make_topology",
    "mec",
    "run_tables",
]
