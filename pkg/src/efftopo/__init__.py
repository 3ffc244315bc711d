"""Finite effect algebras, their derived order and the topologies it induces."""
from .catalog import (
    are_isomorphic,
    boolean_algebra,
    build,
    canonical_form,
    direct_product,
    horizontal_sum,
    mo,
    mutate_negative,
    mv_chain,
    parse_spec,
    standard_catalog,
)
from .core import EffectAlgebra, RawTable, validate
from .enumeration import enumerate_all, enumerate_size
from .errors import *  # noqa: F401,F403
from .guards import Limits, size_limits
from .io import export_dot, load_ea, parse_ea, report_json, serialize_ea
from .laws import LAW_IDS, analyze, run_all
from .topo import Topology, frink_ideal_topology, interval_topology, order_topology

__version__ = "0.1.0"
