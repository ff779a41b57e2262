"""Python front end for the cuspforge extension module.

The extension returns JSON text; the wrappers here decode it.
"""

import json

from .cuspforge_py import SUITES, CuspforgeError
from . import cuspforge_py as _ext

__all__ = ["SUITES", "CuspforgeError", "gosset_counts", "gosset_lattice", "census", "pipeline", "verify"]


def gosset_counts(n):
    """(vertices, facets) of the Gosset polytope G^n."""
    return _ext.gosset_counts(n)


def gosset_lattice(n):
    return json.loads(_ext.gosset_lattice(n))


def census(n, colours="distinct"):
    data = json.loads(_ext.census(n, colours))
    data["total"] = int(data["total"])
    return data


def pipeline(n, out_dir=None, budget=None, census_only=False):
    return json.loads(_ext.pipeline(n, out_dir, budget, census_only))


def verify(suite):
    return json.loads(_ext.verify(suite))
