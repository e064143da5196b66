"""Finite-level computations around curve complexes, pants graphs and Farey quotients.

Modules: ``surfaces`` (types, stable graphs, Sep/NSep), ``simplicial``
(complexes, dual graphs, one-skeleton reconstruction), ``farey`` (congruence
quotients of the Farey tessellation), ``curves`` (normal coordinates, flips,
twists), ``pants`` (pants-graph balls and Farey subgraphs) and ``rig`` (the
verification harness).
"""

__version__ = "0.1.0"
