"""Class invariants for CM construction from Ramanujan's eta quotients g0..g3.

Modules: cyclotomic (Z[zeta_72]), quadforms, orderunits ((O/72O)*),
reciprocity (unit actions on the g_i), etaeval, classpoly, cmcurve, cli.
"""

__version__ = "0.1.0"
