"""Positive cones on finitely generated groups as exact sign oracles, the
conjugation action on them, and reduction maps between conjugacy relations,
all verified on finite Cayley balls."""

from .words import Word, ball, magnus_sign, magnus_truncated, rs_expand, rs_rewrite
from .groups import FreeAbelian, FreeGroup, Klein, Tararin, Wreath, WreathElement, ball_of, group_from_json
from .cones import Cone, MagnusCone, PhiCone, TararinCone, cone_from_json, conjugate_cone, opposite
from .checks import Report, axioms_check
from .dynamics import Fingerprint, fingerprint, finite_orbit_probe, orbit_explore

__version__ = "0.1.0"
