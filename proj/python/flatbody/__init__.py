"""Affinely-rigid flat body with thickness: kinematics, Hamiltonian dynamics and stationary motions."""

import json

import numpy as np

from . import _core
from ._core import FlatbodyError, PHASE_INDEX

TRAJECTORY_COLUMNS = tuple(_core.TRAJECTORY_COLUMNS.split(","))

__all__ = [
    "FlatbodyError",
    "PHASE_INDEX",
    "TRAJECTORY_COLUMNS",
    "assemble_placement",
    "decompose",
    "eom",
    "eom_oracle",
    "hamiltonian",
    "phase_vector",
    "run_checks",
    "simulate",
    "solve_stationary",
]


def phase_vector(**coords):
    """Phase-space vector from named coordinates; unnamed entries are zero.

    ``lambda_`` stands in for the reserved word ``lambda``.
    """
    x = np.zeros(len(PHASE_INDEX))
    for name, value in coords.items():
        name = name.rstrip("_")
        if name not in PHASE_INDEX:
            raise KeyError(f"unknown phase coordinate '{name}'")
        x[PHASE_INDEX[name]] = value
    return x


def decompose(placement):
    """Two-polar decomposition of a 3x3 placement matrix."""
    return json.loads(_core.decompose(np.asarray(placement, dtype=float)))


def assemble_placement(attitude, lam, mu, rho, theta):
    return _core.assemble_placement(np.asarray(attitude, dtype=float), lam, mu, rho, theta)


def hamiltonian(phase, J, J3, potential):
    return _core.hamiltonian(np.asarray(phase, dtype=float), J, J3, potential)


def eom(phase, J, J3, potential):
    return _core.eom(np.asarray(phase, dtype=float), J, J3, potential)


def eom_oracle(phase, J, J3, potential):
    return _core.eom_oracle(np.asarray(phase, dtype=float), J, J3, potential)


def simulate(config):
    """Integrate a run config (dict). Returns (summary dict, trajectory array)."""
    summary, trajectory = _core.simulate(json.dumps(config))
    return json.loads(summary), trajectory


def solve_stationary(config):
    return json.loads(_core.solve_stationary(json.dumps(config)))


def run_checks(seed=None):
    return _core.run_checks() if seed is None else _core.run_checks(seed)
