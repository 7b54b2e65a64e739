"""Problem plugins: reference counting problems plus the polycube
finite-lattice enumeration, each with an independent brute-force oracle."""

from .brackets import BracketProblem, brackets_oracle
from .diran import DirectedAnimalProblem, diran_count, diran_oracle
from .factor_toy import FactorToyProblem, factor_toy_count
from .polycube import (
    LatticeSpec,
    PolycubeLattice,
    assemble_counts,
    enumerate_lattice,
    polycube_oracle,
)

PROBLEM_NAMES = ("brackets", "diran-a", "diran-b", "factor-toy", "polycube")

__all__ = [
    "BracketProblem",
    "DirectedAnimalProblem",
    "FactorToyProblem",
    "LatticeSpec",
    "PolycubeLattice",
    "PROBLEM_NAMES",
    "assemble_counts",
    "brackets_oracle",
    "diran_count",
    "diran_oracle",
    "enumerate_lattice",
    "factor_toy_count",
    "polycube_oracle",
]
