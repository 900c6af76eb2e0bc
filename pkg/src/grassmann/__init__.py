"""Exterior algebra with contractions, stars, subspaces and Fock operators."""
from .multiindex import MultiIndex, epsilon, epsilon_concat, pairs, xi, zeta
from .multivector import (Blade, Multivector, Space, contract_left, contract_right,
                          from_vector, grade_project, inner, involution, wedge)
from .star import Orientation, lstar, meet, join, regressive, rstar, star

__all__ = [
    "MultiIndex", "epsilon", "epsilon_concat", "pairs", "xi", "zeta",
    "Blade", "Multivector", "Space", "contract_left", "contract_right",
    "from_vector", "grade_project", "inner", "involution", "wedge",
    "Orientation", "lstar", "meet", "join", "regressive", "rstar", "star",
]

__version__ = "0.1.0"
