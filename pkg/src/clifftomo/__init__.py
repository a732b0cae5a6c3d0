"""Learning Clifford unitaries from Bell-basis twin circuits.

The exact learner recovers an n-qubit Clifford up to global phase from
``4n + 3`` oracle queries using a bit-packed stabilizer simulator. A
majority-vote variant learns the closest Clifford to a nearby unitary on a
small-n dense backend.
"""

from .clifford import CliffordTableau, GateSeq, compile, compose, inverse, random_clifford, to_matrix
from .densesim import DenseUnitary, distance, twin_u_distribution
from .f2la import F2Mat, F2Vec, SymplecticMat, SymplecticViolation
from .learner import LearnParams, LearnReport, learn_clifford, learn_clifford_noisy, learn_pauli_noisy
from .oracle import Oracle, make_clifford_oracle, make_perturbed_clifford
from .pauli import SignedPauli

__version__ = "0.1.0"

__all__ = [
    "CliffordTableau",
    "DenseUnitary",
    "F2Mat",
    "F2Vec",
    "GateSeq",
    "LearnParams",
    "LearnReport",
    "Oracle",
    "SignedPauli",
    "SymplecticMat",
    "SymplecticViolation",
    "compile",
    "compose",
    "distance",
    "inverse",
    "learn_clifford",
    "learn_clifford_noisy",
    "learn_pauli_noisy",
    "make_clifford_oracle",
    "make_perturbed_clifford",
    "random_clifford",
    "to_matrix",
    "twin_u_distribution",
]
