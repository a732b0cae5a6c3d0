"""Self-checks that compare the tableau machinery against dense linear algebra.

Each check returns a :class:`CheckResult` with the worst observed value
next to its bound, so a report shows how much slack there was.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import densesim
from .clifford import conjugate_transform, random_clifford, to_matrix
from .densesim import DenseUnitary, distance
from .f2la import F2Vec
from .oracle import make_perturbed_clifford
from .pauli import SignedPauli, all_paulis
from .pauli import to_matrix as pauli_matrix
from .stabsim import run_twin_c

TOL = 1e-9
CONJ_TOL = 1e-10
POINT_MASS = 1 - 1e-10
VERIFY_MAX_N = 4


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst: float
    bound: float
    cases: int
    detail: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "worst": self.worst,
            "bound": self.bound,
            "cases": self.cases,
            "detail": self.detail,
        }


def phase_aligned_error(a: np.ndarray, b: np.ndarray) -> float:
    """``min over phi of max |a - e^{i phi} b|``, with phi from the overlap."""
    overlap = np.vdot(b, a)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.abs(a - phase * b).max())


def basis_inputs(n: int) -> list[F2Vec]:
    return [F2Vec.zeros(2 * n)] + [F2Vec.unit(2 * n, i) for i in range(2 * n)]


def _pauli_from_bits(alpha: F2Vec, beta: F2Vec) -> np.ndarray:
    # P(alpha, beta): alpha is the Z part
    return pauli_matrix(SignedPauli(alpha, beta))


def check_conjugate_transform(sizes, trials: int, rng, corrupt_sign: bool = False) -> CheckResult:
    """Complex conjugate of each Clifford equals C P(alpha, beta) up to phase."""
    worst, cases = 0.0, 0
    for n in sizes:
        for _ in range(trials):
            t = random_clifford(n, rng)
            m = to_matrix(t).matrix
            alpha, beta = conjugate_transform(t)
            if corrupt_sign:
                alpha = alpha ^ F2Vec.unit(n, 0)
            err = phase_aligned_error(m.conj(), m @ _pauli_from_bits(alpha, beta))
            worst = max(worst, err)
            cases += 1
    return CheckResult("conjugate_transform", worst <= CONJ_TOL, worst, CONJ_TOL, cases)


def check_point_mass(sizes, trials: int, rng) -> CheckResult:
    """Dense twin distribution of a Clifford is a point mass at the stabilizer outcome,
    and outcomes follow ``K = S J + S F``."""
    worst_gap, affine_failures, cases = 0.0, 0, 0
    for n in sizes:
        for _ in range(trials):
            t = random_clifford(n, rng)
            u = to_matrix(t)
            alpha, beta = conjugate_transform(t)
            offset = t.s.mat.matvec(alpha.concat(beta))
            for j in basis_inputs(n):
                k = run_twin_c(t, j)
                mass = densesim.twin_u_distribution(u, j)[k]
                worst_gap = max(worst_gap, 1 - mass)
                if k != t.s.mat.matvec(j) ^ offset:
                    affine_failures += 1
                cases += 1
    passed = worst_gap <= 1 - POINT_MASS and affine_failures == 0
    return CheckResult(
        "twin_point_mass", passed, worst_gap, 1 - POINT_MASS, cases, {"affine_failures": affine_failures}
    )


def _rot_z(theta: float) -> DenseUnitary:
    return DenseUnitary(np.diag([np.exp(-1j * theta), np.exp(1j * theta)]))


def check_distance(sizes, trials: int, rng) -> CheckResult:
    """Fixed values, triangle inequality and left-unitary invariance of D."""
    ident = DenseUnitary(np.eye(2))
    x = DenseUnitary(np.array([[0, 1], [1, 0]]))
    errs = [distance(x, x), abs(distance(ident, x) - 1)]
    for theta in np.linspace(-math.pi, math.pi, 13):
        errs.append(abs(distance(ident, _rot_z(theta)) - abs(math.sin(theta))))
    worst = max(errs)
    triangle, invariance, cases = 0.0, 0.0, len(errs)
    for n in sizes:
        for _ in range(trials):
            u, v, w = (densesim.random_unitary(n, rng) for _ in range(3))
            triangle = max(triangle, distance(u, w) - distance(u, v) - distance(v, w))
            invariance = max(invariance, abs(distance(w @ u, w @ v) - distance(u, v)))
            cases += 1
    worst = max(worst, triangle, invariance)
    return CheckResult(
        "distance_properties",
        worst <= TOL,
        worst,
        TOL,
        cases,
        {"fixed_values": max(errs), "triangle": triangle, "invariance": invariance},
    )


def random_hermitian(n: int, rng) -> np.ndarray:
    d = 1 << n
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    h = (g + g.conj().T) / 2
    return h / np.linalg.norm(h, 2)


def near_unitary(u: DenseUnitary, scale: float, rng) -> DenseUnitary:
    """``u exp(-i scale H)`` for a random Hermitian ``H`` of unit norm."""
    vals, vecs = np.linalg.eigh(random_hermitian(u.n, rng))
    w = (vecs * np.exp(-1j * scale * vals)) @ vecs.conj().T
    return DenseUnitary(u.matrix @ w)


def transpose_conjugation_gap(u: DenseUnitary, v: DenseUnitary) -> float:
    """``max over P of D(U P U^T, V P V^T) - 2 D(U, V)``."""
    du = distance(u, v)
    gap = -math.inf
    for p in all_paulis(u.n):
        pm = pauli_matrix(p)
        a = DenseUnitary(u.matrix @ pm @ u.matrix.T)
        b = DenseUnitary(v.matrix @ pm @ v.matrix.T)
        gap = max(gap, distance(a, b) - 2 * du)
    return gap


def check_transpose_conjugation(sizes, trials: int, rng, max_distance: float = 0.3) -> CheckResult:
    worst, cases = -math.inf, 0
    for n in sizes:
        done = 0
        while done < trials:
            u = densesim.random_unitary(n, rng)
            v = near_unitary(u, rng.uniform(0, max_distance), rng)
            if distance(u, v) > max_distance:
                continue
            worst = max(worst, transpose_conjugation_gap(u, v))
            done += 1
            cases += 1
    return CheckResult("transpose_conjugation_bound", worst <= TOL, worst, TOL, cases)


def stage_one_gap(t, eps: float, rng) -> float:
    """Worst ``(1 - 4 eps^2) - P(correct)`` over basis inputs for one perturbed oracle."""
    _, u = make_perturbed_clifford(t, eps, rng)
    worst = -math.inf
    for j in basis_inputs(t.n):
        mass = densesim.twin_u_distribution(u, j)[run_twin_c(t, j)]
        worst = max(worst, (1 - 4 * eps**2) - mass)
    return worst


def check_stage_one(sizes, trials: int, rng, eps_values=(0.05, 0.1, 0.2, 0.3)) -> CheckResult:
    worst, cases = -math.inf, 0
    for n, eps in product(sizes, eps_values):
        for _ in range(trials):
            worst = max(worst, stage_one_gap(random_clifford(n, rng), eps, rng))
            cases += 1
    return CheckResult("stage_one_bound", worst <= TOL, worst, TOL, cases)


def run_all(n: int, trials: int, rng, corrupt_sign: bool = False) -> list[CheckResult]:
    if not 1 <= n <= VERIFY_MAX_N:
        raise ValueError(f"verify supports 1 <= n <= {VERIFY_MAX_N}, got {n}")
    sizes = range(1, n + 1)
    small = range(1, min(n, 2) + 1)
    mid = range(1, min(n, 3) + 1)
    return [
        check_conjugate_transform(sizes, trials, rng, corrupt_sign),
        check_point_mass(sizes, trials, rng),
        check_distance(mid, trials, rng),
        check_transpose_conjugation(small, trials, rng),
        check_stage_one(mid, max(1, trials // 4), rng),
    ]
