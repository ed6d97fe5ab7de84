"""Construction of orthonormal, time-dependent basis sets.

Complete orthonormal vector sets in dimension 2 and 3 are built as ordered
products of elementary one-angle rotations: each factor couples a pair of
levels through a mixing angle and a relative phase, and the rows of the
accumulated unitary are the basis vectors.  On top of that sits the
three-level frame used throughout the package: a designed evolution-path
vector parameterized by two mixing angles (theta, gamma) and two phases,
together with its two orthogonal partners and the analytic time derivatives
of all three.

Basis ordering for the three-level system is fixed package-wide as
(ground, intermediate, excited) = (|g>, |a>, |e>).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import InvariantViolation

__all__ = [
    "FrameBasis",
    "basis_vectors",
    "compose",
    "elementary_matrix",
    "lambda_frame",
    "states_equal_up_to_phase",
    "unitarity_defect",
]

UNITARITY_TOL = 1e-12


def _rotation_block(theta: float, chi: float) -> np.ndarray:
    c, s, e = np.cos(theta), np.sin(theta), np.exp(1j * chi)
    return np.array([[c, e * s], [s, -e * c]], dtype=complex)


def elementary_matrix(dim: int, stage: int, theta: float, chi: float) -> np.ndarray:
    """One elementary rotation factor of the basis construction.

    Stage 1 embeds the 2x2 rotation block in the first two rows/columns
    (padded with an identity tail in dimension 3).  In dimension 3 the
    later stages use the row-exchanged embedding, which cycles the third
    level into the construction:

        [[0,  e^{i chi} sin,  cos],
         [0, -e^{i chi} cos,  sin],
         [1,  0,              0  ]]

    Raises ValueError for an unsupported dimension or stage index.
    """
    if dim not in (2, 3):
        raise ValueError(f"dimension error: dim must be 2 or 3, got {dim}")
    if not 1 <= stage <= dim:
        raise ValueError(f"dimension error: stage {stage} invalid for dim {dim}")
    block = _rotation_block(theta, chi)
    if dim == 2:
        return block
    if stage == 1:
        out = np.eye(3, dtype=complex)
        out[:2, :2] = block
        return out
    out = np.zeros((3, 3), dtype=complex)
    out[0, 1] = block[0, 1]
    out[0, 2] = block[0, 0]
    out[1, 1] = block[1, 1]
    out[1, 2] = block[1, 0]
    out[2, 0] = 1.0
    return out


def compose(stages: list[np.ndarray]) -> np.ndarray:
    """Ordered product of elementary factors, later stages applied on the left.

    compose([A1, A2, A3]) returns A3 @ A2 @ A1, so the rows of the result
    are the vectors produced by feeding the standard basis through the
    stages in order.
    """
    if not stages:
        raise ValueError("dimension error: empty stage list")
    dims = {m.shape for m in stages}
    if len(dims) != 1 or any(m.shape[0] != m.shape[1] for m in stages):
        raise ValueError(f"dimension error: mismatched stage shapes {sorted(dims)}")
    out = reduce(lambda acc, nxt: nxt @ acc, stages)
    defect = unitarity_defect(out)
    if defect > UNITARITY_TOL:
        raise InvariantViolation(f"composed matrix not unitary: defect {defect:.3e}")
    return out


def unitarity_defect(a: np.ndarray) -> float:
    """Max-entry deviation of A A^dagger from the identity."""
    eye = np.eye(a.shape[0])
    return float(np.abs(a @ a.conj().T - eye).max())


def basis_vectors(a: np.ndarray) -> list[np.ndarray]:
    """Rows of a unitary matrix as an orthonormal vector set.

    Raises InvariantViolation if the input fails the unitarity check, since
    the rows would then not be a valid orthonormal set.
    """
    defect = unitarity_defect(a)
    if defect > UNITARITY_TOL:
        raise InvariantViolation(
            f"invariant violation: input not unitary (defect {defect:.3e})"
        )
    return [np.array(row, dtype=complex) for row in a]


def states_equal_up_to_phase(u: np.ndarray, v: np.ndarray, tol: float = 1e-10) -> bool:
    """Whether two unit vectors describe the same physical state (same ray)."""
    return abs(abs(np.vdot(u, v)) - 1.0) <= tol


@dataclass(frozen=True)
class FrameBasis:
    """The designed path vector, its two orthogonal partners, and their rates.

    Vectors are expressed in the fixed (|g>, |a>, |e>) ordering.  phi0 is the
    path the dynamics is meant to follow; phi1 and phi2 complete the frame.
    The d* fields are exact chain-rule time derivatives through the four
    angle parameters, so no finite differencing enters downstream residuals.
    """

    theta: float
    gamma: float
    phase1: float
    phase2: float
    theta_dot: float
    gamma_dot: float
    phase1_dot: float
    phase2_dot: float
    phi0: np.ndarray
    phi1: np.ndarray
    phi2: np.ndarray
    dphi0: np.ndarray
    dphi1: np.ndarray
    dphi2: np.ndarray


def lambda_frame(
    theta: float,
    gamma: float,
    phase1: float,
    phase2: float,
    theta_dot: float = 0.0,
    gamma_dot: float = 0.0,
    phase1_dot: float = 0.0,
    phase2_dot: float = 0.0,
) -> FrameBasis:
    """Three-level frame anchored on the designed evolution path.

    The path vector is

        phi0 = cos(theta) cos(gamma) e^{i phase1} |g>
             + sin(gamma) |a>
             + sin(theta) cos(gamma) e^{i phase2} |e>,

    so theta mixes |g> with |e> and gamma controls the transient weight on
    the intermediate level.  The two partners are the (unique up to phases)
    orthogonal complements with equal intermediate-level weight.
    """
    ct, st = np.cos(theta), np.sin(theta)
    cg, sg = np.cos(gamma), np.sin(gamma)
    e1 = np.exp(1j * phase1)
    e2 = np.exp(1j * phase2)
    r = 1.0 / np.sqrt(2.0)

    phi0 = np.array([ct * cg * e1, sg, st * cg * e2])
    u_plus = sg * ct + 1j * st
    v_minus = sg * st - 1j * ct
    u_minus = sg * ct - 1j * st
    v_plus = sg * st + 1j * ct
    phi1 = -r * np.array([u_plus * e1, -cg, v_minus * e2])
    phi2 = -r * np.array([u_minus * e1, -cg, v_plus * e2])

    # chain-rule derivatives; each e^{i phase} contributes i*phase_dot
    d_ctcg = -theta_dot * st * cg - gamma_dot * ct * sg
    d_stcg = theta_dot * ct * cg - gamma_dot * st * sg
    d_sg = gamma_dot * cg
    d_cg = -gamma_dot * sg
    dphi0 = np.array(
        [
            e1 * (d_ctcg + 1j * phase1_dot * ct * cg),
            d_sg,
            e2 * (d_stcg + 1j * phase2_dot * st * cg),
        ]
    )
    du_plus = gamma_dot * cg * ct - theta_dot * sg * st + 1j * theta_dot * ct
    dv_minus = gamma_dot * cg * st + theta_dot * sg * ct + 1j * theta_dot * st
    du_minus = gamma_dot * cg * ct - theta_dot * sg * st - 1j * theta_dot * ct
    dv_plus = gamma_dot * cg * st + theta_dot * sg * ct - 1j * theta_dot * st
    dphi1 = -r * np.array(
        [
            e1 * (du_plus + 1j * phase1_dot * u_plus),
            -d_cg,
            e2 * (dv_minus + 1j * phase2_dot * v_minus),
        ]
    )
    dphi2 = -r * np.array(
        [
            e1 * (du_minus + 1j * phase1_dot * u_minus),
            -d_cg,
            e2 * (dv_plus + 1j * phase2_dot * v_plus),
        ]
    )
    return FrameBasis(
        theta=theta,
        gamma=gamma,
        phase1=phase1,
        phase2=phase2,
        theta_dot=theta_dot,
        gamma_dot=gamma_dot,
        phase1_dot=phase1_dot,
        phase2_dot=phase2_dot,
        phi0=phi0,
        phi1=phi1,
        phi2=phi2,
        dphi0=dphi0,
        dphi1=dphi1,
        dphi2=dphi2,
    )
