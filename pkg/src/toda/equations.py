"""Frame equations for the metric error and their Jacobian.

For coupling weights W (one per Higgs bond b -> j) the frame equation is

    Δδ^j = 4 [ Σ_b W_bj e^{δ^j - δ^b} - Σ_b W_jb e^{δ^b - δ^j} ]

which for the n-cyclic family is the affine Toda system with coefficient
4 t^{2/n}, and for the (n-1)-cyclic family is the perturbed Toda system
plus the decoupled equation for ṽ^1 = δ^1.
"""

from typing import List, Optional, Sequence, Union

import numpy as np
import scipy.sparse as sp

from ..grid import RadialGrid, ScalarField, laplacian_matrix, laplacian_values
from ..logging_config import get_logger
from .kinds import SystemKind
from .state import TodaState

logger = get_logger(__name__)


def _bond_fluxes(kind: SystemKind, t: float, frame: np.ndarray):
    """Yield (row, col, 4 W e^{δcol - δrow}) for every bond."""
    weights = kind.coupling_weights(t)
    rows, cols = np.nonzero(weights)
    for row, col in zip(rows, cols):
        yield row, col, 4.0 * weights[row, col] * np.exp(frame[col] - frame[row])


def frame_residual(kind: SystemKind, t: float, frame: np.ndarray, grid) -> np.ndarray:
    """Residual of all n frame equations, shape (n,) + grid.shape."""
    out = np.stack([laplacian_values(f, grid) for f in frame])
    for row, col, flux in _bond_fluxes(kind, t, frame):
        out[col] -= flux
        out[row] += flux
    return out


def residual(state: TodaState) -> List[ScalarField]:
    """Nodewise residual F_j(δ) of the independent equations j = 1..p.

    Boundary nodes are not evaluated and hold zero.
    """
    full = frame_residual(state.kind, state.t, state.frame, state.grid)
    mask = state.grid.interior_mask
    fields = []
    for j in range(state.kind.independent_count):
        values = np.where(mask, full[j], 0.0)
        fields.append(ScalarField(state.grid, values, mask))
    return fields


def residual_vector(state: TodaState) -> np.ndarray:
    """Residual on unknown nodes, node-major (index = node·p + field)."""
    p = state.kind.independent_count
    full = frame_residual(state.kind, state.t, state.frame, state.grid)
    rows = full[:p].reshape(p, -1)[:, state.grid.unknown_nodes]
    return rows.T.ravel()


def coupling_coefficients(kind: SystemKind, t: float, frame: np.ndarray) -> np.ndarray:
    """∂(RHS_j)/∂δ^c per node before folding, shape (n, n, nodes)."""
    flat = frame.reshape(kind.n, -1)
    coeffs = np.zeros((kind.n, kind.n, flat.shape[1]))
    for row, col, flux in _bond_fluxes(kind, t, flat):
        # F_col -= flux, F_row += flux, d flux = flux (dδcol - dδrow)
        coeffs[col, col] -= flux
        coeffs[col, row] += flux
        coeffs[row, col] += flux
        coeffs[row, row] -= flux
    return coeffs


def fold_coefficients(kind: SystemKind, coeffs: np.ndarray) -> np.ndarray:
    """Restrict to independent fields using δ^{mirror(i)} = -δ^i."""
    p = kind.independent_count
    folded = np.empty((p, p) + coeffs.shape[2:])
    for j in range(p):
        for i in range(p):
            folded[j, i] = coeffs[j, i] - coeffs[j, kind.mirror(i)]
    return folded


def index_coupling(
    kind: SystemKind, t: float, frame_at_node: Optional[np.ndarray] = None
) -> np.ndarray:
    """n×n coupling of the frame equations at one node, normalized by -a = -4σ_t².

    At the n-cyclic model this is the circulant with rows (-1, 2, -1), whose
    eigenvalues are the decay factors |1 - ζ^k|².
    """
    if frame_at_node is None:
        frame_at_node = np.zeros(kind.n)
    frame = np.asarray(frame_at_node, dtype=float).reshape(kind.n, 1)
    return -coupling_coefficients(kind, t, frame)[:, :, 0] / kind.prefactor(t)


def linearize(state: TodaState) -> sp.csr_matrix:
    """Jacobian ∂F/∂δ over unknown nodes, node-major ordering.

    The matrix is symmetric and its negative is positive definite; on a
    radial grid it has bandwidth p.
    """
    kind, grid = state.kind, state.grid
    p = kind.independent_count
    unknown = grid.unknown_nodes
    count = unknown.size

    lap = laplacian_matrix(grid)[unknown][:, unknown]
    jac = sp.kron(lap, sp.identity(p), format="csr")

    folded = fold_coefficients(kind, coupling_coefficients(kind, state.t, state.frame))
    folded = folded[:, :, unknown]
    base = np.arange(count) * p
    rows, cols, data = [], [], []
    for j in range(p):
        for i in range(p):
            rows.append(base + j)
            cols.append(base + i)
            data.append(folded[j, i])
    coupling = sp.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(count * p, count * p),
    )
    return (jac + coupling).tocsr()


def toda_vector_defect(
    kind: SystemKind, dvec: Sequence[Union[ScalarField, np.ndarray]]
) -> float:
    """Sup-norm violation of the reality/anti-symmetry constraints on d.

    n-cyclic: d^i = -d^{n+1-i}. (n-1)-cyclic: d^m = 0 and d^i = -d^{m-i}.
    Self-paired slots must vanish and contribute |d|.
    """
    arrays = [np.asarray(d.values if isinstance(d, ScalarField) else d) for d in dvec]
    m = kind.toda_order
    if len(arrays) != m:
        raise ValueError(f"Expected a Toda vector of length {m}, got {len(arrays)}")
    defect = 0.0
    if kind.is_ncyclic:
        pairs = [(i, m - 1 - i) for i in range(m)]
        tail = []
    else:
        # 1-based pairs (i, m - i) over the first m - 1 slots
        pairs = [(i, m - 2 - i) for i in range(m - 1)]
        tail = [arrays[m - 1]]
    for i, j in pairs:
        if i < j:
            defect = max(defect, float(np.max(np.abs(arrays[i] + arrays[j]))))
        elif i == j:
            defect = max(defect, float(np.max(np.abs(arrays[i]))))
    for values in tail:
        defect = max(defect, float(np.max(np.abs(values))))
    return defect


def q_orthogonality_defect(state: TodaState) -> float:
    """Constraint defect of a state's Toda vector; zero by construction."""
    return toda_vector_defect(state.kind, state.dvec)


def curvature_profile(state: TodaState) -> ScalarField:
    """max_j |Δ_h δ^j| per node: the curvature of the metric error."""
    laps = np.stack([laplacian_values(f, state.grid) for f in state.fields])
    mask = state.grid.interior_mask
    values = np.where(mask, np.max(np.abs(laps), axis=0), 0.0)
    return ScalarField(state.grid, values, mask)


def decoupling_defect(state: TodaState, r_lo: float = 0.0, r_hi: Optional[float] = None) -> float:
    """Sup of the curvature profile over a radial window.

    Both terms of the Hitchin equation shrink away from the boundary as t
    grows, so this measures how far the window is from the decoupled limit.

    Raises:
        ValueError: if the state is not on a radial grid.
    """
    if not isinstance(state.grid, RadialGrid):
        raise ValueError("decoupling_defect needs a radial state")
    r_hi = state.grid.R if r_hi is None else r_hi
    nodes = state.grid.window_nodes(r_lo, r_hi)
    if nodes.size == 0:
        return 0.0
    return float(np.max(curvature_profile(state).values[nodes]))
