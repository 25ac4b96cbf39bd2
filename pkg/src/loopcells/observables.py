"""Physics endpoints: trousers states, the coupling b(L), boundary entropies.

The indecomposability parameter ``b`` of a rank-two Jordan cell is measured
by pairing the cell with a *trousers state*: the tensor product of two
half-width ground states, the lattice version of the state obtained by
slitting the cylinder in two.  All pairings are bilinear, taken under the
form that makes the evolution operator self-adjoint, and every measurement
carries its gauge sensitivity ``|<Trousers|v>|`` (the one piece of Jordan
gauge freedom the normalization cannot remove).

Conventions, fixed once here and asserted in the tests:

* Hamiltonian cells are normalized so that ``(L/(pi v_F))(H - E0)`` acts as
  ``[[Delta_L, 1], [0, Delta_L]]`` on ``(v, w)``, i.e. ``w`` is scaled by
  ``pi v_F / L``.
* Transfer cells are normalized so that ``T`` acts as ``lambda_0 *
  exp[-(2/sqrt(3))(pi/L) [[Delta_L, 1], [0, Delta_L]]]``, i.e. ``w`` is
  scaled by ``-(2/sqrt(3)) (pi/L) lambda_1``.
* Ground states: spin chains use bilinear square one; dilute states use
  all-empty component one; trousers states use overlap one with the
  width-L ground state (dilute again all-empty component one).

The Affleck-Ludwig boundary entropies at the end of the module validate the
same scalar products on a unitary chain (Ising) and a non-unitary one (the
dense loop model) through one shared fitting path.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np
import scipy.sparse.linalg as spla
from scipy.optimize import OptimizeWarning, brentq, curve_fit

from . import fixtures, forms, models, spectral
from .diagrams import (
    LinkState,
    basis_index,
    concatenate,
    enumerate_dense,
    enumerate_open,
    glue,
    reflect,
)
from .tl import spin_sector_basis

# ---------------------------------------------------------------------------
# Result records


@dataclass(frozen=True)
class TrousersState:
    """Two half-width ground states placed side by side."""

    model: str
    L: int
    side: str
    vector: np.ndarray
    normalization: str


@dataclass(frozen=True)
class BMeasurement:
    """One finite-size measurement of the coupling b."""

    model: str
    L: int
    value: float
    gauge_sensitivity: float
    delta: float
    level: complex
    convention: str
    imag_defect: float = 0.0


@dataclass(frozen=True)
class FitResult:
    """A 1/L fit: central value, coefficients, and cross-ansatz spread."""

    value: float
    ansatz: str
    coefficients: tuple[float, ...]
    residual: float
    uncertainty: float | None
    candidates: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class PercolationReport:
    """Structure of the would-be Jordan level of the geometric chain."""

    L: int
    level: complex
    cluster_size: int
    geometric_multiplicity: int
    nilpotent_norm: float
    diagonalizable: bool
    deformed_genuine: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class LoopEntropyReport:
    """Lattice boundary entropy of the dense loop model vs the closed form."""

    n: float
    n1: float
    fit: FitResult
    exact: float
    difference: float


# ---------------------------------------------------------------------------
# Spin chain: trousers and b


def _xxz_product_vector(L: int, q: complex) -> tuple[np.ndarray, list[int]]:
    """Unnormalized trousers coefficients on the width-L zero-magnetization basis."""
    half = L // 2
    H_half, half_masks = models.build_xxz(half, q)
    _, g = spectral.ground_state(H_half, "min", gram=np.eye(len(half_masks)))
    masks = spin_sector_basis(L, L // 2)
    index = {m: k for k, m in enumerate(masks)}
    vec = np.zeros(len(masks), dtype=complex)
    for a, ma in enumerate(half_masks):
        for b, mb in enumerate(half_masks):
            vec[index[(ma << half) | mb]] = g[a] * g[b]
    return vec, masks


def trousers_xxz(L: int, q: complex | None = None, side: str = "right") -> TrousersState:
    """Spin-chain trousers state, overlap one with the width-L ground state.

    Needs ``L`` divisible by four so each half chain has a zero-magnetization
    sector.  Left and right versions share their coefficients because the
    pairing is bilinear.
    """
    if L % 4:
        raise ValueError("spin trousers need L/2 even, i.e. L a multiple of 4")
    q = fixtures.Q_VALUE if q is None else q
    vec, masks = _xxz_product_vector(L, q)
    H, _ = models.build_xxz(L, q)
    _, v0 = spectral.ground_state(H, "min", gram=np.eye(len(masks)))
    vec = vec / (vec @ v0)
    return TrousersState("xxz", L, side, vec, "overlap with ground = 1")


def b_xxz(
    L: int,
    q: complex | None = None,
    cell_scale: complex = 1.0,
    cluster_tol: float = 1e-5,
) -> BMeasurement:
    """The coupling b of the spin chain from the twice-degenerate fourth level.

    Pipeline: build the zero-magnetization Hamiltonian, extract the rank-two
    cell at the fourth distinct level, rescale its partner into Hamiltonian
    convention units, and pair with the trousers state.  ``cell_scale``
    multiplies the whole cell and must not change the answer (tested).
    Sizes whose sector outgrows the dense limit go through shift-inverted
    iteration instead.
    """
    if L % 4:
        raise ValueError("b for the spin chain needs L a multiple of 4")
    q = fixtures.Q_VALUE if q is None else q
    v_f = fixtures.FERMI_VELOCITY
    if comb(L, L // 2) <= spectral.DENSE_LIMIT:
        H, masks = models.build_xxz(L, q)
        clusters = spectral.full_spectrum(H, cluster_tol)
        c3 = spectral.level_cluster(clusters, 3)
        if c3.size != 2:
            raise spectral.ClusterSizeError(
                f"fourth level of the L={L} chain is not a double cluster: {c3}"
            )
        cell = spectral.extract_jordan_cell(H, c3.value)
        v3, w = cell.vector, cell.partner
        e0, v0 = spectral.ground_state(H, "min", gram=np.eye(len(masks)))
        level = c3.value
    else:
        H, masks = models.build_xxz_sparse(L, q)
        # (L-1)/2 - 2 sum e_i with e_i spectra in [0, n] bounds E0 from below
        sigma = -1.5 * (L - 1) - 1.0
        vals, vecs = spla.eigs(H.tocsc(), k=16, sigma=sigma)
        clusters = spectral.cluster_eigenvalues(vals, cluster_tol)
        c3 = spectral.level_cluster(clusters, 3)
        level, v3, w, _ = spectral.sparse_jordan_cell(H, c3.value)
        k0 = int(np.argmin(np.abs(vals - clusters[0].value)))
        e0 = vals[k0]
        v0 = vecs[:, k0]
        v0 = spectral.sign_fix(v0 / np.sqrt(complex(v0 @ v0)))
    v3 = cell_scale * v3
    w = cell_scale * w
    w_tilde = (np.pi * v_f / L) * w
    trousers, _ = _xxz_product_vector(L, q)
    trousers = trousers / (trousers @ v0)
    num = trousers @ w_tilde
    den = v3 @ w_tilde
    b = 4 * num**2 / den
    gauge = abs(trousers @ (v3 / np.linalg.norm(v3)))
    delta = spectral.hamiltonian_delta(L, level.real, complex(e0).real, v_f)
    return BMeasurement(
        "xxz", L, float(b.real), float(gauge), float(delta), complex(level),
        "hamiltonian", float(abs(b.imag)),
    )


# ---------------------------------------------------------------------------
# Dilute strip: trousers and b


def _dilute_zero_sector_ground(L: int, x: float, side: str = "right"):
    """Perron ground of the width-L dilute row, on its zero-string states.

    ``side="left"`` grounds the reversed (bra) row instead; the two differ
    for any width above one because the row is not symmetric.
    """
    row = models.build_dilute_T(L, x)
    matrix = row.ket_row if side == "right" else row.bra_row
    T00, _, _, idx0, _ = models.dilute_blocks(row, matrix)
    _, g = spectral.perron_pair(T00)
    states = [row.basis[k] for k in idx0]
    empty = next(i for i, s in enumerate(states) if not any(s.occupied_mask))
    return g / g[empty], states


def _dilute_product_vector(
    L: int, x: float, basis: tuple[LinkState, ...], side: str = "right"
) -> np.ndarray:
    """Trousers coefficients on ``basis``: two half-strip grounds side by side.

    The ket trousers (``side="right"``) describes the future leg of the pair
    of decoupled half-strips and multiplies right half grounds; the bra
    trousers (``side="left"``) describes the past leg and multiplies left
    half grounds.  Cutting the strip reflects the second half (its boundary
    triangles sit on the opposite edge), so the second factor reads the
    ground coefficient of the reflected diagram; for symmetric (even) half
    widths this is invisible.
    """
    g, states = _dilute_zero_sector_ground(L // 2, x, side)
    position = {s: k for k, s in enumerate(states)}
    index = basis_index(basis)
    vec = np.zeros(len(basis))
    for a, sa in enumerate(states):
        for b, sb in enumerate(states):
            vec[index[concatenate(sa, sb)]] = g[a] * g[position[reflect(sb)]]
    return vec


def trousers_dilute(L: int, x: float | None = None, side: str = "right") -> TrousersState:
    """Dilute trousers state, all-empty component one (any even width)."""
    if L % 2:
        raise ValueError("dilute trousers need even L")
    x = fixtures.X_CRITICAL if x is None else x
    row = models.build_dilute_T(L, x)
    vec = _dilute_product_vector(L, x, row.basis, side)
    return TrousersState("dilute", L, side, vec, "all-empty component = 1")


def b_polymer(
    L: int,
    x: float | None = None,
    right_scale: float = 1.0,
    left_scale: float = 1.0,
) -> BMeasurement:
    """The coupling b of dilute polymers from the width-L transfer row.

    The row is block triangular over string sectors, so the cell at the
    leading two-string eigenvalue is extracted blockwise, once for the ket
    row and once for the reversed (bra) row; the bra-row eigenvectors turn
    into genuine left eigenvectors through the Gram matrix.  The two cell
    scales ``right_scale``/``left_scale`` must cancel (tested).
    """
    if L % 2:
        raise ValueError("b for the dilute strip needs even L")
    x = fixtures.X_CRITICAL if x is None else x
    row = models.build_dilute_T(L, x)
    T00, T02, T22, idx0, idx2 = models.dilute_blocks(row, row.ket_row)
    M00, M02, M22, _, _ = models.dilute_blocks(row, row.bra_row)
    dim0 = len(idx0)
    solver = (
        spectral.block_jordan_cell
        if dim0 <= spectral.DENSE_LIMIT
        else spectral.block_jordan_cell_sparse
    )
    lam1, v_r, w_r = solver(T00, T02, T22)
    lam1_left, v_l, w_l = solver(M00, M02, M22)
    if abs(lam1_left - lam1) > 1e-9 * abs(lam1):
        raise ArithmeticError(
            f"bra and ket rows disagree on the cell eigenvalue: {lam1} vs {lam1_left}"
        )
    lam0, _ = spectral.perron_pair(T00)

    def scatter(stacked: np.ndarray) -> np.ndarray:
        out = np.zeros(len(row.basis))
        out[idx0] = stacked[:dim0]
        out[idx2] = stacked[dim0:]
        return out

    v_r, w_r = right_scale * scatter(v_r), right_scale * scatter(w_r)
    v_l, w_l = left_scale * scatter(v_l), left_scale * scatter(w_l)
    factor = -(2 / np.sqrt(3.0)) * (np.pi / L) * lam1
    wt_r = factor * w_r
    wt_l = factor * w_l
    gram = forms.dilute_sector_gram(row.basis)
    trousers_bra = _dilute_product_vector(L, x, row.basis, "left")
    trousers_ket = _dilute_product_vector(L, x, row.basis, "right")
    g_wt_r = gram @ wt_r
    g_ket = gram @ trousers_ket
    num_right = trousers_bra @ g_wt_r
    num_left = wt_l @ g_ket
    den = v_l @ g_wt_r
    b = 4 * num_right * num_left / den
    gauge = max(
        abs(trousers_bra @ (gram @ v_r) / np.linalg.norm(v_r)),
        abs(v_l @ g_ket / np.linalg.norm(v_l)),
    )
    delta = spectral.transfer_delta(L, lam1, lam0)
    return BMeasurement(
        "polymer", L, float(b), float(gauge), float(delta), complex(lam1), "transfer"
    )


# ---------------------------------------------------------------------------
# Deformed percolation chain: trousers and b


def _open_product_vector(L: int, y: complex) -> np.ndarray:
    """Trousers coefficients on the width-L open basis at loop weight one."""
    half = L // 2
    H_half = models.build_percolation_H(half, y)
    gram_half = forms.link_gram(half, y).gram
    _, g = spectral.ground_state(H_half, "min", gram=gram_half)
    basis = enumerate_open(L)
    index = basis_index(basis)
    vec = np.zeros(len(basis), dtype=complex)
    half_basis = enumerate_open(half)
    for a, sa in enumerate(half_basis):
        for b, sb in enumerate(half_basis):
            vec[index[concatenate(sa, sb)]] = g[a] * g[b]
    return vec


def trousers_open(L: int, y: complex = 1.0, side: str = "right") -> TrousersState:
    """Open-chain trousers state, overlap one with the ground state under the y-form."""
    if L % 2:
        raise ValueError("open trousers need even L")
    H = models.build_percolation_H(L, y)
    gram = forms.link_gram(L, y).gram
    _, v0 = spectral.ground_state(H, "min", gram=gram)
    vec = _open_product_vector(L, y)
    vec = vec / (vec @ gram @ v0)
    return TrousersState(f"open:y={y}", L, side, vec, "overlap with ground = 1")


def b_deformed(
    L: int,
    y: complex,
    cell_scale: complex = 1.0,
    cluster_tol: float = 1e-5,
) -> BMeasurement:
    """The coupling b of the y-deformed geometric chain at loop weight one.

    Identical pipeline to the spin chain, with the parity-deformed loop
    pairing supplying the left states.  At ``y = 1`` the fourth level is
    diagonalizable and extraction raises ``DiagonalizableLevelError`` --
    there is no cell, hence no b, at the undeformed point.
    """
    if L % 2:
        raise ValueError("b for the open chain needs even L")
    v_f = fixtures.FERMI_VELOCITY
    H = models.build_percolation_H(L, y)
    clusters = spectral.full_spectrum(H, cluster_tol)
    c3 = spectral.level_cluster(clusters, 3)
    if c3.size != 2:
        raise spectral.ClusterSizeError(
            f"fourth level of the L={L} chain is not a double cluster: {c3}"
        )
    cell = spectral.extract_jordan_cell(H, c3.value)
    v3 = cell_scale * cell.vector
    w = cell_scale * cell.partner
    w_tilde = (np.pi * v_f / L) * w
    gram = forms.link_gram(L, y).gram
    e0, v0 = spectral.ground_state(H, "min", gram=gram)
    trousers = _open_product_vector(L, y)
    trousers = trousers / (trousers @ gram @ v0)
    g_wt = gram @ w_tilde
    num = trousers @ g_wt
    den = v3 @ g_wt
    b = 4 * num**2 / den
    gauge = abs(trousers @ (gram @ v3) / np.linalg.norm(v3))
    delta = spectral.hamiltonian_delta(L, c3.value.real, complex(e0).real, v_f)
    return BMeasurement(
        f"deformed:y={y}", L, float(b.real), float(gauge), float(delta),
        complex(c3.value), "hamiltonian", float(abs(b.imag)),
    )


def percolation_check(
    L: int, y_values: tuple = (2.0, -1.0, 0.5), cluster_tol: float = 1e-5
) -> PercolationReport:
    """Diagnose the would-be Jordan level of the geometric (y=1) chain.

    Reports the cluster at the fourth distinct level: its size, geometric
    multiplicity, and the norm of its nilpotent part (which vanishes exactly
    when the level is diagonalizable).  Each deformed chain in ``y_values``
    is probed for a genuine cell at the same level.
    """
    H1 = models.build_percolation_H(L, 1.0)
    clusters = spectral.full_spectrum(H1, cluster_tol)
    c3 = spectral.level_cluster(clusters, 3)
    gm = spectral.geometric_multiplicity(H1, c3.value)
    scale = max(abs(c.value) for c in clusters)
    nil = spectral.nilpotent_norm(H1, c3.value, 1e-4 * scale)
    genuine: dict = {}
    for y in y_values:
        Hy = models.build_percolation_H(L, y)
        cy = spectral.level_cluster(spectral.full_spectrum(Hy, cluster_tol), 3)
        try:
            spectral.extract_jordan_cell(Hy, cy.value)
            genuine[y] = True
        except spectral.DiagonalizableLevelError:
            genuine[y] = False
    return PercolationReport(
        L, complex(c3.value), c3.size, gm, nil, gm >= c3.size, genuine
    )


# ---------------------------------------------------------------------------
# Extrapolation


def extrapolate_b(sizes, values) -> FitResult:
    """Infinite-size estimate of b from finite-size values.

    Central value: least squares over ``b + a1/L + a2/L^2`` (exact
    interpolation when three sizes are given).  The uncertainty is the
    spread across the ansatz family {1/L, 1/L + 1/L^2, 1/L^p}, keeping the
    power-law fit only when it converges away from its exponent bounds with
    a finite covariance.
    """
    if len(sizes) < 3:
        raise ValueError("extrapolation needs at least three sizes")
    order = np.argsort(sizes)
    ell = np.asarray(sizes, dtype=float)[order]
    val = np.asarray(values, dtype=float)[order]
    a2 = np.column_stack([np.ones_like(ell), 1 / ell])
    a3 = np.column_stack([np.ones_like(ell), 1 / ell, 1 / ell**2])
    c2, *_ = np.linalg.lstsq(a2, val, rcond=None)
    c3, *_ = np.linalg.lstsq(a3, val, rcond=None)
    candidates = {"b + a1/L": float(c2[0]), "b + a1/L + a2/L^2": float(c3[0])}

    def power_law(length, b_inf, amp, p):
        return b_inf + amp / np.power(length, p)

    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", OptimizeWarning)
            popt, pcov = curve_fit(
                power_law, ell, val,
                p0=[c3[0], (val[0] - c3[0]) * ell[0], 1.0],
                bounds=([-np.inf, -np.inf, 0.2], [np.inf, np.inf, 5.0]),
                maxfev=20000,
            )
        at_bound = min(abs(popt[2] - 0.2), abs(popt[2] - 5.0)) < 1e-6
        if np.all(np.isfinite(pcov)) and not at_bound:
            candidates["b + a1/L^p"] = float(popt[0])
    except (RuntimeError, ValueError):
        pass
    residual = float(np.sqrt(np.mean((a3 @ c3 - val) ** 2)))
    uncertainty = max(abs(v - c3[0]) for v in candidates.values())
    return FitResult(
        float(c3[0]), "b + a1/L + a2/L^2", tuple(float(c) for c in c3),
        residual, float(uncertainty), candidates,
    )


def _inverse_power_fit(sizes, values) -> FitResult:
    """Exact interpolation by sum_k c_k / L^k, k = -1 .. #sizes - 2.

    The constant coefficient c_0 is the universal (size-independent) term.
    The uncertainty is the change of c_0 when the smallest size is dropped
    and the ansatz shortened accordingly.
    """
    def solve(ls, vs):
        powers = list(range(-1, len(ls) - 1))
        a = np.array([[length ** (-k) for k in powers] for length in ls])
        c = np.linalg.solve(a, vs)
        return powers, c, float(np.max(np.abs(a @ c - vs)))

    order = np.argsort(sizes)
    ell = np.asarray(sizes, dtype=float)[order]
    val = np.asarray(values, dtype=float)[order]
    powers, coeff, residual = solve(ell, val)
    value = float(coeff[powers.index(0)])
    candidates = {}
    uncertainty = None
    if len(ell) > 3:
        sub_powers, sub_coeff, _ = solve(ell[1:], val[1:])
        dropped = float(sub_coeff[sub_powers.index(0)])
        uncertainty = abs(value - dropped)
        candidates["drop-smallest"] = dropped
    return FitResult(
        value,
        f"sum_k c_k/L^k, k=-1..{len(ell) - 2} (exact interpolation)",
        tuple(float(c) for c in coeff),
        residual,
        uncertainty,
        candidates,
    )


# ---------------------------------------------------------------------------
# Boundary entropies


def ising_boundary_entropy(sizes=(12, 14, 16, 18), bc: str = "fixed") -> FitResult:
    """Universal boundary term of the critical transverse-field ring.

    For each size the Perron ground state is paired with the all-up product
    state (``bc="fixed"``) or the uniform sum over configurations
    (``bc="free"``); the constant term of the exact 1/L interpolation of
    ``-log <B|0>`` is the boundary entropy.
    """
    if bc not in ("fixed", "free"):
        raise ValueError(f"unknown boundary condition {bc!r}")
    f_values = []
    for L in sorted(sizes):
        H = models.build_ising(L)
        _, vecs = spla.eigsh(H, k=1, which="SA")
        v = vecs[:, 0]
        v = v * np.sign(v[int(np.argmax(np.abs(v)))])
        fixed_vec, free_vec = models.ising_boundary_vectors(L)
        overlap = float(v @ (fixed_vec if bc == "fixed" else free_vec))
        f_values.append(-np.log(overlap))
    return _inverse_power_fit(sorted(sizes), f_values)


@lru_cache(maxsize=8)
def _dense_loop_counts(L: int) -> np.ndarray:
    return forms.fast_loop_count_matrix(enumerate_dense(L))


@lru_cache(maxsize=8)
def _boundary_loop_row(L: int) -> np.ndarray:
    """Loop counts of the all-adjacent-arcs state glued onto each basis state."""
    basis = enumerate_dense(L)
    roles = (2,) * L
    partner = tuple(i + 1 if i % 2 == 0 else i - 1 for i in range(L))
    boundary = LinkState(roles, partner)
    return np.array([glue(boundary, s).loops for s in basis], dtype=np.int64)


def _transfer_perron(op: models.TransferOperator, positive: bool) -> tuple[float, np.ndarray]:
    """Leading eigenpair of a factored transfer row."""
    dim = op.dim
    if not positive:
        if dim > spectral.DENSE_LIMIT:
            raise ValueError("nonpositive weights need the dense path; size too large")
        vals, vecs = np.linalg.eig(op.matrix())
        k = int(np.argmax(np.abs(vals)))
        v = vecs[:, k].real
        return float(vals[k].real), v / np.linalg.norm(v)
    v = np.ones(dim) / np.sqrt(dim)
    lam = 0.0
    for _ in range(100000):
        nv = op.apply(v)
        nlam = float(np.linalg.norm(nv))
        nv = nv / nlam
        if abs(nlam - lam) <= 1e-14 * nlam and float(np.linalg.norm(nv - v)) <= 1e-13:
            return nlam, nv
        v, lam = nv, nlam
    return lam, v


def _loop_quadratic_form(v: np.ndarray, counts: np.ndarray, n: float) -> float:
    """``v^T G v`` for ``G = n ** counts`` without materializing G."""
    total = 0.0
    for start in range(0, len(v), 512):
        block = np.power(float(n), counts[start : start + 512].astype(np.float64))
        total += float(v[start : start + 512] @ (block @ v))
    return total


def loop_boundary_entropy(n: float, n1: float, sizes=(12, 14, 16, 18)) -> LoopEntropyReport:
    """Boundary entropy of the dense loop model against its closed form.

    The boundary state is the all-adjacent-arcs diagram; every loop closed
    by the final gluing touches the boundary and is weighted ``n1`` instead
    of ``n``.  The ground state is normalized to bilinear square one under
    the weight-``n`` loop form.
    """
    if not (-2 < n < 2):
        raise ValueError("the loop weight must satisfy -2 < n < 2")
    if n1 <= 0:
        raise ValueError("the boundary loop weight must be positive")
    f_values = []
    for L in sorted(sizes):
        if L % 2:
            raise ValueError("the cylinder row needs even sizes")
        op = models.build_dense_loop_T(L, n)
        _, v = _transfer_perron(op, positive=n > 0)
        counts = _dense_loop_counts(L)
        v = v / np.sqrt(_loop_quadratic_form(v, counts, n))
        overlap = float(np.power(float(n1), _boundary_loop_row(L)) @ v)
        f_values.append(-np.log(overlap))
    fit = _inverse_power_fit(sorted(sizes), f_values)
    exact = loop_entropy_exact(n, n1)
    return LoopEntropyReport(n, n1, fit, exact, abs(fit.value - exact))


def loop_entropy_exact(n: float, n1: float) -> float:
    """Closed-form boundary entropy of the loop model.

    With ``n = 2 cos(gamma)`` and ``g = 1 - gamma/pi``, the boundary weight
    determines ``r`` through ``n1 = sin((r+1) gamma)/sin(r gamma)`` and the
    entropy is ``-log[(2g)^(-1/4) (sin(r gamma/g)/sin(r gamma))
    (sin(gamma)/sin(gamma/g))^(1/2)]``.
    """
    if not (-2 < n < 2):
        raise ValueError("the loop weight must satisfy -2 < n < 2")
    gamma = float(np.arccos(n / 2))
    g = 1 - gamma / np.pi
    if abs(n1 - n) < 1e-12:
        r = 1.0
    else:
        eps = 1e-9

        def mismatch(r_):
            return np.sin((r_ + 1) * gamma) / np.sin(r_ * gamma) - n1

        r = float(brentq(mismatch, eps, np.pi / gamma - 1 - eps))
    value = (
        (2 * g) ** -0.25
        * (np.sin(r * gamma / g) / np.sin(r * gamma))
        * np.sqrt(np.sin(gamma) / np.sin(gamma / g))
    )
    return float(-np.log(value))
