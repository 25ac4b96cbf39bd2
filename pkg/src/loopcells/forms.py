"""Bilinear pairings under which the lattice operators are self-adjoint.

All pairings here are bilinear, never sesquilinear: ``pairing(u, v) =
sum_ij u_i G_ij v_j`` with no complex conjugation, so "norms" may vanish or
be negative.  The Gram matrices ``G`` are symmetric and are built by gluing
the mirror image of one basis diagram on top of another
(:func:`loopcells.diagrams.glue`):

* :func:`loop_gram` -- periodic all-arc basis, weight ``n`` per closed loop;
* :func:`dilute_gram` -- dilute basis: zero unless the empty sites agree and
  no closed loop forms (loops carry weight zero), weight one otherwise;
* :func:`link_gram` -- open arc/string basis at loop weight one, where
  contracting a string pair whose left label is even costs ``y``;
* :func:`identity_gram` -- the spin-chain pairing (Euclidean components,
  bilinear because nothing is conjugated).

:func:`selfadjointness_defect` measures ``max |pairing(Au, v) -
pairing(u, Av)|`` over random vectors, normalized by the operator and vector
scales.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .diagrams import LinkState, enumerate_dense, enumerate_dilute, enumerate_open, glue
from .tl import contraction_weight


@dataclass(frozen=True)
class BilinearForm:
    """A symmetric Gram matrix together with the basis it refers to."""

    basis_tag: str
    gram: np.ndarray
    basis: tuple[LinkState, ...] | None = field(default=None, compare=False)

    def pairing(self, u: np.ndarray, v: np.ndarray) -> complex:
        return complex(np.asarray(u) @ self.gram @ np.asarray(v))

    @property
    def dim(self) -> int:
        return self.gram.shape[0]


def pairing(u: np.ndarray, gram: np.ndarray, v: np.ndarray) -> complex:
    """``u^T G v`` with no conjugation."""
    return complex(np.asarray(u) @ np.asarray(gram) @ np.asarray(v))


def loop_gram(L: int, weight: complex) -> BilinearForm:
    """Gram matrix of the periodic dense basis: ``weight`` per closed loop."""
    basis = enumerate_dense(L)
    counts = loop_count_matrix(basis)
    w = complex(weight) if isinstance(weight, complex) else float(weight)
    gram = np.power(w, counts.astype(np.int64))
    return BilinearForm(f"dense:{L}", gram, basis)


def loop_count_matrix(basis: tuple[LinkState, ...]) -> np.ndarray:
    """Closed-loop counts of every mirror-gluing of two basis states."""
    dim = len(basis)
    counts = np.zeros((dim, dim), dtype=np.int8)
    for a in range(dim):
        for b in range(a, dim):
            c = glue(basis[a], basis[b]).loops
            counts[a, b] = counts[b, a] = c
    return counts


def fast_loop_count_matrix(basis: tuple[LinkState, ...]) -> np.ndarray:
    """Drop-in accelerated :func:`loop_count_matrix` for all-arc bases.

    Gluing two perfect matchings produces only closed cycles, so the count
    reduces to a cycle walk over two partner tables, which a compiled kernel
    handles when numba is installed; otherwise the diagrammatic path runs.
    """
    try:
        # the default layer probe warns on old TBB installs; workqueue always works
        os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")
        from numba import njit, prange
    except ImportError:
        return loop_count_matrix(basis)
    partners = np.array([s.partner for s in basis], dtype=np.int8)

    @njit(parallel=True, cache=True)
    def kernel(p):
        dim, width = p.shape
        out = np.zeros((dim, dim), dtype=np.int8)
        for a in prange(dim):
            seen = np.zeros(width, dtype=np.bool_)
            for b in range(a, dim):
                seen[:] = False
                loops = 0
                for start in range(width):
                    if seen[start]:
                        continue
                    loops += 1
                    i = start
                    while not seen[i]:
                        seen[i] = True
                        j = p[a, i]
                        seen[j] = True
                        i = p[b, j]
                out[a, b] = loops
                out[b, a] = loops
        return out

    return kernel(partners)


def dilute_sector_gram(basis: tuple[LinkState, ...]):
    """Sparse dilute Gram matrix on an arbitrary sub-basis.

    Same entries as :func:`dilute_gram` (one per loop-free gluing with
    matching empty sites), but grouping states by their occupation mask so
    only compatible pairs are glued; returned as a CSR matrix because large
    sector bases make the dense form wasteful.
    """
    import scipy.sparse as sp

    groups: dict[int, list[int]] = {}
    for k, s in enumerate(basis):
        groups.setdefault(s.occupied_mask, []).append(k)
    rows: list[int] = []
    cols: list[int] = []
    for members in groups.values():
        for ai, a in enumerate(members):
            for b in members[ai:]:
                if glue(basis[a], basis[b]).loops == 0:
                    rows.append(a)
                    cols.append(b)
                    if a != b:
                        rows.append(b)
                        cols.append(a)
    dim = len(basis)
    data = np.ones(len(rows))
    return sp.csr_matrix(sp.coo_matrix((data, (rows, cols)), shape=(dim, dim)))


def identity_gram(dim: int, tag: str = "spin") -> BilinearForm:
    """The spin-basis pairing: identity Gram, bilinear (no conjugation)."""
    return BilinearForm(tag, np.eye(dim), None)


def dilute_gram(L: int, parity: str = "even") -> BilinearForm:
    """Gram matrix of the dilute basis.

    An entry vanishes when the empty sites differ or when the gluing closes
    any loop; every surviving gluing (string contractions and through lines
    included) has weight one.
    """
    basis = enumerate_dilute(L, parity)
    dim = len(basis)
    gram = np.zeros((dim, dim))
    for a in range(dim):
        for b in range(a, dim):
            res = glue(basis[a], basis[b])
            if res.mask_match and res.loops == 0:
                gram[a, b] = gram[b, a] = 1.0
    return BilinearForm(f"dilute:{L}:{parity}", gram, basis)


def link_gram(L: int, y: complex = 1.0) -> BilinearForm:
    """Gram matrix of the open arc/string basis at loop weight one.

    Every closed loop counts one.  Contracting a pair of same-side strings
    picks up ``y`` when the left label of the pair is even (the contraction
    straddles two label pairs) and one otherwise; through lines count one.
    At ``y = 1`` this is the plain loop-type pairing of the open basis.
    """
    basis = enumerate_open(L)
    dim = len(basis)
    dtype = complex if isinstance(y, complex) else float
    gram = np.zeros((dim, dim), dtype=dtype)
    for a in range(dim):
        for b in range(a, dim):
            res = glue(basis[a], basis[b])
            w = 1.0
            for i, _ in res.bra_contractions:
                w *= contraction_weight(i, y)
            for i, _ in res.ket_contractions:
                w *= contraction_weight(i, y)
            gram[a, b] = gram[b, a] = w
    return BilinearForm(f"open:{L}:y={y}", gram, basis)


def selfadjointness_defect(
    op: np.ndarray,
    form: BilinearForm,
    trials: int = 20,
    seed: int = 7,
) -> float:
    """Largest normalized asymmetry ``|pairing(Au, v) - pairing(u, Av)|``.

    Sampling random complex vectors; the exact criterion is
    ``G A = A^T G``, which the sampled defect bounds from below.
    """
    op = np.asarray(op)
    if op.shape[0] != form.dim:
        raise ValueError(f"operator dimension {op.shape[0]} != form dimension {form.dim}")
    rng = np.random.default_rng(seed)
    scale = np.linalg.norm(op, ord="fro") * np.linalg.norm(form.gram, ord="fro")
    worst = 0.0
    for _ in range(trials):
        u = rng.standard_normal(form.dim) + 1j * rng.standard_normal(form.dim)
        v = rng.standard_normal(form.dim) + 1j * rng.standard_normal(form.dim)
        lhs = pairing(op @ u, form.gram, v)
        rhs = pairing(u, form.gram, op @ v)
        worst = max(worst, abs(lhs - rhs) / (scale * np.linalg.norm(u) * np.linalg.norm(v) / form.dim))
    return worst


def adjointness_matrix_defect(op: np.ndarray, form: BilinearForm) -> float:
    """Direct matrix criterion: ``max |G A - A^T G|`` over entries, normalized."""
    op = np.asarray(op)
    lhs = form.gram @ op
    rhs = op.T @ form.gram
    scale = max(float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs))), 1e-300)
    return float(np.max(np.abs(lhs - rhs))) / scale
