"""Tests for the bilinear pairings and their Gram matrices."""

from __future__ import annotations

import numpy as np
import pytest

from loopcells import diagrams as dg
from loopcells import fixtures as fx
from loopcells import forms, models, tl


def dense_state_index(L: int, text: str) -> int:
    return dg.basis_index(dg.enumerate_dense(L))[dg.from_text(text)]


class TestLoopGram:
    @pytest.mark.parametrize("n", [0.3, 1.0, 2.0])
    def test_published_pairing_example(self, n):
        # gluing ()(()) onto (()()) closes exactly two loops
        form = forms.loop_gram(6, n)
        i = dense_state_index(6, "()(())")
        j = dense_state_index(6, "(()())")
        assert form.gram[i, j] == pytest.approx(n**2)

    @pytest.mark.parametrize("n", [0.3, 1.0, 2.0])
    def test_negative_norm_combination(self, n):
        # the difference of those two states has square 2n^2(n-1),
        # negative below n=1: the pairing is not positive definite
        form = forms.loop_gram(6, n)
        vec = np.zeros(form.dim)
        vec[dense_state_index(6, "()(())")] = 1.0
        vec[dense_state_index(6, "(()())")] = -1.0
        assert forms.pairing(vec, form.gram, vec) == pytest.approx(2 * n**2 * (n - 1))

    def test_self_gluing_gives_maximal_loops(self):
        form = forms.loop_gram(6, 2.0)
        for k in range(form.dim):
            assert form.gram[k, k] == pytest.approx(2.0**3)

    def test_weight_one_is_all_ones(self):
        for L in (2, 4, 6, 8):
            form = forms.loop_gram(L, 1.0)
            np.testing.assert_allclose(form.gram, np.ones((form.dim, form.dim)))

    @pytest.mark.parametrize("L", [2, 4, 6, 8])
    def test_fast_count_matrix_matches_diagrammatic(self, L):
        basis = dg.enumerate_dense(L)
        np.testing.assert_array_equal(
            forms.fast_loop_count_matrix(basis), forms.loop_count_matrix(basis)
        )


class TestLinkGram:
    def test_weight_one_width_two(self):
        # basis {arc, strings}: arc/arc closes a loop, arc/strings and
        # strings/strings each give a single line
        form = forms.link_gram(2, 1.0)
        np.testing.assert_allclose(form.gram, [[1, 1], [1, 1]])

    def test_deformed_width_two(self):
        # contracting the single pair of strings keeps weight one (odd label)
        form = forms.link_gram(2, 3.0)
        np.testing.assert_allclose(form.gram, [[1, 1], [1, 1]])

    @pytest.mark.parametrize("y", [2.0, -1.0, 0.5])
    def test_deformed_width_four_contraction(self, y):
        # four strings against the all-arcs state: one contraction of
        # strings 2,3 (even label -> weight y) and one of strings 1,4
        basis = dg.enumerate_open(4)
        index = dg.basis_index(basis)
        form = forms.link_gram(4, y)
        a = index[dg.from_text("(())")]
        b = index[dg.from_text("||||")]
        assert form.gram[a, b] == pytest.approx(y)

    @pytest.mark.parametrize("y", [1.0, 2.0, -1.0, 0.5])
    @pytest.mark.parametrize("L", [2, 4, 6])
    def test_generators_self_adjoint(self, L, y):
        form = forms.link_gram(L, y)
        for e in tl.open_generators(L, 1.0, y):
            assert forms.adjointness_matrix_defect(e, form) < 1e-12


class TestSpinForm:
    def test_identity_gram(self):
        form = forms.identity_gram(6)
        np.testing.assert_allclose(form.gram, np.eye(6))

    def test_xxz_hamiltonian_self_adjoint(self):
        H, masks = models.build_xxz(4)
        form = forms.identity_gram(len(masks))
        assert forms.adjointness_matrix_defect(H, form) < 1e-12
        assert forms.selfadjointness_defect(H, form) < 1e-10

    def test_width_two_singlet_square(self):
        # (q^{-1/2} ud - q^{1/2} du) dotted into itself without conjugation
        q = fx.Q_VALUE
        s = np.array([q**-0.5, -(q**0.5)])
        assert complex(s @ s) == pytest.approx(complex(q + 1 / q))

    @pytest.mark.parametrize("q", [fx.Q_VALUE, np.exp(0.31j)])
    def test_singlet_products_match_loop_pairings(self, q):
        # arc diagram -> product of singlets, with a sign per nested arc
        # pair; plain products would flip the sign of odd-loop pairings
        import itertools

        n = q + 1 / q
        L = 4

        def arcs_of(state):
            return [
                (i, state.partner[i])
                for i in range(state.size)
                if state.roles[i] == dg.ARC and state.partner[i] > i
            ]

        def nestings(arcs):
            count = 0
            for (a, b), (c, d) in itertools.combinations(arcs, 2):
                if (a < c and d < b) or (c < a and b < d):
                    count += 1
            return count

        def singlet_vector(state):
            arcs = arcs_of(state)
            vec: dict = {}
            for ups in itertools.product([0, 1], repeat=len(arcs)):
                conf = [0] * L
                w = (-1.0) ** nestings(arcs)
                for (i, j), u in zip(arcs, ups):
                    conf[i], conf[j] = (1, 0) if u else (0, 1)
                    w *= q**-0.5 if u else -(q**0.5)
                key = tuple(conf)
                vec[key] = vec.get(key, 0) + w
            return vec

        basis = dg.enumerate_dense(L)
        loop = forms.loop_gram(L, n).gram
        vectors = [singlet_vector(s) for s in basis]
        for a, u in enumerate(vectors):
            for b, v in enumerate(vectors):
                spin = sum(cu * v.get(c, 0) for c, cu in u.items())
                assert spin == pytest.approx(complex(loop[a, b]), abs=1e-12)


class TestDiluteForm:
    def test_zero_sector_block_is_single_entry(self):
        # any glued pair of arcs closes a loop of weight zero, so only the
        # all-empty diagonal entry survives in the string-free block
        row = models.build_dilute_T(4)
        gram = forms.dilute_sector_gram(row.basis).toarray()
        zero = dg.sector_indices(row.basis, 0)
        block = gram[np.ix_(zero, zero)]
        assert block.sum() == 1.0
        empty = [k for k in zero if not any(row.basis[k].occupied_mask)]
        assert block[zero.index(empty[0]), zero.index(empty[0])] == 1.0

    def test_arc_against_strings_pairing(self):
        # the printed width-2 example: an arc contracts the two strings
        form = forms.dilute_gram(2)
        basis = forms.dilute_gram(2).basis
        index = dg.basis_index(basis)
        arc = index[dg.from_text("()")]
        strings = index[dg.from_text("||")]
        assert form.gram[arc, strings] == 1.0
        assert form.gram[arc, arc] == 0.0  # closed loop at weight zero
        assert form.gram[strings, strings] == 1.0

    def test_mask_mismatch_is_zero(self):
        form = forms.dilute_gram(2, parity="all")
        basis = form.basis
        index = dg.basis_index(basis)
        empty = index[dg.from_text("..")]
        arc = index[dg.from_text("()")]
        assert form.gram[empty, arc] == 0.0

    @pytest.mark.parametrize("L", [2, 4, 6])
    def test_sector_gram_matches_dilute_rule(self, L):
        row = models.build_dilute_T(L)
        gram = forms.dilute_sector_gram(row.basis).toarray()
        for a, sa in enumerate(row.basis):
            for b, sb in enumerate(row.basis):
                res = dg.glue(sa, sb)
                expect = 1.0 if res.mask_match and res.loops == 0 else 0.0
                assert gram[a, b] == expect

    @pytest.mark.parametrize("L", [2, 3, 4])
    def test_bra_row_intertwines_with_ket_row(self, L):
        # G ML^T... the reversed row is the adjoint of the forward row:
        # G T = ML^T G, which turns bra-row eigenvectors into left ones
        row = models.build_dilute_T(L)
        gram = forms.dilute_sector_gram(row.basis).toarray()
        t = row.ket_row.toarray()
        ml = row.bra_row.toarray()
        np.testing.assert_allclose(gram @ t, ml.T @ gram, atol=1e-12)


class TestDefectMeasures:
    def test_defect_detects_asymmetry(self):
        form = forms.identity_gram(4)
        sym = np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2.0]])
        skew = sym + np.array([[0, 0.5, 0, 0], [-0.5, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0.0]])
        assert forms.adjointness_matrix_defect(sym, form) < 1e-15
        assert forms.adjointness_matrix_defect(skew, form) > 0.1
        assert forms.selfadjointness_defect(skew, form) > 1e-3

    def test_dimension_mismatch_raises(self):
        with pytest.raises(ValueError):
            forms.selfadjointness_defect(np.eye(3), forms.identity_gram(4))
