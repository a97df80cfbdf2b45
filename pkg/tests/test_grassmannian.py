import pytest

from ctrop.errors import BadParams
from ctrop.grassmannian import (GrData, bodies_unimodular,
                                cluster_bfs_g_vectors, gt_valuation,
                                gt_vector, hook_g_table, hook_g_vector,
                                homogenized_g, index_from_young, no_body,
                                psi_matrix, rectangles_seed, verify_val_gv,
                                young_from_index)
from ctrop.linalg import Mat, vec


def test_grdata_counts():
    gr24 = GrData(2, 4)
    assert gr24.dim == 5 and gr24.mutable_indices() == [gr24.index(1, 1)]
    gr25 = GrData(3, 5)  # two rows, three columns
    assert gr25.dim == 7 and len(gr25.mutable_indices()) == 2
    with pytest.raises(BadParams):
        GrData(4, 4)


def test_young_examples():
    assert young_from_index((3, 4), 2, 4) == (0, 0)
    assert young_from_index((1, 2), 2, 4) == (2, 2)
    assert young_from_index((2, 4), 2, 4) == (1, 0)
    assert index_from_young((1,), 2, 4) == (2, 4)
    assert index_from_young((), 2, 4) == (3, 4)
    for J in GrData(3, 6).plucker_indices():
        assert index_from_young(young_from_index(J, 3, 6), 3, 6) == J


def test_gt_examples():
    assert gt_valuation((3, 4), 2, 4) == ((1, 1), (1, 2))
    assert gt_valuation((1, 2), 2, 4) == ((0, 0), (0, 0))
    assert gt_valuation((2, 4), 2, 4) == ((0, 1), (1, 1))
    tab = gt_valuation((3, 4, 7, 9, 11, 12), 7, 13)
    assert [row[-1] for row in tab] == [1, 2, 2, 2, 3, 4]


def test_hook_examples():
    gr = GrData(5, 9)
    g = hook_g_vector((2, 4, 6, 7), 5, 9)
    expect = [0] * gr.dim
    for (i, j, s) in [(1, 4, 1), (1, 3, -1), (2, 3, 1), (2, 2, -1), (4, 2, 1)]:
        expect[gr.index(i, j)] = s
    assert list(g) == expect
    gr24 = GrData(2, 4)
    g11 = hook_g_vector((2, 4), 2, 4)
    assert g11[gr24.index(1, 1)] == 1 and sum(g11) == 1
    g22 = hook_g_vector((1, 2), 2, 4)
    assert g22[gr24.index(2, 2)] == 1
    gempty = hook_g_vector((3, 4), 2, 4)
    assert gempty[0] == 1


def test_hook_degree_fiber():
    for k, n in ((2, 4), (3, 5), (3, 6)):
        for J in GrData(k, n).plucker_indices():
            assert sum(hook_g_vector(J, k, n)) == 1
            assert sum(homogenized_g(J, k, n)) == 0


def test_homogenized_examples():
    assert all(x == 0 for x in homogenized_g((1, 2), 2, 4))
    fx_expected = {(6, 1): 1, (4, 1): -1, (4, 2): 1, (3, 2): -1, (3, 3): 1,
                   (2, 3): -1, (2, 5): 1, (6, 7): -1}
    gr = GrData(7, 13)
    g = homogenized_g((3, 4, 7, 9, 11, 12), 7, 13)
    for v in range(gr.dim):
        want = fx_expected.get(gr.box(v), 0) if v else 0
        assert g[v] == want


def test_psi_kernel_and_image():
    for k, n in ((2, 4), (3, 5), (3, 6)):
        psi = psi_matrix(k, n)
        ker = Mat(psi.rows).kernel()
        assert ker == [(1,) * GrData(k, n).dim]
        for col in psi.cols():
            assert sum(col) == 0
        assert psi.rank() == GrData(k, n).dim - 1


def test_psi_six_term_column():
    gr = GrData(3, 6)
    psi = psi_matrix(3, 6)
    v = gr.index(2, 2)
    col = psi.col(v)
    expect = {gr.index(1, 1): 1, gr.index(1, 2): -1, gr.index(2, 3): 1,
              gr.index(3, 3): -1, gr.index(3, 2): 1, gr.index(2, 1): -1}
    for w in range(gr.dim):
        assert col[w] == expect.get(w, 0)


def test_rectangles_seed_ensemble_identity():
    for k, n in ((2, 4), (3, 5), (3, 6)):
        fd, s0, em = rectangles_seed(k, n)
        gr = GrData(k, n)
        diff = em.matrix - fd.epsilon().transpose()
        for a in range(gr.dim):
            for b in range(gr.dim):
                if not (gr.frozen(a) and gr.frozen(b)):
                    assert diff.rows[a][b] == 0
        assert [tuple(x) for x in em.kernel] == [(1,) * gr.dim]


def test_verify_val_gv():
    for k, n, count in ((2, 4, 6), (3, 5, 10), (3, 6, 20)):
        rep = verify_val_gv(k, n)
        assert len(rep) == count and all(rep.values())


def test_frozen_gt_through_psi():
    # frozen Plückers: the GT tableau maps to the frozen g-vector
    gr = GrData(2, 4)
    psi = psi_matrix(2, 4)
    J = gr.rectangle_index_set(0, 0)
    val = (0,) + gt_vector(J, 2, 4)
    lhs = tuple(-int(x) for x in psi * vec(val))
    assert lhs == tuple(homogenized_g(J, 2, 4))


def test_no_bodies_and_unimodularity():
    flow = no_body(2, 4, "flow")
    gv = no_body(2, 4, "gvec")
    assert len(flow.vertices) == len(gv.vertices) == 6
    ok, u = bodies_unimodular(2, 4)
    assert ok and abs(u.det()) == 1
    ok36, _ = bodies_unimodular(3, 6)
    assert ok36
    f36 = no_body(3, 6, "flow")
    g36 = no_body(3, 6, "gvec")
    assert len(f36.vertices) == len(g36.vertices)


def test_bfs_matches_hook_table():
    bfs = cluster_bfs_g_vectors(2, 4, 2)
    assert () in bfs
    table = set(hook_g_table(2, 4).values())
    found = set(g for gl in bfs.values() for _, g in gl)
    assert found == table
    # depth-0 vertices carry unit vectors
    units = {g for _, g in bfs[()]}
    assert units == {tuple(1 if t == v else 0 for t in range(5))
                     for v in range(5)}


def test_bfs_gr25_closure():
    bfs = cluster_bfs_g_vectors(3, 5, 5)
    table = set(hook_g_table(3, 5).values())
    found = set(g for gl in bfs.values() for _, g in gl)
    assert found == table
    assert len(table) == 10
