import pytest

from dgca.catalog import get
from dgca.core import (
    NotConnectedError, compute_cohomology, is_quasi_iso, null_ideal,
)
from dgca.hodge import find_hodge
from dgca.linalg import Matrix, in_span, span_equal
from dgca.small import (
    adapted_decomposition, adapted_splitting, default_partial_splitting,
    generating_subspace, small_algebra, small_quotient,
)

import helpers


def test_generating_subspace_cp2():
    A = get("cp2").algebra
    H = compute_cohomology(A)
    gen = generating_subspace(H)
    assert [gen.dim(k) for k in range(5)] == [0, 0, 1, 0, 0]


def test_generating_subspace_zero_products():
    A = get("formal-twin-7").algebra
    H = compute_cohomology(A)
    gen = generating_subspace(H)
    # decomposables: only the top class (u*t etc.); everything else generates
    assert [gen.dim(k) for k in range(8)] == [0, 0, 2, 1, 1, 2, 0, 0]


def test_generating_subspace_connected_window():
    # 1-connected: all classes of degree <= 2r-1 = 3 must be generators
    A = get("nonformal-7").algebra
    H = compute_cohomology(A)
    gen = generating_subspace(H)
    assert gen.dim(2) == H.betti[2] and gen.dim(3) == H.betti[3]


def test_adapted_splitting_formal_case_identity():
    A = get("formal-twin-7").algebra
    D = find_hodge(A)
    H = compute_cohomology(A)
    gen = generating_subspace(H)
    iota0 = default_partial_splitting(D, H, gen)
    data = adapted_splitting(A, D, gen, iota0, H)
    # with zero differential the splitting is the identity on representatives
    for k in range(8):
        if H.betti[k]:
            assert data.iota[k] == H.reps[k]
    assert data.Kcal.total_dim() == 0


def test_kernel_spaces_nonformal7():
    A = get("nonformal-7").algebra
    D = find_hodge(A)
    H = compute_cohomology(A)
    gen = generating_subspace(H)
    iota0 = default_partial_splitting(D, H, gen)
    data = adapted_splitting(A, D, gen, iota0, H)
    # no relations below twice the connectivity degree
    for k in range(4):
        assert data.K.get(k) is None or data.K[k].ncols == 0
    # in degree 4 the kernel is the full symmetric square and its image is
    # exactly the exact line spanned by the product of the two generators
    assert data.K[4].ncols == 3
    assert data.Kcal.dim(4) == 1
    w_comp = A.component(A.element("w"), 4)
    assert in_span(data.Kcal.block(4), w_comp)


def test_kernel_vanishes_for_injective_square():
    A = get("cp2").algebra
    D = find_hodge(A)
    H = compute_cohomology(A)
    gen = generating_subspace(H)
    data = adapted_splitting(A, D, gen, default_partial_splitting(D, H, gen), H)
    assert data.K[4].ncols == 0


def test_small_algebra_formal_is_cohomology():
    A = get("formal-twin-7").algebra
    D = find_hodge(A)
    sub = small_algebra(A, D)
    assert [sub.algebra.dim(k) for k in range(8)] == compute_cohomology(A).betti
    assert is_quasi_iso(sub.inclusion)


def test_small_algebra_nonformal7_shape():
    A = get("nonformal-7").algebra
    D = find_hodge(A)
    sub = small_algebra(A, D)
    # the whole algebra is already its own small algebra here
    assert [sub.algebra.dim(k) for k in range(8)] == [1, 0, 2, 2, 2, 2, 0, 1]
    assert is_quasi_iso(sub.inclusion)
    # degree 3 = harmonic + d^- of the kernel line
    b3cols = sub.family[3]
    x_comp = A.component(A.element("x"), 3)
    g_comp = A.component(A.element("g"), 3)
    assert in_span(b3cols, x_comp) and in_span(b3cols, g_comp)


def test_small_algebra_fixed_point():
    A = get("nonformal-7").algebra
    D = find_hodge(A)
    sub = small_algebra(A, D)
    # rerun the recursion on the subalgebra: needs its own decomposition
    D2 = find_hodge(sub.algebra)
    sub2 = small_algebra(sub.algebra, D2)
    assert [sub2.algebra.dim(k) for k in range(8)] == \
        [sub.algebra.dim(k) for k in range(8)]


def test_small_algebra_closure_properties():
    A = get("nonformal-7").algebra
    D = find_hodge(A)
    sub = small_algebra(A, D)
    n = A.top_degree
    for k in range(n + 1):
        block = sub.family[k]
        for j in range(block.ncols):
            v = A.embed(k, block.col(j))
            dv = A.d(v)
            if any(c != 0 for c in dv):
                assert in_span(sub.family[k + 1], A.component(dv, k + 1))
            dm = D.dminus(v)
            if any(c != 0 for c in dm):
                assert in_span(sub.family[k - 1], A.component(dm, k - 1))
            for l in range(n + 1):
                other = sub.family[l]
                for t in range(other.ncols):
                    prod = A.mul_vec(v, A.embed(l, other.col(t)))
                    if any(c != 0 for c in prod) and k + l <= n:
                        assert in_span(sub.family[k + l], A.component(prod, k + l))


def test_small_algebra_restricted_decomposition():
    # the decomposition restricts: C = harmonic + dC + d-C degreewise
    A = get("nonformal-7").algebra
    D = find_hodge(A)
    sub = small_algebra(A, D)
    n = A.top_degree
    for k in range(n + 1):
        cols = []
        for j in range(D.harmonic.block(k).ncols):
            cols.append(D.harmonic.block(k).col(j))
        for source, op in ((k - 1, A.d), (k + 1, D.dminus)):
            if 0 <= source <= n:
                blk = sub.family[source]
                for j in range(blk.ncols):
                    img = op(A.embed(source, blk.col(j)))
                    comp = A.component(img, k)
                    if any(c != 0 for c in comp):
                        cols.append(comp)
        stacked = Matrix.from_columns(cols, A.dim(k)) if cols \
            else Matrix.from_columns([], A.dim(k))
        assert span_equal(stacked, sub.family[k])


def test_small_algebra_refined_shape_in_low_degrees():
    # adapted case, r = 2: degree 3 of the small algebra is exactly the
    # harmonic part plus the contraction of the degree-4 kernel space
    A = get("nonformal-7").algebra
    H = compute_cohomology(A)
    D, data = adapted_decomposition(A, find_hodge(A), H)
    sub = small_algebra(A, D, H)
    for k in range(0, 3):
        assert span_equal(sub.family[k], D.harmonic.block(k))
    cols = [D.harmonic.block(3).col(j) for j in range(D.harmonic.block(3).ncols)]
    for j in range(data.Kcal.block(4).ncols):
        img = find_hodge(A).dminus(A.embed(4, data.Kcal.block(4).col(j)))
        cols.append(A.component(img, 3))
    expected = Matrix.from_columns(cols, A.dim(3))
    assert span_equal(expected, sub.family[3])


def test_small_rejects_non_simply_connected():
    A = get("torus-2").algebra
    D = find_hodge(A)
    with pytest.raises(NotConnectedError):
        small_algebra(A, D)


def test_small_quotient_nonformal7():
    A = get("nonformal-7").algebra
    D, _ = adapted_decomposition(A, find_hodge(A))
    res = small_quotient(A, D)
    rep = res.report
    assert rep.r == 2
    assert rep.differential_support == [4]
    assert rep.support_window == (4, 4)
    assert rep.ok
    assert not rep.square_injective
    assert null_ideal(res.quotient.algebra).total_dim() == 0


def test_small_quotient_formal6():
    A = get("formal-6").algebra
    D, _ = adapted_decomposition(A, find_hodge(A))
    res = small_quotient(A, D)
    assert res.report.differential_support == []
    assert res.report.ok
    assert res.report.square_injective
    text = res.report.serialize_text()
    assert "differential support []" in text


def test_small_quotient_padded_algebra():
    A = helpers.nonformal7_with_pair()
    D, _ = adapted_decomposition(A, find_hodge(A))
    res = small_quotient(A, D)
    assert res.report.quotient_dims == [1, 0, 2, 2, 2, 2, 0, 1]
    assert res.report.differential_support == [4]
    assert res.report.ok


def test_small_quotient_windows_match_cohomology():
    for name in ("cp2", "formal-6", "nonformal-7", "sphere-6"):
        A = get(name).algebra
        H = compute_cohomology(A)
        D, _ = adapted_decomposition(A, find_hodge(A), H)
        res = small_quotient(A, D, H)
        rep = res.report
        r, n = rep.r, rep.n
        for k in range(0, min(2 * r - 1, n + 1)):
            assert rep.quotient_dims[k] == H.betti[k]
        for k in range(max(0, n - 2 * r + 2), n + 1):
            assert rep.quotient_dims[k] == H.betti[k]
        assert all(rep.quotient_dims[k] == rep.quotient_dims[n - k]
                   for k in range(n + 1))
