from fractions import Fraction

from dgca.catalog import get
from dgca.core import compute_cohomology, connectivity
from dgca.hodge import find_hodge
from dgca.multilinear import table_clean
from dgca.transfer import (
    AInfinityMorphism, AInfinityStructure, tau_tensor, transfer_explicit,
    transfer_trees, verify_morphism, verify_stasheff,
)


def test_zero_differential_kills_higher_operations():
    A = get("torus-2").algebra
    D = find_hodge(A)
    S = transfer_trees(D, 4)
    assert table_clean(S.op(3)) == {}
    assert table_clean(S.op(4)) == {}


def test_m2_is_cup_product():
    for name in ("torus-2", "cp2", "nonformal-7"):
        A = get(name).algebra
        D = find_hodge(A)
        H = compute_cohomology(A)
        S = transfer_explicit(D)
        for (i, j), terms in S.op(2).items():
            cup = H.cup(i, j)
            expected = {t: c for t, c in enumerate(cup) if c != 0}
            assert terms == expected


def test_m3_vanishes_on_degree_zero_arguments():
    A = get("nonformal-7").algebra
    D = find_hodge(A)
    S = transfer_explicit(D)
    degs = S.degrees()
    for key in S.op(3):
        assert all(degs[i] > 0 for i in key)


def test_m3_explicit_value():
    A = get("nonformal-7").algebra
    D = find_hodge(A)
    S = transfer_explicit(D)
    ring = S.ring
    iu, iv = ring.basis.index_of["h2_0"], ring.basis.index_of["h2_1"]
    it = ring.basis.index_of["h5_1"]
    i_s = ring.basis.index_of["h5_0"]
    assert S.op(3)[(iu, iv, iv)] == {it: Fraction(1)}
    assert S.op(3)[(iu, iu, iv)] == {i_s: Fraction(-1)}


def test_trees_match_explicit_at_low_arity():
    for name in ("cp2", "formal-6", "nonformal-7", "formal-twin-7"):
        A = get(name).algebra
        D = find_hodge(A)
        S2 = transfer_explicit(D)
        S3 = transfer_trees(D, 3)
        assert table_clean(S3.op(2)) == table_clean(S2.op(2))
        assert table_clean(S3.op(3)) == table_clean(S2.op(3))


def test_window_vanishing_of_higher_arities():
    for name in ("cp2", "formal-6", "nonformal-7", "sphere-5"):
        A = get(name).algebra
        r = connectivity(A) + 1
        if r <= 1 or A.top_degree > 5 * r - 3:
            continue
        D = find_hodge(A)
        S = transfer_trees(D, 5)
        assert table_clean(S.op(4)) == {}
        assert table_clean(S.op(5)) == {}


def test_formality_window_kills_m3():
    # below the stricter bound even the ternary operation vanishes
    for name in ("cp2", "formal-6"):
        A = get(name).algebra
        r = connectivity(A) + 1
        assert A.top_degree <= 4 * r - 2
        D = find_hodge(A)
        S = transfer_trees(D, 3)
        assert table_clean(S.op(3)) == {}


def test_nonzero_quaternary_operation_satisfies_relations():
    # a transferred structure with m4 != 0 pins the relation signs past
    # the ternary range; the two-stage tower has m4(x, x, y, y) = [yh]
    import helpers
    from dgca.core import compute_cohomology, validate_dgca
    from dgca.hodge import verify_hodge
    from dgca.core import SubspaceFamily
    A = helpers.two_stage_tower()
    assert validate_dgca(A).ok
    H = compute_cohomology(A)
    assert H.betti == [1, 0, 2, 0, 1, 0, 4]
    from dgca.linalg import Matrix, extend_basis, independent_columns
    harmonic = SubspaceFamily(A.basis, {k: H.reps[k] for k in range(7)})
    complement = SubspaceFamily(A.basis)
    for k in range(7):
        dim = A.dim(k)
        if not dim:
            continue
        dk = A.diff.block(k) if k < 6 else Matrix.zeros(0, dim)
        complement.set_block(k, extend_basis(dk.kernel(), Matrix.identity(dim)))
    D = verify_hodge(A, harmonic, complement)
    S = transfer_trees(D, 6)
    m4 = table_clean(S.op(4))
    assert m4, "expected a nonzero quaternary operation"
    ring = S.ring
    ix, iy = ring.basis.index_of["h2_0"], ring.basis.index_of["h2_1"]
    key = (ix, ix, iy, iy)
    # locate the class of y*h among the degree-6 representatives
    target = None
    for j in range(H.betti[6]):
        rep = H.representative(H.flat_index(6, j))
        if rep[A.basis.index_of["yh"]] != 0:
            target = H.offsets[6] + j
    assert key in m4
    assert list(m4[key]) == [target]
    rep = verify_stasheff(S)
    assert rep.ok, rep.summary()


def test_highly_connected_fixture_is_formal():
    import helpers
    from dgca.obstruction import formality_decision, mu3_cochain
    A = helpers.middle_degree_4()
    D = find_hodge(A)
    S = transfer_trees(D, 4)
    assert table_clean(S.op(3)) == {}
    assert table_clean(S.op(4)) == {}
    assert verify_stasheff(S).ok
    assert formality_decision(mu3_cochain(transfer_explicit(D))).formal


def test_stasheff_passes_on_transferred_structures():
    for name in ("torus-2", "cp2", "formal-6", "nonformal-7", "formal-twin-7"):
        A = get(name).algebra
        D = find_hodge(A)
        S = transfer_trees(D, 5)
        assert verify_stasheff(S).ok


def test_stasheff_catches_random_perturbation():
    A = get("nonformal-7").algebra
    D = find_hodge(A)
    S = transfer_trees(D, 4)
    broken = dict(S.ops)
    ring = S.ring
    iu = ring.basis.index_of["h2_0"]
    ig = ring.basis.index_of["h3_0"]
    bad3 = dict(table_clean(S.op(3)))
    bad3[(iu, iu, iu)] = {ig: Fraction(1)}  # not a cocycle against m2
    broken[3] = bad3
    rep = verify_stasheff(AInfinityStructure(ring=ring, ops=broken, arity_bound=4))
    assert not rep.ok
    assert any(v.witness[0] == 4 for v in rep.violations)


def test_tau_tensor_degrees_and_recovery():
    A = get("nonformal-7").algebra
    D = find_hodge(A)
    S = transfer_explicit(D)
    tau = tau_tensor(D, S)
    assert tau, "expected nonzero entries"
    degs = S.degrees()
    n = A.top_degree
    ring = S.ring
    for (i, j, k, l), value in tau.items():
        assert degs[i] + degs[j] + degs[k] + degs[l] == n + 1
        assert (degs[i], degs[j], degs[k]) == (2, 2, 2)
    # recover m3 entries from tau through the nondegenerate pairing
    gram = {}
    for l in range(len(degs)):
        for m in range(len(degs)):
            gram[(l, m)] = ring.pairing(ring.element(ring.basis.ids[l]),
                                        ring.element(ring.basis.ids[m]))
    for key, terms in table_clean(S.op(3)).items():
        for out, c in terms.items():
            val = sum((gram[(out, l)] * 0 for l in range(len(degs))), Fraction(0))
            # <m3(key), l> must match tau for every l
            for l in range(len(degs)):
                expect = sum((cc * gram[(t, l)] for t, cc in terms.items()),
                             Fraction(0))
                assert tau.get(key + (l,), Fraction(0)) == expect


def test_tau_zero_for_formal():
    A = get("formal-twin-7").algebra
    D = find_hodge(A)
    assert tau_tensor(D) == {}


def test_identity_morphism_verifies():
    A = get("nonformal-7").algebra
    D = find_hodge(A)
    S = transfer_explicit(D)
    n = len(S.ring.basis)
    ident = {(i,): {i: Fraction(1)} for i in range(n)}
    F = AInfinityMorphism(source=S, target=S, components={1: ident})
    assert verify_morphism(F).ok


def test_morphism_with_coboundary_shift():
    from dgca.obstruction import Cochain, hochschild_differential
    from dgca.multilinear import table_add
    A = get("nonformal-7").algebra
    D = find_hodge(A)
    S = transfer_explicit(D)
    ring = S.ring
    phi2 = {(ring.basis.index_of["h2_0"], ring.basis.index_of["h2_1"]):
            {ring.basis.index_of["h3_0"]: Fraction(2)}}
    shift = hochschild_differential(Cochain(ring, 2, -1, phi2))
    target_ops = {2: S.op(2), 3: table_add(S.op(3), shift.table)}
    target = AInfinityStructure(ring=ring, ops=target_ops, arity_bound=3)
    n = len(ring.basis)
    ident = {(i,): {i: Fraction(1)} for i in range(n)}
    good = AInfinityMorphism(source=S, target=target,
                             components={1: ident, 2: phi2})
    assert verify_morphism(good).ok
    # dropping the bilinear component breaks the trilinear identity
    bad = AInfinityMorphism(source=S, target=target, components={1: ident})
    assert not verify_morphism(bad).ok
