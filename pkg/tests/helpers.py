"""Fixture algebras and cross-checks shared across the test modules."""

from fractions import Fraction

from dgca.core import Dgca, compute_cohomology, make_dgca


def extended_mu3_equals_direct(base: Dgca, k: int = 1) -> bool:
    """Entrywise equality of the extended ternary table with the direct transfer.

    Both sides are expressed on the extension's own cohomology basis through
    the product-basis identification.
    """
    from dgca.extension import (
        _mono_id, extend, extend_decomposition, extended_mu3, kunneth_class_matrix,
    )
    from dgca.hodge import find_hodge
    from dgca.multilinear import eval_table, table_clean
    from dgca.obstruction import mu3_cochain
    from dgca.transfer import transfer_explicit

    D = find_hodge(base)
    HB = compute_cohomology(base)
    E = extend(base, k)
    HE = compute_cohomology(E)
    DE = extend_decomposition(base, D, k, E)
    direct = table_clean(transfer_explicit(DE).op(3))
    lifted = extended_mu3(mu3_cochain(transfer_explicit(D)), k)
    ring = lifted.ring
    table = table_clean(lifted.table)

    M, index = kunneth_class_matrix(base, E, HB, HE, k)
    if M.rank() != HE.total:
        return False
    labels = HB.labels()
    col_of = {labels[flat] + _mono_id(S): col
              for col, (flat, S) in enumerate(index)}

    for a in range(len(index)):
        for b in range(len(index)):
            for c in range(len(index)):
                key = tuple(ring.basis.index_of[labels[f] + _mono_id(S)]
                            for f, S in (index[a], index[b], index[c]))
                lhs: dict[int, Fraction] = {}
                for t, cf in table.get(key, {}).items():
                    col = col_of[ring.basis.ids[t]]
                    for r, x in enumerate(M.col(col)):
                        if x != 0:
                            lhs[r] = lhs.get(r, Fraction(0)) + cf * x
                lhs = {r: x for r, x in lhs.items() if x != 0}
                args = [{r: x for r, x in enumerate(M.col(i)) if x != 0}
                        for i in (a, b, c)]
                if lhs != eval_table(direct, args):
                    return False
    return True


def torus_with_acyclic_pair() -> Dgca:
    """Two-torus model with a null acyclic pair u -> v glued in degrees 1, 2."""
    return make_dgca(
        "torus-acyclic",
        [("e", 0), ("t1", 1), ("t2", 1), ("u", 1), ("v", 2), ("t12", 2)],
        "e",
        {("t1", "t2"): {"t12": 1}},
        {"u": {"v": 1}},
        {"t12": 1},
    )


def sphere3_with_paired_pair() -> Dgca:
    """Three-sphere model with an acyclic pair u -> v pairing into the volume."""
    return make_dgca(
        "sphere3-paired",
        [("e", 0), ("u", 1), ("v", 2), ("w", 3)],
        "e",
        {("u", "v"): {"w": 1}},
        {"u": {"v": 1}},
        {"w": 1},
    )


def nonformal7_with_pair() -> Dgca:
    """The degree-7 non-formal algebra with an extra null pair p -> q in degrees 1, 2."""
    return make_dgca(
        "nonformal-7-padded",
        [("e", 0), ("p", 1), ("u", 2), ("v", 2), ("q", 2), ("x", 3), ("g", 3),
         ("w", 4), ("h", 4), ("s", 5), ("t", 5), ("z", 7)],
        "e",
        {
            ("u", "v"): {"w": 1},
            ("u", "x"): {"s": 1},
            ("v", "x"): {"t": 1},
            ("u", "t"): {"z": 1},
            ("v", "s"): {"z": 1},
            ("x", "w"): {"z": 1},
            ("g", "h"): {"z": 1},
        },
        {"x": {"w": 1}, "p": {"q": 1}},
        {"z": 1},
    )


def middle_degree_4() -> Dgca:
    """Degree-4 algebra whose middle complement needs an isotropy correction.

    The raw cocycle complement in degree 2 is spanned by b with <b, b> = 1;
    the exact line q = dp pairs with b, so b - q/2 is the unique corrected
    isotropic choice.
    """
    return make_dgca(
        "middle-4",
        [("e", 0), ("p", 1), ("b", 2), ("q", 2), ("c", 3), ("m", 4)],
        "e",
        {
            ("b", "b"): {"m": 1},
            ("b", "q"): {"m": 1},
            ("p", "c"): {"m": 1},
        },
        {"p": {"q": 1}, "b": {"c": 1}},
        {"m": 1},
    )


def two_stage_tower() -> Dgca:
    """Degree-6 truncated two-stage algebra with a nonzero quaternary transfer.

    Two degree-2 generators x, y, contractions s, t for their squares/product
    (ds = xx, dt = xy), and a second-stage element h with dh = xt - ys.  The
    integration functional is zero: the algebra is not of Poincare type, but
    it carries a decomposition (orthogonality is vacuous) whose transferred
    operations have a nonvanishing arity-4 component, pinning the sign
    conventions of the structure relations beyond the ternary range.
    """
    return make_dgca(
        "two-stage-tower",
        [("e", 0), ("x", 2), ("y", 2), ("s", 3), ("t", 3),
         ("xx", 4), ("xy", 4), ("yy", 4), ("h", 4),
         ("xs", 5), ("xt", 5), ("ys", 5), ("yt", 5),
         ("xxx", 6), ("xxy", 6), ("xyy", 6), ("yyy", 6),
         ("xh", 6), ("yh", 6), ("st", 6)],
        "e",
        {
            ("x", "x"): {"xx": 1},
            ("x", "y"): {"xy": 1},
            ("y", "y"): {"yy": 1},
            ("x", "s"): {"xs": 1},
            ("x", "t"): {"xt": 1},
            ("y", "s"): {"ys": 1},
            ("y", "t"): {"yt": 1},
            ("x", "xx"): {"xxx": 1},
            ("x", "xy"): {"xxy": 1},
            ("x", "yy"): {"xyy": 1},
            ("x", "h"): {"xh": 1},
            ("y", "xx"): {"xxy": 1},
            ("y", "xy"): {"xyy": 1},
            ("y", "yy"): {"yyy": 1},
            ("y", "h"): {"yh": 1},
            ("s", "t"): {"st": 1},
        },
        {
            "s": {"xx": 1},
            "t": {"xy": 1},
            "h": {"xt": 1, "ys": -1},
            "xs": {"xxx": 1},
            "xt": {"xxy": 1},
            "ys": {"xxy": 1},
            "yt": {"xyy": 1},
        },
        {},
    )


def broken_example() -> Dgca:
    """The degree-4 example with the differential moved so integration fails."""
    return make_dgca(
        "example-broken",
        [("x0", 0), ("x2", 2), ("x3", 3), ("x4", 4)],
        "x0",
        {("x2", "x2"): {"x4": 1}},
        {"x3": {"x4": 1}},
        {"x4": 1},
    )
