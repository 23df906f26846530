"""Hodge-type decompositions: verification, search, and the contraction d^-.

A decomposition splits every degree as A^k = dA^{k-1} + harmonic + complement
with the harmonic part a complement of the exact cocycles inside all cocycles
and the orthogonality <harmonic + complement, complement> = 0.  From such a
splitting the partial inverse d^- of the differential and the three
projectors are derived.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    CohomologyData, Dgca, SubspaceFamily, GradedMap, compute_cohomology,
    null_ideal, restricted_complex_betti,
)
from .linalg import (
    F0, F1, Matrix, Vec, extend_basis, independent_columns,
)


class HodgeError(ValueError):
    """A proposed decomposition violates one of the defining conditions."""


@dataclass
class HodgeDecomposition:
    algebra: Dgca
    harmonic: SubspaceFamily
    complement: SubspaceFamily
    exact: SubspaceFamily
    d_minus: GradedMap
    pr_harmonic: GradedMap
    pr_exact: GradedMap
    pr_complement: GradedMap

    def dminus(self, v: Vec) -> Vec:
        return self.d_minus.apply(v)

    def harmonic_projection(self, v: Vec) -> Vec:
        return self.pr_harmonic.apply(v)


@dataclass
class HodgeNotFound:
    reason: str           # "obstruction" (definitive) or "search-failed"
    detail: str
    null_betti: list[int] | None = None


def verify_hodge(A: Dgca, harmonic: SubspaceFamily, complement: SubspaceFamily,
                 H: CohomologyData | None = None) -> HodgeDecomposition:
    """Check the decomposition conditions and materialize d^- and projectors.

    Raises HodgeError naming the first violated condition, its degree and a
    witness.
    """
    H = H or compute_cohomology(A)
    n = A.top_degree
    exact = A.exact_family()

    for k in range(n + 1):
        dim_k = A.dim(k)
        hk, bk, ek = harmonic.block(k), complement.block(k), exact.block(k)
        total = ek.hstack(hk).hstack(bk)
        if total.ncols != dim_k or total.rank() != dim_k:
            raise HodgeError(
                f"direct-sum failure in degree {k}: "
                f"{ek.ncols}+{hk.ncols}+{bk.ncols} columns, rank {total.rank()}, dim {dim_k}")
        if hk.ncols != H.betti[k]:
            raise HodgeError(
                f"harmonic dimension in degree {k} is {hk.ncols}, expected {H.betti[k]}")
        dk = A.diff.block(k)
        for j in range(hk.ncols):
            img = dk.mul_vec(hk.col(j))
            if any(c != 0 for c in img):
                raise HodgeError(f"harmonic subspace not closed in degree {k}, column {j}")

    for k in range(n + 1):
        bk = complement.block(n - k)
        if bk.ncols == 0:
            continue
        for x in harmonic.global_columns(k) + complement.global_columns(k):
            for y in complement.global_columns(n - k):
                val = A.pairing(x, y)
                if val != 0:
                    raise HodgeError(
                        f"orthogonality failure: <(harmonic+complement)^{k}, complement^{n-k}> = {val}")

    # d restricted to the complement is a bijection onto the exact part of the
    # next degree; build d^- from it and extend by zero.
    dminus_blocks: dict[int, Matrix] = {}
    for k in range(n + 1):
        dim_k = A.dim(k)
        if dim_k == 0:
            continue
        prev_b = complement.block(k - 1) if k >= 1 else Matrix.from_columns([], 0)
        if k >= 1 and prev_b.ncols:
            d_prev = A.diff.block(k - 1)
            image_cols = Matrix.from_columns(
                [d_prev.mul_vec(prev_b.col(j)) for j in range(prev_b.ncols)], dim_k)
            if image_cols.rank() != prev_b.ncols:
                raise HodgeError(f"d is not injective on the complement in degree {k-1}")
        else:
            image_cols = Matrix.from_columns([], dim_k)
        basis_cols = image_cols.hstack(harmonic.block(k)).hstack(complement.block(k))
        inv = basis_cols.inverse()
        rows = []
        for j in range(prev_b.ncols):
            rows.append(inv.rows[j])
        coeff = Matrix(rows, ncols=dim_k) if rows else Matrix.zeros(0, dim_k)
        dminus_blocks[k] = (prev_b @ coeff) if prev_b.ncols else Matrix.zeros(
            A.dim(k - 1) if k >= 1 else 0, dim_k)

    d_minus = GradedMap(A.basis, A.basis, -1, dminus_blocks)

    pr_e, pr_b, pr_h = {}, {}, {}
    for k in range(n + 1):
        dim_k = A.dim(k)
        if dim_k == 0:
            continue
        dm_k = d_minus.block(k)
        d_k = A.diff.block(k)
        d_prev = A.diff.block(k - 1)
        dm_next = d_minus.block(k + 1)
        pe = d_prev @ dm_k if k >= 1 else Matrix.zeros(dim_k, dim_k)
        pb = dm_next @ d_k if k < n else Matrix.zeros(dim_k, dim_k)
        ident = Matrix.identity(dim_k)
        ph = Matrix([[ident.rows[i][j] - pe.rows[i][j] - pb.rows[i][j]
                      for j in range(dim_k)] for i in range(dim_k)], ncols=dim_k)
        pr_e[k], pr_b[k], pr_h[k] = pe, pb, ph

    return HodgeDecomposition(
        algebra=A, harmonic=harmonic, complement=complement, exact=exact,
        d_minus=d_minus,
        pr_harmonic=GradedMap(A.basis, A.basis, 0, pr_h),
        pr_exact=GradedMap(A.basis, A.basis, 0, pr_e),
        pr_complement=GradedMap(A.basis, A.basis, 0, pr_b))


def aperp_acyclicity(A: Dgca) -> tuple[bool, list[int]]:
    """Whether the null ideal is acyclic, plus its Betti vector.

    A nonzero answer certifies that no Hodge-type decomposition exists.
    """
    fam = null_ideal(A)
    betti = restricted_complex_betti(A, fam)
    return all(b == 0 for b in betti), betti


def find_hodge(A: Dgca) -> HodgeDecomposition | HodgeNotFound:
    """Search for a Hodge-type decomposition by exact linear algebra.

    The procedure: reject definitively when the null ideal has cohomology;
    take harmonic = echelon cocycle representatives; below the middle degree
    correct an echelon complement of the cocycles by unique harmonic shifts;
    above the middle solve a feasibility problem inside the annihilator of
    the already-built low side; in the middle degree (even top degree) make
    the complement isotropic by an exact-valued linear correction.  Failures
    of the last two stages are inconclusive and reported as search-failed.
    """
    acyclic, betti = aperp_acyclicity(A)
    if not acyclic:
        return HodgeNotFound(
            reason="obstruction",
            detail="null ideal has nonzero cohomology " + str(betti),
            null_betti=betti)

    H = compute_cohomology(A)
    n = A.top_degree
    harmonic = SubspaceFamily(A.basis)
    for k in range(n + 1):
        harmonic.set_block(k, H.reps[k])

    gram: dict[int, Matrix] = {}
    for k in range(n + 1):
        rows = []
        for i in range(H.betti[k]):
            ri = H.representative(H.flat_index(k, i))
            rows.append([A.pairing(ri, H.representative(H.flat_index(n - k, j)))
                         for j in range(H.betti[n - k])])
        gram[k] = Matrix(rows, ncols=H.betti[n - k])

    complement = SubspaceFamily(A.basis)
    low = [k for k in range(n + 1) if 2 * k < n]
    mid = [k for k in range(n + 1) if 2 * k == n]
    high = [k for k in range(n + 1) if 2 * k > n]

    def raw_complement(k: int) -> Matrix:
        dim_k = A.dim(k)
        dk = A.diff.block(k) if k < n else Matrix.zeros(0, dim_k)
        kernel = dk.kernel()
        return extend_basis(kernel, Matrix.identity(dim_k))

    def harmonic_correction(k: int, cols: Matrix) -> Matrix:
        """Replace b by b - h(b), killing <harmonic^{n-k}, b>."""
        if cols.ncols == 0 or H.betti[k] == 0:
            return cols
        g = gram[k].transpose()
        fixed = []
        for j in range(cols.ncols):
            b = A.embed(k, cols.col(j))
            rhs = [A.pairing(b, H.representative(H.flat_index(n - k, t)))
                   for t in range(H.betti[n - k])]
            coeffs = g.solve(rhs)
            assert coeffs is not None, "pairing on cohomology is degenerate"
            corr = cols.col(j)
            for t, c in enumerate(coeffs):
                if c != 0:
                    rep = H.reps[k].col(t)
                    corr = [a - c * r for a, r in zip(corr, rep)]
            fixed.append(corr)
        return Matrix.from_columns(fixed, A.dim(k))

    for k in low:
        if A.dim(k) == 0:
            continue
        complement.set_block(k, harmonic_correction(k, raw_complement(k)))

    for k in mid:
        dim_k = A.dim(k)
        if dim_k == 0:
            continue
        b0 = harmonic_correction(k, raw_complement(k))
        p = b0.ncols
        exact_k = independent_columns(A.diff.block(k - 1)) if k >= 1 \
            else Matrix.from_columns([], dim_k)
        m = exact_k.ncols
        if p:
            pair_be = Matrix(
                [[A.pairing(A.embed(k, b0.col(i)), A.embed(k, exact_k.col(a)))
                  for a in range(m)] for i in range(p)], ncols=m)
            g0 = Matrix(
                [[A.pairing(A.embed(k, b0.col(i)), A.embed(k, b0.col(j)))
                  for j in range(p)] for i in range(p)], ncols=p)
            sign = F1 if (n // 2) % 2 == 0 else -F1
            rows, rhs = [], []
            for i in range(p):
                for j in range(i, p):
                    row = [F0] * (p * m)
                    for a in range(m):
                        row[j * m + a] += pair_be.rows[i][a]
                        row[i * m + a] += sign * pair_be.rows[j][a]
                    rows.append(row)
                    rhs.append(-g0.rows[i][j])
            system = Matrix(rows, ncols=p * m) if rows else Matrix.zeros(0, p * m)
            x = system.solve(rhs) if rows else [F0] * (p * m)
            if x is None:
                return HodgeNotFound(
                    reason="search-failed",
                    detail=f"no exact-valued isotropic correction in middle degree {k}")
            fixed = []
            for i in range(p):
                col = b0.col(i)
                for a in range(m):
                    c = x[i * m + a]
                    if c != 0:
                        col = [u + c * e for u, e in zip(col, exact_k.col(a))]
                fixed.append(col)
            b0 = Matrix.from_columns(fixed, dim_k)
        complement.set_block(k, b0)

    for k in high:
        dim_k = A.dim(k)
        if dim_k == 0:
            continue
        dk = A.diff.block(k) if k < n else Matrix.zeros(0, dim_k)
        kernel = dk.kernel()
        need = dim_k - kernel.ncols
        if need == 0:
            complement.set_block(k, Matrix.from_columns([], dim_k))
            continue
        constraints = harmonic.global_columns(n - k) + complement.global_columns(n - k)
        rows = []
        for y in constraints:
            rows.append([A.pairing(A.embed(k, [F1 if t == s else F0 for t in range(dim_k)]), y)
                         for s in range(dim_k)])
        w = Matrix(rows, ncols=dim_k).kernel() if rows else Matrix.identity(dim_k)
        chosen = extend_basis(kernel, w)
        if chosen.ncols < need:
            return HodgeNotFound(
                reason="search-failed",
                detail=f"no orthogonal complement of the cocycles in degree {k}")
        complement.set_block(k, chosen)

    return verify_hodge(A, harmonic, complement, H)


def change_harmonic(D: HodgeDecomposition, new_harmonic: SubspaceFamily) -> HodgeDecomposition:
    """Rebuild the decomposition around another harmonic subspace.

    The old harmonic part is carried onto the new one by the unique exact
    shift v -> v + a(v); the complement is corrected by the pairing-adjoint
    of that shift, x -> x - a*(x) - a(a*(x))/2.
    """
    A = D.algebra
    H = compute_cohomology(A)
    n = A.top_degree
    exact = D.exact

    for k in range(n + 1):
        hk = new_harmonic.block(k)
        if hk.ncols != H.betti[k]:
            raise HodgeError(f"proposed harmonic subspace has wrong dimension in degree {k}")
        dk = A.diff.block(k)
        for j in range(hk.ncols):
            if any(c != 0 for c in dk.mul_vec(hk.col(j))):
                raise HodgeError(f"proposed harmonic subspace not closed in degree {k}")
        if extend_basis(exact.block(k), hk).ncols != hk.ncols:
            raise HodgeError(f"proposed harmonic subspace meets the exact part in degree {k}")

    # alpha on the old harmonic basis: v = h_new + e with e exact, alpha(v) = -e.
    alpha_cols: dict[int, Matrix] = {}
    for k in range(n + 1):
        hk_old = D.harmonic.block(k)
        if hk_old.ncols == 0:
            continue
        basis_cols = new_harmonic.block(k).hstack(exact.block(k))
        cols = []
        for j in range(hk_old.ncols):
            x = basis_cols.solve(hk_old.col(j))
            assert x is not None, "old and new harmonic spaces span different cocycles"
            e_part = [F0] * A.dim(k)
            for t in range(exact.block(k).ncols):
                c = x[new_harmonic.block(k).ncols + t]
                if c != 0:
                    e_part = [a + c * b for a, b in zip(e_part, exact.block(k).col(t))]
            cols.append([-c for c in e_part])
        alpha_cols[k] = Matrix.from_columns(cols, A.dim(k))

    def alpha_of_harmonic(k: int, coeffs: Vec) -> Vec:
        """alpha applied to a vector given in old-harmonic coordinates."""
        out = [F0] * A.dim(k)
        if k not in alpha_cols:
            return out
        for j, c in enumerate(coeffs):
            if c != 0:
                out = [a + c * b for a, b in zip(out, alpha_cols[k].col(j))]
        return out

    gram: dict[int, Matrix] = {}
    for k in range(n + 1):
        rows = []
        for i in range(D.harmonic.block(k).ncols):
            hi = A.embed(k, D.harmonic.block(k).col(i))
            rows.append([A.pairing(hi, A.embed(n - k, D.harmonic.block(n - k).col(j)))
                         for j in range(D.harmonic.block(n - k).ncols)])
        gram[k] = Matrix(rows, ncols=D.harmonic.block(n - k).ncols)

    new_complement = SubspaceFamily(A.basis)
    for k in range(n + 1):
        bk = D.complement.block(k)
        if bk.ncols == 0:
            continue
        cols = []
        for j in range(bk.ncols):
            x = A.embed(k, bk.col(j))
            bk_h = D.harmonic.block(k).ncols
            rhs = []
            for t in range(D.harmonic.block(n - k).ncols):
                unit = [F1 if s == t else F0 for s in range(D.harmonic.block(n - k).ncols)]
                av = alpha_of_harmonic(n - k, unit)
                rhs.append(A.pairing(x, A.embed(n - k, av)))
            if bk_h:
                coeffs = gram[k].transpose().solve(rhs)
                assert coeffs is not None
            else:
                coeffs = []
            astar = [F0] * A.dim(k)
            for t, c in enumerate(coeffs):
                if c != 0:
                    astar = [a + c * b for a, b in zip(astar, D.harmonic.block(k).col(t))]
            a_astar = alpha_of_harmonic(k, coeffs)
            col = [b - s - h / 2 for b, s, h in zip(bk.col(j), astar, a_astar)]
            cols.append(col)
        new_complement.set_block(k, Matrix.from_columns(cols, A.dim(k)))

    return verify_hodge(A, new_harmonic, new_complement, H)


def dminus_apply(D: HodgeDecomposition, a: Vec | str) -> Vec:
    v = D.algebra.element(a) if isinstance(a, str) else a
    return D.dminus(v)
