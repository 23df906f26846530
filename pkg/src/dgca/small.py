"""Generating subspaces, adapted splittings, and the small (quotient) algebra.

The small algebra of a decomposed, simply connected algebra is the smallest
subalgebra containing the harmonic part and closed under both d and d^-.  It
is computed by the degreewise recursion

    C^0 = span(1),  C^1 = 0,
    C^k = harmonic^k + d d^-(products of C in degree k)
                     + d^-(products of C in degree k+1),

products ranging over factors of degree >= 2.  Its quotient by its own null
ideal is a finite-dimensional non-degenerate model of the input, with
dimension windows and a differential support window recorded in a structure
report.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import (
    CohomologyData, Dgca, DgcaMorphism, GradedMap, NotConnectedError, Quotient,
    SubspaceFamily, compute_cohomology, connectivity, is_quasi_iso, make_dgca,
    null_ideal, quotient_by_ideal,
)
from .hodge import HodgeDecomposition, change_harmonic
from .linalg import (
    F0, F1, Matrix, Vec, extend_basis, independent_columns, vec_add, vec_scale,
)


def generating_subspace(H: CohomologyData) -> SubspaceFamily:
    """Echelon complement of the decomposable classes inside positive degrees.

    Returned per degree in class coordinates (over the cohomology ring basis).
    """
    if H.betti[0] != 1:
        raise NotConnectedError("generating subspace needs a connected algebra")
    ring = H.ring()
    fam = SubspaceFamily(ring.basis)
    degs = H.flat_degrees()
    n = H.algebra.top_degree
    for k in range(1, n + 1):
        bk = H.betti[k]
        if bk == 0:
            continue
        cols = []
        for i in range(H.total):
            for j in range(H.total):
                if degs[i] >= 1 and degs[j] >= 1 and degs[i] + degs[j] == k:
                    cup = H.cup(i, j)
                    cols.append([cup[H.offsets[k] + t] for t in range(bk)])
        prod_span = independent_columns(Matrix.from_columns(cols, bk)) if cols \
            else Matrix.from_columns([], bk)
        gen = extend_basis(prod_span, Matrix.identity(bk))
        fam.set_block(k, gen)
    return fam


@dataclass
class GeneratingData:
    """A partial splitting of the generators extended to an adapted one."""

    h_gen: SubspaceFamily                     # class coordinates per degree
    iota0: dict[int, Matrix]                  # generator columns -> algebra coords
    iota: dict[int, Matrix]                   # full class basis -> algebra coords
    monomials: dict[int, list[tuple[int, ...]]]   # weight >= 2, per degree
    K: dict[int, Matrix]                      # kernel of evaluation, monomial coords
    Kcal: SubspaceFamily                      # its image in the algebra
    harmonic: SubspaceFamily                  # the adapted harmonic subspace


def default_partial_splitting(D: HodgeDecomposition, H: CohomologyData,
                              h_gen: SubspaceFamily) -> dict[int, Matrix]:
    """Harmonic representatives of the generating classes."""
    A = D.algebra
    iota0: dict[int, Matrix] = {}
    for k in range(A.top_degree + 1):
        block = h_gen.block(k)
        cols = []
        for j in range(block.ncols):
            vec = A.zero()
            for t, c in enumerate(block.col(j)):
                if c != 0:
                    flat = H.offsets[k] + t
                    vec = vec_add(vec, vec_scale(c, _harmonic_rep(D, H, flat)))
            cols.append(A.component(vec, k))
        iota0[k] = Matrix.from_columns(cols, A.dim(k))
    return iota0


def _harmonic_rep(D: HodgeDecomposition, H: CohomologyData, flat: int) -> Vec:
    """The representative of a class inside the decomposition's harmonic part."""
    A = D.algebra
    k = H.flat_degrees()[flat]
    hk = D.harmonic.block(k)
    classes = Matrix.from_columns(
        [H.proj[k].mul_vec(hk.col(j)) for j in range(hk.ncols)], H.betti[k])
    coeffs = classes.solve([F1 if t == flat - H.offsets[k] else F0
                            for t in range(H.betti[k])])
    assert coeffs is not None
    vec = A.zero()
    for t, c in enumerate(coeffs):
        if c != 0:
            vec = vec_add(vec, vec_scale(c, A.embed(k, hk.col(t))))
    return vec


def adapted_splitting(A: Dgca, D: HodgeDecomposition, h_gen: SubspaceFamily,
                      iota0: dict[int, Matrix],
                      H: CohomologyData | None = None) -> GeneratingData:
    """Extend a partial splitting of the generators to an adapted full splitting.

    The extension solves the section problem for the decomposable classes
    inside the subalgebra generated by the chosen generator representatives,
    and assembles the kernel of the evaluation of formal products.
    """
    H = H or compute_cohomology(A)
    ring = H.ring()
    n = A.top_degree
    degs = H.flat_degrees()

    gens: list[tuple[int, int]] = []        # (degree, column) in h_gen
    for k in range(1, n + 1):
        for j in range(h_gen.block(k).ncols):
            gens.append((k, j))
    gen_vec: list[Vec] = []                 # representative in A
    gen_class: list[Vec] = []               # flat class coordinates
    for k, j in gens:
        col = iota0[k].col(j) if k in iota0 and iota0[k].ncols > j else None
        if col is None:
            raise ValueError("partial splitting misses a generator column")
        vec = A.embed(k, col)
        if any(c != 0 for c in A.d(vec)):
            raise ValueError("partial splitting image is not closed")
        klass = H.project(vec)
        expected = [F0] * H.betti[k]
        for t, c in enumerate(h_gen.block(k).col(j)):
            expected[t] = c
        if [klass[H.offsets[k] + t] for t in range(H.betti[k])] != expected or \
                any(c != 0 for i, c in enumerate(klass)
                    if not H.offsets[k] <= i < H.offsets[k] + H.betti[k]):
            raise ValueError("partial splitting is not a section of the projection")
        gen_vec.append(vec)
        gen_class.append(klass)

    gen_deg = [k for k, _ in gens]
    odd = [gen_deg[i] % 2 == 1 for i in range(len(gens))]

    monomials: dict[int, list[tuple[int, ...]]] = {k: [] for k in range(n + 1)}

    def grow(start: int, current: tuple[int, ...], degree: int):
        if len(current) >= 2:
            monomials[degree].append(current)
        for g in range(start, len(gens)):
            if odd[g] and current and current[-1] == g:
                continue
            nd = degree + gen_deg[g]
            if nd <= n:
                grow(g, current + (g,), nd)

    grow(0, (), 0)

    def eval_monomial_A(mono: tuple[int, ...]) -> Vec:
        vec = gen_vec[mono[0]]
        for g in mono[1:]:
            vec = A.mul_vec(vec, gen_vec[g])
        return vec

    K: dict[int, Matrix] = {}
    Kcal = SubspaceFamily(A.basis)
    iota1: dict[int, Matrix] = {}
    prod_basis: dict[int, Matrix] = {}
    for k in range(n + 1):
        monos = monomials[k]
        bk = H.betti[k]
        eval_vectors = [eval_monomial_A(m) for m in monos]
        class_cols = [[H.project(v)[H.offsets[k] + t] for t in range(bk)]
                      for v in eval_vectors]
        E = Matrix.from_columns(class_cols, bk) if monos else Matrix.from_columns([], bk)
        Kk = E.kernel() if monos else Matrix.from_columns([], 0)
        K[k] = Kk
        kcal_cols = []
        for j in range(Kk.ncols):
            vec = A.zero()
            for m, c in enumerate(Kk.col(j)):
                if c != 0:
                    vec = vec_add(vec, vec_scale(c, eval_vectors[m]))
            kcal_cols.append(A.component(vec, k))
        Kcal.set_block(k, Matrix.from_columns(kcal_cols, A.dim(k)))

        # Section of the decomposable classes inside the generated subalgebra.
        decomp_cols = []
        for i in range(H.total):
            for j in range(H.total):
                if degs[i] >= 1 and degs[j] >= 1 and degs[i] + degs[j] == k:
                    cup = H.cup(i, j)
                    decomp_cols.append([cup[H.offsets[k] + t] for t in range(bk)])
        P = independent_columns(Matrix.from_columns(decomp_cols, bk)) if decomp_cols \
            else Matrix.from_columns([], bk)
        prod_basis[k] = P
        sec_cols = []
        for j in range(P.ncols):
            z = E.solve(P.col(j))
            assert z is not None, "decomposable class not hit by monomial evaluation"
            vec = A.zero()
            for m, c in enumerate(z):
                if c != 0:
                    vec = vec_add(vec, vec_scale(c, eval_vectors[m]))
            sec_cols.append(A.component(vec, k))
        iota1[k] = Matrix.from_columns(sec_cols, A.dim(k))

    iota: dict[int, Matrix] = {}
    harmonic = SubspaceFamily(A.basis)
    for k in range(n + 1):
        bk = H.betti[k]
        if bk == 0:
            iota[k] = Matrix.from_columns([], A.dim(k))
            continue
        if k == 0:
            iota[0] = Matrix.from_columns([A.component(A.one(), 0)], A.dim(0))
            harmonic.set_block(0, iota[0])
            continue
        G = h_gen.block(k)
        P = prod_basis[k]
        full = G.hstack(P)
        assert full.rank() == bk
        cols = []
        for t in range(bk):
            coords = full.solve([F1 if s == t else F0 for s in range(bk)])
            assert coords is not None
            vec = [F0] * A.dim(k)
            for j in range(G.ncols):
                if coords[j] != 0:
                    vec = vec_add(vec, vec_scale(coords[j], iota0[k].col(j)))
            for j in range(P.ncols):
                c = coords[G.ncols + j]
                if c != 0:
                    vec = vec_add(vec, vec_scale(c, iota1[k].col(j)))
            cols.append(vec)
        iota[k] = Matrix.from_columns(cols, A.dim(k))
        harmonic.set_block(k, iota[k])

    return GeneratingData(h_gen=h_gen, iota0=iota0, iota=iota,
                          monomials=monomials, K=K, Kcal=Kcal, harmonic=harmonic)


def adapted_decomposition(A: Dgca, D: HodgeDecomposition,
                          H: CohomologyData | None = None
                          ) -> tuple[HodgeDecomposition, GeneratingData]:
    """Canonical adapted decomposition: generators split by harmonic representatives."""
    H = H or compute_cohomology(A)
    h_gen = generating_subspace(H)
    iota0 = default_partial_splitting(D, H, h_gen)
    data = adapted_splitting(A, D, h_gen, iota0, H)
    new_d = change_harmonic(D, data.harmonic)
    return new_d, data


@dataclass
class SubDgca:
    algebra: Dgca
    inclusion: DgcaMorphism
    family: dict[int, Matrix]


def small_algebra(A: Dgca, D: HodgeDecomposition,
                  H: CohomologyData | None = None) -> SubDgca:
    """The smallest subalgebra containing the harmonic part, closed under d and d^-."""
    H = H or compute_cohomology(A)
    if connectivity(A, H) < 1:
        raise NotConnectedError("small algebra recursion needs a simply connected algebra")
    n = A.top_degree
    C: dict[int, Matrix] = {}
    C[0] = Matrix.from_columns([A.component(A.one(), 0)], A.dim(0))
    if n >= 1:
        C[1] = Matrix.from_columns([], A.dim(1))

    def product_columns(k: int) -> list[Vec]:
        cols = []
        for l1 in range(2, k - 1):
            l2 = k - l1
            if l2 < 2 or l2 not in C or l1 not in C:
                continue
            for i in range(C[l1].ncols):
                u = A.embed(l1, C[l1].col(i))
                for j in range(C[l2].ncols):
                    v = A.embed(l2, C[l2].col(j))
                    prod = A.mul_vec(u, v)
                    cols.append(A.component(prod, k))
        return cols

    for k in range(2, n + 1):
        pieces = [D.harmonic.block(k)]
        dd_cols = []
        for col in product_columns(k):
            vec = A.embed(k, col)
            img = D.pr_exact.apply(vec)
            dd_cols.append(A.component(img, k))
        if dd_cols:
            pieces.append(Matrix.from_columns(dd_cols, A.dim(k)))
        dm_cols = []
        if k + 1 <= n:
            for col in product_columns(k + 1):
                vec = A.embed(k + 1, col)
                img = D.dminus(vec)
                dm_cols.append(A.component(img, k))
        if dm_cols:
            pieces.append(Matrix.from_columns(dm_cols, A.dim(k)))
        stacked = pieces[0]
        for p in pieces[1:]:
            stacked = stacked.hstack(p)
        C[k] = independent_columns(stacked)

    elements = []
    for k in range(n + 1):
        for j in range(C.get(k, Matrix.from_columns([], A.dim(k))).ncols):
            elements.append((f"c{k}_{j}", k))
    basis_cols: dict[int, Matrix] = {k: C.get(k, Matrix.from_columns([], A.dim(k)))
                                     for k in range(n + 1)}

    def to_sub_coords(vec: Vec) -> dict[tuple[int, int], Fraction]:
        out = {}
        for k in range(n + 1):
            comp = A.component(vec, k)
            if all(c == 0 for c in comp):
                continue
            coords = basis_cols[k].solve(comp)
            assert coords is not None, "small algebra is not closed"
            for j, c in enumerate(coords):
                if c != 0:
                    out[(k, j)] = c
        return out

    products = {}
    flat = [(k, j) for k in range(n + 1) for j in range(basis_cols[k].ncols)]
    for a_pos, (ka, ja) in enumerate(flat):
        for kb, jb in flat:
            u = A.embed(ka, basis_cols[ka].col(ja))
            v = A.embed(kb, basis_cols[kb].col(jb))
            prod = A.mul_vec(u, v)
            terms = {f"c{k}_{j}": c for (k, j), c in to_sub_coords(prod).items()}
            if terms and (ka, ja) <= (kb, jb):
                products[(f"c{ka}_{ja}", f"c{kb}_{jb}")] = terms
    differentials = {}
    for k, j in flat:
        dv = A.d(A.embed(k, basis_cols[k].col(j)))
        terms = {f"c{kk}_{jj}": c for (kk, jj), c in to_sub_coords(dv).items()}
        if terms:
            differentials[f"c{k}_{j}"] = terms
    integrate = {}
    for j in range(basis_cols[n].ncols):
        val = A.integrate(A.embed(n, basis_cols[n].col(j)))
        if val != 0:
            integrate[f"c{n}_{j}"] = val

    sub = make_dgca(f"{A.name}-small", elements, "c0_0", products, differentials,
                    integrate, top_degree=n)
    blocks = {k: basis_cols[k] for k in range(n + 1)}
    inclusion = DgcaMorphism(sub, A, GradedMap(sub.basis, A.basis, 0, blocks))
    return SubDgca(algebra=sub, inclusion=inclusion, family=basis_cols)


@dataclass
class StructureReport:
    name: str
    r: int
    n: int
    betti: list[int]
    small_dims: list[int]
    quotient_dims: list[int]
    differential_support: list[int]      # degrees k with d: Q^{k-1} -> Q^k nonzero
    support_window: tuple[int, int]
    window_ok: bool
    clauses: dict[str, bool]
    square_injective: bool = False       # hypothesis for the edge-degree clause

    def serialize_text(self) -> str:
        lines = [f"structure report for {self.name} (r = {self.r}, top degree {self.n})"]
        lines.append("degree:    " + " ".join(f"{k:3d}" for k in range(self.n + 1)))
        lines.append("betti:     " + " ".join(f"{b:3d}" for b in self.betti))
        lines.append("small:     " + " ".join(f"{b:3d}" for b in self.small_dims))
        lines.append("quotient:  " + " ".join(f"{b:3d}" for b in self.quotient_dims))
        lo, hi = self.support_window
        lines.append(f"differential support {self.differential_support} "
                     f"inside window [{lo}, {hi}]: {'yes' if self.window_ok else 'NO'}")
        lines.append(f"square of the first positive classes injective: "
                     f"{'yes' if self.square_injective else 'no'}")
        for name, ok in sorted(self.clauses.items()):
            lines.append(f"  {name}: {'pass' if ok else 'FAIL'}")
        return "\n".join(lines)

    @property
    def ok(self) -> bool:
        return self.window_ok and all(self.clauses.values())


@dataclass
class SmallQuotientResult:
    small: SubDgca
    quotient: Quotient
    report: StructureReport


def small_quotient(A: Dgca, D: HodgeDecomposition,
                   H: CohomologyData | None = None) -> SmallQuotientResult:
    """Quotient of the small algebra by its null ideal, with the window report."""
    H = H or compute_cohomology(A)
    conn = connectivity(A, H)
    if conn < 1:
        raise NotConnectedError("small quotient needs a simply connected algebra")
    r = conn + 1
    n = A.top_degree
    sub = small_algebra(A, D, H)
    ideal = null_ideal(sub.algebra)
    quot = quotient_by_ideal(sub.algebra, ideal, name=f"{A.name}-small-quotient")
    Q = quot.algebra

    small_dims = [sub.algebra.dim(k) for k in range(n + 1)]
    q_dims = [Q.dim(k) for k in range(n + 1)]

    support = []
    for k in range(1, n + 1):
        if not Q.diff.block(k - 1).is_zero():
            support.append(k)
    lo, hi = 2 * r, n - 2 * r + 1
    window_ok = all(lo <= k <= hi for k in support)

    clauses: dict[str, bool] = {}
    low_ok = all(q_dims[k] == H.betti[k] for k in range(0, min(2 * r - 1, n + 1)))
    high_ok = all(q_dims[k] == H.betti[k] for k in range(max(0, n - 2 * r + 2), n + 1))
    clauses["dimension window low (k <= 2r-2)"] = low_ok
    clauses["dimension window high (k >= n-2r+2)"] = high_ok

    # Injectivity of the squaring of the first nonvanishing degree is a
    # hypothesis, not a requirement: when it holds, two more degrees of the
    # quotient must already be harmonic.
    sym_cols = []
    b_r = H.betti[r]
    if 2 * r <= n:
        for i in range(b_r):
            for j in range(i, b_r):
                fi, fj = H.flat_index(r, i), H.flat_index(r, j)
                cup = H.cup(fi, fj)
                sym_cols.append([cup[H.offsets[2 * r] + t]
                                 for t in range(H.betti[2 * r])])
        sym = Matrix.from_columns(sym_cols, H.betti[2 * r]) if sym_cols \
            else Matrix.from_columns([], 0)
        injective = sym.rank() == sym.ncols
    else:
        injective = True
    if injective:
        edges_ok = True
        if 2 * r - 1 <= n:
            edges_ok = edges_ok and q_dims[2 * r - 1] == H.betti[2 * r - 1]
        if 0 <= n - 2 * r + 1:
            edges_ok = edges_ok and q_dims[n - 2 * r + 1] == H.betti[n - 2 * r + 1]
        clauses["edge degrees match when injective"] = edges_ok

    clauses["quotient dimensions self-dual"] = all(
        q_dims[k] == q_dims[n - k] for k in range(n + 1))
    clauses["small inclusion is a quasi-isomorphism"] = is_quasi_iso(sub.inclusion)
    clauses["small-to-quotient projection is a quasi-isomorphism"] = \
        is_quasi_iso(quot.projection)
    if n <= 4 * r - 2:
        clauses["no differential below the formality bound"] = not support

    report = StructureReport(
        name=A.name, r=r, n=n, betti=list(H.betti), small_dims=small_dims,
        quotient_dims=q_dims, differential_support=support,
        support_window=(lo, hi), window_ok=window_ok, clauses=clauses,
        square_injective=injective)
    return SmallQuotientResult(small=sub, quotient=quot, report=report)
