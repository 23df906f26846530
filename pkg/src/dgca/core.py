"""Graded-commutative differential algebra model over exact rationals.

A `Dgca` is a finite-dimensional graded commutative algebra with a degree +1
differential and an integration functional on the top degree.  Elements are
dense coefficient vectors over the full ordered basis; per-degree blocks are
used for all linear algebra.  Every operation in this module is a pure
function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import (
    F0, F1, Matrix, Vec, extend_basis, frac, in_span, independent_columns,
    vec_add, vec_is_zero, vec_scale, zero_vec,
)


class NotConnectedError(ValueError):
    """Raised when an operation needs dim H^0 = 1 and the input fails it."""


class GradedBasis:
    """Ordered basis of a graded vector space concentrated in [0, top_degree]."""

    def __init__(self, elements: list[tuple[str, int]], top_degree: int):
        assert top_degree >= 0
        self.elements = [(str(i), int(d)) for i, d in elements]
        self.top_degree = top_degree
        self.ids = [i for i, _ in self.elements]
        self.degrees = [d for _, d in self.elements]
        if len(set(self.ids)) != len(self.ids):
            raise ValueError("duplicate basis identifiers")
        for i, d in self.elements:
            if not 0 <= d <= top_degree:
                raise ValueError(f"degree of {i!r} out of range [0, {top_degree}]")
        self.index_of = {i: k for k, (i, _) in enumerate(self.elements)}
        self.by_degree: dict[int, list[int]] = {k: [] for k in range(top_degree + 1)}
        for k, (_, d) in enumerate(self.elements):
            self.by_degree[d].append(k)

    def __len__(self) -> int:
        return len(self.elements)

    def dim(self, k: int) -> int:
        return len(self.by_degree.get(k, []))

    def indices(self, k: int) -> list[int]:
        return self.by_degree.get(k, [])


class GradedMap:
    """Degree-homogeneous linear map given by per-degree blocks.

    `blocks[k]` maps degree-k coordinates of the source to degree-(k+shift)
    coordinates of the target; missing blocks are zero.
    """

    def __init__(self, source: GradedBasis, target: GradedBasis, shift: int,
                 blocks: dict[int, Matrix]):
        self.source = source
        self.target = target
        self.shift = shift
        self.blocks = {}
        for k, blk in blocks.items():
            expected = (target.dim(k + shift), source.dim(k))
            assert blk.shape == expected, f"block {k}: {blk.shape} != {expected}"
            self.blocks[k] = blk

    def block(self, k: int) -> Matrix:
        if k in self.blocks:
            return self.blocks[k]
        return Matrix.zeros(self.target.dim(k + self.shift), self.source.dim(k))

    def apply(self, v: Vec) -> Vec:
        out = zero_vec(len(self.target))
        for k in range(self.source.top_degree + 1):
            src = self.source.indices(k)
            if not src:
                continue
            comp = [v[i] for i in src]
            if all(c == 0 for c in comp):
                continue
            kt = k + self.shift
            tgt = self.target.indices(kt) if 0 <= kt <= self.target.top_degree else []
            if not tgt:
                continue
            img = self.block(k).mul_vec(comp)
            for idx, c in zip(tgt, img):
                out[idx] += c
        return out


class SubspaceFamily:
    """One subspace of A^k per degree, each given by independent columns."""

    def __init__(self, basis: GradedBasis, blocks: dict[int, Matrix] | None = None):
        self.basis = basis
        self.blocks: dict[int, Matrix] = {}
        for k, m in (blocks or {}).items():
            self.set_block(k, m)

    def set_block(self, k: int, m: Matrix):
        assert m.nrows == self.basis.dim(k)
        self.blocks[k] = independent_columns(m)

    def block(self, k: int) -> Matrix:
        if k in self.blocks:
            return self.blocks[k]
        return Matrix.from_columns([], self.basis.dim(k))

    def dim(self, k: int) -> int:
        return self.block(k).ncols

    def total_dim(self) -> int:
        return sum(self.dim(k) for k in range(self.basis.top_degree + 1))

    def global_columns(self, k: int) -> list[Vec]:
        """Columns of the degree-k block embedded as full-basis vectors."""
        cols = []
        idx = self.basis.indices(k)
        for j in range(self.block(k).ncols):
            v = zero_vec(len(self.basis))
            for i, c in zip(idx, self.block(k).col(j)):
                v[i] = c
            cols.append(v)
        return cols


@dataclass
class Violation:
    rule: str
    witness: tuple
    detail: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, rule: str, witness: tuple, detail: str):
        self.violations.append(Violation(rule, witness, detail))

    def rules(self) -> list[str]:
        seen = []
        for v in self.violations:
            if v.rule not in seen:
                seen.append(v.rule)
        return seen

    def summary(self) -> str:
        if self.ok:
            return "valid"
        lines = [f"{len(self.violations)} violation(s):"]
        for v in self.violations:
            lines.append(f"  [{v.rule}] {v.witness}: {v.detail}")
        return "\n".join(lines)


class Dgca:
    """Finite-dimensional DGCA with an integration functional on the top degree.

    `mul` maps basis index pairs to sparse product coefficients; missing pairs
    multiply to zero.  The constructor completes the table so both orders of
    every pair are present (Koszul flip) and fills in unit products that were
    left implicit.
    """

    def __init__(self, name: str, basis: GradedBasis, unit: str,
                 mul: dict[tuple[int, int], dict[int, Fraction]],
                 diff: GradedMap, integrate: dict[int, Fraction]):
        self.name = name
        self.basis = basis
        if unit not in basis.index_of:
            raise ValueError(f"unknown unit identifier {unit!r}")
        self.unit = unit
        self.unit_index = basis.index_of[unit]
        if basis.degrees[self.unit_index] != 0:
            raise ValueError("unit must have degree 0")
        self.diff = diff
        n = basis.top_degree
        for i, c in integrate.items():
            if basis.degrees[i] != n:
                raise ValueError("integration functional supported outside top degree")
        self.integrate_coeffs = {i: frac(c) for i, c in integrate.items() if c != 0}

        self.mul: dict[tuple[int, int], dict[int, Fraction]] = {}
        deg = basis.degrees
        for (i, j), terms in mul.items():
            clean = {k: frac(c) for k, c in terms.items() if c != 0}
            for k in clean:
                if deg[k] != deg[i] + deg[j]:
                    raise ValueError(
                        f"product {basis.ids[i]}*{basis.ids[j]} has a term of wrong degree")
            if clean:
                self.mul[(i, j)] = clean
        # Koszul completion of the flipped pairs that were not given.
        for (i, j), terms in list(self.mul.items()):
            if (j, i) not in self.mul and i != j:
                sign = -1 if (deg[i] % 2) and (deg[j] % 2) else 1
                self.mul[(j, i)] = {k: sign * c for k, c in terms.items()}
        # Implicit unit products.
        u = self.unit_index
        for k in range(len(basis)):
            self.mul.setdefault((u, k), {k: F1})
            self.mul.setdefault((k, u), {k: F1})

    # -- element helpers ---------------------------------------------------

    def dim(self, k: int) -> int:
        return self.basis.dim(k)

    @property
    def top_degree(self) -> int:
        return self.basis.top_degree

    def zero(self) -> Vec:
        return zero_vec(len(self.basis))

    def element(self, ident: str) -> Vec:
        if ident not in self.basis.index_of:
            raise KeyError(f"unknown element identifier {ident!r}")
        v = self.zero()
        v[self.basis.index_of[ident]] = F1
        return v

    def one(self) -> Vec:
        return self.element(self.unit)

    def component(self, v: Vec, k: int) -> Vec:
        return [v[i] for i in self.basis.indices(k)]

    def embed(self, k: int, coords: Vec) -> Vec:
        v = self.zero()
        for i, c in zip(self.basis.indices(k), coords):
            v[i] = c
        return v

    def mul_basis(self, i: int, j: int) -> Vec:
        v = self.zero()
        for k, c in self.mul.get((i, j), {}).items():
            v[k] = c
        return v

    def mul_vec(self, x: Vec, y: Vec) -> Vec:
        out = self.zero()
        xi = [(i, c) for i, c in enumerate(x) if c != 0]
        yj = [(j, c) for j, c in enumerate(y) if c != 0]
        for i, a in xi:
            for j, b in yj:
                terms = self.mul.get((i, j))
                if terms:
                    ab = a * b
                    for k, c in terms.items():
                        out[k] += ab * c
        return out

    def d(self, v: Vec) -> Vec:
        return self.diff.apply(v)

    def integrate(self, v: Vec) -> Fraction:
        return sum((c * v[i] for i, c in self.integrate_coeffs.items()), F0)

    def pairing(self, x: Vec, y: Vec) -> Fraction:
        """Top-degree pairing evaluated on cochains."""
        return self.integrate(self.mul_vec(x, y))

    def degree_of(self, v: Vec) -> int | None:
        """Degree of a homogeneous vector, None for 0 or mixed."""
        degs = {self.basis.degrees[i] for i, c in enumerate(v) if c != 0}
        return degs.pop() if len(degs) == 1 else None

    # -- per-degree matrices ----------------------------------------------

    def pairing_matrix(self, k: int) -> Matrix:
        """Matrix of <e_i^k, e_j^{n-k}> over the degree-k and (n-k) bases."""
        n = self.top_degree
        rows = []
        for i in self.basis.indices(k):
            row = []
            for j in self.basis.indices(n - k):
                row.append(self.integrate(self.mul_basis(i, j)))
            rows.append(row)
        return Matrix(rows, ncols=self.dim(n - k))

    def exact_family(self) -> SubspaceFamily:
        """Per-degree image of the differential, d(A^{k-1}) inside A^k."""
        fam = SubspaceFamily(self.basis)
        for k in range(1, self.top_degree + 1):
            fam.set_block(k, independent_columns(self.diff.block(k - 1)))
        return fam


@dataclass
class DgcaMorphism:
    """Degree-0 linear map between two algebras, given by per-degree blocks."""

    source: Dgca
    target: Dgca
    map: GradedMap

    def apply(self, v: Vec) -> Vec:
        return self.map.apply(v)


def make_dgca(name: str, elements: list[tuple[str, int]], unit: str,
              products: dict[tuple[str, str], dict[str, Fraction | int]],
              differentials: dict[str, dict[str, Fraction | int]],
              integrate: dict[str, Fraction | int],
              top_degree: int | None = None) -> Dgca:
    """Build a Dgca from identifier-keyed tables."""
    if top_degree is None:
        top_degree = max((d for _, d in elements), default=0)
    basis = GradedBasis(elements, top_degree)
    idx = basis.index_of
    mul = {}
    for (a, b), terms in products.items():
        for ident in (a, b, *terms):
            if ident not in idx:
                raise ValueError(f"unknown identifier {ident!r} in product table")
        key = (idx[a], idx[b])
        if key in mul:
            raise ValueError(f"duplicate product entry ({a}, {b})")
        mul[key] = {idx[c]: frac(v) for c, v in terms.items()}
    blocks: dict[int, Matrix] = {}
    cols: dict[int, dict[int, Vec]] = {}
    for a, terms in differentials.items():
        if a not in idx:
            raise ValueError(f"unknown identifier {a!r} in differential table")
        k = basis.degrees[idx[a]]
        col = zero_vec(basis.dim(k + 1)) if k + 1 <= top_degree else None
        if col is None:
            raise ValueError(f"differential of top-degree element {a!r}")
        pos = {g: p for p, g in enumerate(basis.indices(k + 1))}
        for b, v in terms.items():
            if b not in idx:
                raise ValueError(f"unknown identifier {b!r} in differential table")
            if basis.degrees[idx[b]] != k + 1:
                raise ValueError(f"d({a}) has a term of wrong degree")
            col[pos[idx[b]]] = frac(v)
        cols.setdefault(k, {})[basis.indices(k).index(idx[a])] = col
    for k, colmap in cols.items():
        m = Matrix.zeros(basis.dim(k + 1), basis.dim(k))
        for jpos, col in colmap.items():
            for i, c in enumerate(col):
                m.rows[i][jpos] = c
        blocks[k] = m
    diff = GradedMap(basis, basis, 1, blocks)
    integ = {}
    for a, v in integrate.items():
        if a not in idx:
            raise ValueError(f"unknown identifier {a!r} in integration table")
        integ[idx[a]] = frac(v)
    return Dgca(name, basis, unit, mul, diff, integ)


# ---------------------------------------------------------------------------
# validation


def validate_dgca(A: Dgca) -> ValidationReport:
    """Check every DGCA axiom on basis tuples; violations become report rows."""
    report = ValidationReport()
    basis = A.basis
    n = len(basis)
    deg = basis.degrees
    ids = basis.ids

    for i in range(n):
        for j in range(i, n):
            lhs = A.mul_basis(i, j)
            sign = -1 if (deg[i] % 2) and (deg[j] % 2) else 1
            rhs = vec_scale(frac(sign), A.mul_basis(j, i))
            if lhs != rhs:
                report.add("commutativity", (ids[i], ids[j]),
                           "a*b != (-1)^{|a||b|} b*a")

    for i in range(n):
        u = A.mul_vec(A.one(), A.element(ids[i]))
        w = A.mul_vec(A.element(ids[i]), A.one())
        if u != A.element(ids[i]) or w != A.element(ids[i]):
            report.add("unit", (ids[i],), "1*a or a*1 differs from a")

    for i in range(n):
        for j in range(n):
            ij = A.mul_basis(i, j)
            for k in range(n):
                left = A.mul_vec(ij, A.element(ids[k]))
                right = A.mul_vec(A.element(ids[i]), A.mul_basis(j, k))
                if left != right:
                    report.add("associativity", (ids[i], ids[j], ids[k]),
                               "(ab)c != a(bc)")

    for i in range(n):
        for j in range(n):
            ab = A.mul_basis(i, j)
            lhs = A.d(ab)
            da_b = A.mul_vec(A.d(A.element(ids[i])), A.element(ids[j]))
            sgn = frac(-1 if deg[i] % 2 else 1)
            a_db = vec_scale(sgn, A.mul_vec(A.element(ids[i]), A.d(A.element(ids[j]))))
            if lhs != vec_add(da_b, a_db):
                report.add("leibniz", (ids[i], ids[j]),
                           "d(ab) != (da)b + (-1)^{|a|} a(db)")

    for i in range(n):
        if not vec_is_zero(A.d(A.d(A.element(ids[i])))):
            report.add("d-squared", (ids[i],), "d(d(a)) != 0")

    top = basis.top_degree
    for i in basis.indices(top - 1) if top >= 1 else []:
        val = A.integrate(A.d(A.element(ids[i])))
        if val != 0:
            report.add("stokes", (ids[i],), f"integral of d({ids[i]}) = {val} != 0")

    return report


class CohomologyData:
    """Cocycle representatives, projections and Betti numbers, per degree.

    Representatives extend the image of d by kernel columns, leftmost first;
    in degree 0 the unit is offered first so the class of 1 is always a basis
    vector.  A flat index runs over all classes ordered by degree, with labels
    ``h{degree}_{position}``.
    """

    def __init__(self, A: Dgca):
        self.algebra = A
        basis = A.basis
        n = basis.top_degree
        self.reps: dict[int, Matrix] = {}
        self.proj: dict[int, Matrix] = {}
        self.betti: list[int] = []
        for k in range(n + 1):
            dim_k = basis.dim(k)
            dk = A.diff.block(k) if k < n else Matrix.zeros(0, dim_k)
            kernel = dk.kernel()
            image = independent_columns(A.diff.block(k - 1)) if k >= 1 \
                else Matrix.from_columns([], dim_k)
            candidates = kernel
            if k == 0 and dim_k:
                unit_col = Matrix.from_columns(
                    [A.component(A.one(), 0)], dim_k)
                candidates = unit_col.hstack(kernel)
            reps = extend_basis(image, candidates)
            self.reps[k] = reps
            self.betti.append(reps.ncols)
            comp = extend_basis(reps.hstack(image), Matrix.identity(dim_k))
            full = reps.hstack(image).hstack(comp)
            if dim_k:
                inv = full.inverse()
                self.proj[k] = Matrix(inv.rows[: reps.ncols], ncols=dim_k)
            else:
                self.proj[k] = Matrix.zeros(0, 0)
        self.offsets = []
        total = 0
        for k in range(n + 1):
            self.offsets.append(total)
            total += self.betti[k]
        self.total = total
        self._ring: Dgca | None = None

    def labels(self) -> list[str]:
        out = []
        for k in range(len(self.betti)):
            out.extend(f"h{k}_{j}" for j in range(self.betti[k]))
        return out

    def flat_degrees(self) -> list[int]:
        out = []
        for k, b in enumerate(self.betti):
            out.extend([k] * b)
        return out

    def flat_index(self, k: int, j: int) -> int:
        return self.offsets[k] + j

    def representative(self, flat: int) -> Vec:
        k = self.flat_degrees()[flat]
        j = flat - self.offsets[k]
        return self.algebra.embed(k, self.reps[k].col(j))

    def project(self, v: Vec) -> Vec:
        """Flat class coordinates of a cocycle (projection along the chosen complement)."""
        out = zero_vec(self.total)
        for k in range(len(self.betti)):
            if not self.betti[k]:
                continue
            coords = self.proj[k].mul_vec(self.algebra.component(v, k))
            for j, c in enumerate(coords):
                out[self.offsets[k] + j] = c
        return out

    def include(self, klass: Vec) -> Vec:
        """Cocycle representative of a flat class-coordinate vector."""
        v = self.algebra.zero()
        degs = self.flat_degrees()
        for i, c in enumerate(klass):
            if c != 0:
                v = vec_add(v, vec_scale(c, self.representative(i)))
        return v

    def ring(self) -> Dgca:
        """The cohomology as a DGCA with zero differential and induced pairing."""
        if self._ring is not None:
            return self._ring
        A = self.algebra
        labels = self.labels()
        degs = self.flat_degrees()
        elements = list(zip(labels, degs))
        products = {}
        for i in range(self.total):
            ri = self.representative(i)
            for j in range(self.total):
                prod = A.mul_vec(ri, self.representative(j))
                coords = self.project(prod)
                terms = {labels[t]: c for t, c in enumerate(coords) if c != 0}
                if terms and i <= j:
                    products[(labels[i], labels[j])] = terms
        integ = {}
        n = A.top_degree
        for j in range(self.betti[n] if n < len(self.betti) else 0):
            flat = self.offsets[n] + j
            val = A.integrate(self.representative(flat))
            if val != 0:
                integ[labels[flat]] = val
        self._ring = make_dgca(f"H({A.name})", elements, labels[0] if labels else "h0_0",
                               products, {}, integ, top_degree=n)
        return self._ring

    def cup(self, i: int, j: int) -> Vec:
        """Flat class coordinates of the product of two flat classes."""
        prod = self.algebra.mul_vec(self.representative(i), self.representative(j))
        return self.project(prod)


def compute_cohomology(A: Dgca) -> CohomologyData:
    return CohomologyData(A)


def validate_poincare(A: Dgca, H: CohomologyData | None = None) -> ValidationReport:
    """Check non-degeneracy of the induced pairing on cohomology, per degree."""
    report = ValidationReport()
    H = H or compute_cohomology(A)
    n = A.top_degree
    for k in range(n + 1):
        bk, bnk = H.betti[k], H.betti[n - k]
        if bk == 0:
            continue
        gram = []
        for i in range(bk):
            ri = H.representative(H.flat_index(k, i))
            row = []
            for j in range(bnk):
                rj = H.representative(H.flat_index(n - k, j))
                row.append(A.pairing(ri, rj))
            gram.append(row)
        g = Matrix(gram, ncols=bnk)
        if g.rank() < bk:
            report.add("poincare-degenerate", (k,),
                       f"pairing H^{k} x H^{n-k} has rank {g.rank()} < {bk}")
    if H.betti[0] == 1 and (n >= len(H.betti) or H.betti[n] < 1):
        report.add("top-cohomology", (n,), "connected but dim H^n < 1")
    return report


def pairing_eval(A: Dgca, a: Vec | str, b: Vec | str) -> Fraction:
    """<a, b> = integral of the top-degree part of a*b."""
    x = A.element(a) if isinstance(a, str) else a
    y = A.element(b) if isinstance(b, str) else b
    return A.pairing(x, y)


def null_ideal(A: Dgca) -> SubspaceFamily:
    """The exact annihilator of the pairing, degree by degree."""
    fam = SubspaceFamily(A.basis)
    n = A.top_degree
    for k in range(n + 1):
        if not A.dim(k):
            continue
        p = A.pairing_matrix(k)
        fam.set_block(k, p.transpose().kernel())
    _check_null_ideal(A, fam)
    return fam


def _check_null_ideal(A: Dgca, fam: SubspaceFamily):
    n = A.top_degree
    for k in range(n + 1):
        for col in fam.global_columns(k):
            dv = A.d(col)
            if not vec_is_zero(dv):
                target = fam.block(k + 1)
                if not in_span(target, A.component(dv, k + 1)):
                    raise RuntimeError("null space is not d-invariant")
            for i in range(len(A.basis)):
                prod = A.mul_vec(A.element(A.basis.ids[i]), col)
                kk = A.basis.degrees[i] + k
                if not vec_is_zero(prod) and kk <= n:
                    if not in_span(fam.block(kk), A.component(prod, kk)):
                        raise RuntimeError("null space is not an ideal")


@dataclass
class Quotient:
    algebra: Dgca
    projection: DgcaMorphism
    section: GradedMap  # chosen preimages of the quotient basis


def quotient_by_ideal(A: Dgca, ideal: SubspaceFamily, name: str | None = None) -> Quotient:
    """Quotient DGCA by a d-invariant ideal, with projection and section.

    The integration functional descends whenever it vanishes on the top
    degree of the ideal (always the case for the null ideal); otherwise the
    quotient integrates to zero.
    """
    n = A.top_degree
    for k in range(n + 1):
        for col in ideal.global_columns(k):
            dv = A.d(col)
            if not vec_is_zero(dv) and not in_span(ideal.block(k + 1),
                                                   A.component(dv, k + 1)):
                raise ValueError("ideal is not d-invariant")
            for i in range(len(A.basis)):
                prod = A.mul_vec(A.element(A.basis.ids[i]), col)
                kk = A.basis.degrees[i] + k
                if kk <= n and not vec_is_zero(prod):
                    if not in_span(ideal.block(kk), A.component(prod, kk)):
                        raise ValueError("subspace family is not an ideal")

    comp_cols: dict[int, Matrix] = {}
    pi_blocks: dict[int, Matrix] = {}
    for k in range(n + 1):
        dim_k = A.dim(k)
        if not dim_k:
            comp_cols[k] = Matrix.from_columns([], 0)
            pi_blocks[k] = Matrix.zeros(0, 0)
            continue
        cands = Matrix.identity(dim_k)
        if k == 0:
            cands = Matrix.from_columns([A.component(A.one(), 0)], dim_k).hstack(cands)
        comp = extend_basis(ideal.block(k), cands)
        if k == 0 and in_span(ideal.block(0), A.component(A.one(), 0)):
            raise ValueError("unit lies in the ideal")
        comp_cols[k] = comp
        full = ideal.block(k).hstack(comp)
        extra = extend_basis(full, Matrix.identity(dim_k))
        inv = full.hstack(extra).inverse()
        start = ideal.block(k).ncols
        pi_blocks[k] = Matrix(inv.rows[start:start + comp.ncols], ncols=dim_k)

    elements = []
    q_ids: dict[int, list[str]] = {}
    for k in range(n + 1):
        q_ids[k] = []
        for j in range(comp_cols[k].ncols):
            col = comp_cols[k].col(j)
            nz = [(i, c) for i, c in enumerate(col) if c != 0]
            if len(nz) == 1 and nz[0][1] == 1:
                ident = A.basis.ids[A.basis.indices(k)[nz[0][0]]]
            else:
                ident = f"q{k}_{j}"
                while ident in A.basis.index_of:
                    ident += "'"
            q_ids[k].append(ident)
            elements.append((ident, k))
    qbasis = GradedBasis(elements, n)

    def project_vec(v: Vec) -> Vec:
        out = zero_vec(len(qbasis))
        for k in range(n + 1):
            if comp_cols[k].ncols == 0:
                continue
            coords = pi_blocks[k].mul_vec(A.component(v, k))
            for j, c in enumerate(coords):
                out[qbasis.index_of[q_ids[k][j]]] = c
        return out

    unit_coords = project_vec(A.one())
    unit_hits = [i for i, c in enumerate(unit_coords) if c != 0]
    assert len(unit_hits) == 1 and unit_coords[unit_hits[0]] == 1
    q_unit = qbasis.ids[unit_hits[0]]

    mul = {}
    flat_reps = []
    for k in range(n + 1):
        for j in range(comp_cols[k].ncols):
            flat_reps.append(A.embed(k, comp_cols[k].col(j)))
    for i, ri in enumerate(flat_reps):
        for j, rj in enumerate(flat_reps):
            coords = project_vec(A.mul_vec(ri, rj))
            terms = {t: c for t, c in enumerate(coords) if c != 0}
            if terms:
                mul[(i, j)] = terms

    dblocks: dict[int, Matrix] = {}
    for k in range(n):
        cols = []
        for j in range(comp_cols[k].ncols):
            dv = A.d(A.embed(k, comp_cols[k].col(j)))
            qv = project_vec(dv)
            cols.append([qv[qbasis.index_of[i]] for i in q_ids[k + 1]])
        dblocks[k] = Matrix.from_columns(cols, len(q_ids[k + 1]))

    descends = all(A.integrate(col) == 0 for col in ideal.global_columns(n))
    integ = {}
    if descends:
        for j in range(comp_cols[n].ncols):
            val = A.integrate(A.embed(n, comp_cols[n].col(j)))
            if val != 0:
                integ[qbasis.index_of[q_ids[n][j]]] = val

    Q = Dgca(name or f"{A.name}/ideal", qbasis, q_unit, mul,
             GradedMap(qbasis, qbasis, 1, dblocks), integ)

    proj_blocks = {k: pi_blocks[k] for k in range(n + 1)}
    # Reindex projection blocks to the quotient basis ordering per degree.
    fixed = {}
    for k in range(n + 1):
        order = [q_ids[k].index(qbasis.ids[i]) for i in qbasis.indices(k)]
        rows = [proj_blocks[k].rows[j] for j in order] if proj_blocks[k].nrows else []
        fixed[k] = Matrix(rows, ncols=A.dim(k))
    projection = DgcaMorphism(A, Q, GradedMap(A.basis, qbasis, 0, fixed))

    sec_blocks = {}
    for k in range(n + 1):
        cols = []
        for i in qbasis.indices(k):
            j = q_ids[k].index(qbasis.ids[i])
            cols.append(comp_cols[k].col(j))
        sec_blocks[k] = Matrix.from_columns(cols, A.dim(k))
    section = GradedMap(qbasis, A.basis, 0, sec_blocks)
    return Quotient(Q, projection, section)


def connectivity(A: Dgca, H: CohomologyData | None = None) -> int:
    """Largest r with H^k = 0 for 1 <= k <= r; requires dim H^0 = 1."""
    H = H or compute_cohomology(A)
    if H.betti[0] != 1:
        raise NotConnectedError(f"dim H^0 = {H.betti[0]} != 1")
    r = 0
    for k in range(1, A.top_degree + 1):
        if H.betti[k] == 0:
            r = k
        else:
            break
    return r


def is_quasi_iso(f: DgcaMorphism) -> bool:
    """True iff the induced map on cohomology is an isomorphism in every degree.

    Raises ValueError when f is not a unital multiplicative chain map.
    """
    A, B = f.source, f.target
    for i, ident in enumerate(A.basis.ids):
        e = A.element(ident)
        if f.apply(A.d(e)) != B.d(f.apply(e)):
            raise ValueError(f"not a chain map at {ident}")
        for j, jdent in enumerate(A.basis.ids):
            lhs = f.apply(A.mul_basis(i, j))
            rhs = B.mul_vec(f.apply(e), f.apply(A.element(jdent)))
            if lhs != rhs:
                raise ValueError(f"not multiplicative at ({ident}, {jdent})")
    if f.apply(A.one()) != B.one():
        raise ValueError("unit is not preserved")

    HA, HB = compute_cohomology(A), compute_cohomology(B)
    for k in range(max(A.top_degree, B.top_degree) + 1):
        ba = HA.betti[k] if k < len(HA.betti) else 0
        bb = HB.betti[k] if k < len(HB.betti) else 0
        if ba != bb:
            return False
        if ba == 0:
            continue
        cols = []
        for j in range(ba):
            img = f.apply(HA.representative(HA.flat_index(k, j)))
            coords = HB.proj[k].mul_vec(B.component(img, k))
            cols.append(coords)
        if Matrix.from_columns(cols, bb).rank() < ba:
            return False
    return True


def restricted_complex_betti(A: Dgca, fam: SubspaceFamily) -> list[int]:
    """Betti numbers of (fam, d) for a d-invariant subspace family."""
    n = A.top_degree
    blocks = {}
    for k in range(n + 1):
        cols = []
        for col in fam.global_columns(k):
            dv = A.component(A.d(col), k + 1) if k < n else []
            target = fam.block(k + 1) if k < n else Matrix.from_columns([], 0)
            if k < n and fam.dim(k + 1):
                x = target.solve(dv)
                if x is None:
                    raise ValueError("family is not d-invariant")
                cols.append(x)
            else:
                if k < n and any(c != 0 for c in dv):
                    raise ValueError("family is not d-invariant")
                cols.append(zero_vec(fam.dim(k + 1) if k < n else 0))
        blocks[k] = Matrix.from_columns(cols, fam.dim(k + 1) if k < n else 0)
    betti = []
    for k in range(n + 1):
        ker = blocks[k].kernel().ncols if fam.dim(k) else 0
        img = blocks[k - 1].rank() if k >= 1 else 0
        betti.append(ker - img)
    return betti
