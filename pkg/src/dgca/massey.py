"""Defining systems and higher product sets on a connected Poincare algebra.

A defining system for classes x_1..x_l is a triangular family a_ij solving
d(a_ij) = sum of sign-twisted partial products; its associated cocycle spans
the product set as the system varies.  For triples the set is an affine
subspace computed exactly: a canonical representative plus the classical
indeterminacy x_1 * H + H * x_l.  The class of the associated cocycle is
normalized so that the canonical contraction-built system reproduces the
transferred ternary operation; this only changes the set by an overall sign
and leaves every triviality statement unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import CohomologyData, Dgca, compute_cohomology
from .hodge import HodgeDecomposition
from .linalg import F0, F1, Matrix, Vec, frac, independent_columns, vec_add, vec_is_zero, vec_scale
from .transfer import AInfinityStructure, transfer_explicit


@dataclass
class DefiningSystem:
    """Triangular family a_ij, 1 <= i <= j <= l, (i, j) != (1, l)."""

    algebra: Dgca
    order: int
    entries: dict[tuple[int, int], Vec]

    def rhs(self, i: int, j: int) -> Vec:
        """Right-hand side of the equation for d(a_ij)."""
        A = self.algebra
        acc = A.zero()
        for k in range(i, j):
            a_ik = self.entries[(i, k)]
            bar = vec_scale(frac(-1 if (A.degree_of(a_ik) or 0) % 2 else 1), a_ik)
            acc = vec_add(acc, A.mul_vec(bar, self.entries[(k + 1, j)]))
        return acc

    def cocycle(self) -> Vec:
        """The associated cocycle built from the top row of the family."""
        A = self.algebra
        l = self.order
        acc = A.zero()
        for k in range(1, l):
            a_1k = self.entries[(1, k)]
            bar = vec_scale(frac(-1 if (A.degree_of(a_1k) or 0) % 2 else 1), a_1k)
            acc = vec_add(acc, A.mul_vec(bar, self.entries[(k + 1, l)]))
        return acc

    def check(self) -> bool:
        """All triangular equations hold and the associated element is closed."""
        A = self.algebra
        l = self.order
        for i in range(1, l + 1):
            for j in range(i, l + 1):
                if (i, j) == (1, l) or i == j:
                    continue
                if A.d(self.entries[(i, j)]) != self.rhs(i, j):
                    return False
        return vec_is_zero(A.d(self.cocycle()))

    def serialize_lines(self) -> list[str]:
        ids = self.algebra.basis.ids
        lines = []
        for (i, j) in sorted(self.entries):
            v = self.entries[(i, j)]
            terms = " + ".join(f"{c}*{ids[t]}" for t, c in enumerate(v) if c != 0) or "0"
            lines.append(f"a[{i},{j}] = {terms}")
        return lines


def find_defining_system(A: Dgca, xs: list[Vec],
                         D: HodgeDecomposition | None = None,
                         H: CohomologyData | None = None) -> DefiningSystem | None:
    """Solve for a defining system in increasing span, canonically.

    Each entry is taken as d^- of its right-hand side when a decomposition is
    supplied (and the side is exact), otherwise as the echelon particular
    solution.  Returns None when some equation has no solution; for l = 3
    that is definitive (the pairwise products are nonzero in cohomology).
    """
    l = len(xs)
    if l < 3:
        raise ValueError("higher products need at least three classes")
    H = H or compute_cohomology(A)
    for x in xs:
        if not vec_is_zero(A.d(x)):
            raise ValueError("inputs must be cocycles")
    entries: dict[tuple[int, int], Vec] = {}
    for i, x in enumerate(xs, start=1):
        entries[(i, i)] = x
    sys = DefiningSystem(A, l, entries)
    for span in range(1, l - 1):
        for i in range(1, l - span + 1):
            j = i + span
            if (i, j) == (1, l):
                continue
            rhs = sys.rhs(i, j)
            deg = A.degree_of(rhs)
            if deg is None:
                if vec_is_zero(rhs):
                    entries[(i, j)] = A.zero()
                    continue
                raise ValueError("mixed-degree right-hand side")
            sol = None
            if D is not None:
                candidate = D.dminus(rhs)
                if A.d(candidate) == rhs:
                    sol = candidate
            if sol is None:
                coords = A.diff.block(deg - 1).solve(A.component(rhs, deg)) \
                    if deg >= 1 else None
                if coords is not None:
                    sol = A.embed(deg - 1, coords)
            if sol is None:
                return None
            entries[(i, j)] = sol
    assert sys.check()
    return sys


@dataclass
class ProductDescription:
    """The set of classes of an l-th order product, exact for l = 3."""

    algebra: Dgca
    cohomology: CohomologyData
    order: int
    degrees: list[int]
    target_degree: int
    representative: Vec                  # flat class coordinates
    indeterminacy: Matrix                # columns: flat class coordinates
    partial: bool = False                # True for l >= 4 (representative only)

    def contains(self, klass: Vec) -> bool:
        if self.partial:
            raise ValueError("membership is only decided for triple products")
        diff = [a - b for a, b in zip(klass, self.representative)]
        return self.indeterminacy.solve(diff) is not None

    @property
    def trivial(self) -> bool:
        zero = [F0] * len(self.representative)
        return self.contains(zero)


def massey_product(A: Dgca, xs: list[Vec],
                   D: HodgeDecomposition | None = None,
                   H: CohomologyData | None = None) -> ProductDescription:
    """The product set of a tuple of classes given by cocycle representatives.

    For triples: an exact affine description (representative plus the
    indeterminacy x1*H + H*x3).  For longer tuples only the canonical
    representative is produced, flagged partial.
    """
    l = len(xs)
    H = H or compute_cohomology(A)
    sys = find_defining_system(A, xs, D, H)
    if sys is None:
        raise ValueError("no defining system exists for the given classes")
    degrees = []
    for x in xs:
        d = A.degree_of(x)
        degrees.append(0 if d is None else d)
    target = sum(degrees) + 2 - l
    # Same-sign normalization as the transferred ternary operation.
    twist = frac(-1 if degrees[1] % 2 == 0 else 1) if l == 3 else F1
    rep = H.project(vec_scale(twist, sys.cocycle()))

    if l != 3:
        return ProductDescription(A, H, l, degrees, target, rep,
                                  Matrix.from_columns([], H.total), partial=True)

    cols: list[Vec] = []
    x1_class = H.project(xs[0])
    x3_class = H.project(xs[2])
    mid_left = degrees[1] + degrees[2] - 1
    mid_right = degrees[0] + degrees[1] - 1
    flat_degs = H.flat_degrees()
    for i in range(H.total):
        if flat_degs[i] == mid_left:
            prod = A.mul_vec(xs[0], H.representative(i))
            cols.append(H.project(prod))
        if flat_degs[i] == mid_right:
            prod = A.mul_vec(H.representative(i), xs[2])
            cols.append(H.project(prod))
    indet = independent_columns(Matrix.from_columns(cols, H.total)) if cols \
        else Matrix.from_columns([], H.total)
    return ProductDescription(A, H, l, degrees, target, rep, indet)


@dataclass
class ScreenResult:
    trivial: bool
    reason: str = ""


def triviality_screen(degrees: list[int], r: int, n: int, l: int) -> ScreenResult:
    """Degree-only triviality tests for an alleged order-l product tuple.

    Uses only the connectivity r (the algebra is (r-1)-connected in the sense
    that H^k = 0 for 1 <= k <= r-1), the top degree n and duality.
    """
    if l < 3:
        raise ValueError("higher products start at order 3")
    if len(degrees) != l:
        raise ValueError("degree tuple length differs from the order")
    for d in degrees:
        if d == 0:
            return ScreenResult(True, "a degree-0 entry acts by scalars")
        if d < 0 or d > n or (1 <= d <= r - 1) or (n - r + 1 <= d <= n - 1):
            return ScreenResult(True, f"degree-{d} cohomology vanishes")
    target = sum(degrees) + 2 - l
    if target == n:
        return ScreenResult(True, "top-degree target is swallowed by duality")
    if target < 0 or target > n or (1 <= target <= r - 1) or (n - r + 1 <= target <= n - 1):
        return ScreenResult(True, f"target degree {target} has no cohomology")
    if r > 1:
        if n <= r * (l + 1) + (1 - l):
            return ScreenResult(True, "top degree below the connectivity window")
        q = n - (r * (l + 1) + (2 - l))
        if q >= 0:
            if any(d < r for d in degrees) or sum(d - r for d in degrees) > q:
                return ScreenResult(True, "degree pattern outside the connectivity window")
    return ScreenResult(False, "no degree-based obstruction")


def crosscheck_mu3(A: Dgca, D: HodgeDecomposition, xs: list[Vec],
                   S: AInfinityStructure | None = None) -> bool:
    """Whether the transferred ternary value of a triple lies in its product set.

    Requires the two adjacent pairwise products to vanish in cohomology.
    """
    if len(xs) != 3:
        raise ValueError("expected a triple of classes")
    H = compute_cohomology(A)
    for a, b in ((xs[0], xs[1]), (xs[1], xs[2])):
        if any(c != 0 for c in H.project(A.mul_vec(a, b))):
            raise ValueError("adjacent products must vanish in cohomology")
    S = S or transfer_explicit(D)
    classes = [H.project(x) for x in xs]
    args = [{i: c for i, c in enumerate(k) if c != 0} for k in classes]
    from .multilinear import eval_table
    value = eval_table(S.op(3), args)
    flat = [F0] * H.total
    for i, c in value.items():
        flat[i] = c
    product = massey_product(A, xs, D, H)
    return product.contains(flat)
