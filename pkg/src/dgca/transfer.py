"""Homotopy transfer from a decomposed algebra to operations on its cohomology.

The binary and ternary operations have closed forms:

    m2(a, b) = harmonic projection of a*b
    m3(a, b, c) = harmonic projection of d^-(a*b)*c - (-1)^{|a|} a*d^-(b*c)

Higher operations come from the summation over rooted binary trees with
leaves fed through the harmonic inclusion, internal edges through d^- and the
root through the harmonic projection.  The tree sum is evaluated by dynamic
programming over argument intervals, which enumerates every planar binary
tree exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core import CohomologyData, Dgca, ValidationReport, compute_cohomology
from .hodge import HodgeDecomposition
from .linalg import F0, F1, Matrix, Vec, frac, vec_add, vec_scale
from .multilinear import (
    Table, decalage, eval_table, insert_sum, table_add, table_clean,
)


@dataclass
class AInfinityStructure:
    """Operations m_k on the cohomology basis; m_1 is identically zero here."""

    ring: Dgca
    ops: dict[int, Table]
    arity_bound: int
    cohomology: CohomologyData | None = field(default=None, repr=False)

    def op(self, k: int) -> Table:
        return self.ops.get(k, {})

    def degrees(self) -> list[int]:
        return list(self.ring.basis.degrees)

    def serialize_lines(self) -> list[str]:
        ids = self.ring.basis.ids
        lines = []
        for k in sorted(self.ops):
            for key in sorted(self.ops[k]):
                for out, c in sorted(self.ops[k][key].items()):
                    args = ",".join(ids[i] for i in key)
                    lines.append(f"{k}; {args}; {ids[out]}; {c}")
        return lines


@dataclass
class AInfinityMorphism:
    """Components phi_k (degree 1-k) between two transferred structures."""

    source: AInfinityStructure
    target: AInfinityStructure
    components: dict[int, Table]

    def component(self, k: int) -> Table:
        return self.components.get(k, {})


class _TransferContext:
    """Harmonic inclusion/projection relating class coordinates to the algebra."""

    def __init__(self, D: HodgeDecomposition):
        self.D = D
        self.A = D.algebra
        self.H = compute_cohomology(self.A)
        self.ring = self.H.ring()
        n = self.A.top_degree
        self.iota: list[Vec] = []
        inv_blocks: dict[int, Matrix] = {}
        for k in range(n + 1):
            hk = D.harmonic.block(k)
            if hk.ncols == 0:
                continue
            classes = Matrix.from_columns(
                [self.H.proj[k].mul_vec(hk.col(j)) for j in range(hk.ncols)],
                self.H.betti[k])
            inv_blocks[k] = classes.inverse()
        for flat in range(self.H.total):
            k = self.H.flat_degrees()[flat]
            j = flat - self.H.offsets[k]
            coeffs = inv_blocks[k].col(j)
            vec = self.A.zero()
            for t, c in enumerate(coeffs):
                if c != 0:
                    vec = vec_add(vec, vec_scale(c, self.A.embed(
                        k, self.D.harmonic.block(k).col(t))))
            self.iota.append(vec)

    def project(self, v: Vec) -> dict[int, Fraction]:
        coords = self.H.project(self.D.harmonic_projection(v))
        return {i: c for i, c in enumerate(coords) if c != 0}


def transfer_explicit(D: HodgeDecomposition) -> AInfinityStructure:
    """The closed-form binary and ternary transferred operations."""
    ctx = _TransferContext(D)
    A, H = ctx.A, ctx.H
    degs = H.flat_degrees()
    n = A.top_degree
    m2: Table = {}
    m3: Table = {}
    for i in range(H.total):
        for j in range(H.total):
            if degs[i] + degs[j] > n:
                continue
            prod = A.mul_vec(ctx.iota[i], ctx.iota[j])
            out = ctx.project(prod)
            if out:
                m2[(i, j)] = out
    for i in range(H.total):
        for j in range(H.total):
            ij = A.mul_vec(ctx.iota[i], ctx.iota[j])
            dm_ij = D.dminus(ij)
            for k in range(H.total):
                if not 0 <= degs[i] + degs[j] + degs[k] - 1 <= n:
                    continue
                jk = A.mul_vec(ctx.iota[j], ctx.iota[k])
                lhs = A.mul_vec(dm_ij, ctx.iota[k])
                rhs = A.mul_vec(ctx.iota[i], D.dminus(jk))
                sgn = frac(-1 if degs[i] % 2 else 1)
                val = ctx.project(vec_add(lhs, vec_scale(-sgn, rhs)))
                if val:
                    m3[(i, j, k)] = val
    return AInfinityStructure(ring=ctx.ring, ops={2: m2, 3: table_clean(m3)},
                              arity_bound=3, cohomology=H)


def transfer_trees(D: HodgeDecomposition, k_max: int | None = None) -> AInfinityStructure:
    """Transferred operations up to arity k_max by exact tree summation."""
    ctx = _TransferContext(D)
    A, H = ctx.A, ctx.H
    n = A.top_degree
    if k_max is None:
        k_max = min(6, n)
    if k_max < 2:
        raise ValueError("arity bound must be at least 2")
    degs = H.flat_degrees()

    def tree_sum(flat: tuple[int, ...]) -> Vec:
        k = len(flat)
        adeg = [degs[i] for i in flat]
        g: dict[tuple[int, int], Vec] = {}
        for i in range(k):
            g[(i, i + 1)] = [-c for c in ctx.iota[flat[i]]]
        value: Vec | None = None
        for span in range(2, k + 1):
            for i in range(0, k - span + 1):
                j = i + span
                acc = A.zero()
                for m in range(i + 1, j):
                    s, t = m - i, j - m
                    sign = 1 if (s + 1) % 2 == 0 else -1
                    if ((1 - t) * sum(adeg[i:m])) % 2:
                        sign = -sign
                    term = A.mul_vec(g[(i, m)], g[(m, j)])
                    acc = vec_add(acc, vec_scale(frac(sign), term))
                if span < k:
                    g[(i, j)] = D.dminus(acc)
                else:
                    value = acc
        assert value is not None
        return value

    ops: dict[int, Table] = {}
    for k in range(2, k_max + 1):
        table: Table = {}
        stack = [()]
        # Depth-first enumeration of index tuples with a degree feasibility cut:
        # the transferred operation lands in degree sum+2-k, and partial sums
        # can only grow, so prune as soon as the bound is exceeded.
        def emit(prefix: tuple[int, ...]):
            if len(prefix) == k:
                out_deg = sum(degs[i] for i in prefix) + 2 - k
                if 0 <= out_deg <= n:
                    val = ctx.project(tree_sum(prefix))
                    if val:
                        table[prefix] = val
                return
            remaining = k - len(prefix)
            partial = sum(degs[i] for i in prefix)
            for i in range(H.total):
                if partial + degs[i] + 2 - k <= n:
                    emit(prefix + (i,))
        emit(())
        ops[k] = table
    return AInfinityStructure(ring=ctx.ring, ops=ops, arity_bound=k_max,
                              cohomology=H)


def tau_tensor(D: HodgeDecomposition,
               S: AInfinityStructure | None = None) -> dict[tuple[int, int, int, int], Fraction]:
    """Pairing contraction of the ternary operation over class basis quadruples."""
    S = S or transfer_explicit(D)
    ring = S.ring
    degs = S.degrees()
    n = ring.top_degree
    tau: dict[tuple[int, int, int, int], Fraction] = {}
    for key, terms in S.op(3).items():
        i, j, k = key
        for l in range(len(degs)):
            if degs[i] + degs[j] + degs[k] + degs[l] != n + 1:
                continue
            val = F0
            for out, c in terms.items():
                val += c * ring.pairing(ring.element(ring.basis.ids[out]),
                                        ring.element(ring.basis.ids[l]))
            if val != 0:
                tau[(i, j, k, l)] = val
    return tau


def verify_stasheff(S: AInfinityStructure) -> ValidationReport:
    """Check the structure relations of the operations through the arity bound.

    In the suspended picture the relation at total arity n is that the sum of
    all insertions b_m . b_s with m + s = n + 1 vanishes; the differential is
    zero here, so only arities >= 2 contribute.
    """
    report = ValidationReport()
    degrees = S.degrees()
    shifted = {k: decalage(S.op(k), k, degrees) for k in range(2, S.arity_bound + 1)}
    for n in range(2, S.arity_bound + 1):
        total: Table = {}
        for s in range(2, n):
            m = n + 1 - s
            if m < 2 or m > S.arity_bound or s > S.arity_bound:
                continue
            part = insert_sum(shifted[m], m, shifted[s], s, 1, degrees)
            total = table_add(total, part)
        bad = table_clean(total)
        if bad:
            witness = sorted(bad)[0]
            report.add("stasheff", (n,) + witness,
                       f"relation at arity {n} fails on {witness}: {bad[witness]}")
    return report


def verify_morphism(F: AInfinityMorphism, max_arity: int = 3) -> ValidationReport:
    """Check the morphism identities through the given arity.

    Both sides are evaluated in the suspended picture: the left side inserts
    source operations into the components, the right side feeds component
    outputs into target operations; component maps are even there, so only
    insertions of the odd structure maps produce signs.
    """
    report = ValidationReport()
    src, tgt = F.source, F.target
    sdeg = src.degrees()
    tdeg = tgt.degrees()
    b_src = {k: decalage(src.op(k), k, sdeg) for k in range(2, max(3, src.arity_bound) + 1)}
    b_tgt = {k: decalage(tgt.op(k), k, tdeg) for k in range(2, max(3, tgt.arity_bound) + 1)}
    comp = {k: decalage(F.component(k), k, sdeg) for k in F.components}

    def comp_eval(k: int, args: list[dict[int, Fraction]]) -> dict[int, Fraction]:
        return eval_table(comp.get(k, {}), args)

    total = len(sdeg)

    def unit_arg(i: int) -> dict[int, Fraction]:
        return {i: F1}

    def check_tuple(key: tuple[int, ...]):
        n = len(key)
        lhs: dict[int, Fraction] = {}
        for s in range(2, n + 1):
            for r in range(0, n - s + 1):
                t = n - s - r
                inner = b_src.get(s, {}).get(key[r:r + s])
                if not inner:
                    continue
                sign = frac(-1 if sum(sdeg[i] - 1 for i in key[:r]) % 2 else 1)
                args = [unit_arg(i) for i in key[:r]] + [inner] + \
                       [unit_arg(i) for i in key[r + s:]]
                part = comp_eval(r + 1 + t, args)
                for k2, c in part.items():
                    lhs[k2] = lhs.get(k2, F0) + sign * c
        rhs: dict[int, Fraction] = {}

        def splits(rest: tuple[int, ...], blocks: list[dict[int, Fraction]]):
            if not rest:
                out = eval_table(b_tgt.get(len(blocks), {}), blocks)
                for k2, c in out.items():
                    rhs[k2] = rhs.get(k2, F0) + c
                return
            for size in range(1, len(rest) + 1):
                blk = comp_eval(size, [unit_arg(i) for i in rest[:size]])
                if blk:
                    splits(rest[size:], blocks + [blk])

        if n == 1:
            out = comp_eval(1, [unit_arg(key[0])])
            for k2, c in out.items():
                rhs[k2] = rhs.get(k2, F0) + c
            # arity-1 identity is 0 = b1(phi1) with zero differentials: skip
            return
        splits(key, [])
        diff = {k2: lhs.get(k2, F0) - rhs.get(k2, F0)
                for k2 in set(lhs) | set(rhs)}
        diff = {k2: c for k2, c in diff.items() if c != 0}
        if diff:
            report.add("morphism", key, f"identity at arity {n} fails: {diff}")

    def enumerate_tuples(n: int, prefix: tuple[int, ...]):
        if len(prefix) == n:
            check_tuple(prefix)
            return
        for i in range(total):
            enumerate_tuples(n, prefix + (i,))

    for n in range(2, max_arity + 1):
        enumerate_tuples(n, ())
    return report
