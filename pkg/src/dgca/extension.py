"""Extension of an algebra by closed degree-1 exterior generators.

The extension is a genuine structure-constant tensor product with exterior
monomials, so every downstream operation applies to it unchanged.  Basis
elements are pairs (base element, monomial subset), ordered base-first inside
each monomial, monomials in lexicographic subset order; the top class is the
base top class times the full monomial.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import combinations

from .core import CohomologyData, Dgca, SubspaceFamily, make_dgca
from .hodge import HodgeDecomposition, verify_hodge
from .linalg import F0, Matrix, Vec, frac
from .multilinear import Table, table_clean
from .obstruction import Cochain


def _generator_offset(ids: list[str]) -> int:
    """Highest exterior-generator index already used in the identifiers."""
    top = 0
    for ident in ids:
        for match in re.findall(r"\*t(\d+)", ident):
            top = max(top, int(match))
    return top


def _monomials(k: int, offset: int = 0) -> list[tuple[int, ...]]:
    out = []
    for r in range(k + 1):
        out.extend(combinations(range(offset + 1, offset + k + 1), r))
    return out


def _mono_id(subset: tuple[int, ...]) -> str:
    return "".join(f"*t{i}" for i in subset)


def _merge_sign(s1: tuple[int, ...], s2: tuple[int, ...]) -> int:
    inv = sum(1 for a in s1 for b in s2 if a > b)
    return -1 if inv % 2 else 1


def extend(base: Dgca, k: int) -> Dgca:
    """Tensor the base with the exterior algebra on k closed degree-1 generators."""
    if k < 0:
        raise ValueError("number of generators must be nonnegative")
    if k == 0:
        return base
    offset = _generator_offset(base.basis.ids)
    monos = _monomials(k, offset)
    n = base.top_degree
    ids = base.basis.ids
    deg = base.basis.degrees
    # Order by degree, then monomial, then base position.
    ordered = []
    for target in range(n + k + 1):
        for S in monos:
            for i, ident in enumerate(ids):
                if deg[i] + len(S) == target:
                    ordered.append((ident + _mono_id(S), target))

    products: dict[tuple[str, str], dict[str, Fraction]] = {}
    unit = base.unit + _mono_id(())
    for S in monos:
        for i in range(len(ids)):
            for T in monos:
                if set(S) & set(T):
                    continue
                for j in range(len(ids)):
                    terms = base.mul.get((i, j))
                    if not terms:
                        continue
                    a_id = ids[i] + _mono_id(S)
                    b_id = ids[j] + _mono_id(T)
                    if (b_id, a_id) in products or (a_id, b_id) in products:
                        continue
                    if (i == base.unit_index and not S) or (j == base.unit_index and not T):
                        continue
                    sign = _merge_sign(S, T)
                    if (len(S) * deg[j]) % 2:
                        sign = -sign
                    union = tuple(sorted(S + T))
                    entry = {ids[t] + _mono_id(union): frac(sign) * c
                             for t, c in terms.items()}
                    products[(a_id, b_id)] = entry

    differentials: dict[str, dict[str, Fraction]] = {}
    for S in monos:
        for kdeg, block in base.diff.blocks.items():
            src = base.basis.indices(kdeg)
            tgt = base.basis.indices(kdeg + 1)
            for jpos, i in enumerate(src):
                col = block.col(jpos)
                entry = {ids[tgt[t]] + _mono_id(S): c
                         for t, c in enumerate(col) if c != 0}
                if entry:
                    differentials[ids[i] + _mono_id(S)] = entry

    full = tuple(range(offset + 1, offset + k + 1))
    integrate = {ids[i] + _mono_id(full): c
                 for i, c in base.integrate_coeffs.items()}
    suffix = f"[t{offset + 1}]" if k == 1 else f"[t{offset + 1}..t{offset + k}]"
    return make_dgca(base.name + suffix, ordered, unit,
                     products, differentials, integrate, top_degree=n + k)


def extend_decomposition(base: Dgca, D: HodgeDecomposition, k: int,
                         ext: Dgca | None = None) -> HodgeDecomposition:
    """Carry a decomposition of the base onto the extension.

    Harmonic and complement subspaces are the base ones times every exterior
    monomial; the result is re-verified from scratch.
    """
    ext = ext or extend(base, k)
    monos = _monomials(k, _generator_offset(base.basis.ids))
    harmonic = SubspaceFamily(ext.basis)
    complement = SubspaceFamily(ext.basis)
    for family, target in ((D.harmonic, harmonic), (D.complement, complement)):
        cols_per_degree: dict[int, list[Vec]] = {}
        for kdeg in range(base.top_degree + 1):
            block = family.block(kdeg)
            for j in range(block.ncols):
                for S in monos:
                    col = [F0] * ext.dim(kdeg + len(S))
                    pos = {g: p for p, g in enumerate(ext.basis.indices(kdeg + len(S)))}
                    for t, c in zip(base.basis.indices(kdeg), block.col(j)):
                        if c != 0:
                            ident = base.basis.ids[t] + _mono_id(S)
                            col[pos[ext.basis.index_of[ident]]] = c
                    cols_per_degree.setdefault(kdeg + len(S), []).append(col)
        for kdeg, cols in cols_per_degree.items():
            target.set_block(kdeg, Matrix.from_columns(cols, ext.dim(kdeg)))
    return verify_hodge(ext, harmonic, complement)


def kunneth_class_matrix(base: Dgca, ext: Dgca,
                         H_base: CohomologyData, H_ext: CohomologyData,
                         k: int) -> tuple[Matrix, list[tuple[int, tuple[int, ...]]]]:
    """Matrix sending Kunneth coordinates (base class, monomial) to extension classes.

    Returns the matrix plus the Kunneth index list in column order.
    """
    monos = _monomials(k, _generator_offset(base.basis.ids))
    index: list[tuple[int, tuple[int, ...]]] = []
    cols: list[Vec] = []
    for flat in range(H_base.total):
        for S in monos:
            rep = H_base.representative(flat)
            col = ext.zero()
            for i, c in enumerate(rep):
                if c != 0:
                    ident = base.basis.ids[i] + _mono_id(S)
                    col[ext.basis.index_of[ident]] = c
            cols.append(H_ext.project(col))
            index.append((flat, S))
    return Matrix.from_columns(cols, H_ext.total), index


def extended_mu3(mu3_base: Cochain, k: int) -> Cochain:
    """Multilinear extension of a ternary cochain over k exterior generators.

    Arguments indexed by (base class, monomial); the value on a triple with
    pairwise disjoint monomials is the base value times the merged monomial,
    with the exterior Koszul sign of pulling each monomial past the later
    slots.  Overlapping monomials give zero.
    """
    ring = mu3_base.ring
    ext_ring = extend(ring, k)
    monos = _monomials(k, _generator_offset(ring.basis.ids))
    ids = ring.basis.ids
    deg = ring.basis.degrees
    table: Table = {}
    for (i, j, l), terms in mu3_base.table.items():
        for S1 in monos:
            for S2 in monos:
                if set(S1) & set(S2):
                    continue
                for S3 in monos:
                    if set(S3) & (set(S1) | set(S2)):
                        continue
                    sign = _merge_sign(S1, S2) * _merge_sign(tuple(sorted(S1 + S2)), S3)
                    exp = len(S1) * ((deg[j] + len(S2)) + (deg[l] + len(S3))) \
                        + len(S2) * (deg[l] + len(S3))
                    if exp % 2:
                        sign = -sign
                    union = tuple(sorted(S1 + S2 + S3))
                    key = (ext_ring.basis.index_of[ids[i] + _mono_id(S1)],
                           ext_ring.basis.index_of[ids[j] + _mono_id(S2)],
                           ext_ring.basis.index_of[ids[l] + _mono_id(S3)])
                    entry = {ext_ring.basis.index_of[ids[t] + _mono_id(union)]:
                             frac(sign) * c for t, c in terms.items()}
                    if entry:
                        table[key] = entry
    return Cochain(ext_ring, 3, -1, table_clean(table))
