"""Hochschild/Harrison machinery on a cohomology ring and the formality decision.

Cochains are sparse multilinear tables on the ring's basis.  The coboundary
is computed in the suspended picture as (minus) the bracket with the shifted
multiplication; this is the convention under which two transferred ternary
operations of the same algebra differ by exactly the coboundary of the
connecting bilinear component.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import Dgca
from .linalg import F0, F1, Matrix, Vec, frac
from .multilinear import (
    Table, bracket, decalage, eval_table, table_add, table_clean,
    table_is_zero, table_scale,
)
from .transfer import AInfinityStructure


@dataclass
class Cochain:
    """Multilinear map of a fixed arity and internal degree on a graded ring."""

    ring: Dgca
    arity: int
    internal_degree: int
    table: Table

    def clean(self) -> "Cochain":
        return Cochain(self.ring, self.arity, self.internal_degree,
                       table_clean(self.table))

    def is_zero(self) -> bool:
        return table_is_zero(self.table)

    def serialize_lines(self) -> list[str]:
        ids = self.ring.basis.ids
        lines = []
        for key in sorted(self.table):
            for out, c in sorted(self.table[key].items()):
                args = ",".join(ids[i] for i in key)
                lines.append(f"{self.arity}; {args}; {ids[out]}; {c}")
        return lines


def _mul_table(ring: Dgca) -> Table:
    table: Table = {}
    total = len(ring.basis)
    for i in range(total):
        for j in range(total):
            terms = ring.mul.get((i, j))
            if terms:
                table[(i, j)] = dict(terms)
    return table


def hochschild_differential(c: Cochain) -> Cochain:
    """Coboundary of a cochain with respect to the ring multiplication.

    Computed as minus the bracket with the shifted multiplication; on a
    bilinear cochain of internal degree -1 this evaluates to

        (d psi)(a, b, c) =
            psi(a, b) c - (-1)^{|a|} a psi(b, c) + psi(ab, c) - psi(a, bc),

    the convention under which two ternary operations transferred from the
    same algebra differ by exactly the coboundary of the connecting
    bilinear component.
    """
    ring = c.ring
    degrees = list(ring.basis.degrees)
    b2 = decalage(_mul_table(ring), 2, degrees)
    shifted = decalage(c.table, c.arity, degrees)
    opdeg = c.arity + c.internal_degree - 1
    br = bracket(b2, 2, 1, shifted, c.arity, opdeg, degrees)
    out = decalage(table_scale(br, frac(-1)), c.arity + 1, degrees)
    return Cochain(ring, c.arity + 1, c.internal_degree, table_clean(out))


def mu3_cochain(S: AInfinityStructure) -> Cochain:
    return Cochain(S.ring, 3, -1, table_clean(S.op(3)))


def cocycle_checks(mu3: Cochain) -> dict[str, bool]:
    """Hochschild cocycle test and the signed three-term shuffle identity."""
    assert mu3.arity == 3 and mu3.internal_degree == -1
    hoch = hochschild_differential(mu3).is_zero()

    ring = mu3.ring
    deg = ring.basis.degrees
    total = len(ring.basis)
    harrison = True
    for a in range(total):
        for b in range(total):
            for c in range(total):
                acc: dict[int, Fraction] = {}
                for key, sign_exp in (((a, b, c), 0),
                                      ((b, a, c), 1 + deg[a] * deg[b]),
                                      ((b, c, a), deg[a] * (deg[b] + deg[c]))):
                    terms = mu3.table.get(key)
                    if not terms:
                        continue
                    s = frac(-1 if sign_exp % 2 else 1)
                    for k, v in terms.items():
                        acc[k] = acc.get(k, F0) + s * v
                if any(v != 0 for v in acc.values()):
                    harrison = False
    return {"hochschild_cocycle": hoch, "harrison": harrison}


def _bilinear_slots(ring: Dgca) -> list[tuple[int, int, int]]:
    """(i, j, out) index triples a degree -1 bilinear cochain may populate."""
    deg = ring.basis.degrees
    total = len(ring.basis)
    slots = []
    for i in range(total):
        for j in range(total):
            want = deg[i] + deg[j] - 1
            if not 0 <= want <= ring.top_degree:
                continue
            for t in range(total):
                if deg[t] == want:
                    slots.append((i, j, t))
    return slots


def _coboundary_system(ring: Dgca) -> tuple[list[tuple[int, int, int]],
                                            list[Cochain],
                                            list[tuple[tuple[int, ...], int]]]:
    """Elementary bilinear cochains, their coboundaries, and the row index."""
    slots = _bilinear_slots(ring)
    columns = []
    row_keys: set[tuple[tuple[int, ...], int]] = set()
    for (i, j, t) in slots:
        elem = Cochain(ring, 2, -1, {(i, j): {t: F1}})
        db = hochschild_differential(elem)
        columns.append(db)
        for key, terms in db.table.items():
            for out in terms:
                row_keys.add((key, out))
    return slots, columns, sorted(row_keys)


@dataclass
class FormalityResult:
    formal: bool
    witness: Cochain | None = None          # bilinear phi2 with d phi2 = mu3
    certificate: dict | None = None         # functional separating mu3 from coboundaries

    @property
    def verdict(self) -> str:
        return "Formal" if self.formal else "NonFormal"


def solve_coboundary(target: Cochain) -> FormalityResult:
    """Decide whether an arity-3, degree -1 cochain is a coboundary.

    Returns a bilinear witness on success and a separating linear functional
    on the trilinear slots otherwise.
    """
    ring = target.ring
    slots, columns, row_keys = _coboundary_system(ring)
    for key, terms in table_clean(target.table).items():
        for out in terms:
            if (key, out) not in row_keys:
                row_keys = sorted(set(row_keys) | {(key, out)})
    row_index = {rk: r for r, rk in enumerate(row_keys)}
    nrows, ncols = len(row_keys), len(slots)
    m = Matrix.zeros(nrows, ncols)
    for cidx, db in enumerate(columns):
        for key, terms in db.table.items():
            for out, c in terms.items():
                m.rows[row_index[(key, out)]][cidx] = c
    rhs: Vec = [F0] * nrows
    for key, terms in table_clean(target.table).items():
        for out, c in terms.items():
            rhs[row_index[(key, out)]] = c

    x = m.solve(rhs)
    if x is not None:
        table: Table = {}
        for (slot, coeff) in zip(slots, x):
            if coeff != 0:
                i, j, t = slot
                table.setdefault((i, j), {})[t] = coeff
        return FormalityResult(True, witness=Cochain(ring, 2, -1, table))

    kernel = m.transpose().kernel()
    ids = ring.basis.ids
    for jcol in range(kernel.ncols):
        y = kernel.col(jcol)
        value = sum((a * b for a, b in zip(y, rhs)), F0)
        if value != 0:
            lines = []
            for r, coeff in enumerate(y):
                if coeff != 0:
                    key, out = row_keys[r]
                    args = ",".join(ids[i] for i in key)
                    lines.append(f"{len(key)}; {args}; {ids[out]}; {coeff}")
            return FormalityResult(False, certificate={
                "pairing_with_target": str(value),
                "functional": sorted(lines)})
    raise RuntimeError("inconsistent system without a separating functional")


def formality_decision(mu3: Cochain) -> FormalityResult:
    checks = cocycle_checks(mu3)
    if not checks["hochschild_cocycle"]:
        raise ValueError("cochain is not a Hochschild cocycle")
    return solve_coboundary(mu3)


@dataclass
class CompareResult:
    status: str                     # equivalent | distinct | phi-invalid
    witness: Cochain | None = None  # bilinear component phi2 (source -> target)
    reason: str = ""


def _check_ring_iso(s1: AInfinityStructure, s2: AInfinityStructure,
                    phi: Matrix) -> str | None:
    r1, r2 = s1.ring, s2.ring
    n1, n2 = len(r1.basis), len(r2.basis)
    if phi.shape != (n2, n1):
        return f"map has shape {phi.shape}, expected {(n2, n1)}"
    for j in range(n1):
        for i in range(n2):
            if phi.rows[i][j] != 0 and r2.basis.degrees[i] != r1.basis.degrees[j]:
                return "map is not degree preserving"
    if phi.rank() != n1 or n1 != n2:
        return "map is not invertible"
    if phi.mul_vec(r1.one()) != r2.one():
        return "map does not preserve the unit"
    for i in range(n1):
        for j in range(n1):
            lhs = phi.mul_vec(r1.mul_basis(i, j))
            rhs = r2.mul_vec(phi.col(i), phi.col(j))
            if lhs != rhs:
                return f"map is not multiplicative at ({r1.basis.ids[i]}, {r1.basis.ids[j]})"
    return None


def compare_classes(s1: AInfinityStructure, s2: AInfinityStructure,
                    phi: Matrix) -> CompareResult:
    """Decide equivalence of two transferred structures along a given ring map.

    The target ternary operation is pulled back through phi and compared with
    the source one up to a coboundary; the witness, composed with phi, is the
    bilinear component of an equivalence.
    """
    problem = _check_ring_iso(s1, s2, phi)
    if problem is not None:
        return CompareResult("phi-invalid", reason=problem)
    phi_inv = phi.inverse()
    r1 = s1.ring
    total = len(r1.basis)
    pulled: Table = {}
    m3_2 = s2.op(3)
    deg = r1.basis.degrees
    for i in range(total):
        for j in range(total):
            for k in range(total):
                if not 0 <= deg[i] + deg[j] + deg[k] - 1 <= r1.top_degree:
                    continue
                args = [
                    {t: c for t, c in enumerate(phi.col(i)) if c != 0},
                    {t: c for t, c in enumerate(phi.col(j)) if c != 0},
                    {t: c for t, c in enumerate(phi.col(k)) if c != 0},
                ]
                out = eval_table(m3_2, args)
                if not out:
                    continue
                vec = [F0] * total
                for t, c in out.items():
                    vec[t] = c
                back = phi_inv.mul_vec(vec)
                entry = {t: c for t, c in enumerate(back) if c != 0}
                if entry:
                    pulled[(i, j, k)] = entry
    source_mu3 = table_clean(s1.op(3))
    difference = table_add(pulled, table_scale(source_mu3, frac(-1)))
    result = solve_coboundary(Cochain(r1, 3, -1, difference))
    if not result.formal:
        return CompareResult("distinct",
                             reason="pulled-back ternary class differs")
    psi = result.witness
    phi2: Table = {}
    for key, terms in psi.table.items():
        vec = [F0] * total
        for t, c in terms.items():
            vec[t] = c
        out = phi.mul_vec(vec)
        entry = {t: c for t, c in enumerate(out) if c != 0}
        if entry:
            phi2[key] = entry
    return CompareResult("equivalent",
                         witness=Cochain(s2.ring, 2, -1, phi2))
