"""Sparse multilinear tables over a graded basis, and bar-shifted sign calculus.

A table of arity p maps basis index tuples to sparse output vectors.  All
sign-sensitive operations (structure relations, insertions, the Hochschild
differential) are computed in the suspension of the graded space, where every
structure operation has odd degree and the only signs are Koszul signs in the
shifted degrees.  ``decalage`` converts between the two pictures; it is an
involution.
"""

from __future__ import annotations

from fractions import Fraction

from .linalg import F0, frac

Table = dict[tuple[int, ...], dict[int, Fraction]]


def table_clean(t: Table) -> Table:
    out: Table = {}
    for key, terms in t.items():
        kept = {k: c for k, c in terms.items() if c != 0}
        if kept:
            out[key] = kept
    return out


def table_add(a: Table, b: Table, coeff: Fraction = Fraction(1)) -> Table:
    out: Table = {k: dict(v) for k, v in a.items()}
    for key, terms in b.items():
        slot = out.setdefault(key, {})
        for k, c in terms.items():
            slot[k] = slot.get(k, F0) + coeff * c
    return table_clean(out)


def table_scale(t: Table, coeff: Fraction) -> Table:
    if coeff == 0:
        return {}
    return {key: {k: coeff * c for k, c in terms.items()} for key, terms in t.items()}


def table_is_zero(t: Table) -> bool:
    return not table_clean(t)


def table_eq(a: Table, b: Table) -> bool:
    return table_clean(a) == table_clean(b)


def decalage(table: Table, arity: int, degrees: list[int]) -> Table:
    """Transport a table through the suspension (an involution).

    The entry at (x_1, ..., x_p) picks up (-1)^{sum (p-i) deg x_i}.
    """
    out: Table = {}
    for key, terms in table.items():
        eps = sum((arity - 1 - pos) * degrees[idx] for pos, idx in enumerate(key))
        if eps % 2:
            out[key] = {k: -c for k, c in terms.items()}
        else:
            out[key] = dict(terms)
    return out


def insert_sum(g: Table, g_arity: int, f: Table, f_arity: int, f_opdeg: int,
               degrees: list[int]) -> Table:
    """Shifted insertion sum of f into g over all positions.

    Both tables are in the shifted picture; ``f_opdeg`` is the shifted
    operator degree of f, entering the Koszul sign past the leading inputs.
    Only support keys of both tables are enumerated.
    """
    out: Table = {}
    for gkey, gterms in g.items():
        for pos in range(g_arity):
            prefix, slot, suffix = gkey[:pos], gkey[pos], gkey[pos + 1:]
            for fkey, fterms in f.items():
                coeff_slot = fterms.get(slot)
                if coeff_slot is None:
                    continue
                key = prefix + fkey + suffix
                sdeg = sum(degrees[i] - 1 for i in prefix)
                sign = -1 if (f_opdeg * sdeg) % 2 else 1
                slot_out = out.setdefault(key, {})
                for k, c in gterms.items():
                    slot_out[k] = slot_out.get(k, F0) + frac(sign) * coeff_slot * c
    return table_clean(out)


def bracket(g: Table, g_arity: int, g_opdeg: int,
            f: Table, f_arity: int, f_opdeg: int, degrees: list[int]) -> Table:
    """Shifted-world bracket [g, f] = g.f - (-1)^{|g||f|} f.g of two tables."""
    left = insert_sum(g, g_arity, f, f_arity, f_opdeg, degrees)
    right = insert_sum(f, f_arity, g, g_arity, g_opdeg, degrees)
    sign = frac(-1 if (g_opdeg * f_opdeg) % 2 else 1)
    return table_add(left, table_scale(right, -sign), Fraction(1))


def eval_table(table: Table, args: list[dict[int, Fraction]]) -> dict[int, Fraction]:
    """Evaluate a table multilinearly on sparse coefficient vectors."""
    out: dict[int, Fraction] = {}
    def rec(pos: int, key: tuple[int, ...], coeff: Fraction):
        if coeff == 0:
            return
        if pos == len(args):
            terms = table.get(key)
            if terms:
                for k, c in terms.items():
                    out[k] = out.get(k, F0) + coeff * c
            return
        for idx, c in args[pos].items():
            rec(pos + 1, key + (idx,), coeff * c)
    rec(0, (), Fraction(1))
    return {k: c for k, c in out.items() if c != 0}
