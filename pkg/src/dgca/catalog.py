"""Built-in algebra catalog.

Every entry is a valid Poincare DGCA; entries tagged ``constructed`` carry a
stored verification transcript under ``data/transcripts`` that the test suite
re-derives bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .core import Dgca, compute_cohomology, make_dgca


@dataclass
class CatalogEntry:
    name: str
    algebra: Dgca
    provenance: str  # paper-example | standard-model | constructed
    description: str


def example_2_9() -> Dgca:
    """Degree-4 algebra with a non-acyclic null ideal (no decomposition exists)."""
    return make_dgca(
        "example-2.9",
        [("x0", 0), ("x2", 2), ("x3", 3), ("x4", 4)],
        "x0",
        {("x2", "x2"): {"x4": 1}},
        {"x2": {"x3": 1}},
        {"x4": 1},
    )


def exterior_line() -> Dgca:
    return make_dgca("lambda-1", [("e", 0), ("t", 1)], "e", {}, {}, {"t": 1})


def torus(k: int = 2) -> Dgca:
    """Exterior algebra on k degree-1 generators with top-monomial integration."""
    gens = list(range(1, k + 1))
    elements, products = [], {}
    for r in range(k + 1):
        for subset in combinations(gens, r):
            elements.append((_t_id(subset), r))
    for r1 in range(k + 1):
        for s1 in combinations(gens, r1):
            for r2 in range(k + 1):
                for s2 in combinations(gens, r2):
                    key = (_t_id(s1), _t_id(s2))
                    if (_t_id(s2), _t_id(s1)) in products or key in products:
                        continue
                    if set(s1) & set(s2):
                        continue
                    sign = _merge_sign(s1, s2)
                    products[key] = {_t_id(tuple(sorted(s1 + s2))): sign}
    products.pop((_t_id(()), _t_id(())), None)
    full = _t_id(tuple(gens))
    return make_dgca(f"torus-{k}", elements, _t_id(()), products, {}, {full: 1})


def _t_id(subset: tuple[int, ...]) -> str:
    return "e" if not subset else "t" + "".join(str(i) for i in subset)


def _merge_sign(s1: tuple[int, ...], s2: tuple[int, ...]) -> int:
    inv = sum(1 for a in s1 for b in s2 if a > b)
    return -1 if inv % 2 else 1


def sphere(n: int) -> Dgca:
    """Cohomology model of an n-sphere: one generator in degree n."""
    return make_dgca(f"sphere-{n}", [("e", 0), ("v", n)], "e", {}, {}, {"v": 1})


def cp2() -> Dgca:
    """Truncated polynomial model with one degree-2 generator and a*a the volume."""
    return make_dgca(
        "cp2", [("e", 0), ("a", 2), ("aa", 4)], "e",
        {("a", "a"): {"aa": 1}}, {}, {"aa": 1})


def formal_6() -> Dgca:
    """Degree-6 model with a nonzero differential but formal small quotient.

    A truncated degree-2 generator algebra (a, a^2, a^3 = volume) with an
    acyclic, pairing-null pair u -> w glued on; its null ideal is exactly
    that pair, so a decomposition exists and the quotient has d = 0.
    """
    return make_dgca(
        "formal-6",
        [("e", 0), ("a", 2), ("u", 2), ("w", 3), ("b", 4), ("v", 6)],
        "e",
        {
            ("a", "a"): {"b": 1},
            ("a", "b"): {"v": 1},
        },
        {"u": {"w": 1}},
        {"v": 1},
    )


def nonformal_7() -> Dgca:
    """Simply connected degree-7 algebra of Hodge type with a nonzero ternary product.

    Two degree-2 generators u, v with the relation u*v made exact by the
    degree-3 element x (dx = w = u*v); degree-3/4 classes g, h and degree-5
    elements s = u*x, t = v*x complete a non-degenerate pairing into the
    volume z.  The transferred ternary product sends (u, v, v) to [t].
    """
    return make_dgca(
        "nonformal-7",
        [("e", 0), ("u", 2), ("v", 2), ("x", 3), ("g", 3),
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
        {"x": {"w": 1}},
        {"z": 1},
    )


def formal_twin_7() -> Dgca:
    """The cohomology ring of nonformal-7 with zero differential.

    Same graded ring, formal by construction; a ring isomorphism to the
    non-formal algebra's cohomology exists (the identity) but no equivalence
    of the transferred structures does.
    """
    H = compute_cohomology(nonformal_7())
    ring = H.ring()
    return make_dgca(
        "formal-twin-7",
        list(zip(ring.basis.ids, ring.basis.degrees)),
        ring.unit,
        {(ring.basis.ids[i], ring.basis.ids[j]): {
            ring.basis.ids[t]: c for t, c in terms.items()}
         for (i, j), terms in ring.mul.items()
         if i <= j and ring.unit_index not in (i, j)},
        {},
        {ring.basis.ids[i]: c for i, c in ring.integrate_coeffs.items()},
    )


def catalog() -> list[CatalogEntry]:
    entries = [
        CatalogEntry("example-2.9", example_2_9(), "paper-example",
                     "degree-4 algebra whose null ideal is not acyclic"),
        CatalogEntry("lambda-1", exterior_line(), "standard-model",
                     "exterior algebra on one degree-1 generator"),
        CatalogEntry("torus-2", torus(2), "standard-model",
                     "exterior algebra on two degree-1 generators"),
    ]
    for n in range(2, 9):
        entries.append(CatalogEntry(
            f"sphere-{n}", sphere(n), "standard-model",
            f"cohomology model of the {n}-sphere"))
    entries.extend([
        CatalogEntry("cp2", cp2(), "standard-model",
                     "truncated degree-2 generator algebra of degree 4"),
        CatalogEntry("formal-6", formal_6(), "constructed",
                     "degree-6 Hodge-type algebra with d != 0, formal"),
        CatalogEntry("nonformal-7", nonformal_7(), "constructed",
                     "degree-7 Hodge-type algebra with nonzero ternary product"),
        CatalogEntry("formal-twin-7", formal_twin_7(), "constructed",
                     "cohomology ring of nonformal-7 with zero differential"),
    ])
    return entries


def get(name: str) -> CatalogEntry:
    for entry in catalog():
        if entry.name == name:
            return entry
    raise KeyError(f"no catalog entry named {name!r}")
