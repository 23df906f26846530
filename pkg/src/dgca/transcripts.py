"""Verification transcripts for constructed catalog entries.

A transcript records the full pipeline result for one algebra: validation,
Betti numbers, decomposition dimensions, the structure report of the small
quotient, the ternary operation with its cocycle checks, and the formality
verdict.  Stored transcripts live under ``data/transcripts`` and the test
suite re-derives them bit for bit.
"""

from __future__ import annotations

from importlib import resources

from .catalog import catalog as catalog_entries, get as catalog_get
from .core import compute_cohomology, connectivity, validate_dgca, validate_poincare
from .hodge import HodgeNotFound, find_hodge
from .interchange import canonical_json
from .obstruction import cocycle_checks, formality_decision, mu3_cochain
from .small import adapted_decomposition, small_quotient
from .transfer import transfer_trees, verify_stasheff
from .multilinear import table_clean


def verification_transcript(name: str) -> dict:
    entry = catalog_get(name)
    A = entry.algebra
    H = compute_cohomology(A)
    out: dict = {
        "name": entry.name,
        "provenance": entry.provenance,
        "valid": validate_dgca(A).ok,
        "poincare_nondegenerate": validate_poincare(A, H).ok,
        "betti": H.betti,
    }
    D = find_hodge(A)
    if isinstance(D, HodgeNotFound):
        out["decomposition"] = {"found": False, "reason": D.reason,
                                "null_ideal_betti": D.null_betti}
        return out
    n = A.top_degree
    out["decomposition"] = {
        "found": True,
        "harmonic_dims": [D.harmonic.dim(k) for k in range(n + 1)],
        "complement_dims": [D.complement.dim(k) for k in range(n + 1)],
    }
    if connectivity(A, H) >= 1:
        Dad, _ = adapted_decomposition(A, D, H)
        res = small_quotient(A, Dad, H)
        out["small_quotient"] = {
            "r": res.report.r,
            "small_dims": res.report.small_dims,
            "quotient_dims": res.report.quotient_dims,
            "differential_support": res.report.differential_support,
            "window_ok": res.report.window_ok,
            "clauses": res.report.clauses,
        }
        S = transfer_trees(Dad, 5)
        mu3 = mu3_cochain(S)
        out["transfer"] = {
            "nonzero_arities": sorted(k for k, t in S.ops.items() if table_clean(t)),
            "stasheff_ok": verify_stasheff(S).ok,
            "mu3": mu3.serialize_lines(),
            "cocycle_checks": cocycle_checks(mu3),
        }
        decision = formality_decision(mu3)
        out["formality"] = {"verdict": decision.verdict}
        if not decision.formal:
            out["formality"]["certificate"] = decision.certificate
    return out


def stored_transcript_text(name: str) -> str:
    ref = resources.files("dgca").joinpath(f"data/transcripts/{name}.json")
    return ref.read_text(encoding="utf-8")


def transcript_names() -> list[str]:
    return [e.name for e in catalog_entries() if e.provenance == "constructed"]


def regenerate_all(target_dir) -> None:
    """Write canonical transcripts for every constructed entry into a directory."""
    from pathlib import Path
    target = Path(target_dir)
    target.mkdir(parents=True, exist_ok=True)
    for name in transcript_names():
        text = canonical_json(verification_transcript(name))
        (target / f"{name}.json").write_text(text, encoding="utf-8")
