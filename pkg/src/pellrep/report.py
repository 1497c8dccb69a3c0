"""Machine-readable campaign reports: JSON (schema 1) and a flat CSV view.

The report is a plain-data tree (dicts, lists, strings, ints, floats) so that
``load_report(emit_report(r)) == r`` holds exactly.  Exact integers that can
exceed double range (sequence terms, reduction ceilings) are carried as
decimal strings.  Field order is fixed by construction, which makes reports
byte-identical across runs of the same configuration apart from the
``generated_at`` stamp.
"""

from __future__ import annotations

import csv
import json
import platform
from dataclasses import dataclass, field
from datetime import datetime, timezone

import gmpy2

from . import __version__
from .bounds import BoundChainResult, ChainConstant, chain_constants, sci_int
from .prover import (
    ClaimFlag,
    LargeKLedger,
    SmallKRow,
    SolutionRecord,
    TableComparison,
)

SCHEMA_VERSION = 1


@dataclass
class CampaignReport:
    schema: int = SCHEMA_VERSION
    tool: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    generated_at: str = ""
    search: list = field(default_factory=list)
    table: dict = field(default_factory=dict)
    small_k: list = field(default_factory=list)
    large_k: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)
    discrepancies: list = field(default_factory=list)
    partial: bool = False


def new_report(config: dict | None = None) -> CampaignReport:
    return CampaignReport(
        tool={
            "name": "pellrep",
            "version": __version__,
            "gmpy2": gmpy2.version(),
            "mpfr": gmpy2.mpfr_version(),
            "python": platform.python_version(),
        },
        config=config or {},
        generated_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )


# ------------------------------------------------------------- converters

def solution_to_dict(rec: SolutionRecord) -> dict:
    return {
        "k": rec.k,
        "n": rec.n,
        "value": str(rec.value),
        "decompositions": [str(d) for d in rec.decompositions],
        "window_ok": rec.window_ok,
        "provenance": "exhaustive decomposition of the exact term",
    }


def table_to_dict(cmp: TableComparison) -> dict:
    return {
        "rows": [{
            "label": r.label,
            "n": r.n,
            "k_condition": r.k_condition,
            "status": r.status,
            "detail": r.detail,
            "value_typos": list(r.value_typos),
            "mismatched_k": list(r.mismatched_k),
        } for r in cmp.rows],
        "extras": [solution_to_dict(r) for r in cmp.extras],
        "issues": list(cmp.issues),
    }


def small_k_row_to_dict(row: SmallKRow) -> dict:
    return {
        "k": row.k,
        "x0": str(row.x0),
        "l_bound": row.l_bound,
        "l_max": row.l_max,
        "m_bound": row.m_bound,
        "m_max": row.m_max,
        "n_max": row.n_max,
        "l_pair_bounds": list(row.l_pair_bounds),
        "cf_precision": row.cf_precision,
        "worst_l_index": row.worst_l_index,
        "worst_m_index": row.worst_m_index,
        "advances": row.advances,
        "forced_skips": row.forced_skips,
        "failures": list(row.failures),
        "elapsed_s": round(row.elapsed, 3),
        "provenance": "inhomogeneous reduction of both decimal forms "
                      "against the absolute n-bound",
    }


def large_k_to_dict(ledger: LargeKLedger) -> dict:
    return {
        "passes": [{
            "pass": p.index,
            "x0": str(p.x0),
            "x0_sci": p.x0_sci,
            "first_convergent_index": p.first_index,
            "lambda_bound": p.lambda_bound,
            "case1_k": p.case1_k,
            "l_max": p.l_max,
            "case2_k": p.case2_k,
            "k_bound": p.k_bound,
            "gamma3_advances": p.gamma3_advances,
            "gamma4_advances": p.gamma4_advances,
            "forced_skips": p.forced_skips,
            "worst_gamma3_index": p.worst_gamma3_index,
            "worst_gamma4_index": p.worst_gamma4_index,
            "elapsed_s": round(p.elapsed, 3),
            "provenance": "inhomogeneous reduction of both golden-ratio forms",
        } for p in ledger.passes],
        "contradiction": ledger.contradiction,
        "final_k_bound": ledger.final_k_bound,
        "cf_precision": ledger.cf_precision,
        "caveats": list(ledger.caveats),
    }


def chain_constant_to_dict(c: ChainConstant) -> dict:
    return {
        "name": c.name,
        "computed_upper": c.computed,
        "printed": f"{c.printed[0]}e{c.printed[1]}",
        "sig_figs": c.sig_figs,
        "matches_printed": c.matches,
    }


def chain_result_to_dict(r: BoundChainResult) -> dict:
    return {
        "mode": r.mode,
        "k": r.k,
        "l_bound": r.l_bound,
        "m_bound": r.m_bound,
        "n_bound": None if r.n_bound != r.n_bound or r.n_bound == float("inf")
        else r.n_bound,
        "n_bound_log10": r.n_bound_log10,
        "k_bound": r.k_bound,
        "x0": str(r.x0),
        "x0_sci": sci_int(r.x0) if r.x0 else "0",
        "intermediates": dict(r.intermediates),
    }


def bounds_section() -> dict:
    return {
        "chain_constants": [chain_constant_to_dict(c) for c in chain_constants()],
        "notes": [
            "printed constants are reproduced by rounding certified upper "
            "values up at the printed number of significant digits",
            "the m-chain height bound reuses the l-bound inequality for the "
            "composite factor's length term",
            "both decimal forms are evaluated with field degree k",
        ],
    }


def claim_flag_to_dict(f: ClaimFlag) -> dict:
    return {"subject": f.subject, "claimed": f.claimed,
            "computed": f.computed, "severity": f.severity}


# ------------------------------------------------------------------ emit/load

def emit_report(report: CampaignReport, fmt: str, path: str) -> str:
    """Write the report as JSON or CSV; returns the path written."""
    if fmt == "json":
        with open(path, "w") as fh:
            json.dump(report.__dict__, fh, indent=2, allow_nan=False)
            fh.write("\n")
        return path
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["section", "k", "n", "key", "value"])
            w.writerow(["meta", "", "", "schema", report.schema])
            w.writerow(["meta", "", "", "generated_at", report.generated_at])
            for hit in report.search:
                w.writerow(["search", hit["k"], hit["n"], "value", hit["value"]])
                w.writerow(["search", hit["k"], hit["n"], "decompositions",
                            " ".join(hit["decompositions"])])
            for row in report.table.get("rows", []):
                w.writerow(["table", "", row["n"], row["label"], row["status"]])
            for row in report.small_k:
                for key in ("l_bound", "l_max", "m_bound", "m_max", "n_max"):
                    w.writerow(["small-k", row["k"], "", key, row[key]])
            for p in report.large_k.get("passes", []):
                for key in ("x0_sci", "lambda_bound", "case1_k", "l_max",
                            "case2_k", "k_bound"):
                    w.writerow(["large-k", "", "", f"pass{p['pass']}.{key}", p[key]])
            for d in report.discrepancies:
                w.writerow(["discrepancy", "", "", d["subject"], d["computed"]])
        return path
    raise ValueError(f"unsupported format {fmt!r}")


def load_report(path: str) -> CampaignReport:
    with open(path) as fh:
        data = json.load(fh)
    return CampaignReport(**data)
