"""Deterministic report assembly and rendering.

The machine-readable JSON and human-readable text renderings are produced
from one report dictionary, so their numeric content is identical.  Every
rational appears exactly as "p/q" alongside an IEEE-754 double
approximation.  Indices are rendered 1-based to match the usual notation
for supports and active constraint sets.

Reports contain no wall-clock data; repeated runs on the same input are
byte-identical.  Work-unit counters cover the combinatorial scans.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional

from .conditions import (ALL_LABELS, BoundednessReport, MultiplicityReport,
                         build_context, check_mstar, check_necessary,
                         check_boundedness, classify_multiplicity)
from .enumerator import EnumerationResult, enumerate_sparsest
from .families import Bound, SolutionFamily, build_family, sample_and_verify
from .model import ProblemInstance, SolutionRecord
from .linalg import Vec

SCHEMA_VERSION = 1


def rat_json(q: Fraction) -> dict:
    return {"exact": str(q), "float": float(q)}


def vec_json(v: Vec) -> dict:
    return {"exact": [str(q) for q in v], "float": [float(q) for q in v]}


def idx1(indexes) -> list[int]:
    return [i + 1 for i in indexes]


def record_json(rec: SolutionRecord) -> dict:
    return {
        "x": vec_json(rec.x),
        "support": idx1(rec.support),
        "active_set": idx1(rec.active_set),
        "residual_sq": rat_json(rec.residual_sq),
        "strict_interior": rec.strict_interior,
    }


def bound_json(b: Bound) -> dict:
    if b.kind == "rat":
        return {"kind": "rational", **rat_json(b.value)}
    if b.kind == "sqrt":
        return {
            "kind": "sqrt_margin",
            "negate": b.negate,
            "eps": str(b.eps),
            "residual_sq": str(b.rho),
            "coeff": str(b.coeff),
            "m": b.m,
            "float": b.to_float(),
        }
    return {"kind": b.kind}


def interval_json(fam: SolutionFamily) -> dict:
    iv = fam.interval
    return {
        "lower": bound_json(iv.lower),
        "upper": bound_json(iv.upper),
        "lower_open": iv.lower_open,
        "upper_open": iv.upper_open,
        "inner_enclosure": {"lower": rat_json(iv.inner_lower),
                            "upper": rat_json(iv.inner_upper)},
        "note": iv.note,
    }


def family_json(fam: SolutionFamily, samples: list[SolutionRecord]) -> dict:
    i0 = next(i for i in fam.base.support if fam.direction[i] != 0)
    sample_docs = []
    for rec in samples:
        lam = (rec.x[i0] - fam.base.x[i0]) / fam.direction[i0]
        sample_docs.append({"lambda": rat_json(lam), "x": vec_json(rec.x)})
    return {
        "condition": fam.condition_label,
        "direction": vec_json(fam.direction),
        "interval": interval_json(fam),
        "sample_count": len(samples),
        "samples": sample_docs,
        "verified": True,
    }


def multiplicity_json(rep: MultiplicityReport) -> dict:
    out = {}
    for label in ALL_LABELS:
        finding = rep.findings[label]
        entry = {"status": finding.status}
        if finding.directions:
            entry["directions"] = [vec_json(d) for d in finding.directions]
        if finding.note:
            entry["note"] = finding.note
        out[label] = entry
    return out


def boundedness_json(bd: BoundednessReport) -> dict:
    doc = {
        "E1": bd.E1,
        "E2": bd.E2,
        "E3": bd.E3,
        "spark": bd.spark,
        "bounded_certified": bd.bounded_certified,
        "verdict": "bounded" if bd.bounded_certified else "undetermined",
        "subsets_tested": bd.subsets_tested,
    }
    if bd.empirical_gamma is not None:
        doc["empirical_gamma"] = {**rat_json(bd.empirical_gamma), "label": "EMPIRICAL"}
    if bd.e1_failure is not None:
        pi, eta = bd.e1_failure
        doc["E1_failure"] = {"Pi": idx1(pi), "eta": vec_json(eta)}
    return doc


def enumeration_json(res: EnumerationResult) -> dict:
    doc = {
        "kstar": res.kstar,
        "optimal_supports": [idx1(s) for s in res.optimal_supports],
        "witnesses": [record_json(res.witnesses[s]) for s in res.optimal_supports],
        "max_active_cardinality": res.max_active_cardinality,
    }
    if res.max_active_witness is not None:
        doc["max_active_witness"] = record_json(res.max_active_witness)
    if res.empirical_gamma is not None:
        doc["empirical_gamma"] = {**rat_json(res.empirical_gamma), "label": "EMPIRICAL"}
    return doc


def analyze(inst: ProblemInstance, kcap: Optional[int] = None, samples: int = 5,
            max_supports: int = 10 ** 6,
            max_active_subsets: int = 10 ** 6) -> dict:
    """Full pipeline: enumerate, check, classify, build families, boundedness."""
    enum = enumerate_sparsest(inst, kcap=kcap, max_supports=max_supports,
                              max_active_subsets=max_active_subsets)
    analysis = []
    families_emitted = 0
    samples_verified = 0
    for support in enum.optimal_supports:
        rec = enum.witnesses[support]
        ctx = build_context(inst, rec)
        holds, violation = check_necessary(ctx)
        rep = classify_multiplicity(ctx, enum)
        fam_docs = []
        for label in ALL_LABELS:
            finding = rep.findings[label]
            if finding.status != "holds":
                continue
            for d in finding.directions:
                fam = build_family(ctx, label, d)
                recs = sample_and_verify(inst, fam, samples)
                families_emitted += 1
                samples_verified += len(recs)
                fam_docs.append(family_json(fam, recs))
        entry = {
            "point": record_json(rec),
            "necessary_condition": {
                "holds": holds,
                "violation_direction": vec_json(violation) if violation else None,
            },
            "mstar_full_rank": check_mstar(ctx),
            "mstar_nullity": ctx.mstar_nullity,
            "case": rep.case,
            "conditions": multiplicity_json(rep),
            "families": fam_docs,
        }
        analysis.append(entry)

    bd = check_boundedness(inst, enum.kstar, enum.empirical_gamma,
                           max_subsets=max_supports)
    return {
        "schema_version": SCHEMA_VERSION,
        "instance": {
            "m": inst.m, "n": inst.n, "l": inst.l,
            "epsilon": rat_json(inst.epsilon),
        },
        "enumeration": enumeration_json(enum),
        "analysis": analysis,
        "boundedness": boundedness_json(bd),
        "work_units": {
            "supports_tested": enum.supports_tested,
            "active_subsets_tested": enum.active_subsets_tested,
            "boundedness_subsets_tested": bd.subsets_tested,
            "families_emitted": families_emitted,
            "samples_verified": samples_verified,
        },
    }


def _fmt_rat(doc: dict) -> str:
    return f"{doc['exact']} (~{doc['float']!r})"


def _fmt_vec(doc: dict) -> str:
    return "(" + ", ".join(doc["exact"]) + ")"


def _fmt_bound(doc: dict) -> str:
    if doc["kind"] == "rational":
        return _fmt_rat(doc)
    if doc["kind"] == "sqrt_margin":
        sign = "-" if doc["negate"] else ""
        return (f"{sign}({doc['eps']} - sqrt({doc['residual_sq']}))"
                f"/({doc['coeff']}*sqrt({doc['m']})) (~{doc['float']!r})")
    return doc["kind"]


def _fmt_interval(doc: dict) -> str:
    lb = "(" if doc["lower_open"] else "["
    ub = ")" if doc["upper_open"] else "]"
    inner = doc["inner_enclosure"]
    s = f"{lb}{_fmt_bound(doc['lower'])}, {_fmt_bound(doc['upper'])}{ub}"
    s += f"; certified enclosure [{inner['lower']['exact']}, {inner['upper']['exact']}]"
    if doc["note"]:
        s += f"; {doc['note']}"
    return s


def render_text(report: dict) -> str:
    lines = []
    add = lines.append
    inst = report["instance"]
    add("=" * 66)
    add(f"l0mult analysis report (schema {report['schema_version']})")
    add("=" * 66)
    add(f"instance: m={inst['m']} n={inst['n']} l={inst['l']} "
        f"epsilon={_fmt_rat(inst['epsilon'])}")
    enum = report["enumeration"]
    add("")
    add(f"optimal value kstar = {enum['kstar']}")
    add(f"optimal supports ({len(enum['optimal_supports'])}): "
        + " ".join("{" + ",".join(map(str, s)) + "}" for s in enum["optimal_supports"]))
    for rec in enum["witnesses"]:
        add(f"  support {{{','.join(map(str, rec['support']))}}}: "
            f"x = {_fmt_vec(rec['x'])}, active = {{{','.join(map(str, rec['active_set']))}}}, "
            f"residual_sq = {_fmt_rat(rec['residual_sq'])}")
    add(f"max active cardinality over solution set = {enum['max_active_cardinality']}")
    if "max_active_witness" in enum:
        w = enum["max_active_witness"]
        add(f"  achieved by x = {_fmt_vec(w['x'])} with active = "
            f"{{{','.join(map(str, w['active_set']))}}}")
    if "empirical_gamma" in enum:
        add(f"empirical gamma (EMPIRICAL, witnesses only) = "
            f"{_fmt_rat(enum['empirical_gamma'])}")
    for entry in report["analysis"]:
        pt = entry["point"]
        add("")
        add("-" * 66)
        add(f"point x = {_fmt_vec(pt['x'])}  support {{{','.join(map(str, pt['support']))}}}"
            f"  active {{{','.join(map(str, pt['active_set']))}}}"
            f"  strict_interior={pt['strict_interior']}")
        nc = entry["necessary_condition"]
        add(f"  necessary stacked-rank condition: {'holds' if nc['holds'] else 'VIOLATED'}")
        if nc["violation_direction"]:
            add(f"    violation direction {_fmt_vec(nc['violation_direction'])}")
        add(f"  M* full column rank: {entry['mstar_full_rank']} "
            f"(nullity {entry['mstar_nullity']}), structural case {entry['case']}")
        add("  multiplicity conditions:")
        for label in ALL_LABELS:
            cond = entry["conditions"][label]
            line = f"    {label}: {cond['status']}"
            if "directions" in cond:
                line += "  direction " + ", ".join(_fmt_vec(d) for d in cond["directions"])
            if cond.get("note"):
                line += f"  [{cond['note']}]"
            add(line)
        for fam in entry["families"]:
            add(f"  family {fam['condition']}: x + lambda*d, d = {_fmt_vec(fam['direction'])}")
            add(f"    lambda in {_fmt_interval(fam['interval'])}")
            add(f"    verified {fam['sample_count']} sampled members exactly "
                f"(support unchanged)")
    bd = report["boundedness"]
    add("")
    add("-" * 66)
    add(f"boundedness: E1={bd['E1']} E2={bd['E2']} E3={bd['E3']} "
        f"spark={bd['spark']} -> {bd['verdict']}")
    if "E1_failure" in bd:
        f = bd["E1_failure"]
        add(f"  E1 fails at Pi = {{{','.join(map(str, f['Pi']))}}} with eta = "
            f"{_fmt_vec(f['eta'])}")
    if "empirical_gamma" in bd:
        add(f"  empirical gamma (EMPIRICAL) = {_fmt_rat(bd['empirical_gamma'])}")
    wu = report["work_units"]
    add("")
    add("work units: " + " ".join(f"{k}={v}" for k, v in wu.items()))
    return "\n".join(lines) + "\n"


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"
