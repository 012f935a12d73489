"""Deterministic json/csv/md rendering of analysis results.

Every number is formatted once (``_num``) and the same text feeds all three
output formats, so the renderings of one run always agree.
"""

from __future__ import annotations

import csv
import io
import json

FORMATS = ("json", "csv", "md")


def _num(x, places: int = 6) -> str:
    if isinstance(x, int):
        return str(x)
    return f"{x:.{places}f}"


def _json_num(text: str):
    return int(text) if text.lstrip("-").isdigit() else float(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _md(header, rows) -> str:
    lines = ["| " + " | ".join(header) + " |",
             "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(str(c) for c in row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# --- analyze ---------------------------------------------------------------

def _summary_pairs(report):
    reduction = 100.0 * (report.total_count - report.effective_count) / report.total_count
    return [
        ("total_count", _num(report.total_count)),
        ("total_bytes", _num(report.total_bytes)),
        ("bytes_per_instruction", _num(report.bytes_per_instruction)),
        ("effective_count", _num(report.effective_count)),
        ("macro_op_ratio", _num(report.macro_op_ratio)),
        ("reduction_pct", _num(reduction)),
    ]


def _compare_rows(ratios, geomeans, benchmarks, isas):
    rows = []
    for b in benchmarks:
        rows.append([b] + [_num(ratios[b, i], 2) if (b, i) in ratios else "" for i in isas])
    rows.append(["geomean"] + [_num(geomeans[i], 2) if i in geomeans else "" for i in isas])
    return rows


def render_analyze(report, fmt: str, benchmarks=(), isas=()) -> str:
    summary = _summary_pairs(report)
    idioms = [(name, _num(s["matches"]), _num(s["weighted"]), _num(s["reduction_pct"]))
              for name, s in report.per_idiom.items()]
    compare = None
    if report.ratios is not None:
        compare = _compare_rows(report.ratios, report.geomeans, benchmarks, isas)

    if fmt == "json":
        obj = {k: _json_num(v) for k, v in summary}
        obj["idioms"] = [{"idiom": n, "matches": _json_num(m), "weighted": _json_num(w),
                          "reduction_pct": _json_num(r)} for n, m, w, r in idioms]
        if compare is not None:
            obj["comparison"] = _compare_json(compare, isas, report.baseline)
        return _dump(obj)
    if fmt == "csv":
        rows = [(k, "", v) for k, v in summary]
        for n, m, w, r in idioms:
            rows += [("matches", n, m), ("weighted", n, w), ("reduction_pct", n, r)]
        if compare is not None:
            for row in compare:
                rows += [("ratio" if row[0] != "geomean" else "geomean",
                          f"{row[0]}:{isa}" if row[0] != "geomean" else isa, v)
                         for isa, v in zip(isas, row[1:]) if v]
        return _csv(("metric", "key", "value"), rows)
    if fmt == "md":
        out = "## Summary\n\n" + _md(("metric", "value"), summary)
        out += "\n## Fusion idioms\n\n" + _md(
            ("idiom", "matches", "weighted", "reduction_pct"), idioms)
        if compare is not None:
            out += f"\n## Normalized to {report.baseline}\n\n" + _md(["benchmark", *isas], compare)
        return out
    raise ValueError(f"unknown output format: {fmt!r}")


def _compare_json(rows, isas, baseline):
    body = [{"benchmark": row[0],
             "ratios": {isa: _json_num(v) for isa, v in zip(isas, row[1:]) if v}}
            for row in rows[:-1]]
    geo = {isa: _json_num(v) for isa, v in zip(isas, rows[-1][1:]) if v}
    return {"baseline": baseline, "isas": list(isas), "rows": body, "geomean": geo}


# --- compare ---------------------------------------------------------------

def render_compare(ratios, geomeans, benchmarks, isas, baseline, fmt: str) -> str:
    rows = _compare_rows(ratios, geomeans, benchmarks, isas)
    if fmt == "json":
        return _dump(_compare_json(rows, isas, baseline))
    if fmt == "csv":
        return _csv(["benchmark", *isas], rows)
    if fmt == "md":
        return _md(["benchmark", *isas], rows)
    raise ValueError(f"unknown output format: {fmt!r}")


# --- near misses -----------------------------------------------------------

NEARMISS_HEADER = ("pc", "idiom", "blocking_register", "suggested_rename", "weight",
                   "reduction_pct", "first", "second")


def render_nearmiss(records, total_weight: int, recoverable_pct: float, fmt: str) -> str:
    """``records`` are dicts with the NEARMISS_HEADER keys (numbers unformatted)."""
    rows = [(r["pc"], r["idiom"], r["blocking_register"], r["suggested_rename"],
             _num(r["weight"]), _num(r["reduction_pct"]), r["first"], r["second"])
            for r in records]
    summary = ("total", "", "", "", _num(total_weight), _num(recoverable_pct), "", "")
    if fmt == "json":
        return _dump({
            "near_misses": [
                {k: (_json_num(v) if k in ("weight", "reduction_pct") else v)
                 for k, v in zip(NEARMISS_HEADER, row)} for row in rows],
            "recoverable_weight": total_weight,
            "recoverable_reduction_pct": _json_num(summary[5]),
        })
    if fmt == "csv":
        return _csv(NEARMISS_HEADER, rows + [summary])
    if fmt == "md":
        return _md(NEARMISS_HEADER, rows + [summary])
    raise ValueError(f"unknown output format: {fmt!r}")


# --- cdf -------------------------------------------------------------------

def render_cdf(points, fmt: str) -> str:
    rows = [(_num(rank), _num(frac)) for rank, frac in points]
    if fmt == "json":
        return _dump([{"rank": _json_num(r), "cumulative_fraction": _json_num(f)}
                      for r, f in rows])
    if fmt == "csv":
        return _csv(("rank", "cumulative_fraction"), rows)
    if fmt == "md":
        return _md(("rank", "cumulative_fraction"), rows)
    raise ValueError(f"unknown output format: {fmt!r}")
