"""Per-walk decision pipeline and report emission (json, tsv, md)."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

from .curve import SINGULAR, discriminant_x, discriminant_y, is_smooth
from .dynamics import DEFAULT_ORBIT_BOUND, OrbitChain, tau_power
from .exactnum import T, as_quad
from .funcfield import (
    CrossOracleError,
    Divisor,
    b_functions,
    order_at,
    residue,
    telescoper_exists,
)
from .group import DEFAULT_GROUP_BOUND, Finite, group_order
from .points import format_value, parse_point
from .series import check_functional_equation
from .walkcat import StepSet, catalog, find_in_catalog, swap_xy

FINITE = "FiniteGroup_Holonomic"
SINGULAR_OUT = "Singular_OutOfScope"
TYPICAL = "Typical_Hypertranscendental"
EXCEPTIONAL = "Exceptional_TelescoperExists"
UNCLASSIFIED = "Unclassified"
VERDICTS = (FINITE, SINGULAR_OUT, TYPICAL, EXCEPTIONAL, UNCLASSIFIED)

SCHEMA = "qpwalk.report/1"
TSV_COLUMNS = ("label", "grid", "smoothness", "group", "verdict", "certainty", "certificate", "polar_divisor_b2")


@dataclass(frozen=True)
class Options:
    orbit_bound: int = DEFAULT_ORBIT_BOUND
    group_bound: int = DEFAULT_GROUP_BOUND
    series_order: int = 12
    seed: int = 7
    samples: int = 5
    workers: int = 1


@dataclass
class Certificate:
    kind: str
    data: dict = field(default_factory=dict)


@dataclass
class ClassificationReport:
    label: str
    grid: str
    smoothness: str | None
    group: str | None
    verdict: str
    certainty: str
    certificates: list[Certificate] = field(default_factory=list)
    polar_divisor: str | None = None
    orbit_chains: list[str] = field(default_factory=list)
    ores_table: list[dict] = field(default_factory=list)
    residues: list[dict] = field(default_factory=list)
    series_check: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)
    seed: int | None = None
    # live objects for re-verification at emission; never serialized
    _model: StepSet | None = field(default=None, repr=False, compare=False)
    _chains: list = field(default_factory=list, repr=False, compare=False)
    _divisor: Divisor | None = field(default=None, repr=False, compare=False)
    _layout: list = field(default_factory=list, repr=False, compare=False)

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            if f.name.startswith("_"):
                continue
            v = getattr(self, f.name)
            out[f.name] = [asdict(c) for c in v] if f.name == "certificates" else v
        return json.loads(json.dumps(out))

    @classmethod
    def from_dict(cls, data: dict) -> "ClassificationReport":
        data = dict(data)
        data["certificates"] = [Certificate(**c) for c in data.get("certificates", [])]
        return cls(**data)

    def reverify(self) -> None:
        """Recompute every orbit arrow and every pole order of b2."""
        D = self._model
        if D is None:
            return
        for chain in self._chains:
            if not chain.verify(D):
                raise CrossOracleError(f"orbit chain of {self.label} failed re-verification")
        if self._divisor is not None:
            _, b2 = b_functions(D)
            for P, m in self._divisor.terms:
                if order_at(b2, P) != -m:
                    raise CrossOracleError(f"pole order of b2 at {P} failed re-verification")


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------


def _square_criterion(D: StepSet) -> Certificate | None:
    """Fires when the discriminant at infinity, divided by t^2, is a non-square constant."""
    for cond, which, q in (
        (D.d(1, -1) * D.d(1, 1) != 0, "x", lambda: discriminant_x(D)),
        (D.d(-1, 1) * D.d(1, 1) != 0, "y", lambda: discriminant_y(D)),
    ):
        if not cond:
            continue
        value = q().at_infinity() / (T * T)
        if value.is_constant() and value.sqrt() is None:
            return Certificate("ArithmeticCertificate", {
                "discriminant": f"Delta^{which} at [1:0]",
                "value_over_t2": str(value),
                "is_square_in_Q": False,
            })
    return None


def _group_rank(g) -> tuple:
    lo = min(off for _, off, _ in g.members)
    start = min(g.members, key=lambda m: m[1])[0]
    return (-max(P.height() for P, _, _ in g.members), str(start), lo)


def _curve_side(D: StepSet, opts: Options, rep: ClassificationReport) -> None:
    _, b2 = b_functions(D)
    verdict = telescoper_exists(b2, opts.orbit_bound)
    table = verdict.table
    groups = sorted(table.groups, key=_group_rank)

    terms = []
    layout = []
    for g in groups:
        members = sorted(g.members, key=lambda m: m[1])
        terms.extend((P, k) for P, _, k in members)
        lo, hi = members[0][1], members[-1][1]
        start = tau_power(D, g.rep, lo)
        chain = OrbitChain.build(D, start, ["tau"] * (hi - lo))
        rep._chains.append(chain)
        rep.orbit_chains.append(chain.render())
        layout.append(([(P, k) for P, _, k in members], chain))
        rep.ores_table.append({
            "representative": str(g.rep),
            "parameter": g.param,
            "members": [{"point": str(P), "offset": off, "order": k} for P, off, k in members],
            "ores": [format_value(as_quad(c)) for c in g.ores],
            "h_polar_coefficients": [format_value(as_quad(c)) for c in g.h_coeffs],
            "regular": g.regular_by_h(),
        })
    div = Divisor(tuple(terms))
    rep._divisor = div
    rep._layout = layout
    rep.polar_divisor = str(div)

    total = None
    for P, k in div.terms:
        r = residue(b2, P)
        rep.residues.append({"point": str(P), "order": k, "residue": format_value(r)})
        total = r if total is None else total + r
    if total is not None and not total.is_zero():
        raise CrossOracleError(f"residues of b2 do not sum to zero for {D.name}")

    separations = []
    pts = [P for P, _ in table.poles]
    for (i, j), v in sorted(table.relations.items()):
        if not v.related:
            separations.append({"points": [str(pts[i]), str(pts[j])], "kind": v.kind,
                                "certainty": v.certainty, "detail": v.detail})
    if separations:
        rep.certificates.append(Certificate("OrbitSeparation", {"pairs": separations}))

    if verdict.exists:
        rep.verdict = EXCEPTIONAL
        rep.certificates.append(Certificate("RegularOrbitSums", {
            "detail": verdict.detail,
            "h_regular": [g.regular_by_h() for g in groups],
            "ores_vanish": [g.ores_vanish() for g in groups],
        }))
    else:
        rep.verdict = TYPICAL
        kind = "IsolatedPoleWitness" if verdict.reason == "isolated_pole" else "OrbitResidueWitness"
        rep.certificates.append(Certificate(kind, {"pole": str(verdict.witness), "detail": verdict.detail}))
    rep.certainty = "certain" if verdict.certain else f"evidence({opts.orbit_bound})"


def classify(D: StepSet, options: Options | None = None) -> ClassificationReport:
    opts = options or Options()
    known = find_in_catalog(D)
    label = known.label if known is not None else D.name
    rep = ClassificationReport(label, D.grid, None, None, UNCLASSIFIED, "certain",
                               bounds={"orbit": opts.orbit_bound, "group": opts.group_bound,
                                       "series_order": opts.series_order, "group_samples": opts.samples},
                               seed=opts.seed)
    residual = check_functional_equation(D, opts.series_order)
    rep.series_check = {"order": opts.series_order, "nonzero_terms": len(residual), "exact_zero": not residual}
    if residual:
        raise CrossOracleError(f"functional equation residual is nonzero for {label}")

    # verdicts are invariant under x <-> y; compute in catalog orientation
    work = D
    if known is not None and known.label.endswith("↔"):
        work = swap_xy(D)
        rep.certificates.append(Certificate("Orientation", {"computed_on": work.grid}))
    rep._model = work

    try:
        rep.smoothness = is_smooth(work)
    except ValueError as exc:
        rep.certificates.append(Certificate("Excluded", {"reason": str(exc)}))
        return rep
    try:
        g = group_order(work, opts.group_bound, opts.samples, opts.seed)
    except ValueError as exc:
        rep.certificates.append(Certificate("Excluded", {"reason": str(exc)}))
        return rep
    rep.group = str(g)
    if known is None:
        rep.certificates.append(Certificate("NotInCatalog", {}))
        return rep
    if isinstance(g, Finite) != bool(known.finite_group):
        raise CrossOracleError(f"group test disagrees with the catalog for {label}")
    if (rep.smoothness == SINGULAR) != bool(known.singular):
        raise CrossOracleError(f"smoothness test disagrees with the catalog for {label}")

    if rep.smoothness == SINGULAR:
        rep.verdict = SINGULAR_OUT
        return rep
    if isinstance(g, Finite):
        rep.verdict = FINITE
        rep.certificates.append(Certificate("FiniteGroup", {"order": g.order, "confirmed": g.confirmed}))
        return rep
    arith = _square_criterion(work)
    if arith is not None:
        rep.verdict = TYPICAL
        rep.certificates.append(arith)
        return rep
    _curve_side(work, opts, rep)
    return rep


def _classify_one(args):
    D, opts = args
    return classify(D, opts)


def classify_all(options: Options | None = None) -> list[ClassificationReport]:
    """Classify the whole catalog; results come back in catalog order."""
    opts = options or Options()
    jobs = [(D, opts) for D in catalog()]
    if opts.workers > 1:
        with ProcessPoolExecutor(opts.workers) as pool:
            return list(pool.map(_classify_one, jobs))
    return [_classify_one(j) for j in jobs]


def summary(reports) -> dict[str, int]:
    out = {v: 0 for v in VERDICTS}
    for r in reports:
        out[r.verdict] += 1
    return out


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------


def _primary_certificate(r: ClassificationReport) -> str:
    skip = {"OrbitSeparation", "Orientation"}
    for c in r.certificates:
        if c.kind not in skip:
            return c.kind
    return ""


def _emit_json(reports) -> str:
    doc = {"schema": SCHEMA, "summary": summary(reports), "reports": [r.to_dict() for r in reports]}
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def load_reports(text: str) -> list[ClassificationReport]:
    """Parse JSON produced by ``emit_report(..., "json")``."""
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unknown report schema {doc.get('schema')!r}")
    reports = [ClassificationReport.from_dict(r) for r in doc["reports"]]
    for r in reports:
        for row in r.ores_table:
            parse_point(row["representative"])
            for m in row["members"]:
                parse_point(m["point"])
    return reports


def _emit_tsv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, delimiter="\t", lineterminator="\n")
    w.writerow(TSV_COLUMNS)
    for r in reports:
        w.writerow([r.label, r.grid, r.smoothness or "", r.group or "", r.verdict, r.certainty,
                    _primary_certificate(r), r.polar_divisor or ""])
    return buf.getvalue()


def _md_row(cells) -> str:
    return "| " + " | ".join(cells) + " |"


def _orbit_layout_rows(r: ClassificationReport) -> list[str]:
    """Divisor and orbit rows laid out one column per tau-orbit, separated by ≁."""
    layout = r._layout
    ncols = 2 * len(layout) - 1
    rows = [_md_row(["Walk", r.label] + [""] * (ncols - 1)), _md_row(["---"] * (ncols + 1))]

    def grid_rows(title, columns, sep_row):
        height = max(len(c) for c in columns)
        out = []
        for i in range(height):
            cells = [title if i == 0 else ""]
            for k, col in enumerate(columns):
                if k:
                    cells.append("≁" if i == sep_row else "")
                cells.append(col[i] if i < len(col) else "")
            out.append(_md_row(cells))
        return out

    div_cols = []
    for terms, _ in layout:
        col = []
        for n, (P, m) in enumerate(terms):
            body = f"{m}{P}" if m != 1 else str(P)
            col.append(body if n == 0 else "+" + body)
        div_cols.append(col)
    rows += grid_rows("Polar divisor of b₂", div_cols, sep_row=-1)

    chain_cols = []
    for _, chain in layout:
        col = [str(chain.points[0])]
        for P in chain.points[1:]:
            col += ["↓ τ", str(P)]
        chain_cols.append(col)
    rows += grid_rows("τ-orbit of the poles of b₂", chain_cols, sep_row=2 if len(layout) > 1 else -1)
    return rows


def _emit_md(reports) -> str:
    out = []
    for r in reports:
        r.reverify()
        out.append(f"### {r.label} `{r.grid}`")
        out.append("")
        out.append(_md_row(["field", "value"]))
        out.append(_md_row(["---", "---"]))
        out.append(_md_row(["smoothness", r.smoothness or ""]))
        out.append(_md_row(["group", r.group or ""]))
        out.append(_md_row(["verdict", r.verdict]))
        out.append(_md_row(["certainty", r.certainty]))
        out.append(_md_row(["certificate", _primary_certificate(r)]))
        out.append(_md_row(["series check", f"exact through t^{r.series_check.get('order')}"
                            if r.series_check.get("exact_zero") else "FAILED"]))
        out.append("")
        if r._layout:
            out += _orbit_layout_rows(r)
            out.append("")
            out.append(_md_row(["pole", "order", "Res(b₂Ω)"]))
            out.append(_md_row(["---"] * 3))
            for row in r.residues:
                out.append(_md_row([row["point"], str(row["order"]), row["residue"]]))
            out.append("")
    return "\n".join(out)


def emit_report(reports, fmt: str = "json") -> str:
    reports = list(reports)
    if fmt == "json":
        for r in reports:
            r.reverify()
        return _emit_json(reports)
    if fmt == "tsv":
        for r in reports:
            r.reverify()
        return _emit_tsv(reports)
    if fmt == "md":
        return _emit_md(reports)
    raise ValueError(f"unknown report format {fmt!r} (expected json, tsv or md)")
