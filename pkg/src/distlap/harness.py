"""Batch evaluation pipelines, experiment records, and persistence.

Instances stream deterministically from a (family, seed) pair; evaluation
may fan out across a worker pool but records always come back in instance
order, so identical runs produce identical output apart from timing.

Exit-code contract: 0 when every bound holds, 2 when a proved bound fails
(an implementation bug), 3 when only the open two-thirds conjecture is
violated (a finding, reported loudly but not an error).
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .cayley import (
    AbelianGroup,
    Character,
    GroupDistanceVector,
    cayley_graph,
    cayley_spectrum,
    certified_odd_order_constant,
    characters,
    check_cayley_bounds,
    odd_order_constant,
    random_connection_set,
    random_group_metric,
)
from .certify import (
    TrigCertificate,
    balanced_distance_form,
    balanced_vector,
    certificate_identity_residual,
    optimal_certificate,
    quadratic_form_max,
    rearrangement_residual,
    verify_weight_scheme,
)
from .checks import BoundCheck
from .cheeger import (
    CheegerResult,
    check_cheeger_bounds,
    cheeger_constant,
    classify_extremal,
)
from .constants import CAYLEY_FLOOR, GAP_FLOOR
from .generators import (
    barbell_graph,
    complete_bipartite_plus,
    complete_graph,
    cycle_graph,
    path_graph,
    random_connected_graph,
    random_metric_rows,
)
from .graphs import Graph, bfs_apsp, transmission, validate_metric
from .spectral import (
    classical_normalized_laplacian,
    check_spectrum_bounds,
    normalized_distance_laplacian,
    spectral_gap,
    symmetric_eigensystem,
)

RNG_NAME = "philox4x64"

EXIT_OK = 0
EXIT_PROVED_VIOLATION = 2
EXIT_CONJECTURE_FINDING = 3

FAMILY_KINDS = (
    "path",
    "cycle",
    "complete",
    "complete_bipartite_plus",
    "barbell",
    "random_connected",
    "random_cayley",
    "random_metric",
)


def instance_rng(seed: int, index: int) -> np.random.Generator:
    """Counter-based generator keyed by (seed, instance index)."""
    key = np.array([seed % (1 << 64), index % (1 << 64)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class FamilySpec:
    """Deterministic description of an instance family.

    ``sizes`` drives the parametric families (path, cycle, complete,
    barbell); ``count`` drives the random ones. Same spec and seed always
    produce the identical instance sequence.
    """

    kind: str
    seed: int = 0
    count: int = 1
    sizes: tuple[int, ...] = ()
    n: int | None = None
    p: float | None = None
    a: int | None = None
    b: int | None = None
    extra: int = 0
    path_len: int | None = None
    group: str | None = None
    set_size: int | None = None

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")

    def family_id(self) -> str:
        params = {}
        for name in ("sizes", "n", "p", "a", "b", "extra", "path_len", "group", "set_size"):
            val = getattr(self, name)
            if val in (None, (), 0) and not (name == "extra" and val != 0):
                continue
            params[name] = list(val) if isinstance(val, tuple) else val
        return self.kind + json.dumps(params, sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class Instance:
    """One evaluated unit: a graph, a raw metric, or a group metric profile."""

    index: int
    instance_id: str
    graph: Graph | None = None
    metric_rows: tuple[tuple[float, ...], ...] | None = None
    group: AbelianGroup | None = None
    dvector: GroupDistanceVector | None = None
    is_cayley: bool = False


def _sizes(spec: FamilySpec) -> tuple[int, ...]:
    if spec.sizes:
        return spec.sizes
    if spec.n is not None:
        return (spec.n,)
    raise ValueError(f"family {spec.kind!r} needs sizes or n")


def generate(spec: FamilySpec) -> list[Instance]:
    """Materialize the deterministic instance stream for a family spec."""
    out: list[Instance] = []
    kind = spec.kind
    if kind == "path":
        for idx, n in enumerate(_sizes(spec)):
            out.append(Instance(idx, f"path-n{n}", graph=path_graph(n)))
    elif kind == "cycle":
        for idx, n in enumerate(_sizes(spec)):
            out.append(
                Instance(
                    idx,
                    f"cycle-n{n}",
                    graph=cycle_graph(n),
                    group=AbelianGroup((n,)),
                    is_cayley=True,
                )
            )
    elif kind == "complete":
        for idx, n in enumerate(_sizes(spec)):
            out.append(
                Instance(
                    idx,
                    f"complete-n{n}",
                    graph=complete_graph(n),
                    group=AbelianGroup((n,)) if n >= 2 else None,
                    is_cayley=n >= 2,
                )
            )
    elif kind == "complete_bipartite_plus":
        if spec.a is None or spec.b is None:
            raise ValueError("complete_bipartite_plus needs a and b")
        g = complete_bipartite_plus(spec.a, spec.b, spec.extra)
        out.append(
            Instance(0, f"kbip-{spec.a}x{spec.b}+{spec.extra}", graph=g)
        )
    elif kind == "barbell":
        for idx, k in enumerate(_sizes(spec)):
            plen = spec.path_len if spec.path_len is not None else k
            out.append(
                Instance(idx, f"barbell-k{k}-p{plen}", graph=barbell_graph(k, plen))
            )
    elif kind == "random_connected":
        if spec.n is None or spec.p is None:
            raise ValueError("random_connected needs n and p")
        for idx in range(spec.count):
            rng = instance_rng(spec.seed, idx)
            g = random_connected_graph(spec.n, spec.p, rng)
            out.append(
                Instance(idx, f"random_connected-n{spec.n}-p{spec.p}-i{idx}", graph=g)
            )
    elif kind == "random_cayley":
        if spec.group is None:
            raise ValueError("random_cayley needs a group label")
        grp = AbelianGroup.parse(spec.group)
        pairs = spec.set_size if spec.set_size is not None else 2
        for idx in range(spec.count):
            rng = instance_rng(spec.seed, idx)
            conn = random_connection_set(grp, rng, pairs=pairs)
            g = cayley_graph(grp, conn)
            out.append(
                Instance(
                    idx,
                    f"random_cayley-{grp.label()}-i{idx}",
                    graph=g,
                    group=grp,
                    is_cayley=True,
                )
            )
    elif kind == "random_metric":
        if spec.n is None:
            raise ValueError("random_metric needs n")
        for idx in range(spec.count):
            rng = instance_rng(spec.seed, idx)
            rows = random_metric_rows(spec.n, rng)
            out.append(
                Instance(
                    idx,
                    f"random_metric-n{spec.n}-i{idx}",
                    metric_rows=tuple(tuple(row) for row in rows),
                )
            )
    return out


@dataclass
class Record:
    """Per-instance results; everything but timing_ms is deterministic."""

    key: str
    family: str
    instance: str
    index: int
    n: int
    gap: float
    classical_gap: float | None
    h_num: int | None
    h_den: int | None
    h_approx: float | None
    ties: int | None
    classification: str | None
    margins: dict[str, float]
    violations: list[str]
    findings: list[str]
    timing_ms: float

    def to_dict(self) -> dict:
        h = None
        if self.h_approx is not None:
            h = {"num": self.h_num, "den": self.h_den, "approx": self.h_approx}
        return {
            "key": self.key,
            "family": self.family,
            "instance": self.instance,
            "index": self.index,
            "n": self.n,
            "gap": self.gap,
            "classical_gap": self.classical_gap,
            "h": h,
            "ties": self.ties,
            "classification": self.classification,
            "margins": self.margins,
            "violations": self.violations,
            "findings": self.findings,
            "timing_ms": self.timing_ms,
        }


def evaluate_instance(
    inst: Instance,
    spec: FamilySpec,
    cheeger_cap: int = 24,
    tol: float = 1e-9,
    solver_tol: float = 1e-12,
    contrast: bool = False,
) -> Record:
    """Run every applicable check on one instance and collect the margins."""
    start = time.perf_counter()
    margins: dict[str, float] = {}
    violations: list[str] = []
    findings: list[str] = []
    classical_gap = None
    h_num = h_den = None
    h_approx = None
    ties = None
    classification = None

    def absorb(checks: Iterable[BoundCheck]) -> None:
        for chk in checks:
            margins[chk.name] = chk.margin
            if not chk.passed:
                violations.append(chk.name)

    if inst.graph is not None:
        g = inst.graph
        n = g.n
        d = bfs_apsp(g)
        t = transmission(d)
        spectrum = symmetric_eigensystem(normalized_distance_laplacian(d), solver_tol)
        gap = spectral_gap(spectrum)
        absorb(check_spectrum_bounds(spectrum, n, tol))
        if 2 <= n <= cheeger_cap:
            result = cheeger_constant(d, t, max_n=cheeger_cap)
            report = check_cheeger_bounds(result, gap, n, tol)
            absorb(report.checks)
            h = result.h
            if isinstance(h, Fraction):
                h_num, h_den = h.numerator, h.denominator
            h_approx = float(h)
            ties = result.ties
            cls = classify_extremal(g)
            classification = cls.kind
            # the structural classifier and exact equality must agree
            if cls.is_extremal != report.equality:
                violations.append("equality_classifier_mismatch")
        if inst.is_cayley and inst.group is not None:
            absorb(check_cayley_bounds(spectrum, inst.group, tol))
        else:
            margins["conjecture_two_thirds"] = gap - CAYLEY_FLOOR
            if gap < CAYLEY_FLOOR - tol:
                findings.append("conjecture_two_thirds")
        if contrast:
            classical = symmetric_eigensystem(
                classical_normalized_laplacian(g), solver_tol
            )
            classical_gap = spectral_gap(classical)
    elif inst.dvector is not None and inst.group is not None:
        n = inst.group.order
        spectrum = cayley_spectrum(inst.group, inst.dvector)
        gap = spectral_gap(spectrum)
        absorb(check_spectrum_bounds(spectrum, n, tol))
        absorb(check_cayley_bounds(spectrum, inst.group, tol))
    else:
        space = validate_metric(inst.metric_rows)
        n = space.n
        d = space.distances
        spectrum = symmetric_eigensystem(normalized_distance_laplacian(d), solver_tol)
        gap = spectral_gap(spectrum)
        absorb(check_spectrum_bounds(spectrum, n, tol))

    elapsed_ms = (time.perf_counter() - start) * 1000.0
    return Record(
        key=f"{spec.family_id()}|{spec.seed}|{inst.index}",
        family=spec.kind,
        instance=inst.instance_id,
        index=inst.index,
        n=n,
        gap=gap,
        classical_gap=classical_gap,
        h_num=h_num,
        h_den=h_den,
        h_approx=h_approx,
        ties=ties,
        classification=classification,
        margins=margins,
        violations=violations,
        findings=findings,
        timing_ms=elapsed_ms,
    )


@dataclass
class BatchResult:
    records: list[Record]
    summary: dict

    @property
    def exit_code(self) -> int:
        return self.summary["exit_code"]


def run_batch(
    spec: FamilySpec,
    cheeger_cap: int = 24,
    tol: float = 1e-9,
    workers: int | None = None,
    contrast: bool | None = None,
) -> BatchResult:
    """Evaluate a family and summarize extremal records and violations."""
    instances = generate(spec)
    if contrast is None:
        contrast = spec.kind == "barbell"

    def work(inst: Instance) -> Record:
        return evaluate_instance(
            inst, spec, cheeger_cap=cheeger_cap, tol=tol, contrast=contrast
        )

    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(work, instances))
    else:
        records = [work(inst) for inst in instances]

    summary = summarize(spec, records)
    return BatchResult(records, summary)


def summarize(spec: FamilySpec, records: list[Record]) -> dict:
    min_gap = None
    argmin_gap = None
    min_h: Fraction | float | None = None
    argmin_h = None
    violations = []
    findings = []
    for rec in records:
        if min_gap is None or rec.gap < min_gap:
            min_gap = rec.gap
            argmin_gap = rec.instance
        if rec.h_approx is not None:
            h: Fraction | float
            h = Fraction(rec.h_num, rec.h_den) if rec.h_num is not None else rec.h_approx
            if min_h is None or h < min_h:
                min_h = h
                argmin_h = rec.instance
        violations.extend({"instance": rec.instance, "check": name} for name in rec.violations)
        findings.extend({"instance": rec.instance, "check": name} for name in rec.findings)
    if isinstance(min_h, Fraction):
        min_h_json = {
            "num": min_h.numerator,
            "den": min_h.denominator,
            "approx": float(min_h),
        }
    elif min_h is not None:
        min_h_json = {"num": None, "den": None, "approx": float(min_h)}
    else:
        min_h_json = None
    summary = {
        "family": spec.kind,
        "family_id": spec.family_id(),
        "seed": spec.seed,
        "rng": RNG_NAME,
        "instances": len(records),
        "min_gap": min_gap,
        "argmin_gap": argmin_gap,
        "min_h": min_h_json,
        "argmin_h": argmin_h,
        "violations": violations,
        "findings": findings,
        "exit_code": (
            EXIT_PROVED_VIOLATION
            if violations
            else (EXIT_CONJECTURE_FINDING if findings else EXIT_OK)
        ),
    }
    contrast_rows = [
        [rec.instance, rec.classical_gap, rec.gap]
        for rec in records
        if rec.classical_gap is not None
    ]
    if contrast_rows:
        summary["contrast"] = contrast_rows
    return summary


def record_sink(records: Iterable[dict], path: str) -> tuple[int, int]:
    """Append records as JSONL, skipping keys that are already present.

    Each record goes out as a single sorted-key JSON line in one write, so
    re-runs of the same (spec, seed) are idempotent and a reader never sees
    a partial line. Returns (written, skipped).
    """
    existing: set[str] = set()
    if os.path.exists(path):
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    existing.add(json.loads(line)["key"])
    written = skipped = 0
    with open(path, "a", encoding="utf-8", buffering=1) as fh:
        for rec in records:
            if rec["key"] in existing:
                skipped += 1
                continue
            fh.write(json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n")
            existing.add(rec["key"])
            written += 1
    return written, skipped


def write_summary(summary: dict, path: str) -> None:
    """Atomic summary write (temp file then rename)."""
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, sort_keys=True, indent=2)
        fh.write("\n")
    os.replace(tmp, path)


_DVECTOR_GROUP_POOL = (
    (3,), (4,), (5,), (6,), (7,), (8,), (9,), (12,),
    (2, 2), (2, 3), (2, 4), (3, 3), (2, 2, 2), (3, 5),
)


def run_certification(
    seed: int = 0,
    metric_trials: int = 200,
    max_n: int = 10,
    dvector_trials: int = 200,
    angle_trials: int = 20,
    cyclic_max: int = 12,
) -> dict:
    """Exercise every certificate check on random instances; report margins."""
    checks: dict[str, dict] = {}

    def add(name: str, worst: float, tolerance: float, count: int, passed: bool) -> None:
        checks[name] = {
            "worst": worst,
            "tolerance": tolerance,
            "count": count,
            "passed": bool(passed),
        }

    # the constant has to survive its dual computation before anything uses it
    c_bisect = odd_order_constant()
    c_form = quadratic_form_max()
    certified_odd_order_constant()
    dev = abs(c_bisect - c_form)
    quartic_val = abs((((4 * c_bisect - 4) * c_bisect - 31) * c_bisect - 20) * c_bisect + 4)
    floor = 1.0 - 1.0 / c_bisect
    add(
        "constant_crosscheck",
        max(dev, quartic_val),
        1e-8,
        2,
        dev <= 1e-10 and quartic_val <= 1e-8 and 0.718 < floor < 0.719,
    )
    a, b, value = optimal_certificate()
    add("certificate_normalized", abs(a * a + b * b - 1.0), 1e-12, 1,
        abs(a * a + b * b - 1.0) <= 1e-12 and abs(value - c_bisect) <= 1e-10)

    worst_form = math.inf
    worst_pair = math.inf
    worst_sym = 0.0
    worst_row = 0.0
    worst_rearr = 0.0
    scheme_ok = True
    for i in range(metric_trials):
        rng = instance_rng(seed, i)
        n = int(rng.integers(3, max_n + 1))
        space = validate_metric(random_metric_rows(n, rng))
        d = space.distances
        t = transmission(d)
        y = balanced_vector(n, rng)
        worst_form = min(worst_form, balanced_distance_form(d, y, balance_tol=1e-9))
        report = verify_weight_scheme(d, y)
        worst_pair = min(worst_pair, report.pair_floor)
        worst_sym = max(worst_sym, report.symmetry_error)
        worst_row = max(worst_row, report.row_sum_error)
        scheme_ok = scheme_ok and report.ok
        worst_rearr = max(worst_rearr, rearrangement_residual(d, t, y))
    add("balanced_form_floor", worst_form, 1e-9, metric_trials, worst_form >= -1e-9)
    add("weight_scheme_pair_floor", worst_pair, 1e-10, metric_trials,
        scheme_ok and worst_pair >= -1e-10)
    add("weight_scheme_row_sums", worst_row, 1e-10, metric_trials, worst_row <= 1e-10)
    add("weight_scheme_symmetry", worst_sym, 1e-10, metric_trials, worst_sym <= 1e-10)
    add("rearrangement_identity", worst_rearr, 1e-9, metric_trials, worst_rearr <= 1e-9)

    cert = TrigCertificate(a, b)
    worst_trig = 0.0
    trig_count = 0
    for n in range(3, cyclic_max + 1):
        grp = AbelianGroup((n,))
        rng = instance_rng(seed, 10_000 + n)
        phis = rng.uniform(0.0, 2.0 * math.pi, size=angle_trials)
        for chi in characters(grp):
            if chi.is_trivial or chi.is_real:
                continue
            for phi in phis:
                worst_trig = max(
                    worst_trig, certificate_identity_residual(cert, chi, float(phi))
                )
                trig_count += 1
    add("trig_identity", worst_trig, 1e-10, trig_count, worst_trig <= 1e-10)

    worst_real = math.inf
    worst_complex = math.inf
    real_count = complex_count = 0
    witness_ok = True
    from .cayley import complex_character_margin, real_character_margin

    for i in range(dvector_trials):
        rng = instance_rng(seed, 20_000 + i)
        grp = AbelianGroup(_DVECTOR_GROUP_POOL[i % len(_DVECTOR_GROUP_POOL)])
        dvec = random_group_metric(grp, rng)
        for chi in characters(grp):
            if chi.is_trivial:
                continue
            if chi.is_real:
                margin, witness = real_character_margin(grp, dvec, chi)
                worst_real = min(worst_real, margin)
                real_count += 1
                witness_ok = witness_ok and witness.chain_holds
            else:
                worst_complex = min(worst_complex, complex_character_margin(grp, dvec, chi))
                complex_count += 1
    add("real_character_margin", worst_real, 1e-9, real_count,
        witness_ok and worst_real >= -1e-9)
    add("complex_character_margin", worst_complex, 1e-9, complex_count,
        worst_complex >= -1e-9)

    return {
        "seed": seed,
        "rng": RNG_NAME,
        "trials": {
            "metric": metric_trials,
            "dvector": dvector_trials,
            "angles": angle_trials,
            "cyclic_max": cyclic_max,
        },
        "checks": checks,
        "ok": all(c["passed"] for c in checks.values()),
    }
