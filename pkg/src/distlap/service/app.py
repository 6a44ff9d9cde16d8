"""FastAPI service wrapping the core pipelines.

Domain errors (bad input, disconnected graphs, metric violations) surface
as HTTP 400 with the library's message; pydantic handles shape errors as
422 before we ever see them.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import __version__
from ..cayley import (
    AbelianGroup,
    cayley_graph,
    cayley_spectrum,
    check_cayley_bounds,
    distance_vector_from_graph,
    GroupDistanceVector,
)
from ..certify import balanced_vector, rearrangement_residual, verify_weight_scheme, balanced_distance_form
from ..cheeger import (
    EnumerationCapError,
    check_cheeger_bounds,
    cheeger_constant,
    classify_extremal,
)
from ..graphs import (
    DistanceMatrix,
    Graph,
    bfs_apsp,
    parse_edge_list,
    parse_graph6,
    parse_metric_csv,
    transmission,
    validate_metric,
)
from ..harness import (
    EXIT_OK,
    EXIT_PROVED_VIOLATION,
    FamilySpec,
    instance_rng,
    run_batch,
    run_certification,
)
from ..spectral import (
    check_spectrum_bounds,
    normalized_distance_laplacian,
    spectral_gap,
    symmetric_eigensystem,
)
from .schemas import (
    CayleyRequest,
    CayleyResponse,
    CertificateSpotOut,
    CertifyRequest,
    CertifyResponse,
    CheckOut,
    CheegerRequest,
    CheegerResponse,
    ClassificationOut,
    CutOut,
    GraphIn,
    MetricIn,
    RationalOut,
    ScanRequest,
    ScanResponse,
    SpectrumRequest,
    SpectrumResponse,
    VerifyAllRequest,
    VerifyAllResponse,
)


def _graph_from(model: GraphIn) -> Graph:
    if model.edges is not None:
        n = model.n if model.n is not None else (max(max(e) for e in model.edges) + 1 if model.edges else 0)
        return Graph.from_edges(n, model.edges)
    if model.edge_text is not None:
        return parse_edge_list(model.edge_text)
    return parse_graph6(model.graph6)


def _metric_from(model: MetricIn) -> DistanceMatrix:
    rows = model.matrix if model.matrix is not None else parse_metric_csv(model.csv_text)
    return validate_metric(rows).distances


def _checks_out(checks) -> list[CheckOut]:
    return [CheckOut(**chk.to_json()) for chk in checks]


def _rational(h) -> RationalOut:
    if isinstance(h, Fraction):
        return RationalOut(num=h.numerator, den=h.denominator, approx=float(h))
    return RationalOut(num=None, den=None, approx=float(h))


def _exit_code(checks) -> int:
    return EXIT_OK if all(chk.passed for chk in checks) else EXIT_PROVED_VIOLATION


def create_app() -> FastAPI:
    app = FastAPI(
        title="distlap",
        version=__version__,
        description=(
            "Normalized distance Laplacian spectra, distance Cheeger constants, "
            "and bound verification for graphs and finite metric spaces."
        ),
    )

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/spectrum", response_model=SpectrumResponse)
    def spectrum(req: SpectrumRequest) -> SpectrumResponse:
        try:
            if req.graph is not None:
                d = bfs_apsp(_graph_from(req.graph))
            else:
                d = _metric_from(req.metric)
            lap = normalized_distance_laplacian(d)
            spec = symmetric_eigensystem(lap)
            checks = check_spectrum_bounds(spec, d.n, req.tolerance)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return SpectrumResponse(
            n=d.n,
            eigenvalues=list(spec.eigenvalues),
            spectral_gap=spectral_gap(spec),
            residual=spec.residual,
            tolerance=req.tolerance,
            checks=_checks_out(checks),
        )

    @app.post("/cheeger", response_model=CheegerResponse)
    def cheeger(req: CheegerRequest) -> CheegerResponse:
        try:
            g = _graph_from(req.graph)
            d = bfs_apsp(g)
            t = transmission(d)
            result = cheeger_constant(d, t, max_n=req.max_n)
            spec = symmetric_eigensystem(normalized_distance_laplacian(d))
            gap = spectral_gap(spec)
            report = check_cheeger_bounds(result, gap, g.n, req.tolerance)
        except EnumerationCapError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        cut = result.cut
        return CheegerResponse(
            n=g.n,
            h=_rational(result.h),
            cut=CutOut(
                vertices=cut.vertices(g.n),
                cross=float(cut.cross),
                vol_s=float(cut.vol_s),
                vol_comp=float(cut.vol_comp),
            ),
            ties=result.ties,
            spectral_gap=gap,
            tolerance=req.tolerance,
            checks=_checks_out(report.checks),
            equality=report.equality,
        )

    @app.post("/verify-all", response_model=VerifyAllResponse)
    def verify_all(req: VerifyAllRequest) -> VerifyAllResponse:
        try:
            g = _graph_from(req.graph)
            d = bfs_apsp(g)
            t = transmission(d)
            spec = symmetric_eigensystem(normalized_distance_laplacian(d))
            gap = spectral_gap(spec)
            checks = list(check_spectrum_bounds(spec, g.n, req.tolerance))
            h_out = ties = cut_out = None
            equality = None
            classification = None
            if not req.skip_cheeger:
                if g.n > req.cheeger_cap:
                    raise EnumerationCapError(
                        f"n={g.n} exceeds the Cheeger cap {req.cheeger_cap}; "
                        "pass skip_cheeger=true (CLI: --skip-cheeger)"
                    )
                result = cheeger_constant(d, t, max_n=req.cheeger_cap)
                report = check_cheeger_bounds(result, gap, g.n, req.tolerance)
                checks.extend(report.checks)
                h_out = _rational(result.h)
                ties = result.ties
                cut_out = CutOut(
                    vertices=result.cut.vertices(g.n),
                    cross=float(result.cut.cross),
                    vol_s=float(result.cut.vol_s),
                    vol_comp=float(result.cut.vol_comp),
                )
                equality = report.equality
                cls = classify_extremal(g)
                classification = ClassificationOut(
                    kind=cls.kind,
                    small_part=list(cls.small_part) if cls.small_part else None,
                    large_part=list(cls.large_part) if cls.large_part else None,
                    edges_in_large=cls.edges_in_large,
                    edge_cap=cls.edge_cap,
                    edge_cap_variant=cls.edge_cap_variant,
                    match=cls.match,
                )
            certificate = None
            if req.certificate_trials > 0:
                rng = instance_rng(req.seed, 0)
                form_min = float("inf")
                pair_floor = float("inf")
                rearr_max = 0.0
                scheme_ok = True
                for _ in range(req.certificate_trials):
                    y = balanced_vector(g.n, rng)
                    form_min = min(form_min, balanced_distance_form(d, y, balance_tol=1e-9))
                    rep = verify_weight_scheme(d, y)
                    pair_floor = min(pair_floor, rep.pair_floor)
                    scheme_ok = scheme_ok and rep.ok
                    rearr_max = max(rearr_max, rearrangement_residual(d, t, y))
                certificate = CertificateSpotOut(
                    trials=req.certificate_trials,
                    seed=req.seed,
                    balanced_form_min=form_min,
                    weight_scheme_ok=scheme_ok,
                    weight_pair_floor=pair_floor,
                    rearrangement_residual_max=rearr_max,
                )
        except EnumerationCapError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return VerifyAllResponse(
            n=g.n,
            spectral_gap=gap,
            h=h_out,
            ties=ties,
            cut=cut_out,
            equality=equality,
            classification=classification,
            checks=_checks_out(checks),
            certificate=certificate,
            tolerance=req.tolerance,
            exit_code=_exit_code(checks),
        )

    @app.post("/cayley", response_model=CayleyResponse)
    def cayley(req: CayleyRequest) -> CayleyResponse:
        try:
            group = AbelianGroup.parse(req.group)
            if req.connection is not None:
                g = cayley_graph(group, [tuple(el) for el in req.connection])
                dvec = distance_vector_from_graph(group, g)
            else:
                vals = tuple(
                    int(x) if float(x).is_integer() else float(x) for x in req.dvector
                )
                dvec = GroupDistanceVector(group, vals)
            spec = cayley_spectrum(group, dvec)
            checks = check_cayley_bounds(spec, group, req.tolerance)
            dense_dev = None
            if req.crosscheck_dense and req.connection is not None:
                d = bfs_apsp(cayley_graph(group, [tuple(el) for el in req.connection]))
                dense = symmetric_eigensystem(normalized_distance_laplacian(d))
                dense_dev = float(
                    np.max(np.abs(np.array(dense.eigenvalues) - np.array(spec.eigenvalues)))
                )
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return CayleyResponse(
            group=group.label(),
            order=group.order,
            odd_order=group.order % 2 == 1,
            eigenvalues=list(spec.eigenvalues),
            spectral_gap=spectral_gap(spec),
            residual=spec.residual,
            tolerance=req.tolerance,
            checks=_checks_out(checks),
            dense_max_deviation=dense_dev,
            exit_code=_exit_code(checks),
        )

    @app.post("/certify", response_model=CertifyResponse)
    def certify(req: CertifyRequest) -> CertifyResponse:
        report = run_certification(
            seed=req.seed,
            metric_trials=req.metric_trials,
            max_n=req.max_n,
            dvector_trials=req.dvector_trials,
            angle_trials=req.angle_trials,
            cyclic_max=req.cyclic_max,
        )
        return CertifyResponse(**report)

    @app.post("/scan", response_model=ScanResponse)
    def scan(req: ScanRequest) -> ScanResponse:
        try:
            sizes: tuple[int, ...] = ()
            n_single = None
            raw = req.n if req.n is not None else req.k
            if raw is not None:
                if ".." in raw:
                    lo, hi = raw.split("..", 1)
                    sizes = tuple(range(int(lo), int(hi) + 1))
                else:
                    n_single = int(raw)
                    if req.family in ("path", "cycle", "complete", "barbell"):
                        sizes = (n_single,)
                        n_single = None
            spec = FamilySpec(
                kind=req.family,
                seed=req.seed,
                count=req.count,
                sizes=sizes,
                n=n_single,
                p=req.p,
                a=req.a,
                b=req.b,
                extra=req.extra,
                path_len=req.path_len,
                group=req.group,
                set_size=req.set_size,
            )
            batch = run_batch(
                spec,
                cheeger_cap=req.cheeger_cap,
                tol=req.tolerance,
                workers=req.workers,
                contrast=req.contrast,
            )
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return ScanResponse(
            records=[rec.to_dict() for rec in batch.records],
            summary=batch.summary,
            exit_code=batch.exit_code,
        )

    return app


app = create_app()
