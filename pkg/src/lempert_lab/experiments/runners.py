"""The four experiments. Each returns an :class:`ExperimentReport`.

Runners never abort on a single sample: failures are recorded in the report
and the verdicts are computed from the remaining rows.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from ..conformal.maps import build_riemann_map, example4_domain
from ..discs.bound import DiscBuilder, deep_point, disc_sample, theorem1_samples
from ..domain import BallDomain, build_domain, disc, perturbed_ellipse, unit_disc
from ..errors import LempertLabError
from ..metrics import (
    MetricSample,
    artanh_from,
    estimate1_ratio,
    lempert_ball_complement,
    lempert_disc_complement,
    lempert_planar_complement,
)
from .config import ExperimentConfig
from .report import ExperimentReport
from .svg import Chart


def _pmap(fn, items, workers):
    items = list(items)
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(fn, items))


def _guard(fn):
    """Wrap ``fn`` so a library error becomes a returned exception."""

    def run(x):
        try:
            return fn(x)
        except (LempertLabError, ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
            return exc

    return run


def make_domain(spec):
    """``(label, domain, oracle map or None)`` from a config entry."""
    spec = dict(spec)
    label = spec.pop("label", None)
    kind = spec.get("kind")
    if kind == "ball":
        n = int(spec.get("n", 2))
        return label or f"ball{n}", BallDomain(n), None
    if kind == "example4" or (kind == "image_map" and spec.get("map") == "example4"):
        D, m = example4_domain(int(spec.get("sample_count", 1024)))
        return label or "example4", D, m
    D = build_domain(spec)
    return label or kind, D, build_riemann_map(D, deep_point(D))


def _point_columns(prefix, p):
    p = np.atleast_1d(np.asarray(p, dtype=complex))
    if p.size == 1:
        return {f"re_{prefix}": float(p[0].real), f"im_{prefix}": float(p[0].imag)}
    out = {}
    for k, v in enumerate(p):
        out[f"re_{prefix}{k + 1}"] = float(v.real)
        out[f"im_{prefix}{k + 1}"] = float(v.imag)
    return out


def _write_plots(report, out_dir, charts):
    plots = Path(out_dir) / report.config.get("output", {}).get("plots", "plots")
    return [c.save(plots / f"{name}.svg") for name, c in charts.items()]


# -- Logarithmic-decay domain --------------------------------------------------


def run_example4(config: ExperimentConfig) -> ExperimentReport:
    """Ratio ``(1 - l_D(w, 0)) / d_D(w)`` as ``w`` increases to the singular point 2.

    The unit disc with ``w = 1 - 10^-k`` is the control, where the ratio is
    identically 1.
    """
    rep = ExperimentReport("example4", config=config.to_json())
    ks = [int(k) for k in config.sched("k")]
    D, m = example4_domain(int(config.sched("sample_count", 1024)))
    U = unit_disc()
    cases = [("example4", D, m, 2.0)]
    if config.sched("control", True):
        cases.append(("unit_disc", U, build_riemann_map(U, 0j), 1.0))
    for label, dom, mp, tip in cases:
        p0, _ = mp.to_disc(np.array([0j]))
        for k in ks:
            w = tip - 10.0 ** (-k)
            try:
                pw, _ = mp.to_disc(np.array([w + 0j]))
                l, oml = lempert_disc_complement(pw, p0)
                d = float(dom.signed_distance(w))
                s = MetricSample(w, 0j, float(l[0]), float(oml[0]), d, float(dom.signed_distance(0j)))
            except LempertLabError as exc:
                rep.fail("inversion", str(exc), domain=label, k=k)
                continue
            rep.add_row(domain=label, k=k, w=w, l=s.lempert, one_minus_l=s.one_minus_l, d=d, ratio=s.estimate2)
    rows = rep.select(domain="example4")
    ratios = [r["ratio"] for r in rows]
    rep.aggregate("example4_ratio_max", "ratio", "max", domain="example4")
    final = rep.aggregate("example4_ratio_min", "ratio", "min", domain="example4")
    dec = len(ratios) >= 2 and all(b < a for a, b in zip(ratios, ratios[1:]))
    rep.verdict("example4_decreasing", dec, ratios, None, "ratios strictly decreasing" if dec else "not decreasing")
    thr = config.tol("final_ratio_max")
    rep.verdict("example4_final_ratio", final < thr, final, thr, f"final ratio {final:.4f} (threshold < {thr})")
    if rows:
        rep.verdict("example4_first_below_one", rows[0]["ratio"] < 1, rows[0]["ratio"], 1.0, f"k={rows[0]['k']} ratio {rows[0]['ratio']:.4f} < 1")
    if config.sched("control", True):
        band = config.tol("control_band")
        lo = rep.aggregate("control_ratio_min", "ratio", "min", domain="unit_disc")
        hi = rep.aggregate("control_ratio_max", "ratio", "max", domain="unit_disc")
        ok = 1 - band <= lo and hi <= 1 + band
        rep.verdict("control_constant", ok, [lo, hi], [1 - band, 1 + band], f"control ratios in [{lo:.6f}, {hi:.6f}]")
    chart = Chart("Log-decay domain: (1 - l(w, 0)) / d(w)", "d(w)", "ratio", logx=True)
    for label in ("example4", "unit_disc"):
        rs = rep.select(domain=label)
        if rs:
            chart.add(label, [r["d"] for r in rs], [r["ratio"] for r in rs])
    rep.series["charts"] = {"example4_ratio": chart}
    return rep


# -- Product lower bound -------------------------------------------------------


def _builder_pairs(D, count, distances, rng):
    ds = np.asarray(distances, dtype=float)
    if isinstance(D, BallDomain):
        x = rng.normal(size=(count, 2, D.n)) + 1j * rng.normal(size=(count, 2, D.n))
        x /= np.linalg.norm(x, axis=2, keepdims=True)
        r = 1 - rng.choice(ds, size=(count, 2, 1))
        return list(zip(r[:, 0] * x[:, 0], r[:, 1] * x[:, 1]))
    t = rng.random((count, 2))
    g = D.boundary(t.ravel()).reshape(count, 2)
    n = D.inward_normal(t.ravel()).reshape(count, 2)
    p = g + rng.choice(ds, size=(count, 2)) * n
    return list(zip(p[:, 0], p[:, 1]))


def _best_per_ray(value, ra, rb, how="min"):
    """Indices of the pair with extreme ``value`` among pairs touching each ray."""
    key = np.concatenate([ra, rb])
    idx = np.concatenate([np.arange(ra.size)] * 2)
    v = np.concatenate([value, value])
    order = np.lexsort((v if how == "min" else -v, key))
    first = order[np.r_[True, key[order][1:] != key[order][:-1]]]
    return key[first], idx[first]


def _ray_rows(z, w, oml, dz, dw, i, j, per_ray):
    """One row per ray: the pair through it with the smallest ratio."""
    ratio = oml / (dz * dw)
    for ray, k in zip(*_best_per_ray(ratio, i // per_ray, j // per_ray)):
        yield dict(
            ray=int(ray),
            **_point_columns("z", z[k]),
            **_point_columns("w", w[k]),
            d_z=float(dz[k]),
            d_w=float(dw[k]),
            one_minus_l=float(oml[k]),
            ratio=float(ratio[k]),
        )


def _oracle(D, m, z, w):
    if isinstance(D, BallDomain):
        l, oml = lempert_ball_complement(z, w)
        return float(l), float(oml)
    l, oml = lempert_planar_complement(D, m, np.array([z]), np.array([w]))
    return float(l[0]), float(oml[0])


def run_theorem1(config: ExperimentConfig) -> ExperimentReport:
    """Oracle sweep of ``(1 - l) / (d_z d_w)`` with a refinement check, plus disc-builder certificates."""
    rep = ExperimentReport("theorem1", config=config.to_json())
    params = int(config.sched("params"))
    refine = int(config.sched("refine", 2))
    distances = [float(d) for d in config.sched("distances")]
    n_builder = int(config.sched("builder_pairs", 0))
    stab = config.tol("stability")
    rng = np.random.default_rng(config.seed)
    chart = Chart("Minimum of (1 - l) / (d_z d_w)", "boundary parameters", "c estimate", logy=True)
    for spec in config.domains:
        try:
            label, D, m = make_domain(spec)
        except LempertLabError as exc:
            rep.fail("domain", str(exc), domain=str(spec))
            continue
        grids = [params, params * refine]
        for grid in grids:
            for row in _ray_rows(*theorem1_samples(D, m, grid, distances, config.seed), len(distances)):
                rep.add_row(domain=label, grid=grid, **row)
        c = rep.aggregate(f"{label}_c_estimate", "ratio", "min", domain=label, grid=grids[0])
        c_ref = rep.aggregate(f"{label}_c_refined", "ratio", "min", domain=label, grid=grids[1])
        rep.verdict(f"{label}_positive", c > 0, c, 0.0, f"c estimate {c:.6g} > 0")
        drift = abs(c_ref - c) / c if c > 0 else np.inf
        rep.verdict(f"{label}_stable", drift <= stab, drift, stab, f"refinement drift {drift:.2%} <= {stab:.0%}")
        chart.add(label, grids, [c, c_ref])
        if n_builder and not getattr(D, "kind", "") == "example4":
            _theorem1_builder(rep, config, label, D, m, rng, n_builder)
    rep.series["charts"] = {"theorem1_constant": chart}
    return rep


def _theorem1_builder(rep, config, label, D, m, rng, count):
    bd = DiscBuilder(D, **config.sched("builder", {"halvings": 8}))
    pairs = _builder_pairs(D, count, config.sched("builder_distances"), rng)
    tol_upper = config.tol("upper_slack")
    tol_interp = config.tol("interpolation")

    def one(pair):
        z, w = pair
        u, cert = bd.bound(z, w)
        return u, cert, _oracle(D, m, z, w)

    results = _pmap(_guard(one), pairs, 1)
    good = 0
    for (z, w), res in zip(pairs, results):
        if isinstance(res, Exception):
            rep.fail(getattr(res, "stage", "builder"), str(res), domain=label)
            continue
        u, cert, (l, oml) = res
        e = cert.extras
        valid = (
            u >= l - tol_upper
            and e["interpolation_error"] <= tol_interp
            and e["kappa"] > 0
            and e["one_minus_upper"] >= e["kappa"] * e["d_z"] * e["d_w"] * (1 - 1e-12)
            and e["interior_mapping"]
            and e["rim_inside"]
            and e["denominator_winding"] == 0
        )
        good += valid
        rep.add_row(
            domain=label,
            grid="builder",
            **_point_columns("z", z),
            **_point_columns("w", w),
            d_z=e["d_z"],
            d_w=e["d_w"],
            one_minus_l=oml,
            ratio=oml / (e["d_z"] * e["d_w"]),
            upper=u,
            oracle_l=l,
            one_minus_upper=e["one_minus_upper"],
            kappa=e["kappa"],
            C=e["C"],
            interpolation_error=e["interpolation_error"],
            interior_mapping=e["interior_mapping"],
            certificate_valid=bool(valid),
        )
    kmin = rep.aggregate(f"{label}_kappa_min", "kappa", "min", domain=label, grid="builder")
    rep.aggregate(f"{label}_C_max", "C", "max", domain=label, grid="builder")
    need = int(config.sched("builder_min_valid", count))
    done = len(rep.select(domain=label, grid="builder"))
    rep.verdict(
        f"{label}_certificates",
        good == done and good >= need,
        good,
        need,
        f"{good}/{done} certificates valid, {len(pairs) - done} builder failures (need {need} valid), min kappa {kmin:.3g}",
    )


# -- Converging domain family ---------------------------------------------------


def _family(config, j):
    fam = config.sched("family", "perturbed_ellipse")
    if fam == "constant_disc":
        return unit_disc()
    if fam == "scaled_disc":
        return disc(0j, 1 + 1 / j)
    if fam == "perturbed_ellipse":
        a = float(config.sched("a", 1.5))
        b = float(config.sched("b", 1.0))
        s = float(config.sched("spread", 0.2))
        amp = float(config.sched("amplitude", 0.1))
        freq = int(config.sched("frequency", 5))
        return perturbed_ellipse(a * (1 + s / j), b * (1 - s / j), amp * j / (j + 1), freq)
    raise ValueError(f"unknown family {fam!r}")


def _inverse_with_derivative(m, zeta):
    if hasattr(m, "inverse_map"):
        f, df, _ = m.inverse_map(zeta)
        return f, df
    f = m.inverse(zeta)
    _, dp = m.forward(f)
    return f, 1 / dp


def run_proposition2(config: ExperimentConfig) -> ExperimentReport:
    """Uniform bounds for ``|f_j'|`` over a converging family of domains."""
    rep = ExperimentReport("proposition2", config=config.to_json())
    J = int(config.sched("J"))
    sample = disc_sample(int(config.sched("samples", 1000)), float(config.sched("radius", 1 - 1e-3)))
    eps = config.tol("epsilon")

    def one(j):
        G = _family(config, j)
        m = build_riemann_map(G, 0j)
        f, df = _inverse_with_derivative(m, sample)
        a = np.abs(df)
        c2 = np.asarray(G.signed_distance(f)) / (1 - np.abs(sample))
        return dict(
            j=j,
            d_center=float(G.signed_distance(0j)),
            fprime_min=float(a.min()),
            fprime_max=float(a.max()),
            width=float(a.max() / a.min()),
            c2_min=float(c2.min()),
            c2_max=float(c2.max()),
            nodes=int(getattr(m, "node_count", 0)),
            tail=float(getattr(m, "residual", 0.0)),
        )

    for j, res in zip(range(1, J + 1), _pmap(_guard(one), range(1, J + 1), config.workers)):
        if isinstance(res, Exception):
            rep.fail("riemann_map", str(res), j=j)
        else:
            rep.add_row(**res)
    lo = rep.aggregate("fprime_min", "fprime_min", "min")
    hi = rep.aggregate("fprime_max", "fprime_max", "max")
    c2lo = rep.aggregate("c2_min", "c2_min", "min")
    c2hi = rep.aggregate("c2_max", "c2_max", "max")
    dmin = rep.aggregate("d_center_min", "d_center", "min")
    c = max(hi, 1 / lo) if lo > 0 else np.inf
    rep.aggregates["c"] = c
    rep.aggregates["c2"] = max(c2hi, 1 / c2lo) if c2lo > 0 else np.inf
    rep.verdict("center_depth", dmin >= eps, dmin, eps, f"d(f_j(0)) >= {dmin:.4g} >= {eps}")
    cmax = config.tol("c_max")
    rep.verdict("envelope_bounded", lo > 0 and c <= cmax, c, cmax, f"|f_j'| in [1/c, c] with c = {c:.4g} <= {cmax}")
    window = int(config.sched("window", 5))
    widths = [r["width"] for r in rep.rows][-window:]
    spread = (max(widths) - min(widths)) / min(widths) if len(widths) == window else np.inf
    stab = config.tol("stabilization")
    rep.verdict("width_stabilizes", spread <= stab, spread, stab, f"last {window} widths within {spread:.2%} <= {stab:.0%}")
    chart = Chart("Domain family: |f_j'| envelope", "j", "|f_j'|", logy=True)
    js = [r["j"] for r in rep.rows]
    chart.add("min |f'|", js, [r["fprime_min"] for r in rep.rows])
    chart.add("max |f'|", js, [r["fprime_max"] for r in rep.rows])
    chart.add("min d/(1-|z|)", js, [r["c2_min"] for r in rep.rows])
    chart.add("max d/(1-|z|)", js, [r["c2_max"] for r in rep.rows])
    rep.series["charts"] = {"proposition2_envelope": chart}
    return rep


# -- Estimates ----------------------------------------------------------------


def _interior_grid(D, size, min_distance):
    x0, x1, y0, y1 = D.bounding_box
    X, Y = np.meshgrid(np.linspace(x0, x1, size), np.linspace(y0, y1, size))
    Z = (X + 1j * Y).ravel()
    return Z[np.asarray(D.signed_distance(Z)) > min_distance]


def _star_gaps(D, m, params, distances, separation, seed):
    """Star and lower gaps over well-separated pairs of sweep points, with the rays of both points."""
    z, w, oml, dz, dw, i, j = theorem1_samples(D, m, params, distances, seed)
    sep = np.abs(z - w) if z.ndim == 1 else np.linalg.norm(z - w, axis=1)
    keep = sep >= separation
    z, w, oml, dz, dw, sep = z[keep], w[keep], oml[keep], dz[keep], dw[keep], sep[keep]
    k = artanh_from(1 - oml, oml)
    gap = 2 * k - np.log1p(sep / dz) - np.log1p(sep / dw)
    lower = 2 * k + np.log(dz) + np.log(dw)
    per_ray = len(distances)
    return z, w, dz, dw, gap, lower, i[keep] // per_ray, j[keep] // per_ray


def run_estimates(config: ExperimentConfig) -> ExperimentReport:
    """Koebe range of kappa d on interior grids, (1 - l)/d along normal rays, the star gap and the ball lower gap."""
    rep = ExperimentReport("estimates", config=config.to_json())
    grid = int(config.sched("grid"))
    min_d = float(config.sched("grid_min_distance"))
    ray_params = int(config.sched("ray_params"))
    ray_d = [float(d) for d in config.sched("ray_distances")]
    star_params = int(config.sched("star_params"))
    star_d = [float(d) for d in config.sched("star_distances")]
    sep = float(config.sched("star_separation"))
    refine = int(config.sched("refine", 2))
    lower_delta = float(config.sched("lower_separation"))
    lo1, hi1, slack = config.tol("estimate1_low"), config.tol("estimate1_high"), config.tol("estimate1_slack")
    charts = {
        "estimate1": Chart("kappa d", "d(z)", "kappa d", logx=True),
        "estimate2": Chart("(1 - l(z, w)) / d(z)", "d(z)", "ratio", logx=True, logy=True),
    }
    for spec in config.domains:
        try:
            label, D, m = make_domain(spec)
        except LempertLabError as exc:
            rep.fail("domain", str(exc), domain=str(spec))
            continue
        ball = isinstance(D, BallDomain)
        if not ball:
            Z = _interior_grid(D, grid, min_d)
            try:
                r1 = estimate1_ratio(D, m, Z)
                d1 = np.asarray(D.signed_distance(Z))
            except LempertLabError as exc:
                rep.fail("collar", str(exc), domain=label)
                r1, d1 = np.array([]), np.array([])
            for k in range(r1.size):
                rep.add_row(domain=label, quantity="estimate1", **_point_columns("z", Z[k]), d_z=float(d1[k]), value=float(r1[k]))
            a = rep.aggregate(f"{label}_estimate1_min", "value", "min", domain=label, quantity="estimate1")
            b = rep.aggregate(f"{label}_estimate1_max", "value", "max", domain=label, quantity="estimate1")
            ok = r1.size > 0 and a >= lo1 - slack and b <= hi1 + slack
            rep.verdict(f"{label}_estimate1", ok, [a, b], [lo1 - slack, hi1 + slack], f"kappa d in [{a:.6f}, {b:.6f}]")
            charts["estimate1"].add(label, d1, r1, "scatter")
            # estimate 2 along inward normal rays with w fixed deep inside
            w0 = deep_point(D)
            t = np.arange(ray_params) / ray_params
            Zr = (D.boundary(t)[:, None] + np.asarray(ray_d)[None, :] * D.inward_normal(t)[:, None]).ravel()
            l, oml = lempert_planar_complement(D, m, Zr, np.full(Zr.shape, w0))
            dz = np.asarray(D.signed_distance(Zr))
            for k in range(Zr.size):
                rep.add_row(domain=label, quantity="estimate2", **_point_columns("z", Zr[k]), d_z=float(dz[k]), value=float(oml[k] / dz[k]))
            e2lo = rep.aggregate(f"{label}_estimate2_min", "value", "min", domain=label, quantity="estimate2")
            rep.aggregate(f"{label}_estimate2_max", "value", "max", domain=label, quantity="estimate2")
            floor = config.tol("estimate2_floor")
            rep.verdict(f"{label}_estimate2", e2lo >= floor, e2lo, floor, f"min (1 - l)/d = {e2lo:.4g} >= {floor}")
            charts["estimate2"].add(label, dz, oml / dz, "scatter")
        # star gap over well-separated pairs, at two grid sizes
        maxima = []
        for g in (star_params, star_params * refine):
            z, w, dz, dw, gap, lower, _, _ = _star_gaps(D, m, g, star_d, sep, config.seed)
            k = int(np.argmax(gap)) if gap.size else None
            if k is not None:
                rep.add_row(domain=label, quantity="star_gap", grid=g, pairs=int(gap.size), **_point_columns("z", z[k]), **_point_columns("w", w[k]), d_z=float(dz[k]), d_w=float(dw[k]), value=float(gap[k]))
            maxima.append(rep.aggregate(f"{label}_star_gap_max_{g}", "value", "max", domain=label, quantity="star_gap", grid=g))
        drift = abs(maxima[1] - maxima[0])
        st = config.tol("star_stability")
        rep.verdict(f"{label}_star_gap", np.isfinite(maxima[0]) and drift <= st, maxima, st, f"max star gap {maxima[0]:.4f} -> {maxima[1]:.4f} (drift {drift:.2g} <= {st})")
        if ball:
            z, w, dz, dw, _, lower, ra, rb = _star_gaps(D, m, star_params, star_d, lower_delta, config.seed)
            for ray, k in zip(*_best_per_ray(lower, ra, rb)):
                rep.add_row(domain=label, quantity="lower_gap", ray=int(ray), **_point_columns("z", z[k]), **_point_columns("w", w[k]), d_z=float(dz[k]), d_w=float(dw[k]), value=float(lower[k]))
            low = rep.aggregate(f"{label}_lower_gap_min", "value", "min", domain=label, quantity="lower_gap")
            rep.aggregates[f"{label}_c_prime"] = -low
            # bounded below: dropping the closest distance must not move the minimum much
            far = np.minimum(dz, dw) > min(star_d) * (1 + 1e-9)
            drift = abs(float(lower[far].min()) - low) if np.any(far) else np.inf
            lt = config.tol("lower_stability")
            rep.verdict(f"{label}_lower_gap", np.isfinite(low) and drift <= lt, low, lt, f"c' = {-low:.4f}, drift {drift:.2g} <= {lt}")
    rep.series["charts"] = charts
    return rep


RUNNERS = {
    "example4": run_example4,
    "theorem1": run_theorem1,
    "proposition2": run_proposition2,
    "estimates": run_estimates,
}


def run_experiment(config: ExperimentConfig, out_dir=None) -> ExperimentReport:
    """Run an experiment and, if ``out_dir`` is given, write CSV, JSON and SVG outputs."""
    rep = RUNNERS[config.experiment](config)
    if out_dir is not None:
        o = config.output
        rep.write(out_dir, o.get("csv", "report.csv"), o.get("json", "report.json"))
        _write_plots(rep, out_dir, rep.series.get("charts", {}))
    return rep
