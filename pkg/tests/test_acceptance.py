"""Acceptance criteria 1 to 9, each at its stated tolerance and runtime budget."""

import time

import numpy as np

from lempert_lab.conformal import build_riemann_map, cauchy_riemann_residual
from lempert_lab.discs import InterpolationSystem, Space, admissibility_check, lemma3_curve
from lempert_lab.domain import BallDomain, ellipse, perturbed_ellipse, smoothed_rectangle, unit_disc
from lempert_lab.experiments.config import default_config, load_config
from lempert_lab.experiments.runners import run_experiment
from lempert_lab.metrics import lempert_planar


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def _random_disc_points(rng, k):
    return np.sqrt(rng.random(k)) * np.exp(2j * np.pi * rng.random(k))


def _config(name, **schedule):
    data = default_config(name).to_json()
    data["schedule"] = {**data["schedule"], **schedule}
    return data


def test_criterion1_disc_oracle(acceptance):
    rng = np.random.default_rng(0)
    with Timer() as t:
        D = unit_disc()
        m = build_riemann_map(D, 0j)
        z, w = _random_disc_points(rng, 1000), _random_disc_points(rng, 1000)
        err = float(np.max(np.abs(lempert_planar(D, m, z, w) - np.abs((z - w) / (1 - np.conj(z) * w)))))
    ok = err < 1e-10 and t.elapsed < 1
    assert acceptance(1, "disc oracle", ok, f"max error {err:.2e} < 1e-10, {t.elapsed:.2f}s < 1s")


def test_criterion2_riemann_map(acceptance):
    with Timer() as t:
        D = ellipse(2, 1)
        m = build_riemann_map(D, 0j)
        x0, x1, y0, y1 = D.bounding_box
        X, Y = np.meshgrid(np.linspace(x0, x1, 20), np.linspace(y0, y1, 20))
        Z = (X + 1j * Y).ravel()
        Z = Z[D.signed_distance(Z) > 0]
        W, _ = m.forward(Z)
        rt = float(np.max(np.abs(m.inverse(W) - Z)))
        cr = float(cauchy_riemann_residual(m, Z))
    ok = rt < 1e-8 and cr < 1e-6 and t.elapsed < 10
    assert acceptance(2, "Riemann map", ok, f"{Z.size} points, round trip {rt:.2e} < 1e-8, CR {cr:.2e} < 1e-6, {t.elapsed:.1f}s < 10s")


def test_criterion3_example4(acceptance):
    with Timer() as t:
        rep = run_experiment(default_config("example4"))
    v = {x.name: x for x in rep.verdicts}
    ratios = rep.series.get("ratios")
    ok = all(x.passed for x in rep.verdicts) and t.elapsed < 30
    detail = "; ".join(x.line() for x in rep.verdicts) + f"; {t.elapsed:.1f}s < 30s"
    if ratios is not None:
        detail = f"ratios {np.round(ratios, 4).tolist()}; " + detail
    assert "example4_final_ratio" in v and "control_constant" in v
    assert acceptance(3, "log-decay example", ok, detail)


def test_criterion4_theorem1(acceptance):
    with Timer() as t:
        rep = run_experiment(load_config(_config("theorem1", builder_pairs=0)))
    labels = ["unit_disc", "ellipse", "smoothed_rectangle", "ball2"]
    v = {x.name: x for x in rep.verdicts}
    need = [f"{d}_{k}" for d in labels for k in ("positive", "stable")]
    ok = all(n in v and v[n].passed for n in need) and not rep.failures and t.elapsed < 120
    cs = ", ".join(f"{d} c={rep.aggregates[f'{d}_c_estimate']:.5g} drift {v[f'{d}_stable'].value:.2%}" for d in labels)
    assert acceptance(4, "lower bound constant", ok, f"{cs}; {t.elapsed:.1f}s < 120s")


def test_criterion5_certificates(acceptance):
    data = _config("theorem1", params=16, builder_pairs=50, builder_min_valid=50)
    data["domains"] = [{"kind": "unit_disc"}, {"kind": "ellipse", "a": 2, "b": 1}, {"kind": "ball", "n": 2}]
    with Timer() as t:
        rep = run_experiment(load_config(data))
    labels = ["unit_disc", "ellipse", "ball2"]
    v = {x.name: x for x in rep.verdicts}
    ok = all(v[f"{d}_certificates"].passed for d in labels) and t.elapsed < 300
    counts = ", ".join(f"{d} {v[f'{d}_certificates'].detail}" for d in labels)
    assert acceptance(5, "constructive bound", ok, f"{counts}; {t.elapsed:.0f}s < 300s")


def test_criterion6_estimate1(acceptance):
    data = _config("estimates")
    data["domains"] = [d for d in data["domains"] if d["kind"] != "ball"]
    with Timer() as t:
        rep = run_experiment(load_config(data))
    est = [x for x in rep.verdicts if x.name.endswith("_estimate1")]
    ok = len(est) == len(data["domains"]) and all(x.passed for x in est) and t.elapsed < 30
    ranges = ", ".join(f"{x.name[:-10]} [{x.value[0]:.4f}, {x.value[1]:.4f}]" for x in est)
    assert acceptance(6, "Koebe range", ok, f"{ranges} within [0.2499, 1.0001]; {t.elapsed:.1f}s < 30s")


def test_criterion7_family(acceptance):
    with Timer() as t:
        rep = run_experiment(default_config("proposition2"))
    v = {x.name: x for x in rep.verdicts}
    ok = len(rep.rows) == 20 and v["envelope_bounded"].passed and v["width_stabilizes"].passed and t.elapsed < 180
    c = rep.aggregates["c"]
    assert acceptance(7, "family sweep", ok, f"c = {c:.4g}, last-5 width spread {v['width_stabilizes'].value:.2%} <= 2%; {t.elapsed:.1f}s < 180s")


def test_criterion8_jacobian(acceptance):
    rng = np.random.default_rng(0)
    with Timer() as t:
        B = BallDomain(2)
        curve = lemma3_curve(B, np.array([1, 0], complex), np.array([-1, 0], complex))
        sp = Space(B)
        S = InterpolationSystem(curve, sp.tangent_basis(curve.a), sp.tangent_basis(curve.b))
        h = 1e-6
        worst = 0.0
        for _ in range(100):
            x = S.seed() + 0.05 * (rng.normal(size=4) + 1j * rng.normal(size=4))
            J = S.jacobian(x)
            num = np.stack([(S(x + h * e) - S(x - h * e)) / (2 * h) for e in np.eye(4)], axis=1)
            worst = max(worst, float(np.max(np.abs(num - J)) / np.max(np.abs(J))))
    ok = worst < 1e-6 and t.elapsed < 5
    assert acceptance(8, "Jacobian", ok, f"max relative error {worst:.2e} < 1e-6 over 100 points; {t.elapsed:.2f}s < 5s")


def test_criterion9_admissibility(acceptance):
    with Timer() as t:
        cases = []
        for name, D in (
            ("unit_disc", unit_disc()),
            ("ellipse", ellipse(2, 1)),
            ("smoothed_rectangle", smoothed_rectangle()),
            ("perturbed_ellipse", perturbed_ellipse(1.5, 1, 0.1, 5)),
        ):
            for s in (0.5, 0.25):
                cases.append((f"{name} t=0/{s}", D, D.boundary(0.0), D.boundary(s)))
        cases.append(("ellipse a=b", ellipse(2, 1), 2.0, 2.0))
        B = BallDomain(2)
        cases.append(("ball2", B, np.array([1, 0], complex), np.array([-1, 0], complex)))
        cases.append(("ball2 oblique", B, np.array([1, 0], complex), np.array([0.6, 0.8j])))
        cases.append(("ball2 a=b", B, np.array([0, 1], complex), np.array([0, 1], complex)))
        failed = []
        for label, D, a, b in cases:
            rep = admissibility_check(D, lemma3_curve(D, a, b))
            if not rep.passed:
                failed.append(f"{label}: {rep.reason}")
    ok = not failed and t.elapsed < 10
    assert acceptance(9, "curve admissibility", ok, f"{len(cases) - len(failed)}/{len(cases)} curves admissible {failed}; {t.elapsed:.1f}s < 10s")
