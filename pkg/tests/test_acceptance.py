"""Acceptance criteria 1-11 at their stated tolerances.

Each test records one PASS/FAIL line; the lines are printed in the pytest
terminal summary and, when this file is run as a script, on stdout.
"""

import time

import numpy as np
import pytest

from harmsurf import functionals as fn
from harmsurf.boundary import jump_set, total_variation
from harmsurf.diffgeo import PolarGrid, curvature_brioschi, curvature_det, curvature_det_array, \
    form_field, nonpositivity_scan
from harmsurf.limits import segment_sweep
from harmsurf.poisson import conjugate_kernel_mass
from harmsurf.specs import builtin_surface
from harmsurf.surfaces import mean_value_residual, random_weierstrass

RESULTS = []

BUILTINS = ["identity", "square", "triangle", "tilted:10", "enneper", "saddle"]
SEEDS = range(5)


def all_builtins():
    out = [builtin_surface(name) for name in BUILTINS]
    out.append(builtin_surface("random-fourier", seed=0))
    out.append(builtin_surface("random-weierstrass", seed=0))
    return out


def record(number, ok, detail):
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_c01_kernel_identity():
    start = time.perf_counter()
    errs = [abs(conjugate_kernel_mass(t) - np.pi) for t in (np.pi / 4, np.pi / 2, 3 * np.pi / 4)]
    elapsed = time.perf_counter() - start
    record(1, max(errs) <= 1e-6 and elapsed < 1.0,
           f"kernel mass error {max(errs):.2e}, {elapsed:.3f} s")


def test_c02_boundary_length_convergence():
    start = time.perf_counter()
    ok, parts = True, []
    for name, tv in (("square", 4 * np.sqrt(2)), ("triangle", 3 * np.sqrt(3))):
        sweep = fn.length_sweep(builtin_surface(name), [0.9, 0.99, 0.999])
        rel = abs(sweep.limit_estimate - tv) / tv
        mono = all(b >= a for a, b in zip(sweep.lengths, sweep.lengths[1:]))
        ok &= mono and rel <= 0.01
        parts.append(f"{name} rel.err {rel:.2e}{'' if mono else ' NOT MONOTONE'}")
    elapsed = time.perf_counter() - start
    record(2, ok and elapsed < 10.0, ", ".join(parts) + f", {elapsed:.2f} s")


def test_c03_length_monotone_and_bounded():
    radii = np.linspace(0.05, 0.995, 16)
    ok, worst_excess, min_step = True, -np.inf, np.inf
    for seed in SEEDS:
        s = builtin_surface("random-fourier", seed=seed)
        lengths = np.array([fn.circle_image_length(s, r) for r in radii])
        tv = total_variation(s.boundary)
        min_step = min(min_step, float(np.min(np.diff(lengths))))
        worst_excess = max(worst_excess, float(np.max(lengths - tv)))
        ok &= bool(np.all(np.diff(lengths) >= 0)) and bool(np.all(lengths <= tv + 1e-6))
    record(3, ok, f"smallest increment {min_step:.2e}, largest excess over TV {worst_excess:.2e}")


def test_c04_curvature_cross_validation():
    grid = PolarGrid(32, 32)
    worst = 0.0
    for name in ("saddle", "enneper"):
        s = builtin_surface(name)
        z = grid.points().ravel()
        K, _ = curvature_det_array(s, z)
        Kb = curvature_brioschi(form_field(s, z))
        worst = max(worst, float(np.max(np.abs(K - Kb) / np.abs(K))))
    k0 = curvature_det(builtin_surface("saddle"), 0.0).K_det
    record(4, worst <= 1e-6 and abs(k0 + 1) <= 1e-8,
           f"max relative det/Brioschi gap {worst:.2e}, K(0,0) + 1 = {k0 + 1:.1e}")


def test_c05_nonpositivity():
    surfaces = all_builtins() + [random_weierstrass(np.random.default_rng(s)) for s in SEEDS]
    worst, count = -np.inf, 0
    for s in surfaces:
        report = nonpositivity_scan(s, tolerance=1e-7)
        if report.applicable and report.max_K is not None:
            worst = max(worst, report.max_K)
            count += 1
    record(5, worst <= 1e-7, f"max K {worst:.3e} over {count} surfaces with n >= 3")


def test_c06_isoperimetric():
    ok, parts = True, []
    for s in all_builtins():
        rep = fn.isoperimetric_report(s)
        ok &= rep.satisfied
        if s.name == "identity":
            ok &= abs(rep.deficit) <= 1e-8
            parts.append(f"identity deficit {rep.deficit:.1e}")
        if s.name == "square":
            rel = abs(rep.deficit - (32 - 8 * np.pi)) / (32 - 8 * np.pi)
            ok &= rel <= 0.01
            parts.append(f"square deficit rel.err {rel:.2e}")
        if not rep.satisfied:
            parts.append(f"{s.name} VIOLATED by {-rep.deficit:.3e}")
    record(6, ok, ", ".join(parts))


def test_c07_riesz_zygmund():
    worst, ident = 0.0, None
    for s in all_builtins():
        ratios = [r.details["ratio"] for r in fn.riesz_zygmund_sweep(s, 32)]
        worst = max(worst, max(ratios))
        if s.name == "identity":
            ident = max(abs(r - 1 / np.pi) for r in ratios)
    record(7, worst <= 0.5 + 1e-6 and ident <= 1e-8,
           f"max ratio {worst:.6f}, identity ratio - 1/pi = {ident:.1e}")


def test_c08_sharpness():
    start = time.perf_counter()
    table = fn.sharpness_sweep([0, 1, 10, 100, 1000])
    gaps = [abs(fn.tilted_perimeter(m) - fn.circle_image_length(builtin_surface(f"tilted:{m}"), 1.0))
            for m in (1, 10)]
    elapsed = time.perf_counter() - start
    ok = table.monotone and 0.49 <= table.ratio[-1] <= 0.5 and max(gaps) <= 1e-8 and elapsed < 5.0
    record(8, ok, f"ratio(1000) = {table.ratio[-1]:.6f}, perimeter identity gap {max(gaps):.1e}, "
                  f"{elapsed:.2f} s")


def test_c09_diameter_bound():
    ok, parts = True, []
    for name in ("identity", "tilted:10", "enneper"):
        s = builtin_surface(name)
        est = fn.geodesic_diameter_estimate(s, PolarGrid(64, 128, 1.0))
        ok &= est.estimate <= est.bound + 1e-3
        parts.append(f"{name} {est.estimate:.4f} <= {est.bound:.4f}")
    record(9, ok, ", ".join(parts))


def test_c10_cluster_limits():
    s = builtin_surface("square")
    worst_res, worst_col = 0.0, 0.0
    for jump in jump_set(s.boundary):
        sweep = segment_sweep(s, jump, (-1.0, -0.5, 0.0, 0.5, 1.0), (10.0, 1e2, 1e3, 1e4))
        worst_res = max(worst_res, sweep.max_residual)
        worst_col = max(worst_col, sweep.collinearity)
    record(10, worst_res <= 1e-3 and worst_col <= 1e-3,
           f"max residual {worst_res:.2e}, max distance to [A0, B0] {worst_col:.2e}")


def test_c11_numerical_hygiene():
    rng = np.random.default_rng(11)
    r = 0.9 * np.sqrt(rng.uniform(0, 1, 50))
    z = r * np.exp(2j * np.pi * rng.uniform(0, 1, 50))
    h = 1e-5
    worst_fd, worst_mv = 0.0, 0.0
    for s in all_builtins():
        fx, fy = s.first(z)
        gx = (s.value(z + h) - s.value(z - h)) / (2 * h)
        gy = (s.value(z + 1j * h) - s.value(z - 1j * h)) / (2 * h)
        for a, b in ((fx, gx), (fy, gy)):
            scale = np.maximum(np.linalg.norm(a, axis=-1), 1.0)
            worst_fd = max(worst_fd, float(np.max(np.linalg.norm(a - b, axis=-1) / scale)))
        for _ in range(20):
            c = 0.6 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
            rho = rng.uniform(0.05, 0.95 - abs(c))
            worst_mv = max(worst_mv, mean_value_residual(s, c, rho))
    record(11, worst_fd < 1e-6 and worst_mv <= 1e-8,
           f"max FD relative error {worst_fd:.2e}, max mean-value residual {worst_mv:.2e}")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
