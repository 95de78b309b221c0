"""Acceptance suite: eight gate checks, one printed pass/fail line each.

The empirical gates (3, 5, 6) are statistical by design; their material
parameters and tolerances are pinned here so reruns are bit-reproducible.
"""
import time

import numpy as np
import pytest

from decimstat import (
    BinaryImage,
    DecimationMethod,
    DiskMaterialSpec,
    LoGMaterialSpec,
    auto_decimate,
    build_ladder,
    characterize,
    correlation_length,
    generate_log,
    ladder_report,
    lineal_path,
    optimal_steps,
    place_disks,
    pore_size_histogram,
    surface_fraction,
    two_point_correlation,
)
import oracles
from conftest import random_image


def report(capsys, number: int, name: str, ok: bool, detail: str = "") -> None:
    with capsys.disabled():
        status = "PASS" if ok else "FAIL"
        suffix = f"  ({detail})" if detail else ""
        print(f"\n[{number}] {name}: {status}{suffix}")
    assert ok, f"criterion {number} ({name}) failed: {detail}"


def test_1_oracle_equivalence(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(12345)
    for _ in range(50):
        rows = int(rng.integers(4, 25))
        cols = int(rng.integers(4, 25))
        periodic = bool(rng.integers(0, 2))
        pixels = (rng.random((rows, cols)) < rng.uniform(0.2, 0.8)).astype(np.uint8)
        if pixels.min() == pixels.max():
            pixels[0, 0] ^= 1
        img = BinaryImage(pixels, periodic=periodic)
        n_max = min(rows, cols) // 2
        for phase in (0, 1):
            s2 = two_point_correlation(img, phase, n_max=n_max)
            assert np.array_equal(s2, oracles.two_point_oracle(pixels, phase, n_max, periodic))
            lp = lineal_path(img, phase, n_max=n_max)
            assert np.array_equal(lp, oracles.lineal_path_oracle(pixels, phase, n_max, periodic))
            hist = pore_size_histogram(img, phase, n_max=n_max)
            assert np.array_equal(hist, oracles.pore_histogram_oracle(pixels, phase, n_max, periodic))
    elapsed = time.perf_counter() - t0
    report(capsys, 1, "oracle equivalence on 50 small images", elapsed < 10.0,
           f"{elapsed:.1f}s")


def _materials_512():
    # disk radii scaled 1:8 with the side so packings stay feasible
    disks = dict(r_min=1, r_max=31, mu=6.25, sigma=7.5, side=512, seed=0)
    yield place_disks(DiskMaterialSpec(variant="impenetrable", disk_count=8, **disks))[0]
    yield place_disks(DiskMaterialSpec(variant="overlapping", disk_count=10, **disks))[0]
    for threshold in (127.50, 127.00, 126.75):
        yield generate_log(LoGMaterialSpec(kernel_size=75, threshold=threshold,
                                           side=512, seed=0))


def test_2_normalization_limits(capsys):
    worst_sym = 0.0
    for img in _materials_512():
        desc = characterize(img)
        for phase in (0, 1):
            assert desc.curves[(1, phase)].values[0] == 1.0
            assert lineal_path(img, phase)[0] == surface_fraction(img, phase)
            assert desc.curves[(3, phase)].values[0] == 1.0
        gap = np.abs(desc.curves[(1, 0)].values - desc.curves[(1, 1)].values).max()
        worst_sym = max(worst_sym, gap)
    report(capsys, 2, "normalization limits at 512^2", worst_sym < 1e-12,
           f"max phase asymmetry {worst_sym:.2e}")


def test_3_generator_statistics(capsys):
    t0 = time.perf_counter()
    disk_phis = []
    for seed in range(10):
        spec = DiskMaterialSpec(variant="overlapping", disk_count=40, r_min=1,
                                r_max=250, mu=50.0, sigma=60.0, side=1024, seed=seed)
        disk_phis.append(surface_fraction(place_disks(spec)[0], 0))
    log_phis = []
    for seed in range(10):
        spec = LoGMaterialSpec(kernel_size=75, threshold=127.50, side=1024, seed=seed)
        log_phis.append(surface_fraction(generate_log(spec), 0))
    disk_mean = float(np.mean(disk_phis))
    log_mean = float(np.mean(log_phis))
    elapsed = time.perf_counter() - t0
    ok = abs(disk_mean - 0.5059) < 0.05 and abs(log_mean - 0.4969) < 0.03 and elapsed < 300
    report(capsys, 3, "generator surface-fraction statistics at 1024^2", ok,
           f"disks {disk_mean:.4f} (target 0.5059±0.05), "
           f"level-cut {log_mean:.4f} (target 0.4969±0.03), {elapsed:.0f}s")


def test_4_optimal_step_identity(capsys):
    ok = all(
        optimal_steps(ell, 4096, 4096)
        == (max(0, (ell // 3).bit_length() - 1) if ell >= 3 else 0)
        for ell in range(1, 4097))
    report(capsys, 4, "optimal-step closed form for lengths 1..4096", ok)


# Shared 1024^2 disk ensemble for the error-curve and coarseness gates.
# Parameters pinned so the minimum correlation length sits near 33 pixels,
# giving 3 optimal halvings with 6 computed steps.
ENSEMBLE_SPEC = dict(variant="overlapping", disk_count=507, r_min=1, r_max=50,
                     mu=20.0, sigma=7.5, side=1024)
ENSEMBLE_SEEDS = range(5)
ENSEMBLE_MAX_STEP = 6


@pytest.fixture(scope="module")
def disk_ensemble():
    methods = [DecimationMethod("random", seed=0), DecimationMethod("bilinear"),
               DecimationMethod("bicubic")]
    members = []
    for seed in ENSEMBLE_SEEDS:
        img, _ = place_disks(DiskMaterialSpec(seed=seed, **ENSEMBLE_SPEC))
        desc = characterize(img)
        ell = min(correlation_length(c).length for c in desc.curves.values())
        z = optimal_steps(ell, img.rows, img.cols)
        errors = np.zeros(ENSEMBLE_MAX_STEP + 1)
        coarseness = None
        for method in methods:
            rep = ladder_report(img, method, ENSEMBLE_MAX_STEP)
            errors += rep.errors() / len(methods)
            if coarseness is None:
                coarseness = np.array([p.value for p in rep.coarseness])
        members.append({"z": z, "errors": errors, "coarseness": coarseness})
    return members


def test_5_error_curve_shape(capsys, disk_ensemble):
    passed = 0
    details = []
    for member in disk_ensemble:
        z, errors = member["z"], member["errors"]
        flat = errors[1:z + 1].max() / errors[1:z + 1].min()
        rise = errors[z + 2] / errors[z]
        ok = flat < 3.0 and rise > 5.0
        passed += ok
        details.append(f"flat {flat:.2f} rise {rise:.1f}")
    report(capsys, 5, "flat-then-rising decimation error curve", passed >= 4,
           f"{passed}/5 seeds; " + "; ".join(details))


def test_6_coarseness_gate(capsys, disk_ensemble):
    passed = 0
    details = []
    for member in disk_ensemble:
        z, trace = member["z"], member["coarseness"]
        ok = (trace[0] == 1.0 and trace[z] > 0.9
              and bool(np.all(np.diff(trace) <= 0.02)))
        passed += ok
        details.append(f"C{z}={trace[z]:.3f}")
    report(capsys, 6, "coarseness above 0.9 at the optimal step", passed >= 4,
           f"{passed}/5 seeds; " + "; ".join(details))


def test_7_determinism_and_size_law(capsys):
    img = random_image(2024, 4096, 4096)
    ok = True
    detail = []
    for method in (DecimationMethod("random", seed=9), DecimationMethod("bilinear"),
                   DecimationMethod("bicubic")):
        first = build_ladder(img, method, 8)
        second = build_ladder(img, method, 8)
        sizes = [im.rows for im in first.images]
        identical = all(a.pixels.tobytes() == b.pixels.tobytes()
                        for a, b in zip(first.images, second.images))
        ok = ok and identical and sizes == [4096 >> k for k in range(9)]
        detail.append(f"{method.kind} {'ok' if identical else 'MISMATCH'}")
    report(capsys, 7, "byte-identical 4096^2 -> 16^2 ladders", ok, ", ".join(detail))


def test_8_end_to_end_on_micrograph_scale_fixture(capsys):
    spec = DiskMaterialSpec(variant="overlapping", disk_count=1122, r_min=1,
                            r_max=25, mu=10.0, sigma=4.0, side=768, seed=0)
    img, _ = place_disks(spec)
    result = auto_decimate(img, DecimationMethod("bilinear"))
    ell = result.characteristic_length
    ok = (12 <= ell < 24 and result.optimal_step == 2
          and (result.image.rows, result.image.cols) == (192, 192))
    report(capsys, 8, "768^2 fixture decimates twice to 192^2", ok,
           f"length {ell:g}, steps {result.optimal_step}, "
           f"output {result.image.rows}x{result.image.cols}")
