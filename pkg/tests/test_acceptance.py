"""Acceptance suite: one test per shipping criterion, each printing a verdict.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion lines.
The heaviest item is the eigen-modulus check, which pushes 25 fields through
the literal-sum oracle at 128^2 (about a minute in total).
"""

import math
import time

import numpy as np

from quft import (Gaussian, Grid2D, I, ONE, PolyGaussian, QField, Quaternion,
                  check_scaling, exact_qft, hermite_phi, iqft,
                  miyachi_functional, miyachi_nested, qft_direct, qft_fast,
                  sample, sample_spectrum, verify_envelope, weighted_sup,
                  witness_subcritical)
from quft.quaternion import qconj, qmodulus, qmul
from oracles import exact_hermite_gauss_spectrum

PI = math.pi


def verdict(num: int, name: str, ok: bool, detail: str) -> None:
    print(f"criterion {num:2d} [{name}]: {'PASS' if ok else 'FAIL'} ({detail})")


def test_criterion_01_oracle_equivalence():
    rng = np.random.default_rng(101)
    grid = Grid2D(16, 16, 0.25, 0.25)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(20):
        f = QField(grid, rng.uniform(-1.0, 1.0, (16, 16, 4)))
        d = qft_direct(f).values
        q = qft_fast(f).values
        worst = max(worst, float(np.abs(d - q).max()))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and elapsed < 10.0
    verdict(1, "oracle equivalence", ok,
            f"max deviation {worst:.3e} over 20 fields in {elapsed:.2f}s")
    assert worst <= 1e-10
    assert elapsed < 10.0


def test_criterion_02_gaussian_closed_form():
    grid = Grid2D(128, 128, 1 / 16, 1 / 16)   # extent [-4, 4)^2
    amplitudes = [ONE, I, Quaternion(1, 1, 1, 1)]
    rates = [(PI, PI), (PI / 2, 2 * PI), (2.0, 5.0)]
    worst = 0.0
    for q in amplitudes:
        for a1, a2 in rates:
            s = Gaussian(q=q, a1=a1, a2=a2)
            numeric = qft_fast(sample(s, grid)).values
            closed = sample_spectrum(s, grid).values
            worst = max(worst, float(np.abs(numeric - closed).max()))
    ok = worst <= 1e-6
    verdict(2, "Gaussian closed form", ok, f"max component error {worst:.3e}")
    assert ok


def test_criterion_03_inversion():
    rng = np.random.default_rng(303)
    grid = Grid2D(32, 32, 0.2, 0.35)
    worst = 0.0
    for _ in range(5):
        f = QField(grid, rng.uniform(-1.0, 1.0, (32, 32, 4)))
        back = iqft(qft_fast(f))
        worst = max(worst, float(np.abs(back.values - f.values).max()))
    ok = worst <= 1e-8
    verdict(3, "round-trip inversion", ok, f"max component error {worst:.3e}")
    assert ok


def test_criterion_04_scaling_law():
    grid = Grid2D(128, 128, 1 / 16, 1 / 16)
    f = sample(Gaussian(q=ONE, a1=PI, a2=PI), grid)
    report = check_scaling(f, 2)
    ok = report.residual <= 1e-6
    verdict(4, "dilation law", ok,
            f"residual {report.residual:.3e} on {report.nodes_compared} nodes")
    assert ok


def test_criterion_05_transfer_rules():
    rng = np.random.default_rng(505)
    grid = Grid2D(16, 16, 0.25, 0.25)
    unit = {c: np.zeros(4) for c in "ijk"}
    unit["i"][1] = unit["j"][2] = unit["k"][3] = 1.0
    worst = 0.0
    for _ in range(5):
        g = rng.uniform(-1.0, 1.0, (16, 16))
        emb = {}
        for c, comp in (("1", 0), ("i", 1), ("j", 2), ("k", 3)):
            v = np.zeros((16, 16, 4))
            v[..., comp] = g
            emb[c] = qft_direct(QField(grid, v)).values
        Fg = emb["1"]
        u = {c: np.broadcast_to(unit[c], Fg.shape) for c in "ijk"}
        worst = max(worst, float(np.abs(emb["i"] - qmul(u["i"], Fg)).max()))
        worst = max(worst, float(np.abs(emb["j"] - qmul(Fg, u["j"])).max()))
        worst = max(worst, float(np.abs(emb["k"] - qmul(qmul(u["i"], Fg), u["j"])).max()))
    ok = worst <= 1e-12
    verdict(5, "transfer rules", ok, f"max deviation {worst:.3e}")
    assert ok


def test_criterion_06_log_plus_worked_example():
    # amplitude of modulus 2 at the matched rates; frequency window [-4, 4)^2
    q = Quaternion(1, 1, 1, 1)
    grid = Grid2D(64, 64, 0.125, 0.125)
    spectrum = sample_spectrum(Gaussian(q=q, a1=PI, a2=PI), grid)
    above = miyachi_functional(spectrum, PI, 2.01).value
    below = miyachi_functional(spectrum, PI, 1.0).value
    area = 64.0
    want = area * math.log(2.0)
    ok = above == 0.0 and abs(below - want) <= 1e-6
    verdict(6, "log-plus worked example", ok,
            f"above-threshold {above}, below-threshold {below:.9f} vs {want:.9f}")
    assert above == 0.0
    assert abs(below - want) <= 1e-6


def test_criterion_07_regime_trichotomy():
    extents = [4.0, 8.0, 16.0]
    lattice = Grid2D(256, 256, 1 / 32, 1 / 32)   # frequency window [-16, 16)

    # (a) supercritical probe: spectral envelope rate 0.8 under the weight rate 1
    probe = Gaussian(q=ONE, a1=PI ** 2 / 0.8, a2=PI ** 2 / 0.8)
    sup_nested = miyachi_nested(sample_spectrum(probe, lattice), 1.0, 0.7, extents)
    sup_vals = [r.value for r in sup_nested]
    ok_a = (sup_vals[0] < sup_vals[1] < sup_vals[2]
            and all(r.divergent for r in sup_nested))

    # (b) critical Gaussian, threshold cleared: zero at every extent
    crit = Gaussian(q=Quaternion(1, 1, 1, 1), a1=PI, a2=PI)
    crit_nested = miyachi_nested(sample_spectrum(crit, lattice), PI, 2.01, extents)
    ok_b = all(r.value == 0.0 for r in crit_nested)

    # (c) witnesses: exact spectra, value sequences finite and settling >= 10x.
    #     The closed-form sampler is first validated against the literal-sum
    #     oracle, then rho is set a fixed factor under the weighted sup so the
    #     integrand support sits inside the middle window.
    wit_grid = Grid2D(128, 128, 1 / 16, 1 / 16)
    w22 = witness_subcritical(1.0, 1.0, 2, 2)
    oracle_gap = float(np.abs(
        qft_direct(sample(w22, wit_grid)).values
        - exact_hermite_gauss_spectrum(2, 2, w22.gamma, wit_grid).values).max())
    ok_oracle = oracle_gap <= 1e-10

    ok_c = True
    ratios = []
    for k in range(3):
        for l in range(3):
            w = witness_subcritical(1.0, 1.0, k, l)
            S = exact_hermite_gauss_spectrum(k, l, w.gamma, wit_grid)
            rho = weighted_sup(S, 1.0) / 2.5
            vals = [r.value for r in miyachi_nested(S, 1.0, rho, [2.0, 4.0, 8.0])]
            d1, d2 = vals[1] - vals[0], vals[2] - vals[1]
            ratio = d1 / d2 if d2 > 0 else math.inf
            ratios.append(ratio)
            ok_c &= (all(math.isfinite(v) for v in vals) and d1 > 0
                     and d2 <= d1 / 10.0)
    ok = ok_a and ok_b and ok_c and ok_oracle
    verdict(7, "regime trichotomy", ok,
            f"supercritical {sup_vals[0]:.1f}<{sup_vals[1]:.1f}<{sup_vals[2]:.1f} flagged, "
            f"critical all zero: {ok_b}, witness shrink ratios min {min(ratios):.1f}, "
            f"spectrum oracle gap {oracle_gap:.2e}")
    assert ok_a, (sup_vals, [r.divergent for r in sup_nested])
    assert ok_b, [r.value for r in crit_nested]
    assert ok_oracle, oracle_gap
    assert ok_c, ratios


def test_criterion_08_envelope_preservation():
    grid = Grid2D(128, 128, 1 / 16, 1 / 16)
    polys = [
        PolyGaussian(gamma=1.0, coeffs={(1, 0): 1.0}),
        PolyGaussian(gamma=1.0, coeffs={(1, 1): 1.0}),
        PolyGaussian(gamma=1.0, coeffs={(2, 1): 1.0}),
        PolyGaussian(gamma=1.0, coeffs={(3, 0): 1.0}),
    ]
    worst = 0.0
    for s in polys:
        env = exact_qft(s)
        fit = verify_envelope(qft_fast(sample(s, grid)), env.rate, env.degree)
        worst = max(worst, abs(fit.rate - env.rate) / env.rate)
    ok = worst <= 0.02
    verdict(8, "envelope preservation", ok, f"worst rate error {worst * 100:.2f}%")
    assert ok


def test_criterion_09_hermite_eigen_modulus():
    grid = Grid2D(128, 128, 1 / 16, 1 / 16)
    X1, X2 = grid.spatial_mesh()
    xi = grid.xi1()
    worst = 0.0
    for k in range(5):
        for l in range(5):
            values = np.zeros((128, 128, 4))
            values[..., 0] = hermite_phi(k, X1) * hermite_phi(l, X2)
            S = qft_direct(QField(grid, values))
            expected = np.abs(hermite_phi(k, xi)[:, None] * hermite_phi(l, xi)[None, :])
            worst = max(worst, float(np.abs(S.modulus() - expected).max()))
    ok = worst <= 1e-6
    verdict(9, "eigen-modulus", ok, f"max pointwise error {worst:.3e}")
    assert ok


def test_criterion_10_algebra_suite():
    rng = np.random.default_rng(1010)
    n = 150_000
    t0 = time.perf_counter()
    p = rng.uniform(-1.0, 1.0, (n, 4))
    q = rng.uniform(-1.0, 1.0, (n, 4))
    r = rng.uniform(-1.0, 1.0, (n, 4))

    pq = qmul(p, q)
    mod_gap = float(np.max(np.abs(qmodulus(pq) - qmodulus(p) * qmodulus(q))
                           / np.maximum(qmodulus(p) * qmodulus(q), 1e-30)))

    assoc = qmul(pq, r) - qmul(p, qmul(q, r))
    assoc_gap = float(np.max(np.abs(assoc)
                             / np.maximum(qmodulus(qmul(pq, r)), 1e-12)[..., None]))

    keep = qmodulus(p) > 1e-3
    pk = p[keep]
    inv = qconj(pk) / (qmodulus(pk) ** 2)[..., None]
    ident = qmul(pk, inv)
    ident[..., 0] -= 1.0
    inv_gap = float(np.max(np.abs(ident)))

    conj_exact = bool(np.array_equal(qconj(qconj(p)), p))
    elapsed = time.perf_counter() - t0
    ok = (mod_gap < 1e-12 and assoc_gap < 1e-12 and inv_gap < 1e-12
          and conj_exact and elapsed < 5.0)
    verdict(10, "algebra suite", ok,
            f"{n} samples: modulus {mod_gap:.2e}, assoc {assoc_gap:.2e}, "
            f"inverse {inv_gap:.2e} in {elapsed:.2f}s")
    assert ok
