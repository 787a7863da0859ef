"""Analytic families: recurrence values, closed forms, envelopes, descriptors."""

import math

import numpy as np
import pytest

from quft import (EnvelopeFit, Gaussian, Grid2D, HermiteGauss, I, ONE,
                  PolyGaussian, Quaternion, SpectrumEnvelope, eval_point,
                  evaluate, exact_qft, format_signal, hermite_phi,
                  parse_signal, qft_fast, read_field, sample, sample_spectrum,
                  verify_envelope, write_field)

PI = math.pi

# Values of the weighted-derivative family at chosen abscissae, frozen from a
# one-off symbolic differentiation of the defining k-th derivative form
# (22 significant digits, more than binary64 resolves).
#   order k -> {x: phi_k(x)}
PHI_TABLE = {
    0: {0.0: 1.0, 0.5: 0.4559381277659962367659,
        -0.75: 0.1708198361529299969524, 1.625: 0.0002495707537311938744808},
    1: {0.0: 0.0, 0.5: 2.864743745362276611126,
        -0.75: -1.609939027036371141622, 1.625: 0.005096322702073110014366},
    2: {0.0: -6.283185307179586476925, 0.5: 6.135114159485160904685,
        -0.75: 6.513366245406530547760, 1.625: 0.05046625308081067031016},
    3: {0.0: 0.0, 0.5: 0.8495425084522837183460,
        -0.75: -13.71864671995560661186, 1.625: 0.3221654615730281333164},
    4: {0.0: 19.73920880217871723767, 0.5: -17.93957132064033093019,
        -0.75: 11.86145626774579473246, 1.625: 1.486138641959180706455},
    5: {0.0: 0.0, 0.5: -24.67866339056227499496,
        -0.75: 12.12040147910892005050, 1.625: 5.259804793878784388474},
    6: {0.0: -41.34170224039976023397, 0.5: 11.72911444358059869268,
        -0.75: -43.88125803708158773407, 1.625: 14.78861628154988008251},
}


def test_phi_against_symbolic_table():
    for k, table in PHI_TABLE.items():
        for x, want in table.items():
            got = float(hermite_phi(k, x))
            assert got == pytest.approx(want, rel=1e-13, abs=1e-16), (k, x)


def test_phi_low_orders_closed_form():
    x = np.linspace(-2.5, 2.5, 41)
    np.testing.assert_allclose(hermite_phi(0, x), np.exp(-PI * x ** 2), rtol=1e-13)
    np.testing.assert_allclose(hermite_phi(1, x), 4 * PI * x * np.exp(-PI * x ** 2),
                               rtol=0, atol=1e-13)
    assert hermite_phi(1, 0.0) == 0.0
    assert hermite_phi(0, 0.0) == 1.0


def test_phi_parity():
    x = np.linspace(0.1, 3.0, 17)
    for k in range(7):
        left = hermite_phi(k, -x)
        right = (-1.0) ** k * hermite_phi(k, x)
        np.testing.assert_allclose(left, right, rtol=0, atol=1e-12)


# ---------------------------------------------------------------------------
# evaluation and sampling


def test_gaussian_eval_origin_carries_amplitude():
    s = Gaussian(q=I, a1=PI, a2=PI)
    assert eval_point(s, 0.0, 0.0) == Quaternion(0, 1, 0, 0)


def test_gaussian_sample_real_max_at_origin():
    s = Gaussian(q=ONE, a1=PI, a2=PI)
    g = Grid2D(32, 32, 0.25, 0.25)
    f = sample(s, g)
    assert f.values[16, 16, 0] == 1.0
    assert np.abs(f.values[..., 1:]).max() == 0.0
    assert f.values[..., 0].max() == 1.0


def test_hermite_sample_parity():
    # order (1, 0): odd along axis 1, even along axis 2
    g = Grid2D(16, 16, 0.3, 0.3)
    f = sample(HermiteGauss(k=1, l=0, gamma=1.0), g)
    v = f.values[..., 0]
    idx = (16 - np.arange(16)) % 16
    flipped1 = v[idx, :]
    np.testing.assert_allclose(flipped1[1:, :], -v[1:, :], rtol=0, atol=1e-15)
    flipped2 = v[:, idx]
    np.testing.assert_allclose(flipped2[:, 1:], v[:, 1:], rtol=0, atol=1e-15)


def test_sample_write_read_round_trip():
    s = HermiteGauss(k=2, l=1, gamma=1.25)
    f = sample(s, Grid2D(16, 16, 0.25, 0.25))
    f2 = read_field(write_field(f))
    np.testing.assert_array_equal(f2.values, f.values)


def test_polygaussian_eval():
    s = PolyGaussian(gamma=0.5, coeffs={(2, 0): 1.0, (0, 1): -3.0})
    v = evaluate(s, 2.0, 1.0)
    want = (4.0 - 3.0) * math.exp(-PI * 0.5 * 5.0)
    assert v[0] == pytest.approx(want, rel=1e-15)
    assert tuple(v[1:]) == (0.0, 0.0, 0.0)


def test_signal_validation():
    with pytest.raises(ValueError):
        Gaussian(q=ONE, a1=-1.0, a2=1.0)
    with pytest.raises(ValueError):
        HermiteGauss(k=-1, l=0, gamma=1.0)
    with pytest.raises(ValueError):
        PolyGaussian(gamma=1.0, coeffs={(0, 0): 0.0})


# ---------------------------------------------------------------------------
# closed-form transforms


def test_exact_qft_gaussian_matched():
    out = exact_qft(Gaussian(q=ONE, a1=PI, a2=PI))
    assert isinstance(out, Gaussian)
    assert out.a1 == pytest.approx(PI, rel=1e-15)
    assert out.a2 == pytest.approx(PI, rel=1e-15)
    assert out.q.q0 == pytest.approx(1.0, rel=1e-15)


def test_exact_qft_isotropic_prefactor():
    # rate a on both axes: amplitude pi/a, spectral rate pi^2/a
    a = 2.2
    q = Quaternion(0.5, -1.0, 2.0, 0.25)
    out = exact_qft(Gaussian(q=q, a1=a, a2=a))
    assert out.q.q0 == pytest.approx(q.q0 * PI / a, rel=1e-15)
    assert out.q.q3 == pytest.approx(q.q3 * PI / a, rel=1e-15)
    assert out.a1 == pytest.approx(PI ** 2 / a, rel=1e-15)


def test_exact_qft_applied_twice_restores_rates():
    s = Gaussian(q=ONE, a1=1.25, a2=5.0)
    twice = exact_qft(exact_qft(s))
    assert twice.a1 == pytest.approx(s.a1, rel=1e-15)
    assert twice.a2 == pytest.approx(s.a2, rel=1e-15)


def test_exact_qft_envelopes():
    env = exact_qft(PolyGaussian(gamma=1.0, coeffs={(2, 1): 1.0}))
    assert env == SpectrumEnvelope(degree=3, rate=PI)
    env = exact_qft(HermiteGauss(k=1, l=2, gamma=1.0))
    assert env.degree == 3
    assert env.rate == pytest.approx(PI / 2.0, rel=1e-15)


def test_discrete_spectrum_matches_closed_form_across_rates():
    grid = Grid2D(128, 128, 1 / 16, 1 / 16)
    for a1, a2 in [(PI / 2, PI / 2), (PI, 2 * PI), (1.5, 4.0)]:
        s = Gaussian(q=Quaternion(0.3, 1.0, -0.7, 0.2), a1=a1, a2=a2)
        numeric = qft_fast(sample(s, grid))
        closed = sample_spectrum(s, grid)
        assert np.abs(numeric.values - closed.values).max() < 1e-6


def test_sample_spectrum_rejects_structural_families():
    with pytest.raises(TypeError):
        sample_spectrum(HermiteGauss(k=0, l=0, gamma=1.0), Grid2D(8, 8, 0.5, 0.5))


# ---------------------------------------------------------------------------
# envelope verification


def fit_for(signal) -> tuple[EnvelopeFit, SpectrumEnvelope]:
    grid = Grid2D(128, 128, 1 / 16, 1 / 16)
    spectrum = qft_fast(sample(signal, grid))
    env = exact_qft(signal)
    return verify_envelope(spectrum, env.rate, env.degree), env


def test_envelope_gaussian_degree_zero():
    grid = Grid2D(128, 128, 1 / 16, 1 / 16)
    s = Gaussian(q=ONE, a1=PI, a2=PI)
    fit = verify_envelope(qft_fast(sample(s, grid)), PI, 0)
    assert abs(fit.rate - PI) / PI < 0.01
    assert fit.residual < 1e-6


def test_envelope_hermite_composite_rate():
    fit, env = fit_for(HermiteGauss(k=0, l=0, gamma=1.0))
    assert env.rate == pytest.approx(PI / 2, rel=1e-15)
    assert abs(fit.rate - env.rate) / env.rate < 0.02


def test_envelope_polygaussian_with_zero_lines():
    # the spectrum of x1^2 e^{-pi |x|^2} vanishes along two lines; the fit
    # must still land within 2 percent
    fit, env = fit_for(PolyGaussian(gamma=1.0, coeffs={(2, 0): 1.0}))
    assert abs(fit.rate - PI) / PI < 0.02
    spectrum = qft_fast(sample(PolyGaussian(gamma=1.0, coeffs={(2, 0): 1.0}),
                               Grid2D(128, 128, 1 / 16, 1 / 16)))
    assert (spectrum.modulus() < 1e-10).any()


def test_envelope_underflow_guard():
    # tiny grid: far too few usable nodes for a shell fit
    grid = Grid2D(8, 8, 0.5, 0.5)
    s = Gaussian(q=ONE, a1=PI, a2=PI)
    with pytest.raises(ValueError, match="spectrum underflow"):
        verify_envelope(qft_fast(sample(s, grid)), PI, 0)


# ---------------------------------------------------------------------------
# descriptor text


@pytest.mark.parametrize("signal", [
    Gaussian(q=Quaternion(1, -2, 0.5, 0.125), a1=1.75, a2=PI),
    HermiteGauss(k=3, l=0, gamma=2.5),
    PolyGaussian(gamma=0.75, coeffs={(0, 0): 1.0, (1, 1): -2.5, (0, 2): 0.5}),
])
def test_descriptor_round_trip(signal):
    assert parse_signal(format_signal(signal)) == signal


def test_descriptor_errors_name_variant():
    with pytest.raises(ValueError, match="gauss"):
        parse_signal("gauss 1 0 0 0 1 1")
    with pytest.raises(ValueError, match="gaussian"):
        parse_signal("gaussian 1 0 0")
    with pytest.raises(ValueError, match="coefficients"):
        parse_signal("polygauss 1.0 2 1 0")
