"""Shuffle and phase surrogates: preservation and destruction properties."""

import numpy as np
import pytest

from rtekit import DomainError, phase_surrogate, shuffle_surrogate


def ar1(n, phi, seed):
    rng = np.random.default_rng(seed)
    x = np.zeros(n)
    e = rng.standard_normal(n)
    for t in range(1, n):
        x[t] = phi * x[t - 1] + e[t]
    return x


def lag1_autocorr(x):
    x = x - x.mean()
    return float(np.dot(x[1:], x[:-1]) / np.dot(x, x))


# --- shuffle ------------------------------------------------------------------

def test_shuffle_preserves_value_multiset_exactly():
    x = np.array([3.0, 1.0, 2.0, 2.0, -5.0])
    y = shuffle_surrogate(x, seed=1)
    assert np.array_equal(np.sort(y), np.sort(x))
    assert not np.array_equal(y, x)  # actually reordered for this seed


def test_shuffle_preserves_moments():
    x = ar1(5000, 0.6, 2)
    y = shuffle_surrogate(x, seed=3)
    assert abs(x.mean() - y.mean()) < 1e-12
    assert abs(x.var() - y.var()) < 1e-12


def test_shuffle_destroys_autocorrelation():
    acs = []
    for s in range(20):
        x = ar1(10000, 0.9, 100 + s)
        acs.append(abs(lag1_autocorr(shuffle_surrogate(x, seed=s))))
    assert np.median(acs) < 0.05
    assert lag1_autocorr(ar1(10000, 0.9, 100)) > 0.85  # input really is sticky


def test_shuffle_determinism_and_seed_sensitivity():
    x = np.arange(100.0)
    assert np.array_equal(shuffle_surrogate(x, 7), shuffle_surrogate(x, 7))
    assert not np.array_equal(shuffle_surrogate(x, 7), shuffle_surrogate(x, 8))


def test_shuffle_multicolumn_permutes_rows():
    x = np.column_stack([np.arange(50.0), np.arange(50.0) * 2.0])
    y = shuffle_surrogate(x, seed=4)
    assert np.all(y[:, 1] == 2.0 * y[:, 0])  # rows move as units
    assert np.array_equal(np.sort(y[:, 0]), x[:, 0])


def test_shuffle_empty_input():
    with pytest.raises(DomainError):
        shuffle_surrogate(np.array([]), seed=0)


# --- phase randomization --------------------------------------------------------

@pytest.mark.parametrize("n", [256, 1001])  # even and odd lengths
def test_phase_preserves_periodogram(n):
    x = ar1(n, 0.7, 11)
    y = phase_surrogate(x, seed=11)
    px = np.abs(np.fft.rfft(x)) ** 2
    py = np.abs(np.fft.rfft(y)) ** 2
    scale = np.maximum(px, 1e-30)
    assert np.max(np.abs(px - py) / scale) < 1e-9


def test_phase_output_is_real_and_deterministic():
    x = ar1(500, 0.5, 12)
    y1 = phase_surrogate(x, seed=5)
    y2 = phase_surrogate(x, seed=5)
    assert y1.dtype == np.float64
    assert np.array_equal(y1, y2)
    assert not np.array_equal(phase_surrogate(x, seed=6), y1)


def test_phase_sinusoid_becomes_shifted_sinusoid():
    t = np.arange(400)
    x = np.sin(2 * np.pi * 10 * t / 400)
    y = phase_surrogate(x, seed=13)
    # single active Fourier bin: output must fit A*sin + B*cos exactly
    basis = np.column_stack([np.sin(2 * np.pi * 10 * t / 400),
                             np.cos(2 * np.pi * 10 * t / 400)])
    coef, *_ = np.linalg.lstsq(basis, y, rcond=None)
    assert np.max(np.abs(y - basis @ coef)) < 1e-8
    assert np.hypot(*coef) == pytest.approx(1.0, abs=1e-8)  # amplitude kept


def test_phase_surrogate_uncorrelated_with_input():
    # cross-correlation is O(1/sqrt(N)) at every moderate lag; the shared
    # periodogram doubles the null variance, hence the 5/sqrt(N) band
    n = 10000
    maxima = []
    for s in range(20):
        x = ar1(n, 0.3, 300 + s)
        y = phase_surrogate(x, seed=s)
        xa = (x - x.mean()) / x.std()
        ya = (y - y.mean()) / y.std()
        cs = [np.dot(xa[k:], ya[:n - k]) / (n - k) for k in range(21)]
        cs += [np.dot(ya[k:], xa[:n - k]) / (n - k) for k in range(1, 21)]
        maxima.append(np.max(np.abs(cs)))
    assert np.median(maxima) < 5.0 / np.sqrt(n)


def test_phase_mean_preserved():
    x = ar1(1000, 0.5, 14) + 3.7
    y = phase_surrogate(x, seed=2)
    assert y.mean() == pytest.approx(x.mean(), abs=1e-9)  # DC bin untouched


def test_phase_multicolumn_independent_columns():
    x = np.column_stack([ar1(512, 0.5, 15), ar1(512, 0.5, 16)])
    y = phase_surrogate(x, seed=9)
    for j in (0, 1):
        px = np.abs(np.fft.rfft(x[:, j])) ** 2
        py = np.abs(np.fft.rfft(y[:, j])) ** 2
        assert np.max(np.abs(px - py) / np.maximum(px, 1e-30)) < 1e-9


def test_phase_length_validation():
    with pytest.raises(DomainError):
        phase_surrogate(np.array([1.0, 2.0, 3.0]), seed=0)
