import math

import pytest

import hopfieldusc as h


def test_version():
    assert h.__version__ == "0.1.0"


def test_polariton_frequencies():
    s = h.polariton_frequencies(h.ModelParams(1.0, 1.0, 0.3, 0.3, 0.09))
    assert s.omega_x() == pytest.approx(1.344030651, abs=1e-8)
    assert s.omega_y() == pytest.approx(0.744030651, abs=1e-8)
    assert s.phase == h.Phase.Normal


def test_trk_product_identity():
    for g in (0.2, 0.8, 2.5):
        s = h.polariton_frequencies(h.ModelParams.resonant_trk(g))
        assert s.omega_x() * s.omega_y() == pytest.approx(1.0, abs=1e-12)


def test_phases_and_errors():
    assert h.polariton_frequencies(h.ModelParams(1, 1, 0.5, 0.5, 0)).phase \
        == h.Phase.Critical
    assert h.polariton_frequencies(h.ModelParams(1, 1, 0.8, 0.8, 0)).phase \
        == h.Phase.Unstable
    with pytest.raises(ValueError):
        h.ModelParams(omega_c=-1.0)
    with pytest.raises(ValueError):
        h.polariton_frequencies(h.ModelParams(1, 1, 1.3, 0.1, 0))  # |lambda2| >= 1


def test_mu_row_sums():
    m = h.mu_coefficients(h.ModelParams.resonant_trk(0.3))
    assert abs(m.row_sum(0) - 1.0) < 1e-12
    for j in (1, 2, 3):
        assert abs(m.row_sum(j)) < 1e-12


def test_field_evolution_commutator():
    f = h.FieldEvolution(h.ModelParams.resonant_trk(0.35))
    for t in (0.0, 1.7, 12.3):
        f1, f2, f3, f4 = f.coeffs(t)
        c = abs(f1) ** 2 - abs(f2) ** 2 + abs(f3) ** 2 - abs(f4) ** 2
        assert c == pytest.approx(1.0, abs=1e-10)


def test_autocorrelation_hermitian():
    p = h.ModelParams.resonant_trk(0.2)
    a = h.autocorrelation(p, h.FockProduct(1, 0), 0.7, 1.3)
    b = h.autocorrelation(p, h.FockProduct(1, 0), 1.3, 0.7)
    assert a == pytest.approx(b.conjugate(), abs=1e-13)


def test_closed_form_spectrum_peaks():
    p = h.ModelParams.resonant_trk(0.35)
    f = h.make_filter(0.05, 200.0, 3.0, 3001)
    s = h.ew_spectrum_closed_10(p, f)
    a = h.vrs_analysis(s)
    assert len(a.peaks) == 2
    wx = h.polariton_frequencies(p).omega_x()
    assert a.peaks[-1].position == pytest.approx(wx, abs=1e-3)
    assert a.asymmetry_ratio > 1.0


def test_quadrature_positive():
    p = h.ModelParams.resonant_trk(0.2)
    f = h.make_filter(0.05, 100.0, 3.0, 301)
    s = h.ew_spectrum_quadrature(p, h.FockProduct(1, 0), f)
    assert min(s.values) >= 0.0


def test_thermometry_identity():
    pt = h.thermo_point(h.ModelParams.resonant_trk(0.3), 0.5)
    assert pt.qfi == pytest.approx(pt.C / 0.25, rel=1e-12)
    assert pt.snr == pytest.approx(0.5 * math.sqrt(pt.qfi), rel=1e-12)


def test_qfi_pole_locus():
    assert h.qfi_pole_locus(1.0, 0.05, 1) == pytest.approx(0.549348022, abs=1e-8)
    with pytest.raises(ArithmeticError):
        h.qfi_critical_d0(1.0, h.qfi_pole_locus(1.0, 0.05, 1), 0.05)


def test_oracle_gaps():
    p = h.ModelParams(1.0, 1.0, 0.3, 0.3, 0.09)
    gaps = h.oracle.lowest_gaps(p, 40)
    s = h.polariton_frequencies(p)
    assert gaps.omega_y == pytest.approx(s.omega_y(), rel=1e-7)
    assert gaps.omega_x == pytest.approx(s.omega_x(), rel=1e-7)


def test_oracle_ladder_thermo():
    p = h.ModelParams(1.0, 1.0, 0.3, 0.3, 0.09)
    lad = h.oracle.ladder_thermo(p, 0.5)
    pt = h.thermo_point(p, 0.5)
    assert lad.Z == pytest.approx(pt.Z, rel=1e-10)
    assert lad.C == pytest.approx(pt.C, rel=1e-10)
