import numpy as np
import pytest

from bicrates.errors import PreconditionError, ValidationError
from bicrates.gaussian.bounds import GbicParams, Regime, c_of, inner_rows, outer_rows
from bicrates.gaussian.curves import (
    FIGURES, boundary_slice, fig4_sweep, figure_data, figure_preset, gap_report, sum_upper_o2,
)

GAP_LIMIT = 0.5 + 1e-6


@pytest.mark.parametrize('beta', [0.1, 0.4, 0.9])
def test_figure3_slices_within_half_bit(gauss_fig3, beta):
    """In regime A with b >= 1 the outer slice is within half a bit of the inner one."""
    curves = boundary_slice(gauss_fig3, beta, grid=101)
    assert curves.regime is Regime.A
    assert (curves.inner, curves.outer) == ('S1', 'O1')
    assert np.all(curves.gap <= GAP_LIMIT)
    assert np.all(curves.gap >= -1e-9)


def test_figure3_endpoints(gauss_fig3):
    """At alpha = 1 both curves reach C(27) - C(2.7); at alpha = 0 R1 is C(6)."""
    curves = boundary_slice(gauss_fig3, 0.9, grid=201)
    assert curves.alpha[-1] == 1.0
    expected = c_of(27) - c_of(2.7)
    assert curves.R2_inner[-1] == pytest.approx(expected, abs=1e-9)
    assert curves.R2_outer[-1] == pytest.approx(expected, abs=1e-9)
    assert curves.R1[0] == pytest.approx(c_of(6), abs=1e-9)
    assert curves.r3 == pytest.approx(c_of(2.7), abs=1e-12)


def test_slice_rows(gauss_fig3):
    """rows() lists (alpha, R1, R2_inner, R2_outer) per grid point."""
    curves = boundary_slice(gauss_fig3, 0.4, grid=11)
    rows = curves.rows()
    assert len(rows) == 11
    assert rows[0][0] == 0.0 and rows[-1][0] == 1.0
    assert all(len(row) == 4 for row in rows)


def test_figure5_low_beta_coincides(gauss_fig5):
    """For beta <= b/(1 + a P1) inner and outer slices coincide."""
    curves = boundary_slice(gauss_fig5, 0.1, grid=101)
    assert curves.regime is Regime.C
    assert np.max(np.abs(curves.gap)) <= 1e-9


def test_figure5_full_interference_face(gauss_fig5):
    """With a + b = 1 the S4 rate at gamma = 0 equals O4 at beta = 1."""
    alpha = np.linspace(0, 1, 51)
    r3 = c_of(8)
    inner = inner_rows('S4', gauss_fig5, alpha, 0.0)
    s4 = np.minimum(inner['rate2'][1], inner['pair23'][1] - r3)
    outer = outer_rows('O4', gauss_fig5, alpha, r3)
    o4 = np.minimum(outer['rate2_interference'][1], outer['rate2_broadcast'][1])
    assert np.max(np.abs(s4 - o4)) <= 1e-9
    curves = boundary_slice(gauss_fig5, 1.0, grid=51)
    assert np.max(np.abs(curves.gap)) <= 1e-9


def test_regime_b_slice():
    """Regime B reads the S2/S3 hull at the O2 rates and stays below O2."""
    p = GbicParams(P1=6, P2=3, a=2, b=3)
    curves = boundary_slice(p, 0.5, grid=41)
    assert curves.regime is Regime.B
    assert curves.outer == 'O2'
    assert np.all(curves.gap >= -1e-9)
    assert np.all(np.isfinite(curves.R2_inner))
    assert np.all(curves.R2_inner >= 0)


def test_slice_arguments(gauss_fig3):
    """beta is a fraction and the grid has at least two points."""
    with pytest.raises(ValidationError):
        boundary_slice(gauss_fig3, 1.5)
    with pytest.raises(ValidationError):
        boundary_slice(gauss_fig3, 0.5, grid=1)


def test_gap_report_regime_a(gauss_fig3):
    """Figure 3 parameters are certified within half a bit, sum and region."""
    report = gap_report(gauss_fig3, grid=41, beta_points=5)
    assert report.case == 'strong'
    assert report.sum_rate == pytest.approx(c_of(27), abs=1e-9)
    assert report.sum_gap <= GAP_LIMIT
    assert report.max_region_gap <= GAP_LIMIT
    assert report.max_region_gap_loose <= GAP_LIMIT
    assert report.certified
    assert set(report.worst) == {'alpha', 'beta'}
    assert report.report()['CERTIFIED'] is True


def test_gap_report_weak_interference():
    """b < 1 in regime A uses the genie bound for the sum gap."""
    report = gap_report(GbicParams(P1=6, P2=3, a=4, b=0.5), grid=41)
    assert report.case == 'weak'
    assert report.max_region_gap is None
    assert report.sum_gap <= GAP_LIMIT
    assert report.report()['MAX_REGION_GAP'] == '-'


@pytest.mark.parametrize('params', [dict(P1=6, P2=3, a=4, b=30), dict(P1=10, P2=8, a=0.5, b=10)])
def test_gap_report_very_strong(params):
    """Very strong interference closes the gap completely."""
    report = gap_report(GbicParams(**params), grid=41)
    assert report.case == 'very-strong'
    assert report.max_region_gap == pytest.approx(0.0, abs=1e-9)
    assert report.sum_gap == pytest.approx(0.0, abs=1e-9)


def test_gap_report_refuses_regime_c(gauss_fig5):
    """No certificate is claimed outside its preconditions."""
    with pytest.raises(PreconditionError):
        gap_report(gauss_fig5, grid=21)


def test_figure4_sweep():
    """Rs2 is C(6) + C(3) everywhere, Rs never exceeds Ro, and both candidates win somewhere."""
    rows = fig4_sweep(6, 3, 3, grid=41, a_points=21)
    assert len(rows) == 21
    assert all(1 < a < 10 for a, *_ in rows)
    winners = set()
    for a, rs1, rs2, rs, ro in rows:
        assert rs2 == pytest.approx(c_of(6) + c_of(3), abs=1e-9)
        assert rs == max(rs1, rs2)
        assert rs <= ro + 1e-9
        winners.add('Rs1' if rs1 > rs2 else 'Rs2')
    assert winners == {'Rs1', 'Rs2'}


def test_sum_upper_o2_at_least_rs2():
    """Ro at alpha = 0 already reaches C(P1) + C(P2)."""
    p = GbicParams(P1=6, P2=3, a=2, b=3)
    assert sum_upper_o2(p, grid=41) >= c_of(6) + c_of(3) - 1e-9


def test_figure_presets():
    """The caption parameters of the three figures."""
    assert figure_preset(3).params() == GbicParams(P1=6, P2=3, a=4, b=1)
    assert figure_preset(5).betas == (0.1, 0.3, 0.6, 1.0)
    assert FIGURES[4].a_range == (1.0, 10.0)
    with pytest.raises(ValidationError):
        figure_preset(4).params()
    with pytest.raises(ValidationError):
        figure_preset(6)


def test_figure_data_keys():
    """Slice figures are keyed by beta."""
    data = figure_data(3, grid=21)
    assert sorted(data) == [0.1, 0.4, 0.9]
    assert all(curves.regime is Regime.A for curves in data.values())


def draw_params(rng):
    regime = rng.integers(3)
    P1, P2 = rng.uniform(0.5, 20, size=2)
    b = rng.uniform(0, 3)
    if regime == 0:
        a = 1 + b * P2 + rng.uniform(0, 5)
    elif regime == 1:
        a = rng.uniform(1, 1 + b * P2)
    else:
        a = rng.uniform(0, 1)
    return GbicParams(P1=P1, P2=P2, a=a, b=b)


def sanity_sweep(draws, grid):
    rng = np.random.default_rng(2024)
    for _ in range(draws):
        p = draw_params(rng)
        for beta in (0.0, 0.5, 1.0):
            curves = boundary_slice(p, beta, grid=grid)
            worst = float(np.min(curves.gap))
            assert worst >= -1e-9, (p, beta, worst)
            order = np.argsort(curves.R1)
            rise = float(np.max(np.diff(curves.R2_inner[order])))
            assert rise <= 1e-9, (p, beta, rise)


def test_inner_inside_outer_sweep():
    """Random parameters in every regime keep the inner slice under the outer one and falling in R1."""
    sanity_sweep(20, grid=21)


@pytest.mark.slow
def test_inner_inside_outer_sweep_full():
    """The same sanity check over 1000 draws."""
    sanity_sweep(1000, grid=41)
