"""
Boundary slices, gap certificates and the figure presets.

A slice fixes R3 = C(beta P2) and traces R2 against R1 for the inner and the
outer bound of the parameters' regime, both parameterized by the same grid
of broadcast splits alpha.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from bicrates.config import DEFAULT_GRID, GAP_LIMIT, GAP_SLACK
from bicrates.errors import PreconditionError, ValidationError
from bicrates.gaussian.bounds import (
    GbicParams, Regime, SumRate, _c, _unit_grid, _xi, box_sum_rate, genie_sum_bound, inner_rows,
    outer_rows, regime_classify, s2_max_sum, sum_rate,
)
from bicrates.logging_config import get_logger
from bicrates.polyhedra import frontier_value, union_hull_2d

logger = get_logger('gaussian.curves')

SLICE_HEADER = ('alpha', 'R1', 'R2_inner', 'R2_outer')
SWEEP_HEADER = ('a', 'Rs1', 'Rs2', 'Rs', 'Ro')

PAIRS = {Regime.A: ('S1', 'O1'), Regime.B: ('S2+S3', 'O2'), Regime.C: ('S4', 'O4')}


def _slice_box(rows, r3, tol: float = 1e-12):
    """
    Reduce inner-bound rows at R3 = r3 to ``R1 <= u1, R2 <= u2, R1 + R2 <= s``.

    Returns ``(u1, u2, s, feasible)``, broadcast over the split grid.
    """
    u1 = u2 = s = np.inf
    feasible = True
    for rates, rhs in rows.values():
        bound = rhs - r3 if 'R3' in rates else rhs
        if rates == ('R3',):
            feasible = feasible & (rhs >= r3 - tol)
        elif 'R1' in rates and 'R2' in rates:
            s = np.minimum(s, bound)
        elif 'R1' in rates:
            u1 = np.minimum(u1, bound)
        else:
            u2 = np.minimum(u2, bound)
    feasible = feasible & (u1 >= -tol) & (u2 >= -tol) & (s >= -tol)
    return u1, u2, s, feasible


def _box_corners(u1, u2, s):
    """The two Pareto corners of ``{0 <= R1 <= u1, 0 <= R2 <= u2, R1 + R2 <= s}``."""
    first = (np.minimum(u1, np.maximum(0.0, s - u2)), np.minimum(u2, s))
    r1 = np.minimum(u1, s)
    second = (r1, np.minimum(u2, np.maximum(0.0, s - r1)))
    return first, second


@dataclass
class SliceCurves:
    regime: Regime
    beta: float
    r3: float
    inner: str
    outer: str
    alpha: np.ndarray
    R1: np.ndarray
    R2_inner: np.ndarray
    R2_outer: np.ndarray

    @property
    def gap(self) -> np.ndarray:
        return self.R2_outer - self.R2_inner

    def rows(self) -> List[Tuple[float, float, float, float]]:
        return [tuple(float(v) for v in row) for row in zip(self.alpha, self.R1, self.R2_inner, self.R2_outer)]


def _matched_inner(kind: str, p: GbicParams, g: np.ndarray, r3: float):
    """R1(alpha) and the best R2 over the gamma grid, for the single-R1-row bounds."""
    rows = inner_rows(kind, p, g[:, None], g[None, :])
    u1, u2, s, feasible = _slice_box(rows, r3)
    r1 = np.broadcast_to(u1, feasible.shape)[:, 0]
    cand = np.minimum(u2, s - r1[:, None])
    cand = np.where(feasible & (cand >= 0), cand, -np.inf)
    best = cand.max(axis=1)
    if np.any(np.isinf(best)):
        logger.warning(f"{kind}: no feasible gamma for {int(np.isinf(best).sum())} alphas at R3={r3:.6f}")
        best = np.where(np.isinf(best), 0.0, best)
    # larger alpha trades R1 for R2: keep R2 monotone along the curve
    return r1, np.maximum.accumulate(best)


def _hull_inner(p: GbicParams, g: np.ndarray, r3: float):
    """Per-slice convex hull of the S2 and S3 families."""
    al, ga = np.meshgrid(g, g, indexing='ij')
    points = []
    for kind in ('S2', 'S3'):
        u1, u2, s, feasible = _slice_box(inner_rows(kind, p, al, ga), r3)
        mask = np.broadcast_to(feasible, al.shape)
        for x, y in _box_corners(*(np.broadcast_to(v, al.shape) for v in (u1, u2, s))):
            points.extend(zip(x[mask].tolist(), y[mask].tolist()))
    return union_hull_2d([points])


def _outer_r2(kind: str, p: GbicParams, g: np.ndarray, r3):
    rows = outer_rows(kind, p, g, r3)
    r1 = rows.pop('rate1')[1]
    return r1, np.minimum.reduce([np.broadcast_to(rhs, np.broadcast(g, r3).shape) for _, rhs in rows.values()])


def boundary_slice(p: GbicParams, beta: float, grid: int = DEFAULT_GRID, outer: Optional[str] = None) -> SliceCurves:
    """
    Inner and outer R2 against R1 at R3 = C(beta P2).

    Regime A pairs S1 with O1, regime C pairs S4 with O4, both matched by
    alpha. Regime B reads the hull of the S2/S3 slices at O2's R1(alpha).
    ``outer`` overrides the outer bound (``O1_LOOSE`` in regime A).
    """
    if not 0.0 <= beta <= 1.0:
        raise ValidationError(f"beta must lie in [0, 1], got {beta}")
    g = _unit_grid(grid)
    regime = regime_classify(p)
    inner_kind, outer_kind = PAIRS[regime]
    outer_kind = outer or outer_kind
    r3 = float(_c(beta * p.P2))
    r1_outer, r2_outer = _outer_r2(outer_kind, p, g, r3)
    if regime is Regime.B:
        frontier = _hull_inner(p, g, r3)
        r1 = r1_outer
        values = [frontier_value(frontier, x) for x in r1]
        # past the hull's largest R1 nothing is achievable
        r2_inner = np.array([v if v is not None else 0.0 for v in values])
    else:
        r1, r2_inner = _matched_inner(inner_kind, p, g, r3)
    logger.debug(f"slice beta={beta} regime {regime.value}: max gap {float(np.max(r2_outer - r2_inner)):.6f}")
    return SliceCurves(regime, beta, r3, inner_kind, outer_kind, g, np.asarray(r1),
                       np.asarray(r2_inner), np.asarray(r2_outer))


@dataclass
class GapReport:
    regime: Regime
    case: str
    sum_rate: float
    sum_upper: float
    max_region_gap: Optional[float] = None
    max_region_gap_loose: Optional[float] = None
    worst: Dict[str, float] = field(default_factory=dict)

    @property
    def sum_gap(self) -> float:
        return self.sum_upper - self.sum_rate

    @property
    def certified(self) -> bool:
        limit = GAP_LIMIT + GAP_SLACK
        gaps = [self.sum_gap] + [g for g in (self.max_region_gap, self.max_region_gap_loose) if g is not None]
        return all(g <= limit for g in gaps)

    def report(self) -> Dict[str, object]:
        out = {'REGIME': self.regime.value, 'CASE': self.case}
        out['MAX_REGION_GAP'] = '-' if self.max_region_gap is None else self.max_region_gap
        out['MAX_REGION_GAP_LOOSE'] = '-' if self.max_region_gap_loose is None else self.max_region_gap_loose
        out['SUM_RATE'] = self.sum_rate
        out['SUM_UPPER'] = self.sum_upper
        out['SUM_GAP'] = self.sum_gap
        out['CERTIFIED'] = self.certified
        return out


def _very_strong_gap(p: GbicParams, g: np.ndarray, betas: np.ndarray) -> GapReport:
    """Inner bound with the interference fully decoded against the capacity box."""
    kind = 'S1' if p.a > 1 else 'S4'
    if kind == 'S1' and regime_classify(p) is not Regime.A:
        logger.warning("very strong interference with 1 < a < 1 + b*P2: comparing S1 against the regime-A box")
    rows = inner_rows(kind, p, g, 1.0)
    r1 = rows['rate1'][1]
    if kind == 'S1':
        box_r2 = _c(p.a * g * p.P1)
    else:
        box_r2 = _c(p.a * g * p.P1 / (1 + p.a * (1 - g) * p.P1))
    worst, where = 0.0, {}
    for beta in betas:
        r3 = float(_c(beta * p.P2))
        inner = np.minimum(rows['rate2'][1], rows['pair23'][1] - r3)
        gaps = box_r2 - inner
        k = int(np.argmax(gaps))
        if gaps[k] > worst:
            worst, where = float(gaps[k]), {'alpha': float(g[k]), 'beta': float(beta)}
    inner_sum = float(np.max(box_sum_rate(kind, p, g, 1.0)))
    box_sum = float(np.max(r1 + box_r2 + _c(p.P2)))
    return GapReport(regime_classify(p), 'very-strong', inner_sum, box_sum, worst, worst, where)


def _o1_sum_upper(p: GbicParams, g: np.ndarray) -> float:
    """Largest R1 + R2 + R3 over O1 slices on the alpha and R3 grids."""
    r3 = _c(g * p.P2)
    rows = outer_rows('O1', p, g[:, None], r3[None, :])
    r1 = rows.pop('rate1')[1]
    r2 = np.minimum.reduce([np.broadcast_to(rhs, (g.size, g.size)) for _, rhs in rows.values()])
    sums = np.where(r2 >= 0, r1 + r2 + r3[None, :], -np.inf)
    return float(sums.max())


def gap_report(p: GbicParams, grid: int = DEFAULT_GRID, beta_points: int = 11) -> GapReport:
    """
    Half-bit certificates.

    Under very strong interference (b >= 1 + a P1) the inner bound is compared
    with the capacity box. In regime A with 1 <= b the region gap is the
    largest R2_outer - R2_inner over the alpha and beta grids, for both O1 and
    its loose variant; the sum gap is available for every regime-A point.
    Other parameters are refused.
    """
    g = _unit_grid(grid)
    betas = np.linspace(0.0, 1.0, beta_points)
    regime = regime_classify(p)
    if p.b >= 1 + p.a * p.P1:
        report = _very_strong_gap(p, g, betas)
    elif regime is Regime.A:
        rs = sum_rate(p, grid)
        upper = min(_o1_sum_upper(p, g), float(_c(p.a * p.P1 + p.b * p.P2)) + 0.5,
                    float(_c(p.a * p.P1) + _c(p.P2)))
        genie = genie_sum_bound(p)
        if genie is not None:
            upper = min(upper, genie)
            report = GapReport(regime, 'weak', rs.value, upper)
        else:
            report = GapReport(regime, 'strong', rs.value, upper)
            for outer in ('O1', 'O1_LOOSE'):
                worst, where = -np.inf, {}
                for beta in betas:
                    curves = boundary_slice(p, float(beta), grid, outer)
                    k = int(np.argmax(curves.gap))
                    if curves.gap[k] > worst:
                        worst, where = float(curves.gap[k]), {'alpha': float(g[k]), 'beta': float(beta)}
                if outer == 'O1':
                    report.max_region_gap, report.worst = worst, where
                else:
                    report.max_region_gap_loose = worst
    else:
        raise PreconditionError(
            f"gap certificates need regime A or b >= 1 + a*P1; got regime {regime.value} with b={p.b}",
            'a >= 1 + b*P2 or b >= 1 + a*P1')
    log = logger.info if report.certified else logger.warning
    log(f"gap_report ({report.case}): region gap {report.max_region_gap}, sum gap {report.sum_gap:.6f}")
    return report


def sum_upper_o2(p: GbicParams, grid: int = DEFAULT_GRID) -> float:
    """
    Sum-rate upper bound from O2: the best alpha of
    R1(alpha) + min(C(a alpha P1) + C(P2), C(a P1 + b P2) - xi(b) + C(P2)) at R3 = C(P2).
    """
    r3 = float(_c(p.P2))
    cap = float(_c(p.a * p.P1 + p.b * p.P2) - _xi(p.b, r3)) + r3

    def total(alpha):
        return float(_c((1 - alpha) * p.P1 / (1 + alpha * p.P1)) + min(_c(p.a * alpha * p.P1) + r3, cap))

    g = _unit_grid(grid)
    values = [total(x) for x in g]
    k = int(np.argmax(values))
    lo, hi = g[max(k - 1, 0)], g[min(k + 1, g.size - 1)]
    refined = minimize_scalar(lambda x: -total(x), bounds=(lo, hi), method='bounded')
    return max(values[k], -float(refined.fun))


def fig4_sweep(P1: float, P2: float, b: float, grid: int = DEFAULT_GRID,
               a_points: int = DEFAULT_GRID) -> List[Tuple[float, float, float, float, float]]:
    """Rows (a, Rs1, Rs2, Rs, Ro) over the open interval 1 < a < 1 + b P2."""
    a_values = np.linspace(1.0, 1.0 + b * P2, a_points + 2)[1:-1]
    rows = []
    for a in a_values:
        p = GbicParams(P1=P1, P2=P2, a=float(a), b=b)
        rs: SumRate = sum_rate(p, grid)
        rows.append((float(a), rs.components['Rs1'], rs.components['Rs2'], rs.value, sum_upper_o2(p, grid)))
    return rows


@dataclass(frozen=True)
class FigurePreset:
    number: int
    P1: float
    P2: float
    b: float
    a: Optional[float] = None
    betas: Tuple[float, ...] = ()
    a_range: Optional[Tuple[float, float]] = None

    def params(self) -> GbicParams:
        if self.a is None:
            raise ValidationError(f"figure {self.number} sweeps a; it has no single parameter set")
        return GbicParams(P1=self.P1, P2=self.P2, a=self.a, b=self.b)


FIGURES = {
    3: FigurePreset(3, P1=6.0, P2=3.0, a=4.0, b=1.0, betas=(0.1, 0.4, 0.9)),
    4: FigurePreset(4, P1=6.0, P2=3.0, b=3.0, a_range=(1.0, 10.0)),
    5: FigurePreset(5, P1=10.0, P2=8.0, a=0.4, b=0.6, betas=(0.1, 0.3, 0.6, 1.0)),
}


def figure_preset(n: int) -> FigurePreset:
    if n not in FIGURES:
        raise ValidationError(f"no preset for figure {n}; choose from {sorted(FIGURES)}")
    return FIGURES[n]


def figure_data(n: int, grid: int = DEFAULT_GRID):
    """Slices keyed by beta for figures 3 and 5, sweep rows for figure 4."""
    preset = figure_preset(n)
    if preset.a is None:
        return fig4_sweep(preset.P1, preset.P2, preset.b, grid)
    p = preset.params()
    return {beta: boundary_slice(p, beta, grid) for beta in preset.betas}
