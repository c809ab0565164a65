"""
Closed-form bounds for the Gaussian BIC

    Y1 = X1 + Z1,   Y2 = sqrt(a) X1 + sqrt(b) X2 + Z2,   Y3 = X2 + Z3

with unit-variance noise and input powers P1, P2. Inner bounds are families
of polytopes over (R1, R2, R3) indexed by the broadcast split alpha and the
interferer split gamma; outer bounds are per-R3 slices over (R1, R2).

Rate expressions accept numpy arrays so sweeps can evaluate whole grids.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from bicrates.config import DEFAULT_GRID, DEFAULT_TOL
from bicrates.errors import PreconditionError, ValidationError
from bicrates.logging_config import get_logger
from bicrates.polyhedra import LE, LinSystem, RatePoint

logger = get_logger('gaussian.bounds')

RATES = ('R1', 'R2', 'R3')
SLICE_RATES = ('R1', 'R2')

INNER_KINDS = ('S1', 'S2', 'S3', 'S4')
OUTER_KINDS = ('O1', 'O1_LOOSE', 'O2', 'O4')
SPECIAL_KINDS = ('A_VSTRONG', 'C_VSTRONG', 'T9_INNERFACE', 'T9_LOWBETA')

EMPTY_SLICE = 'empty-slice'

# below this 1 - a is treated as zero in the O4 bound
UNIT_GAIN_EPS = 1e-12


class Regime(str, Enum):
    A = 'A'
    B = 'B'
    C = 'C'


class GbicParams(BaseModel):
    """Powers and cross gains; all noise variances are one."""

    model_config = ConfigDict(frozen=True, extra='forbid', allow_inf_nan=False)

    P1: float = Field(gt=0)
    P2: float = Field(gt=0)
    a: float = Field(ge=0)
    b: float = Field(ge=0)


class SplitParams(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')

    alpha: float = Field(ge=0, le=1)
    gamma: float = Field(ge=0, le=1)


def _c(x):
    return 0.5 * np.log2(1.0 + x)


def c_of(x: float) -> float:
    """Gaussian capacity C(x) = 0.5 log2(1 + x) in bits."""
    if x < 0:
        raise ValidationError(f"C(x) needs x >= 0, got {x}")
    return float(_c(x))


def _xi(x, r3):
    if x >= 1:
        return r3
    return _c(x * (np.power(2.0, 2.0 * r3) - 1.0))


def xi(x: float, R3: float) -> float:
    """Rate receiver 2 loses to the interferer: C(x(2^(2 R3) - 1)) for x < 1, R3 otherwise."""
    if x < 0 or R3 < 0:
        raise ValidationError(f"xi needs x >= 0 and R3 >= 0, got x={x}, R3={R3}")
    return float(_xi(x, R3))


def regime_classify(p: GbicParams) -> Regime:
    """A: a >= 1 + b P2;  C: a <= 1;  B in between."""
    if p.a >= 1 + p.b * p.P2:
        return Regime.A
    if p.a <= 1:
        return Regime.C
    return Regime.B


INNER_REGIME = {'S1': Regime.A, 'S2': Regime.B, 'S3': Regime.B, 'S4': Regime.C}
OUTER_REGIME = {'O1': Regime.A, 'O1_LOOSE': Regime.A, 'O2': Regime.B, 'O4': Regime.C}


def inner_rows(kind: str, p: GbicParams, alpha, gamma) -> Dict[str, Tuple[Tuple[str, ...], object]]:
    """
    Right-hand sides of inner bound ``kind`` keyed by row label.

    Each entry is ``(rates summed on the left, rhs)``; ``alpha`` and ``gamma``
    may be broadcastable arrays.
    """
    P1, P2, a, b = p.P1, p.P2, p.a, p.b
    al, ga = np.asarray(alpha, dtype=float), np.asarray(gamma, dtype=float)
    abar, gbar = 1.0 - al, 1.0 - ga
    private2 = _c(gbar * P2)
    if kind in ('S1', 'S2'):
        r1 = _c(abar * P1 / (1 + al * P1))
        noise = 1 + b * gbar * P2
        rows = {'rate1': (('R1',), r1), 'rate3': (('R3',), _c(P2) + 0 * al)}
        if kind == 'S1':
            rows['rate2'] = (('R2',), _c(a * al * P1 / noise) + 0 * ga)
            rows['pair23'] = (('R2', 'R3'), _c((a * al * P1 + b * ga * P2) / noise) + private2)
        else:
            rows['pair12_joint'] = (('R1', 'R2'), _c(a * P1 / noise) + 0 * al)
            rows['pair12_split'] = (('R1', 'R2'), r1 + _c(a * al * P1 / noise))
            rows['total_joint'] = (('R1', 'R2', 'R3'), _c((a * P1 + b * ga * P2) / noise) + private2 + 0 * al)
            rows['total_split'] = (('R1', 'R2', 'R3'), r1 + _c((a * al * P1 + b * ga * P2) / noise) + private2)
        return rows
    if kind in ('S3', 'S4'):
        noise = 1 + a * abar * P1 + b * gbar * P2
        r2 = _c(a * al * P1 / noise)
        pair23 = _c((a * al * P1 + b * ga * P2) / noise) + private2
        rows = {'rate2': (('R2',), r2), 'rate3': (('R3',), _c(P2) + 0 * r2)}
        if kind == 'S4':
            rows['rate1'] = (('R1',), _c(abar * P1) + 0 * ga)
            rows['pair23'] = (('R2', 'R3'), pair23)
        else:
            rows['pair12_split'] = (('R1', 'R2'), _c(abar * P1) + r2)
            rows['pair12_single'] = (('R1', 'R2'), _c(P1) + 0 * r2)
            rows['pair23'] = (('R2', 'R3'), pair23)
            rows['total'] = (('R1', 'R2', 'R3'), _c(abar * P1) + pair23)
        return rows
    raise ValidationError(f"unknown inner bound {kind!r}; choose from {', '.join(INNER_KINDS)}")


def _warn_regime(kind: str, expected: Regime, p: GbicParams):
    actual = regime_classify(p)
    if actual != expected:
        logger.warning(f"{kind} belongs to regime {expected.value}, parameters are in regime {actual.value}")


def eval_gauss_inner(kind: str, p: GbicParams, s: SplitParams) -> LinSystem:
    """Inner bound ``kind`` at split ``s`` as a system over (R1, R2, R3)."""
    rows = inner_rows(kind, p, s.alpha, s.gamma)
    _warn_regime(kind, INNER_REGIME[kind], p)
    return LinSystem.build(RATES, [({r: 1 for r in rates}, LE, float(rhs), label)
                                   for label, (rates, rhs) in rows.items()],
                           nonneg=RATES, name=f"{kind}(alpha={s.alpha:g},gamma={s.gamma:g})")


def _o4_bound(p: GbicParams, alpha, r3):
    P1, P2, a, b = p.P1, p.P2, p.a, p.b
    abar = 1.0 - alpha
    if 1 - a < UNIT_GAIN_EPS:
        return _c((alpha * P1 + b * P2) / (1 + abar * P1))
    t = np.power(2.0, 2.0 * _xi(b / (1 - a), r3))
    return _c((a * alpha * P1 + b * P2 + (1 - a) * (1 - t)) / (a + a * abar * P1 + (1 - a) * t))


def outer_rows(kind: str, p: GbicParams, alpha, r3) -> Dict[str, Tuple[Tuple[str, ...], object]]:
    """Right-hand sides of the (R1, R2) slice of outer bound ``kind`` at ``R3 = r3``."""
    P1, P2, a, b = p.P1, p.P2, p.a, p.b
    al = np.asarray(alpha, dtype=float)
    abar = 1.0 - al
    if kind in ('O1', 'O1_LOOSE', 'O2'):
        penalty = _xi(b, r3)
        rows = {'rate1': (('R1',), _c(abar * P1 / (1 + al * P1))),
                'rate2_broadcast': (('R2',), _c(a * al * P1))}
        if kind in ('O1', 'O1_LOOSE'):
            rows['rate2_gaussian_x2'] = (('R2',), _c(a * al * P1 + b * P2) - penalty + 0.5)
        if kind in ('O1', 'O2'):
            rows['rate2_decode_x2'] = (('R2',), _c(a * P1 + b * P2) - penalty + 0 * al)
        return rows
    if kind == 'O4':
        return {'rate1': (('R1',), _c(abar * P1)),
                'rate2_interference': (('R2',), _o4_bound(p, al, r3)),
                'rate2_broadcast': (('R2',), _c(a * al * P1 / (1 + a * abar * P1)))}
    raise ValidationError(f"unknown outer bound {kind!r}; choose from {', '.join(OUTER_KINDS)}")


def eval_gauss_outer(kind: str, p: GbicParams, alpha: float, R3: float, tol: float = DEFAULT_TOL) -> LinSystem:
    """
    Slice of outer bound ``kind`` at fixed ``R3`` as a system over (R1, R2).

    For R3 above C(P2) the slice is empty: the returned system carries the
    ``empty-slice`` flag and an infeasible constant row.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValidationError(f"alpha must lie in [0, 1], got {alpha}")
    if R3 < 0:
        raise ValidationError(f"R3 must be non-negative, got {R3}")
    name = f"{kind}(alpha={alpha:g},R3={R3:g})"
    if kind not in OUTER_KINDS:
        raise ValidationError(f"unknown outer bound {kind!r}; choose from {', '.join(OUTER_KINDS)}")
    if R3 > _c(p.P2) + tol:
        logger.info(f"{name}: R3 exceeds C(P2)={_c(p.P2):.6f}, slice is empty")
        return LinSystem.build(SLICE_RATES, [({}, LE, -1, EMPTY_SLICE)], nonneg=SLICE_RATES, name=name,
                               flags=[EMPTY_SLICE])
    _warn_regime(kind, OUTER_REGIME[kind], p)
    rows = outer_rows(kind, p, alpha, R3)
    return LinSystem.build(SLICE_RATES, [({r: 1 for r in rates}, LE, float(rhs), label)
                                         for label, (rates, rhs) in rows.items()],
                           nonneg=SLICE_RATES, name=name)


@dataclass
class SumRate:
    value: float
    branch: str
    components: Dict[str, float] = field(default_factory=dict)


def _unit_grid(grid: int) -> np.ndarray:
    if grid < 2:
        raise ValidationError(f"grid must have at least 2 points, got {grid}")
    return np.linspace(0.0, 1.0, grid)


def s2_sum_rate(p: GbicParams, alpha, gamma):
    """Largest R1 + R2 + R3 in the S2 polytope at each (alpha, gamma)."""
    rows = inner_rows('S2', p, alpha, gamma)
    r3 = rows['rate3'][1]
    return np.minimum.reduce([r3 + rows['pair12_joint'][1], r3 + rows['pair12_split'][1],
                              rows['total_joint'][1], rows['total_split'][1]])


def s2_max_sum(p: GbicParams, grid: int = DEFAULT_GRID) -> Tuple[float, float, float]:
    """Grid search for the best S2 sum rate; returns (value, alpha, gamma)."""
    g = _unit_grid(grid)
    al, ga = np.meshgrid(g, g, indexing='ij')
    sums = s2_sum_rate(p, al, ga)
    i, j = np.unravel_index(int(np.argmax(sums)), sums.shape)
    return float(sums[i, j]), float(g[i]), float(g[j])


def box_sum_rate(kind: str, p: GbicParams, alpha, gamma):
    """Largest R1 + R2 + R3 at each split for the single-R1-row bounds S1 and S4."""
    if kind not in ('S1', 'S4'):
        raise ValidationError(f"box_sum_rate handles S1 and S4, got {kind!r}")
    rows = inner_rows(kind, p, alpha, gamma)
    return rows['rate1'][1] + np.minimum(rows['rate2'][1] + rows['rate3'][1], rows['pair23'][1])


def sum_rate(p: GbicParams, grid: int = DEFAULT_GRID) -> SumRate:
    """Largest achievable sum rate of the inner bound for the parameters' regime."""
    regime = regime_classify(p)
    P1, P2, a, b = p.P1, p.P2, p.a, p.b
    if regime is Regime.A:
        if b < 1:
            return SumRate(float(_c(a * P1 / (1 + b * P2)) + _c(P2)), 'A:b<1')
        return SumRate(float(min(_c(a * P1 + b * P2), _c(a * P1) + _c(P2))), 'A:b>=1')
    if regime is Regime.B:
        rs1, _, _ = s2_max_sum(p, grid)
        rs2 = float(_c(P1) + _c(P2))
        branch = 'B:Rs1' if rs1 > rs2 else 'B:Rs2'
        return SumRate(max(rs1, rs2), branch, {'Rs1': rs1, 'Rs2': rs2})
    return SumRate(float(_c(P1) + _c(P2)), 'C:sum-capacity-exact')


def _require(ok: bool, violated: str, kind: str, strict: bool):
    if ok:
        return
    if strict:
        raise PreconditionError(f"{kind} needs {violated}", violated)
    logger.warning(f"{kind}: precondition {violated} does not hold; evaluating anyway")


def capacity_special(kind: str, p: GbicParams, alpha: float, beta: float = 1.0,
                     strict: bool = True) -> Union[LinSystem, RatePoint]:
    """
    Capacity results in closed form.

    ``A_VSTRONG`` and ``C_VSTRONG`` return the capacity box at split
    ``alpha``; ``T9_LOWBETA`` and ``T9_INNERFACE`` return a boundary point of
    the capacity region. With ``strict`` a failed precondition raises
    :class:`PreconditionError` naming it; otherwise it is logged.
    """
    if not 0.0 <= alpha <= 1.0 or not 0.0 <= beta <= 1.0:
        raise ValidationError(f"alpha and beta must lie in [0, 1], got {alpha}, {beta}")
    P1, P2, a, b = p.P1, p.P2, p.a, p.b
    abar = 1.0 - alpha
    if kind == 'A_VSTRONG':
        _require(a >= 1 + b * P2, 'a >= 1 + b*P2', kind, strict)
        _require(b >= 1 + a * P1, 'b >= 1 + a*P1', kind, strict)
        bounds = (_c(abar * P1 / (1 + alpha * P1)), _c(a * alpha * P1), _c(P2))
    elif kind == 'C_VSTRONG':
        _require(a <= 1, 'a <= 1', kind, strict)
        _require(b >= 1 + a * P1, 'b >= 1 + a*P1', kind, strict)
        bounds = (_c(abar * P1), _c(a * alpha * P1 / (1 + a * abar * P1)), _c(P2))
    elif kind == 'T9_LOWBETA':
        _require(a <= 1, 'a <= 1', kind, strict)
        _require(beta <= min(1.0, b / (1 + a * P1)), 'beta <= min(1, b/(1 + a*P1))', kind, strict)
        return RatePoint.of(RATES, (_c(abar * P1), _c(a * alpha * P1 / (1 + a * abar * P1)), _c(beta * P2)))
    elif kind == 'T9_INNERFACE':
        _require(a <= 1, 'a <= 1', kind, strict)
        _require(a + b <= 1, 'a + b <= 1', kind, strict)
        return RatePoint.of(RATES, (_c(abar * P1), _c(a * alpha * P1 / (1 + a * abar * P1 + b * P2)), _c(P2)))
    else:
        raise ValidationError(f"unknown capacity result {kind!r}; choose from {', '.join(SPECIAL_KINDS)}")
    labels = ('rate1', 'rate2', 'rate3')
    return LinSystem.build(RATES, [({r: 1}, LE, float(v), label) for r, v, label in zip(RATES, bounds, labels)],
                           nonneg=RATES, name=f"{kind}(alpha={alpha:g})")


def genie_sum_bound(p: GbicParams) -> Optional[float]:
    """Sum-capacity upper bound C(a P1/(1 + b P2)) + C(P2) + 0.5 for weak interference (b < 1)."""
    if p.b >= 1:
        return None
    return float(_c(p.a * p.P1 / (1 + p.b * p.P2)) + _c(p.P2) + 0.5)
