"""
Verification harnesses: dominating-input constructions, the equivalence of the
superposition regions with their reduced forms, and time-sharing closure.

Failures are findings, returned in the reports rather than raised.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from scipy.optimize import linprog

from bicrates.config import DEFAULT_TOL
from bicrates.dmbic.channel import DmBicChannel, SimpleInput, TimeSharedInput
from bicrates.dmbic.dexp import dexp_points
from bicrates.dmbic.regions import RATES, eval_dm_region
from bicrates.errors import ValidationError
from bicrates.logging_config import get_logger
from bicrates.polyhedra import RatePoint, contains, enumerate_vertices, pareto_filter

logger = get_logger('dmbic.verify')

CONSTRUCTIONS = ('U1phi', 'U2phi', 'U1phiU2phi', 'U1eqX1_U2phi')


def _collapse(p_u: np.ndarray, p_x: np.ndarray):
    """Point mass on the first auxiliary symbol; every column becomes the X marginal."""
    marginal = p_x @ p_u
    point = np.zeros_like(p_u)
    point[0] = 1.0
    return point, np.repeat(marginal[:, None], p_u.shape[0], axis=1)


def derive_dominating_input(construction: str, inp: SimpleInput) -> SimpleInput:
    """
    Modify ``inp`` as the equivalence argument prescribes.

    ``U1phi``/``U2phi`` collapse the auxiliary to a constant (keeping the
    input marginal), ``U1phiU2phi`` collapses both, and ``U1eqX1_U2phi``
    sets U1 = X1 and collapses U2. All other factors are unchanged.
    """
    if construction not in CONSTRUCTIONS:
        raise ValidationError(f"unknown construction {construction!r}; choose from {', '.join(CONSTRUCTIONS)}")
    pU1, pX1, pU2, pX2 = inp.pU1, inp.pX1, inp.pU2, inp.pX2
    if construction in ('U1phi', 'U1phiU2phi'):
        pU1, pX1 = _collapse(pU1, pX1)
    if construction in ('U2phi', 'U1phiU2phi', 'U1eqX1_U2phi'):
        pU2, pX2 = _collapse(pU2, pX2)
    if construction == 'U1eqX1_U2phi':
        pU1 = pX1 @ pU1
        pX1 = np.eye(pX1.shape[0])
    return SimpleInput(pU1=pU1, pX1=pX1, pU2=pU2, pX2=pX2)


@dataclass
class PointCheck:
    input_index: int
    label: str
    point: RatePoint
    passed: bool
    witness: str = ''


@dataclass
class EquivalenceReport:
    i: int
    checks: List[PointCheck] = field(default_factory=list)

    @property
    def failures(self) -> List[PointCheck]:
        return [c for c in self.checks if not c.passed]

    @property
    def ok(self) -> bool:
        return not self.failures


def _dominated_by_hull(point: RatePoint, candidates: Sequence[RatePoint], tol: float):
    """
    Weights of a convex combination of ``candidates`` that dominates ``point``,
    or None when no such combination exists.
    """
    C = np.array([c.values for c in candidates]).T
    target = np.array(point.values) - tol
    k = C.shape[1]
    res = linprog(np.zeros(k), A_ub=-C, b_ub=-target, A_eq=np.ones((1, k)), b_eq=[1.0],
                  bounds=[(0, None)] * k, method='highs')
    return res.x if res.status == 0 else None


def verify_equivalence(i: int, ch: DmBicChannel, inputs: Sequence[SimpleInput],
                       tol: float = DEFAULT_TOL) -> EquivalenceReport:
    """
    Check that every DExP of the R_i region at each input is dominated by the
    convex hull of the reduced region's DExPs at that input and its four
    dominating constructions.
    """
    if i not in (1, 2):
        raise ValidationError(f"i must be 1 or 2, got {i}")
    full, reduced = ('L5', 'L6') if i == 1 else ('L3', 'L4')
    report = EquivalenceReport(i)
    for index, inp in enumerate(inputs):
        labelled = []
        for name in ('P',) + CONSTRUCTIONS:
            law = inp if name == 'P' else derive_dominating_input(name, inp)
            labelled.extend((f"{label}@{name}", p) for label, p in dexp_points(reduced, ch, law).items())
        candidates = [p for _, p in labelled]
        for label, point in dexp_points(full, ch, inp).items():
            single = next((name for name, c in labelled
                           if all(a >= b - tol for a, b in zip(c.values, point.values))), None)
            if single is not None:
                report.checks.append(PointCheck(index, label, point, True, single))
                continue
            weights = _dominated_by_hull(point, candidates, tol)
            if weights is None:
                logger.warning(f"input {index}: point {label} {point} not dominated")
                report.checks.append(PointCheck(index, label, point, False))
                continue
            mix = ' + '.join(f"{w:.4f}*{name}" for w, (name, _) in zip(weights, labelled) if w > 1e-12)
            report.checks.append(PointCheck(index, label, point, True, mix))
    logger.info(f"verify_equivalence(i={i}): {len(report.checks)} points, {len(report.failures)} failures")
    return report


def merge_inputs(inA: SimpleInput, inB: SimpleInput, lam: float) -> TimeSharedInput:
    """Time-share ``inA`` (weight 1-lam) and ``inB`` (weight lam) through Q."""
    if not 0.0 <= lam <= 1.0:
        raise ValidationError(f"lambda must lie in [0, 1], got {lam}")
    if inA.pX1.shape[0] != inB.pX1.shape[0] or inA.pX2.shape[0] != inB.pX2.shape[0]:
        raise ValidationError("time-shared inputs must share the channel input alphabets")

    def stack(tables, n_aux):
        aux = np.zeros((n_aux, 2))
        cond = np.zeros((tables[0][1].shape[0], n_aux, 2))
        for q, (p_u, p_x) in enumerate(tables):
            aux[:p_u.shape[0], q] = p_u
            cond[:, :, q] = 1.0 / p_x.shape[0]
            cond[:, :p_u.shape[0], q] = p_x
        return aux, cond

    n_u1 = max(inA.pU1.shape[0], inB.pU1.shape[0])
    n_u2 = max(inA.pU2.shape[0], inB.pU2.shape[0])
    pU1, pX1 = stack([(inA.pU1, inA.pX1), (inB.pU1, inB.pX1)], n_u1)
    pU2, pX2 = stack([(inA.pU2, inA.pX2), (inB.pU2, inB.pX2)], n_u2)
    return TimeSharedInput(pQ=np.array([1.0 - lam, lam]), pU1=pU1, pX1=pX1, pU2=pU2, pX2=pX2)


@dataclass
class TimeSharingReport:
    i: int
    lam: float
    checked: int
    outside: List[RatePoint] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.outside


def _dexps(kind, ch, inp) -> List[RatePoint]:
    return pareto_filter(enumerate_vertices(eval_dm_region(kind, ch, inp)))


def verify_timesharing_closure(i: int, ch: DmBicChannel, inA: SimpleInput, inB: SimpleInput, lam: float,
                               tol: float = DEFAULT_TOL) -> TimeSharingReport:
    """
    Check that (1-lam)*a + lam*b lies in the R_i region of the merged law for
    every pair of DExPs a of inA and b of inB.
    """
    if i not in (1, 2):
        raise ValidationError(f"i must be 1 or 2, got {i}")
    kind = f"R{i}"
    merged = eval_dm_region(kind, ch, merge_inputs(inA, inB, lam))
    report = TimeSharingReport(i, lam, 0)
    for a in _dexps(kind, ch, inA):
        for b in _dexps(kind, ch, inB):
            mix = RatePoint.of(RATES, [(1 - lam) * x + lam * y for x, y in zip(a.values, b.values)])
            report.checked += 1
            if not contains(merged, mix, tol):
                report.outside.append(mix)
    if report.outside:
        logger.warning(f"time-sharing closure: {len(report.outside)} of {report.checked} points outside")
    return report
