"""
Falsifiers for the channel conditions.

Each condition says a gap is non-negative for every input law in a family.
The search minimizes the gap from several starting points; a negative minimum
is a counterexample, otherwise the verdict is only "not falsified".
"""

from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np
from scipy.optimize import minimize
from scipy.special import softmax

from bicrates.config import DEFAULT_SEED, DEFAULT_TOL
from bicrates.dmbic.channel import DmBicChannel, SimpleInput
from bicrates.dmbic.info import joint_from_factored, mutual_info
from bicrates.errors import ValidationError
from bicrates.logging_config import get_logger

logger = get_logger('dmbic.conditions')

VIOLATED = 'violated'
NOT_FALSIFIED = 'not-falsified'

CONDITIONS = ('oblivious', 'cognizant', 'strong', 'very_strong')


@dataclass
class ConditionVerdict:
    kind: str
    status: str
    min_gap: float
    starts: int
    witness: Optional[Dict[str, object]] = None

    @property
    def ok(self) -> bool:
        return self.status == NOT_FALSIFIED

    def report(self) -> Dict[str, object]:
        out = {'CONDITION': self.kind, 'STATUS': self.status, 'MIN_GAP': self.min_gap, 'STARTS': self.starts}
        if self.witness is not None:
            out['MARGIN'] = self.witness['margin']
        return out


def _gap_partial(kind, ch, p_ux, p_x2):
    """Gap of a partial-order condition at p(u1,x1) p(x2)."""
    p_u = p_ux.sum(axis=1)
    p_x_given_u = np.where(p_u[None, :] > 0, (p_ux / np.maximum(p_u, 1e-300)[:, None]).T, 1.0 / p_ux.shape[1])
    inp = SimpleInput(pU1=p_u / p_u.sum(), pX1=p_x_given_u / p_x_given_u.sum(axis=0, keepdims=True),
                      pU2=np.ones(1), pX2=p_x2[:, None])
    joint = joint_from_factored(ch, inp)
    if kind == 'cognizant':
        return mutual_info(joint, ['U1'], ['Y1']) - mutual_info(joint, ['U1'], ['Y2'], ['X2'])
    return mutual_info(joint, ['U1'], ['Y2']) - mutual_info(joint, ['U1'], ['Y1'])


def _gap_interference(kind, ch, p_x1, p_x2):
    inp = SimpleInput(pU1=np.ones(1), pX1=p_x1[:, None], pU2=np.ones(1), pX2=p_x2[:, None])
    joint = joint_from_factored(ch, inp)
    if kind == 'strong':
        lhs = mutual_info(joint, ['X2'], ['Y2'], ['X1'])
    else:
        lhs = mutual_info(joint, ['X2'], ['Y2'])
    return lhs - mutual_info(joint, ['X2'], ['Y3'])


class _Family:
    """Input laws of one condition, parameterized by unconstrained logits."""

    def __init__(self, kind: str, ch: DmBicChannel):
        self.kind = kind
        self.ch = ch
        n1, n2 = ch.sizes['X1'], ch.sizes['X2']
        if kind in ('oblivious', 'cognizant'):
            self.n_u = n1 + 1
            self.shapes = [(self.n_u * n1,), (n2,)]
        else:
            self.shapes = [(n1,), (n2,)]
        self.size = sum(s[0] for s in self.shapes)

    def unpack(self, theta):
        first = self.shapes[0][0]
        return softmax(theta[:first]), softmax(theta[first:])

    def gap(self, theta) -> float:
        p_a, p_x2 = self.unpack(theta)
        if self.kind in ('oblivious', 'cognizant'):
            n1 = self.ch.sizes['X1']
            return _gap_partial(self.kind, self.ch, p_a.reshape(self.n_u, n1), p_x2)
        return _gap_interference(self.kind, self.ch, p_a, p_x2)

    def canonical_start(self):
        # U1 = X1 uniform (or uniform X1), uniform X2
        n1 = self.ch.sizes['X1']
        n2 = self.ch.sizes['X2']
        if self.kind in ('oblivious', 'cognizant'):
            logits = np.full((self.n_u, n1), -30.0)
            logits[np.arange(n1), np.arange(n1)] = 0.0
            return np.concatenate([logits.ravel(), np.zeros(n2)])
        return np.zeros(self.size)

    def witness(self, theta, margin) -> Dict[str, object]:
        p_a, p_x2 = self.unpack(theta)
        key = 'p_u1x1' if self.kind in ('oblivious', 'cognizant') else 'p_x1'
        if key == 'p_u1x1':
            p_a = p_a.reshape(self.n_u, self.ch.sizes['X1'])
        return {key: np.round(p_a, 12).tolist(), 'p_x2': np.round(p_x2, 12).tolist(), 'margin': float(margin)}


def _search(family: _Family, theta0, maxiter: int):
    result = minimize(family.gap, theta0, method='L-BFGS-B', options={'maxiter': maxiter})
    start_gap = family.gap(theta0)
    if start_gap <= result.fun:
        return theta0, start_gap
    return result.x, float(result.fun)


def check_condition(kind: str, ch: DmBicChannel, budget: int, seed: int = DEFAULT_SEED,
                    tol: float = DEFAULT_TOL, maxiter: int = 60) -> ConditionVerdict:
    """
    Multi-start search for a law violating condition ``kind``.

    Start 0 is the canonical law (U1 = X1 uniform, X2 uniform); the others
    draw logits from independent streams spawned from ``seed``. A gap below
    ``-tol`` is reported as a violation with the minimizing law as witness.
    """
    if kind not in CONDITIONS:
        raise ValidationError(f"unknown condition {kind!r}; choose from {', '.join(CONDITIONS)}")
    if budget < 1:
        raise ValidationError(f"budget must be at least 1, got {budget}")
    family = _Family(kind, ch)
    streams = np.random.SeedSequence(seed).spawn(budget)
    best_theta, best_gap = None, np.inf
    for index, stream in enumerate(streams):
        if index == 0:
            theta0 = family.canonical_start()
        else:
            theta0 = np.random.default_rng(stream).normal(scale=2.0, size=family.size)
        theta, gap = _search(family, theta0, maxiter)
        if gap < best_gap:
            best_theta, best_gap = theta, gap
    best_gap = float(best_gap)
    logger.info(f"check_condition({kind}): min gap {best_gap:.3e} over {budget} starts")
    if best_gap < -tol:
        return ConditionVerdict(kind, VIOLATED, best_gap, budget, family.witness(best_theta, best_gap))
    return ConditionVerdict(kind, NOT_FALSIFIED, best_gap, budget)
