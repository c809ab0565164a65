"""
Joint laws over named variables and information measures in bits.
"""

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np

from bicrates.dmbic.channel import DmBicChannel, FactoredInput, SimpleInput, TimeSharedInput
from bicrates.errors import ValidationError

SIMPLE_AXES = ('U1', 'X1', 'U2', 'X2', 'Y1', 'Y2', 'Y3')
TIMESHARED_AXES = ('Q', 'U1', 'X1', 'U2', 'X2', 'Y1', 'Y2', 'Y3')
FACTORED_AXES = ('Q', 'U1', 'V1', 'V2', 'U2', 'X1', 'X2', 'Y1', 'Y2', 'Y3')


@dataclass(frozen=True, eq=False)
class JointPmf:
    """A pmf stored as an ndarray with one named axis per variable."""

    axes: Tuple[str, ...]
    table: np.ndarray

    def __post_init__(self):
        if self.table.ndim != len(self.axes):
            raise ValidationError(f"{len(self.axes)} axis names for a {self.table.ndim}-d table")

    def marginal(self, names: Iterable[str]) -> np.ndarray:
        names = [n for n in self.axes if n in set(names)]
        drop = tuple(i for i, n in enumerate(self.axes) if n not in names)
        return self.table.sum(axis=drop) if drop else self.table

    def entropy(self, names: Iterable[str]) -> float:
        names = set(names)
        unknown = names - set(self.axes)
        if unknown:
            raise ValidationError(f"unknown variables {sorted(unknown)}; joint has {self.axes}")
        if not names:
            return 0.0
        p = self.marginal(names).ravel()
        p = p[p > 0]
        return float(-np.sum(p * np.log2(p)))


def joint_from_factored(ch: DmBicChannel, inp) -> JointPmf:
    """
    Full joint pmf of the input law and the channel.

    Axes are ``FACTORED_AXES`` for a factored input, ``SIMPLE_AXES`` for a
    simple input and ``TIMESHARED_AXES`` for a time-shared one.
    """
    inp.check_against(ch)
    if isinstance(inp, FactoredInput):
        u1, v1, v2 = inp.f.shape
        F = np.zeros((u1, v1, v2, ch.sizes['X1']))
        ia, ib, ic = np.indices(inp.f.shape)
        F[ia, ib, ic, inp.f] = 1.0
        table = np.einsum('q,aq,bcaq,dq,edq,abcx,yx,zxe,we->qabcdxeyzw',
                          inp.pQ, inp.pU1, inp.pV1V2, inp.pU2, inp.pX2, F, ch.p1, ch.p2, ch.p3)
        axes = FACTORED_AXES
    elif isinstance(inp, TimeSharedInput):
        table = np.einsum('q,aq,xaq,dq,edq,yx,zxe,we->qaxdeyzw',
                          inp.pQ, inp.pU1, inp.pX1, inp.pU2, inp.pX2, ch.p1, ch.p2, ch.p3)
        axes = TIMESHARED_AXES
    elif isinstance(inp, SimpleInput):
        table = np.einsum('a,xa,d,ed,yx,zxe,we->axdeyzw',
                          inp.pU1, inp.pX1, inp.pU2, inp.pX2, ch.p1, ch.p2, ch.p3)
        axes = SIMPLE_AXES
    else:
        raise ValidationError(f"unsupported input type {type(inp).__name__}")
    total = table.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValidationError(f"joint pmf sums to {total:.12g}")
    return JointPmf(axes, table)


def mutual_info(joint: JointPmf, A: Sequence[str], B: Sequence[str], C: Sequence[str] = ()) -> float:
    """
    I(A;B|C) in bits.

    Sets may overlap; the value is computed as
    H(A,C) + H(B,C) - H(A,B,C) - H(C) and clipped at zero.
    """
    A, B, C = set(A), set(B), set(C)
    if not A or not B:
        return 0.0
    value = (joint.entropy(A | C) + joint.entropy(B | C)
             - joint.entropy(A | B | C) - joint.entropy(C))
    return max(value, 0.0)


def h2(p: float) -> float:
    """Binary entropy in bits."""
    if p <= 0 or p >= 1:
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))
