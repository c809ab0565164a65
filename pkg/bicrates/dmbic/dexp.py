"""
Closed-form dominant extreme points of the superposition regions.

L3 and L4 give the points of the R2 region and its reduced form (A-D, A-B),
L5 and L6 those of the R1 region and its reduced form (E-J, E-F). The partial
order each formula assumes is not re-checked here.
"""

from typing import Dict, List

from bicrates.dmbic.channel import DmBicChannel
from bicrates.dmbic.regions import RATES, I, bic_law
from bicrates.errors import ValidationError
from bicrates.polyhedra import RatePoint, pareto_filter

DEXP_KINDS = ('L3', 'L4', 'L5', 'L6')

# region each formula describes
DEXP_REGION = {'L3': 'R2', 'L4': 'R2P', 'L5': 'R1', 'L6': 'R1P'}

ATOMS = {
    'x1y1_u1': I('X1', 'Y1', 'U1'),
    'u1y1': I('U1', 'Y1'),
    'u1y2_u2': I('U1', 'Y2', 'U2'),
    'u1u2y2': I('U1,U2', 'Y2'),
    'u2y2': I('U2', 'Y2'),
    'u2y2_u1': I('U2', 'Y2', 'U1'),
    'u2y3': I('U2', 'Y3'),
    'x2y3': I('X2', 'Y3'),
    'x2y3_u2': I('X2', 'Y3', 'U2'),
    'x1y2_u1u2': I('X1', 'Y2', 'U1,U2'),
    'x1u2y2_u1': I('X1,U2', 'Y2', 'U1'),
}


def _pos(x: float) -> float:
    return max(x, 0.0)


def _point(r1, r2, r3) -> RatePoint:
    return RatePoint.of(RATES, (r1, r2, r3))


def dexp_points(kind: str, ch: DmBicChannel, inp) -> Dict[str, RatePoint]:
    """Named closed-form points (before merging coincident ones)."""
    if kind not in DEXP_KINDS:
        raise ValidationError(f"unknown DExP formula {kind!r}; choose from {', '.join(DEXP_KINDS)}")
    law = bic_law(ch, inp)
    v = {name: law.mi(atom) for name, atom in ATOMS.items()}

    if kind in ('L3', 'L4'):
        r3_full = min(v['x2y3'], v['u2y2'] + v['x2y3_u2'])
        r2_cut = min(v['u1y2_u2'], _pos(v['u1u2y2'] - v['u2y3']))
        r3_cut = v['x2y3_u2'] + min(v['u2y3'], v['u1u2y2'])
        points = {
            'A': _point(v['x1y1_u1'], v['u1y2_u2'], r3_full),
            'B': _point(v['x1y1_u1'], r2_cut, r3_cut),
        }
        if kind == 'L3':
            points['C'] = _point(v['x1y1_u1'] + r2_cut, 0.0, r3_cut)
            points['D'] = _point(v['x1y1_u1'] + v['u1y2_u2'], 0.0, r3_full)
        return points

    r3_full = min(v['x2y3'], v['u2y2_u1'] + v['x2y3_u2'])
    points = {
        'E': _point(v['u1y1'], v['x1y2_u1u2'], r3_full),
        'F': _point(v['u1y1'], min(v['x1y2_u1u2'], _pos(v['x1u2y2_u1'] - v['u2y3'])),
                    v['x2y3_u2'] + min(v['u2y3'], v['x1u2y2_u1'])),
    }
    if kind == 'L6':
        return points
    points['G'] = _point(0.0, v['u1y1'] + v['x1y2_u1u2'], r3_full)
    if v['u2y3'] <= v['u1y1'] + v['x1u2y2_u1']:
        r_i = v['u1y1']
        r_j = v['u1y1'] + v['x1y2_u1u2'] + min(0.0, v['u2y2_u1'] - v['u2y3'])
        points['H'] = _point(0.0, r_j, v['x2y3'])
        points['I'] = _point(min(r_i, r_j), _pos(r_j - r_i), v['x2y3'])
    else:
        points['J'] = _point(0.0, 0.0, v['u1y1'] + v['x1u2y2_u1'] + v['x2y3_u2'])
    return points


def dexp_formula(kind: str, ch: DmBicChannel, inp) -> List[RatePoint]:
    """
    Closed-form DExP set.

    Coincident points are merged at 1e-9. When I(U2;Y3) does not exceed the
    rate receiver 2 gets from U2 the cut points collapse onto the full ones
    and become dominated; those are dropped.
    """
    return pareto_filter(dexp_points(kind, ch, inp).values())
