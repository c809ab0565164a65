"""
Brute-force cross-checks kept apart from the main computation paths.

Nothing here reuses the exact elimination or the rational simplex: vertices
come from float linear solves, region comparison from sampling, and LPs from
scipy's HiGHS backend.
"""

import itertools
from dataclasses import dataclass
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy.optimize import linprog

from bicrates.config import DEDUPE_TOL, DEFAULT_TOL, MC_BOX_INFLATION
from bicrates.dmbic.channel import DmBicChannel, FactoredInput, SimpleInput
from bicrates.dmbic.regions import binning_margin
from bicrates.errors import UnboundedError, ValidationError
from bicrates.logging_config import get_logger
from bicrates.polyhedra import LinSystem, RatePoint

logger = get_logger('oracle')

BATCH = 4096


def _float_matrix(sys: LinSystem, order=None) -> Tuple[np.ndarray, np.ndarray]:
    """Materialized rows in ``<=`` form as floats, columns in ``order``."""
    order = tuple(order or sys.vars)
    A = np.zeros((0, len(order)))
    b = np.zeros(0)
    rows, rhs = [], []
    for ineq in sys.materialized():
        coeffs, r = ineq.as_le()
        rows.append([float(coeffs.get(v, 0)) for v in order])
        rhs.append(float(r))
    if rows:
        A, b = np.array(rows), np.array(rhs)
    return A, b


def _extent(A: np.ndarray, b: np.ndarray, j: int, sign: int) -> Tuple[int, Optional[float], Optional[np.ndarray]]:
    """linprog status and optimum of ``sign * x_j`` over ``A x <= b``, variables free."""
    c = np.zeros(A.shape[1])
    c[j] = -sign
    res = linprog(c, A_ub=A, b_ub=b, bounds=[(None, None)] * A.shape[1], method='highs')
    if res.status == 0:
        return 0, sign * res.x[j], res.x
    return res.status, None, None


def brute_vertices(sys: LinSystem, tol: float = DEDUPE_TOL) -> List[RatePoint]:
    """
    Extreme points by solving every d-subset of rows in floating point.

    Feasibility and boundedness are probed with HiGHS; an infeasible system
    yields [] and an unbounded one raises :class:`UnboundedError`.
    """
    d = sys.dim
    if d > 4:
        raise ValidationError(f"brute_vertices supports at most 4 variables, got {d}")
    A, b = _float_matrix(sys)
    if d == 0 or A.shape[0] < d:
        return []
    for j in range(d):
        for sign in (1, -1):
            status, _, _ = _extent(A, b, j, sign)
            if status == 2:
                return []
            if status == 3:
                direction = {sys.vars[j]: float(sign)}
                raise UnboundedError(f"system {sys.name or '<unnamed>'} is unbounded along {direction}", direction)

    found: List[np.ndarray] = []
    for subset in itertools.combinations(range(A.shape[0]), d):
        M = A[list(subset)]
        if np.linalg.matrix_rank(M) < d:
            continue
        x = np.linalg.solve(M, b[list(subset)])
        if np.all(A @ x <= b + 1e-9) and not any(np.all(np.abs(x - y) <= tol) for y in found):
            found.append(x)
    found.sort(key=tuple)
    return [RatePoint.of(sys.vars, x.tolist()) for x in found]


@dataclass
class MCResult:
    subset_ab: bool
    subset_ba: bool
    samples: int
    witness: Optional[RatePoint] = None
    witness_in: str = ''

    @property
    def equal(self) -> bool:
        return self.subset_ab and self.subset_ba


def _sampling_box(order, systems, inflation: float):
    lo = np.full(len(order), np.inf)
    hi = np.full(len(order), -np.inf)
    for A, b in systems:
        for j in range(len(order)):
            for sign in (1, -1):
                status, value, _ = _extent(A, b, j, sign)
                if status != 0:
                    continue
                if sign > 0:
                    hi[j] = max(hi[j], value)
                else:
                    lo[j] = min(lo[j], value)
    if not np.all(np.isfinite(lo)) or not np.all(np.isfinite(hi)):
        raise ValidationError("no bounding box: neither system bounds every variable")
    width = np.maximum(hi - lo, 1e-3)
    return lo - inflation * width, hi + inflation * width


def mc_region_equal(sysA: LinSystem, sysB: LinSystem, n: int, tol: float = DEFAULT_TOL,
                    seed: int = 0) -> MCResult:
    """
    Compare two systems by sampling ``n`` points in a shared box.

    A sample inside exactly one system is a witness against one inclusion.
    Both inclusions holding means the regions are indistinguishable at this
    budget, nothing more. Two infeasible systems compare equal.
    """
    if set(sysA.vars) != set(sysB.vars):
        raise ValidationError(f"variable sets differ: {sysA.vars} vs {sysB.vars}")
    if n < 1:
        raise ValidationError(f"sample count must be at least 1, got {n}")
    order = sysA.vars
    Aa, ba = _float_matrix(sysA, order)
    Ab, bb = _float_matrix(sysB, order)
    feasible = [(A, b) for A, b in ((Aa, ba), (Ab, bb))
                if _extent(A, b, 0, 1)[0] != 2] if order else []
    if not feasible:
        return MCResult(True, True, 0)
    lo, hi = _sampling_box(order, feasible, MC_BOX_INFLATION)
    rng = np.random.default_rng(seed)
    subset_ab = subset_ba = True
    witness, witness_in = None, ''
    done = 0
    while done < n:
        size = min(BATCH, n - done)
        X = rng.uniform(lo, hi, size=(size, len(order)))
        in_a = np.all(X @ Aa.T <= ba + tol, axis=1)
        in_b = np.all(X @ Ab.T <= bb + tol, axis=1)
        only_a = in_a & ~in_b
        only_b = in_b & ~in_a
        if only_a.any():
            subset_ab = False
        if only_b.any():
            subset_ba = False
        mismatch = np.flatnonzero(only_a | only_b)
        if witness is None and mismatch.size:
            k = int(mismatch[0])
            witness = RatePoint.of(order, X[k].tolist())
            witness_in = (sysA.name or 'A') if only_a[k] else (sysB.name or 'B')
        done += size
    if witness is not None:
        logger.info(f"mc_region_equal: witness {witness} lies only in {witness_in}")
    return MCResult(subset_ab, subset_ba, n, witness, witness_in)


INPUT_KINDS = ('simple', 'factored')
CONDITION_KINDS = ('cognizant', 'oblivious', 'y3_useless', 'eq11')

DEFAULT_SIZES = {'X1': 2, 'X2': 2, 'Y1': 2, 'Y2': 2, 'Y3': 2, 'U1': 2, 'U2': 2, 'V1': 2, 'V2': 2, 'Q': 1}


class InstanceSpec(BaseModel):
    """Recipe for one seeded random channel and input law."""

    model_config = ConfigDict(extra='forbid')

    seed: int = 0
    input_kind: Literal['simple', 'factored'] = 'simple'
    sizes: Dict[str, int] = Field(default_factory=dict)
    concentration: float = Field(1.0, gt=0)
    condition: Optional[Literal['cognizant', 'oblivious', 'y3_useless', 'eq11']] = None
    max_attempts: int = Field(1000, ge=1)

    @field_validator('sizes')
    @classmethod
    def _check_sizes(cls, sizes):
        unknown = set(sizes) - set(DEFAULT_SIZES)
        if unknown:
            raise ValueError(f"unknown alphabet names {sorted(unknown)}")
        if any(n < 1 for n in sizes.values()):
            raise ValueError("alphabet sizes must be at least 1")
        return sizes

    def size(self, name: str) -> int:
        return self.sizes.get(name, DEFAULT_SIZES[name])


def _conditional(rng, alpha: float, n_out: int, *given: int) -> np.ndarray:
    """Table ``[out, *given]`` with each column drawn from a symmetric Dirichlet."""
    cols = int(np.prod(given)) if given else 1
    draws = rng.dirichlet(np.full(n_out, alpha), size=cols)
    return draws.T.reshape((n_out,) + tuple(given))


def _channel(rng, spec: InstanceSpec) -> DmBicChannel:
    a = spec.concentration
    x1, x2 = spec.size('X1'), spec.size('X2')
    y1, y2, y3 = spec.size('Y1'), spec.size('Y2'), spec.size('Y3')
    if spec.condition == 'cognizant':
        # Y2 is a degraded copy of Y1 once X2 is known
        p1 = _conditional(rng, a, y1, x1)
        K = _conditional(rng, a, y2, y1, x2)
        p2 = np.einsum('kax,ai->kix', K, p1)
    elif spec.condition == 'oblivious':
        # Y2 = (Ytilde, Z), Y1 a degraded copy of Ytilde
        yt = y1
        if y2 % yt:
            raise ValidationError(f"oblivious instances need |Y2| to be a multiple of |Y1|, got {y2} and {yt}")
        z = y2 // yt
        p_t = _conditional(rng, a, yt, x1)
        p1 = _conditional(rng, a, y1, yt) @ p_t
        p_z = _conditional(rng, a, z, x1, x2)
        p2 = np.einsum('ti,zix->tzix', p_t, p_z).reshape(yt * z, x1, x2)
    else:
        p1 = _conditional(rng, a, y1, x1)
        p2 = _conditional(rng, a, y2, x1, x2)
    if spec.condition == 'y3_useless':
        p3 = np.full((y3, x2), 1.0 / y3)
    else:
        p3 = _conditional(rng, a, y3, x2)
    return DmBicChannel(p1, p2, p3)


def _input(rng, spec: InstanceSpec):
    a = spec.concentration
    x1, x2 = spec.size('X1'), spec.size('X2')
    u1, u2 = spec.size('U1'), spec.size('U2')
    if spec.input_kind == 'simple':
        return SimpleInput(pU1=_conditional(rng, a, u1), pX1=_conditional(rng, a, x1, u1),
                           pU2=_conditional(rng, a, u2), pX2=_conditional(rng, a, x2, u2))
    q, v1, v2 = spec.size('Q'), spec.size('V1'), spec.size('V2')
    pV = _conditional(rng, a, v1 * v2, u1, q).reshape(v1, v2, u1, q)
    return FactoredInput(pQ=_conditional(rng, a, q), pU1=_conditional(rng, a, u1, q), pV1V2=pV,
                         pU2=_conditional(rng, a, u2, q), pX2=_conditional(rng, a, x2, u2, q),
                         f=rng.integers(0, x1, size=(u1, v1, v2)))


def random_instance(spec: InstanceSpec):
    """
    Seeded random ``(channel, input)``.

    The same spec always yields the same tables. ``condition`` forces a
    property by construction: ``cognizant``/``oblivious`` build degraded
    channels (``oblivious`` needs |Y2| to be a multiple of |Y1|),
    ``y3_useless`` makes receiver 3's output independent of X2, and
    ``eq11`` redraws a factored instance from sub-seeds until the binning
    validity margin is at least 1e-6.
    """
    if spec.condition != 'eq11':
        rng = np.random.default_rng(spec.seed)
        ch = _channel(rng, spec)
        return ch, _input(rng, spec)

    if spec.input_kind != 'factored':
        raise ValidationError("the eq11 condition needs a factored input")
    for attempt in range(spec.max_attempts):
        rng = np.random.default_rng([spec.seed, attempt])
        ch = _channel(rng, spec)
        inp = _input(rng, spec)
        if binning_margin(ch, inp) >= 1e-6:
            logger.debug(f"eq11 instance for seed {spec.seed} after {attempt + 1} draws")
            return ch, inp
    raise ValidationError(f"no instance with a positive binning margin in {spec.max_attempts} draws")
