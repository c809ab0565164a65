"""
Exact linear-inequality systems over named rate variables.

Every rate region in bicrates is a :class:`LinSystem`. Coefficients and right-hand
sides are stored as :class:`fractions.Fraction`; floats are accepted at
construction and converted exactly. Elimination and redundancy removal stay in
rational arithmetic; vertices and membership tests hand floats back to the caller.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from bicrates import simplex
from bicrates.config import DEDUPE_TOL
from bicrates.errors import InfeasibleError, UnboundedError, ValidationError
from bicrates.logging_config import get_logger

logger = get_logger('polyhedra')

LE = '<='
GE = '>='
SENSES = (LE, GE)

NOT_ACHIEVABLE = 'not-achievable-as-is'


def _rational(value, what='value'):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float) and not math.isfinite(value):
        raise ValidationError(f"{what} must be finite, got {value}")
    try:
        return Fraction(value)
    except (TypeError, ValueError, OverflowError) as e:
        raise ValidationError(f"{what} is not a rational number: {value!r}") from e


def _format_rational(q):
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


@dataclass(frozen=True)
class Inequality:
    """``sum(coeffs[v] * v)  sense  rhs`` with exact coefficients."""

    coeffs: Tuple[Tuple[str, Fraction], ...]
    sense: str
    rhs: Fraction
    label: str = ''

    @classmethod
    def of(cls, coeffs: Mapping[str, object], sense: str, rhs, label: str = '') -> 'Inequality':
        if sense not in SENSES:
            raise ValidationError(f"unknown sense {sense!r}")
        items = []
        for var, value in coeffs.items():
            q = _rational(value, f"coefficient of {var}")
            if q != 0:
                items.append((var, q))
        return cls(tuple(sorted(items)), sense, _rational(rhs, 'rhs'), label)

    def coeff(self, var: str) -> Fraction:
        for name, value in self.coeffs:
            if name == var:
                return value
        return Fraction(0)

    def as_dict(self) -> Dict[str, Fraction]:
        return dict(self.coeffs)

    def as_le(self) -> Tuple[Dict[str, Fraction], Fraction]:
        """The same constraint written as ``a.x <= r``."""
        if self.sense == LE:
            return dict(self.coeffs), self.rhs
        return {v: -c for v, c in self.coeffs}, -self.rhs

    def slack(self, point: Mapping[str, float]) -> float:
        """Float slack: non-negative iff the point satisfies the row."""
        lhs = sum(float(c) * point[v] for v, c in self.coeffs)
        rhs = float(self.rhs)
        return rhs - lhs if self.sense == LE else lhs - rhs

    def to_text(self) -> str:
        if self.coeffs:
            lhs = ' + '.join(f"{_format_rational(c)}*{v}" for v, c in self.coeffs)
        else:
            lhs = '0'
        text = f"{lhs} {self.sense} {_format_rational(self.rhs)}"
        return f"{text}  # {self.label}" if self.label else text


@dataclass(frozen=True)
class LinSystem:
    """A finite set of inequalities over ordered variables ``vars``."""

    vars: Tuple[str, ...]
    ineqs: Tuple[Inequality, ...]
    nonneg: FrozenSet[str] = frozenset()
    name: str = ''
    flags: FrozenSet[str] = frozenset()

    def __post_init__(self):
        if len(set(self.vars)) != len(self.vars):
            raise ValidationError(f"duplicate variable names in {self.vars}")
        known = set(self.vars)
        for ineq in self.ineqs:
            unknown = [v for v, _ in ineq.coeffs if v not in known]
            if unknown:
                raise ValidationError(f"inequality uses unknown variables {unknown}")
        if not set(self.nonneg) <= known:
            raise ValidationError(f"nonneg flags {sorted(set(self.nonneg) - known)} not in vars")

    @classmethod
    def build(cls, vars: Sequence[str], rows: Iterable, nonneg: Iterable[str] = (), name: str = '',
              flags: Iterable[str] = ()) -> 'LinSystem':
        """Build from ``Inequality`` objects or ``(coeffs, sense, rhs[, label])`` tuples."""
        ineqs = []
        for row in rows:
            if isinstance(row, Inequality):
                ineqs.append(row)
            else:
                ineqs.append(Inequality.of(*row))
        return cls(tuple(vars), tuple(ineqs), frozenset(nonneg), name, frozenset(flags))

    @property
    def dim(self) -> int:
        return len(self.vars)

    def materialized(self) -> Tuple[Inequality, ...]:
        """All rows, nonnegativity included as explicit ``v >= 0`` rows."""
        extra = tuple(Inequality.of({v: 1}, GE, 0, f"{v}>=0") for v in self.vars if v in self.nonneg)
        return self.ineqs + extra

    def matrix(self) -> Tuple[List[List[Fraction]], List[Fraction]]:
        """``(A, b)`` with every materialized row in ``<=`` form, columns in ``vars`` order."""
        A, b = [], []
        for ineq in self.materialized():
            coeffs, rhs = ineq.as_le()
            A.append([coeffs.get(v, Fraction(0)) for v in self.vars])
            b.append(rhs)
        return A, b

    def replace(self, ineqs=None, **changes) -> 'LinSystem':
        data = dict(vars=self.vars, ineqs=self.ineqs, nonneg=self.nonneg, name=self.name, flags=self.flags)
        if ineqs is not None:
            data['ineqs'] = tuple(ineqs)
        data.update(changes)
        return LinSystem(**data)

    def rhs_by_label(self) -> Dict[str, float]:
        return {ineq.label: float(ineq.rhs) for ineq in self.ineqs if ineq.label}

    def substitute(self, var: str, expr: Mapping[str, object], const=0) -> 'LinSystem':
        """
        Replace ``var`` by ``sum(expr[w] * w) + const`` in every row.

        Variables in ``expr`` that are not yet in the system are appended.
        A nonnegativity flag on ``var`` becomes the explicit row ``expr + const >= 0``.
        """
        if var not in self.vars:
            raise ValidationError(f"unknown variable {var!r}")
        expr = {w: _rational(c) for w, c in expr.items()}
        const = _rational(const)
        new_vars = tuple(v for v in self.vars if v != var)
        new_vars += tuple(w for w in expr if w not in new_vars)
        rows = list(self.ineqs)
        if var in self.nonneg:
            rows.append(Inequality.of({var: 1}, GE, 0, f"{var}>=0"))
        out = []
        for ineq in rows:
            a = ineq.coeff(var)
            if a == 0:
                out.append(ineq)
                continue
            coeffs = {v: c for v, c in ineq.coeffs if v != var}
            for w, c in expr.items():
                coeffs[w] = coeffs.get(w, Fraction(0)) + a * c
            out.append(Inequality.of(coeffs, ineq.sense, ineq.rhs - a * const, ineq.label))
        return LinSystem(new_vars, tuple(out), frozenset(self.nonneg - {var}), self.name, self.flags)

    def to_text(self) -> str:
        lines = [f"# vars: {' '.join(self.vars)}"]
        if self.name:
            lines.insert(0, f"# system: {self.name}")
        lines.extend(ineq.to_text() for ineq in self.materialized())
        return '\n'.join(lines) + '\n'

    @classmethod
    def from_text(cls, text: str, nonneg: Iterable[str] = ()) -> 'LinSystem':
        """Parse the line format written by :meth:`to_text`."""
        vars_, rows, name = None, [], ''
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith('#'):
                body = line[1:].strip()
                if body.startswith('vars:'):
                    vars_ = body[len('vars:'):].split()
                elif body.startswith('system:'):
                    name = body[len('system:'):].strip()
                continue
            line, _, label = line.partition('#')
            sense = LE if LE in line else GE if GE in line else None
            if sense is None:
                raise ValidationError(f"line {lineno}: no '<=' or '>=' in {raw!r}")
            lhs, rhs = line.split(sense)
            coeffs = {}
            if lhs.strip() != '0':
                for term in lhs.split('+'):
                    try:
                        coef, var = term.strip().split('*')
                    except ValueError:
                        raise ValidationError(f"line {lineno}: bad term {term.strip()!r}")
                    coeffs[var.strip()] = coeffs.get(var.strip(), 0) + _rational(coef.strip())
            rows.append(Inequality.of(coeffs, sense, _rational(rhs.strip()), label.strip()))
        if vars_ is None:
            seen = []
            for row in rows:
                seen.extend(v for v, _ in row.coeffs if v not in seen)
            vars_ = seen
        return cls.build(vars_, rows, nonneg, name)


@dataclass(frozen=True)
class RatePoint:
    """A coordinate assignment to rate variables, in bits."""

    coords: Tuple[Tuple[str, float], ...]

    @classmethod
    def of(cls, vars: Sequence[str], values: Sequence[float]) -> 'RatePoint':
        if len(vars) != len(values):
            raise ValidationError(f"{len(vars)} names for {len(values)} coordinates")
        return cls(tuple((v, float(x)) for v, x in zip(vars, values)))

    @property
    def vars(self) -> Tuple[str, ...]:
        return tuple(v for v, _ in self.coords)

    @property
    def values(self) -> Tuple[float, ...]:
        return tuple(x for _, x in self.coords)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __getitem__(self, var: str) -> float:
        for name, value in self.coords:
            if name == var:
                return value
        raise KeyError(var)

    def as_dict(self) -> Dict[str, float]:
        return dict(self.coords)

    def close_to(self, other: 'RatePoint', tol: float = DEDUPE_TOL) -> bool:
        return self.vars == other.vars and all(abs(a - b) <= tol for a, b in zip(self.values, other.values))

    def __str__(self):
        return '(' + ', '.join(f"{v}={x:.6f}" for v, x in self.coords) + ')'


def dedupe(points: Iterable[RatePoint], tol: float = DEDUPE_TOL) -> List[RatePoint]:
    """Merge points that agree within ``tol`` in every coordinate; result sorted."""
    kept: List[RatePoint] = []
    for p in points:
        if not any(p.close_to(q, tol) for q in kept):
            kept.append(p)
    return sorted(kept, key=lambda p: p.values)


def _normalized_key(coeffs: Dict[str, Fraction], order: Sequence[str]):
    scale = max(abs(c) for c in coeffs.values())
    return tuple(coeffs.get(v, Fraction(0)) / scale for v in order), scale


def _tidy(rows: Iterable[Inequality], order: Sequence[str]) -> List[Inequality]:
    """Drop satisfied constants and keep the tightest copy of parallel rows."""
    best: Dict[tuple, Tuple[Fraction, Inequality]] = {}
    out_const = []
    for ineq in rows:
        coeffs, rhs = ineq.as_le()
        if not coeffs:
            if rhs < 0:
                out_const.append(ineq)
            continue
        key, scale = _normalized_key(coeffs, order)
        bound = rhs / scale
        if key not in best or bound < best[key][0]:
            best[key] = (bound, ineq)
    return [ineq for _, ineq in best.values()] + out_const


def fme_eliminate(sys: LinSystem, var: str) -> LinSystem:
    """
    Project ``var`` out of ``sys`` by Fourier-Motzkin elimination.

    Each lower bound on ``var`` is paired with each upper bound; ``>=`` rows
    stay ``>=`` when both parents were ``>=``. Parallel rows keep only the
    tightest one; violated constant rows are kept so infeasibility survives.
    """
    if var not in sys.vars:
        raise ValidationError(f"cannot eliminate unknown variable {var!r}; vars are {list(sys.vars)}")
    rows = list(sys.ineqs)
    if var in sys.nonneg:
        rows.append(Inequality.of({var: 1}, GE, 0, f"{var}>=0"))
    keep, lower, upper = [], [], []
    for ineq in rows:
        a = ineq.coeff(var)
        if a == 0:
            keep.append(ineq)
            continue
        coeffs, rhs = ineq.as_le()
        a_le = coeffs.pop(var)
        scaled = ({v: c / abs(a_le) for v, c in coeffs.items()}, rhs / abs(a_le), ineq)
        (upper if a_le > 0 else lower).append(scaled)

    order = tuple(v for v in sys.vars if v != var)
    for (lc, lr, lrow), (uc, ur, urow) in itertools.product(lower, upper):
        coeffs = dict(uc)
        for v, c in lc.items():
            coeffs[v] = coeffs.get(v, Fraction(0)) + c
        rhs = ur + lr
        if lrow.sense == GE and urow.sense == GE:
            keep.append(Inequality.of({v: -c for v, c in coeffs.items()}, GE, -rhs))
        else:
            keep.append(Inequality.of(coeffs, LE, rhs))

    result = _tidy(keep, order)
    logger.debug(f"eliminated {var}: {len(lower)} lower x {len(upper)} upper -> {len(result)} rows")
    return LinSystem(order, tuple(result), frozenset(sys.nonneg - {var}), sys.name, sys.flags)


def fme_eliminate_all(sys: LinSystem, vars: Iterable[str]) -> LinSystem:
    """Eliminate several variables, cheapest pairing first."""
    pending = list(vars)
    while pending:
        def cost(v):
            rows = sys.materialized()
            pos = sum(1 for r in rows if r.as_le()[0].get(v, 0) > 0)
            neg = sum(1 for r in rows if r.as_le()[0].get(v, 0) < 0)
            return pos * neg - pos - neg
        var = min(pending, key=lambda v: (cost(v), pending.index(v)))
        sys = fme_eliminate(sys, var)
        pending.remove(var)
    return sys


def is_feasible(sys: LinSystem) -> bool:
    A, b = sys.matrix()
    return simplex.is_feasible(A, b, sys.dim)


def maximize(sys: LinSystem, objective: Mapping[str, object]) -> simplex.LPResult:
    """Exact maximum of a linear objective over ``sys``."""
    A, b = sys.matrix()
    c = [_rational(objective.get(v, 0)) for v in sys.vars]
    return simplex.maximize(c, A, b)


def remove_redundant(sys: LinSystem) -> LinSystem:
    """
    Drop every inequality implied by the others.

    One exact LP per row: maximize the row's left-hand side over the remaining
    rows and drop it when the maximum does not exceed its right-hand side.
    Nonnegativity flags are kept as flags.
    """
    if not is_feasible(sys):
        raise InfeasibleError(f"system {sys.name or '<unnamed>'} is infeasible")
    nonneg_rows = [r for r in sys.materialized()[len(sys.ineqs):]]
    kept = list(sys.ineqs)
    i = 0
    lps = 0
    while i < len(kept):
        target = kept[i]
        others = kept[:i] + kept[i + 1:] + nonneg_rows
        trial = LinSystem(sys.vars, tuple(others))
        coeffs, rhs = target.as_le()
        result = maximize(trial, coeffs)
        lps += 1
        if result.status == simplex.OPTIMAL and result.value <= rhs:
            del kept[i]
        else:
            i += 1
    logger.debug(f"remove_redundant: {len(sys.ineqs)} -> {len(kept)} rows ({lps} LPs)")
    return sys.replace(ineqs=kept)


def implies(sys: LinSystem, other: LinSystem) -> List[Inequality]:
    """
    Rows of ``other`` that are not implied by ``sys``.

    An empty list means the feasible set of ``sys`` lies inside that of ``other``.
    """
    if set(sys.vars) != set(other.vars):
        raise ValidationError(f"variable sets differ: {sys.vars} vs {other.vars}")
    if not is_feasible(sys):
        return []
    failing = []
    for ineq in other.materialized():
        coeffs, rhs = ineq.as_le()
        result = maximize(sys, coeffs)
        if result.status != simplex.OPTIMAL or result.value > rhs:
            failing.append(ineq)
    return failing


def _solve_exact(A: List[List[Fraction]], b: List[Fraction]) -> Optional[List[Fraction]]:
    n = len(A)
    M = [row[:] + [rhs] for row, rhs in zip(A, b)]
    for k in range(n):
        pivot = next((r for r in range(k, n) if M[r][k] != 0), None)
        if pivot is None:
            return None
        M[k], M[pivot] = M[pivot], M[k]
        p = M[k][k]
        M[k] = [v / p for v in M[k]]
        for r in range(n):
            if r != k and M[r][k] != 0:
                f = M[r][k]
                M[r] = [v - f * w for v, w in zip(M[r], M[k])]
    return [M[r][n] for r in range(n)]


def _check_bounded(sys: LinSystem, A, b):
    for j, var in enumerate(sys.vars):
        for sign in (1, -1):
            c = [Fraction(0)] * sys.dim
            c[j] = Fraction(sign)
            result = simplex.maximize(c, A, b)
            if result.status == simplex.UNBOUNDED:
                direction = {v: float(r) for v, r in zip(sys.vars, result.ray) if r != 0}
                raise UnboundedError(
                    f"system {sys.name or '<unnamed>'} is unbounded along {direction}", direction)


def enumerate_vertices(sys: LinSystem, tol: float = DEDUPE_TOL) -> List[RatePoint]:
    """
    All extreme points of a bounded system of dimension at most 4.

    Every d-subset of materialized rows is solved exactly; solutions satisfying
    all rows are kept and deduplicated at ``tol``. An empty system yields [].
    """
    if sys.dim > 4:
        raise ValidationError(f"vertex enumeration supports at most 4 variables, got {sys.dim}")
    A, b = sys.matrix()
    if not simplex.is_feasible(A, b, sys.dim):
        return []
    _check_bounded(sys, A, b)
    found = []
    for subset in itertools.combinations(range(len(A)), sys.dim):
        x = _solve_exact([A[i] for i in subset], [b[i] for i in subset])
        if x is None:
            continue
        if all(sum(a * v for a, v in zip(row, x)) <= rhs for row, rhs in zip(A, b)):
            found.append(RatePoint.of(sys.vars, [float(v) for v in x]))
    return dedupe(found, tol)


def _dominates(q: RatePoint, p: RatePoint, tol: float) -> bool:
    ge = all(a >= b - tol for a, b in zip(q.values, p.values))
    gt = any(a > b + tol for a, b in zip(q.values, p.values))
    return ge and gt


def pareto_filter(points: Iterable[RatePoint], tol: float = DEDUPE_TOL) -> List[RatePoint]:
    """Points not dominated element-wise by another point; near-equal points kept once."""
    points = list(points)
    dims = {p.dim for p in points}
    if len(dims) > 1:
        raise ValidationError(f"pareto_filter needs points of one dimension, got {sorted(dims)}")
    unique = dedupe(points, tol)
    return [p for p in unique if not any(_dominates(q, p, tol) for q in unique if q is not p)]


def contains(sys: LinSystem, point: RatePoint, tol: float = 0.0) -> bool:
    """True iff every row of ``sys`` holds at ``point`` within additive ``tol``."""
    if set(point.vars) != set(sys.vars):
        raise ValidationError(f"point over {point.vars} tested against system over {sys.vars}")
    values = point.as_dict()
    return all(ineq.slack(values) >= -tol for ineq in sys.materialized())


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def union_hull_2d(curves: Sequence[Iterable]) -> List[Tuple[float, float]]:
    """
    Upper-right Pareto frontier of the convex hull of all given 2-D points.

    ``curves`` is a list of point collections (``RatePoint`` or pairs). The
    frontier runs from the highest point to the right-most one, sorted by the
    first coordinate; collinear interior points are dropped.
    """
    pts = set()
    for curve in curves:
        for p in curve:
            values = p.values if isinstance(p, RatePoint) else tuple(p)
            if len(values) != 2:
                raise ValidationError(f"union_hull_2d needs 2-D points, got {values}")
            pts.add((float(values[0]), float(values[1])))
    if not pts:
        raise ValidationError("union_hull_2d needs at least one point")
    ordered = sorted(pts)
    upper: List[Tuple[float, float]] = []
    for p in reversed(ordered):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    upper.reverse()
    top = max(range(len(upper)), key=lambda i: (upper[i][1], upper[i][0]))
    return upper[top:]


def frontier_value(frontier: Sequence[Tuple[float, float]], x: float) -> Optional[float]:
    """Largest second coordinate at first coordinate ``x`` under a frontier; None past its end."""
    if x < frontier[0][0]:
        return frontier[0][1]
    for (x0, y0), (x1, y1) in zip(frontier, frontier[1:]):
        if x0 <= x <= x1:
            if x1 == x0:
                return max(y0, y1)
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    if abs(x - frontier[-1][0]) <= DEDUPE_TOL:
        return frontier[-1][1]
    return None
