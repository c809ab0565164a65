from fractions import Fraction

import numpy as np
import pytest

from bicrates.errors import InfeasibleError, UnboundedError, ValidationError
from bicrates.polyhedra import (
    GE, LE, Inequality, LinSystem, RatePoint, contains, dedupe, enumerate_vertices, fme_eliminate,
    fme_eliminate_all, frontier_value, implies, is_feasible, maximize, pareto_filter, remove_redundant,
    union_hull_2d,
)

RATES2 = ('R1', 'R2')


def box(u1=1, u2=1, s=None):
    rows = [({'R1': 1}, LE, u1, 'r1'), ({'R2': 1}, LE, u2, 'r2')]
    if s is not None:
        rows.append(({'R1': 1, 'R2': 1}, LE, s, 'sum'))
    return LinSystem.build(RATES2, rows, nonneg=RATES2, name='box')


def test_inequality_rejects_bad_input():
    """Unknown senses and non-finite values are refused."""
    with pytest.raises(ValidationError):
        Inequality.of({'R1': 1}, '<', 1)
    with pytest.raises(ValidationError):
        Inequality.of({'R1': 1}, LE, float('inf'))
    with pytest.raises(ValidationError):
        Inequality.of({'R1': 'x'}, LE, 1)


def test_system_rejects_unknown_variables():
    """Rows may only use declared variables."""
    with pytest.raises(ValidationError):
        LinSystem.build(('R1',), [({'R2': 1}, LE, 1)])
    with pytest.raises(ValidationError):
        LinSystem.build(('R1', 'R1'), [])


def test_text_format_roundtrip():
    """to_text and from_text agree on rows, labels and the system name."""
    system = box(1, 0.5, 1.25)
    parsed = LinSystem.from_text(system.to_text())
    assert parsed.name == 'box'
    assert parsed.vars == RATES2
    assert {i.label for i in parsed.ineqs} >= {'r1', 'r2', 'sum'}
    assert parsed.rhs_by_label()['sum'] == 1.25


def test_from_text_reports_bad_line():
    """A row without a comparison names its line."""
    with pytest.raises(ValidationError, match='line 2'):
        LinSystem.from_text("# vars: R1\n1*R1 = 3\n")


def test_substitute_keeps_nonnegativity():
    """Substituting a flagged variable turns its flag into an explicit row."""
    system = LinSystem.build(('R1p',), [({'R1p': 1}, LE, 1, 'cap')], nonneg=('R1p',))
    out = system.substitute('R1p', {'R1': 1, 'R1c': -1})
    assert set(out.vars) == {'R1', 'R1c'}
    rows = {i.label: i for i in out.ineqs}
    assert rows['cap'].as_dict() == {'R1': 1, 'R1c': -1}
    assert rows['R1p>=0'].sense == GE


def test_fme_eliminate_projects_triangle():
    """Eliminating y from {x + y <= 2, x <= y, y >= 0} leaves x <= 1."""
    system = LinSystem.build(('x', 'y'), [({'x': 1, 'y': 1}, LE, 2), ({'x': 1, 'y': -1}, LE, 0)], nonneg=('y',))
    projected = fme_eliminate(system, 'y')
    assert projected.vars == ('x',)
    assert maximize(projected, {'x': 1}).value == 1


def test_fme_keeps_infeasibility():
    """A violated constant row survives elimination."""
    system = LinSystem.build(('x', 'y'), [({'x': 1}, LE, -1), ({'y': 1}, LE, 1)], nonneg=('x',))
    projected = fme_eliminate_all(system, ['x'])
    assert not is_feasible(projected)


def test_fme_unknown_variable():
    """Eliminating a variable the system does not have is an error."""
    with pytest.raises(ValidationError):
        fme_eliminate(box(), 'R3')


def test_remove_redundant_drops_implied_rows():
    """The sum row is implied by the two single-rate rows."""
    reduced = remove_redundant(box(1, 1, 3))
    assert {i.label for i in reduced.ineqs} == {'r1', 'r2'}


def test_remove_redundant_infeasible():
    """Redundancy is undefined for an empty system."""
    system = LinSystem.build(RATES2, [({'R1': 1}, LE, -1)], nonneg=RATES2)
    with pytest.raises(InfeasibleError):
        remove_redundant(system)


def test_implies():
    """The unit box satisfies R1 + R2 <= 2 but not R1 + R2 <= 1.5."""
    loose = LinSystem.build(RATES2, [({'R1': 1, 'R2': 1}, LE, 2)])
    tight = LinSystem.build(RATES2, [({'R1': 1, 'R2': 1}, LE, 1.5)])
    assert implies(box(), loose) == []
    assert len(implies(box(), tight)) == 1


def test_enumerate_vertices_triangle():
    """The simplex R1 + R2 <= 1 has three vertices."""
    system = LinSystem.build(RATES2, [({'R1': 1, 'R2': 1}, LE, 1)], nonneg=RATES2)
    points = enumerate_vertices(system)
    assert [p.values for p in points] == [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0)]


def test_enumerate_vertices_unbounded_and_empty():
    """Unbounded systems raise with a direction; empty systems give no vertices."""
    open_system = LinSystem.build(RATES2, [({'R1': 1}, LE, 1)], nonneg=RATES2)
    with pytest.raises(UnboundedError) as info:
        enumerate_vertices(open_system)
    assert info.value.direction.get('R2', 0) > 0
    empty = LinSystem.build(RATES2, [({'R1': 1}, LE, -1)], nonneg=RATES2)
    assert enumerate_vertices(empty) == []


def test_enumerate_vertices_dimension_limit():
    """More than four variables is refused."""
    names = tuple(f"x{i}" for i in range(5))
    with pytest.raises(ValidationError):
        enumerate_vertices(LinSystem.build(names, [], nonneg=names))


def test_pareto_filter_and_dedupe():
    """Dominated and near-duplicate points are removed."""
    pts = [RatePoint.of(RATES2, v) for v in [(1, 0), (0, 1), (0.5, 0.5), (0.4, 0.4), (1, 1e-12)]]
    kept = pareto_filter(pts)
    assert [p.values for p in kept] == [(0.0, 1.0), (0.5, 0.5), (1.0, 0.0)]
    assert len(dedupe(pts)) == 4


def test_pareto_filter_mixed_dimensions():
    """Points of different dimension cannot be compared."""
    with pytest.raises(ValidationError):
        pareto_filter([RatePoint.of(('R1',), (1,)), RatePoint.of(RATES2, (1, 1))])


def test_contains_with_tolerance():
    """Membership honours the additive tolerance."""
    point = RatePoint.of(RATES2, (1 + 1e-10, 0.5))
    assert not contains(box(), point)
    assert contains(box(), point, tol=1e-9)


def test_union_hull_2d_and_frontier():
    """The hull frontier skips points under the chord and interpolates linearly."""
    frontier = union_hull_2d([[(0, 1), (0.5, 0.6), (1, 0)], [(0.5, 0.9)]])
    assert frontier == [(0.0, 1.0), (0.5, 0.9), (1.0, 0.0)]
    assert frontier_value(frontier, 0.25) == pytest.approx(0.95)
    assert frontier_value(frontier, -1.0) == 1.0
    assert frontier_value(frontier, 1.5) is None
    assert frontier_value(frontier, 1.0) == 0.0


def test_union_hull_2d_rejects_empty():
    """At least one point is needed."""
    with pytest.raises(ValidationError):
        union_hull_2d([[]])


def lifts(system, point):
    """Whether fixing R1, R2 at ``point`` leaves a feasible R3."""
    pins = []
    for var, value in point.items():
        pins += [({var: 1}, LE, value), ({var: 1}, GE, value)]
    return is_feasible(LinSystem.build(system.vars, list(system.ineqs) + pins, nonneg=system.nonneg))


def test_projection_is_exact_shadow(random_polytope):
    """A point lies in the projection iff it extends to a point of the original system."""
    rng = np.random.default_rng(11)
    for seed in range(15):
        system = random_polytope(seed)
        shadow = fme_eliminate(system, 'R3')
        assert shadow.vars == RATES2
        for _ in range(40):
            point = {v: Fraction(int(k), 4) for v, k in zip(RATES2, rng.integers(0, 44, size=2))}
            inside = contains(shadow, RatePoint.of(RATES2, [float(point[v]) for v in RATES2]), tol=1e-12)
            assert inside == lifts(system, point), (seed, point)


def test_remove_redundant_keeps_membership(random_polytope):
    """Dropping implied rows changes no membership verdict."""
    rng = np.random.default_rng(5)
    for seed in range(10):
        system = random_polytope(seed)
        # looser copies of every row are redundant by construction
        looser = [Inequality.of(ineq.as_dict(), ineq.sense, ineq.rhs + 2, f"{ineq.label}+2")
                  for ineq in system.ineqs]
        padded = system.replace(ineqs=list(system.ineqs) + looser)
        reduced = remove_redundant(padded)
        assert len(reduced.ineqs) <= len(system.ineqs)
        for values in rng.uniform(-1, 11, size=(1000, 3)):
            point = RatePoint.of(system.vars, values)
            assert contains(padded, point) == contains(reduced, point), (seed, str(point))


def test_vertices_are_basic_feasible_points(random_polytope):
    """Every vertex satisfies all rows and has a full-rank set of active rows."""
    for seed in range(20):
        system = random_polytope(seed)
        rows = system.materialized()
        A = np.array([[float(row.as_le()[0].get(v, 0)) for v in system.vars] for row in rows])
        vertices = enumerate_vertices(system)
        assert vertices
        for vertex in vertices:
            slacks = np.array([row.slack(vertex.as_dict()) for row in rows])
            assert np.all(slacks >= -1e-12), (seed, str(vertex))
            active = A[np.abs(slacks) <= 1e-9]
            assert np.linalg.matrix_rank(active) == system.dim, (seed, str(vertex))
