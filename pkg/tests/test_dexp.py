import numpy as np
import pytest

from bicrates.dmbic.channel import SimpleInput
from bicrates.dmbic.dexp import DEXP_KINDS, DEXP_REGION, dexp_formula, dexp_points
from bicrates.dmbic.info import joint_from_factored, mutual_info
from bicrates.dmbic.regions import eval_dm_region
from bicrates.errors import ValidationError
from bicrates.oracle import InstanceSpec, brute_vertices, random_instance
from bicrates.polyhedra import enumerate_vertices, pareto_filter

CONDITION = {'L3': 'cognizant', 'L4': 'cognizant', 'L5': 'oblivious', 'L6': 'oblivious'}


def same_points(left, right, tol=1e-9):
    return len(left) == len(right) and all(any(p.close_to(q, tol) for q in right) for p in left)


def check_formula(kind, seeds):
    for seed in seeds:
        ch, inp = random_instance(InstanceSpec(seed=seed, condition=CONDITION[kind]))
        system = eval_dm_region(DEXP_REGION[kind], ch, inp)
        formula = dexp_formula(kind, ch, inp)
        assert same_points(formula, pareto_filter(enumerate_vertices(system))), (kind, seed)
        assert same_points(formula, pareto_filter(brute_vertices(system))), (kind, seed)


@pytest.mark.parametrize('kind', DEXP_KINDS)
def test_formula_matches_vertex_enumeration(kind):
    """The closed-form points are the Pareto vertices of their region."""
    check_formula(kind, range(10))


@pytest.mark.slow
@pytest.mark.parametrize('kind', DEXP_KINDS)
def test_formula_matches_vertex_enumeration_full(kind):
    """The same agreement over 100 seeded instances per formula."""
    check_formula(kind, range(100))


def test_constant_cloud_point_a(bsc_channel, simple_input):
    """With U1 constant point A is (I(X1;Y1), 0, min(I(X2;Y3), I(U2;Y2) + I(X2;Y3|U2)))."""
    inp = SimpleInput(pU1=np.ones(1), pX1=(simple_input.pX1 @ simple_input.pU1)[:, None],
                      pU2=simple_input.pU2, pX2=simple_input.pX2)
    joint = joint_from_factored(bsc_channel, inp)
    expected = (
        mutual_info(joint, ['X1'], ['Y1']),
        0.0,
        min(mutual_info(joint, ['X2'], ['Y3']),
            mutual_info(joint, ['U2'], ['Y2']) + mutual_info(joint, ['X2'], ['Y3'], ['U2'])),
    )
    point = dexp_points('L3', bsc_channel, inp)['A']
    assert point.values == pytest.approx(expected, abs=1e-12)


def test_reduced_formula_has_two_points(bsc_channel, simple_input):
    """L4 and L6 give at most two points."""
    assert len(dexp_formula('L4', bsc_channel, simple_input)) <= 2
    assert len(dexp_formula('L6', bsc_channel, simple_input)) <= 2


def test_l5_branch():
    """Exactly one of the H/I and J branches is produced."""
    for seed in range(5):
        ch, inp = random_instance(InstanceSpec(seed=seed, condition='oblivious'))
        names = set(dexp_points('L5', ch, inp))
        assert ('J' in names) != ({'H', 'I'} <= names)


def test_unknown_formula(bsc_channel, simple_input):
    """Only the four closed forms exist."""
    with pytest.raises(ValidationError):
        dexp_points('L7', bsc_channel, simple_input)
