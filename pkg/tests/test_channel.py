import json

import numpy as np
import pydantic
import pytest

from bicrates.dmbic.channel import (
    DmBicChannel, FactoredInput, SimpleInput, TimeSharedInput, channel_to_dict, input_to_dict, load_channel,
    load_input, save_json,
)
from bicrates.dmbic.info import h2, joint_from_factored, mutual_info
from bicrates.errors import ValidationError


def test_channel_rejects_unnormalized():
    """A conditional slice that does not sum to one is refused with its index."""
    with pytest.raises(ValidationError, match='p1 slice'):
        DmBicChannel(p1=[[0.9, 0.2], [0.1, 0.9]], p2=np.full((2, 2, 2), 0.5), p3=np.eye(2))


def test_channel_rejects_alphabet_mismatch():
    """p2 must agree with p1 and p3 on the input alphabets."""
    with pytest.raises(ValidationError):
        DmBicChannel(p1=np.eye(3), p2=np.full((2, 2, 2), 0.5), p3=np.eye(2))


def test_channel_tables_are_read_only(bsc_channel):
    """Stored tables cannot be modified in place."""
    with pytest.raises(ValueError):
        bsc_channel.p1[0, 0] = 0.5


def test_load_sample_files(data_dir, bsc_channel):
    """The sample channel and inputs load and match the fixture."""
    ch = load_channel(f"{data_dir}/bsc_channel.json")
    assert np.allclose(ch.p2, bsc_channel.p2)
    assert isinstance(load_input(f"{data_dir}/simple_input.json"), SimpleInput)
    factored = load_input(f"{data_dir}/factored_input.json")
    assert isinstance(factored, FactoredInput)
    factored.check_against(ch)
    assert factored.sizes == {'Q': 1, 'U1': 2, 'V1': 2, 'V2': 2, 'U2': 2}


def test_load_flat_tables(tmp_path, bsc_channel):
    """Flat row-major lists are reshaped by the declared sizes."""
    data = channel_to_dict(bsc_channel)
    data['p2'] = np.asarray(data['p2']).ravel().tolist()
    path = tmp_path / 'flat.json'
    save_json(data, path)
    assert np.allclose(load_channel(path).p2, bsc_channel.p2)


def test_load_errors(tmp_path):
    """Missing files, bad JSON and unknown keys are validation errors."""
    with pytest.raises(ValidationError):
        load_channel(tmp_path / 'missing.json')
    bad = tmp_path / 'bad.json'
    bad.write_text('{not json')
    with pytest.raises(ValidationError):
        load_channel(bad)
    extra = tmp_path / 'extra.json'
    extra.write_text(json.dumps({'p1': [[1]], 'p2': [[[1]]], 'p3': [[1]], 'noise': 1}))
    with pytest.raises(pydantic.ValidationError):
        load_channel(extra)


def test_input_dict_roundtrip(tmp_path, simple_input):
    """A saved simple input reads back unchanged."""
    path = tmp_path / 'inp.json'
    save_json(input_to_dict(simple_input), path)
    back = load_input(path)
    assert np.allclose(back.pX2, simple_input.pX2)


def test_factored_input_shape_checks():
    """pV1V2 must be indexed [v1, v2, u1, q] consistently with f."""
    with pytest.raises(ValidationError):
        FactoredInput(pQ=[1.0], pU1=[[1.0]], pV1V2=np.full((2, 2, 2, 1), 0.25), pU2=[[1.0]],
                      pX2=[[[0.5]], [[0.5]]], f=np.zeros((1, 2, 2), dtype=int))


def time_shared(**overrides):
    tables = dict(pQ=[0.25, 0.75], pU1=np.full((2, 2), 0.5), pX1=np.full((2, 2, 2), 0.5),
                  pU2=np.ones((1, 2)), pX2=np.full((2, 1, 2), 0.5))
    tables.update(overrides)
    return TimeSharedInput(**tables)


def test_time_shared_input_checks():
    """Q weights sum to one and every table carries the same q axis."""
    assert time_shared().pQ.shape == (2,)
    with pytest.raises(ValidationError):
        time_shared(pQ=[0.25, 0.5])
    with pytest.raises(ValidationError):
        time_shared(pU1=np.full((2, 3), 0.5))
    with pytest.raises(ValidationError):
        time_shared(pX1=np.full((2, 3, 2), 0.5))
    with pytest.raises(ValidationError):
        time_shared(pX2=np.full((2, 1, 2), 0.6))


def test_joint_sums_to_one(bsc_channel, simple_input):
    """The joint law is a pmf over the simple axes."""
    joint = joint_from_factored(bsc_channel, simple_input)
    assert joint.axes == ('U1', 'X1', 'U2', 'X2', 'Y1', 'Y2', 'Y3')
    assert joint.table.sum() == pytest.approx(1.0, abs=1e-12)


def test_joint_matches_chain_product(bsc_channel, simple_input):
    """Every entry equals the product of the factors."""
    joint = joint_from_factored(bsc_channel, simple_input)
    u1, x1, u2, x2, y1, y2, y3 = 1, 0, 0, 1, 1, 1, 0
    expected = (simple_input.pU1[u1] * simple_input.pX1[x1, u1] * simple_input.pU2[u2]
                * simple_input.pX2[x2, u2] * bsc_channel.p1[y1, x1] * bsc_channel.p2[y2, x1, x2]
                * bsc_channel.p3[y3, x2])
    assert joint.table[u1, x1, u2, x2, y1, y2, y3] == pytest.approx(expected, abs=1e-12)


def test_mutual_info_bsc(bsc_channel):
    """I(X1;Y1) with uniform X1 over BSC(0.1) is 1 - h2(0.1)."""
    inp = SimpleInput(pU1=np.ones(1), pX1=np.full((2, 1), 0.5), pU2=np.ones(1), pX2=np.full((2, 1), 0.5))
    joint = joint_from_factored(bsc_channel, inp)
    assert mutual_info(joint, ['X1'], ['Y1']) == pytest.approx(1 - h2(0.1), abs=1e-12)
    # X2 alone says nothing about Y2 = X1 xor X2 xor noise
    assert mutual_info(joint, ['X2'], ['Y2']) == pytest.approx(0.0, abs=1e-12)
    assert mutual_info(joint, ['X2'], ['Y2'], ['X1']) == pytest.approx(1 - h2(0.2), abs=1e-12)


def test_entropy_unknown_variable(bsc_channel, simple_input):
    """Asking for a variable the joint does not carry is an error."""
    joint = joint_from_factored(bsc_channel, simple_input)
    with pytest.raises(ValidationError):
        joint.entropy(['V1'])
