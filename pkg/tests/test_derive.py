import numpy as np
import pytest

from bicrates.dmbic.channel import FactoredInput
from bicrates.dmbic.derive import (
    SPLIT_VARS, derive_theorem1, project_split_system, raw_split_system, replacement_input,
)
from bicrates.dmbic.regions import binning_margin, eval_dm_region
from bicrates.oracle import InstanceSpec, random_instance


def binned_instance(seed):
    return random_instance(InstanceSpec(seed=seed, input_kind='factored', condition='eq11'))


@pytest.fixture
def copied_satellites():
    """V1 = V2 uniform given U1 and X1 = U1: one bit of binning cost, nothing decoded from V."""
    pV = np.zeros((2, 2, 2, 1))
    for v in range(2):
        pV[v, v, :, 0] = 0.5
    f = np.zeros((2, 2, 2), dtype=int)
    f[1] = 1
    return FactoredInput(pQ=np.ones(1), pU1=np.full((2, 1), 0.5), pV1V2=pV, pU2=np.full((2, 1), 0.5),
                         pX2=np.array([[[0.8], [0.2]], [[0.2], [0.8]]]), f=f)


def test_raw_system_shape():
    """Nine receiver rows over the eight split rates."""
    values = dict.fromkeys(['a', 'b1', 'c', 'd', 'e', 'g', 's', 't', 'm'], 1.0)
    raw = raw_split_system(values)
    assert raw.vars == SPLIT_VARS
    assert len(raw.ineqs) == 9
    projected = project_split_system(raw)
    assert set(projected.vars) == {'R1', 'R2', 'R3'}


def test_projection_matches_lemma():
    """Eliminating the split rates gives back the LEM1 region."""
    for seed in range(3):
        ch, inp = binned_instance(seed)
        result = derive_theorem1(ch, inp, samples=2000, seed=seed)
        assert not result.skipped
        assert result.binning_margin >= 1e-6
        assert result.ok, (seed, result.comparison.witness)
        assert set(result.redundant_rows) <= {i.label for i in result.lemma.ineqs}


@pytest.mark.slow
def test_projection_matches_lemma_full():
    """Fifty binary instances, 10^4 samples each."""
    for seed in range(50):
        ch, inp = binned_instance(seed)
        assert derive_theorem1(ch, inp, samples=10000, seed=seed).ok


def test_failed_binning_reports_replacement(bsc_channel, copied_satellites):
    """A negative margin skips the comparison and reports the V1 = V2 = U1 law."""
    assert binning_margin(bsc_channel, copied_satellites) == pytest.approx(-1.0, abs=1e-9)
    result = derive_theorem1(bsc_channel, copied_satellites, samples=2000)
    assert result.skipped
    assert result.projection is None
    assert result.replacement_check.equal
    assert result.ok
    report = result.report()
    assert report['REPLACEMENT'] == 'V1=V2=U1'
    assert report['SKIPPED'] is True


def test_replacement_input_copies_cloud(copied_satellites):
    """The replacement law puts all satellite mass on the cloud symbol and keeps X1 = U1."""
    alt = replacement_input(copied_satellites)
    assert alt.sizes['V1'] == 2
    for u in range(2):
        assert alt.pV1V2[u, u, u, 0] == 1.0
        assert np.all(alt.f[u] == u)


def test_independent_satellites_cost_nothing(bsc_channel):
    """With V1 and V2 independent given U1 the covering bound is zero."""
    pV = np.full((2, 2, 2, 1), 0.25)
    f = np.zeros((2, 2, 2), dtype=int)
    f[:, 1, :] = 1
    inp = FactoredInput(pQ=np.ones(1), pU1=np.full((2, 1), 0.5), pV1V2=pV, pU2=np.full((2, 1), 0.5),
                        pX2=np.array([[[0.8], [0.2]], [[0.2], [0.8]]]), f=f)
    result = derive_theorem1(bsc_channel, inp, samples=1000)
    assert result.values['m'] == pytest.approx(0.0, abs=1e-12)
    assert result.ok


def test_lemma_rows_labelled():
    """LEM1 carries the two R3-only rows beyond THM1."""
    ch, inp = binned_instance(0)
    labels = {i.label for i in eval_dm_region('LEM1', ch, inp).ineqs}
    assert {'rate3_cloud', 'rate3_private'} <= labels
