"""
Split-rate derivation of the binning + superposition region.

The raw system lists what each receiver needs to decode its codewords in
terms of split rates: R1 = R1c + R1p, R2 = R2c + R2p, R3 = T3 + S3, with bin
rates R1', R2' covering the dependence between V1 and V2. Eliminating the
split rates must give back the LEM1 region.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from bicrates.config import DEFAULT_SAMPLES, DEFAULT_SEED, DEFAULT_TOL
from bicrates.dmbic.channel import DmBicChannel, FactoredInput
from bicrates.dmbic.regions import BINNING_VALIDITY, I, bic_law, eval_dm_region, rhat_outer
from bicrates.logging_config import get_logger
from bicrates.oracle import MCResult, mc_region_equal
from bicrates.polyhedra import GE, LE, LinSystem, fme_eliminate_all, remove_redundant

logger = get_logger('dmbic.derive')

SPLIT_VARS = ('R1c', 'R1p', 'R2c', 'R2p', "R1'", "R2'", 'T3', 'S3')
RATES = ('R1', 'R2', 'R3')

RAW_ATOMS = {
    'a': I('V1', 'Y1', 'U1,Q'),
    'b1': I('V1', 'Y1', 'Q'),
    'c': I('V2', 'Y2', 'U1,U2,Q'),
    'd': I('V2,U2', 'Y2', 'U1,Q'),
    'e': I('V2', 'Y2', 'U2,Q'),
    'g': I('V2,U2', 'Y2', 'Q'),
    's': I('X2', 'Y3', 'U2,Q'),
    't': I('X2', 'Y3', 'Q'),
    'm': I('V1', 'V2', 'U1,Q'),
}


def raw_split_system(values: Dict[str, float]) -> LinSystem:
    """Receiver decoding constraints over the eight split rates."""
    v = values
    rows = [
        ({"R1'": 1, "R2'": 1}, GE, v['m'], 'covering'),
        ({'R1p': 1, "R1'": 1}, LE, v['a'], 'rx1_satellite'),
        ({'R1c': 1, 'R2c': 1, 'R1p': 1, "R1'": 1}, LE, v['b1'], 'rx1_joint'),
        ({'R2p': 1, "R2'": 1}, LE, v['c'], 'rx2_satellite'),
        ({'R2p': 1, "R2'": 1, 'T3': 1}, LE, v['d'], 'rx2_satellite_common3'),
        ({'R1c': 1, 'R2c': 1, 'R2p': 1, "R2'": 1}, LE, v['e'], 'rx2_joint'),
        ({'R1c': 1, 'R2c': 1, 'R2p': 1, "R2'": 1, 'T3': 1}, LE, v['g'], 'rx2_joint_common3'),
        ({'S3': 1}, LE, v['s'], 'rx3_private'),
        ({'T3': 1, 'S3': 1}, LE, v['t'], 'rx3_joint'),
    ]
    return LinSystem.build(SPLIT_VARS, rows, nonneg=SPLIT_VARS, name='raw-split')


def project_split_system(raw: LinSystem) -> LinSystem:
    """Adjoin R1, R2, R3 through the splitting identities and eliminate every split rate."""
    system = raw.substitute('R1p', {'R1': 1, 'R1c': -1})
    system = system.substitute('R2p', {'R2': 1, 'R2c': -1})
    system = system.substitute('S3', {'R3': 1, 'T3': -1})
    projected = fme_eliminate_all(system, ['R1c', 'R2c', 'T3', "R1'", "R2'"])
    order = tuple(r for r in RATES if r in projected.vars)
    return LinSystem(order, projected.ineqs, frozenset(RATES), 'projection', projected.flags)


def replacement_input(inp: FactoredInput) -> FactoredInput:
    """
    The law with V1 = V2 = U1.

    V alphabets take the size of U1 and x1 = f'(u1), where f' picks the most
    likely x1 given u1 under the original law.
    """
    n_u1 = inp.f.shape[0]
    n_q = inp.pQ.shape[0]
    pV = np.zeros((n_u1, n_u1, n_u1, n_q))
    for u in range(n_u1):
        pV[u, u, u, :] = 1.0
    n_x1 = int(inp.f.max()) + 1
    weights = np.zeros((n_u1, n_x1))
    joint_v = np.einsum('q,uq,bcuq->ubc', inp.pQ, inp.pU1, inp.pV1V2)
    for (u, b, c), w in np.ndenumerate(joint_v):
        weights[u, inp.f[u, b, c]] += w
    choice = weights.argmax(axis=1)
    f = np.broadcast_to(choice[:, None, None], (n_u1, n_u1, n_u1)).astype(int)
    return FactoredInput(pQ=inp.pQ, pU1=inp.pU1, pV1V2=pV, pU2=inp.pU2, pX2=inp.pX2, f=f)


@dataclass
class DerivationReport:
    binning_margin: float
    values: Dict[str, float]
    projection: Optional[LinSystem] = None
    lemma: Optional[LinSystem] = None
    comparison: Optional[MCResult] = None
    redundant_rows: List[str] = field(default_factory=list)
    skipped: bool = False
    replacement_region: Optional[LinSystem] = None
    relaxed_region: Optional[LinSystem] = None
    replacement_check: Optional[MCResult] = None

    @property
    def ok(self) -> bool:
        if self.skipped:
            return self.replacement_check is None or self.replacement_check.equal
        return self.comparison is not None and self.comparison.equal

    def report(self) -> Dict[str, object]:
        out = {'BINNING_MARGIN': self.binning_margin, 'SKIPPED': self.skipped, 'OK': self.ok}
        if not self.skipped:
            out['PROJECTION_ROWS'] = len(self.projection.ineqs)
            out['LEMMA_ROWS'] = len(self.lemma.ineqs)
            out['REDUNDANT_ROWS'] = ','.join(self.redundant_rows) or '-'
            out['SAMPLES'] = self.comparison.samples
            out['SUBSET_PROJECTION_LEMMA'] = self.comparison.subset_ab
            out['SUBSET_LEMMA_PROJECTION'] = self.comparison.subset_ba
        else:
            out['REPLACEMENT'] = 'V1=V2=U1'
            out['REPLACEMENT_EQUALS_RELAXED'] = self.replacement_check.equal if self.replacement_check else '-'
        return out


def derive_theorem1(ch: DmBicChannel, inp: FactoredInput, samples: int = DEFAULT_SAMPLES,
                    seed: int = DEFAULT_SEED, tol: float = DEFAULT_TOL) -> DerivationReport:
    """
    Eliminate the split rates and compare the projection with LEM1 by sampling.

    When the binning validity fails the comparison is skipped; the report then
    carries LEM1 at the V1 = V2 = U1 law and the relaxed region, compared with
    each other.
    """
    law = bic_law(ch, inp)
    values = {name: law.mi(atom) for name, atom in RAW_ATOMS.items()}
    margin = law.value(BINNING_VALIDITY)
    if margin < -tol:
        logger.warning(f"binning validity fails (margin {margin:.3e}); reporting the V1=V2=U1 law")
        alt = replacement_input(inp)
        replacement = eval_dm_region('LEM1', ch, alt)
        relaxed = rhat_outer(ch, alt)
        check = mc_region_equal(replacement, relaxed, samples, tol, seed)
        return DerivationReport(margin, values, skipped=True, replacement_region=replacement,
                                relaxed_region=relaxed, replacement_check=check)

    projection = project_split_system(raw_split_system(values))
    lemma = eval_dm_region('LEM1', ch, inp)
    comparison = mc_region_equal(projection, lemma, samples, tol, seed)
    reduced = remove_redundant(lemma)
    kept = {ineq.label for ineq in reduced.ineqs}
    redundant = [ineq.label for ineq in lemma.ineqs if ineq.label not in kept]
    logger.info(f"derive: {len(projection.ineqs)} projected rows, equal={comparison.equal}, "
                f"redundant LEM1 rows {redundant}")
    return DerivationReport(margin, values, projection, lemma, comparison, redundant)
