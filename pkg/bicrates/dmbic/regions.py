"""
Rate-region templates for the DM-BIC and their numeric evaluation.

A template is a list of rows ``coeffs . R  <=  sum(sign * I(A;B|C))`` written
over symbolic variables (Q, U1, V1, V2, U2, X1, X2, Y1, Y2, Y3). Evaluating a
template against a channel and an input law maps every symbol to axes of the
joint pmf and turns each row into an exact :class:`Inequality`.
"""

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from bicrates.dmbic.channel import DmBicChannel, FactoredInput, SimpleInput, TimeSharedInput
from bicrates.dmbic.info import JointPmf, joint_from_factored, mutual_info
from bicrates.errors import ValidationError
from bicrates.logging_config import get_logger
from bicrates.polyhedra import LE, NOT_ACHIEVABLE, Inequality, LinSystem

logger = get_logger('dmbic.regions')

RATES = ('R1', 'R2', 'R3')


@dataclass(frozen=True, order=True)
class Atom:
    """I(a;b|c) over symbols; the pair (a, b) is stored in sorted order."""

    a: Tuple[str, ...]
    b: Tuple[str, ...]
    c: Tuple[str, ...] = ()

    @classmethod
    def of(cls, a: Iterable[str], b: Iterable[str], c: Iterable[str] = ()) -> 'Atom':
        a, b, c = tuple(sorted(set(a))), tuple(sorted(set(b))), tuple(sorted(set(c)))
        if b < a:
            a, b = b, a
        return cls(a, b, c)

    def __str__(self):
        cond = f"|{','.join(self.c)}" if self.c else ''
        return f"I({','.join(self.a)};{','.join(self.b)}{cond})"


def I(a: str, b: str, c: str = '') -> Atom:
    """Shorthand: ``I('V1', 'Y1', 'U1,Q')``."""
    split = lambda s: [t for t in s.split(',') if t]
    return Atom.of(split(a), split(b), split(c))


@dataclass(frozen=True)
class TemplateRow:
    coeffs: Tuple[Tuple[str, int], ...]
    terms: Tuple[Tuple[int, Atom], ...]
    label: str

    @classmethod
    def of(cls, coeffs: Mapping[str, int], terms: Sequence[Tuple[int, Atom]], label: str) -> 'TemplateRow':
        merged: Dict[Atom, int] = {}
        for sign, atom in terms:
            merged[atom] = merged.get(atom, 0) + sign
        return cls(tuple(sorted((v, c) for v, c in coeffs.items() if c)),
                   tuple(sorted((s, a) for a, s in merged.items() if s)), label)

    def canonical(self):
        return self.coeffs, self.terms

    def __str__(self):
        lhs = ' + '.join(v if c == 1 else f"{c}*{v}" for v, c in self.coeffs)
        rhs = ' '.join(('+ ' if s > 0 else '- ') + (str(a) if abs(s) == 1 else f"{abs(s)}*{a}")
                       for s, a in self.terms)
        return f"{lhs} <= {rhs.lstrip('+ ')}"


@dataclass(frozen=True)
class RegionTemplate:
    kind: str
    rows: Tuple[TemplateRow, ...]
    # expressions that must be non-negative for the region to be achievable as written
    validity: Tuple[Tuple[Tuple[int, Atom], ...], ...] = ()
    factored: bool = False


def _row(coeffs, terms, label):
    return TemplateRow.of(coeffs, terms, label)


m_bin = I('V1', 'V2', 'U1,Q')

THM1_ROWS = (
    _row({'R1': 1}, [(1, I('V1', 'Y1', 'Q'))], 'rate1'),
    _row({'R2': 1}, [(1, I('V2', 'Y2', 'U2,Q'))], 'rate2'),
    _row({'R3': 1}, [(1, I('X2', 'Y3', 'Q'))], 'rate3'),
    _row({'R1': 1, 'R2': 1}, [(1, I('V1', 'Y1', 'U1,Q')), (1, I('V2', 'Y2', 'U2,Q')), (-1, m_bin)],
         'pair12_private'),
    _row({'R1': 1, 'R2': 1}, [(1, I('V1', 'Y1', 'Q')), (1, I('V2', 'Y2', 'U1,U2,Q')), (-1, m_bin)],
         'pair12_cloud'),
    _row({'R2': 1, 'R3': 1}, [(1, I('V2,U2', 'Y2', 'Q')), (1, I('X2', 'Y3', 'U2,Q'))], 'pair23'),
    _row({'R1': 1, 'R2': 1, 'R3': 1},
         [(1, I('V1', 'Y1', 'U1,Q')), (1, I('V2,U2', 'Y2', 'Q')), (1, I('X2', 'Y3', 'U2,Q')), (-1, m_bin)],
         'total_private'),
    _row({'R1': 1, 'R2': 1, 'R3': 1},
         [(1, I('V1', 'Y1', 'Q')), (1, I('V2,U2', 'Y2', 'U1,Q')), (1, I('X2', 'Y3', 'U2,Q')), (-1, m_bin)],
         'total_cloud'),
)

LEM1_EXTRA = (
    _row({'R3': 1}, [(1, I('V2,U2', 'Y2', 'U1,Q')), (1, I('X2', 'Y3', 'U2,Q'))], 'rate3_cloud'),
    _row({'R3': 1}, [(1, I('V1', 'Y1', 'U1,Q')), (1, I('V2,U2', 'Y2', 'U1,Q')), (1, I('X2', 'Y3', 'U2,Q')),
                     (-1, m_bin)], 'rate3_private'),
)

BINNING_VALIDITY = ((1, I('V1', 'Y1', 'U1,Q')), (1, I('V2', 'Y2', 'U1,U2,Q')), (-1, m_bin))

# region obtained when the binning validity fails and V1 = V2 = U1
RHAT_ROWS = (
    _row({'R3': 1}, [(1, I('X2', 'Y3', 'Q'))], 'rate3'),
    _row({'R3': 1}, [(1, I('U2', 'Y2', 'U1,Q')), (1, I('X2', 'Y3', 'U2,Q'))], 'rate3_cloud'),
    _row({'R1': 1, 'R2': 1}, [(1, I('U1', 'Y1', 'Q'))], 'pair12_rx1'),
    _row({'R1': 1, 'R2': 1}, [(1, I('U1', 'Y2', 'U2,Q'))], 'pair12_rx2'),
    _row({'R1': 1, 'R2': 1, 'R3': 1}, [(1, I('U1,U2', 'Y2', 'Q')), (1, I('X2', 'Y3', 'U2,Q'))], 'total'),
)

TEMPLATES: Dict[str, RegionTemplate] = {
    'THM1': RegionTemplate('THM1', THM1_ROWS, factored=True),
    'LEM1': RegionTemplate('LEM1', THM1_ROWS + LEM1_EXTRA, (BINNING_VALIDITY,), factored=True),
    'RHAT': RegionTemplate('RHAT', RHAT_ROWS, factored=True),
    'R1': RegionTemplate('R1', (
        _row({'R1': 1}, [(1, I('U1', 'Y1'))], 'rate1'),
        _row({'R3': 1}, [(1, I('X2', 'Y3'))], 'rate3'),
        _row({'R1': 1, 'R2': 1}, [(1, I('U1', 'Y1')), (1, I('X1', 'Y2', 'U1,U2'))], 'pair12'),
        _row({'R1': 1, 'R2': 1, 'R3': 1},
             [(1, I('U1', 'Y1')), (1, I('X1,U2', 'Y2', 'U1')), (1, I('X2', 'Y3', 'U2'))], 'total'),
    )),
    'R2': RegionTemplate('R2', (
        _row({'R2': 1}, [(1, I('U1', 'Y2', 'U2'))], 'rate2'),
        _row({'R3': 1}, [(1, I('X2', 'Y3'))], 'rate3'),
        _row({'R1': 1, 'R2': 1}, [(1, I('X1', 'Y1', 'U1')), (1, I('U1', 'Y2', 'U2'))], 'pair12'),
        _row({'R2': 1, 'R3': 1}, [(1, I('U1,U2', 'Y2')), (1, I('X2', 'Y3', 'U2'))], 'pair23'),
        _row({'R1': 1, 'R2': 1, 'R3': 1},
             [(1, I('X1', 'Y1', 'U1')), (1, I('U1,U2', 'Y2')), (1, I('X2', 'Y3', 'U2'))], 'total'),
    )),
    'R1P': RegionTemplate('R1P', (
        _row({'R1': 1}, [(1, I('U1', 'Y1'))], 'rate1'),
        _row({'R2': 1}, [(1, I('X1', 'Y2', 'U1,U2'))], 'rate2'),
        _row({'R3': 1}, [(1, I('X2', 'Y3'))], 'rate3'),
        _row({'R2': 1, 'R3': 1}, [(1, I('X1,U2', 'Y2', 'U1')), (1, I('X2', 'Y3', 'U2'))], 'pair23'),
    )),
    'R2P': RegionTemplate('R2P', (
        _row({'R1': 1}, [(1, I('X1', 'Y1', 'U1'))], 'rate1'),
        _row({'R2': 1}, [(1, I('U1', 'Y2', 'U2'))], 'rate2'),
        _row({'R3': 1}, [(1, I('X2', 'Y3'))], 'rate3'),
        _row({'R2': 1, 'R3': 1}, [(1, I('U1,U2', 'Y2')), (1, I('X2', 'Y3', 'U2'))], 'pair23'),
    )),
    'CAP_STRONG': RegionTemplate('CAP_STRONG', (
        _row({'R1': 1}, [(1, I('U1', 'Y1'))], 'rate1'),
        _row({'R2': 1}, [(1, I('X1', 'Y2', 'U1,X2'))], 'rate2'),
        _row({'R3': 1}, [(1, I('X2', 'Y3'))], 'rate3'),
        _row({'R2': 1, 'R3': 1}, [(1, I('X1,X2', 'Y2', 'U1'))], 'pair23'),
    )),
    'CAP_VSTRONG': RegionTemplate('CAP_VSTRONG', (
        _row({'R1': 1}, [(1, I('X1', 'Y1', 'U1'))], 'rate1'),
        _row({'R2': 1}, [(1, I('U1', 'Y2', 'X2'))], 'rate2'),
        _row({'R3': 1}, [(1, I('X2', 'Y3'))], 'rate3'),
    )),
}

REGION_KINDS = ('THM1', 'LEM1', 'R1', 'R2', 'R1P', 'R2P', 'CAP_STRONG', 'CAP_VSTRONG')

# reference systems for the two classical special cases of the THM1 template
MARTON_PRIVATE = (
    _row({'R1': 1}, [(1, I('V1', 'Y1', 'Q'))], 'rate1'),
    _row({'R2': 1}, [(1, I('V2', 'Y2', 'Q'))], 'rate2'),
    _row({'R1': 1, 'R2': 1}, [(1, I('V1', 'Y1', 'U1,Q')), (1, I('V2', 'Y2', 'Q')), (-1, m_bin)], 'sum_a'),
    _row({'R1': 1, 'R2': 1}, [(1, I('V1', 'Y1', 'Q')), (1, I('V2', 'Y2', 'U1,Q')), (-1, m_bin)], 'sum_b'),
)

HAN_KOBAYASHI_COMPACT = (
    _row({'R2': 1}, [(1, I('X1', 'Y2', 'U2,Q'))], 'rate2'),
    _row({'R3': 1}, [(1, I('X2', 'Y3', 'Q'))], 'rate3'),
    _row({'R2': 1, 'R3': 1}, [(1, I('X1,U2', 'Y2', 'Q')), (1, I('X2', 'Y3', 'U2,Q'))], 'sum'),
)


def reduce_template(rows: Iterable[TemplateRow], constants: Iterable[str] = (), zero_rates: Iterable[str] = (),
                    rename: Optional[Mapping[str, str]] = None) -> List[TemplateRow]:
    """
    Symbolic specialization of template rows.

    Constant symbols are removed from every atom (I(.;.|const) = I(.;.) and
    I(const;.) = 0), ``rename`` identifies symbols, and rates in ``zero_rates``
    are fixed to zero (a face of the region). Rows left without rates are
    dropped, and identical rows are kept once.
    """
    constants, zero_rates, rename = set(constants), set(zero_rates), dict(rename or {})
    seen, out = set(), []
    for row in rows:
        coeffs = {v: c for v, c in row.coeffs if v not in zero_rates}
        if not coeffs:
            continue
        terms = []
        for sign, atom in row.terms:
            parts = [[rename.get(s, s) for s in part if s not in constants] for part in (atom.a, atom.b, atom.c)]
            a, b, c = (set(p) for p in parts)
            a, b = a - c, b - c
            if not a or not b:
                continue
            terms.append((sign, Atom.of(a, b, c)))
        reduced = TemplateRow.of(coeffs, terms, row.label)
        if reduced.canonical() not in seen:
            seen.add(reduced.canonical())
            out.append(reduced)
    return out


@dataclass(frozen=True, eq=False)
class BicLaw:
    """A joint pmf plus the axes each template symbol stands for."""

    joint: JointPmf
    symbols: Mapping[str, Tuple[str, ...]]

    def expand(self, names: Iterable[str]) -> Tuple[str, ...]:
        axes: List[str] = []
        for name in names:
            if name not in self.symbols:
                raise ValidationError(f"symbol {name} is not defined for this input law")
            axes.extend(a for a in self.symbols[name] if a not in axes)
        return tuple(axes)

    def mi(self, atom: Atom) -> float:
        return mutual_info(self.joint, self.expand(atom.a), self.expand(atom.b), self.expand(atom.c))

    def value(self, terms: Iterable[Tuple[int, Atom]]) -> float:
        return sum(sign * self.mi(atom) for sign, atom in terms)


def bic_law(ch: DmBicChannel, inp) -> BicLaw:
    """
    Wrap the joint law of ``(ch, inp)`` with its symbol map.

    Satellite auxiliaries carry their cloud centre: V1 and V2 stand for
    (U1, V1) and (U1, V2). A time-shared input exposes (U1, Q) and (U2, Q)
    as its auxiliaries.
    """
    joint = joint_from_factored(ch, inp)
    base = {name: (name,) for name in ('X1', 'X2', 'Y1', 'Y2', 'Y3')}
    if isinstance(inp, FactoredInput):
        base.update(Q=('Q',), U1=('U1',), U2=('U2',), V1=('U1', 'V1'), V2=('U1', 'V2'))
    elif isinstance(inp, TimeSharedInput):
        base.update(Q=(), U1=('U1', 'Q'), U2=('U2', 'Q'))
    else:
        base.update(Q=(), U1=('U1',), U2=('U2',))
    return BicLaw(joint, base)


def evaluate_template(template: RegionTemplate, law: BicLaw, name: str = '') -> LinSystem:
    rows = []
    for row in template.rows:
        rows.append(Inequality.of(dict(row.coeffs), LE, law.value(row.terms), row.label))
    flags = set()
    for expr in template.validity:
        margin = law.value(expr)
        if margin < 0:
            flags.add(NOT_ACHIEVABLE)
            logger.warning(f"{template.kind}: binning validity fails with margin {margin:.3e} bits")
    return LinSystem.build(RATES, rows, nonneg=RATES, name=name or template.kind, flags=flags)


def eval_dm_region(kind: str, ch: DmBicChannel, inp) -> LinSystem:
    """
    Evaluate region ``kind`` at ``(ch, inp)`` as a system over (R1, R2, R3).

    THM1, LEM1 (and RHAT) need a factored input; the other kinds take a simple
    or time-shared input. LEM1 is returned even when the binning validity
    fails, flagged ``not-achievable-as-is``.
    """
    if kind not in TEMPLATES:
        raise ValidationError(f"unknown region kind {kind!r}; choose from {', '.join(REGION_KINDS)}")
    template = TEMPLATES[kind]
    if template.factored != isinstance(inp, FactoredInput):
        expected = 'a factored' if template.factored else 'a simple'
        raise ValidationError(f"region {kind} needs {expected} input, got {type(inp).__name__}")
    law = bic_law(ch, inp)
    system = evaluate_template(template, law)
    logger.debug(f"evaluated {kind}: {system.rhs_by_label()}")
    return system


def binning_margin(ch: DmBicChannel, inp: FactoredInput) -> float:
    """I(V1;Y1|U1,Q) + I(V2;Y2|U1,U2,Q) - I(V1;V2|U1,Q)."""
    return bic_law(ch, inp).value(BINNING_VALIDITY)


def rhat_outer(ch: DmBicChannel, inp: FactoredInput) -> LinSystem:
    """Relaxed region used when the binning validity fails."""
    return eval_dm_region('RHAT', ch, inp)


def info_terms(ch: DmBicChannel, inp, atoms: Mapping[str, Atom]) -> Dict[str, float]:
    """Evaluate named atoms at one law."""
    law = bic_law(ch, inp)
    return {name: law.mi(atom) for name, atom in atoms.items()}
