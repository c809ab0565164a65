"""
Channel and input-law types for the discrete memoryless BIC, plus their
structured-text (JSON) file formats.

Tables are indexed output-first: ``p1[y1, x1]``, ``p2[y2, x1, x2]``,
``p3[y3, x2]``, ``pX1[x1, u1]`` and so on. Every conditional slice sums to one
over its leading axes.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from bicrates.errors import ValidationError
from bicrates.logging_config import get_logger

logger = get_logger('dmbic.channel')

NORM_TOL = 1e-9


def _table(value, name: str, ndim: int) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim != ndim:
        raise ValidationError(f"{name} must have {ndim} axes, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} has non-finite entries")
    if np.any(arr < 0):
        raise ValidationError(f"{name} has negative entries")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


def _check_conditional(arr: np.ndarray, name: str, out_axes: int = 1):
    sums = arr.sum(axis=tuple(range(out_axes)))
    bad = np.abs(sums - 1.0) > NORM_TOL
    if np.any(bad):
        where = tuple(int(i) for i in np.argwhere(bad)[0])
        raise ValidationError(f"{name} slice {where} sums to {sums[where]:.12g}, not 1")


@dataclass(frozen=True, eq=False)
class DmBicChannel:
    """p(y1|x1) p(y2|x1,x2) p(y3|x2)."""

    p1: np.ndarray
    p2: np.ndarray
    p3: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'p1', _table(self.p1, 'p1', 2))
        object.__setattr__(self, 'p2', _table(self.p2, 'p2', 3))
        object.__setattr__(self, 'p3', _table(self.p3, 'p3', 2))
        for name in ('p1', 'p2', 'p3'):
            _check_conditional(getattr(self, name), name)
        if self.p2.shape[1] != self.p1.shape[1]:
            raise ValidationError(f"p2 expects |X1|={self.p2.shape[1]}, p1 has {self.p1.shape[1]}")
        if self.p2.shape[2] != self.p3.shape[1]:
            raise ValidationError(f"p2 expects |X2|={self.p2.shape[2]}, p3 has {self.p3.shape[1]}")

    @property
    def sizes(self) -> Dict[str, int]:
        return {
            'X1': self.p1.shape[1], 'X2': self.p3.shape[1],
            'Y1': self.p1.shape[0], 'Y2': self.p2.shape[0], 'Y3': self.p3.shape[0],
        }


@dataclass(frozen=True, eq=False)
class SimpleInput:
    """p(u1) p(x1|u1) p(u2) p(x2|u2)."""

    pU1: np.ndarray
    pX1: np.ndarray
    pU2: np.ndarray
    pX2: np.ndarray

    def __post_init__(self):
        for name, ndim in (('pU1', 1), ('pX1', 2), ('pU2', 1), ('pX2', 2)):
            object.__setattr__(self, name, _table(getattr(self, name), name, ndim))
            _check_conditional(getattr(self, name), name)
        if self.pX1.shape[1] != self.pU1.shape[0]:
            raise ValidationError(f"pX1 has {self.pX1.shape[1]} columns for |U1|={self.pU1.shape[0]}")
        if self.pX2.shape[1] != self.pU2.shape[0]:
            raise ValidationError(f"pX2 has {self.pX2.shape[1]} columns for |U2|={self.pU2.shape[0]}")

    def check_against(self, ch: DmBicChannel):
        if self.pX1.shape[0] != ch.sizes['X1'] or self.pX2.shape[0] != ch.sizes['X2']:
            raise ValidationError(
                f"input alphabets |X1|={self.pX1.shape[0]}, |X2|={self.pX2.shape[0]} do not match "
                f"channel |X1|={ch.sizes['X1']}, |X2|={ch.sizes['X2']}")


@dataclass(frozen=True, eq=False)
class TimeSharedInput:
    """
    Two simple laws mixed by a time-sharing variable Q.

    Tables carry a trailing q axis: ``pU1[u1, q]``, ``pX1[x1, u1, q]``,
    ``pU2[u2, q]``, ``pX2[x2, u2, q]``. The auxiliaries seen by the region
    formulas are the pairs (U1, Q) and (U2, Q).
    """

    pQ: np.ndarray
    pU1: np.ndarray
    pX1: np.ndarray
    pU2: np.ndarray
    pX2: np.ndarray

    def __post_init__(self):
        for name, ndim in (('pQ', 1), ('pU1', 2), ('pX1', 3), ('pU2', 2), ('pX2', 3)):
            object.__setattr__(self, name, _table(getattr(self, name), name, ndim))
            _check_conditional(getattr(self, name), name)
        q = self.pQ.shape[0]
        expected = {
            'pU1': (self.pU1.shape[0], q), 'pX1': (self.pX1.shape[0], self.pU1.shape[0], q),
            'pU2': (self.pU2.shape[0], q), 'pX2': (self.pX2.shape[0], self.pU2.shape[0], q),
        }
        for name, shape in expected.items():
            if getattr(self, name).shape != shape:
                raise ValidationError(f"{name} has shape {getattr(self, name).shape}, expected {shape}")

    def check_against(self, ch: DmBicChannel):
        if self.pX1.shape[0] != ch.sizes['X1'] or self.pX2.shape[0] != ch.sizes['X2']:
            raise ValidationError("time-shared input alphabets do not match the channel")


@dataclass(frozen=True, eq=False)
class FactoredInput:
    """p(q) p(u1|q) p(v1,v2|u1,q) p(u2|q) p(x2|u2,q) with x1 = f(u1, v1, v2)."""

    pQ: np.ndarray
    pU1: np.ndarray
    pV1V2: np.ndarray
    pU2: np.ndarray
    pX2: np.ndarray
    f: np.ndarray

    def __post_init__(self):
        for name, ndim, out_axes in (('pQ', 1, 1), ('pU1', 2, 1), ('pV1V2', 4, 2),
                                     ('pU2', 2, 1), ('pX2', 3, 1)):
            object.__setattr__(self, name, _table(getattr(self, name), name, ndim))
            _check_conditional(getattr(self, name), name, out_axes)
        f = np.asarray(self.f)
        if f.ndim != 3 or not np.issubdtype(f.dtype, np.integer):
            raise ValidationError(f"f must be a 3-axis integer array, got shape {f.shape} dtype {f.dtype}")
        if np.any(f < 0):
            raise ValidationError("f maps to a negative symbol")
        f = f.copy()
        f.setflags(write=False)
        object.__setattr__(self, 'f', f)
        q = self.pQ.shape[0]
        u1, v1, v2 = f.shape
        expected = {
            'pU1': (u1, q), 'pV1V2': (v1, v2, u1, q),
            'pU2': (self.pU2.shape[0], q), 'pX2': (self.pX2.shape[0], self.pU2.shape[0], q),
        }
        for name, shape in expected.items():
            if getattr(self, name).shape != shape:
                raise ValidationError(f"{name} has shape {getattr(self, name).shape}, expected {shape}")

    @property
    def sizes(self) -> Dict[str, int]:
        u1, v1, v2 = self.f.shape
        return {'Q': self.pQ.shape[0], 'U1': u1, 'V1': v1, 'V2': v2, 'U2': self.pU2.shape[0]}

    def check_against(self, ch: DmBicChannel):
        if int(self.f.max()) >= ch.sizes['X1']:
            raise ValidationError(f"f maps to symbol {int(self.f.max())} outside |X1|={ch.sizes['X1']}")
        if self.pX2.shape[0] != ch.sizes['X2']:
            raise ValidationError(f"pX2 has |X2|={self.pX2.shape[0]}, channel has {ch.sizes['X2']}")


AnyInput = Union[SimpleInput, FactoredInput, TimeSharedInput]


class ChannelFile(BaseModel):
    model_config = ConfigDict(extra='forbid')

    sizes: Optional[Dict[str, int]] = None
    p1: List[Any]
    p2: List[Any]
    p3: List[Any]


class SimpleInputFile(BaseModel):
    model_config = ConfigDict(extra='forbid')

    kind: Literal['simple'] = 'simple'
    pU1: List[Any]
    pX1: List[Any]
    pU2: List[Any]
    pX2: List[Any]


class FactoredInputFile(BaseModel):
    model_config = ConfigDict(extra='forbid')

    kind: Literal['factored'] = 'factored'
    pQ: List[Any]
    pU1: List[Any]
    pV1V2: List[Any]
    pU2: List[Any]
    pX2: List[Any]
    f: List[Any]


def _reshape(values, shape, name):
    arr = np.asarray(values, dtype=float)
    if shape is not None and arr.ndim == 1 and len(shape) > 1:
        if arr.size != int(np.prod(shape)):
            raise ValidationError(f"{name} has {arr.size} entries, expected {int(np.prod(shape))}")
        arr = arr.reshape(shape)
    return arr


def _read_json(path) -> Dict[str, Any]:
    path = Path(path)
    try:
        return json.loads(path.read_text())
    except FileNotFoundError:
        raise ValidationError(f"file not found: {path}")
    except json.JSONDecodeError as e:
        raise ValidationError(f"{path} is not valid JSON: {e}")


def load_channel(path) -> DmBicChannel:
    """
    Read a channel spec file.

    Tensors are nested lists, or flat row-major lists when ``sizes`` gives
    the alphabet sizes.
    """
    data = ChannelFile.model_validate(_read_json(path))
    sizes = data.sizes or {}
    shape = (lambda *names: tuple(sizes[n] for n in names) if all(n in sizes for n in names) else None)
    ch = DmBicChannel(
        p1=_reshape(data.p1, shape('Y1', 'X1'), 'p1'),
        p2=_reshape(data.p2, shape('Y2', 'X1', 'X2'), 'p2'),
        p3=_reshape(data.p3, shape('Y3', 'X2'), 'p3'),
    )
    if sizes and any(ch.sizes.get(k) != v for k, v in sizes.items()):
        raise ValidationError(f"declared sizes {sizes} disagree with tensors {ch.sizes}")
    logger.debug(f"loaded channel {path} with sizes {ch.sizes}")
    return ch


def load_input(path) -> Union[SimpleInput, FactoredInput]:
    """Read a simple or factored input spec file (``kind`` selects the format)."""
    raw = _read_json(path)
    if raw.get('kind', 'simple') == 'factored':
        data = FactoredInputFile.model_validate(raw)
        return FactoredInput(
            pQ=np.asarray(data.pQ, dtype=float), pU1=np.asarray(data.pU1, dtype=float),
            pV1V2=np.asarray(data.pV1V2, dtype=float), pU2=np.asarray(data.pU2, dtype=float),
            pX2=np.asarray(data.pX2, dtype=float), f=np.asarray(data.f, dtype=int),
        )
    data = SimpleInputFile.model_validate(raw)
    return SimpleInput(
        pU1=np.asarray(data.pU1, dtype=float), pX1=np.asarray(data.pX1, dtype=float),
        pU2=np.asarray(data.pU2, dtype=float), pX2=np.asarray(data.pX2, dtype=float),
    )


def channel_to_dict(ch: DmBicChannel) -> Dict[str, Any]:
    return {'sizes': ch.sizes, 'p1': ch.p1.tolist(), 'p2': ch.p2.tolist(), 'p3': ch.p3.tolist()}


def input_to_dict(inp: Union[SimpleInput, FactoredInput]) -> Dict[str, Any]:
    if isinstance(inp, FactoredInput):
        return {
            'kind': 'factored', 'pQ': inp.pQ.tolist(), 'pU1': inp.pU1.tolist(),
            'pV1V2': inp.pV1V2.tolist(), 'pU2': inp.pU2.tolist(), 'pX2': inp.pX2.tolist(),
            'f': inp.f.tolist(),
        }
    return {'kind': 'simple', 'pU1': inp.pU1.tolist(), 'pX1': inp.pX1.tolist(),
            'pU2': inp.pU2.tolist(), 'pX2': inp.pX2.tolist()}


def save_json(data: Dict[str, Any], path):
    Path(path).write_text(json.dumps(data, indent=2) + '\n')
