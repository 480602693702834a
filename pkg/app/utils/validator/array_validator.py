import numpy as np
from pydantic import BaseModel


def _frozen_array(v, shape=None, finite=True) -> np.ndarray:
    try:
        array = np.array(v, dtype=float)
    except (TypeError, ValueError):
        raise TypeError("numeric array required")
    if shape is not None and array.shape != shape:
        raise ValueError(f"expected shape {shape}, got {array.shape}")
    if finite and not np.all(np.isfinite(array)):
        raise ValueError("array components must be finite")
    array.setflags(write=False)
    return array


class Vector3(np.ndarray):
    """Finite 3-vector stored as a read-only numpy array"""

    @classmethod
    def __get_validators__(cls):
        yield cls.validate

    @classmethod
    def validate(cls, v):
        return _frozen_array(v, shape=(3,))


class Matrix3(np.ndarray):
    """Finite 3x3 matrix stored as a read-only numpy array"""

    @classmethod
    def __get_validators__(cls):
        yield cls.validate

    @classmethod
    def validate(cls, v):
        return _frozen_array(v, shape=(3, 3))


class FloatArray(np.ndarray):
    """Read-only float array of any shape; NaN allowed for masked grid cells"""

    @classmethod
    def __get_validators__(cls):
        yield cls.validate

    @classmethod
    def validate(cls, v):
        return _frozen_array(v, finite=False)


class IntArray(np.ndarray):
    @classmethod
    def __get_validators__(cls):
        yield cls.validate

    @classmethod
    def validate(cls, v):
        array = np.array(v, dtype=np.int8)
        array.setflags(write=False)
        return array


class FrozenModel(BaseModel):
    """Immutable value object shared between threads"""

    class Config:
        allow_mutation = False
        arbitrary_types_allowed = True
