import textwrap

import numpy as np
import pytest

from app.utils.validator import OrbitParams


def cw_rk4(kappa: float, r0, v0, dt, steps: int = 2000) -> np.ndarray:
    """
    Fixed-step RK4 integration of the linearized relative-motion equations
    x'' = 3 k^2 x + 2 k y', y'' = -2 k x', z'' = -k^2 z.

    Args:
      r0, v0: Initial positions and velocities, shape (..., 3).
      dt: Integration spans, scalar or shape (...).

    Returns:
      np.ndarray: Final positions, shape (..., 3).
    """
    state = np.concatenate(np.broadcast_arrays(np.asarray(r0, float), np.asarray(v0, float)), axis=-1)
    h = (np.asarray(dt, dtype=float) / steps)[..., None]

    def deriv(s):
        x, _, z, vx, vy, vz = np.moveaxis(s, -1, 0)
        ax = 3.0 * kappa ** 2 * x + 2.0 * kappa * vy
        ay = -2.0 * kappa * vx
        az = -(kappa ** 2) * z
        return np.stack([vx, vy, vz, ax, ay, az], axis=-1)

    for _ in range(steps):
        k1 = deriv(state)
        k2 = deriv(state + 0.5 * h * k1)
        k3 = deriv(state + 0.5 * h * k2)
        k4 = deriv(state + h * k3)
        state = state + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return state[..., :3]


@pytest.fixture
def orbit_400() -> OrbitParams:
    """Target on a 400 km circular Earth orbit"""
    return OrbitParams.from_altitude(400.0)


@pytest.fixture
def orbit_fast() -> OrbitParams:
    return OrbitParams.from_kappa(1.1e-3)


@pytest.fixture
def cw_oracle():
    return cw_rk4


@pytest.fixture
def rng():
    return np.random.default_rng(20240519)


@pytest.fixture
def write_scenario(tmp_path):
    """Writes a YAML scenario into the test folder and returns its path"""

    def _write(text: str, name: str = "scenario.yaml") -> str:
        path = tmp_path / name
        path.write_text(textwrap.dedent(text), encoding="utf-8")
        return str(path)

    return _write
