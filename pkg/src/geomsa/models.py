"""Benchmark models used to exercise the geometric indices."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

MODEL_NAMES = ("linear", "circle", "connected_circles", "ishigami")
ISHIGAMI_A = 7.0
ISHIGAMI_B = 0.1

# (center_x, center_y, r_min, r_max) of each ring in the connected-circles model
CONNECTED_CIRCLES = ((0.0, 0.0, 1.5, 2.5), (3.5, 3.5, 0.5, 1.0), (-4.0, 4.0, 1.0, 2.0))
_CC_X_RANGE = (-6.0, 4.5)


@dataclass(frozen=True)
class ModelSpec:
    name: str
    n: int = 1000
    seed: int = 0

    def __post_init__(self) -> None:
        if self.name not in MODEL_NAMES:
            raise ValueError(f"unknown model {self.name!r}; choose from {', '.join(MODEL_NAMES)}")
        if self.n < 10:
            raise ValueError("need n >= 10 samples")

    @property
    def n_inputs(self) -> int:
        return {"linear": 3, "circle": 2, "connected_circles": 3, "ishigami": 3}[self.name]


@dataclass(frozen=True, eq=False)
class ModelData:
    inputs: np.ndarray  # (n, p)
    output: np.ndarray  # (n,)
    analytic_first_order: tuple[float, ...] | None
    names: tuple[str, ...]

    def __iter__(self):
        yield self.inputs
        yield self.output
        yield self.analytic_first_order


def linear(x: np.ndarray) -> np.ndarray:
    x = np.atleast_2d(x)
    return 2.0 * x[:, 0] + x[:, 1]


def ishigami(x: np.ndarray, a: float = ISHIGAMI_A, b: float = ISHIGAMI_B) -> np.ndarray:
    x = np.atleast_2d(x)
    s1 = np.sin(x[:, 0])
    return s1 + a * np.sin(x[:, 1]) ** 2 + b * x[:, 2] ** 4 * s1


def ishigami_first_order(a: float = ISHIGAMI_A, b: float = ISHIGAMI_B) -> tuple[float, float, float]:
    pi4 = math.pi**4
    v1 = 0.5 * (1.0 + b * pi4 / 5.0) ** 2
    v2 = a * a / 8.0
    v13 = b * b * pi4 * pi4 * (1.0 / 18.0 - 1.0 / 50.0)
    total = v1 + v2 + v13
    return (v1 / total, v2 / total, 0.0)


def _rng(seed: int, column: int) -> np.random.Generator:
    return np.random.default_rng([seed, column])


def uniform_sampler(low: float, high: float, p: int) -> Callable[[np.random.Generator, int], np.ndarray]:
    def sample(rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.uniform(low, high, size=(n, p))

    return sample


# functional models: (function, input sampler, analytic first-order indices)
FUNCTIONAL_MODELS = {
    "linear": (linear, uniform_sampler(-1.0, 1.0, 3), (0.8, 0.2, 0.0)),
    "ishigami": (ishigami, uniform_sampler(-math.pi, math.pi, 3), ishigami_first_order()),
}


def generate_model(spec: ModelSpec) -> ModelData:
    """Sample ``spec.n`` rows; every input column draws from its own seeded stream."""
    n, seed = spec.n, spec.seed
    names = tuple(f"X{k + 1}" for k in range(spec.n_inputs))
    if spec.name in FUNCTIONAL_MODELS:
        func, _, analytic = FUNCTIONAL_MODELS[spec.name]
        low, high = (-1.0, 1.0) if spec.name == "linear" else (-math.pi, math.pi)
        x = np.column_stack([_rng(seed, k).uniform(low, high, n) for k in range(3)])
        return ModelData(x, func(x), analytic, names)

    latent = _rng(seed, 0)
    if spec.name == "circle":
        theta = latent.uniform(0.0, 2.0 * math.pi, n)
        r = latent.uniform(0.5, 1.0, n)
        x1 = r * np.cos(theta)
        y = r * np.sin(theta)
        x2 = _rng(seed, 1).uniform(-1.0, 1.0, n)
        return ModelData(np.column_stack([x1, x2]), y, None, names)

    # connected circles: each row lies on one of three rings in the (X1, Y) plane
    which = latent.integers(0, len(CONNECTED_CIRCLES), n)
    theta = latent.uniform(0.0, 2.0 * math.pi, n)
    u = latent.uniform(0.0, 1.0, n)
    params = np.asarray(CONNECTED_CIRCLES)[which]
    r = params[:, 2] + u * (params[:, 3] - params[:, 2])
    x1 = params[:, 0] + r * np.cos(theta)
    y = params[:, 1] + r * np.sin(theta)
    noise = [_rng(seed, k).uniform(*_CC_X_RANGE, n) for k in (1, 2)]
    return ModelData(np.column_stack([x1, *noise]), y, None, names)
