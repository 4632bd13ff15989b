"""The trainable quantum regressor: prediction, MSE loss, gradients, training.

A model pairs a composed feature-map + ansatz template with a parameter
vector and (optionally) the dataset scaler.  The twelve benchmark configs
pair each feature map (Z, ZZ) with each of the six entanglement layouts.

Gradients and losses exploit the template split: the feature-encoding
prefix does not depend on the parameters, so its statevectors are computed
once per dataset and reused for every objective and gradient evaluation.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import List, Optional, Tuple

import numpy as np

from .circuit import (
    CircuitTemplate,
    build_ansatz,
    build_z_feature_map,
    build_zz_feature_map,
    compose,
    evaluate_batch,
    feature_prefix_length,
    run_gates,
)
from .data import ScalingSpec, invert_target, scale_features
from .optimizer import OptimizeResult, OptimizerOptions, minimize
from .statevector import expect_z_all_array

N_QUBITS = 4  # one qubit per input feature

# config id -> (feature map, ansatz entanglement)
CONFIG_TABLE = {
    "QNN-1": ("z", "linear"),
    "QNN-2": ("z", "full"),
    "QNN-3": ("z", "circular"),
    "QNN-4": ("z", "sca"),
    "QNN-5": ("z", "reverse_linear"),
    "QNN-6": ("z", "pairwise"),
    "QNN-7": ("zz", "linear"),
    "QNN-8": ("zz", "full"),
    "QNN-9": ("zz", "circular"),
    "QNN-10": ("zz", "sca"),
    "QNN-11": ("zz", "reverse_linear"),
    "QNN-12": ("zz", "pairwise"),
}
CONFIG_IDS = tuple(CONFIG_TABLE)


@dataclass(frozen=True)
class QnnModel:
    template: CircuitTemplate
    parameters: np.ndarray
    config_id: str = ""
    scaling: Optional[ScalingSpec] = None

    def __post_init__(self):
        if self.parameters.shape != (self.template.n_parameter_slots,):
            raise ValueError(
                f"parameter vector shape {self.parameters.shape} does not match "
                f"{self.template.n_parameter_slots} template slots"
            )


@dataclass
class TrainedResult:
    parameters: np.ndarray
    trace: List[Tuple[int, float]]
    status: str

    @property
    def final_loss(self) -> float:
        return self.trace[-1][1]


def initial_parameters(n: int, seed: int) -> np.ndarray:
    """Seeded uniform draw on [-pi, pi], one value per slot in slot order."""
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.uniform(-np.pi, np.pi, size=n)


def build_model(
    config_id: str,
    feature_map_reps: int = 2,
    ansatz_reps: int = 3,
    zz_entanglement: str = "full",
    init_seed: int = 42,
    scaling: Optional[ScalingSpec] = None,
) -> QnnModel:
    """Construct one of the twelve benchmark configurations."""
    if config_id not in CONFIG_TABLE:
        raise ValueError(
            f"unknown config id {config_id!r}, expected one of {', '.join(CONFIG_IDS)}"
        )
    family, entanglement = CONFIG_TABLE[config_id]
    if family == "z":
        fm = build_z_feature_map(N_QUBITS, feature_map_reps)
    else:
        fm = build_zz_feature_map(N_QUBITS, feature_map_reps, zz_entanglement)
    template = compose(fm, build_ansatz(N_QUBITS, ansatz_reps, entanglement))
    params = initial_parameters(template.n_parameter_slots, init_seed)
    return QnnModel(template=template, parameters=params,
                    config_id=config_id, scaling=scaling)


def with_parameters(model: QnnModel, parameters: np.ndarray) -> QnnModel:
    return replace(model, parameters=np.asarray(parameters, dtype=float))


def predict_scaled(model: QnnModel, features_scaled) -> np.ndarray:
    """Circuit expectation in [-1, 1]; accepts one sample or a matrix."""
    features_scaled = np.asarray(features_scaled, dtype=float)
    if features_scaled.ndim == 1:
        return evaluate_batch(
            model.template, features_scaled[None, :], model.parameters
        )[0]
    return evaluate_batch(model.template, features_scaled, model.parameters)


def predict_physical(model: QnnModel, features_physical) -> np.ndarray:
    """Scale raw features, predict, and inverse-scale the output to kW."""
    if model.scaling is None:
        raise RuntimeError("model has no fitted scaling spec")
    scaled = scale_features(model.scaling, np.asarray(features_physical, dtype=float))
    return invert_target(model.scaling, predict_scaled(model, scaled))


class _PrefixCache:
    """Statevectors after the feature-encoding prefix, shared across a run.

    Valid only for templates whose parameterized gates all come after the
    feature gates (true for every composed model here); falls back to full
    circuit evaluation otherwise.
    """

    def __init__(self, template: CircuitTemplate, features: np.ndarray):
        self.template = template
        self.features = features
        split = feature_prefix_length(template)
        if split is None:
            self.suffix = None
            self.base = None
        else:
            amps = np.zeros((features.shape[0], 2**template.n_qubits), dtype=complex)
            amps[:, 0] = 1.0
            run_gates(amps, template.gates[:split], template.n_qubits, features, np.zeros(0))
            self.suffix = template.gates[split:]
            self.base = amps

    def predict(self, params: np.ndarray) -> np.ndarray:
        if self.base is None:
            return evaluate_batch(self.template, self.features, params)
        amps = self.base.copy()
        run_gates(amps, self.suffix, self.template.n_qubits, self.features, params)
        return expect_z_all_array(amps)


def _check_batch(features_scaled, targets_scaled):
    features = np.asarray(features_scaled, dtype=float)
    targets = np.asarray(targets_scaled, dtype=float)
    if features.ndim != 2:
        raise ValueError(f"expected a 2-d feature matrix, got shape {features.shape}")
    if targets.shape != (features.shape[0],):
        raise ValueError(
            f"targets shape {targets.shape} does not match {features.shape[0]} rows"
        )
    if features.shape[0] == 0:
        raise ValueError("loss needs at least one sample")
    return features, targets


def loss_mse(model: QnnModel, features_scaled, targets_scaled) -> float:
    """Mean squared error in scaled target space, fixed sample order."""
    features, targets = _check_batch(features_scaled, targets_scaled)
    predictions = evaluate_batch(model.template, features, model.parameters)
    return float(np.mean((predictions - targets) ** 2))


def _loss_from_predictions(predictions: np.ndarray, targets: np.ndarray) -> float:
    return float(np.mean((predictions - targets) ** 2))


def gradient_parameter_shift(model: QnnModel, features_scaled, targets_scaled) -> np.ndarray:
    """Exact dL/dtheta via the parameter-shift rule for RY angles.

    Per sample, df/dtheta_k = (f(theta_k + pi/2) - f(theta_k - pi/2)) / 2;
    the MSE chain rule then gives (2/N) sum_s (f_s - y_s) * df_s/dtheta_k.
    """
    features, targets = _check_batch(features_scaled, targets_scaled)
    cache = _PrefixCache(model.template, features)
    return _parameter_shift_from_cache(cache, model.parameters, targets)


def _parameter_shift_from_cache(cache, params, targets) -> np.ndarray:
    residuals = cache.predict(params) - targets
    n = targets.shape[0]
    grad = np.empty(params.shape[0])
    shifted = params.copy()
    for k in range(params.shape[0]):
        original = shifted[k]
        shifted[k] = original + np.pi / 2
        f_plus = cache.predict(shifted)
        shifted[k] = original - np.pi / 2
        f_minus = cache.predict(shifted)
        shifted[k] = original
        df = (f_plus - f_minus) / 2.0
        grad[k] = 2.0 / n * float(residuals @ df)
    return grad


def gradient_finite_difference(
    model: QnnModel, features_scaled, targets_scaled, step: float = 1e-8
) -> np.ndarray:
    """Forward-difference dL/dtheta with the given step."""
    if step <= 0:
        raise ValueError(f"step must be > 0, got {step}")
    features, targets = _check_batch(features_scaled, targets_scaled)
    cache = _PrefixCache(model.template, features)
    return _finite_difference_from_cache(cache, model.parameters, targets, step)


def _finite_difference_from_cache(cache, params, targets, step) -> np.ndarray:
    base = _loss_from_predictions(cache.predict(params), targets)
    grad = np.empty(params.shape[0])
    shifted = params.copy()
    for k in range(params.shape[0]):
        original = shifted[k]
        shifted[k] = original + step
        bumped = _loss_from_predictions(cache.predict(shifted), targets)
        shifted[k] = original
        grad[k] = (bumped - base) / step
    return grad


def train(
    model: QnnModel,
    features_scaled,
    targets_scaled,
    options: Optional[OptimizerOptions] = None,
    gradient_mode: str = "parameter_shift",
    finite_difference_step: float = 1e-8,
) -> TrainedResult:
    """Minimize the MSE over the model parameters; the model is not mutated.

    gradient_mode selects the exact parameter-shift gradient (default) or
    the forward finite-difference gradient with the given step.
    """
    if gradient_mode not in ("parameter_shift", "finite_difference"):
        raise ValueError(
            f"gradient_mode must be 'parameter_shift' or 'finite_difference', "
            f"got {gradient_mode!r}"
        )
    features, targets = _check_batch(features_scaled, targets_scaled)
    cache = _PrefixCache(model.template, features)

    def objective(theta):
        return _loss_from_predictions(cache.predict(theta), targets)

    if gradient_mode == "parameter_shift":
        gradient = lambda theta: _parameter_shift_from_cache(cache, theta, targets)
    else:
        gradient = lambda theta: _finite_difference_from_cache(
            cache, theta, targets, finite_difference_step
        )

    result: OptimizeResult = minimize(objective, gradient, model.parameters, options)
    return TrainedResult(
        parameters=result.best_point, trace=result.trace, status=result.status
    )
