"""scikit-learn estimators wrapping the distillation and timing models."""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize_scalar
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .bcnot import GateImperfection
from .channels import PolErrorType, et_noise, pol_noise
from .distill import distill
from .timing import LAB_DELTA_T, LAB_JITTER_FWHM, LAB_PUMP_COHERENCE, TimingModel, et_fidelity_vs_window


def _check_fidelity_pairs(X) -> np.ndarray:
    X = check_array(X, dtype=float)
    if X.shape[1] != 2:
        raise ValueError(f"expected columns (f_pol, f_et), got {X.shape[1]} features")
    if np.any(X < 0) or np.any(X > 1):
        raise ValueError("input fidelities must lie in [0, 1]")
    return X


class DistillationModel(RegressorMixin, BaseEstimator):
    """Gain of one single-copy distillation step as a function of input fidelities.

    ``X`` has columns ``(f_pol, f_et)``; the regression target is the gain.
    With ``fit_epsilon=True`` the wrong-port probability of the imperfect
    gate is fitted to measured gains by bounded least squares on
    ``[0, epsilon_max]``; otherwise ``epsilon`` is taken as given.
    """

    def __init__(self, noise_kind="bit_flip", epsilon=0.0, fit_epsilon=False, epsilon_max=0.5):
        self.noise_kind = noise_kind
        self.epsilon = epsilon
        self.fit_epsilon = fit_epsilon
        self.epsilon_max = epsilon_max

    def _results(self, X, epsilon):
        kind = PolErrorType(self.noise_kind)
        return [distill(pol_noise(kind, fp), et_noise(fe), GateImperfection(epsilon)) for fp, fe in X]

    def fit(self, X, y=None):
        X = _check_fidelity_pairs(X)
        self.n_features_in_ = X.shape[1]
        if not self.fit_epsilon:
            self.epsilon_ = float(GateImperfection(self.epsilon).epsilon)
            return self
        if y is None:
            raise ValueError("fitting epsilon needs measured gains y")
        y = np.asarray(y, dtype=float).ravel()
        if len(y) != len(X):
            raise ValueError("X and y have different lengths")

        def loss(eps):
            g = np.array([r.gain for r in self._results(X, eps)])
            return float(np.sum((g - y) ** 2))

        res = minimize_scalar(loss, bounds=(0.0, self.epsilon_max), method="bounded", options={"xatol": 1e-10})
        self.epsilon_ = float(res.x)
        self.fit_loss_ = float(res.fun)
        return self

    def predict(self, X):
        check_is_fitted(self, "epsilon_")
        X = _check_fidelity_pairs(X)
        return np.array([r.gain for r in self._results(X, self.epsilon_)])

    def predict_yield(self, X):
        check_is_fitted(self, "epsilon_")
        X = _check_fidelity_pairs(X)
        return np.array([r.yield_ for r in self._results(X, self.epsilon_)])

    def predict_fidelity(self, X):
        check_is_fitted(self, "epsilon_")
        X = _check_fidelity_pairs(X)
        return np.array([r.fidelity_distilled for r in self._results(X, self.epsilon_)])


class CoincidenceWindowTransformer(TransformerMixin, BaseEstimator):
    """Map coincidence-window widths (s) to energy-time Bell weights.

    Output columns are ``(f_phiplus, f_psiplus, f_psiminus)``.
    """

    def __init__(
        self,
        delta_t=LAB_DELTA_T,
        jitter_fwhm=LAB_JITTER_FWHM,
        pump_coherence=LAB_PUMP_COHERENCE,
        phase_error=0.0,
    ):
        self.delta_t = delta_t
        self.jitter_fwhm = jitter_fwhm
        self.pump_coherence = pump_coherence
        self.phase_error = phase_error

    def fit(self, X=None, y=None):
        self.model_ = TimingModel(self.delta_t, self.jitter_fwhm, self.pump_coherence, self.phase_error)
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "model_")
        X = check_array(X, dtype=float)
        if X.shape[1] != 1:
            raise ValueError("expected a single column of window widths")
        return np.array([et_fidelity_vs_window(self.model_, w)[:3] for w in X[:, 0]])
