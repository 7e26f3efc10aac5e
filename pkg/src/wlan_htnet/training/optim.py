"""
Adam optimizer over named tensors
"""

from typing import Dict, Optional

import numpy as np

from ..autodiff import Gradients, Tensor


class Adam:
    """Adam with decoupled weight decay: parameters shrink by ``lr * weight_decay``
    each step, outside the moment estimates"""

    def __init__(
        self,
        params: Dict[str, Tensor],
        lr: float = 1e-3,
        beta1: float = 0.9,
        beta2: float = 0.999,
        eps: float = 1e-8,
        weight_decay: float = 0.0,
    ) -> None:
        self.params = params
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.weight_decay = weight_decay
        self.steps = 0
        self._m: Dict[str, np.ndarray] = {k: np.zeros_like(p.value) for k, p in params.items()}
        self._v: Dict[str, np.ndarray] = {k: np.zeros_like(p.value) for k, p in params.items()}

    def step(self, grads: Gradients, scale: Optional[float] = None) -> None:
        self.steps += 1
        bias1 = 1.0 - self.beta1**self.steps
        bias2 = 1.0 - self.beta2**self.steps
        for name, param in self.params.items():
            g = grads.get(param)
            if scale is not None:
                g = g * scale
            m = self._m[name] = self.beta1 * self._m[name] + (1.0 - self.beta1) * g
            v = self._v[name] = self.beta2 * self._v[name] + (1.0 - self.beta2) * g * g
            update = self.lr * (m / bias1) / (np.sqrt(v / bias2) + self.eps)
            if self.weight_decay:
                update = update + self.lr * self.weight_decay * param.value
            param.value = param.value - update
