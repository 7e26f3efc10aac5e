"""
Learnable tensors of HTNet and their initialization.

Weights are stored in row-vector convention (``x @ W`` with ``W`` of shape
``(in, out)``), so a layer's input is a matrix with one node per row.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from ..autodiff import BatchNormState, Tensor, get_default_dtype
from ..graph.model import EDGE_FEATURE_DIM, NODE_FEATURE_DIM, Relation
from .config import ModelConfig

GATES = ("f", "i", "o", "c")


def glorot(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out)).astype(get_default_dtype())


def _zeros(*shape: int) -> np.ndarray:
    return np.zeros(shape, dtype=get_default_dtype())


@dataclass
class HtlLayerParams:
    """One HTL layer: per-relation ``W_r``/``b_r`` plus the shared attention
    weights ``W_a`` (edge transform) and ``w_a`` (score vector)."""

    node_in: int
    edge_in: int
    W: Dict[Relation, Tensor]
    b: Dict[Relation, Tensor]
    W_a: Tensor
    w_a: Tensor
    gamma: Tensor
    beta: Tensor
    bn: BatchNormState

    @classmethod
    def init(
        cls,
        rng: np.random.Generator,
        node_in: int,
        edge_in: int,
        hidden: int,
        edge_hidden: int,
        prefix: str,
        momentum: float = 0.1,
    ) -> "HtlLayerParams":
        W, b = {}, {}
        for rel in Relation:
            W[rel] = Tensor.parameter(glorot(rng, node_in, hidden), f"{prefix}.W.{rel.name}")
            b[rel] = Tensor.parameter(_zeros(1, hidden), f"{prefix}.b.{rel.name}")
        width = 3 * hidden
        return cls(
            node_in=node_in,
            edge_in=edge_in,
            W=W,
            b=b,
            W_a=Tensor.parameter(
                glorot(rng, 2 * node_in + edge_in, edge_hidden), f"{prefix}.W_a"
            ),
            w_a=Tensor.parameter(glorot(rng, edge_hidden, 1), f"{prefix}.w_a"),
            gamma=Tensor.parameter(np.ones((1, width), dtype=get_default_dtype()), f"{prefix}.bn.gamma"),
            beta=Tensor.parameter(_zeros(1, width), f"{prefix}.bn.beta"),
            bn=BatchNormState.fresh(width, momentum=momentum),
        )

    def tensors(self) -> Iterator[Tensor]:
        for rel in Relation:
            yield self.W[rel]
            yield self.b[rel]
        yield self.W_a
        yield self.w_a
        yield self.gamma
        yield self.beta


@dataclass
class JkCombinerParams:
    W: Tensor
    b: Tensor

    def tensors(self) -> Iterator[Tensor]:
        yield self.W
        yield self.b


@dataclass
class LstmLayerParams:
    """Gate weights ``W_g`` (input), ``U_g`` (recurrent), ``b_g`` for g in f, i, o, c"""

    W: Dict[str, Tensor]
    U: Dict[str, Tensor]
    b: Dict[str, Tensor]

    @classmethod
    def init(
        cls, rng: np.random.Generator, input_width: int, hidden: int, prefix: str
    ) -> "LstmLayerParams":
        W = {g: Tensor.parameter(glorot(rng, input_width, hidden), f"{prefix}.W_{g}") for g in GATES}
        U = {g: Tensor.parameter(glorot(rng, hidden, hidden), f"{prefix}.U_{g}") for g in GATES}
        b = {g: Tensor.parameter(_zeros(1, hidden), f"{prefix}.b_{g}") for g in GATES}
        return cls(W=W, U=U, b=b)

    @property
    def hidden(self) -> int:
        return self.U["f"].shape[0]

    def tensors(self) -> Iterator[Tensor]:
        for g in GATES:
            yield self.W[g]
            yield self.U[g]
            yield self.b[g]


@dataclass
class LstmParams:
    layers: List[LstmLayerParams] = field(default_factory=list)

    def tensors(self) -> Iterator[Tensor]:
        for layer in self.layers:
            yield from layer.tensors()


@dataclass
class HeadParams:
    W_y: Tensor

    def tensors(self) -> Iterator[Tensor]:
        yield self.W_y


@dataclass
class KindBlindParams:
    """Homogeneous sum-aggregation encoder that ignores node and edge kinds"""

    layers: List[Tuple[Tensor, Tensor]]

    @classmethod
    def init(
        cls, rng: np.random.Generator, input_width: int, hidden: int, depth: int
    ) -> "KindBlindParams":
        layers = []
        width = input_width
        for k in range(depth):
            layers.append(
                (
                    Tensor.parameter(glorot(rng, width, hidden), f"kind_blind.{k}.W"),
                    Tensor.parameter(rng.normal(0.0, 0.1, (1, hidden)), f"kind_blind.{k}.b"),
                )
            )
            width = hidden
        return cls(layers=layers)


@dataclass
class HtnetParams:
    """Every learnable tensor of the model plus the batch-norm buffers"""

    config: ModelConfig
    htl: List[HtlLayerParams]
    jk: JkCombinerParams
    lstm: Optional[LstmParams]
    head: HeadParams

    def named_parameters(self) -> Dict[str, Tensor]:
        tensors: List[Tensor] = []
        for layer in self.htl:
            tensors.extend(layer.tensors())
        tensors.extend(self.jk.tensors())
        if self.lstm is not None:
            tensors.extend(self.lstm.tensors())
        tensors.extend(self.head.tensors())
        return {t.name: t for t in tensors}  # type: ignore[misc]

    def parameter_count(self) -> int:
        """Number of learnable scalars (batch-norm running stats excluded)"""
        return sum(t.size for t in self.named_parameters().values())

    def buffers(self) -> Dict[str, np.ndarray]:
        out: Dict[str, np.ndarray] = {}
        for k, layer in enumerate(self.htl):
            out[f"htl.{k}.bn.running_mean"] = layer.bn.running_mean
            out[f"htl.{k}.bn.running_var"] = layer.bn.running_var
        return out

    def load_buffers(self, buffers: Dict[str, np.ndarray]) -> None:
        for k, layer in enumerate(self.htl):
            layer.bn.running_mean = np.array(buffers[f"htl.{k}.bn.running_mean"])
            layer.bn.running_var = np.array(buffers[f"htl.{k}.bn.running_var"])

    def state_dict(self) -> Dict[str, np.ndarray]:
        state = {name: t.value.copy() for name, t in self.named_parameters().items()}
        state.update({name: v.copy() for name, v in self.buffers().items()})
        return state

    def load_state_dict(self, state: Dict[str, np.ndarray]) -> None:
        for name, tensor in self.named_parameters().items():
            if name not in state:
                raise KeyError(name)
            value = np.asarray(state[name], dtype=tensor.value.dtype)
            if value.shape != tensor.shape:
                raise ValueError(f"{name}: expected shape {tensor.shape}, got {value.shape}")
            tensor.value = value.copy()
        self.load_buffers(state)


def init_params(config: ModelConfig, seed: int = 0) -> HtnetParams:
    """Glorot-uniform weights, zero biases, identity batch-norm affine"""
    rng = np.random.default_rng(seed)
    htl = []
    node_in, edge_in = NODE_FEATURE_DIM, EDGE_FEATURE_DIM
    for k in range(config.layers):
        htl.append(
            HtlLayerParams.init(
                rng,
                node_in,
                edge_in,
                config.hidden,
                config.edge_hidden,
                prefix=f"htl.{k}",
                momentum=config.bn_momentum,
            )
        )
        node_in, edge_in = config.htl_width, config.edge_hidden

    jk_in = NODE_FEATURE_DIM + config.layers * config.htl_width
    jk = JkCombinerParams(
        W=Tensor.parameter(glorot(rng, jk_in, config.jk_width), "jk.W"),
        b=Tensor.parameter(_zeros(1, config.jk_width), "jk.b"),
    )

    lstm: Optional[LstmParams] = None
    if config.temporal:
        lstm = LstmParams()
        width = config.jk_width
        for layer in range(config.lstm_layers):
            lstm.layers.append(
                LstmLayerParams.init(rng, width, config.lstm_hidden, prefix=f"lstm.{layer}")
            )
            width = config.lstm_hidden

    head = HeadParams(W_y=Tensor.parameter(glorot(rng, config.embedding_width, 1), "head.W_y"))
    return HtnetParams(config=config, htl=htl, jk=jk, lstm=lstm, head=head)
