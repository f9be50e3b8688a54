"""Minimal dense-tensor neural network engine (numpy only)."""

from .checkpoint import (
    CheckpointError,
    CheckpointMismatchError,
    load_checkpoint,
    read_checkpoint,
    save_checkpoint,
)
from .model import Model, graph_to_input, predict_batch
from .spec import (
    Activation,
    Conv2D,
    Dense,
    Flatten,
    LayerSpec,
    MaxPool2D,
    ModelSpec,
    ShapeError,
    from_text,
)
from .training import (
    Adam,
    History,
    TrainConfig,
    TrainingDivergedError,
    evaluate_mae,
    mae_and_grad,
    train,
)

__all__ = [
    "Activation",
    "Adam",
    "CheckpointError",
    "CheckpointMismatchError",
    "Conv2D",
    "Dense",
    "Flatten",
    "History",
    "LayerSpec",
    "MaxPool2D",
    "Model",
    "ModelSpec",
    "ShapeError",
    "TrainConfig",
    "TrainingDivergedError",
    "evaluate_mae",
    "from_text",
    "graph_to_input",
    "load_checkpoint",
    "mae_and_grad",
    "predict_batch",
    "read_checkpoint",
    "save_checkpoint",
    "train",
]
