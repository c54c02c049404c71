from ._plan import TrainPlan, TrainReport
from ._checkpoint import (
    Checkpoint,
    save_checkpoint,
    load_checkpoint,
    read_checkpoint,
    restore_generator,
)
from ._evaluate import (
    assemble_input,
    assemble_target,
    to_images,
    predict,
    evaluate,
    config_label,
)
from ._trainer import train, train_models, TrainResult, discriminator_input
from ._ablation import (
    AblationRow,
    AblationTable,
    run_ablation,
    run_augmentation_ablation,
    preset_for_plan,
)
from ._reports import write_report

__all__ = [
    "TrainPlan",
    "TrainReport",
    "Checkpoint",
    "save_checkpoint",
    "load_checkpoint",
    "read_checkpoint",
    "restore_generator",
    "assemble_input",
    "assemble_target",
    "to_images",
    "predict",
    "evaluate",
    "config_label",
    "train",
    "train_models",
    "TrainResult",
    "discriminator_input",
    "AblationRow",
    "AblationTable",
    "run_ablation",
    "run_augmentation_ablation",
    "preset_for_plan",
    "write_report",
]
