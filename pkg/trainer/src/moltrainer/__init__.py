"""moltrainer: LoRA adaptation over molbench's file interfaces."""

from .job import TrainJob, load_job
from .train import TrainResult, train

__version__ = "0.1.0"

__all__ = ["TrainJob", "load_job", "train", "TrainResult"]
