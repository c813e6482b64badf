"""molbench: benchmark construction and evaluation for multimodal molecular
property prediction."""

__version__ = "0.1.0"
