from ._quality import psnr, ssim, contrast_structure, gaussian_window
from ._losses import (
    LossWeights,
    reconstruction_loss,
    discriminator_loss,
    generator_adversarial_loss,
    adversarial_losses,
    generator_total_loss,
)
from ._record import Scores, MetricsRecord, score_images

__all__ = [
    "psnr",
    "ssim",
    "contrast_structure",
    "gaussian_window",
    "LossWeights",
    "reconstruction_loss",
    "discriminator_loss",
    "generator_adversarial_loss",
    "adversarial_losses",
    "generator_total_loss",
    "Scores",
    "MetricsRecord",
    "score_images",
]
