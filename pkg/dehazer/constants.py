from __future__ import annotations

__all__ = [
    "PSNR_CAP_DB",
    "PSNR_MSE_FLOOR",
    "LUMA_WEIGHTS",
    "AIRLIGHT_FLOOR",
    "SSIM_WINDOW",
    "SSIM_SIGMA",
    "SSIM_K1",
    "SSIM_K2",
    "CHECKPOINT_MAGIC",
    "CHECKPOINT_VERSION",
    "DEFAULT_SPP_KERNELS",
    "TRANSMISSION_FIELD_FLOOR",
]


PSNR_CAP_DB = 100.0
PSNR_MSE_FLOOR = 1e-10

# Rec.601
LUMA_WEIGHTS = (0.299, 0.587, 0.114)

AIRLIGHT_FLOOR = 0.05

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03

CHECKPOINT_MAGIC = b"DHZCKPT\x00"
CHECKPOINT_VERSION = 1

DEFAULT_SPP_KERNELS = (5, 9, 13)

TRANSMISSION_FIELD_FLOOR = 0.05
