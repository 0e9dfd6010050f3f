"""Python bindings for the semantic image codec."""

from semcodec._core import (
    System,
    bd_metric,
    bpsk_bit_error_rate,
    composite_loss,
    generate_scene,
    mean_iou,
    psnr,
    rate,
    ssim,
)

__all__ = [
    "System",
    "bd_metric",
    "bpsk_bit_error_rate",
    "composite_loss",
    "generate_scene",
    "mean_iou",
    "psnr",
    "rate",
    "ssim",
]
