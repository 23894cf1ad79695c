"""Variational image restoration with lagged steepest descent."""

from ._imrec import (
    DimensionError,
    Error,
    IoError,
    ParameterError,
    adaptive_gamma,
    add_noise,
    blur,
    deblur,
    denoise,
    denoise_hybrid,
    estimate_beta,
    misfit,
    noise_sigma,
    phantom,
    psf,
    psnr,
    read_image,
    restore,
    set_num_threads,
    sharpen,
    write_image,
)

__all__ = [
    "DimensionError",
    "Error",
    "IoError",
    "ParameterError",
    "adaptive_gamma",
    "add_noise",
    "blur",
    "deblur",
    "denoise",
    "denoise_hybrid",
    "estimate_beta",
    "misfit",
    "noise_sigma",
    "phantom",
    "psf",
    "psnr",
    "read_image",
    "restore",
    "set_num_threads",
    "sharpen",
    "write_image",
]
