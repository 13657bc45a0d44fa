"""JND-based luma/chroma perceptual quantisation for YCbCr coding blocks."""

from pixelpaq._core import (
    ConfigError,
    DataError,
    IoError,
    JndParams,
    VideoSpec,
    __version__,
    block_mean,
    build_qp_map,
    chroma_offset,
    chroma_weight,
    curve_table,
    dequantize,
    forward_transform,
    frame_byte_size,
    inverse_transform,
    luma_weight,
    perceptual_chroma,
    perceptual_luma,
    psnr,
    qp_from_qstep,
    qstep_from_qp,
    quantize,
    read_frame,
    sequence_byte_size,
    simulate,
    ssim,
    write_sequence,
)

__all__ = [
    "ConfigError",
    "DataError",
    "IoError",
    "JndParams",
    "VideoSpec",
    "__version__",
    "block_mean",
    "build_qp_map",
    "chroma_offset",
    "chroma_weight",
    "curve_table",
    "dequantize",
    "forward_transform",
    "frame_byte_size",
    "inverse_transform",
    "luma_weight",
    "perceptual_chroma",
    "perceptual_luma",
    "psnr",
    "qp_from_qstep",
    "qstep_from_qp",
    "quantize",
    "read_frame",
    "sequence_byte_size",
    "simulate",
    "ssim",
    "write_sequence",
]
