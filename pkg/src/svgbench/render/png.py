"""Minimal PNG writer/reader for 8-bit RGB(A) images.

The writer emits unfiltered scanlines with a fixed zlib level so output is
byte-identical across runs; the reader supports the baseline formats the
suite itself produces plus standard scanline filters.
"""

from __future__ import annotations

import struct
import zlib

import numpy as np

_SIGNATURE = b"\x89PNG\r\n\x1a\n"


def _chunk(tag: bytes, payload: bytes) -> bytes:
    return (
        struct.pack(">I", len(payload))
        + tag
        + payload
        + struct.pack(">I", zlib.crc32(tag + payload) & 0xFFFFFFFF)
    )


def write_png(path, image: np.ndarray) -> None:
    data = encode_png(image)
    with open(path, "wb") as fh:
        fh.write(data)


def encode_png(image: np.ndarray) -> bytes:
    if image.dtype != np.uint8 or image.ndim != 3 or image.shape[2] not in (3, 4):
        raise ValueError("expected uint8 HxWx3 or HxWx4 image")
    height, width, channels = image.shape
    color_type = 2 if channels == 3 else 6
    header = struct.pack(">IIBBBBB", width, height, 8, color_type, 0, 0, 0)
    raw = b"".join(b"\x00" + image[y].tobytes() for y in range(height))
    compressed = zlib.compress(raw, 6)
    return (
        _SIGNATURE
        + _chunk(b"IHDR", header)
        + _chunk(b"IDAT", compressed)
        + _chunk(b"IEND", b"")
    )


def read_png(path) -> np.ndarray:
    with open(path, "rb") as fh:
        blob = fh.read()
    return decode_png(blob)


def decode_png(blob: bytes) -> np.ndarray:
    if blob[:8] != _SIGNATURE:
        raise ValueError("not a PNG file")
    pos = 8
    width = height = None
    bit_depth = color_type = None
    idat = bytearray()
    while pos < len(blob):
        (length,) = struct.unpack(">I", blob[pos : pos + 4])
        tag = blob[pos + 4 : pos + 8]
        payload = blob[pos + 8 : pos + 8 + length]
        pos += 12 + length
        if tag == b"IHDR":
            width, height, bit_depth, color_type, _, _, interlace = struct.unpack(
                ">IIBBBBB", payload
            )
            if bit_depth != 8 or color_type not in (0, 2, 6) or interlace != 0:
                raise ValueError("unsupported PNG flavor")
        elif tag == b"IDAT":
            idat.extend(payload)
        elif tag == b"IEND":
            break
    if width is None:
        raise ValueError("missing IHDR")
    channels = {0: 1, 2: 3, 6: 4}[color_type]
    raw = zlib.decompress(bytes(idat))
    stride = width * channels
    out = np.zeros((height, width, channels), dtype=np.uint8)
    prev = np.zeros(stride, dtype=np.int32)
    offset = 0
    for y in range(height):
        filter_type = raw[offset]
        offset += 1
        line = np.frombuffer(raw, dtype=np.uint8, count=stride, offset=offset).astype(
            np.int32
        )
        offset += stride
        if filter_type == 0:
            recon = line
        elif filter_type == 1:  # Sub
            recon = line.copy()
            for i in range(channels, stride):
                recon[i] = (recon[i] + recon[i - channels]) & 0xFF
        elif filter_type == 2:  # Up
            recon = (line + prev) & 0xFF
        elif filter_type == 3:  # Average
            recon = line.copy()
            for i in range(stride):
                left = recon[i - channels] if i >= channels else 0
                recon[i] = (recon[i] + ((left + prev[i]) >> 1)) & 0xFF
        elif filter_type == 4:  # Paeth
            recon = line.copy()
            for i in range(stride):
                left = recon[i - channels] if i >= channels else 0
                up = prev[i]
                ul = prev[i - channels] if i >= channels else 0
                p = left + up - ul
                pa, pb, pc = abs(p - left), abs(p - up), abs(p - ul)
                if pa <= pb and pa <= pc:
                    pred = left
                elif pb <= pc:
                    pred = up
                else:
                    pred = ul
                recon[i] = (recon[i] + pred) & 0xFF
        else:
            raise ValueError(f"bad PNG filter {filter_type}")
        out[y] = recon.astype(np.uint8).reshape(width, channels)
        prev = recon
    if channels == 1:
        out = np.repeat(out, 3, axis=2)
    return out
