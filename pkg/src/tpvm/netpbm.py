"""Binary netpbm codecs: PGM (P5) grayscale and PPM (P6) color.

Samples map linearly to [0,1] on read (value / maxval) and are quantized by
rounding to the nearest level on write, so a write/read round trip moves a
pixel by at most 1/(2*maxval). Color files are split into three independent
channel Images; the math core stays single-channel. Two-byte samples
(maxval > 255) use the most-significant-byte-first order of the format.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .model import Image


class NetpbmError(Exception):
    """Base class for netpbm codec failures."""


class UnsupportedFormatError(NetpbmError):
    """Magic number is not binary PGM (P5) or binary PPM (P6)."""


class MalformedHeaderError(NetpbmError):
    """Header tokens are missing, non-numeric, or out of range."""


class TruncatedPayloadError(NetpbmError):
    """Pixel payload is shorter than the header promises."""


_WHITESPACE = b" \t\n\r\x0b\x0c"


def _next_token(data: bytes, pos: int) -> tuple[bytes, int]:
    """Return the next header token, skipping whitespace and # comments."""
    n = len(data)
    while pos < n:
        c = data[pos : pos + 1]
        if c in (b"#",):
            while pos < n and data[pos : pos + 1] != b"\n":
                pos += 1
        elif c in _WHITESPACE:
            pos += 1
        else:
            break
    start = pos
    while pos < n and data[pos : pos + 1] not in _WHITESPACE and data[pos : pos + 1] != b"#":
        pos += 1
    if start == pos:
        raise MalformedHeaderError("header ended before width/height/maxval were read")
    return data[start:pos], pos


def _parse_header(data: bytes) -> tuple[str, int, int, int, int]:
    """Parse magic, width, height, maxval; return them plus the payload offset."""
    if len(data) < 2:
        raise UnsupportedFormatError("file too short to hold a netpbm magic number")
    magic = data[:2]
    if magic not in (b"P5", b"P6"):
        raise UnsupportedFormatError(
            f"unsupported magic {magic!r}; only binary PGM (P5) and PPM (P6) are handled"
        )
    pos = 2
    fields = []
    for _ in range(3):
        token, pos = _next_token(data, pos)
        try:
            fields.append(int(token))
        except ValueError:
            raise MalformedHeaderError(f"expected an integer header field, got {token!r}") from None
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise MalformedHeaderError(f"non-positive dimensions {width}x{height}")
    if not 1 <= maxval <= 65535:
        raise MalformedHeaderError(f"maxval {maxval} outside [1, 65535]")
    if pos >= len(data) or data[pos : pos + 1] not in _WHITESPACE:
        raise MalformedHeaderError("missing single whitespace byte before the pixel payload")
    return magic.decode(), width, height, maxval, pos + 1


def _read_samples(data: bytes, offset: int, count: int, maxval: int) -> np.ndarray:
    two_byte = maxval > 255
    dtype = np.dtype(">u2") if two_byte else np.dtype("u1")
    need = count * dtype.itemsize
    payload = data[offset : offset + need]
    if len(payload) < need:
        raise TruncatedPayloadError(
            f"payload holds {len(payload)} bytes, header promises {need}"
        )
    raw = np.frombuffer(payload, dtype=dtype).astype(np.float64)
    if raw.size and raw.max() > maxval:
        raise NetpbmError(f"sample value {int(raw.max())} exceeds maxval {maxval}")
    return raw / maxval


def read_image(path) -> Union[Image, tuple[Image, Image, Image]]:
    """Read a binary netpbm file.

    P5 yields a single grayscale Image; P6 yields the (r, g, b) channel
    Images. Intensities are value/maxval.
    """
    data = Path(path).read_bytes()
    magic, width, height, maxval, offset = _parse_header(data)
    n = width * height
    if magic == "P5":
        return Image.from_flat(width, height, _read_samples(data, offset, n, maxval))
    interleaved = _read_samples(data, offset, 3 * n, maxval).reshape(n, 3)
    return tuple(Image.from_flat(width, height, interleaved[:, c]) for c in range(3))


def read_pgm(path) -> Image:
    """Read a P5 file; rejects P6 (use read_image for color)."""
    img = read_image(path)
    if not isinstance(img, Image):
        raise UnsupportedFormatError(f"{path} is color (P6); expected grayscale PGM")
    return img


def _quantize(flat: np.ndarray, maxval: int) -> np.ndarray:
    levels = np.rint(flat * maxval)
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    return levels.astype(dtype)


def _check_maxval(maxval: int) -> None:
    if maxval not in (255, 65535):
        raise ValueError(f"maxval must be 255 or 65535, got {maxval}")


def write_pgm(image: Image, path, maxval: int = 255) -> None:
    """Write a binary PGM, quantizing each pixel to round(v * maxval)."""
    _check_maxval(maxval)
    header = f"P5\n{image.width} {image.height}\n{maxval}\n".encode()
    Path(path).write_bytes(header + _quantize(image.flat, maxval).tobytes())


def write_ppm(channels: Sequence[Image], path, maxval: int = 255) -> None:
    """Write a binary PPM from three same-sized channel Images."""
    _check_maxval(maxval)
    r, g, b = channels
    if not (r.width == g.width == b.width and r.height == g.height == b.height):
        raise ValueError("channel images must share dimensions")
    header = f"P6\n{r.width} {r.height}\n{maxval}\n".encode()
    interleaved = np.column_stack([_quantize(c.flat, maxval) for c in (r, g, b)])
    Path(path).write_bytes(header + np.ascontiguousarray(interleaved).tobytes())


def write_image(image_or_channels, path, maxval: int = 255) -> None:
    """Dispatch: a single Image goes to PGM, a 3-sequence of Images to PPM."""
    if isinstance(image_or_channels, Image):
        write_pgm(image_or_channels, path, maxval)
    else:
        write_ppm(image_or_channels, path, maxval)
