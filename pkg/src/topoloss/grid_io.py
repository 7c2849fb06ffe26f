"""Bit-exact file I/O for likelihood maps and masks.

Supported formats: PGM (P2 ASCII and P5 binary, 8- or 16-bit) and CSV of
reals.  PGM pixel v maps to v / maxval; CSV values are used verbatim.
"""

from __future__ import annotations

import os

import numpy as np

from .grid import BinaryMask, LikelihoodMap, ValidationError

__all__ = ["ParseError", "load_map", "save_map"]


class ParseError(ValueError):
    """Malformed input file; carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class _Scanner:
    """Tokenizer for PGM headers / P2 bodies, tracking byte offsets."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def skip_separators(self):
        while self.pos < len(self.data):
            b = self.data[self.pos]
            if b in b" \t\r\n":
                self.pos += 1
            elif b == ord("#"):
                while self.pos < len(self.data) and self.data[self.pos] not in b"\r\n":
                    self.pos += 1
            else:
                return

    def token(self) -> bytes:
        self.skip_separators()
        if self.pos >= len(self.data):
            raise ParseError("unexpected end of file", self.pos)
        start = self.pos
        while self.pos < len(self.data) and self.data[self.pos] not in b" \t\r\n":
            self.pos += 1
        return self.data[start:self.pos]

    def integer(self, what: str) -> int:
        self.skip_separators()
        start = self.pos
        tok = self.token()
        try:
            return int(tok)
        except ValueError:
            raise ParseError(f"expected integer {what}, got {tok!r}", start) from None


def _parse_pgm(data: bytes) -> np.ndarray:
    sc = _Scanner(data)
    magic = sc.token()
    if magic not in (b"P2", b"P5"):
        raise ParseError(f"not a P2/P5 PGM (magic {magic!r})", 0)
    width = sc.integer("width")
    height = sc.integer("height")
    maxval = sc.integer("maxval")
    if width < 1 or height < 1:
        raise ParseError(f"bad dimensions {width}x{height}", sc.pos)
    if not 0 < maxval < 65536:
        raise ParseError(f"maxval {maxval} out of range", sc.pos)

    n = width * height
    if magic == b"P2":
        raw = np.empty(n, dtype=np.uint32)
        for i in range(n):
            start = sc.pos
            v = sc.integer("pixel")
            if v < 0 or v > maxval:
                raise ParseError(f"pixel value {v} exceeds maxval {maxval}", start)
            raw[i] = v
    else:
        # P5: exactly one whitespace byte after maxval, then binary samples.
        if sc.pos >= len(data) or data[sc.pos] not in b" \t\r\n":
            raise ParseError("missing separator after maxval", sc.pos)
        sc.pos += 1
        bpp = 1 if maxval < 256 else 2
        need = n * bpp
        body = data[sc.pos:sc.pos + need]
        if len(body) < need:
            raise ParseError(
                f"truncated pixel data: need {need} bytes, have {len(body)}",
                sc.pos + len(body))
        dtype = np.dtype(">u2") if bpp == 2 else np.uint8
        raw = np.frombuffer(body, dtype=dtype).astype(np.uint32)
        bad = np.nonzero(raw > maxval)[0]
        if bad.size:
            raise ParseError(
                f"pixel value {int(raw[bad[0]])} exceeds maxval {maxval}",
                sc.pos + int(bad[0]) * bpp)
    return raw.reshape(height, width) / float(maxval)


def _parse_csv(data: bytes) -> np.ndarray:
    rows = []
    offset = 0
    width = None
    for line in data.splitlines(keepends=True):
        stripped = line.strip()
        if stripped:
            cells = stripped.split(b",")
            try:
                row = [float(c) for c in cells]
            except ValueError:
                raise ParseError("malformed CSV number", offset) from None
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ParseError(
                    f"ragged CSV row: {len(row)} columns, expected {width}", offset)
            rows.append(row)
        offset += len(line)
    if not rows:
        raise ParseError("empty CSV file", 0)
    return np.array(rows, dtype=np.float64)


def load_map(path: str | os.PathLike, kind: str = "likelihood"):
    """Load a PGM or CSV grid as a LikelihoodMap or BinaryMask.

    kind="mask" additionally requires every value to be exactly 0 or 1
    after the maxval mapping.
    """
    if kind not in ("likelihood", "mask"):
        raise ValidationError(f"kind must be 'likelihood' or 'mask', got {kind!r}")
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:2] in (b"P2", b"P5"):
        values = _parse_pgm(data)
    else:
        values = _parse_csv(data)
    if kind == "mask":
        if not np.isin(values, (0.0, 1.0)).all():
            raise ValidationError(
                f"{path}: mask contains values other than 0 and full scale")
        return BinaryMask(values.astype(np.uint8))
    return LikelihoodMap(values)


def save_map(m: LikelihoodMap | BinaryMask, path: str | os.PathLike,
             fmt: str = "pgm16") -> None:
    """Write a grid as 16-bit PGM (default), 8-bit PGM, or CSV.

    CSV round-trips exactly; pgm16 round-trips up to quantization 1/65535.
    """
    values = np.asarray(m.values, dtype=np.float64)
    if fmt == "csv":
        lines = "\n".join(
            ",".join(repr(v) for v in row) for row in values.tolist())
        with open(path, "w") as fh:
            fh.write(lines + "\n")
        return
    if fmt == "pgm16":
        maxval = 65535
    elif fmt == "pgm8":
        maxval = 255
    else:
        raise ValidationError(f"unknown format {fmt!r}")
    quantized = np.rint(values * maxval).astype(">u2" if maxval > 255 else np.uint8)
    header = f"P5\n{values.shape[1]} {values.shape[0]}\n{maxval}\n"
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(quantized.tobytes())
