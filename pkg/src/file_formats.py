#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Text formats for far-field matrices, indicator grids and retrieval profiles

.pfft (far-field matrix):
    #pfft v1
    #kind=complex|modulus
    #k=<decimal>
    #N=<int>
    #model=<tag>
    #tau=<re>,<im>        (optional)
    #z0=<x>,<y>           (optional)
    N data lines of N comma-separated fields; complex fields are <re>;<im>
All decimals carry 17 significant digits, so values round-trip bit for bit.
Files are written to a temporary sibling and moved into place.
"""

from pathlib import Path
from typing import Dict, List, Union
import json
import logging
import os
import tempfile

import numpy as np
from tenacity import retry, retry_if_exception_type, stop_after_attempt, wait_exponential

from core.errors import FormatError
from core.models import FORWARD_MODELS, FarFieldMatrix, GridField, PhaselessMatrix

activity_logger = logging.getLogger('activity')

FarField = Union[FarFieldMatrix, PhaselessMatrix]

MAGIC = '#pfft v1'
PGM_MAXVAL = 65535
PGM_VALUES_PER_LINE = 10
PROFILE_HEADER = 'angle,true_re,true_im,retrieved_re,retrieved_im'

_transient_io = retry(
    stop=stop_after_attempt(5),
    wait=wait_exponential(multiplier=0.1, min=0.1, max=2),
    retry=retry_if_exception_type((PermissionError, BlockingIOError, TimeoutError)),
    reraise=True,
)


def _num(value: float) -> str:
    return f"{value:.16e}"


@_transient_io
def _atomic_write(path: Path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    handle = tempfile.NamedTemporaryFile('w', encoding='utf-8', dir=path.parent,
                                         prefix=f'.{path.name}.', suffix='.tmp', delete=False)
    try:
        with handle:
            handle.write(text)
        os.replace(handle.name, path)
    except BaseException:
        Path(handle.name).unlink(missing_ok=True)
        raise


@_transient_io
def _read_text(path: Path) -> str:
    return Path(path).read_text(encoding='utf-8')


def format_far_field(m: FarField) -> str:
    """Serialized .pfft text"""
    complex_kind = isinstance(m, FarFieldMatrix)
    lines = [
        MAGIC,
        f"#kind={'complex' if complex_kind else 'modulus'}",
        f"#k={_num(m.k)}",
        f"#N={m.N}",
        f"#model={m.model}",
    ]
    if m.tau is not None:
        lines.append(f"#tau={_num(m.tau.real)},{_num(m.tau.imag)}")
    if m.z0 is not None:
        lines.append(f"#z0={_num(m.z0[0])},{_num(m.z0[1])}")
    for row in m.entries:
        if complex_kind:
            lines.append(','.join(f"{_num(v.real)};{_num(v.imag)}" for v in row))
        else:
            lines.append(','.join(_num(v) for v in row))
    return '\n'.join(lines) + '\n'


def write_far_field(m: FarField, path) -> Path:
    path = Path(path)
    _atomic_write(path, format_far_field(m))
    activity_logger.info(f"Wrote {m.N}x{m.N} {m.model} far field to {path}")
    return path


def _parse_pair(text: str, key: str):
    parts = text.split(',')
    if len(parts) != 2:
        raise FormatError(f"#{key} must hold two comma-separated numbers, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise FormatError(f"#{key} holds a non-numeric value: {text!r}") from exc


def parse_far_field(text: str) -> FarField:
    """Parse .pfft text into a FarFieldMatrix or PhaselessMatrix"""
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines or lines[0].strip() != MAGIC:
        raise FormatError(f"missing '{MAGIC}' header")

    header: Dict[str, str] = {}
    body: List[str] = []
    for line in lines[1:]:
        if line.startswith('#'):
            if body:
                raise FormatError("header line after data")
            key, sep, value = line[1:].partition('=')
            if not sep:
                raise FormatError(f"malformed header line {line!r}")
            header[key.strip()] = value.strip()
        else:
            body.append(line)

    for key in ('kind', 'k', 'N', 'model'):
        if key not in header:
            raise FormatError(f"missing #{key} header")
    kind = header['kind']
    if kind not in ('complex', 'modulus'):
        raise FormatError(f"unknown kind {kind!r}")
    if header['model'] not in FORWARD_MODELS:
        raise FormatError(f"unknown model tag {header['model']!r}")
    try:
        k = float(header['k'])
        N = int(header['N'])
    except ValueError as exc:
        raise FormatError(f"malformed #k or #N header: {exc}") from exc
    if N < 1:
        raise FormatError(f"#N must be positive, got {N}")

    tau = complex(*_parse_pair(header['tau'], 'tau')) if 'tau' in header else None
    z0 = _parse_pair(header['z0'], 'z0') if 'z0' in header else None

    if len(body) != N:
        raise FormatError(f"expected {N} data lines, found {len(body)}")
    entries = np.empty((N, N), dtype=complex if kind == 'complex' else float)
    for j, line in enumerate(body):
        fields = line.split(',')
        if len(fields) != N:
            raise FormatError(f"data line {j} has {len(fields)} fields, expected {N}")
        pairs = [field.split(';') for field in fields]
        if kind == 'complex' and any(len(pair) != 2 for pair in pairs):
            raise FormatError(f"data line {j} has a complex field without ';'")
        try:
            if kind == 'complex':
                entries[j] = [complex(float(re), float(im)) for re, im in pairs]
            else:
                entries[j] = [float(field) for field in fields]
        except ValueError as exc:
            raise FormatError(f"data line {j} holds a non-numeric field") from exc

    if kind == 'complex':
        return FarFieldMatrix(entries, k, header['model'], tau, z0)
    return PhaselessMatrix(entries, k, header['model'], tau, z0)


def read_far_field(path) -> FarField:
    return parse_far_field(_read_text(Path(path)))


def pgm_levels(values: np.ndarray) -> np.ndarray:
    """Affine map min -> 0, max -> 65535; a constant field maps to 0"""
    lo, hi = float(np.min(values)), float(np.max(values))
    if hi <= lo:
        return np.zeros(values.shape, dtype=int)
    return np.rint((values - lo) / (hi - lo) * PGM_MAXVAL).astype(int)


def format_grid(g: GridField, fmt: str = 'csv') -> str:
    if fmt == 'csv':
        lines = ['x,y,value']
        x_axis, y_axis = g.spec.x_axis, g.spec.y_axis
        for row, y in enumerate(y_axis):
            for column, x in enumerate(x_axis):
                lines.append(f"{_num(x)},{_num(y)},{_num(g.values[row, column])}")
        return '\n'.join(lines) + '\n'
    if fmt == 'pgm':
        rows, columns = g.values.shape
        levels = pgm_levels(g.values)
        lines = ['P2', f'{columns} {rows}', str(PGM_MAXVAL)]
        # top image row is the largest y
        for row in range(rows - 1, -1, -1):
            row_levels = levels[row]
            for start in range(0, columns, PGM_VALUES_PER_LINE):
                lines.append(' '.join(str(v) for v in row_levels[start:start + PGM_VALUES_PER_LINE]))
        return '\n'.join(lines) + '\n'
    raise FormatError(f"unknown grid format {fmt!r}; expected 'csv' or 'pgm'")


def write_grid(g: GridField, path, fmt: str = 'csv') -> Path:
    path = Path(path)
    _atomic_write(path, format_grid(g, fmt))
    activity_logger.info(f"Wrote {g.values.shape[0]}x{g.values.shape[1]} grid ({fmt}) to {path}")
    return path


def write_profile(path, angles: np.ndarray, truth: np.ndarray, retrieved: np.ndarray) -> Path:
    """Per-angle comparison of a true and a retrieved far-field column"""
    angles, truth, retrieved = np.asarray(angles), np.asarray(truth), np.asarray(retrieved)
    if not (angles.shape == truth.shape == retrieved.shape):
        raise FormatError("profile arrays must have equal length")
    lines = [PROFILE_HEADER]
    for angle, a, b in zip(angles, truth, retrieved):
        lines.append(','.join(_num(v) for v in (angle, a.real, a.imag, b.real, b.imag)))
    path = Path(path)
    _atomic_write(path, '\n'.join(lines) + '\n')
    return path


def write_manifest(path, manifest: Dict) -> Path:
    """JSON run manifest"""
    path = Path(path)
    _atomic_write(path, json.dumps(manifest, indent=2, ensure_ascii=False, default=str) + '\n')
    activity_logger.info(f"Run manifest saved to {path}")
    return path
