"""Grid amplitude import/export: CSV and the compact BJSA binary format.

BJSA layout, all little-endian: 4-byte magic "BJSA", uint16 version, then
three float64 (n, omega0, half_span), then the n x n complex amplitude
row-major as interleaved (Re, Im) float64 pairs.
"""

import struct

import numpy as np

from .errors import ConfigError
from .jsa import FrequencyGrid, JointAmplitude

MAGIC = b"BJSA"
VERSION = 1

_HEADER = struct.Struct("<4sH3d")


def write_bjsa(ja, path):
    if ja.domain != "spectral":
        raise ConfigError("BJSA stores spectral-domain amplitudes only")
    g = ja.grid
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, float(g.n), g.omega0, g.half_span))
        fh.write(np.ascontiguousarray(ja.values, dtype="<c16").tobytes())


def read_bjsa(path):
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) < _HEADER.size:
            raise ConfigError("truncated BJSA header")
        magic, version, n_f, omega0, half_span = _HEADER.unpack(head)
        if magic != MAGIC:
            raise ConfigError("not a BJSA file")
        if version != VERSION:
            raise ConfigError(f"unsupported BJSA version {version}")
        n = int(round(n_f))
        data = np.frombuffer(fh.read(), dtype="<c16")
    if data.size != n * n:
        raise ConfigError(f"BJSA payload has {data.size} samples, expected {n * n}")
    grid = FrequencyGrid(omega0=omega0, half_span=half_span, n=n)
    return JointAmplitude(grid, data.reshape(n, n).copy(), domain="spectral")


def write_csv(ja, path):
    """Four columns (nu_s, nu_i, Re f, Im f) at 17 significant digits."""
    if ja.domain != "spectral":
        raise ConfigError("CSV export is for spectral-domain amplitudes")
    g = ja.grid
    nu = g.axis()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# omega0_rad_ps={g.omega0!r} half_span_rad_ps={g.half_span!r} n={g.n}\n")
        fh.write("nu_s,nu_i,re_f,im_f\n")
        for j in range(g.n):
            row = ja.values[j]
            for k in range(g.n):
                v = row[k]
                fh.write(f"{nu[j]:.17g},{nu[k]:.17g},{v.real:.17g},{v.imag:.17g}\n")


def read_csv(path):
    omega0 = 0.0
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline()
        if first.startswith("#"):
            for tok in first[1:].split():
                if tok.startswith("omega0_rad_ps="):
                    omega0 = float(tok.split("=", 1)[1])
            header = fh.readline()
        else:
            header = first
        if not header.lower().lstrip().startswith("nu_s"):
            raise ConfigError("CSV missing nu_s,nu_i,re_f,im_f header")
        data = np.loadtxt(fh, delimiter=",", dtype=float)
    if data.ndim != 2 or data.shape[1] != 4:
        raise ConfigError("CSV must have exactly four columns")
    nu_s = np.unique(data[:, 0])
    n = nu_s.size
    if n * n != data.shape[0]:
        raise ConfigError("CSV rows do not form a square grid")
    # the canonical axis starts at exactly -half_span, so -nu_min restores the
    # stored width bit for bit; 0.5 n (nu[1] - nu[0]) would pick up ulp noise
    grid = FrequencyGrid(omega0=omega0, half_span=-float(nu_s[0]), n=n)
    order = np.lexsort((data[:, 1], data[:, 0]))
    vals = (data[order, 2] + 1j * data[order, 3]).reshape(n, n)
    return JointAmplitude(grid, vals, domain="spectral")
