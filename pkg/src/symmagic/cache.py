"""Binary on-disk store of all symmetric Pauli representatives for one N.

Layout (little-endian)::

    b"PIPAULI1"  u32 version  u32 N  u64 record_count
    per record:  4 x u32 quadruple  f64 log_degeneracy  u32 nnz
                 nnz x (u32 row, u32 col, f64 re, f64 im)
"""
from __future__ import annotations

import os
import struct
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dicke import DickeState
from .pauli import (
    Quadruple,
    SymPauliMatrix,
    enumerate_quadruples,
    n_representatives,
    representative_matrix,
)

MAGIC = b"PIPAULI1"
FORMAT_VERSION = 1
HEADER = struct.Struct("<8sIIQ")
RECORD_HEAD = struct.Struct("<4IdI")
ENTRY_DTYPE = np.dtype([("row", "<u4"), ("col", "<u4"), ("re", "<f8"), ("im", "<f8")])


class CacheError(Exception):
    pass


class CacheMissingError(CacheError, FileNotFoundError):
    pass


class BadMagicError(CacheError):
    pass


class VersionMismatchError(CacheError):
    pass


class HeaderMismatchError(CacheError):
    pass


class TruncatedCacheError(CacheError):
    pass


@dataclass
class PauliCache:
    """All representatives for ``n_qubits``, entries concatenated CSR-style.

    Record ``i`` owns ``rows/cols/values[offsets[i]:offsets[i + 1]]``.
    """

    n_qubits: int
    quadruples: np.ndarray
    log_degeneracy: np.ndarray
    offsets: np.ndarray
    rows: np.ndarray
    cols: np.ndarray
    values: np.ndarray
    format_version: int = FORMAT_VERSION

    def __len__(self) -> int:
        return len(self.quadruples)

    @classmethod
    def from_matrices(cls, n_qubits: int, mats: list[SymPauliMatrix]) -> PauliCache:
        nnz = np.array([m.nnz for m in mats], dtype=np.int64)
        offsets = np.concatenate([[0], np.cumsum(nnz)])
        cat = lambda xs, dt: np.concatenate(xs).astype(dt) if xs else np.empty(0, dt)
        return cls(
            n_qubits=n_qubits,
            quadruples=np.array([m.quadruple for m in mats], dtype=np.uint32).reshape(-1, 4),
            log_degeneracy=np.array([m.log_degeneracy for m in mats], dtype=float),
            offsets=offsets,
            rows=cat([m.rows for m in mats], np.uint32),
            cols=cat([m.cols for m in mats], np.uint32),
            values=cat([m.values for m in mats], complex),
        )

    def record(self, i: int) -> SymPauliMatrix:
        s = slice(self.offsets[i], self.offsets[i + 1])
        return SymPauliMatrix(
            quadruple=Quadruple(*map(int, self.quadruples[i])),
            log_degeneracy=float(self.log_degeneracy[i]),
            rows=self.rows[s],
            cols=self.cols[s],
            values=self.values[s],
        )

    @property
    def records(self):
        for i in range(len(self)):
            yield self.record(i)

    def expectations(self, state: DickeState) -> np.ndarray:
        """Real ``<psi|P|psi>`` for every record, reduced with one bincount."""
        if state.n_qubits != self.n_qubits:
            raise ValueError(f"cache is for N={self.n_qubits}, state has N={state.n_qubits}")
        c = state.amplitudes
        terms = np.conj(c[self.rows]) * self.values * c[self.cols]
        owner = np.repeat(np.arange(len(self)), np.diff(self.offsets))
        re = np.bincount(owner, weights=terms.real, minlength=len(self))
        im = np.bincount(owner, weights=terms.imag, minlength=len(self))
        if len(im) and np.max(np.abs(im)) > 1e-10:
            raise ArithmeticError("non-real expectation value from cached operator")
        return re

    def identical_to(self, other: PauliCache) -> bool:
        """Bit-for-bit equality of every stored field."""
        return (
            self.n_qubits == other.n_qubits
            and self.format_version == other.format_version
            and all(
                np.array_equal(getattr(self, f), getattr(other, f))
                for f in ("quadruples", "log_degeneracy", "offsets", "rows", "cols")
            )
            and self.values.tobytes() == other.values.tobytes()
        )


def _build_chunk(quads: list[Quadruple]) -> list[SymPauliMatrix]:
    return [representative_matrix(q) for q in quads]


def build_cache(n_qubits: int, n_jobs: int = 1) -> PauliCache:
    """Compute every representative; parallel over quadruple chunks, order preserved."""
    quads = enumerate_quadruples(n_qubits)
    if n_jobs == 1:
        mats = _build_chunk(quads)
    else:
        from joblib import Parallel, delayed

        n_chunks = max(1, min(len(quads), 8 * abs(n_jobs)))
        chunks = [quads[i::n_chunks] for i in range(n_chunks)]
        parts = Parallel(n_jobs=n_jobs)(delayed(_build_chunk)(ch) for ch in chunks)
        mats = [None] * len(quads)
        for i, part in enumerate(parts):
            mats[i::n_chunks] = part
    return PauliCache.from_matrices(n_qubits, mats)


def cache_path(directory, n_qubits: int) -> Path:
    return Path(directory) / f"pauli_N{n_qubits:04d}.bin"


def default_cache_dir() -> Path:
    return Path(os.environ.get("CACHE_DIR", "cache"))


def cache_write(cache: PauliCache, path) -> Path:
    """Write atomically: temp file in the target directory, then rename."""
    path = Path(path)
    if not path.parent.is_dir():
        raise CacheError(f"directory {path.parent} does not exist")
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(HEADER.pack(MAGIC, cache.format_version, cache.n_qubits, len(cache)))
            for i in range(len(cache)):
                lo, hi = cache.offsets[i], cache.offsets[i + 1]
                fh.write(RECORD_HEAD.pack(
                    *map(int, cache.quadruples[i]), float(cache.log_degeneracy[i]), int(hi - lo)
                ))
                entries = np.empty(hi - lo, dtype=ENTRY_DTYPE)
                entries["row"] = cache.rows[lo:hi]
                entries["col"] = cache.cols[lo:hi]
                entries["re"] = cache.values[lo:hi].real
                entries["im"] = cache.values[lo:hi].imag
                fh.write(entries.tobytes())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def cache_read(n_qubits: int, path) -> PauliCache:
    path = Path(path)
    if not path.is_file():
        raise CacheMissingError(f"no cache file at {path}")
    buf = path.read_bytes()
    if len(buf) < HEADER.size:
        raise TruncatedCacheError(f"{path}: file shorter than its header")
    magic, version, N, count = HEADER.unpack_from(buf, 0)
    if magic != MAGIC:
        raise BadMagicError(f"{path}: bad magic header {magic!r}")
    if version != FORMAT_VERSION:
        raise VersionMismatchError(f"{path}: format version {version}, expected {FORMAT_VERSION}")
    if N != n_qubits:
        raise HeaderMismatchError(f"{path}: header/request mismatch (file N={N}, requested N={n_qubits})")
    if count != n_representatives(N):
        raise HeaderMismatchError(
            f"{path}: record count {count} != C(N+3, 3) = {n_representatives(N)}"
        )

    pos = HEADER.size
    quads = np.empty((count, 4), dtype=np.uint32)
    logdeg = np.empty(count)
    offsets = np.zeros(count + 1, dtype=np.int64)
    chunks = []
    for i in range(count):
        if pos + RECORD_HEAD.size > len(buf):
            raise TruncatedCacheError(f"{path}: truncated record {i} of {count}")
        *q, lg, nnz = RECORD_HEAD.unpack_from(buf, pos)
        pos += RECORD_HEAD.size
        end = pos + nnz * ENTRY_DTYPE.itemsize
        if end > len(buf):
            raise TruncatedCacheError(f"{path}: truncated record {i} of {count}")
        chunks.append(np.frombuffer(buf, dtype=ENTRY_DTYPE, count=nnz, offset=pos))
        quads[i], logdeg[i], offsets[i + 1] = q, lg, offsets[i] + nnz
        pos = end
    if pos != len(buf):
        raise TruncatedCacheError(f"{path}: {len(buf) - pos} trailing bytes after last record")
    entries = np.concatenate(chunks) if chunks else np.empty(0, ENTRY_DTYPE)
    values = np.empty(len(entries), dtype=complex)
    values.real, values.imag = entries["re"], entries["im"]
    return PauliCache(
        n_qubits=N,
        quadruples=quads,
        log_degeneracy=logdeg,
        offsets=offsets,
        rows=entries["row"].copy(),
        cols=entries["col"].copy(),
        values=values,
        format_version=version,
    )


def validate(path, n_qubits: int) -> bool:
    try:
        cache_read(n_qubits, path)
    except CacheError:
        return False
    return True
