"""Shard files, byte/symbol mapping, and the striped file pipeline.

Shard format: a fixed header followed by the node's column symbols, one
unsigned 16-bit little-endian word per symbol, stripe after stripe.  The
original byte length of the input rides at the tail of the encoded data
stream itself (inside the last stripes), so any single lost shard --
including node 0 -- can be regenerated from taps alone and files round
trip losslessly.

Byte/symbol mapping: for q >= 257 a byte is a symbol; otherwise 8-byte
chunks are re-encoded in base q (little-endian digits), which is injective
and reversible for any field order.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import struct
from dataclasses import dataclass

import numpy as np

from . import bulk, codec, linalg
from .codes import Assignment, CodeSpec, ConstructedCode, FAMILIES, load_code
from .errors import MissingShards, SpecHashMismatch, SsmdsError

MAGIC = b"SSMDS\x00\x00\x00"
VERSION = 1
HEADER_FMT = "<8s7HIBQ32s"
HEADER_SIZE = struct.calcsize(HEADER_FMT)
FAMILY_ID = {name: i + 1 for i, name in enumerate(FAMILIES)}
FAMILY_NAME = {i: name for name, i in FAMILY_ID.items()}


def spec_hash(spec: CodeSpec) -> bytes:
    return hashlib.sha256(spec.canonical_json().encode()).digest()


@dataclass
class ShardHeader:
    node_index: int
    n: int
    k: int
    r: int
    n_prime: int
    m: int
    q: int
    family: str
    payload_symbols: int
    spec_hash: bytes

    def pack(self) -> bytes:
        return struct.pack(HEADER_FMT, MAGIC, VERSION, self.node_index,
                           self.n, self.k, self.r, self.n_prime, self.m,
                           self.q, FAMILY_ID[self.family],
                           self.payload_symbols, self.spec_hash)

    @classmethod
    def unpack(cls, buf: bytes) -> "ShardHeader":
        (magic, version, node_index, n, k, r, n_prime, m, q, fam,
         payload, digest) = struct.unpack(HEADER_FMT, buf[:HEADER_SIZE])
        if magic != MAGIC:
            raise SsmdsError("bad shard magic")
        if version != VERSION:
            raise SsmdsError(f"unsupported shard version {version}")
        return cls(node_index, n, k, r, n_prime, m, q, FAMILY_NAME[fam],
                   payload, digest)

    @classmethod
    def for_code(cls, code: ConstructedCode, node: int, payload_symbols: int):
        s = code.spec
        return cls(node, s.n, s.k, s.r, s.n_prime, s.m, s.q, s.family,
                   payload_symbols, spec_hash(s))


# -- byte <-> symbol mapping ----------------------------------------------------


def symbols_per_chunk(q: int) -> int:
    s, cap = 1, q
    while cap < 2**64:
        cap *= q
        s += 1
    return s


def bytes_to_symbols(data: bytes, q: int) -> np.ndarray:
    if q >= 257:
        return np.frombuffer(data, dtype=np.uint8).astype(np.int64)
    if len(data) % 8:
        raise SsmdsError("chunked mapping needs a multiple of 8 bytes")
    chunks = np.frombuffer(data, dtype="<u8")
    s = symbols_per_chunk(q)
    out = np.empty((len(chunks), s), dtype=np.int64)
    qq = np.uint64(q)
    work = chunks.copy()
    for j in range(s):
        out[:, j] = (work % qq).astype(np.int64)
        work //= qq
    return out.reshape(-1)


def symbols_to_bytes(syms: np.ndarray, q: int) -> bytes:
    if q >= 257:
        return syms.astype(np.uint8).tobytes()
    s = symbols_per_chunk(q)
    if syms.size % s:
        raise SsmdsError("symbol stream is not chunk aligned")
    digits = syms.reshape(-1, s).astype(np.uint64)
    qq = np.uint64(q)
    vals = np.zeros(digits.shape[0], dtype=np.uint64)
    for j in range(s - 1, -1, -1):
        vals = vals * qq + digits[:, j]
    return vals.astype("<u8").tobytes()


def _stream_bytes_granularity(q: int, stripe_symbols: int) -> int:
    """Smallest byte count whose symbol image fills whole stripes."""
    if q >= 257:
        return stripe_symbols
    s = symbols_per_chunk(q)
    chunks = stripe_symbols // math.gcd(s, stripe_symbols)
    return 8 * chunks


def frame_stream(data: bytes, q: int, stripe_symbols: int) -> np.ndarray:
    """Pad, append the length trailer, and map to whole stripes of symbols."""
    gran = _stream_bytes_granularity(q, stripe_symbols)
    total = max(gran, math.ceil((len(data) + 8) / gran) * gran)
    padded = data + b"\x00" * (total - len(data) - 8) + struct.pack("<Q", len(data))
    return bytes_to_symbols(padded, q)


def unframe_stream(syms: np.ndarray, q: int) -> bytes:
    raw = symbols_to_bytes(syms, q)
    (length,) = struct.unpack("<Q", raw[-8:])
    if length > len(raw) - 8:
        raise SsmdsError("corrupt length trailer")
    return raw[:length]


# -- bundle on disk ---------------------------------------------------------------


def write_bundle(path: str, code: ConstructedCode) -> None:
    os.makedirs(path, exist_ok=True)
    with open(os.path.join(path, "code.json"), "w") as fh:
        fh.write(code.spec.canonical_json())
    with open(os.path.join(path, "coefficients.json"), "w") as fh:
        fh.write(code.assignment.to_json())


def load_bundle(path: str) -> ConstructedCode:
    with open(os.path.join(path, "code.json")) as fh:
        spec = CodeSpec.from_json(fh.read())
    with open(os.path.join(path, "coefficients.json")) as fh:
        assignment = Assignment.from_json(fh.read())
    return load_code(spec, assignment)


# -- shard files --------------------------------------------------------------------


def shard_path(shard_dir: str, node: int) -> str:
    return os.path.join(shard_dir, f"shard_{node:03d}.ssmds")


def write_shard(shard_dir: str, header: ShardHeader, symbols: np.ndarray) -> None:
    os.makedirs(shard_dir, exist_ok=True)
    with open(shard_path(shard_dir, header.node_index), "wb") as fh:
        fh.write(header.pack())
        fh.write(symbols.astype("<u2").tobytes())


def read_shard(path: str) -> tuple[ShardHeader, np.ndarray]:
    with open(path, "rb") as fh:
        header = ShardHeader.unpack(fh.read(HEADER_SIZE))
        payload = np.frombuffer(fh.read(), dtype="<u2").astype(np.int64)
    if payload.size != header.payload_symbols:
        raise SsmdsError(f"{path}: payload truncated")
    return header, payload


def present_shards(shard_dir: str, n: int) -> dict[int, str]:
    found = {}
    for i in range(n):
        p = shard_path(shard_dir, i)
        if os.path.exists(p):
            found[i] = p
    return found


def _check_hash(header: ShardHeader, expected: bytes, path: str):
    if header.spec_hash != expected:
        raise SpecHashMismatch(f"{path} was written under a different code spec")


# -- striped pipeline --------------------------------------------------------------


def _parity_generator(code: ConstructedCode) -> np.ndarray:
    """rN x kN map from stacked data columns to stacked parity columns."""
    k = code.spec.k
    data_grid = linalg.block([[code.block_mat(t, i) for i in range(k)]
                              for t in range(code.r)])
    parity = code.sub_block_mat(range(k, code.n))
    gen = linalg.invert(parity).mul(data_grid)
    f = code.field
    return np.array([[f.neg(v) for v in row] for row in gen.data], dtype=np.int64)


def encode_file(code: ConstructedCode, in_path: str, out_dir: str) -> dict:
    with open(in_path, "rb") as fh:
        data = fh.read()
    k, N, n = code.spec.k, code.N, code.n
    stream = frame_stream(data, code.spec.q, k * N)
    stripes = stream.size // (k * N)
    X = stream.reshape(stripes, k * N).T  # (kN, stripes)
    parities = bulk.np_matmul(code.field, _parity_generator(code), X)
    digest = spec_hash(code.spec)
    for i in range(n):
        if i < k:
            cols = X[i * N:(i + 1) * N, :]
        else:
            p = i - k
            cols = parities[p * N:(p + 1) * N, :]
        header = ShardHeader.for_code(code, i, stripes * N)
        write_shard(out_dir, header, cols.T.reshape(-1))
    return {"stripes": stripes, "shards": n, "symbols_per_shard": stripes * N,
            "input_bytes": len(data)}


def _load_columns(path: str, code: ConstructedCode) -> np.ndarray:
    header, payload = read_shard(path)
    _check_hash(header, spec_hash(code.spec), path)
    N = code.N
    return payload.reshape(-1, N).T  # (N, stripes)


def decode_file(code: ConstructedCode, shard_dir: str, out_path: str,
                use: list[int] | None = None) -> dict:
    k, N, n = code.spec.k, code.N, code.n
    found = present_shards(shard_dir, n)
    if use is None:
        if len(found) < k:
            raise MissingShards(f"need {k} shards, found {len(found)}")
        use = sorted(found)[:k]
    else:
        if len(set(use)) != k:
            raise MissingShards(f"need exactly {k} distinct shards")
        missing = [i for i in use if i not in found]
        if missing:
            raise MissingShards(f"requested shards not on disk: {missing}")
    cols = {i: _load_columns(found[i], code) for i in use}
    stripes = next(iter(cols.values())).shape[1]
    missing_data = [i for i in range(k) if i not in cols]
    if missing_data:
        sub = code.sub_block_mat(sorted(set(range(n)) - set(use)))
        inv = linalg.invert(sub)
        avail_grid = linalg.block([[code.block_mat(t, i) for i in use]
                                   for t in range(code.r)])
        f = code.field
        recon = inv.mul(avail_grid)
        recon_np = np.array([[f.neg(v) for v in row] for row in recon.data],
                            dtype=np.int64)
        avail_stack = np.vstack([cols[i] for i in use])
        rebuilt = bulk.np_matmul(f, recon_np, avail_stack)
        order = sorted(set(range(n)) - set(use))
        for i in missing_data:
            p = order.index(i)
            cols[i] = rebuilt[p * N:(p + 1) * N, :]
    stream = np.vstack([cols[i] for i in range(k)])  # (kN, stripes)
    data = unframe_stream(stream.T.reshape(-1), code.spec.q)
    with open(out_path, "wb") as fh:
        fh.write(data)
    return {"stripes": stripes, "used": list(use), "output_bytes": len(data)}


def kill_shard(shard_dir: str, node: int) -> None:
    path = shard_path(shard_dir, node)
    if not os.path.exists(path):
        raise MissingShards(f"shard {node} is already gone")
    os.remove(path)


def repair_shard(code: ConstructedCode, shard_dir: str, node: int) -> dict:
    """Regenerate one dead shard, reading only the declared download from
    every survivor, and rewrite it bit-identically."""
    n, N = code.n, code.N
    found = present_shards(shard_dir, n)
    helpers = sorted(set(range(n)) - {node})
    missing = [j for j in helpers if j not in found]
    if missing:
        raise MissingShards(
            f"single-failure repair needs all other shards; missing {missing}")
    plan = codec.plan_repair(code, node)
    f = code.field
    from .blocks import IdentityRows

    # per-helper delivery matrices and the linear repair operator
    weights = {}
    for t in range(code.r):
        for j in helpers:
            w = plan.system_inv.mul(_stack_embed(plan.transfers[(t, j)], t, code))
            prev = weights.get(j)
            weights[j] = w if prev is None else prev.add(w)
    column_acc = None
    stripes = None
    downloaded = 0
    for j in helpers:
        cols_j = _load_columns(found[j], code)
        stripes = cols_j.shape[1]
        proj = plan.repairs[j]
        if isinstance(proj, IdentityRows):
            delivered = cols_j
        else:
            proj_np = np.array(proj.data, dtype=np.int64)
            delivered = bulk.np_matmul(f, proj_np, cols_j)
        downloaded += delivered.shape[0]
        w_np = np.array([[f.neg(v) for v in row] for row in weights[j].data],
                        dtype=np.int64)
        part = bulk.np_matmul(f, w_np, delivered)
        column_acc = part if column_acc is None else bulk.np_add(f, column_acc, part)
    header = ShardHeader.for_code(code, node, stripes * N)
    write_shard(shard_dir, header, column_acc.T.reshape(-1))
    gamma, ratio = plan.gamma, plan.ratio
    assert downloaded == gamma
    return {
        "node": node,
        "gamma": gamma,
        "gamma_star": plan.gamma_star,
        "ratio": [ratio.numerator, ratio.denominator],
        "raw_symbols_per_stripe": (n - 1) * N,
        "per_helper": {str(j): plan.betas[j] for j in helpers},
        "stripes": stripes,
        "total_downloaded": gamma * stripes,
        "summary": (f"downloaded {gamma} of {(n - 1) * N} raw symbols per stripe "
                    f"(ratio {ratio.numerator}/{ratio.denominator} of optimal "
                    f"{plan.gamma_star})"),
    }


def _stack_embed(transfer, t: int, code: ConstructedCode):
    """Lift an N/r-row transfer block into the full stacked system height."""
    width = transfer.cols
    zero_above = linalg.Mat.zeros(code.field, t * (code.N // code.r), width)
    zero_below = linalg.Mat.zeros(code.field,
                                  (code.r - 1 - t) * (code.N // code.r), width)
    parts = [m for m in (zero_above, transfer, zero_below) if m.rows]
    return linalg.vstack(parts)
