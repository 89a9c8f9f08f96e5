"""Terminated rate-1/2 convolutional code with rate matching, CRC-16 and max-log BCJR.

Generators are given in octal with the most significant bit tapping the
current input. Rate matching picks mother-code positions ``floor(i * M / E)``
for ``E <= M`` (evenly spread puncturing) and cycles ``i mod M`` for
``E > M`` (repetition); the dematcher sums LLRs that land on the same
position and leaves punctured positions at zero.
"""

from __future__ import annotations

import binascii
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .._accel import NUMBA_ENABLED, njit

CRC_BITS = 16
LLR_CLAMP = 40.0


class RateMatchError(ValueError):
    """The requested message does not fit the rate-matched codeword."""


def crc16(bits: np.ndarray) -> np.ndarray:
    """CRC-16/CCITT (polynomial 0x1021, initial value 0) of a bit vector, MSB first."""
    val = binascii.crc_hqx(np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes(), 0)
    return ((val >> np.arange(15, -1, -1)) & 1).astype(np.uint8)


def attach_crc(bits: np.ndarray) -> np.ndarray:
    return np.concatenate([np.asarray(bits, dtype=np.uint8), crc16(bits)])


def check_crc(bits: np.ndarray) -> bool:
    return bool(np.array_equal(crc16(bits[:-CRC_BITS]), bits[-CRC_BITS:]))


def _parity(x: int) -> int:
    return bin(x).count("1") & 1


@dataclass(frozen=True)
class ConvCode:
    """Feedforward rate-1/n convolutional code, zero-tail terminated."""

    generators: tuple = (0o133, 0o171)
    constraint_length: int = 7

    def __post_init__(self):
        if self.constraint_length < 2:
            raise ValueError("constraint length must be at least 2")
        for g in self.generators:
            if not 0 < g < (1 << self.constraint_length):
                raise ValueError(f"generator {oct(g)} does not fit constraint length {self.constraint_length}")

    @property
    def memory(self) -> int:
        return self.constraint_length - 1

    @property
    def n_states(self) -> int:
        return 1 << self.memory

    @property
    def n_out(self) -> int:
        return len(self.generators)

    def mother_length(self, k: int) -> int:
        return self.n_out * (k + self.memory)

    @cached_property
    def trellis(self):
        """``(next_state, outputs)`` of shapes ``(S, 2)`` and ``(S, 2, n_out)``."""
        m = self.memory
        nxt = np.zeros((self.n_states, 2), dtype=np.int64)
        out = np.zeros((self.n_states, 2, self.n_out), dtype=np.int64)
        for s in range(self.n_states):
            for u in (0, 1):
                reg = (u << m) | s
                nxt[s, u] = reg >> 1
                out[s, u] = [_parity(reg & g) for g in self.generators]
        return nxt, out

    def encode(self, bits: np.ndarray) -> np.ndarray:
        nxt, out = self.trellis
        u = np.concatenate([np.asarray(bits, dtype=np.int64), np.zeros(self.memory, dtype=np.int64)])
        coded = np.empty((u.size, self.n_out), dtype=np.uint8)
        s = 0
        for t, b in enumerate(u):
            coded[t] = out[s, b]
            s = nxt[s, b]
        return coded.ravel()

    def decode(self, llr: np.ndarray, k: int, use_numba: bool | None = None) -> np.ndarray:
        """Max-log a-posteriori LLRs of the ``k`` information bits (positive favors 0)."""
        llr = np.asarray(llr, dtype=np.float64).reshape(k + self.memory, self.n_out)
        nxt, out = self.trellis
        use = NUMBA_ENABLED if use_numba is None else use_numba
        fn = _bcjr_numba if use else _bcjr_numpy
        return fn(llr, nxt, out.astype(np.float64))[:k]


def _branch_metrics(llr, out):
    # +L/2 for a 0 output, -L/2 for a 1: metric[t, s, u]
    sign = 1.0 - 2.0 * out
    return 0.5 * np.einsum("to,suo->tsu", llr, sign)


def _bcjr_numpy(llr, nxt, out):
    t_len = llr.shape[0]
    n_states = nxt.shape[0]
    gamma = _branch_metrics(llr, out)
    neg = -1e300
    alpha = np.full((t_len + 1, n_states), neg)
    alpha[0, 0] = 0.0
    dst = nxt.ravel()
    for t in range(t_len):
        cand = alpha[t][:, None] + gamma[t]
        a = np.full(n_states, neg)
        np.maximum.at(a, dst, cand.ravel())
        alpha[t + 1] = a - a.max()
    beta = np.full(n_states, neg)
    beta[0] = 0.0
    out_llr = np.empty(t_len)
    for t in range(t_len - 1, -1, -1):
        m = alpha[t][:, None] + gamma[t] + beta[nxt]
        out_llr[t] = m[:, 0].max() - m[:, 1].max()
        b = (gamma[t] + beta[nxt]).max(axis=1)
        beta = b - b.max()
    return out_llr


@njit
def _bcjr_numba(llr, nxt, out):
    t_len, n_out = llr.shape
    n_states = nxt.shape[0]
    neg = -1e300
    gamma = np.empty((t_len, n_states, 2))
    for t in range(t_len):
        for s in range(n_states):
            for u in range(2):
                acc = 0.0
                for o in range(n_out):
                    acc += llr[t, o] * (0.5 - out[s, u, o])
                gamma[t, s, u] = acc
    alpha = np.full((t_len + 1, n_states), neg)
    alpha[0, 0] = 0.0
    for t in range(t_len):
        for s in range(n_states):
            a = alpha[t, s]
            if a <= neg:
                continue
            for u in range(2):
                v = a + gamma[t, s, u]
                d = nxt[s, u]
                if v > alpha[t + 1, d]:
                    alpha[t + 1, d] = v
        mx = alpha[t + 1].max()
        for s in range(n_states):
            alpha[t + 1, s] -= mx
    beta = np.full(n_states, neg)
    beta[0] = 0.0
    nb = np.empty(n_states)
    res = np.empty(t_len)
    for t in range(t_len - 1, -1, -1):
        best0 = neg
        best1 = neg
        for s in range(n_states):
            v0 = gamma[t, s, 0] + beta[nxt[s, 0]]
            v1 = gamma[t, s, 1] + beta[nxt[s, 1]]
            if alpha[t, s] + v0 > best0:
                best0 = alpha[t, s] + v0
            if alpha[t, s] + v1 > best1:
                best1 = alpha[t, s] + v1
            nb[s] = max(v0, v1)
        res[t] = best0 - best1
        mx = nb.max()
        for s in range(n_states):
            beta[s] = nb[s] - mx
    return res


@dataclass(frozen=True)
class RateMatcher:
    """Fixed puncturing or repetition pattern from ``mother`` to ``target`` positions."""

    mother: int
    target: int

    @cached_property
    def positions(self) -> np.ndarray:
        i = np.arange(self.target, dtype=np.int64)
        if self.target <= self.mother:
            return (i * self.mother) // self.target
        return i % self.mother

    def match(self, coded: np.ndarray) -> np.ndarray:
        return np.asarray(coded)[self.positions]

    def dematch(self, llr: np.ndarray) -> np.ndarray:
        acc = np.zeros(self.mother)
        np.add.at(acc, self.positions, llr)
        return acc


@dataclass(frozen=True)
class MessageCodec:
    """Message bits + CRC -> terminated convolutional codeword -> rate matched -> interleaved."""

    info_bits: int
    coded_bits: int
    code: ConvCode = ConvCode()
    crc_bits: int = CRC_BITS
    interleaver: np.ndarray | None = None

    def __post_init__(self):
        if self.crc_bits not in (0, CRC_BITS):
            raise ValueError(f"crc_bits must be 0 or {CRC_BITS}")
        if self.info_bits < 1:
            raise RateMatchError("a message needs at least one information bit")
        k = self.info_bits + self.crc_bits
        # a punctured code needs more coded bits than trellis inputs to be decodable at all
        if self.coded_bits <= k + self.code.memory:
            raise RateMatchError(f"{k} message bits do not fit {self.coded_bits} coded bits at code rate < 1")
        if self.interleaver is not None and sorted(self.interleaver.tolist()) != list(range(self.coded_bits)):
            raise ValueError("interleaver must be a permutation of the coded positions")

    @property
    def k(self) -> int:
        return self.info_bits + self.crc_bits

    @cached_property
    def matcher(self) -> RateMatcher:
        return RateMatcher(self.code.mother_length(self.k), self.coded_bits)

    def encode(self, info: np.ndarray) -> np.ndarray:
        bits = attach_crc(info) if self.crc_bits else np.asarray(info, dtype=np.uint8)
        c = self.matcher.match(self.code.encode(bits))
        return c if self.interleaver is None else c[self.interleaver]

    def decode(self, llr: np.ndarray):
        """``(info bits, crc ok)`` from channel LLRs in transmission order."""
        llr = np.asarray(llr, dtype=np.float64)
        if self.interleaver is not None:
            deint = np.empty_like(llr)
            deint[self.interleaver] = llr
            llr = deint
        post = self.code.decode(self.matcher.dematch(llr), self.k)
        bits = (post < 0).astype(np.uint8)
        ok = check_crc(bits) if self.crc_bits else True
        return bits[: self.info_bits], ok
